// Copyright 2026 The SCE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCE_SQUAREWORLD_HPP_
#define SCE_SQUAREWORLD_HPP_

#include <array>
#include <vector>

#include "sce/common.hpp"

namespace sce::squareworld {

// Ground-truth latent of a Square image: foreground / background intensity
// and the square's top-left pixel position (pos_x = column, pos_y = row).
struct SquareLatent {
  double fg_intensity = 0.0;
  double bg_intensity = 0.0;
  int pos_x = 0;
  int pos_y = 0;

  std::array<double, 4> as_array() const {
    return {fg_intensity, bg_intensity, static_cast<double>(pos_x),
            static_cast<double>(pos_y)};
  }
};

enum class LatentFeature { kFgIntensity = 0, kBgIntensity = 1, kPosX = 2, kPosY = 3 };

struct SquareSample {
  Image image;
  SquareLatent latent;
  int label = 0;  // 1 iff fg_intensity > 0.5
  Mask fg_mask;
};

struct DatasetSpec {
  int n_samples = 0;
  int height = 32;
  int width = 32;
  int side = 8;
  double correlation = 0.0;  // rho: P(bg drawn from fg's class band)
  double pixel_noise = 0.0;  // sigma of i.i.d. Gaussian pixel noise
  uint64_t seed = 0;

  void validate() const;
};

// Index partition of [0, n).
struct Splits {
  std::vector<int> train, val, test;
};

// Intensities are quantized to a 1/1024 grid so that window means in encode()
// are exact in double arithmetic and f32 storage is lossless.
constexpr int kIntensityGrid = 1024;

// Rendering geometry shared by render / intervene / encode.
struct RenderSpec {
  int height = 32;
  int width = 32;
  int side = 8;
};

// Class bands for the foreground intensity; the gap makes labels noiseless.
constexpr double kClass0Lo = 0.0, kClass0Hi = 0.4;
constexpr double kClass1Lo = 0.6, kClass1Hi = 1.0;

Image render(const RenderSpec& rs, const SquareLatent& latent);
Mask fg_mask_of(const RenderSpec& rs, const SquareLatent& latent);

// Deterministic dataset generation; per-sample sub-seeds keep samples
// independent of each other's draw counts.
std::vector<SquareSample> generate_dataset(const DatasetSpec& spec);

// Contiguous train/val/test partition of [0, n).
Splits make_splits(int n, double train_frac, double val_frac);

// Oracle latent encoder e: exhaustive best-contrast window search.
// Ties resolve to the lexicographically smallest (pos_x, pos_y).
SquareLatent encode(const Image& image, const RenderSpec& rs);

// Re-render with one latent coordinate replaced. Out-of-range values raise
// ConfigError. Position values are rounded to the nearest pixel.
Image intervene(const RenderSpec& rs, const SquareLatent& latent,
                LatentFeature which, double value);

// Copyright-tag glyph blended into the bottom-right corner with the given
// opacity. Footprint exposed via tag_mask().
Image inject_tag(const Image& image, double strength);
Mask tag_mask(int height, int width);

// Range widths used to normalize latent deltas so that intensities and
// positions are commensurable (fg, bg, x, y order).
std::array<double, 4> latent_ranges(const RenderSpec& rs);

}  // namespace sce::squareworld

#endif  // SCE_SQUAREWORLD_HPP_
