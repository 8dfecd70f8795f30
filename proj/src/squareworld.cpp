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

#include "sce/squareworld.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sce::squareworld {

namespace {

// Snap an intensity into [lo, hi] on the 1/1024 grid, never leaving the band.
double quantize_into(double v, double lo, double hi) {
  double q = std::floor(v * kIntensityGrid) / kIntensityGrid;
  if (q < lo) q = std::ceil(lo * kIntensityGrid) / kIntensityGrid;
  if (q > hi) q = std::floor(hi * kIntensityGrid) / kIntensityGrid;
  return q;
}

double draw_band(Rng& rng, double lo, double hi) {
  return quantize_into(rng.uniform(lo, hi), lo, hi);
}

}  // namespace

void DatasetSpec::validate() const {
  if (n_samples <= 0) throw ConfigError("DatasetSpec: n_samples must be positive");
  if (height <= 0 || width <= 0) throw ConfigError("DatasetSpec: canvas must be positive");
  if (side <= 0) throw ConfigError("DatasetSpec: side must be positive");
  if (side > std::min(height, width))
    throw ConfigError("DatasetSpec: square side " + std::to_string(side) +
                      " does not fit a " + std::to_string(height) + "x" +
                      std::to_string(width) + " canvas");
  if (correlation < 0.0 || correlation > 1.0)
    throw ConfigError("DatasetSpec: correlation must be in [0,1]");
  if (pixel_noise < 0.0) throw ConfigError("DatasetSpec: pixel_noise must be >= 0");
}

Image render(const RenderSpec& rs, const SquareLatent& latent) {
  Image img(rs.height, rs.width, latent.bg_intensity);
  for (int r = latent.pos_y; r < latent.pos_y + rs.side; ++r)
    for (int c = latent.pos_x; c < latent.pos_x + rs.side; ++c)
      img.at(r, c) = latent.fg_intensity;
  return img;
}

Mask fg_mask_of(const RenderSpec& rs, const SquareLatent& latent) {
  Mask mask(rs.height, rs.width, 0);
  for (int r = latent.pos_y; r < latent.pos_y + rs.side; ++r)
    for (int c = latent.pos_x; c < latent.pos_x + rs.side; ++c)
      mask.at(r, c) = 1;
  return mask;
}

std::vector<SquareSample> generate_dataset(const DatasetSpec& spec) {
  spec.validate();
  RenderSpec rs{spec.height, spec.width, spec.side};
  std::vector<SquareSample> out;
  out.reserve(static_cast<size_t>(spec.n_samples));

  for (int i = 0; i < spec.n_samples; ++i) {
    Rng rng(derive_seed(spec.seed, "sample", {i}));
    SquareSample s;

    int label = static_cast<int>(rng.uniform_int(2));
    double fg = label == 1 ? draw_band(rng, kClass1Lo, kClass1Hi)
                           : draw_band(rng, kClass0Lo, kClass0Hi);
    double bg;
    if (rng.uniform() < spec.correlation) {
      // Poisoned draw: background from the same class band as the foreground.
      bg = label == 1 ? draw_band(rng, kClass1Lo, kClass1Hi)
                      : draw_band(rng, kClass0Lo, kClass0Hi);
    } else {
      bg = draw_band(rng, 0.0, 1.0);
    }
    s.latent.fg_intensity = fg;
    s.latent.bg_intensity = bg;
    s.latent.pos_x = static_cast<int>(rng.uniform_int(spec.width - spec.side + 1));
    s.latent.pos_y = static_cast<int>(rng.uniform_int(spec.height - spec.side + 1));
    s.label = label;

    s.image = render(rs, s.latent);
    s.fg_mask = fg_mask_of(rs, s.latent);
    if (spec.pixel_noise > 0.0) {
      for (double& v : s.image.px)
        v = std::clamp(v + rng.normal(0.0, spec.pixel_noise), 0.0, 1.0);
    }
    out.push_back(std::move(s));
  }
  return out;
}

Splits make_splits(int n, double train_frac, double val_frac) {
  if (n <= 0) throw ConfigError("make_splits: n must be positive");
  if (train_frac < 0 || val_frac < 0 || train_frac + val_frac > 1.0)
    throw ConfigError("make_splits: invalid fractions");
  int n_train = static_cast<int>(std::lround(train_frac * n));
  int n_val = static_cast<int>(std::lround(val_frac * n));
  Splits sp;
  for (int i = 0; i < n_train; ++i) sp.train.push_back(i);
  for (int i = n_train; i < n_train + n_val; ++i) sp.val.push_back(i);
  for (int i = n_train + n_val; i < n; ++i) sp.test.push_back(i);
  return sp;
}

SquareLatent encode(const Image& image, const RenderSpec& rs) {
  const int h = image.h, w = image.w, s = rs.side;
  const auto total_px = static_cast<double>(h) * w;
  const double sq_px = static_cast<double>(s) * s;

  // Integral image for O(1) window sums.
  std::vector<double> integral(static_cast<size_t>(h + 1) * (w + 1), 0.0);
  auto ii = [&](int r, int c) -> double& {
    return integral[static_cast<size_t>(r) * (w + 1) + c];
  };
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      ii(r + 1, c + 1) = image.at(r, c) + ii(r, c + 1) + ii(r + 1, c) - ii(r, c);
  double total = ii(h, w);

  double best = -1.0;
  SquareLatent latent;
  for (int x = 0; x + s <= w; ++x) {
    for (int y = 0; y + s <= h; ++y) {
      double in_sum = ii(y + s, x + s) - ii(y, x + s) - ii(y + s, x) + ii(y, x);
      double mean_in = in_sum / sq_px;
      double mean_out = (total - in_sum) / (total_px - sq_px);
      double contrast = std::abs(mean_in - mean_out);
      if (contrast > best) {
        best = contrast;
        latent.pos_x = x;
        latent.pos_y = y;
        latent.fg_intensity = mean_in;
        latent.bg_intensity = mean_out;
      }
    }
  }

  // Recompute the winning window's means by direct summation: the integral
  // image accumulates rounding over the whole canvas, direct sums do not, and
  // the noiseless round-trip contract is exact equality.
  double in_sum = 0.0;
  for (int r = latent.pos_y; r < latent.pos_y + s; ++r)
    for (int c = latent.pos_x; c < latent.pos_x + s; ++c) in_sum += image.at(r, c);
  double out_sum = 0.0;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) out_sum += image.at(r, c);
  out_sum -= in_sum;
  latent.fg_intensity = in_sum / sq_px;
  latent.bg_intensity = out_sum / (total_px - sq_px);
  return latent;
}

Image intervene(const RenderSpec& rs, const SquareLatent& latent,
                LatentFeature which, double value) {
  SquareLatent l = latent;
  switch (which) {
    case LatentFeature::kFgIntensity:
      if (value < 0.0 || value > 1.0)
        throw ConfigError("intervene: fg_intensity out of [0,1]");
      l.fg_intensity = value;
      break;
    case LatentFeature::kBgIntensity:
      if (value < 0.0 || value > 1.0)
        throw ConfigError("intervene: bg_intensity out of [0,1]");
      l.bg_intensity = value;
      break;
    case LatentFeature::kPosX: {
      int p = static_cast<int>(std::lround(value));
      if (p < 0 || p > rs.width - rs.side) throw ConfigError("intervene: pos_x out of range");
      l.pos_x = p;
      break;
    }
    case LatentFeature::kPosY: {
      int p = static_cast<int>(std::lround(value));
      if (p < 0 || p > rs.height - rs.side) throw ConfigError("intervene: pos_y out of range");
      l.pos_y = p;
      break;
    }
  }
  return render(rs, l);
}

namespace {

// 5x5 glyph: solid border, checkered interior.
constexpr int kGlyphSide = 5;
constexpr double kGlyph[kGlyphSide][kGlyphSide] = {
    {1, 1, 1, 1, 1},
    {1, 1, 0, 1, 1},
    {1, 0, 1, 0, 1},
    {1, 1, 0, 1, 1},
    {1, 1, 1, 1, 1},
};

}  // namespace

Mask tag_mask(int height, int width) {
  Mask mask(height, width, 0);
  int r0 = height - kGlyphSide - 1;
  int c0 = width - kGlyphSide - 1;
  for (int r = 0; r < kGlyphSide; ++r)
    for (int c = 0; c < kGlyphSide; ++c) mask.at(r0 + r, c0 + c) = 1;
  return mask;
}

Image inject_tag(const Image& image, double strength) {
  if (image.h < 8 || image.w < 8) throw ConfigError("inject_tag: canvas must be at least 8x8");
  if (strength < 0.0 || strength > 1.0) throw ConfigError("inject_tag: strength out of [0,1]");
  Image out = image;
  int r0 = image.h - kGlyphSide - 1;
  int c0 = image.w - kGlyphSide - 1;
  for (int r = 0; r < kGlyphSide; ++r)
    for (int c = 0; c < kGlyphSide; ++c) {
      double& v = out.at(r0 + r, c0 + c);
      v = (1.0 - strength) * v + strength * kGlyph[r][c];
    }
  return out;
}

std::array<double, 4> latent_ranges(const RenderSpec& rs) {
  return {1.0, 1.0, static_cast<double>(rs.width - rs.side),
          static_cast<double>(rs.height - rs.side)};
}

}  // namespace sce::squareworld
