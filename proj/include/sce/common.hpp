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

#ifndef SCE_COMMON_HPP_
#define SCE_COMMON_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sce {

// ---------------------------------------------------------------------------
// Error taxonomy. The CLI maps ConfigError to exit code 2 and DependencyError
// to exit code 3; everything else is a plain failure.
// ---------------------------------------------------------------------------

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DependencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DistillationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Hashing and seed derivation. All stage seeds flow from one global seed via
// fnv1a64(global_seed || label || indices), so any stage can be rerun in
// isolation and still reproduce bit-identically.
// ---------------------------------------------------------------------------

uint64_t fnv1a64(const void* data, size_t n, uint64_t h = 0xcbf29ce484222325ull);
uint64_t fnv1a64(std::string_view s);

uint64_t derive_seed(uint64_t base, std::string_view label);
uint64_t derive_seed(uint64_t base, std::string_view label,
                     std::initializer_list<int64_t> indices);

// ---------------------------------------------------------------------------
// Seeded RNG. The mt19937_64 engine is standard-specified and therefore
// portable; std::*_distribution is not, so all draw algorithms (53-bit
// uniforms, Box-Muller normals, modulo-rejection ints) are explicit here.
// ---------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1).
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer in [0, n). n must be > 0.
  int64_t uniform_int(int64_t n);
  // Standard normal via Box-Muller (pair-cached).
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  // Beta(a, b) for a, b > 0 (Johnk for small shapes, Marsaglia-Tsang gamma
  // ratio otherwise).
  double beta(double a, double b);

  uint64_t raw() { return gen_(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(static_cast<int64_t>(i)));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  double gamma(double shape);

  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// ---------------------------------------------------------------------------
// Grayscale image and binary mask, row-major doubles / bytes.
// ---------------------------------------------------------------------------

struct Image {
  int h = 0, w = 0;
  std::vector<double> px;

  Image() = default;
  Image(int h_, int w_, double fill = 0.0) : h(h_), w(w_), px(static_cast<size_t>(h_) * w_, fill) {}

  double& at(int r, int c) { return px[static_cast<size_t>(r) * w + c]; }
  double at(int r, int c) const { return px[static_cast<size_t>(r) * w + c]; }
  size_t size() const { return px.size(); }
  bool same_shape(const Image& o) const { return h == o.h && w == o.w; }
};

struct Mask {
  int h = 0, w = 0;
  std::vector<uint8_t> m;

  Mask() = default;
  Mask(int h_, int w_, uint8_t fill = 0) : h(h_), w(w_), m(static_cast<size_t>(h_) * w_, fill) {}

  uint8_t& at(int r, int c) { return m[static_cast<size_t>(r) * w + c]; }
  uint8_t at(int r, int c) const { return m[static_cast<size_t>(r) * w + c]; }
  size_t size() const { return m.size(); }
  size_t count() const;
};

double mean_abs_diff(const Image& a, const Image& b);

// ---------------------------------------------------------------------------
// Raw binary I/O. All array artifacts are little-endian float32, row-major;
// doubles are narrowed on write and widened on read.
// ---------------------------------------------------------------------------

void write_f32(const std::filesystem::path& path, const std::vector<double>& v);
void append_f32(std::vector<float>& sink, const std::vector<double>& v);
void write_f32_raw(const std::filesystem::path& path, const std::vector<float>& v);
std::vector<double> read_f32(const std::filesystem::path& path);

// 8-bit binary PGM (P5) dump, pixels clamped from [0,1].
void write_pgm(const std::filesystem::path& path, const Image& img);

// FNV-1a over a file's bytes; used to stamp and compare artifacts.
uint64_t checksum_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sce

#endif  // SCE_COMMON_HPP_
