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

#include "sce/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace sce {

uint64_t fnv1a64(const void* data, size_t n, uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t fnv1a64(std::string_view s) { return fnv1a64(s.data(), s.size()); }

uint64_t derive_seed(uint64_t base, std::string_view label) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(base >> (8 * i));
  uint64_t h = fnv1a64(buf, 8);
  return fnv1a64(label.data(), label.size(), h);
}

uint64_t derive_seed(uint64_t base, std::string_view label,
                     std::initializer_list<int64_t> indices) {
  uint64_t h = derive_seed(base, label);
  for (int64_t v : indices) {
    unsigned char buf[8];
    auto u = static_cast<uint64_t>(v);
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(u >> (8 * i));
    h = fnv1a64(buf, 8, h);
  }
  return h;
}

double Rng::uniform() {
  // 53 random bits into [0, 1).
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int64_t Rng::uniform_int(int64_t n) {
  auto un = static_cast<uint64_t>(n);
  uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  uint64_t v;
  do {
    v = gen_();
  } while (v >= limit);
  return static_cast<int64_t>(v % un);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

double Rng::gamma(double shape) {
  // Marsaglia-Tsang; shapes < 1 boosted via the power trick.
  if (shape < 1.0) {
    double u = 1.0 - uniform();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = 1.0 - uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

double Rng::beta(double a, double b) {
  double x = gamma(a);
  double y = gamma(b);
  return x / (x + y);
}

size_t Mask::count() const {
  size_t n = 0;
  for (uint8_t v : m) n += (v != 0);
  return n;
}

double mean_abs_diff(const Image& a, const Image& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.px.size(); ++i) s += std::abs(a.px[i] - b.px[i]);
  return a.px.empty() ? 0.0 : s / static_cast<double>(a.px.size());
}

void append_f32(std::vector<float>& sink, const std::vector<double>& v) {
  sink.reserve(sink.size() + v.size());
  for (double d : v) sink.push_back(static_cast<float>(d));
}

void write_f32_raw(const std::filesystem::path& path, const std::vector<float>& v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path.string());
  // Little-endian hosts only; this is asserted once here rather than swapped
  // per value.
  static_assert(sizeof(float) == 4);
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(float)));
  if (!out) throw InputError("short write: " + path.string());
}

void write_f32(const std::filesystem::path& path, const std::vector<double>& v) {
  std::vector<float> f;
  append_f32(f, v);
  write_f32_raw(path, f);
}

std::vector<double> read_f32(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw InputError("cannot open for reading: " + path.string());
  auto bytes = static_cast<size_t>(in.tellg());
  if (bytes % 4 != 0) throw InputError("file size not a multiple of 4: " + path.string());
  in.seekg(0);
  std::vector<float> f(bytes / 4);
  in.read(reinterpret_cast<char*>(f.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw InputError("short read: " + path.string());
  std::vector<double> v(f.begin(), f.end());
  return v;
}

void write_pgm(const std::filesystem::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path.string());
  out << "P5\n" << img.w << " " << img.h << "\n255\n";
  for (double v : img.px) {
    double c = std::clamp(v, 0.0, 1.0);
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(c * 255.0))));
  }
}

uint64_t checksum_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open for checksum: " + path.string());
  uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    h = fnv1a64(buf, static_cast<size_t>(in.gcount()), h);
    if (!in) break;
  }
  return h;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open for reading: " + path.string());
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw InputError("short write: " + path.string());
}

}  // namespace sce
