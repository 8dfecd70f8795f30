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

#ifndef SCE_DIFFUSION_HPP_
#define SCE_DIFFUSION_HPP_

#include <vector>

#include "sce/nn.hpp"

namespace sce::diffusion {

using nn::Dense;
using nn::DenseGrad;
using nn::Conv2d;
using nn::ConvCache;
using nn::ConvGrad;
using nn::Tensor;
using nn::Vec;

// Forward-process schedule. beta and alpha_bar are 1-indexed through t, i.e.
// beta(t) == beta_[t-1]; alpha_bar(0) == 1 by convention.
struct NoiseSchedule {
  int t_steps = 0;
  std::vector<double> beta;
  std::vector<double> alpha_bar;

  static NoiseSchedule linear(int t_steps, double beta_lo, double beta_hi);
  void validate() const;

  double beta_at(int t) const { return beta[static_cast<size_t>(t) - 1]; }
  double alpha_bar_at(int t) const {
    return t == 0 ? 1.0 : alpha_bar[static_cast<size_t>(t) - 1];
  }
  // Posterior noise scale for the stochastic reverse step.
  double posterior_sigma(int t) const;
};

// Three-level U-shaped noise predictor with sinusoidal time embedding added
// channel-wise after each encoder conv.
struct UNetArch {
  int c1 = 8, c2 = 16, c3 = 32;
  int temb_dim = 16;
  int temb_hidden = 32;
  int in_h = 32, in_w = 32;
};

struct UNetCache {
  int t = 0;
  Tensor input;
  Vec temb_in, temb_pre1, temb_h, temb_pre2, temb;
  Tensor pre_in, post_in;      // conv_in level, 32x32
  Tensor pre_d1, post_d1;      // 16x16
  Tensor pre_d2, post_d2;      // 8x8
  Tensor pre_mid, post_mid;    // 8x8
  Tensor up1_in, pre_u1, post_u1, sum_u1;  // 16x16
  Tensor up2_in, pre_u2, post_u2, sum_u2;  // 32x32
  ConvCache cc_in, cc_d1, cc_d2, cc_mid, cc_u1, cc_u2, cc_out;
};

struct UNetGrad {
  ConvGrad conv_in, down1, down2, mid, up1, up2, out;
  DenseGrad temb1, temb2, proj1, proj2, proj3;
  void zero();
};

class UNet {
 public:
  UNet() = default;
  UNet(const UNetArch& arch, uint64_t init_seed);

  const UNetArch& arch() const { return arch_; }

  // Predicts the noise component of x at step t.
  Tensor forward(const Tensor& x, int t, UNetCache& cache) const;
  // Gradient w.r.t. the input; accumulates parameter and time-embedding
  // gradients into *pg when non-null.
  Tensor backward(const Tensor& gy, const UNetCache& cache, UNetGrad* pg) const;

  UNetGrad make_grad() const;
  long param_count() const;
  Vec get_params() const;
  void set_params(const Vec& flat);
  static Vec flatten_grad(const UNetGrad& g);

 private:
  Vec time_embedding(int t) const;

  UNetArch arch_;
  Dense temb1_, temb2_;          // sinusoidal -> hidden -> hidden
  Dense proj1_, proj2_, proj3_;  // hidden -> per-level channel biases
  Conv2d conv_in_, down1_, down2_, mid_, up1_, up2_, out_;
};

struct DiffusionModel {
  NoiseSchedule schedule;
  UNetArch arch;
  UNet net;
  uint64_t train_seed = 0;
};

struct ProjectionConfig {
  int t_in = 16;           // entry noise level; 0 makes project the identity
  bool stochastic = false; // stochastic reverse path (seeded) instead of posterior mean
  int grad_depth = -1;     // reverse steps that propagate gradients; -1 = all

  void validate(int t_steps) const;
};

struct DdpmTrainOptions {
  int epochs = 30;
  int batch = 32;
  double lr = 1e-3;
};

// Standard noise-prediction training (MSE against the drawn noise), Adam,
// deterministic given the seed.
DiffusionModel train_ddpm(const std::vector<const Image*>& images, int t_steps,
                          uint64_t seed, const DdpmTrainOptions& opts,
                          const UNetArch& arch,
                          std::vector<double>* loss_curve = nullptr);

// Forward noising q(z_t | x): sqrt(ab_t) x + sqrt(1-ab_t) eps.
Image noise(const DiffusionModel& m, const Image& x, int t, uint64_t seed);

// Tape recorded by project() so the chain can be differentiated with the
// noise path frozen.
struct ProjectionTape {
  int t_in = 0;
  int grad_depth = 0;
  double entry_scale = 1.0;
  std::vector<UNetCache> steps;  // reverse steps, in execution order t_in..1
};

// Noise to t_in, then t_in reverse denoising steps. With cfg.stochastic false
// the reverse path is the posterior mean, so the map is smooth and the tape
// yields exact gradients.
Image project(const DiffusionModel& m, const Image& x, const ProjectionConfig& cfg,
              uint64_t seed, ProjectionTape* tape = nullptr);
// Vector-Jacobian product through a recorded projection.
Image project_backward(const DiffusionModel& m, const ProjectionTape& tape,
                       const Image& grad_out);

// Masked reverse diffusion: pixels outside keep evolve as the noised factual
// x at every step and equal x bit-for-bit at the end; pixels inside keep
// evolve freely from z.
Image repaint(const DiffusionModel& m, const Image& z, const Image& x,
              const Mask& keep, int t_in, uint64_t seed);

// Unconditional ancestral sample, clipped to [0, 1].
Image sample(const DiffusionModel& m, uint64_t seed);

}  // namespace sce::diffusion

#endif  // SCE_DIFFUSION_HPP_
