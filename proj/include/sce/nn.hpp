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

#ifndef SCE_NN_HPP_
#define SCE_NN_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sce/common.hpp"

namespace sce::nn {

using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

// CHW tensor of doubles. Channel-major row-major layout so a (c, h*w) row
// major matrix view aliases the buffer directly.
struct Tensor {
  int c = 0, h = 0, w = 0;
  Vec data;

  Tensor() = default;
  Tensor(int c_, int h_, int w_) : c(c_), h(h_), w(w_), data(Vec::Zero(static_cast<long>(c_) * h_ * w_)) {}

  long size() const { return data.size(); }
  double& at(int ch, int r, int col) { return data[(static_cast<long>(ch) * h + r) * w + col]; }
  double at(int ch, int r, int col) const { return data[(static_cast<long>(ch) * h + r) * w + col]; }

  Eigen::Map<RMat> mat() { return {data.data(), c, static_cast<long>(h) * w}; }
  Eigen::Map<const RMat> mat() const { return {data.data(), c, static_cast<long>(h) * w}; }

  static Tensor from_image(const Image& img);
  Image to_image() const;  // requires c == 1
};

// ---------------------------------------------------------------------------
// Activations
// ---------------------------------------------------------------------------

enum class Act { kIdentity, kRelu, kLeakyRelu, kSoftplus, kSilu, kHybrid };

// Blend of LeakyReLU and scaled Softplus:
//   a(t) = alpha * leaky(t) + (1 - alpha) * softplus(beta t) / beta.
// Its derivative is bounded below by alpha * leak everywhere.
struct HybridActivation {
  double alpha = 0.5;
  double leak = 0.1;
  double beta = 5.0;
};

double act_value(Act act, const HybridActivation& hyb, double t);
double act_slope(Act act, const HybridActivation& hyb, double t);

Act act_from_string(const std::string& s);
std::string act_to_string(Act a);

// ---------------------------------------------------------------------------
// Layers. Parameters live in the layer; gradients live in caller-owned
// mirrors, so const layers are safe to evaluate concurrently.
// ---------------------------------------------------------------------------

struct ConvCache {
  RMat col;  // (in_ch*k*k) x (oh*ow)
  int in_h = 0, in_w = 0;
};

struct ConvGrad {
  RMat dw;
  Vec db;
};

struct Conv2d {
  int in_ch = 0, out_ch = 0, k = 3, stride = 1, pad = 1;
  RMat w;  // out_ch x (in_ch*k*k)
  Vec b;

  void init(int in_ch_, int out_ch_, int k_, int stride_, int pad_, Rng& rng,
            double scale = 1.0);
  int out_h(int in_h) const { return (in_h + 2 * pad - k) / stride + 1; }
  int out_w(int in_w) const { return (in_w + 2 * pad - k) / stride + 1; }

  Tensor forward(const Tensor& x, ConvCache* cache) const;
  // gy is the gradient at this layer's output; returns the gradient at its
  // input. Parameter gradients are accumulated into *pg when non-null.
  Tensor backward(const Tensor& gy, const ConvCache& cache, ConvGrad* pg) const;

  ConvGrad make_grad() const;
  long param_count() const { return w.size() + b.size(); }
};

struct DenseGrad {
  RMat dw;
  Vec db;
};

struct Dense {
  RMat w;  // out x in
  Vec b;

  void init(int in, int out, Rng& rng, double scale = 1.0);
  Vec forward(const Vec& x) const { return w * x + b; }
  Vec backward(const Vec& x, const Vec& gy, DenseGrad* pg) const;

  DenseGrad make_grad() const;
  long param_count() const { return w.size() + b.size(); }
};

// Elementwise activation over a tensor; pre-activation values are the cache.
Tensor act_forward(Act act, const HybridActivation& hyb, const Tensor& x);
Tensor act_backward(Act act, const HybridActivation& hyb, const Tensor& pre,
                    const Tensor& gy);

// Nearest-neighbour 2x upsample and its adjoint.
Tensor upsample2(const Tensor& x);
Tensor upsample2_backward(const Tensor& gy);

// ---------------------------------------------------------------------------
// Flat-parameter optimizers. Models expose get/set of a flat parameter vector
// in a documented order; optimizers never look inside.
// ---------------------------------------------------------------------------

struct SgdMomentum {
  double lr = 0.05;
  double momentum = 0.9;
  double weight_decay = 0.0;
  Vec velocity;

  void step(Vec& params, const Vec& grad);
};

struct Adam {
  double lr = 1e-3;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  Vec m, v;
  long t = 0;

  void step(Vec& params, const Vec& grad);
};

// Numerically stable helpers shared across training code.
double sigmoid(double z);
double softplus(double z);
// Binary cross-entropy with logits against a (possibly soft) target in [0,1].
double bce_with_logits(double logit, double target);

}  // namespace sce::nn

#endif  // SCE_NN_HPP_
