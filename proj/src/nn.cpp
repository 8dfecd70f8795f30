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

#include "sce/nn.hpp"

#include <cmath>

namespace sce::nn {

Tensor Tensor::from_image(const Image& img) {
  Tensor t(1, img.h, img.w);
  for (size_t i = 0; i < img.px.size(); ++i) t.data[static_cast<long>(i)] = img.px[i];
  return t;
}

Image Tensor::to_image() const {
  Image img(h, w);
  for (long i = 0; i < data.size(); ++i) img.px[static_cast<size_t>(i)] = data[i];
  return img;
}

double sigmoid(double z) {
  if (z >= 0.0) {
    double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double bce_with_logits(double logit, double target) {
  // softplus(z) - y z, stable for large |z|.
  return softplus(logit) - target * logit;
}

double act_value(Act act, const HybridActivation& hyb, double t) {
  switch (act) {
    case Act::kIdentity:
      return t;
    case Act::kRelu:
      return t > 0.0 ? t : 0.0;
    case Act::kLeakyRelu:
      return t > 0.0 ? t : hyb.leak * t;
    case Act::kSoftplus:
      return softplus(t);
    case Act::kSilu:
      return t * sigmoid(t);
    case Act::kHybrid: {
      double lrelu = t > 0.0 ? t : hyb.leak * t;
      double sp = softplus(hyb.beta * t) / hyb.beta;
      return hyb.alpha * lrelu + (1.0 - hyb.alpha) * sp;
    }
  }
  return t;
}

double act_slope(Act act, const HybridActivation& hyb, double t) {
  switch (act) {
    case Act::kIdentity:
      return 1.0;
    case Act::kRelu:
      return t > 0.0 ? 1.0 : 0.0;
    case Act::kLeakyRelu:
      return t > 0.0 ? 1.0 : hyb.leak;
    case Act::kSoftplus:
      return sigmoid(t);
    case Act::kSilu: {
      double s = sigmoid(t);
      return s * (1.0 + t * (1.0 - s));
    }
    case Act::kHybrid: {
      double dl = t > 0.0 ? 1.0 : hyb.leak;
      return hyb.alpha * dl + (1.0 - hyb.alpha) * sigmoid(hyb.beta * t);
    }
  }
  return 1.0;
}

Act act_from_string(const std::string& s) {
  if (s == "identity") return Act::kIdentity;
  if (s == "relu") return Act::kRelu;
  if (s == "leaky_relu") return Act::kLeakyRelu;
  if (s == "softplus") return Act::kSoftplus;
  if (s == "silu") return Act::kSilu;
  if (s == "hybrid") return Act::kHybrid;
  throw ConfigError("unknown activation: " + s);
}

std::string act_to_string(Act a) {
  switch (a) {
    case Act::kIdentity: return "identity";
    case Act::kRelu: return "relu";
    case Act::kLeakyRelu: return "leaky_relu";
    case Act::kSoftplus: return "softplus";
    case Act::kSilu: return "silu";
    case Act::kHybrid: return "hybrid";
  }
  return "identity";
}

void Conv2d::init(int in_ch_, int out_ch_, int k_, int stride_, int pad_, Rng& rng,
                  double scale) {
  in_ch = in_ch_;
  out_ch = out_ch_;
  k = k_;
  stride = stride_;
  pad = pad_;
  long fan_in = static_cast<long>(in_ch) * k * k;
  double std_dev = scale * std::sqrt(2.0 / static_cast<double>(fan_in));
  w.resize(out_ch, fan_in);
  for (long i = 0; i < w.size(); ++i) w.data()[i] = rng.normal(0.0, std_dev);
  b = Vec::Zero(out_ch);
}

ConvGrad Conv2d::make_grad() const {
  ConvGrad g;
  g.dw = RMat::Zero(w.rows(), w.cols());
  g.db = Vec::Zero(b.size());
  return g;
}

namespace {

void im2col(const Tensor& x, int k, int stride, int pad, RMat& col, int oh, int ow) {
  const long n = static_cast<long>(oh) * ow;
  col.resize(static_cast<long>(x.c) * k * k, n);
  for (int ic = 0; ic < x.c; ++ic) {
    for (int kr = 0; kr < k; ++kr) {
      for (int kc = 0; kc < k; ++kc) {
        long row = (static_cast<long>(ic) * k + kr) * k + kc;
        double* dst = col.data() + row * n;
        for (int oy = 0; oy < oh; ++oy) {
          int iy = oy * stride - pad + kr;
          for (int ox = 0; ox < ow; ++ox) {
            int ix = ox * stride - pad + kc;
            bool in = iy >= 0 && iy < x.h && ix >= 0 && ix < x.w;
            dst[static_cast<long>(oy) * ow + ox] = in ? x.at(ic, iy, ix) : 0.0;
          }
        }
      }
    }
  }
}

void col2im(const RMat& dcol, int c, int h, int w, int k, int stride, int pad,
            int oh, int ow, Tensor& dx) {
  dx = Tensor(c, h, w);
  const long n = static_cast<long>(oh) * ow;
  for (int ic = 0; ic < c; ++ic) {
    for (int kr = 0; kr < k; ++kr) {
      for (int kc = 0; kc < k; ++kc) {
        long row = (static_cast<long>(ic) * k + kr) * k + kc;
        const double* src = dcol.data() + row * n;
        for (int oy = 0; oy < oh; ++oy) {
          int iy = oy * stride - pad + kr;
          if (iy < 0 || iy >= h) continue;
          for (int ox = 0; ox < ow; ++ox) {
            int ix = ox * stride - pad + kc;
            if (ix < 0 || ix >= w) continue;
            dx.at(ic, iy, ix) += src[static_cast<long>(oy) * ow + ox];
          }
        }
      }
    }
  }
}

}  // namespace

Tensor Conv2d::forward(const Tensor& x, ConvCache* cache) const {
  if (x.c != in_ch) throw InputError("Conv2d: channel mismatch");
  int oh = out_h(x.h), ow = out_w(x.w);
  ConvCache local;
  ConvCache& cc = cache ? *cache : local;
  cc.in_h = x.h;
  cc.in_w = x.w;
  im2col(x, k, stride, pad, cc.col, oh, ow);
  Tensor y(out_ch, oh, ow);
  y.mat().noalias() = w * cc.col;
  y.mat().colwise() += b;
  return y;
}

Tensor Conv2d::backward(const Tensor& gy, const ConvCache& cache, ConvGrad* pg) const {
  if (pg) {
    pg->dw.noalias() += gy.mat() * cache.col.transpose();
    pg->db.noalias() += gy.mat().rowwise().sum();
  }
  RMat dcol = w.transpose() * gy.mat();
  Tensor dx;
  col2im(dcol, in_ch, cache.in_h, cache.in_w, k, stride, pad, gy.h, gy.w, dx);
  return dx;
}

void Dense::init(int in, int out, Rng& rng, double scale) {
  double std_dev = scale * std::sqrt(2.0 / static_cast<double>(in));
  w.resize(out, in);
  for (long i = 0; i < w.size(); ++i) w.data()[i] = rng.normal(0.0, std_dev);
  b = Vec::Zero(out);
}

Vec Dense::backward(const Vec& x, const Vec& gy, DenseGrad* pg) const {
  if (pg) {
    pg->dw.noalias() += gy * x.transpose();
    pg->db.noalias() += gy;
  }
  return w.transpose() * gy;
}

DenseGrad Dense::make_grad() const {
  DenseGrad g;
  g.dw = RMat::Zero(w.rows(), w.cols());
  g.db = Vec::Zero(b.size());
  return g;
}

Tensor act_forward(Act act, const HybridActivation& hyb, const Tensor& x) {
  Tensor y = x;
  for (long i = 0; i < y.data.size(); ++i) y.data[i] = act_value(act, hyb, x.data[i]);
  return y;
}

Tensor act_backward(Act act, const HybridActivation& hyb, const Tensor& pre,
                    const Tensor& gy) {
  Tensor gx = gy;
  for (long i = 0; i < gx.data.size(); ++i)
    gx.data[i] = gy.data[i] * act_slope(act, hyb, pre.data[i]);
  return gx;
}

Tensor upsample2(const Tensor& x) {
  Tensor y(x.c, x.h * 2, x.w * 2);
  for (int c = 0; c < x.c; ++c)
    for (int r = 0; r < x.h; ++r)
      for (int col = 0; col < x.w; ++col) {
        double v = x.at(c, r, col);
        y.at(c, 2 * r, 2 * col) = v;
        y.at(c, 2 * r, 2 * col + 1) = v;
        y.at(c, 2 * r + 1, 2 * col) = v;
        y.at(c, 2 * r + 1, 2 * col + 1) = v;
      }
  return y;
}

Tensor upsample2_backward(const Tensor& gy) {
  Tensor gx(gy.c, gy.h / 2, gy.w / 2);
  for (int c = 0; c < gx.c; ++c)
    for (int r = 0; r < gx.h; ++r)
      for (int col = 0; col < gx.w; ++col)
        gx.at(c, r, col) = gy.at(c, 2 * r, 2 * col) + gy.at(c, 2 * r, 2 * col + 1) +
                           gy.at(c, 2 * r + 1, 2 * col) + gy.at(c, 2 * r + 1, 2 * col + 1);
  return gx;
}

void SgdMomentum::step(Vec& params, const Vec& grad) {
  if (velocity.size() != params.size()) velocity = Vec::Zero(params.size());
  if (weight_decay > 0.0)
    velocity = momentum * velocity + grad + weight_decay * params;
  else
    velocity = momentum * velocity + grad;
  params -= lr * velocity;
}

void Adam::step(Vec& params, const Vec& grad) {
  if (m.size() != params.size()) {
    m = Vec::Zero(params.size());
    v = Vec::Zero(params.size());
  }
  ++t;
  m = beta1 * m + (1.0 - beta1) * grad;
  v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
  double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  params -= (lr / bc1) * m.cwiseQuotient(((v / bc2).cwiseSqrt().array() + eps).matrix());
}

}  // namespace sce::nn
