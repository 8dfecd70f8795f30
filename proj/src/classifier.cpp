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

#include "sce/classifier.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace sce::nn {

void ClassifierGrad::zero() {
  for (auto& g : convs) {
    g.dw.setZero();
    g.db.setZero();
  }
  head.dw.setZero();
  head.db.setZero();
}

ClassifierNet::ClassifierNet(const ConvNetArch& arch, uint64_t init_seed)
    : arch_(arch), init_seed_(init_seed) {
  Rng rng(init_seed);
  int ch = 1, h = arch.in_h, w = arch.in_w;
  for (int out_ch : arch.channels) {
    Conv2d conv;
    conv.init(ch, out_ch, arch.ksize, arch.stride, arch.ksize / 2, rng);
    h = conv.out_h(h);
    w = conv.out_w(w);
    ch = out_ch;
    convs_.push_back(std::move(conv));
  }
  flat_dim_ = ch * h * w;
  head_.init(flat_dim_, 1, rng);
}

double ClassifierNet::logit(const Image& x) const {
  return forward_backward(x, 0.0, nullptr, nullptr);
}

double ClassifierNet::logit_grad(const Image& x, Image* gx) const {
  return forward_backward(x, 1.0, nullptr, gx);
}

double ClassifierNet::forward_backward(const Image& x, double dlogit,
                                       ClassifierGrad* pg, Image* gx) const {
  if (x.h != arch_.in_h || x.w != arch_.in_w)
    throw InputError("classifier: input shape mismatch");

  const size_t n_convs = convs_.size();
  std::vector<Tensor> pre(n_convs);   // pre-activation
  std::vector<Tensor> post(n_convs);  // post-activation
  std::vector<ConvCache> caches(n_convs);

  Tensor t = Tensor::from_image(x);
  for (size_t i = 0; i < n_convs; ++i) {
    pre[i] = convs_[i].forward(t, &caches[i]);
    post[i] = act_forward(arch_.act, arch_.hybrid, pre[i]);
    t = post[i];
  }
  Vec flat = t.data;
  double logit_value = (head_.w * flat + head_.b)(0);

  bool need_backward = dlogit != 0.0 || pg != nullptr || gx != nullptr;
  if (!need_backward) return logit_value;

  Vec gy(1);
  gy[0] = dlogit;
  DenseGrad* hd = pg ? &pg->head : nullptr;
  Vec gflat = head_.backward(flat, gy, hd);

  Tensor gt;
  if (n_convs > 0) {
    gt = Tensor(post.back().c, post.back().h, post.back().w);
    gt.data = gflat;
    for (size_t i = n_convs; i-- > 0;) {
      gt = act_backward(arch_.act, arch_.hybrid, pre[i], gt);
      ConvGrad* cg = pg ? &pg->convs[i] : nullptr;
      gt = convs_[i].backward(gt, caches[i], cg);
    }
  } else {
    gt = Tensor(1, arch_.in_h, arch_.in_w);
    gt.data = gflat;
  }
  if (gx) *gx = gt.to_image();
  return logit_value;
}

ClassifierGrad ClassifierNet::make_grad() const {
  ClassifierGrad g;
  for (const auto& conv : convs_) g.convs.push_back(conv.make_grad());
  g.head = head_.make_grad();
  return g;
}

long ClassifierNet::param_count() const {
  long n = 0;
  for (const auto& conv : convs_) n += conv.param_count();
  return n + head_.param_count();
}

Vec ClassifierNet::get_params() const {
  Vec flat(param_count());
  long pos = 0;
  for (const auto& conv : convs_) {
    std::copy(conv.w.data(), conv.w.data() + conv.w.size(), flat.data() + pos);
    pos += conv.w.size();
    std::copy(conv.b.data(), conv.b.data() + conv.b.size(), flat.data() + pos);
    pos += conv.b.size();
  }
  std::copy(head_.w.data(), head_.w.data() + head_.w.size(), flat.data() + pos);
  pos += head_.w.size();
  std::copy(head_.b.data(), head_.b.data() + head_.b.size(), flat.data() + pos);
  return flat;
}

void ClassifierNet::set_params(const Vec& flat) {
  if (flat.size() != param_count()) throw InputError("classifier: parameter count mismatch");
  long pos = 0;
  for (auto& conv : convs_) {
    std::copy(flat.data() + pos, flat.data() + pos + conv.w.size(), conv.w.data());
    pos += conv.w.size();
    std::copy(flat.data() + pos, flat.data() + pos + conv.b.size(), conv.b.data());
    pos += conv.b.size();
  }
  std::copy(flat.data() + pos, flat.data() + pos + head_.w.size(), head_.w.data());
  pos += head_.w.size();
  std::copy(flat.data() + pos, flat.data() + pos + head_.b.size(), head_.b.data());
}

Vec ClassifierNet::flatten_grad(const ClassifierGrad& g) {
  long n = 0;
  for (const auto& c : g.convs) n += c.dw.size() + c.db.size();
  n += g.head.dw.size() + g.head.db.size();
  Vec flat(n);
  long pos = 0;
  for (const auto& c : g.convs) {
    std::copy(c.dw.data(), c.dw.data() + c.dw.size(), flat.data() + pos);
    pos += c.dw.size();
    std::copy(c.db.data(), c.db.data() + c.db.size(), flat.data() + pos);
    pos += c.db.size();
  }
  std::copy(g.head.dw.data(), g.head.dw.data() + g.head.dw.size(), flat.data() + pos);
  pos += g.head.dw.size();
  std::copy(g.head.db.data(), g.head.db.data() + g.head.db.size(), flat.data() + pos);
  return flat;
}

double accuracy(const ClassifierNet& net, const std::vector<const Image*>& xs,
                const std::vector<int>& labels) {
  if (xs.empty()) return 0.0;
  size_t hit = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    int pred = net.logit(*xs[i]) > 0.0 ? 1 : 0;
    hit += (pred == labels[i]);
  }
  return static_cast<double>(hit) / static_cast<double>(xs.size());
}

double agreement(const ClassifierNet& a, const ClassifierNet& b,
                 const std::vector<const Image*>& xs) {
  if (xs.empty()) return 0.0;
  size_t same = 0;
  for (const Image* x : xs)
    same += ((a.logit(*x) > 0.0) == (b.logit(*x) > 0.0));
  return static_cast<double>(same) / static_cast<double>(xs.size());
}

TrainResult train_classifier(const std::vector<const Image*>& xs,
                             const std::vector<double>& targets,
                             const std::vector<const Image*>& val_xs,
                             const std::vector<int>& val_labels,
                             const ConvNetArch& arch, const TrainOptions& opts,
                             uint64_t seed) {
  if (xs.empty()) throw ConfigError("train_classifier: empty dataset");
  if (xs.size() != targets.size())
    throw ConfigError("train_classifier: images/targets size mismatch");

  TrainResult res;
  res.net = ClassifierNet(arch, derive_seed(seed, "init"));
  Vec params = res.net.get_params();
  SgdMomentum opt;
  opt.lr = opts.lr;
  opt.momentum = opts.momentum;
  opt.weight_decay = opts.weight_decay;

  ClassifierGrad grad = res.net.make_grad();
  std::vector<int> order(xs.size());
  std::iota(order.begin(), order.end(), 0);

  Vec best_params = params;
  double best_acc = -1.0;

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    Rng shuffle_rng(derive_seed(seed, "shuffle", {epoch}));
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    size_t count = 0;
    for (size_t begin = 0; begin < order.size(); begin += static_cast<size_t>(opts.batch)) {
      size_t end = std::min(order.size(), begin + static_cast<size_t>(opts.batch));
      grad.zero();
      double batch_loss = 0.0;
      for (size_t i = begin; i < end; ++i) {
        int idx = order[i];
        double target = targets[static_cast<size_t>(idx)];
        // dL/dlogit for BCE-with-logits is sigmoid(z) - y; the logit is
        // needed first, so run forward once, then push the scaled gradient.
        double z = res.net.logit(*xs[static_cast<size_t>(idx)]);
        double dz = sigmoid(z) - target;
        res.net.forward_backward(*xs[static_cast<size_t>(idx)], dz, &grad);
        batch_loss += bce_with_logits(z, target);
      }
      double inv = 1.0 / static_cast<double>(end - begin);
      Vec gflat = ClassifierNet::flatten_grad(grad) * inv;
      opt.step(params, gflat);
      res.net.set_params(params);
      loss_sum += batch_loss;
      count += end - begin;
    }
    double epoch_loss = loss_sum / static_cast<double>(count);
    res.epoch_loss.push_back(epoch_loss);
    if (!std::isfinite(epoch_loss)) {
      std::ostringstream oss;
      oss << "train_classifier: non-finite loss at epoch " << epoch << "; trace:";
      for (double l : res.epoch_loss) oss << " " << l;
      throw TrainingError(oss.str());
    }

    if (!val_xs.empty()) {
      double acc = accuracy(res.net, val_xs, val_labels);
      res.epoch_val_acc.push_back(acc);
      if (acc > best_acc) {
        best_acc = acc;
        best_params = params;
        res.best_epoch = epoch;
      }
    } else {
      best_params = params;
      res.best_epoch = epoch;
    }
  }

  res.net.set_params(best_params);
  res.best_val_acc = best_acc < 0.0 ? 0.0 : best_acc;
  return res;
}

}  // namespace sce::nn
