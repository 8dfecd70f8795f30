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

#ifndef SCE_CLASSIFIER_HPP_
#define SCE_CLASSIFIER_HPP_

#include <vector>

#include "sce/nn.hpp"

namespace sce::nn {

// Small binary CNN: strided conv stack plus one dense head emitting a single
// logit. f(x) > 0 means predicted class 1. An empty channel list degenerates
// to a linear model on the flattened input.
struct ConvNetArch {
  std::vector<int> channels{8, 16, 32};
  int ksize = 3;
  int stride = 2;
  Act act = Act::kRelu;
  HybridActivation hybrid{};
  int in_h = 32, in_w = 32;
};

struct ClassifierGrad {
  std::vector<ConvGrad> convs;
  DenseGrad head;
  void zero();
};

class ClassifierNet {
 public:
  ClassifierNet() = default;
  ClassifierNet(const ConvNetArch& arch, uint64_t init_seed);

  const ConvNetArch& arch() const { return arch_; }
  uint64_t init_seed() const { return init_seed_; }

  double logit(const Image& x) const;
  // Gradient of the logit w.r.t. input pixels.
  double logit_grad(const Image& x, Image* gx) const;

  // Training-path forward/backward; accumulates parameter gradients.
  double forward_backward(const Image& x, double dlogit, ClassifierGrad* pg,
                          Image* gx = nullptr) const;

  ClassifierGrad make_grad() const;
  long param_count() const;
  Vec get_params() const;
  void set_params(const Vec& flat);
  static Vec flatten_grad(const ClassifierGrad& g);

 private:
  ConvNetArch arch_;
  uint64_t init_seed_ = 0;
  std::vector<Conv2d> convs_;
  Dense head_;
  int flat_dim_ = 0;
};

struct TrainOptions {
  int epochs = 30;
  int batch = 64;
  double lr = 0.05;
  double momentum = 0.9;
  double weight_decay = 0.0;
};

struct TrainResult {
  ClassifierNet net;
  std::vector<double> epoch_loss;
  std::vector<double> epoch_val_acc;
  double best_val_acc = 0.0;
  int best_epoch = -1;
};

// Mini-batch SGD against binary cross-entropy on (possibly soft) targets.
// Deterministic given the seed; returns the parameters of the epoch with the
// best validation accuracy (ties keep the earliest epoch). Non-finite loss
// raises TrainingError with the loss trace.
TrainResult train_classifier(const std::vector<const Image*>& xs,
                             const std::vector<double>& targets,
                             const std::vector<const Image*>& val_xs,
                             const std::vector<int>& val_labels,
                             const ConvNetArch& arch, const TrainOptions& opts,
                             uint64_t seed);

double accuracy(const ClassifierNet& net, const std::vector<const Image*>& xs,
                const std::vector<int>& labels);
// Fraction of inputs on which the two nets predict the same class.
double agreement(const ClassifierNet& a, const ClassifierNet& b,
                 const std::vector<const Image*>& xs);

}  // namespace sce::nn

#endif  // SCE_CLASSIFIER_HPP_
