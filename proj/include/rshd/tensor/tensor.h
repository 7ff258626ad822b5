// Copyright 2026 The rshd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSHD_TENSOR_TENSOR_H_
#define RSHD_TENSOR_TENSOR_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "rshd/tensor/matrix.h"

namespace rshd {

namespace internal {

struct Node {
  Matrix value;
  // Sized like `value` once the node takes part in a backward pass.
  Matrix grad;
  bool requires_grad = false;
  // True only while a ComputationTape that includes this node is replaying.
  bool in_pass = false;
  std::string_view op = "leaf";
  std::vector<std::shared_ptr<Node>> parents;
  // Adds this node's contribution into the parents' grads.
  std::function<void(Node& self)> backward;

  bool is_leaf() const { return parents.empty(); }

  // Gradient slot of parent `i` for the running pass, or nullptr when that
  // parent is not part of it.
  Matrix* ParentGrad(std::size_t i) const {
    Node* p = parents[i].get();
    return p->in_pass ? &p->grad : nullptr;
  }
  const Matrix& ParentValue(std::size_t i) const { return parents[i]->value; }
};

}  // namespace internal

// Handle to a node of the autodiff graph. Copies share the node. Values of
// non-leaf tensors are fixed once the op that produced them returns.
class Tensor {
 public:
  Tensor() = default;
  // Leaf tensor. Throws a numeric error if `value` holds NaN or Inf.
  explicit Tensor(Matrix value, bool requires_grad = false);

  static Tensor Parameter(Matrix value) { return Tensor(std::move(value), true); }

  bool defined() const { return node_ != nullptr; }
  std::size_t rows() const { return node_->value.rows(); }
  std::size_t cols() const { return node_->value.cols(); }
  bool requires_grad() const { return node_->requires_grad; }
  bool is_leaf() const { return node_->is_leaf(); }
  std::string_view op() const { return node_->op; }

  const Matrix& value() const { return node_->value; }
  // Leaf storage, for optimizers and loaders.
  Matrix& mutable_value() { return node_->value; }

  bool has_grad() const { return !node_->grad.empty(); }
  // Zero matrix of the right shape when no gradient has been accumulated.
  Matrix grad() const;
  void ZeroGrad();

  // Value of a 1x1 tensor.
  double item() const;

  internal::Node* node() const { return node_.get(); }
  const std::shared_ptr<internal::Node>& shared_node() const { return node_; }

  // Builds a non-leaf result. `backward` is dropped when no parent requires a
  // gradient or a NoGradGuard is active.
  static Tensor FromOp(std::string_view op, Matrix value,
                       std::vector<Tensor> parents,
                       std::function<void(internal::Node&)> backward);

 private:
  explicit Tensor(std::shared_ptr<internal::Node> node)
      : node_(std::move(node)) {}

  std::shared_ptr<internal::Node> node_;
};

// While alive on a thread, ops on that thread record no graph.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

bool GradEnabled();

// Reverse traversal order for one backward pass: every node that requires a
// gradient and lies between the loss and the selected leaves, listed from the
// loss back towards the leaves so each node precedes all of its parents.
class ComputationTape {
 public:
  // With an empty `targets`, every leaf that requires grad is a target.
  static ComputationTape Record(const Tensor& loss,
                                std::span<const Tensor> targets = {});

  std::size_t size() const { return order_.size(); }
  const std::vector<internal::Node*>& order() const { return order_; }

  // Seeds d(loss)/d(loss) = 1 and walks the tape once. Leaf grads accumulate
  // across passes; intermediate grads are reset at the start of each pass.
  void Replay();

 private:
  std::vector<internal::Node*> order_;
  std::vector<char> is_target_leaf_;
  std::shared_ptr<internal::Node> loss_;
};

// Populates grads of the selected leaves (all leaves requiring grad when
// `targets` is empty). The loss must be 1x1.
void Backward(const Tensor& loss, std::span<const Tensor> targets = {});

}  // namespace rshd

#endif  // RSHD_TENSOR_TENSOR_H_
