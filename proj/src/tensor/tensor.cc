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

#include "rshd/tensor/tensor.h"

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "rshd/common/error.h"

namespace rshd {
namespace {

thread_local bool grad_enabled = true;

}  // namespace

Tensor::Tensor(Matrix value, bool requires_grad)
    : node_(std::make_shared<internal::Node>()) {
  if (value.empty()) ThrowContract("Tensor: empty shape");
  if (!value.AllFinite()) ThrowNumeric("Tensor: non-finite input value");
  node_->value = std::move(value);
  node_->requires_grad = requires_grad;
}

Matrix Tensor::grad() const {
  if (node_->grad.empty()) return Matrix(rows(), cols());
  return node_->grad;
}

void Tensor::ZeroGrad() { node_->grad = Matrix(); }

double Tensor::item() const {
  if (rows() != 1 || cols() != 1) ThrowDimension("item", rows(), cols(), 1, 1);
  return node_->value(0, 0);
}

Tensor Tensor::FromOp(std::string_view op, Matrix value,
                      std::vector<Tensor> parents,
                      std::function<void(internal::Node&)> backward) {
  if (!value.AllFinite()) {
    ThrowNumeric(std::string(op) + ": produced a non-finite value");
  }
  auto node = std::make_shared<internal::Node>();
  node->value = std::move(value);
  node->op = op;
  bool needs = false;
  if (grad_enabled) {
    for (const Tensor& p : parents) needs = needs || p.requires_grad();
  }
  if (needs) {
    node->requires_grad = true;
    node->parents.reserve(parents.size());
    for (Tensor& p : parents) node->parents.push_back(std::move(p.node_));
    node->backward = std::move(backward);
  }
  return Tensor(std::move(node));
}

NoGradGuard::NoGradGuard() : previous_(grad_enabled) { grad_enabled = false; }
NoGradGuard::~NoGradGuard() { grad_enabled = previous_; }

bool GradEnabled() { return grad_enabled; }

ComputationTape ComputationTape::Record(const Tensor& loss,
                                        std::span<const Tensor> targets) {
  ComputationTape tape;
  if (!loss.defined()) ThrowContract("backward: undefined loss");
  if (loss.rows() != 1 || loss.cols() != 1) {
    ThrowContract("backward: loss must be a scalar, got " +
                  std::to_string(loss.rows()) + "x" +
                  std::to_string(loss.cols()));
  }
  tape.loss_ = loss.shared_node();
  if (!loss.requires_grad()) return tape;

  // Iterative post-order DFS: parents are emitted before their children.
  std::vector<internal::Node*> post;
  std::unordered_set<internal::Node*> seen;
  std::vector<std::pair<internal::Node*, std::size_t>> stack;
  stack.emplace_back(loss.node(), 0);
  seen.insert(loss.node());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      internal::Node* parent = node->parents[next++].get();
      if (parent->requires_grad && seen.insert(parent).second) {
        stack.emplace_back(parent, 0);
      }
    } else {
      post.push_back(node);
      stack.pop_back();
    }
  }

  std::unordered_set<const internal::Node*> wanted;
  for (const Tensor& t : targets) wanted.insert(t.node());
  std::unordered_set<const internal::Node*> relevant;
  for (internal::Node* node : post) {
    bool keep = false;
    if (node->is_leaf()) {
      keep = wanted.empty() || wanted.count(node) > 0;
    } else {
      for (const auto& p : node->parents) {
        if (relevant.count(p.get()) > 0) {
          keep = true;
          break;
        }
      }
    }
    if (keep) relevant.insert(node);
  }
  for (auto it = post.rbegin(); it != post.rend(); ++it) {
    if (relevant.count(*it) > 0) tape.order_.push_back(*it);
  }
  return tape;
}

void ComputationTape::Replay() {
  if (order_.empty()) return;
  struct PassScope {
    std::vector<internal::Node*>& nodes;
    ~PassScope() {
      for (internal::Node* n : nodes) n->in_pass = false;
    }
  } scope{order_};
  for (internal::Node* node : order_) {
    node->in_pass = true;
    if (!node->is_leaf() || node->grad.empty()) {
      node->grad = Matrix(node->value.rows(), node->value.cols());
    }
  }
  order_.front()->grad(0, 0) += 1.0;
  for (internal::Node* node : order_) {
    if (node->backward) node->backward(*node);
  }
  for (internal::Node* node : order_) {
    if (!node->grad.AllFinite()) {
      ThrowNumeric(std::string("backward: non-finite gradient at ") +
                   std::string(node->op));
    }
  }
}

void Backward(const Tensor& loss, std::span<const Tensor> targets) {
  ComputationTape tape = ComputationTape::Record(loss, targets);
  tape.Replay();
}

}  // namespace rshd
