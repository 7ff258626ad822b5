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

#include "rshd/tensor/ops.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rshd/common/error.h"
#include "rshd/kernels/kernels.h"

namespace rshd {
namespace {

using internal::Node;

const kernels::KernelTable& K() { return kernels::Active(); }

void RequireSameShape(std::string_view op, const Tensor& a, const Tensor& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    ThrowDimension(op, a.rows(), a.cols(), b.rows(), b.cols());
  }
}

Matrix TransposeOf(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = m(r, c);
  }
  return out;
}

void AccumulateInto(Matrix* dst, const Matrix& src) {
  if (dst != nullptr) K().axpy(1.0, src.data().data(), dst->data().data(), src.size());
}

}  // namespace

Tensor MatMul(const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    ThrowDimension("matmul", a.rows(), a.cols(), b.rows(), b.cols());
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Matrix out(m, n);
  K().gemm_acc(a.value().data().data(), b.value().data().data(),
               out.data().data(), m, k, n);
  return Tensor::FromOp("matmul", std::move(out), {a, b}, [m, k, n](Node& self) {
    const Matrix& g = self.grad;
    if (Matrix* da = self.ParentGrad(0)) {
      const Matrix bt = TransposeOf(self.ParentValue(1));
      K().gemm_acc(g.data().data(), bt.data().data(), da->data().data(), m, n,
                   k);
    }
    if (Matrix* db = self.ParentGrad(1)) {
      const Matrix at = TransposeOf(self.ParentValue(0));
      K().gemm_acc(at.data().data(), g.data().data(), db->data().data(), k, m,
                   n);
    }
  });
}

Tensor Transpose(const Tensor& a) {
  return Tensor::FromOp("transpose", TransposeOf(a.value()), {a}, [](Node& self) {
    if (Matrix* da = self.ParentGrad(0)) AccumulateInto(da, TransposeOf(self.grad));
  });
}

Tensor Add(const Tensor& a, const Tensor& b) {
  RequireSameShape("add", a, b);
  Matrix out(a.rows(), a.cols());
  K().add(a.value().data().data(), b.value().data().data(), out.data().data(),
          out.size());
  return Tensor::FromOp("add", std::move(out), {a, b}, [](Node& self) {
    AccumulateInto(self.ParentGrad(0), self.grad);
    AccumulateInto(self.ParentGrad(1), self.grad);
  });
}

Tensor AddRowBroadcast(const Tensor& a, const Tensor& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) {
    ThrowDimension("add_row_broadcast", a.rows(), a.cols(), row.rows(),
                   row.cols());
  }
  Matrix out(a.rows(), a.cols());
  const double* r = row.value().data().data();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    K().add(a.value().row(i).data(), r, out.row(i).data(), a.cols());
  }
  return Tensor::FromOp("add_row_broadcast", std::move(out), {a, row},
                        [](Node& self) {
    AccumulateInto(self.ParentGrad(0), self.grad);
    if (Matrix* dr = self.ParentGrad(1)) {
      for (std::size_t i = 0; i < self.grad.rows(); ++i) {
        K().axpy(1.0, self.grad.row(i).data(), dr->data().data(),
                 self.grad.cols());
      }
    }
  });
}

Tensor Sub(const Tensor& a, const Tensor& b) {
  RequireSameShape("sub", a, b);
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] = a.value().data()[i] - b.value().data()[i];
  }
  return Tensor::FromOp("sub", std::move(out), {a, b}, [](Node& self) {
    AccumulateInto(self.ParentGrad(0), self.grad);
    if (Matrix* db = self.ParentGrad(1)) {
      K().axpy(-1.0, self.grad.data().data(), db->data().data(), db->size());
    }
  });
}

Tensor Mul(const Tensor& a, const Tensor& b) {
  RequireSameShape("mul", a, b);
  Matrix out(a.rows(), a.cols());
  K().mul(a.value().data().data(), b.value().data().data(), out.data().data(),
          out.size());
  return Tensor::FromOp("mul", std::move(out), {a, b}, [](Node& self) {
    const double* g = self.grad.data().data();
    const std::size_t n = self.grad.size();
    if (Matrix* da = self.ParentGrad(0)) {
      K().mul_acc(g, self.ParentValue(1).data().data(), da->data().data(), n);
    }
    if (Matrix* db = self.ParentGrad(1)) {
      K().mul_acc(g, self.ParentValue(0).data().data(), db->data().data(), n);
    }
  });
}

Tensor Scale(const Tensor& a, double factor) {
  Matrix out(a.rows(), a.cols());
  K().scale(factor, a.value().data().data(), out.data().data(), out.size());
  return Tensor::FromOp("scale", std::move(out), {a}, [factor](Node& self) {
    if (Matrix* da = self.ParentGrad(0)) {
      K().axpy(factor, self.grad.data().data(), da->data().data(), da->size());
    }
  });
}

Tensor Relu(const Tensor& a) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data()[i] = std::max(0.0, a.value().data()[i]);
  }
  return Tensor::FromOp("relu", std::move(out), {a}, [](Node& self) {
    if (Matrix* da = self.ParentGrad(0)) {
      const auto x = self.ParentValue(0).data();
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0) da->data()[i] += self.grad.data()[i];
      }
    }
  });
}

Tensor SoftmaxRows(const Tensor& a) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto x = a.value().row(r);
    auto y = out.row(r);
    const double peak = *std::max_element(x.begin(), x.end());
    double total = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) {
      y[c] = std::exp(x[c] - peak);
      total += y[c];
    }
    for (double& v : y) v /= total;
  }
  return Tensor::FromOp("softmax_rows", std::move(out), {a}, [](Node& self) {
    Matrix* da = self.ParentGrad(0);
    if (da == nullptr) return;
    for (std::size_t r = 0; r < self.value.rows(); ++r) {
      const auto y = self.value.row(r);
      const auto g = self.grad.row(r);
      double dot = 0.0;
      for (std::size_t c = 0; c < y.size(); ++c) dot += g[c] * y[c];
      auto d = da->row(r);
      for (std::size_t c = 0; c < y.size(); ++c) d[c] += y[c] * (g[c] - dot);
    }
  });
}

Tensor LayerNormRows(const Tensor& a, const Tensor& gain, const Tensor& bias) {
  const std::size_t n = a.cols();
  if (gain.rows() != 1 || gain.cols() != n) {
    ThrowDimension("layer_norm_rows(gain)", a.rows(), n, gain.rows(), gain.cols());
  }
  if (bias.rows() != 1 || bias.cols() != n) {
    ThrowDimension("layer_norm_rows(bias)", a.rows(), n, bias.rows(), bias.cols());
  }
  Matrix normalized(a.rows(), n);
  std::vector<double> inv_std(a.rows());
  Matrix out(a.rows(), n);
  const auto gv = gain.value().data();
  const auto bv = bias.value().data();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto x = a.value().row(r);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    inv_std[r] = 1.0 / std::sqrt(var + kLayerNormEpsilon);
    for (std::size_t c = 0; c < n; ++c) {
      normalized(r, c) = (x[c] - mean) * inv_std[r];
      out(r, c) = gv[c] * normalized(r, c) + bv[c];
    }
  }
  return Tensor::FromOp(
      "layer_norm_rows", std::move(out), {a, gain, bias},
      [normalized = std::move(normalized), inv_std = std::move(inv_std)](Node& self) {
        const std::size_t rows = self.value.rows();
        const std::size_t cols = self.value.cols();
        const auto gv = self.ParentValue(1).data();
        Matrix* da = self.ParentGrad(0);
        Matrix* dgain = self.ParentGrad(1);
        Matrix* dbias = self.ParentGrad(2);
        std::vector<double> dxhat(cols);
        for (std::size_t r = 0; r < rows; ++r) {
          const auto g = self.grad.row(r);
          const auto xhat = normalized.row(r);
          if (dgain != nullptr) {
            K().mul_acc(g.data(), xhat.data(), dgain->data().data(), cols);
          }
          if (dbias != nullptr) K().axpy(1.0, g.data(), dbias->data().data(), cols);
          if (da == nullptr) continue;
          double mean_d = 0.0, mean_dx = 0.0;
          for (std::size_t c = 0; c < cols; ++c) {
            dxhat[c] = g[c] * gv[c];
            mean_d += dxhat[c];
            mean_dx += dxhat[c] * xhat[c];
          }
          mean_d /= static_cast<double>(cols);
          mean_dx /= static_cast<double>(cols);
          auto d = da->row(r);
          for (std::size_t c = 0; c < cols; ++c) {
            d[c] += inv_std[r] * (dxhat[c] - mean_d - xhat[c] * mean_dx);
          }
        }
      });
}

Tensor MeanPoolTime(const Tensor& x) {
  const std::size_t t = x.rows(), d = x.cols();
  Matrix out(1, d);
  for (std::size_t r = 0; r < t; ++r) {
    K().axpy(1.0, x.value().row(r).data(), out.data().data(), d);
  }
  const double inv_t = 1.0 / static_cast<double>(t);
  for (double& v : out.data()) v *= inv_t;
  return Tensor::FromOp("mean_pool_time", std::move(out), {x}, [inv_t](Node& self) {
    if (Matrix* dx = self.ParentGrad(0)) {
      for (std::size_t r = 0; r < dx->rows(); ++r) {
        K().axpy(inv_t, self.grad.data().data(), dx->row(r).data(), dx->cols());
      }
    }
  });
}

Tensor Dropout(const Tensor& a, double rate, Rng& rng, bool train) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    ThrowContract("dropout: rate must lie in [0, 1), got " + std::to_string(rate));
  }
  if (!train || rate == 0.0) return a;
  const double keep = 1.0 - rate;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix mask(a.rows(), a.cols());
  for (double& m : mask.data()) m = unit(rng) < keep ? 1.0 / keep : 0.0;
  Matrix out(a.rows(), a.cols());
  K().mul(a.value().data().data(), mask.data().data(), out.data().data(),
          out.size());
  return Tensor::FromOp("dropout", std::move(out), {a},
                        [mask = std::move(mask)](Node& self) {
    if (Matrix* da = self.ParentGrad(0)) {
      K().mul_acc(self.grad.data().data(), mask.data().data(), da->data().data(),
                  da->size());
    }
  });
}

Tensor ConcatCols(std::span<const Tensor> parts) {
  if (parts.empty()) ThrowContract("concat_cols: no inputs");
  const std::size_t rows = parts[0].rows();
  std::size_t cols = 0;
  for (const Tensor& p : parts) {
    if (p.rows() != rows) {
      ThrowDimension("concat_cols", rows, parts[0].cols(), p.rows(), p.cols());
    }
    cols += p.cols();
  }
  Matrix out(rows, cols);
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (const Tensor& p : parts) {
    offsets.push_back(offset);
    for (std::size_t r = 0; r < rows; ++r) {
      std::copy_n(p.value().row(r).data(), p.cols(), out.row(r).data() + offset);
    }
    offset += p.cols();
  }
  return Tensor::FromOp("concat_cols", std::move(out),
                        std::vector<Tensor>(parts.begin(), parts.end()),
                        [offsets = std::move(offsets)](Node& self) {
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      Matrix* dp = self.ParentGrad(i);
      if (dp == nullptr) continue;
      for (std::size_t r = 0; r < dp->rows(); ++r) {
        K().axpy(1.0, self.grad.row(r).data() + offsets[i], dp->row(r).data(),
                 dp->cols());
      }
    }
  });
}

Tensor SliceCols(const Tensor& a, std::size_t begin, std::size_t count) {
  if (count == 0 || begin + count > a.cols()) {
    ThrowDimension("slice_cols", a.rows(), a.cols(), begin, count);
  }
  Matrix out(a.rows(), count);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::copy_n(a.value().row(r).data() + begin, count, out.row(r).data());
  }
  return Tensor::FromOp("slice_cols", std::move(out), {a}, [begin, count](Node& self) {
    if (Matrix* da = self.ParentGrad(0)) {
      for (std::size_t r = 0; r < da->rows(); ++r) {
        K().axpy(1.0, self.grad.row(r).data(), da->row(r).data() + begin, count);
      }
    }
  });
}

Tensor Sum(const Tensor& a) {
  double total = 0.0;
  for (double v : a.value().data()) total += v;
  return Tensor::FromOp("sum", Matrix(1, 1, total), {a}, [](Node& self) {
    if (Matrix* da = self.ParentGrad(0)) {
      const double g = self.grad(0, 0);
      for (double& v : da->data()) v += g;
    }
  });
}

Tensor Mean(const Tensor& a) {
  return Scale(Sum(a), 1.0 / static_cast<double>(a.value().size()));
}

Tensor L2NormalizeRows(const Tensor& a) {
  Matrix out(a.rows(), a.cols());
  std::vector<double> norms(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double sq = 0.0;
    for (double v : a.value().row(r)) sq += v * v;
    norms[r] = std::sqrt(sq);
    if (!(norms[r] > 0.0)) ThrowNumeric("l2_normalize_rows: zero-norm row");
    for (std::size_t c = 0; c < a.cols(); ++c) out(r, c) = a.value()(r, c) / norms[r];
  }
  return Tensor::FromOp("l2_normalize_rows", std::move(out), {a},
                        [norms = std::move(norms)](Node& self) {
    Matrix* da = self.ParentGrad(0);
    if (da == nullptr) return;
    for (std::size_t r = 0; r < self.value.rows(); ++r) {
      const auto y = self.value.row(r);
      const auto g = self.grad.row(r);
      double dot = 0.0;
      for (std::size_t c = 0; c < y.size(); ++c) dot += g[c] * y[c];
      auto d = da->row(r);
      for (std::size_t c = 0; c < y.size(); ++c) d[c] += (g[c] - y[c] * dot) / norms[r];
    }
  });
}

Tensor CrossEntropy(const Tensor& logits, std::size_t label) {
  if (logits.rows() != 1) {
    ThrowDimension("cross_entropy", logits.rows(), logits.cols(), 1, logits.cols());
  }
  if (logits.cols() < 2) ThrowContract("cross_entropy: need at least 2 classes");
  if (label >= logits.cols()) {
    ThrowContract("cross_entropy: label " + std::to_string(label) +
                  " out of range for " + std::to_string(logits.cols()) + " classes");
  }
  const auto z = logits.value().data();
  const double peak = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (double v : z) total += std::exp(v - peak);
  const double log_sum = peak + std::log(total);
  Matrix probs(1, z.size());
  for (std::size_t c = 0; c < z.size(); ++c) probs(0, c) = std::exp(z[c] - log_sum);
  return Tensor::FromOp("cross_entropy", Matrix(1, 1, log_sum - z[label]), {logits},
                        [probs = std::move(probs), label](Node& self) {
    if (Matrix* dz = self.ParentGrad(0)) {
      const double g = self.grad(0, 0);
      for (std::size_t c = 0; c < probs.cols(); ++c) {
        dz->data()[c] += g * (probs(0, c) - (c == label ? 1.0 : 0.0));
      }
    }
  });
}

Tensor L1Loss(const Tensor& pred, const Tensor& target) {
  RequireSameShape("l1_loss", pred, target);
  const auto p = pred.value().data();
  const auto t = target.value().data();
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += std::abs(p[i] - t[i]);
  const double inv_n = 1.0 / static_cast<double>(p.size());
  return Tensor::FromOp("l1_loss", Matrix(1, 1, total * inv_n), {pred, target},
                        [inv_n](Node& self) {
    const double g = self.grad(0, 0) * inv_n;
    const auto p = self.ParentValue(0).data();
    const auto t = self.ParentValue(1).data();
    Matrix* dp = self.ParentGrad(0);
    Matrix* dt = self.ParentGrad(1);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double diff = p[i] - t[i];
      const double s = diff > 0.0 ? g : (diff < 0.0 ? -g : 0.0);
      if (dp != nullptr) dp->data()[i] += s;
      if (dt != nullptr) dt->data()[i] -= s;
    }
  });
}

}  // namespace rshd
