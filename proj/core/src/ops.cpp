// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

#include "signphon/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "signphon/errors.hpp"

namespace signphon {

SparseMatrix SparseMatrix::from_dense(std::size_t rows, std::size_t cols,
                                      std::span<const double> dense) {
  if (dense.size() != rows * cols) {
    throw DimensionError("dense matrix of " + std::to_string(dense.size()) +
                         " values is not " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  SparseMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.reserve(rows + 1);
  m.row_ptr.push_back(0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = dense[r * cols + c];
      if (v != 0.0) {
        m.col_index.push_back(c);
        m.values.push_back(v);
      }
    }
    m.row_ptr.push_back(m.values.size());
  }
  return m;
}

namespace ops {
namespace {

template <typename T>
void require_same_shape(const Tensor<T>& a, const Tensor<T>& b,
                        const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         shape_string(a.shape()) + " vs " +
                         shape_string(b.shape()));
  }
}

}  // namespace

template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b, Tape<T>* tape) {
  if (b.rank() != 2 || a.shape().back() != b.dim(0)) {
    throw DimensionError("matmul: incompatible shapes " +
                         shape_string(a.shape()) + " and " +
                         shape_string(b.shape()));
  }
  const std::size_t k = b.dim(0);
  const std::size_t n = b.dim(1);
  const std::size_t m = a.numel() / k;
  Shape out_shape(a.shape().begin(), a.shape().end() - 1);
  out_shape.push_back(n);
  Tensor<T> out(out_shape);

  const T* pa = a.data();
  const T* pb = b.data();
  T* pc = out.data();
  for (std::size_t i = 0; i < m; ++i) {
    T* crow = pc + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const T av = pa[i * k + p];
      const T* brow = pb + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }

  if (tape) {
    tape->record([a = a, b = b, out, m, k, n]() mutable {
      if (!out.has_grad()) return;
      const T* g = out.grad().data();
      const T* pa = a.data();
      const T* pb = b.data();
      T* ga = a.ensure_grad().data();
      T* gb = b.ensure_grad().data();
      for (std::size_t i = 0; i < m; ++i) {
        const T* grow = g + i * n;
        for (std::size_t p = 0; p < k; ++p) {
          const T* brow = pb + p * n;
          T acc = 0;
          for (std::size_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
          ga[i * k + p] += acc;
        }
      }
      for (std::size_t i = 0; i < m; ++i) {
        const T* grow = g + i * n;
        for (std::size_t p = 0; p < k; ++p) {
          const T av = pa[i * k + p];
          T* gbrow = gb + p * n;
          for (std::size_t j = 0; j < n; ++j) gbrow[j] += av * grow[j];
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b, Tape<T>* tape) {
  require_same_shape(a, b, "add");
  Tensor<T> out(a.shape());
  auto av = a.values();
  auto bv = b.values();
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] + bv[i];
  if (tape) {
    tape->record([a = a, b = b, out]() mutable {
      if (!out.has_grad()) return;
      auto g = out.grad();
      auto ga = a.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
      auto gb = b.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
    });
  }
  return out;
}

template <typename T>
Tensor<T> add_bias(const Tensor<T>& x, const Tensor<T>& bias, Tape<T>* tape) {
  const std::size_t n = bias.numel();
  if (bias.rank() != 1 || x.shape().back() != n) {
    throw DimensionError("add_bias: incompatible shapes " +
                         shape_string(x.shape()) + " and " +
                         shape_string(bias.shape()));
  }
  Tensor<T> out(x.shape());
  const std::size_t rows = x.numel() / n;
  const T* px = x.data();
  const T* pb = bias.data();
  T* po = out.data();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < n; ++j) po[r * n + j] = px[r * n + j] + pb[j];
  }
  if (tape) {
    tape->record([x = x, bias = bias, out, rows, n]() mutable {
      if (!out.has_grad()) return;
      const T* g = out.grad().data();
      T* gx = x.ensure_grad().data();
      T* gb = bias.ensure_grad().data();
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < n; ++j) {
          gx[r * n + j] += g[r * n + j];
          gb[j] += g[r * n + j];
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> scale(const Tensor<T>& x, T factor, Tape<T>* tape) {
  Tensor<T> out(x.shape());
  auto xv = x.values();
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = xv[i] * factor;
  if (tape) {
    tape->record([x = x, out, factor]() mutable {
      if (!out.has_grad()) return;
      auto g = out.grad();
      auto gx = x.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * factor;
    });
  }
  return out;
}

template <typename T>
Tensor<T> relu(const Tensor<T>& x, Tape<T>* tape) {
  Tensor<T> out(x.shape());
  auto xv = x.values();
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = xv[i] > T(0) ? xv[i] : T(0);
  if (tape) {
    tape->record([x = x, out]() mutable {
      if (!out.has_grad()) return;
      auto g = out.grad();
      auto xv = x.values();
      auto gx = x.ensure_grad();
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (xv[i] > T(0)) gx[i] += g[i];
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> sum(const Tensor<T>& x, Tape<T>* tape) {
  T acc = 0;
  for (T v : x.values()) acc += v;
  Tensor<T> out = Tensor<T>::scalar(acc);
  if (tape) {
    tape->record([x = x, out]() mutable {
      if (!out.has_grad()) return;
      const T g = out.grad()[0];
      for (T& gx : x.ensure_grad()) gx += g;
    });
  }
  return out;
}

template <typename T>
Tensor<T> mean_pool(const Tensor<T>& x, Tape<T>* tape) {
  if (x.rank() < 2) {
    throw DimensionError("mean_pool: expected rank >= 2, got " +
                         shape_string(x.shape()));
  }
  const std::size_t c = x.shape().back();
  const std::size_t rows = x.numel() / c;
  Tensor<T> out(Shape{c});
  const T* px = x.data();
  T* po = out.data();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < c; ++j) po[j] += px[r * c + j];
  }
  const T inv = T(1) / static_cast<T>(rows);
  for (std::size_t j = 0; j < c; ++j) po[j] *= inv;
  if (tape) {
    tape->record([x = x, out, rows, c, inv]() mutable {
      if (!out.has_grad()) return;
      const T* g = out.grad().data();
      T* gx = x.ensure_grad().data();
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < c; ++j) gx[r * c + j] += g[j] * inv;
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> conv1d_temporal(const Tensor<T>& x, const Tensor<T>& kernel,
                          Tape<T>* tape) {
  if (x.rank() != 3 || kernel.rank() != 2 || kernel.dim(1) != x.dim(2) ||
      kernel.dim(0) % 2 == 0 || kernel.dim(0) > x.dim(0)) {
    throw DimensionError("conv1d_temporal: incompatible shapes " +
                         shape_string(x.shape()) + " and kernel " +
                         shape_string(kernel.shape()));
  }
  const std::size_t frames = x.dim(0);
  const std::size_t stride = x.dim(1) * x.dim(2);  // elements per frame
  const std::size_t c = x.dim(2);
  const std::size_t k = kernel.dim(0);
  const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(k / 2);
  Tensor<T> out(x.shape());
  const T* px = x.data();
  const T* pk = kernel.data();
  T* po = out.data();
  for (std::size_t t = 0; t < frames; ++t) {
    T* orow = po + t * stride;
    for (std::size_t j = 0; j < k; ++j) {
      const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + j) - half;
      if (src < 0 || src >= static_cast<std::ptrdiff_t>(frames)) continue;
      const T* xrow = px + static_cast<std::size_t>(src) * stride;
      const T* krow = pk + j * c;
      for (std::size_t e = 0; e < stride; e += c) {
        for (std::size_t ch = 0; ch < c; ++ch) orow[e + ch] += krow[ch] * xrow[e + ch];
      }
    }
  }
  if (tape) {
    tape->record([x = x, kernel = kernel, out, frames, stride, c, k, half]() mutable {
      if (!out.has_grad()) return;
      const T* g = out.grad().data();
      const T* px = x.data();
      const T* pk = kernel.data();
      T* gx = x.ensure_grad().data();
      T* gk = kernel.ensure_grad().data();
      for (std::size_t t = 0; t < frames; ++t) {
        const T* grow = g + t * stride;
        for (std::size_t j = 0; j < k; ++j) {
          const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(t + j) - half;
          if (src < 0 || src >= static_cast<std::ptrdiff_t>(frames)) continue;
          const std::size_t off = static_cast<std::size_t>(src) * stride;
          const T* krow = pk + j * c;
          T* gkrow = gk + j * c;
          for (std::size_t e = 0; e < stride; e += c) {
            for (std::size_t ch = 0; ch < c; ++ch) {
              gx[off + e + ch] += krow[ch] * grow[e + ch];
              gkrow[ch] += px[off + e + ch] * grow[e + ch];
            }
          }
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> graph_propagate(const SparseMatrix& adj, const Tensor<T>& x,
                          Tape<T>* tape) {
  if (x.rank() != 3 || adj.rows != x.dim(1) || adj.cols != x.dim(1)) {
    throw DimensionError("graph_propagate: adjacency " +
                         std::to_string(adj.rows) + "x" +
                         std::to_string(adj.cols) + " vs input " +
                         shape_string(x.shape()));
  }
  const std::size_t frames = x.dim(0);
  const std::size_t v = x.dim(1);
  const std::size_t c = x.dim(2);
  Tensor<T> out(x.shape());
  const T* px = x.data();
  T* po = out.data();
  for (std::size_t t = 0; t < frames; ++t) {
    const std::size_t base = t * v * c;
    for (std::size_t r = 0; r < v; ++r) {
      T* orow = po + base + r * c;
      for (std::size_t e = adj.row_ptr[r]; e < adj.row_ptr[r + 1]; ++e) {
        const T w = static_cast<T>(adj.values[e]);
        const T* xrow = px + base + adj.col_index[e] * c;
        for (std::size_t j = 0; j < c; ++j) orow[j] += w * xrow[j];
      }
    }
  }
  if (tape) {
    // Holds the matrix by pointer: the graph outlives every tape built on it.
    tape->record([&adj, x = x, out, frames, v, c]() mutable {
      if (!out.has_grad()) return;
      const T* g = out.grad().data();
      T* gx = x.ensure_grad().data();
      for (std::size_t t = 0; t < frames; ++t) {
        const std::size_t base = t * v * c;
        for (std::size_t r = 0; r < v; ++r) {
          const T* grow = g + base + r * c;
          for (std::size_t e = adj.row_ptr[r]; e < adj.row_ptr[r + 1]; ++e) {
            const T w = static_cast<T>(adj.values[e]);
            T* gxrow = gx + base + adj.col_index[e] * c;
            for (std::size_t j = 0; j < c; ++j) gxrow[j] += w * grow[j];
          }
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> softmax(const Tensor<T>& logits, std::size_t axis, Tape<T>* tape) {
  if (axis >= logits.rank()) {
    throw DimensionError("softmax: axis " + std::to_string(axis) +
                         " out of range for shape " +
                         shape_string(logits.shape()));
  }
  const Shape& shape = logits.shape();
  std::size_t outer = 1, inner = 1;
  for (std::size_t i = 0; i < axis; ++i) outer *= shape[i];
  for (std::size_t i = axis + 1; i < shape.size(); ++i) inner *= shape[i];
  const std::size_t len = shape[axis];

  Tensor<T> out(shape);
  const T* px = logits.data();
  T* po = out.data();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * len * inner + in;
      T mx = -std::numeric_limits<T>::infinity();
      for (std::size_t i = 0; i < len; ++i) {
        const T v = px[base + i * inner];
        if (std::isnan(v)) throw NumericError("softmax: NaN in logits");
        mx = std::max(mx, v);
      }
      T total = 0;
      for (std::size_t i = 0; i < len; ++i) {
        const T e = std::exp(px[base + i * inner] - mx);
        po[base + i * inner] = e;
        total += e;
      }
      for (std::size_t i = 0; i < len; ++i) po[base + i * inner] /= total;
    }
  }
  if (tape) {
    tape->record([logits = logits, out, outer, inner, len]() mutable {
      if (!out.has_grad()) return;
      const T* g = out.grad().data();
      const T* p = out.data();
      T* gx = logits.ensure_grad().data();
      for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t in = 0; in < inner; ++in) {
          const std::size_t base = o * len * inner + in;
          T dot = 0;
          for (std::size_t i = 0; i < len; ++i) {
            dot += g[base + i * inner] * p[base + i * inner];
          }
          for (std::size_t i = 0; i < len; ++i) {
            const std::size_t idx = base + i * inner;
            gx[idx] += p[idx] * (g[idx] - dot);
          }
        }
      }
    });
  }
  return out;
}

template <typename T>
Tensor<T> cross_entropy(int label, const Tensor<T>& probs, Tape<T>* tape) {
  if (probs.rank() != 1) {
    throw DimensionError("cross_entropy: expected a rank-1 distribution, got " +
                         shape_string(probs.shape()));
  }
  const int classes = static_cast<int>(probs.numel());
  if (label < 1 || label > classes) {
    throw RangeError("cross_entropy: label " + std::to_string(label) +
                     " outside [1, " + std::to_string(classes) + "]");
  }
  const std::size_t idx = static_cast<std::size_t>(label - 1);
  const T floor = static_cast<T>(kProbabilityFloor);
  const T p = probs.values()[idx];
  const bool floored = !(p > floor);
  Tensor<T> out = Tensor<T>::scalar(-std::log(floored ? floor : p));
  if (tape) {
    tape->record([probs = probs, out, idx, p, floored]() mutable {
      if (!out.has_grad() || floored) return;
      probs.ensure_grad()[idx] += -out.grad()[0] / p;
    });
  }
  return out;
}

#define SIGNPHON_INSTANTIATE_OPS(T)                                            \
  template Tensor<T> matmul(const Tensor<T>&, const Tensor<T>&, Tape<T>*);     \
  template Tensor<T> add(const Tensor<T>&, const Tensor<T>&, Tape<T>*);        \
  template Tensor<T> add_bias(const Tensor<T>&, const Tensor<T>&, Tape<T>*);   \
  template Tensor<T> scale(const Tensor<T>&, T, Tape<T>*);                     \
  template Tensor<T> relu(const Tensor<T>&, Tape<T>*);                         \
  template Tensor<T> sum(const Tensor<T>&, Tape<T>*);                          \
  template Tensor<T> mean_pool(const Tensor<T>&, Tape<T>*);                    \
  template Tensor<T> conv1d_temporal(const Tensor<T>&, const Tensor<T>&,       \
                                     Tape<T>*);                                \
  template Tensor<T> graph_propagate(const SparseMatrix&, const Tensor<T>&,    \
                                     Tape<T>*);                                \
  template Tensor<T> softmax(const Tensor<T>&, std::size_t, Tape<T>*);         \
  template Tensor<T> cross_entropy(int, const Tensor<T>&, Tape<T>*);

SIGNPHON_INSTANTIATE_OPS(float)
SIGNPHON_INSTANTIATE_OPS(double)

#undef SIGNPHON_INSTANTIATE_OPS

}  // namespace ops
}  // namespace signphon
