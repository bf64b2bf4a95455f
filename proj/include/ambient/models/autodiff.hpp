// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <vector>

#include "ambient/numerics/tensor.hpp"

namespace ambient::ad {

class Tape;

/// Handle to a matrix-valued node recorded on a Tape.
class Var {
 public:
  Var() = default;
  std::size_t id() const { return id_; }
  const Mat& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }

 private:
  friend class Tape;
  Var(const Tape* tape, std::size_t id) : tape_(tape), id_(id) {}
  const Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Reverse-mode differentiation over matrix-valued nodes. Batched signals are
/// stored one sample per column. Nodes are recorded in evaluation order and
/// backward() sweeps them once in reverse.
class Tape {
 public:
  using ColumnMap = std::function<Vec(Eigen::Index column, const Vec& x)>;

  /// A differentiable input (parameters, network inputs).
  Var leaf(Mat value);
  /// A value that never receives a gradient.
  Var constant(Mat value);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  /// a + bias, bias a column vector broadcast across columns.
  Var add_bias(Var a, Var bias);
  /// Elementwise product.
  Var mul(Var a, Var b);
  Var scale(Var a, double s);
  Var tanh(Var a);
  /// 1x1 sum of all entries.
  Var sum(Var a);
  /// 1x1 sum of squared entries.
  Var sum_squares(Var a);
  /// Rows [start, start + count).
  Var rows(Var a, Eigen::Index start, Eigen::Index count);
  /// Vertical concatenation.
  Var vstack(const std::vector<Var>& parts);
  /// Column-wise linear map with a caller-supplied adjoint; column j of the
  /// result is forward(j, a.col(j)).
  Var linear_map(Var a, ColumnMap forward, ColumnMap adjoint);

  /// Accumulates d(loss)/d(node) for every node. Throws std::invalid_argument
  /// unless `loss` is 1x1.
  void backward(Var loss);

  /// Gradient of the last backward() loss; zero for nodes it does not reach.
  Mat grad(Var v) const;
  bool requires_grad(Var v) const { return nodes_.at(v.id()).requires_grad; }
  const Mat& value(Var v) const { return nodes_.at(v.id()).value; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Mat value;
    Mat grad;
    bool requires_grad = false;
    bool has_grad = false;
    std::function<void(Tape&, const Mat&)> backprop;
  };

  Var push(Mat value, bool requires_grad, std::function<void(Tape&, const Mat&)> backprop);
  void accumulate(std::size_t id, const Mat& g);
  bool any_grad(std::initializer_list<Var> vars) const;

  std::vector<Node> nodes_;
};

}  // namespace ambient::ad
