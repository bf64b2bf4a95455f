// Copyright (C) 2026 ambient-dps contributors
// SPDX-License-Identifier: Apache-2.0

#include "ambient/models/autodiff.hpp"

#include <stdexcept>
#include <string>

namespace ambient::ad {

const Mat& Var::value() const {
  if (!tape_) throw std::logic_error("uninitialized ad::Var");
  return tape_->value(*this);
}

Var Tape::push(Mat value, bool requires_grad, std::function<void(Tape&, const Mat&)> backprop) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.backprop = std::move(backprop);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

void Tape::accumulate(std::size_t id, const Mat& g) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return;
  if (n.has_grad) {
    n.grad += g;
  } else {
    n.grad = g;
    n.has_grad = true;
  }
}

bool Tape::any_grad(std::initializer_list<Var> vars) const {
  for (const auto& v : vars)
    if (nodes_.at(v.id()).requires_grad) return true;
  return false;
}

namespace {

void check_same_shape(const Mat& a, const Mat& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()));
}

}  // namespace

Var Tape::leaf(Mat value) { return push(std::move(value), true, [](Tape&, const Mat&) {}); }

Var Tape::constant(Mat value) { return push(std::move(value), false, nullptr); }

Var Tape::matmul(Var a, Var b) {
  const Mat& av = value(a);
  const Mat& bv = value(b);
  if (av.cols() != bv.rows()) throw std::invalid_argument("matmul: inner dimensions differ");
  const auto ia = a.id(), ib = b.id();
  return push(av * bv, any_grad({a, b}), [ia, ib](Tape& t, const Mat& g) {
    if (t.nodes_[ia].requires_grad) t.accumulate(ia, g * t.nodes_[ib].value.transpose());
    if (t.nodes_[ib].requires_grad) t.accumulate(ib, t.nodes_[ia].value.transpose() * g);
  });
}

Var Tape::add(Var a, Var b) {
  check_same_shape(value(a), value(b), "add");
  const auto ia = a.id(), ib = b.id();
  return push(value(a) + value(b), any_grad({a, b}), [ia, ib](Tape& t, const Mat& g) {
    t.accumulate(ia, g);
    t.accumulate(ib, g);
  });
}

Var Tape::sub(Var a, Var b) {
  check_same_shape(value(a), value(b), "sub");
  const auto ia = a.id(), ib = b.id();
  return push(value(a) - value(b), any_grad({a, b}), [ia, ib](Tape& t, const Mat& g) {
    t.accumulate(ia, g);
    t.accumulate(ib, -g);
  });
}

Var Tape::add_bias(Var a, Var bias) {
  const Mat& av = value(a);
  const Mat& bv = value(bias);
  if (bv.cols() != 1 || bv.rows() != av.rows()) throw std::invalid_argument("add_bias: bias must be a matching column");
  const auto ia = a.id(), ib = bias.id();
  Mat out = av;
  out.colwise() += bv.col(0);
  return push(std::move(out), any_grad({a, bias}), [ia, ib](Tape& t, const Mat& g) {
    t.accumulate(ia, g);
    if (t.nodes_[ib].requires_grad) t.accumulate(ib, g.rowwise().sum());
  });
}

Var Tape::mul(Var a, Var b) {
  check_same_shape(value(a), value(b), "mul");
  const auto ia = a.id(), ib = b.id();
  return push(value(a).cwiseProduct(value(b)), any_grad({a, b}), [ia, ib](Tape& t, const Mat& g) {
    if (t.nodes_[ia].requires_grad) t.accumulate(ia, g.cwiseProduct(t.nodes_[ib].value));
    if (t.nodes_[ib].requires_grad) t.accumulate(ib, g.cwiseProduct(t.nodes_[ia].value));
  });
}

Var Tape::scale(Var a, double s) {
  const auto ia = a.id();
  return push(s * value(a), any_grad({a}), [ia, s](Tape& t, const Mat& g) { t.accumulate(ia, s * g); });
}

Var Tape::tanh(Var a) {
  const auto ia = a.id();
  Mat out = value(a).array().tanh().matrix();
  const std::size_t self = nodes_.size();
  return push(std::move(out), any_grad({a}), [ia, self](Tape& t, const Mat& g) {
    const Mat& y = t.nodes_[self].value;
    t.accumulate(ia, g.cwiseProduct((1.0 - y.array().square()).matrix()));
  });
}

Var Tape::sum(Var a) {
  const auto ia = a.id();
  const Eigen::Index r = value(a).rows(), c = value(a).cols();
  Mat out(1, 1);
  out(0, 0) = value(a).sum();
  return push(std::move(out), any_grad({a}),
              [ia, r, c](Tape& t, const Mat& g) { t.accumulate(ia, Mat::Constant(r, c, g(0, 0))); });
}

Var Tape::sum_squares(Var a) {
  const auto ia = a.id();
  Mat out(1, 1);
  out(0, 0) = value(a).squaredNorm();
  return push(std::move(out), any_grad({a}),
              [ia](Tape& t, const Mat& g) { t.accumulate(ia, 2.0 * g(0, 0) * t.nodes_[ia].value); });
}

Var Tape::rows(Var a, Eigen::Index start, Eigen::Index count) {
  const Mat& av = value(a);
  if (start < 0 || count < 0 || start + count > av.rows()) throw std::invalid_argument("rows: range out of bounds");
  const auto ia = a.id();
  const Eigen::Index r = av.rows(), c = av.cols();
  return push(av.middleRows(start, count), any_grad({a}), [ia, r, c, start, count](Tape& t, const Mat& g) {
    Mat full = Mat::Zero(r, c);
    full.middleRows(start, count) = g;
    t.accumulate(ia, full);
  });
}

Var Tape::vstack(const std::vector<Var>& parts) {
  if (parts.empty()) throw std::invalid_argument("vstack of nothing");
  const Eigen::Index cols = value(parts.front()).cols();
  Eigen::Index total = 0;
  bool needs = false;
  for (const auto& p : parts) {
    if (value(p).cols() != cols) throw std::invalid_argument("vstack: column counts differ");
    total += value(p).rows();
    needs = needs || nodes_[p.id()].requires_grad;
  }
  Mat out(total, cols);
  std::vector<std::pair<std::size_t, Eigen::Index>> spans;
  Eigen::Index offset = 0;
  for (const auto& p : parts) {
    out.middleRows(offset, value(p).rows()) = value(p);
    spans.emplace_back(p.id(), value(p).rows());
    offset += value(p).rows();
  }
  return push(std::move(out), needs, [spans](Tape& t, const Mat& g) {
    Eigen::Index off = 0;
    for (const auto& [id, rows] : spans) {
      if (t.nodes_[id].requires_grad) t.accumulate(id, g.middleRows(off, rows));
      off += rows;
    }
  });
}

Var Tape::linear_map(Var a, ColumnMap forward, ColumnMap adjoint) {
  const Mat& av = value(a);
  Mat out;
  for (Eigen::Index j = 0; j < av.cols(); ++j) {
    const Vec col = forward(j, av.col(j));
    if (j == 0) out.resize(col.size(), av.cols());
    out.col(j) = col;
  }
  const auto ia = a.id();
  const Eigen::Index in_rows = av.rows();
  return push(std::move(out), any_grad({a}), [ia, in_rows, adjoint](Tape& t, const Mat& g) {
    Mat back(in_rows, g.cols());
    for (Eigen::Index j = 0; j < g.cols(); ++j) back.col(j) = adjoint(j, g.col(j));
    t.accumulate(ia, back);
  });
}

void Tape::backward(Var loss) {
  const Mat& lv = value(loss);
  if (lv.rows() != 1 || lv.cols() != 1)
    throw std::invalid_argument("backward needs a scalar loss, got " + std::to_string(lv.rows()) + "x" +
                                std::to_string(lv.cols()));
  for (auto& n : nodes_) {
    n.has_grad = false;
    n.grad.resize(0, 0);
  }
  accumulate(loss.id(), Mat::Ones(1, 1));
  for (std::size_t i = loss.id() + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.requires_grad || !n.has_grad || !n.backprop) continue;
    const Mat g = n.grad;
    n.backprop(*this, g);
  }
}

Mat Tape::grad(Var v) const {
  const Node& n = nodes_.at(v.id());
  if (n.has_grad) return n.grad;
  return Mat::Zero(n.value.rows(), n.value.cols());
}

}  // namespace ambient::ad
