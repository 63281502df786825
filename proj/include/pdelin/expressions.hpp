/**
 * @file expressions.hpp
 * @brief Built-in separable test functions u(x) = scale * prod_a g_a(x_a)
 *        with closed-form first and second derivatives.
 */
#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "pdelin/error.hpp"

namespace pdelin {

/// One-dimensional factor g(x) with derivatives up to order 2.
class Factor {
 public:
  enum class Kind { one, x, poly3, sin, cos, exp_sin };

  Factor(Kind kind, double omega) : kind_(kind), w_(omega) {}

  /// Known names: one, x, poly3, sin, cos, sin_pi, cos_pi, exp_sin,
  /// exp_sin_pi, exp_sin_half_pi.
  static Factor parse(const std::string& name) {
    using std::numbers::pi;
    if (name == "one") return {Kind::one, 0.0};
    if (name == "x") return {Kind::x, 0.0};
    if (name == "poly3") return {Kind::poly3, 0.0};
    if (name == "sin") return {Kind::sin, 1.0};
    if (name == "cos") return {Kind::cos, 1.0};
    if (name == "sin_pi") return {Kind::sin, pi};
    if (name == "cos_pi") return {Kind::cos, pi};
    if (name == "exp_sin") return {Kind::exp_sin, 1.0};
    if (name == "exp_sin_pi") return {Kind::exp_sin, pi};
    if (name == "exp_sin_half_pi") return {Kind::exp_sin, pi / 2};
    throw InvalidArgument("unknown expression factor '" + name + "'");
  }

  /// g^{(order)}(x) for order in {0, 1, 2}.
  double eval(double x, int order = 0) const {
    const double w = w_;
    switch (kind_) {
      case Kind::one:
        return order == 0 ? 1.0 : 0.0;
      case Kind::x:
        return order == 0 ? x : (order == 1 ? 1.0 : 0.0);
      case Kind::poly3:  // 1/4 - x/2 + x^2/3 + x^3
        if (order == 0) return 0.25 - 0.5 * x + x * x / 3.0 + x * x * x;
        if (order == 1) return -0.5 + 2.0 * x / 3.0 + 3.0 * x * x;
        return 2.0 / 3.0 + 6.0 * x;
      case Kind::sin:
        if (order == 0) return std::sin(w * x);
        if (order == 1) return w * std::cos(w * x);
        return -w * w * std::sin(w * x);
      case Kind::cos:
        if (order == 0) return std::cos(w * x);
        if (order == 1) return -w * std::sin(w * x);
        return -w * w * std::cos(w * x);
      case Kind::exp_sin: {
        const double s = std::sin(w * x), c = std::cos(w * x), e = std::exp(s);
        if (order == 0) return e;
        if (order == 1) return w * c * e;
        return w * w * (c * c - s) * e;
      }
    }
    return 0.0;
  }

 private:
  Kind kind_;
  double w_;
};

/// u(x) = scale * prod_a g_a(x_a); a single factor is broadcast to every axis.
class Expression {
 public:
  Expression() = default;
  Expression(std::vector<Factor> factors, double scale) : factors_(std::move(factors)), scale_(scale) {}

  /// Whole-expression names: "zero", "one", "sin_product", "cos_product",
  /// "exp_sin", "exp_sin_pi", "exp_sin_half_pi", "poly3"; any factor name is
  /// also accepted and broadcast.
  static Expression named(const std::string& name, double scale = 1.0) {
    if (name == "zero") return Expression({Factor::parse("one")}, 0.0);
    if (name == "sin_product") return Expression({Factor::parse("sin")}, scale);
    if (name == "cos_product") return Expression({Factor::parse("cos")}, scale);
    return Expression({Factor::parse(name)}, scale);
  }

  static Expression product(const std::vector<std::string>& names, double scale = 1.0) {
    if (names.empty()) throw InvalidArgument("product expression needs at least one factor");
    std::vector<Factor> f;
    f.reserve(names.size());
    for (const auto& n : names) f.push_back(Factor::parse(n));
    return Expression(std::move(f), scale);
  }

  double scale() const noexcept { return scale_; }
  bool is_zero() const noexcept { return scale_ == 0.0; }

  /// Mixed partial derivative with orders[a] in {0,1,2} along axis a.
  double derivative(std::span<const double> x, std::span<const int> orders) const {
    double v = scale_;
    for (std::size_t a = 0; a < x.size() && v != 0.0; ++a) {
      v *= factor(a).eval(x[a], orders.empty() ? 0 : orders[a]);
    }
    return v;
  }

  double operator()(std::span<const double> x) const { return derivative(x, {}); }

  /// d^2 u / dx_i dx_j.
  double second(std::span<const double> x, int i, int j) const {
    std::vector<int> o(x.size(), 0);
    o[static_cast<std::size_t>(i)] += 1;
    o[static_cast<std::size_t>(j)] += 1;
    return derivative(x, o);
  }

  double laplacian(std::span<const double> x) const {
    double acc = 0.0;
    for (std::size_t a = 0; a < x.size(); ++a) acc += second(x, static_cast<int>(a), static_cast<int>(a));
    return acc;
  }

 private:
  const Factor& factor(std::size_t axis) const {
    if (factors_.empty()) throw InvalidArgument("empty expression");
    return factors_.size() == 1 ? factors_[0] : factors_.at(axis);
  }

  std::vector<Factor> factors_;
  double scale_ = 1.0;
};

}  // namespace pdelin
