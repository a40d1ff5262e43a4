#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "hconvex/expr.hpp"

namespace hconvex {

// The weight function h of an h-convexity inequality.
class ModulatingFn {
public:
  enum class Kind { Identity, Power, Reciprocal, One, Expression };

  static ModulatingFn identity() { return ModulatingFn(Kind::Identity); }
  static ModulatingFn power(double k);
  static ModulatingFn reciprocal() { return ModulatingFn(Kind::Reciprocal); }
  static ModulatingFn one() { return ModulatingFn(Kind::One); }
  static ModulatingFn expression(Expr e);

  // "identity", "power:<k>", "reciprocal", "one" or "expr:<text>".
  static ModulatingFn parse(std::string_view spec);

  // Throws DomainError outside h's domain (t <= 0 for reciprocal, ...).
  double operator()(double t) const;

  Kind kind() const { return kind_; }
  std::optional<double> exponent() const;
  std::string name() const;

  // t^k with k <= -1 or k == 0: the h-chord picture is inconclusive there.
  bool caution_case() const;

private:
  explicit ModulatingFn(Kind k) : kind_(k) {}

  Kind kind_;
  double k_ = 1.0;
  Expr expr_;
};

}  // namespace hconvex
