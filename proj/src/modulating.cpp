#include "hconvex/modulating.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "hconvex/errors.hpp"
#include "hconvex/format.hpp"

namespace hconvex {

ModulatingFn ModulatingFn::power(double k) {
  if (!std::isfinite(k)) throw std::invalid_argument("power exponent must be finite");
  ModulatingFn h(Kind::Power);
  h.k_ = k;
  return h;
}

ModulatingFn ModulatingFn::expression(Expr e) {
  if (e.empty()) throw std::invalid_argument("empty expression for h");
  ModulatingFn h(Kind::Expression);
  h.expr_ = std::move(e);
  return h;
}

ModulatingFn ModulatingFn::parse(std::string_view spec) {
  if (spec == "identity") return identity();
  if (spec == "reciprocal") return reciprocal();
  if (spec == "one") return one();
  if (spec.starts_with("power:")) {
    const std::string_view num = spec.substr(6);
    double k = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), k);
    if (num.empty() || ec != std::errc{} || ptr != num.data() + num.size()) {
      throw std::invalid_argument("invalid h '" + std::string(spec) + "': bad exponent");
    }
    return power(k);
  }
  if (spec.starts_with("expr:")) return expression(Expr::parse(spec.substr(5)));
  throw std::invalid_argument("unknown h '" + std::string(spec) +
                              "' (use identity, power:<s>, reciprocal, one, expr:<text>)");
}

double ModulatingFn::operator()(double t) const {
  switch (kind_) {
    case Kind::Identity:
      return t;
    case Kind::One:
      return 1.0;
    case Kind::Reciprocal:
      if (t == 0.0) throw DomainError(name(), t, "h=reciprocal undefined at t=0");
      return 1.0 / t;
    case Kind::Power: {
      if (t < 0.0 && std::trunc(k_) != k_) {
        throw DomainError(name(), t, name() + " undefined at negative t=" + format_double(t));
      }
      if (t == 0.0 && k_ < 0.0) {
        throw DomainError(name(), t, name() + " undefined at t=0");
      }
      return std::pow(t, k_);
    }
    case Kind::Expression:
      return expr_(t);
  }
  return 0.0;
}

std::optional<double> ModulatingFn::exponent() const {
  switch (kind_) {
    case Kind::Identity: return 1.0;
    case Kind::Power: return k_;
    case Kind::Reciprocal: return -1.0;
    case Kind::One: return 0.0;
    case Kind::Expression: return std::nullopt;
  }
  return std::nullopt;
}

std::string ModulatingFn::name() const {
  switch (kind_) {
    case Kind::Identity: return "identity";
    case Kind::Power: return "power:" + format_double(k_);
    case Kind::Reciprocal: return "reciprocal";
    case Kind::One: return "one";
    case Kind::Expression: return "expr:" + expr_.source();
  }
  return "?";
}

bool ModulatingFn::caution_case() const {
  return kind_ == Kind::Power && (k_ <= -1.0 || k_ == 0.0);
}

}  // namespace hconvex
