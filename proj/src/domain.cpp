#include "hconvex/domain.hpp"

#include <charconv>
#include <stdexcept>
#include <string>

#include "hconvex/format.hpp"

namespace hconvex {

namespace {

double parse_number(std::string_view s, std::string_view whole) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw std::invalid_argument("invalid domain '" + std::string(whole) + "': bad number '" +
                                std::string(s) + "'");
  }
  return v;
}

}  // namespace

bool EvalDomain::contains(double v) const {
  const bool above = open_lo ? v > lo : v >= lo;
  const bool below = open_hi ? v < hi : v <= hi;
  return above && below;
}

EvalDomain EvalDomain::parse(std::string_view text) {
  std::string_view s = text;
  EvalDomain d;
  if (!s.empty() && (s.front() == '(' || s.front() == '[')) {
    d.open_lo = s.front() == '(';
    s.remove_prefix(1);
  }
  if (!s.empty() && (s.back() == ')' || s.back() == ']')) {
    d.open_hi = s.back() == ')';
    s.remove_suffix(1);
  }
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("invalid domain '" + std::string(text) + "': expected lo:hi");
  }
  d.lo = parse_number(s.substr(0, colon), text);
  d.hi = parse_number(s.substr(colon + 1), text);
  if (!(d.lo < d.hi)) {
    throw std::invalid_argument("invalid domain '" + std::string(text) + "': need lo < hi");
  }
  return d;
}

std::string EvalDomain::to_string() const {
  return std::string(open_lo ? "(" : "[") + format_double(lo) + ":" + format_double(hi) +
         (open_hi ? ")" : "]");
}

std::vector<double> grid_points(const EvalDomain& d, std::size_t n) {
  if (n == 0) return {};
  const std::size_t skip_lo = d.open_lo ? 1 : 0;
  const std::size_t total = n + skip_lo + (d.open_hi ? 1 : 0);
  if (total == 1) return {d.lo};
  const std::size_t m = total - 1;
  std::vector<double> pts;
  pts.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = k + skip_lo;
    if (i == 0) {
      pts.push_back(d.lo);
    } else if (i == m) {
      pts.push_back(d.hi);
    } else {
      pts.push_back(d.lo + (d.hi - d.lo) * (static_cast<double>(i) / static_cast<double>(m)));
    }
  }
  return pts;
}

}  // namespace hconvex
