#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hconvex/domain.hpp"

namespace hconvex {

// Grammar (single free variable `t`):
//
//   expr    = term , { ( "+" | "-" ) , term } ;
//   term    = unary , { ( "*" | "/" ) , unary } ;
//   unary   = ( "-" | "+" ) , unary | power ;
//   power   = primary , [ "^" , unary ] ;          (* right-associative *)
//   primary = number | "t" | constant | call | "(" , expr , ")" ;
//   call    = function , "(" , expr , { "," , expr } , ")" ;
//   constant = "pi" | "e" ;
//   function = "sin" | "cos" | "exp" | "log" | "sqrt" | "abs"   (* 1 arg *)
//            | "min" | "max" | "pow" ;                         (* 2 args *)
//   number  = digit , { digit } , [ "." , { digit } ] , [ exponent ]
//           | "." , digit , { digit } , [ exponent ] ;
//   exponent = ( "e" | "E" ) , [ "+" | "-" ] , digit , { digit } ;
//
// So "^" binds tighter than unary minus (-2^2 == -4) and "2^3^2" == 2^9.

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Func { Sin, Cos, Exp, Log, Sqrt, Abs, Min, Max, Pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
  double value;
};
struct Variable {};
struct Constant {
  std::string name;
  double value;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct Call {
  Func fn;
  std::vector<NodePtr> args;
};

struct Node {
  std::variant<Number, Variable, Constant, Negate, Binary, Call> data;
};

// Immutable parsed expression; cheap to copy and safe to evaluate concurrently.
class Expr {
public:
  Expr() = default;
  explicit Expr(NodePtr root, std::string source = {})
      : root_(std::move(root)), source_(std::move(source)) {}

  static Expr parse(std::string_view text);
  static Expr constant(double v);
  static Expr variable();

  // Throws DomainError when any subexpression leaves its domain or the result
  // is not finite.
  double operator()(double t) const;
  double eval(double t) const { return (*this)(t); }

  // Fully parenthesized text that parses back to an equivalent tree.
  std::string to_string() const;
  const std::string& source() const { return source_; }
  const NodePtr& root() const { return root_; }
  bool empty() const { return root_ == nullptr; }

private:
  NodePtr root_;
  std::string source_;
};

std::string to_string(const Node& node);
const char* func_name(Func fn);
std::size_t func_arity(Func fn);

struct DomainViolation {
  double t;
  std::string subexpr;
  std::string message;
};

std::vector<DomainViolation> check_domain(const Expr& e, const EvalDomain& d, std::size_t n);

}  // namespace hconvex
