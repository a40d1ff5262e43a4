#include "hconvex/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hconvex/errors.hpp"
#include "hconvex/format.hpp"

namespace hconvex {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
};

const char* describe(Tok k) {
  switch (k) {
    case Tok::Number: return "number";
    case Tok::Ident: return "identifier";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
  }
  return "?";
}

[[noreturn]] void fail(std::size_t offset, std::vector<std::string> expected, const std::string& msg) {
  std::ostringstream os;
  os << "syntax error at offset " << offset << ": " << msg;
  if (!expected.empty()) {
    os << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) os << (i + 1 == expected.size() ? " or " : ", ");
      os << expected[i];
    }
    os << ")";
  }
  throw ParseError(offset, std::move(expected), os.str());
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  const auto digit = [&](std::size_t k) {
    return k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]));
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (digit(i) || (c == '.' && digit(i + 1))) {
      while (digit(i)) ++i;
      if (i < src.size() && src[i] == '.') {
        ++i;
        while (digit(i)) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t k = i + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (digit(k)) {
          i = k;
          while (digit(i)) ++i;
        }
      }
      Token tok{Tok::Number, start, src.substr(start, i - start)};
      auto [ptr, ec] = std::from_chars(src.data() + start, src.data() + i, tok.number);
      if (ec != std::errc{} || !std::isfinite(tok.number)) {
        fail(start, {}, "number out of range '" + std::string(tok.text) + "'");
      }
      out.push_back(tok);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        ++i;
      }
      out.push_back({Tok::Ident, start, src.substr(start, i - start)});
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      default:
        fail(start, {}, std::string("unexpected character '") + c + "'");
    }
    out.push_back({k, start, src.substr(start, 1)});
    ++i;
  }
  out.push_back({Tok::End, src.size(), {}});
  return out;
}

struct FuncEntry {
  std::string_view name;
  Func fn;
};

constexpr FuncEntry kFuncs[] = {
    {"sin", Func::Sin},   {"cos", Func::Cos}, {"exp", Func::Exp},
    {"log", Func::Log},   {"sqrt", Func::Sqrt}, {"abs", Func::Abs},
    {"min", Func::Min},   {"max", Func::Max}, {"pow", Func::Pow},
};

NodePtr make(auto&& payload) {
  return std::make_shared<const Node>(Node{std::forward<decltype(payload)>(payload)});
}

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  NodePtr parse() {
    if (peek().kind == Tok::End) fail(0, {"expression"}, "empty expression");
    NodePtr e = expr();
    if (peek().kind != Tok::End) {
      fail(peek().offset, {"operator", "end of input"},
           std::string("unexpected ") + describe(peek().kind));
    }
    return e;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  NodePtr expr() {
    NodePtr lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const BinaryOp op = next().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      lhs = make(Binary{op, lhs, term()});
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const BinaryOp op = next().kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
      lhs = make(Binary{op, lhs, unary()});
    }
    return lhs;
  }

  NodePtr unary() {
    if (peek().kind == Tok::Minus) {
      next();
      return make(Negate{unary()});
    }
    if (peek().kind == Tok::Plus) {
      next();
      return unary();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (peek().kind == Tok::Caret) {
      next();
      return make(Binary{BinaryOp::Pow, base, unary()});
    }
    return base;
  }

  NodePtr primary() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Number:
        next();
        return make(Number{tok.number});
      case Tok::LParen: {
        next();
        NodePtr inner = expr();
        expect(Tok::RParen);
        return inner;
      }
      case Tok::Ident:
        return identifier();
      default:
        fail(tok.offset, {"number", "'t'", "constant", "function", "'('", "'-'"},
             std::string("unexpected ") + describe(tok.kind));
    }
  }

  NodePtr identifier() {
    const Token tok = next();
    if (tok.text == "t") return make(Variable{});
    if (tok.text == "pi") return make(Constant{"pi", std::numbers::pi});
    if (tok.text == "e") return make(Constant{"e", std::numbers::e});
    for (const auto& entry : kFuncs) {
      if (entry.name != tok.text) continue;
      expect(Tok::LParen);
      std::vector<NodePtr> args{expr()};
      while (peek().kind == Tok::Comma) {
        next();
        args.push_back(expr());
      }
      const std::size_t close = peek().offset;
      expect(Tok::RParen);
      if (args.size() != func_arity(entry.fn)) {
        std::ostringstream os;
        os << "function '" << entry.name << "' takes " << func_arity(entry.fn)
           << " argument(s), got " << args.size();
        fail(close, {}, os.str());
      }
      return make(Call{entry.fn, std::move(args)});
    }
    fail(tok.offset, {"'t'", "pi", "e", "function name"},
         "unknown identifier '" + std::string(tok.text) + "'");
  }

  void expect(Tok kind) {
    if (peek().kind != kind) {
      fail(peek().offset, {describe(kind)}, std::string("unexpected ") + describe(peek().kind));
    }
    next();
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

[[noreturn]] void domain_fail(const Node& node, double t, const std::string& why) {
  std::string sub = to_string(node);
  throw DomainError(sub, t, why + " in '" + sub + "' at t=" + format_double(t));
}

double checked(const Node& node, double t, double v) {
  if (!std::isfinite(v)) domain_fail(node, t, "non-finite result");
  return v;
}

double eval_pow(const Node& node, double t, double base, double ex) {
  if (base < 0.0 && std::trunc(ex) != ex) domain_fail(node, t, "negative base with non-integer exponent");
  if (base == 0.0 && ex < 0.0) domain_fail(node, t, "division by zero");
  return checked(node, t, std::pow(base, ex));
}

double eval_node(const Node& node, double t) {
  struct Visitor {
    const Node& node;
    double t;

    double operator()(const Number& n) const { return n.value; }
    double operator()(const Variable&) const { return t; }
    double operator()(const Constant& c) const { return c.value; }
    double operator()(const Negate& n) const { return -eval_node(*n.operand, t); }
    double operator()(const Binary& b) const {
      const double l = eval_node(*b.lhs, t);
      const double r = eval_node(*b.rhs, t);
      switch (b.op) {
        case BinaryOp::Add: return checked(node, t, l + r);
        case BinaryOp::Sub: return checked(node, t, l - r);
        case BinaryOp::Mul: return checked(node, t, l * r);
        case BinaryOp::Div:
          if (r == 0.0) domain_fail(node, t, "division by zero");
          return checked(node, t, l / r);
        case BinaryOp::Pow: return eval_pow(node, t, l, r);
      }
      return 0.0;
    }
    double operator()(const Call& c) const {
      const double a = eval_node(*c.args[0], t);
      switch (c.fn) {
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Exp: return checked(node, t, std::exp(a));
        case Func::Log:
          if (a <= 0.0) domain_fail(node, t, "log of nonpositive value");
          return std::log(a);
        case Func::Sqrt:
          if (a < 0.0) domain_fail(node, t, "sqrt of negative value");
          return std::sqrt(a);
        case Func::Abs: return std::abs(a);
        case Func::Min: return std::min(a, eval_node(*c.args[1], t));
        case Func::Max: return std::max(a, eval_node(*c.args[1], t));
        case Func::Pow: return eval_pow(node, t, a, eval_node(*c.args[1], t));
      }
      return 0.0;
    }
  };
  return std::visit(Visitor{node, t}, node.data);
}

const char* op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Pow: return "^";
  }
  return "?";
}

}  // namespace

const char* func_name(Func fn) {
  for (const auto& entry : kFuncs) {
    if (entry.fn == fn) return entry.name.data();
  }
  return "?";
}

std::size_t func_arity(Func fn) {
  switch (fn) {
    case Func::Min:
    case Func::Max:
    case Func::Pow:
      return 2;
    default:
      return 1;
  }
}

std::string to_string(const Node& node) {
  struct Visitor {
    std::string operator()(const Number& n) const {
      const std::string s = format_double(n.value);
      return n.value < 0 ? "(" + s + ")" : s;
    }
    std::string operator()(const Variable&) const { return "t"; }
    std::string operator()(const Constant& c) const { return c.name; }
    std::string operator()(const Negate& n) const { return "(-" + to_string(*n.operand) + ")"; }
    std::string operator()(const Binary& b) const {
      return "(" + to_string(*b.lhs) + op_text(b.op) + to_string(*b.rhs) + ")";
    }
    std::string operator()(const Call& c) const {
      std::string s = std::string(func_name(c.fn)) + "(";
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        if (i) s += ",";
        s += to_string(*c.args[i]);
      }
      return s + ")";
    }
  };
  return std::visit(Visitor{}, node.data);
}

Expr Expr::parse(std::string_view text) {
  return Expr(Parser(text).parse(), std::string(text));
}

Expr Expr::constant(double v) {
  return Expr(make(Number{v}), format_double(v));
}

Expr Expr::variable() { return Expr(make(Variable{}), "t"); }

double Expr::operator()(double t) const {
  if (!root_) throw PreconditionError("evaluating an empty expression");
  return eval_node(*root_, t);
}

std::string Expr::to_string() const { return root_ ? hconvex::to_string(*root_) : std::string{}; }

std::vector<DomainViolation> check_domain(const Expr& e, const EvalDomain& d, std::size_t n) {
  if (n < 2) throw PreconditionError("check_domain needs n >= 2");
  std::vector<DomainViolation> out;
  for (double t : grid_points(d, n)) {
    try {
      (void)e(t);
    } catch (const DomainError& err) {
      out.push_back({t, err.subexpr(), err.what()});
    }
  }
  return out;
}

}  // namespace hconvex
