#include "halfspace/cnum/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace halfspace::cnum {

struct Expr::Node {
  Op op;
  cplx value;
  Expr a;
  Expr b;
};

namespace {

std::optional<int> small_integer(cplx c) {
  if (c.imag() != 0.0) return std::nullopt;
  const double r = c.real();
  if (r != std::floor(r) || std::abs(r) > 64.0) return std::nullopt;
  return static_cast<int>(r);
}

cplx integer_power(cplx base, int n) {
  if (n < 0) return 1.0 / integer_power(base, -n);
  cplx result(1.0, 0.0);
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

bool is_const(const Expr& e, double v) {
  const auto c = e.constant_value();
  return c && *c == cplx(v, 0.0);
}

}  // namespace

Expr::Expr() : Expr(cplx(0.0, 0.0)) {}

Expr::Expr(cplx c)
    : node_(std::make_shared<const Node>(Node{Op::Const, c, Expr(nullptr), Expr(nullptr)})) {}

Expr Expr::variable() {
  return Expr(std::make_shared<const Node>(Node{Op::Var, {}, Expr(nullptr), Expr(nullptr)}));
}

Expr Expr::make(Op op, Expr a, Expr b) {
  return Expr(std::make_shared<const Node>(Node{op, {}, std::move(a), std::move(b)}));
}

Expr::Op Expr::op() const { return node_->op; }

std::optional<cplx> Expr::constant_value() const {
  if (node_->op == Op::Const) return node_->value;
  return std::nullopt;
}

int Expr::depth() const {
  switch (node_->op) {
    case Op::Const:
    case Op::Var:
      return 1;
    case Op::Neg:
    case Op::Exp:
    case Op::Log:
    case Op::Sqrt:
      return 1 + node_->a.depth();
    default:
      return 1 + std::max(node_->a.depth(), node_->b.depth());
  }
}

cplx Expr::operator()(cplx z) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return z;
    case Op::Add: return n.a(z) + n.b(z);
    case Op::Sub: return n.a(z) - n.b(z);
    case Op::Mul: return n.a(z) * n.b(z);
    case Op::Div: return n.a(z) / n.b(z);
    case Op::Neg: return -n.a(z);
    case Op::Exp: return std::exp(n.a(z));
    case Op::Log: return std::log(n.a(z));
    case Op::Sqrt: return std::sqrt(n.a(z));
    case Op::Pow: {
      const cplx base = n.a(z);
      if (const auto c = n.b.constant_value()) {
        if (const auto k = small_integer(*c)) return integer_power(base, *k);
        return std::pow(base, *c);
      }
      return std::pow(base, n.b(z));
    }
  }
  return {};
}

Expr operator+(const Expr& a, const Expr& b) {
  const auto ca = a.constant_value();
  const auto cb = b.constant_value();
  if (ca && cb) return Expr(*ca + *cb);
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return Expr::make(Expr::Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  const auto ca = a.constant_value();
  const auto cb = b.constant_value();
  if (ca && cb) return Expr(*ca - *cb);
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return -b;
  return Expr::make(Expr::Op::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  const auto ca = a.constant_value();
  const auto cb = b.constant_value();
  if (ca && cb) return Expr(*ca * *cb);
  if (is_const(a, 0.0) || is_const(b, 0.0)) return Expr(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return Expr::make(Expr::Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  const auto ca = a.constant_value();
  const auto cb = b.constant_value();
  if (ca && cb) return Expr(*ca / *cb);
  if (is_const(b, 1.0)) return a;
  if (is_const(a, 0.0)) return Expr(0.0);
  return Expr::make(Expr::Op::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (const auto c = a.constant_value()) return Expr(-*c);
  if (a.op() == Expr::Op::Neg) return a.node_->a;
  return Expr::make(Expr::Op::Neg, a, Expr(nullptr));
}

Expr exp(const Expr& a) {
  if (const auto c = a.constant_value()) return Expr(std::exp(*c));
  return Expr::make(Expr::Op::Exp, a, Expr(nullptr));
}

Expr log(const Expr& a) {
  if (const auto c = a.constant_value()) return Expr(std::log(*c));
  return Expr::make(Expr::Op::Log, a, Expr(nullptr));
}

Expr sqrt(const Expr& a) {
  if (const auto c = a.constant_value()) return Expr(std::sqrt(*c));
  return Expr::make(Expr::Op::Sqrt, a, Expr(nullptr));
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (is_const(exponent, 0.0)) return Expr(1.0);
  if (is_const(exponent, 1.0)) return base;
  const auto cb = base.constant_value();
  const auto ce = exponent.constant_value();
  if (cb && ce) return Expr(std::pow(*cb, *ce));
  return Expr::make(Expr::Op::Pow, base, exponent);
}

Expr Expr::derivative() const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const: return Expr(0.0);
    case Op::Var: return Expr(1.0);
    case Op::Add: return n.a.derivative() + n.b.derivative();
    case Op::Sub: return n.a.derivative() - n.b.derivative();
    case Op::Neg: return -n.a.derivative();
    case Op::Mul: return n.a.derivative() * n.b + n.a * n.b.derivative();
    case Op::Div:
      return (n.a.derivative() * n.b - n.a * n.b.derivative()) / (n.b * n.b);
    case Op::Exp: return *this * n.a.derivative();
    case Op::Log: return n.a.derivative() / n.a;
    case Op::Sqrt: return n.a.derivative() / (Expr(2.0) * *this);
    case Op::Pow: {
      if (const auto c = n.b.constant_value())
        return Expr(*c) * pow(n.a, Expr(*c - 1.0)) * n.a.derivative();
      return *this * (n.b.derivative() * log(n.a) + n.b * n.a.derivative() / n.a);
    }
  }
  return Expr(0.0);
}

Expr Expr::compose(const Expr& inner) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const: return *this;
    case Op::Var: return inner;
    case Op::Add: return n.a.compose(inner) + n.b.compose(inner);
    case Op::Sub: return n.a.compose(inner) - n.b.compose(inner);
    case Op::Mul: return n.a.compose(inner) * n.b.compose(inner);
    case Op::Div: return n.a.compose(inner) / n.b.compose(inner);
    case Op::Neg: return -n.a.compose(inner);
    case Op::Exp: return exp(n.a.compose(inner));
    case Op::Log: return log(n.a.compose(inner));
    case Op::Sqrt: return sqrt(n.a.compose(inner));
    case Op::Pow: return pow(n.a.compose(inner), n.b.compose(inner));
  }
  return *this;
}

std::string Expr::to_string() const {
  const Node& n = *node_;
  std::ostringstream os;
  os.precision(17);
  switch (n.op) {
    case Op::Const:
      if (n.value.imag() == 0.0) {
        os << n.value.real();
      } else {
        os << '(' << n.value.real() << (n.value.imag() < 0 ? "-" : "+")
           << std::abs(n.value.imag()) << "i)";
      }
      break;
    case Op::Var: os << 'z'; break;
    case Op::Add: os << '(' << n.a.to_string() << " + " << n.b.to_string() << ')'; break;
    case Op::Sub: os << '(' << n.a.to_string() << " - " << n.b.to_string() << ')'; break;
    case Op::Mul: os << '(' << n.a.to_string() << " * " << n.b.to_string() << ')'; break;
    case Op::Div: os << '(' << n.a.to_string() << " / " << n.b.to_string() << ')'; break;
    case Op::Neg: os << "(-" << n.a.to_string() << ')'; break;
    case Op::Exp: os << "exp(" << n.a.to_string() << ')'; break;
    case Op::Log: os << "log(" << n.a.to_string() << ')'; break;
    case Op::Sqrt: os << "sqrt(" << n.a.to_string() << ')'; break;
    case Op::Pow: os << '(' << n.a.to_string() << " ^ " << n.b.to_string() << ')'; break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::map<std::string, double>& params)
      : text_(text), params_(params) {}

  Expr parse() {
    Expr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("expression parse error at " + std::to_string(pos_) + ": " + why +
                                " in '" + std::string(text_) + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) lhs = lhs + term();
      else if (accept('-')) lhs = lhs - term();
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = lhs * unary();
      else if (accept('/')) lhs = lhs / unary();
      else return lhs;
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return pow(base, unary());
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::string name = identifier();
      if (name == "z") return Expr::variable();
      if (name == "i") return Expr(cplx(0.0, 1.0));
      if (name == "pi") return Expr(std::numbers::pi);
      if (name == "exp" || name == "log" || name == "sqrt") {
        expect('(');
        Expr arg = expr();
        expect(')');
        if (name == "exp") return exp(arg);
        if (name == "log") return log(arg);
        return sqrt(arg);
      }
      if (const auto it = params_.find(name); it != params_.end()) return Expr(it->second);
      fail("unknown identifier '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Expr number() {
    const std::string rest(text_.substr(pos_));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(rest, &used);
    } catch (const std::exception&) {
      fail("malformed number");
    }
    pos_ += used;
    if (pos_ < text_.size() && text_[pos_] == 'i' &&
        (pos_ + 1 == text_.size() || !std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])))) {
      ++pos_;
      return Expr(cplx(0.0, v));
    }
    return Expr(v);
  }

  std::string_view text_;
  const std::map<std::string, double>& params_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expression(std::string_view text, const std::map<std::string, double>& params) {
  return Parser(text, params).parse();
}

}  // namespace halfspace::cnum
