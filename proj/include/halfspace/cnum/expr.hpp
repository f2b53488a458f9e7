#pragma once

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace halfspace::cnum {

using cplx = std::complex<double>;

/// Immutable expression tree in one complex variable z.
///
/// Nodes: constants, z, + - * /, unary minus, exp, log, sqrt, power.
/// log, sqrt and non-integer powers use the principal branch. Copies share
/// structure, so an Expr is cheap to pass by value and safe to evaluate from
/// many threads.
class Expr {
 public:
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Exp, Log, Sqrt, Pow };

  /// The zero constant.
  Expr();
  Expr(cplx c);  // NOLINT(google-explicit-constructor): literals read naturally
  Expr(double c) : Expr(cplx(c, 0.0)) {}  // NOLINT

  static Expr constant(cplx c) { return Expr(c); }
  static Expr variable();

  cplx operator()(cplx z) const;

  /// d/dz by tree rewriting, with light constant folding.
  Expr derivative() const;

  /// Substitutes `inner` for z: returns this(inner(z)).
  Expr compose(const Expr& inner) const;

  Op op() const;
  std::optional<cplx> constant_value() const;
  int depth() const;
  std::string to_string() const;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr log(const Expr& a);
  friend Expr sqrt(const Expr& a);
  friend Expr pow(const Expr& base, const Expr& exponent);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Op op, Expr a, Expr b);

  std::shared_ptr<const Node> node_;
};

/// Parses the configuration grammar:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?            right associative
///   primary := number | number 'i' | 'i' | 'z' | 'pi' | name
///            | ('exp' | 'log' | 'sqrt') '(' expr ')' | '(' expr ')'
///
/// `name` is looked up in `params` (real constants such as r1, r2).
/// Throws std::invalid_argument with the offending position on error.
Expr parse_expression(std::string_view text, const std::map<std::string, double>& params = {});

}  // namespace halfspace::cnum
