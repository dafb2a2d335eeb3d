#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlab/jet.hpp"
#include "tlab/vec2.hpp"

namespace tlab {

enum class Op : unsigned char {
  Const, VarX, VarY, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Sqrt, Log,
};

/// One tape entry. Operands are indices of earlier entries, so the tape is
/// already in evaluation order.
struct ExprNode {
  Op op = Op::Const;
  double value = 0.0;  // Const
  int lhs = -1;
  int rhs = -1;
  int exponent = 0;  // Pow
};

/// Immutable parsed expression over x, y.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | atom ('^' uint)?
///   atom   := number | 'x' | 'y' | func '(' expr ')' | '(' expr ')'
///   func   := sin | cos | exp | sqrt | log
/// Unary minus binds looser than '^', so "-x^2" is -(x^2).
class Expr {
public:
  Expr();  // the constant 0
  static Expr parse(std::string_view source);
  static Expr constant(double c);

  const std::string& source() const { return source_; }
  std::span<const ExprNode> tape() const { return *tape_; }
  bool is_constant() const;

  /// Throws ErrorCode::Domain outside the real domain (sqrt/log of
  /// negatives, division by zero).
  double eval(Vec2 p) const;
  double eval(double x, double y) const { return eval(Vec2{x, y}); }
  Jet4 eval(const Jet4& x, const Jet4& y) const;

  /// Point-array evaluation through the SIMD kernel tapes. Domain
  /// violations produce NaN instead of throwing.
  void eval_batch(std::span<const double> xs, std::span<const double> ys,
                  std::span<double> out) const;

  /// Per-node values for a batch; row i holds tape entry i.
  std::vector<std::vector<double>> eval_batch_nodes(std::span<const double> xs,
                                                    std::span<const double> ys) const;

private:
  Expr(std::vector<ExprNode> tape, std::string source);

  std::shared_ptr<const std::vector<ExprNode>> tape_;
  std::string source_;
};

/// Planar field v = (vx, vy).
struct VectorField {
  Expr vx;
  Expr vy;

  static VectorField parse(std::string_view vx, std::string_view vy);
  static VectorField constant(Vec2 v);
  Vec2 eval(Vec2 p) const { return {vx.eval(p), vy.eval(p)}; }
  VectorField negated() const;
};

/// (w, L_v w, ..., L_v^(order) w) at p, via Taylor-jet integration of the
/// flow of v to the requested order. order <= 4.
std::vector<double> lie_jet(const Expr& w, const VectorField& v, Vec2 p, int order);

/// Gradient of w at p from first-order jets along the coordinate axes.
Vec2 gradient(const Expr& w, Vec2 p);

/// Warnings for division nodes whose denominator vanishes or changes sign on
/// a samples x samples grid over [x0,x1] x [y0,y1].
std::vector<std::string> lint_denominators(const Expr& e, std::array<double, 4> box,
                                           int samples = 33);

}  // namespace tlab
