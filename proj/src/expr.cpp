#include "tlab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "tlab/error.hpp"
#include "tlab/kernels.hpp"

namespace tlab {

namespace {

class Parser {
public:
  explicit Parser(std::string_view src) : src_(src) {}

  std::vector<ExprNode> run() {
    parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError(pos_, "unexpected trailing input");
    return std::move(nodes_);
  }

private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw SyntaxError(pos_, std::string("expected '") + c + "'");
  }

  int push(ExprNode n) {
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        int rhs = parse_term();
        lhs = push({Op::Add, 0.0, lhs, rhs, 0});
      } else if (accept('-')) {
        int rhs = parse_term();
        lhs = push({Op::Sub, 0.0, lhs, rhs, 0});
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        int rhs = parse_factor();
        lhs = push({Op::Mul, 0.0, lhs, rhs, 0});
      } else if (accept('/')) {
        int rhs = parse_factor();
        lhs = push({Op::Div, 0.0, lhs, rhs, 0});
      } else {
        return lhs;
      }
    }
  }

  int parse_factor() {
    if (accept('-')) {
      int operand = parse_factor();
      return push({Op::Neg, 0.0, operand, -1, 0});
    }
    int base = parse_atom();
    if (accept('^')) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (start == pos_) throw SyntaxError(start, "exponent must be a non-negative integer literal");
      int e = 0;
      auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, e);
      if (ec != std::errc()) throw SyntaxError(start, "exponent out of range");
      if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E'))
        throw SyntaxError(pos_, "exponent must be a non-negative integer literal");
      return push({Op::Pow, 0.0, base, -1, e});
    }
    return base;
  }

  int parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError(pos_, "unexpected end of input");
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (accept('(')) {
      int inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      std::string_view id = src_.substr(start, pos_ - start);
      if (id == "x") return push({Op::VarX});
      if (id == "y") return push({Op::VarY});
      Op fn;
      if (id == "sin") fn = Op::Sin;
      else if (id == "cos") fn = Op::Cos;
      else if (id == "exp") fn = Op::Exp;
      else if (id == "sqrt") fn = Op::Sqrt;
      else if (id == "log") fn = Op::Log;
      else throw Error(ErrorCode::UnknownIdentifier,
                       "'" + std::string(id) + "' at offset " + std::to_string(start));
      expect('(');
      int arg = parse_expr();
      expect(')');
      return push({fn, 0.0, arg, -1, 0});
    }
    throw SyntaxError(pos_, std::string("unexpected character '") + c + "'");
  }

  int parse_number() {
    std::size_t start = pos_;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), value,
                                     std::chars_format::general);
    if (ec != std::errc()) throw SyntaxError(start, "malformed number");
    pos_ = static_cast<std::size_t>(ptr - src_.data());
    return push({Op::Const, value, -1, -1, 0});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<ExprNode> nodes_;
};

double checked(Op op, double a) {
  switch (op) {
    case Op::Sin: return std::sin(a);
    case Op::Cos: return std::cos(a);
    case Op::Exp: return std::exp(a);
    case Op::Sqrt:
      if (a < 0.0) throw Error(ErrorCode::Domain, "sqrt of negative value");
      return std::sqrt(a);
    case Op::Log:
      if (!(a > 0.0)) throw Error(ErrorCode::Domain, "log of non-positive value");
      return std::log(a);
    default: break;
  }
  return a;
}

Jet4 checked(Op op, const Jet4& a) {
  switch (op) {
    case Op::Sin: return sin(a);
    case Op::Cos: return cos(a);
    case Op::Exp: return exp(a);
    case Op::Sqrt: return sqrt(a);
    case Op::Log: return log(a);
    default: break;
  }
  return a;
}

double divide(double a, double b) {
  if (b == 0.0) throw Error(ErrorCode::Domain, "division by zero");
  return a / b;
}
Jet4 divide(const Jet4& a, const Jet4& b) { return a / b; }

// Repeated squaring; the batch path mirrors this exact multiplication order.
template <class T>
T ipow(const T& base, int e) {
  T result(1.0);
  T b = base;
  bool first = true;
  while (e > 0) {
    if (e & 1) {
      result = first ? b : result * b;
      first = false;
    }
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return result;
}

template <class T>
T run_tape(std::span<const ExprNode> tape, const T& x, const T& y) {
  thread_local std::vector<T> vals;
  vals.resize(tape.size());
  for (std::size_t i = 0; i < tape.size(); ++i) {
    const ExprNode& n = tape[i];
    switch (n.op) {
      case Op::Const: vals[i] = T(n.value); break;
      case Op::VarX: vals[i] = x; break;
      case Op::VarY: vals[i] = y; break;
      case Op::Add: vals[i] = vals[n.lhs] + vals[n.rhs]; break;
      case Op::Sub: vals[i] = vals[n.lhs] - vals[n.rhs]; break;
      case Op::Mul: vals[i] = vals[n.lhs] * vals[n.rhs]; break;
      case Op::Div: vals[i] = divide(vals[n.lhs], vals[n.rhs]); break;
      case Op::Neg: vals[i] = -vals[n.lhs]; break;
      case Op::Pow: vals[i] = ipow(vals[n.lhs], n.exponent); break;
      default: vals[i] = checked(n.op, vals[n.lhs]); break;
    }
  }
  return vals.back();
}

constexpr std::size_t kBatchBlock = 512;

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::vector<ExprNode> tape, std::string source)
    : tape_(std::make_shared<const std::vector<ExprNode>>(std::move(tape))),
      source_(std::move(source)) {}

Expr Expr::parse(std::string_view source) {
  return Expr(Parser(source).run(), std::string(source));
}

Expr Expr::constant(double c) {
  std::ostringstream s;
  s.precision(17);
  s << c;
  return Expr({ExprNode{Op::Const, c, -1, -1, 0}}, s.str());
}

bool Expr::is_constant() const {
  return std::none_of(tape_->begin(), tape_->end(),
                      [](const ExprNode& n) { return n.op == Op::VarX || n.op == Op::VarY; });
}

double Expr::eval(Vec2 p) const { return run_tape<double>(*tape_, p.x, p.y); }

Jet4 Expr::eval(const Jet4& x, const Jet4& y) const { return run_tape<Jet4>(*tape_, x, y); }

std::vector<std::vector<double>> Expr::eval_batch_nodes(std::span<const double> xs,
                                                        std::span<const double> ys) const {
  if (xs.size() != ys.size()) throw Error(ErrorCode::SizeMismatch, "eval_batch coordinate arrays");
  const auto& k = kernels::active();
  const std::size_t n = xs.size();
  const auto& tape = *tape_;
  std::vector<std::vector<double>> vals(tape.size(), std::vector<double>(n));
  std::vector<double> scratch(n);
  for (std::size_t i = 0; i < tape.size(); ++i) {
    const ExprNode& node = tape[i];
    double* out = vals[i].data();
    switch (node.op) {
      case Op::Const: std::fill(vals[i].begin(), vals[i].end(), node.value); break;
      case Op::VarX: std::copy(xs.begin(), xs.end(), out); break;
      case Op::VarY: std::copy(ys.begin(), ys.end(), out); break;
      case Op::Add: k.add(vals[node.lhs].data(), vals[node.rhs].data(), out, n); break;
      case Op::Sub: k.sub(vals[node.lhs].data(), vals[node.rhs].data(), out, n); break;
      case Op::Mul: k.mul(vals[node.lhs].data(), vals[node.rhs].data(), out, n); break;
      case Op::Div: {
        const double* den = vals[node.rhs].data();
        k.div(vals[node.lhs].data(), den, out, n);
        for (std::size_t j = 0; j < n; ++j) {
          if (den[j] == 0.0) out[j] = std::nan("");
        }
        break;
      }
      case Op::Neg: k.neg(vals[node.lhs].data(), out, n); break;
      case Op::Pow: {
        // Same multiplication order as ipow().
        std::vector<double> base = vals[node.lhs];
        int e = node.exponent;
        bool first = true;
        std::fill(vals[i].begin(), vals[i].end(), 1.0);
        while (e > 0) {
          if (e & 1) {
            if (first) std::copy(base.begin(), base.end(), out);
            else k.mul(out, base.data(), out, n);
            first = false;
          }
          e >>= 1;
          if (e > 0) k.mul(base.data(), base.data(), base.data(), n);
        }
        break;
      }
      case Op::Sqrt: k.sqrt(vals[node.lhs].data(), out, n); break;
      case Op::Log: {
        const double* a = vals[node.lhs].data();
        for (std::size_t j = 0; j < n; ++j) out[j] = a[j] > 0.0 ? std::log(a[j]) : std::nan("");
        break;
      }
      case Op::Sin: {
        const double* a = vals[node.lhs].data();
        for (std::size_t j = 0; j < n; ++j) out[j] = std::sin(a[j]);
        break;
      }
      case Op::Cos: {
        const double* a = vals[node.lhs].data();
        for (std::size_t j = 0; j < n; ++j) out[j] = std::cos(a[j]);
        break;
      }
      case Op::Exp: {
        const double* a = vals[node.lhs].data();
        for (std::size_t j = 0; j < n; ++j) out[j] = std::exp(a[j]);
        break;
      }
    }
  }
  return vals;
}

void Expr::eval_batch(std::span<const double> xs, std::span<const double> ys,
                      std::span<double> out) const {
  if (xs.size() != ys.size() || xs.size() != out.size())
    throw Error(ErrorCode::SizeMismatch, "eval_batch arrays");
  for (std::size_t start = 0; start < xs.size(); start += kBatchBlock) {
    std::size_t len = std::min(kBatchBlock, xs.size() - start);
    auto vals = eval_batch_nodes(xs.subspan(start, len), ys.subspan(start, len));
    std::copy(vals.back().begin(), vals.back().end(), out.begin() + start);
  }
}

VectorField VectorField::parse(std::string_view vx, std::string_view vy) {
  return {Expr::parse(vx), Expr::parse(vy)};
}

VectorField VectorField::constant(Vec2 v) { return {Expr::constant(v.x), Expr::constant(v.y)}; }

VectorField VectorField::negated() const {
  return {Expr::parse("-(" + vx.source() + ")"), Expr::parse("-(" + vy.source() + ")")};
}

std::vector<double> lie_jet(const Expr& w, const VectorField& v, Vec2 p, int order) {
  if (order < 0 || order > Jet4::kOrder) throw Error(ErrorCode::Domain, "lie_jet order must be 0..4");
  // Taylor coefficients of the flow line through p: X_{k+1} = [v(X)]_k / (k+1).
  Jet4 X(p.x), Y(p.y);
  for (int k = 0; k < order; ++k) {
    Jet4 vx = v.vx.eval(X, Y);
    Jet4 vy = v.vy.eval(X, Y);
    X.coeff(k + 1) = vx.coeff(k) / (k + 1);
    Y.coeff(k + 1) = vy.coeff(k) / (k + 1);
  }
  Jet4 W = w.eval(X, Y);
  std::vector<double> out(order + 1);
  for (int k = 0; k <= order; ++k) out[k] = W.derivative(k);
  return out;
}

Vec2 gradient(const Expr& w, Vec2 p) {
  Jet4 gx = w.eval(Jet4::variable(p.x, 1.0), Jet4(p.y));
  Jet4 gy = w.eval(Jet4(p.x), Jet4::variable(p.y, 1.0));
  return {gx.coeff(1), gy.coeff(1)};
}

std::vector<std::string> lint_denominators(const Expr& e, std::array<double, 4> box, int samples) {
  std::vector<std::string> warnings;
  auto tape = e.tape();
  bool has_div = std::any_of(tape.begin(), tape.end(), [](const ExprNode& n) { return n.op == Op::Div; });
  if (!has_div) return warnings;
  std::vector<double> xs, ys;
  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < samples; ++j) {
      xs.push_back(box[0] + (box[1] - box[0]) * i / (samples - 1));
      ys.push_back(box[2] + (box[3] - box[2]) * j / (samples - 1));
    }
  }
  auto vals = e.eval_batch_nodes(xs, ys);
  for (std::size_t i = 0; i < tape.size(); ++i) {
    if (tape[i].op != Op::Div) continue;
    const auto& den = vals[tape[i].rhs];
    bool pos = false, neg = false, zero = false;
    for (double d : den) {
      if (std::isnan(d)) continue;
      if (d > 1e-12) pos = true;
      else if (d < -1e-12) neg = true;
      else zero = true;
    }
    if (zero || (pos && neg)) {
      std::ostringstream msg;
      msg << "denominator of division node " << i << " in '" << e.source()
          << "' can vanish on the sampled box";
      warnings.push_back(msg.str());
    }
  }
  return warnings;
}

}  // namespace tlab
