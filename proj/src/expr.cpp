#include "ergolab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "ergolab/errors.hpp"

namespace ergolab {
namespace {

NodePtr make_leaf(Op op) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->has_var = op == Op::Var;
  return n;
}

NodePtr make_node(Op op, NodePtr lhs, NodePtr rhs = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->has_var = lhs->has_var || (rhs && rhs->has_var);
  n->size = 1 + lhs->size + (rhs ? rhs->size : 0);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

// Constants that may take part in folding. Decimal literals are left alone
// so that printing reproduces them.
std::optional<Rational> foldable(const HardyExpr& e) {
  if (e.op() == Op::Const && !e.node().decimal) return e.node().value;
  return std::nullopt;
}

bool is_value(const HardyExpr& e, std::int64_t v) {
  return e.op() == Op::Const && e.node().value == Rational(v);
}

std::string decimal_string(const Rational& q) {
  using i128 = __int128;
  std::int64_t den = q.den();
  int twos = 0;
  int fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return q.str();
  int k = std::max(twos, fives);
  if (k == 0) k = 1;
  i128 scale = 1;
  for (int j = 0; j < k; ++j) scale *= 10;
  i128 mag = static_cast<i128>(q.num() < 0 ? -q.num() : q.num()) * (scale / q.den());
  std::string digits;
  while (mag > 0) {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  }
  while (static_cast<int>(digits.size()) <= k) digits.insert(digits.begin(), '0');
  digits.insert(digits.end() - k, '.');
  return (q.sign() < 0 ? "-" : "") + digits;
}

bool equal_nodes(const ExprNode* a, const ExprNode* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->size != b->size) return false;
  switch (a->op) {
    case Op::Const: return a->value == b->value && a->decimal == b->decimal;
    case Op::Named: return a->named == b->named;
    case Op::Var: return true;
    default: return equal_nodes(a->lhs.get(), b->lhs.get()) && equal_nodes(a->rhs.get(), b->rhs.get());
  }
}

// ---- printing ----

int level(const ExprNode& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const: return n.value.sign() >= 0 && !n.value.is_integer() && !n.decimal ? 2 : 5;
    default: return 5;
  }
}

void print(const ExprNode& n, int min_level, std::string& out);

void print_operand(const ExprNode& n, int min_level, std::string& out) {
  if (level(n) < min_level) {
    out += '(';
    print(n, 0, out);
    out += ')';
  } else {
    print(n, min_level, out);
  }
}

void print(const ExprNode& n, int, std::string& out) {
  switch (n.op) {
    case Op::Const: {
      std::string text = n.decimal ? decimal_string(n.value) : n.value.str();
      out += n.value.sign() < 0 ? '(' + text + ')' : text;
      return;
    }
    case Op::Named: out += named_const_name(n.named); return;
    case Op::Var: out += 't'; return;
    case Op::Add:
    case Op::Sub:
      print_operand(*n.lhs, 1, out);
      out += n.op == Op::Add ? '+' : '-';
      print_operand(*n.rhs, 2, out);
      return;
    case Op::Mul:
    case Op::Div:
      print_operand(*n.lhs, 2, out);
      out += n.op == Op::Mul ? '*' : '/';
      print_operand(*n.rhs, 3, out);
      return;
    case Op::Neg:
      out += '-';
      print_operand(*n.lhs, 3, out);
      return;
    case Op::Pow:
      print_operand(*n.lhs, 5, out);
      out += '^';
      print_operand(*n.rhs, 5, out);
      return;
    case Op::Ln:
    case Op::Exp:
      out += n.op == Op::Ln ? "ln(" : "exp(";
      print(*n.lhs, 0, out);
      out += ')';
      return;
  }
}

// ---- parsing ----

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  HardyExpr run() {
    HardyExpr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  HardyExpr expr() {
    HardyExpr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  HardyExpr term() {
    HardyExpr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        HardyExpr rhs = unary();
        if (is_value(rhs, 0)) throw ParseError("division by zero", at);
        lhs = lhs / rhs;
      } else {
        return lhs;
      }
    }
  }

  HardyExpr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  HardyExpr power() {
    HardyExpr base = atom();
    if (accept('^')) {
      std::size_t at = pos_;
      HardyExpr ex = unary();
      if (!ex.is_constant()) throw ParseError("exponent must be constant", at);
      return pow(base, ex);
    }
    return base;
  }

  HardyExpr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      HardyExpr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      std::string_view lit = s_.substr(start, pos_ - start);
      auto q = Rational::parse(lit);
      if (!q) throw ParseError("invalid number", start);
      return HardyExpr::constant(*q, lit.find('.') != std::string_view::npos);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      if (name == "t") return HardyExpr::var();
      if (name == "sqrt2") return HardyExpr::named(NamedConst::Sqrt2);
      if (name == "sqrt3") return HardyExpr::named(NamedConst::Sqrt3);
      if (name == "sqrt5") return HardyExpr::named(NamedConst::Sqrt5);
      if (name == "phi") return HardyExpr::named(NamedConst::Phi);
      if (name == "pi") return HardyExpr::named(NamedConst::Pi);
      if (name == "e") return HardyExpr::named(NamedConst::E);
      if (name == "ln" || name == "log" || name == "exp" || name == "sqrt") {
        expect('(');
        HardyExpr arg = expr();
        expect(')');
        if (name == "exp") return exp(arg);
        if (name == "sqrt") return pow(arg, Rational::of(1, 2));
        return ln(arg);
      }
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

HardyExpr::HardyExpr() : node_(make_leaf(Op::Const)) {}

HardyExpr::HardyExpr(NodePtr node) : node_(std::move(node)) {
  if (!node_) throw Error(ErrorCode::Internal, "null expression node");
}

HardyExpr HardyExpr::constant(const Rational& q, bool decimal) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Const;
  n->value = q;
  n->decimal = decimal;
  return HardyExpr(n);
}

HardyExpr HardyExpr::named(NamedConst c) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Named;
  n->named = c;
  return HardyExpr(n);
}

HardyExpr HardyExpr::var() { return HardyExpr(make_leaf(Op::Var)); }

HardyExpr HardyExpr::parse(std::string_view text) { return Parser(text).run(); }

std::string HardyExpr::str() const {
  std::string out;
  print(*node_, 0, out);
  return out;
}

std::optional<Rational> HardyExpr::as_rational() const {
  if (op() == Op::Const) return node_->value;
  return std::nullopt;
}

bool HardyExpr::has_decimal() const {
  std::function<bool(const ExprNode*)> walk = [&](const ExprNode* n) {
    if (!n) return false;
    if (n->op == Op::Const && n->decimal) return true;
    return walk(n->lhs.get()) || walk(n->rhs.get());
  };
  return walk(node_.get());
}

bool HardyExpr::contains(Op op) const {
  std::function<bool(const ExprNode*)> walk = [&](const ExprNode* n) {
    if (!n) return false;
    if (n->op == op) return true;
    return walk(n->lhs.get()) || walk(n->rhs.get());
  };
  return walk(node_.get());
}

HardyExpr HardyExpr::substitute(const HardyExpr& replacement) const {
  const ExprNode& n = *node_;
  if (!n.has_var) return *this;
  switch (n.op) {
    case Op::Var: return replacement;
    case Op::Add: return lhs().substitute(replacement) + rhs().substitute(replacement);
    case Op::Sub: return lhs().substitute(replacement) - rhs().substitute(replacement);
    case Op::Mul: return lhs().substitute(replacement) * rhs().substitute(replacement);
    case Op::Div: return lhs().substitute(replacement) / rhs().substitute(replacement);
    case Op::Neg: return -lhs().substitute(replacement);
    case Op::Pow: return pow(lhs().substitute(replacement), rhs());
    case Op::Ln: return ln(lhs().substitute(replacement));
    case Op::Exp: return exp(lhs().substitute(replacement));
    default: return *this;
  }
}

HardyExpr HardyExpr::shifted(const Rational& r) const {
  return substitute(var() + constant(r));
}

HardyExpr operator+(const HardyExpr& a, const HardyExpr& b) {
  auto qa = foldable(a);
  auto qb = foldable(b);
  if (qa && qb) {
    if (auto s = Rational::try_add(*qa, *qb)) return HardyExpr::constant(*s);
  }
  if (qa && qa->is_zero()) return b;
  if (qb && qb->is_zero()) return a;
  return HardyExpr(make_node(Op::Add, a.ptr(), b.ptr()));
}

HardyExpr operator-(const HardyExpr& a, const HardyExpr& b) {
  auto qa = foldable(a);
  auto qb = foldable(b);
  if (qa && qb) {
    if (auto s = Rational::try_sub(*qa, *qb)) return HardyExpr::constant(*s);
  }
  if (qb && qb->is_zero()) return a;
  if (qa && qa->is_zero()) return -b;
  return HardyExpr(make_node(Op::Sub, a.ptr(), b.ptr()));
}

HardyExpr operator*(const HardyExpr& a, const HardyExpr& b) {
  auto qa = foldable(a);
  auto qb = foldable(b);
  if (qa && qb) {
    if (auto s = Rational::try_mul(*qa, *qb)) return HardyExpr::constant(*s);
  }
  if ((qa && qa->is_zero()) || (qb && qb->is_zero())) return HardyExpr::constant(0);
  if (qa && *qa == Rational(1)) return b;
  if (qb && *qb == Rational(1)) return a;
  if (qa && *qa == Rational(-1)) return -b;
  return HardyExpr(make_node(Op::Mul, a.ptr(), b.ptr()));
}

HardyExpr operator/(const HardyExpr& a, const HardyExpr& b) {
  auto qa = foldable(a);
  auto qb = foldable(b);
  if (is_value(b, 0)) throw DomainError("division by the constant 0");
  if (qa && qb) {
    if (auto s = Rational::try_div(*qa, *qb)) return HardyExpr::constant(*s);
  }
  if (qb && *qb == Rational(1)) return a;
  if (qa && qa->is_zero()) return HardyExpr::constant(0);
  return HardyExpr(make_node(Op::Div, a.ptr(), b.ptr()));
}

HardyExpr HardyExpr::operator-() const {
  if (auto q = as_rational()) return constant(-*q, node_->decimal);
  if (op() == Op::Neg) return lhs();
  return HardyExpr(make_node(Op::Neg, node_));
}

bool operator==(const HardyExpr& a, const HardyExpr& b) { return equal_nodes(a.node_.get(), b.node_.get()); }

HardyExpr pow(const HardyExpr& base, const HardyExpr& exponent) {
  if (!exponent.is_constant()) throw Unsupported("variable exponent in power");
  auto qe = foldable(exponent);
  if (qe && qe->is_zero()) return HardyExpr::constant(1);
  if (qe && *qe == Rational(1)) return base;
  auto qb = foldable(base);
  if (qb && *qb == Rational(1)) return base;
  if (qb && qe) {
    if (auto r = Rational::try_pow(*qb, *qe)) return HardyExpr::constant(*r);
  }
  return HardyExpr(make_node(Op::Pow, base.ptr(), exponent.ptr()));
}

HardyExpr pow(const HardyExpr& base, const Rational& exponent) {
  return pow(base, HardyExpr::constant(exponent));
}

HardyExpr ln(const HardyExpr& a) {
  if (is_value(a, 1)) return HardyExpr::constant(0);
  return HardyExpr(make_node(Op::Ln, a.ptr()));
}

HardyExpr exp(const HardyExpr& a) {
  if (is_value(a, 0)) return HardyExpr::constant(1);
  return HardyExpr(make_node(Op::Exp, a.ptr()));
}

namespace {

HardyExpr derive(const HardyExpr& e) {
  if (e.is_constant()) return HardyExpr::constant(0);
  switch (e.op()) {
    case Op::Var: return HardyExpr::constant(1);
    case Op::Add: return derive(e.lhs()) + derive(e.rhs());
    case Op::Sub: return derive(e.lhs()) - derive(e.rhs());
    case Op::Neg: return -derive(e.lhs());
    case Op::Mul: {
      HardyExpr a = e.lhs();
      HardyExpr b = e.rhs();
      return derive(a) * b + a * derive(b);
    }
    case Op::Div: {
      HardyExpr a = e.lhs();
      HardyExpr b = e.rhs();
      if (b.is_constant()) return derive(a) / b;
      return derive(a) / b - a * derive(b) / pow(b, Rational(2));
    }
    case Op::Pow: {
      HardyExpr base = e.lhs();
      HardyExpr ex = e.rhs();
      return ex * pow(base, ex - HardyExpr::constant(1)) * derive(base);
    }
    case Op::Ln: return derive(e.lhs()) / e.lhs();
    case Op::Exp: return e * derive(e.lhs());
    default: throw Error(ErrorCode::Internal, "malformed expression tree");
  }
}

}  // namespace

HardyExpr differentiate(const HardyExpr& expr, int order) {
  require(order >= 1, "derivative order must be >= 1");
  HardyExpr d = expr;
  for (int k = 0; k < order; ++k) d = derive(d);
  return d;
}

}  // namespace ergolab
