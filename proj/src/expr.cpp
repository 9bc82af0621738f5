#include "lagvac/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "lagvac/error.hpp"

namespace lagvac {

enum class Op { constant, variable, add, sub, mul, div, pow, neg, sin, cos, exp, log, sqrt };

struct Expression::Node {
  Op op;
  double value = 0.0;
  int var = 0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_const(double v) { return std::make_shared<Expression::Node>(Expression::Node{Op::constant, v, 0, nullptr, nullptr}); }
NodePtr make_var(int v) { return std::make_shared<Expression::Node>(Expression::Node{Op::variable, 0.0, v, nullptr, nullptr}); }
NodePtr make_unary(Op op, NodePtr a) {
  if (a->op == Op::constant) {
    const double x = a->value;
    switch (op) {
      case Op::neg: return make_const(-x);
      case Op::sin: return make_const(std::sin(x));
      case Op::cos: return make_const(std::cos(x));
      case Op::exp: return make_const(std::exp(x));
      case Op::log: return make_const(std::log(x));
      case Op::sqrt: return make_const(std::sqrt(x));
      default: break;
    }
  }
  if (op == Op::neg && a->op == Op::neg) return a->a;
  return std::make_shared<Expression::Node>(Expression::Node{op, 0.0, 0, std::move(a), nullptr});
}

bool is_value(const NodePtr& n, double v) { return n->op == Op::constant && n->value == v; }

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  if (a->op == Op::constant && b->op == Op::constant) {
    const double x = a->value, y = b->value;
    switch (op) {
      case Op::add: return make_const(x + y);
      case Op::sub: return make_const(x - y);
      case Op::mul: return make_const(x * y);
      case Op::div: return make_const(x / y);
      case Op::pow: return make_const(std::pow(x, y));
      default: break;
    }
  }
  switch (op) {
    case Op::add:
      if (is_value(a, 0.0)) return b;
      if (is_value(b, 0.0)) return a;
      break;
    case Op::sub:
      if (is_value(b, 0.0)) return a;
      if (is_value(a, 0.0)) return make_unary(Op::neg, b);
      break;
    case Op::mul:
      if (is_value(a, 0.0) || is_value(b, 0.0)) return make_const(0.0);
      if (is_value(a, 1.0)) return b;
      if (is_value(b, 1.0)) return a;
      break;
    case Op::div:
      if (is_value(a, 0.0)) return make_const(0.0);
      if (is_value(b, 1.0)) return a;
      break;
    case Op::pow:
      if (is_value(b, 0.0)) return make_const(1.0);
      if (is_value(b, 1.0)) return a;
      break;
    default: break;
  }
  return std::make_shared<Expression::Node>(Expression::Node{op, 0.0, 0, std::move(a), std::move(b)});
}

NodePtr diff(const NodePtr& n, int v) {
  switch (n->op) {
    case Op::constant: return make_const(0.0);
    case Op::variable: return make_const(n->var == v ? 1.0 : 0.0);
    case Op::add: return make_binary(Op::add, diff(n->a, v), diff(n->b, v));
    case Op::sub: return make_binary(Op::sub, diff(n->a, v), diff(n->b, v));
    case Op::mul:
      return make_binary(Op::add, make_binary(Op::mul, diff(n->a, v), n->b), make_binary(Op::mul, n->a, diff(n->b, v)));
    case Op::div: {
      auto num = make_binary(Op::sub, make_binary(Op::mul, diff(n->a, v), n->b), make_binary(Op::mul, n->a, diff(n->b, v)));
      return make_binary(Op::div, num, make_binary(Op::mul, n->b, n->b));
    }
    case Op::pow: {
      if (n->b->op == Op::constant) {
        const double c = n->b->value;
        return make_binary(Op::mul, make_binary(Op::mul, make_const(c), make_binary(Op::pow, n->a, make_const(c - 1.0))),
                           diff(n->a, v));
      }
      // d(u^w) = u^w (w' log u + w u'/u)
      auto t1 = make_binary(Op::mul, diff(n->b, v), make_unary(Op::log, n->a));
      auto t2 = make_binary(Op::div, make_binary(Op::mul, n->b, diff(n->a, v)), n->a);
      return make_binary(Op::mul, n, make_binary(Op::add, t1, t2));
    }
    case Op::neg: return make_unary(Op::neg, diff(n->a, v));
    case Op::sin: return make_binary(Op::mul, make_unary(Op::cos, n->a), diff(n->a, v));
    case Op::cos: return make_unary(Op::neg, make_binary(Op::mul, make_unary(Op::sin, n->a), diff(n->a, v)));
    case Op::exp: return make_binary(Op::mul, n, diff(n->a, v));
    case Op::log: return make_binary(Op::div, diff(n->a, v), n->a);
    case Op::sqrt: return make_binary(Op::div, diff(n->a, v), make_binary(Op::mul, make_const(2.0), n));
  }
  return make_const(0.0);
}

bool depends(const NodePtr& n, int v) {
  if (!n) return false;
  if (n->op == Op::variable) return n->var == v;
  return depends(n->a, v) || depends(n->b, v);
}

void print(const NodePtr& n, std::ostream& os) {
  static const char* names[] = {"x1", "x2", "x3", "t"};
  switch (n->op) {
    case Op::constant: os << n->value; return;
    case Op::variable: os << names[n->var]; return;
    case Op::add: os << '('; print(n->a, os); os << " + "; print(n->b, os); os << ')'; return;
    case Op::sub: os << '('; print(n->a, os); os << " - "; print(n->b, os); os << ')'; return;
    case Op::mul: os << '('; print(n->a, os); os << " * "; print(n->b, os); os << ')'; return;
    case Op::div: os << '('; print(n->a, os); os << " / "; print(n->b, os); os << ')'; return;
    case Op::pow: os << '('; print(n->a, os); os << " ^ "; print(n->b, os); os << ')'; return;
    case Op::neg: os << "(-"; print(n->a, os); os << ')'; return;
    case Op::sin: os << "sin("; print(n->a, os); os << ')'; return;
    case Op::cos: os << "cos("; print(n->a, os); os << ')'; return;
    case Op::exp: os << "exp("; print(n->a, os); os << ')'; return;
    case Op::log: os << "log("; print(n->a, os); os << ')'; return;
    case Op::sqrt: os << "sqrt("; print(n->a, os); os << ')'; return;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    auto n = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::invalid_input, "expression \"" + std::string(s_) + "\": " + msg + " at column " + std::to_string(pos_ + 1));
  }
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

  NodePtr expr() {
    auto n = term();
    for (;;) {
      if (accept('+')) n = make_binary(Op::add, n, term());
      else if (accept('-')) n = make_binary(Op::sub, n, term());
      else return n;
    }
  }
  NodePtr term() {
    auto n = unary();
    for (;;) {
      if (accept('*')) n = make_binary(Op::mul, n, unary());
      else if (accept('/')) n = make_binary(Op::div, n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make_unary(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    auto base = primary();
    if (accept('^')) return make_binary(Op::pow, base, unary());
    return base;
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    const char c = s_[pos_];
    if (accept('(')) {
      auto n = expr();
      if (!accept(')')) error("expected ')'");
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) error("malformed number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return make_const(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id(s_.substr(start, pos_ - start));
      if (id == "x1") return make_var(0);
      if (id == "x2") return make_var(1);
      if (id == "x3") return make_var(2);
      if (id == "t") return make_var(3);
      if (id == "pi") return make_const(std::numbers::pi);
      Op op;
      if (id == "sin") op = Op::sin;
      else if (id == "cos") op = Op::cos;
      else if (id == "exp") op = Op::exp;
      else if (id == "log") op = Op::log;
      else if (id == "sqrt") op = Op::sqrt;
      else {
        pos_ = start;
        error("unknown identifier '" + id + "'");
      }
      if (!accept('(')) error("expected '(' after " + id);
      auto arg = expr();
      if (!accept(')')) error("expected ')'");
      return make_unary(op, arg);
    }
    error("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

void emit(const NodePtr& n, std::vector<std::array<double, 3>>& prog) {
  if (n->a) emit(n->a, prog);
  if (n->b) emit(n->b, prog);
  prog.push_back({static_cast<double>(n->op), static_cast<double>(n->var), n->value});
}

}  // namespace

Expression::Expression() : Expression(make_const(0.0)) {}

Expression::Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) { compile(); }

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse()); }
Expression Expression::constant(double value) { return Expression(make_const(value)); }
Expression Expression::variable(Var v) { return Expression(make_var(static_cast<int>(v))); }

void Expression::compile() {
  std::vector<std::array<double, 3>> prog;
  emit(root_, prog);
  program_.clear();
  int depth = 0;
  stack_depth_ = 0;
  for (const auto& p : prog) {
    const auto op = static_cast<Op>(static_cast<int>(p[0]));
    program_.push_back({static_cast<int>(op), static_cast<int>(p[1]), p[2]});
    switch (op) {
      case Op::constant:
      case Op::variable: ++depth; break;
      case Op::add:
      case Op::sub:
      case Op::mul:
      case Op::div:
      case Op::pow: --depth; break;
      default: break;
    }
    stack_depth_ = std::max(stack_depth_, depth);
  }
}

double Expression::operator()(const Point& p) const {
  constexpr int kInline = 64;
  double inline_stack[kInline] = {};
  std::vector<double> heap;
  double* st = inline_stack;
  if (stack_depth_ > kInline) {
    heap.resize(static_cast<std::size_t>(stack_depth_));
    st = heap.data();
  }
  int top = -1;
  for (const Instr& in : program_) {
    switch (static_cast<Op>(in.op)) {
      case Op::constant: st[++top] = in.value; break;
      case Op::variable: st[++top] = p[static_cast<std::size_t>(in.var)]; break;
      case Op::add: st[top - 1] += st[top]; --top; break;
      case Op::sub: st[top - 1] -= st[top]; --top; break;
      case Op::mul: st[top - 1] *= st[top]; --top; break;
      case Op::div: st[top - 1] /= st[top]; --top; break;
      case Op::pow: st[top - 1] = std::pow(st[top - 1], st[top]); --top; break;
      case Op::neg: st[top] = -st[top]; break;
      case Op::sin: st[top] = std::sin(st[top]); break;
      case Op::cos: st[top] = std::cos(st[top]); break;
      case Op::exp: st[top] = std::exp(st[top]); break;
      case Op::log: st[top] = std::log(st[top]); break;
      case Op::sqrt: st[top] = std::sqrt(st[top]); break;
    }
  }
  return st[0];
}

Expression Expression::derivative(Var v) const { return Expression(diff(root_, static_cast<int>(v))); }

Expression Expression::derivative(Var v, int order) const {
  Expression e = *this;
  for (int k = 0; k < order; ++k) e = e.derivative(v);
  return e;
}

bool Expression::depends_on(Var v) const { return depends(root_, static_cast<int>(v)); }
bool Expression::is_constant() const { return root_->op == Op::constant; }

std::string Expression::to_string() const {
  std::ostringstream os;
  os.precision(17);
  print(root_, os);
  return os.str();
}

Expression operator+(const Expression& a, const Expression& b) { return Expression(make_binary(Op::add, a.root_, b.root_)); }
Expression operator-(const Expression& a, const Expression& b) { return Expression(make_binary(Op::sub, a.root_, b.root_)); }
Expression operator*(const Expression& a, const Expression& b) { return Expression(make_binary(Op::mul, a.root_, b.root_)); }
Expression operator/(const Expression& a, const Expression& b) { return Expression(make_binary(Op::div, a.root_, b.root_)); }
Expression pow(const Expression& a, const Expression& b) { return Expression(make_binary(Op::pow, a.root_, b.root_)); }

}  // namespace lagvac
