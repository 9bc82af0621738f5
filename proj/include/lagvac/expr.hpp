#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace lagvac {

/// Closed-form scalar expression in x1, x2, x3 and t.
///
/// Grammar: numbers, the constant `pi`, the variables, + - * / ^ (right
/// associative), parentheses and the functions sin, cos, exp, log, sqrt.
/// Expressions can be differentiated symbolically, which is how analytic
/// derivatives of user-supplied weights and manufactured solutions are built.
class Expression {
 public:
  enum class Var { x1 = 0, x2 = 1, x3 = 2, t = 3 };
  using Point = std::array<double, 4>;  // x1, x2, x3, t

  struct Node;

  Expression();  // the constant 0
  static Expression parse(std::string_view text);
  static Expression constant(double value);
  static Expression variable(Var v);

  double operator()(const Point& p) const;
  double operator()(double x1, double x2, double x3, double t = 0.0) const { return (*this)({x1, x2, x3, t}); }

  Expression derivative(Var v) const;
  Expression derivative(Var v, int order) const;

  bool depends_on(Var v) const;
  bool is_constant() const;
  std::string to_string() const;

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression pow(const Expression& a, const Expression& b);

 private:
  explicit Expression(std::shared_ptr<const Node> root);
  void compile();

  struct Instr {
    int op;
    int var;
    double value;
  };

  std::shared_ptr<const Node> root_;
  std::vector<Instr> program_;
  int stack_depth_ = 0;
};

}  // namespace lagvac
