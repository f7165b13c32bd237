#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geodetica/jet.hpp"

namespace geodetica {

/// Name -> value bindings for free variables and user constants.
using Bindings = std::map<std::string, double, std::less<>>;

enum class Function { Sin, Cos, Tan, Asin, Acos, Atan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Abs };

std::string_view function_name(Function f);

namespace ast {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
  double value;
};
struct Variable {
  std::string name;
};
/// Reserved constants `pi` and `e`.
struct NamedConstant {
  std::string name;
  double value;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  char op;  // one of + - * / ^
  NodePtr lhs;
  NodePtr rhs;
};
struct Call {
  Function fn;
  NodePtr arg;
};

struct Node {
  std::variant<Number, Variable, NamedConstant, Negate, Binary, Call> data;
};

}  // namespace ast

/// Immutable arithmetic expression over named variables.
///
/// Grammar (see docs/expression-grammar.md):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := '-' unary | power
///     power   := primary ('^' unary)?
///     primary := number | ident | ident '(' expr ')' | '(' expr ')'
///
/// `^` binds tighter than unary minus and is right-associative, so
/// `-x^2` is `-(x^2)` and `a^b^c` is `a^(b^c)`.
class Expression {
 public:
  Expression() = default;

  static Expression parse(std::string_view text);

  const ast::Node& root() const { return *root_; }
  const std::string& source() const { return source_; }
  bool empty() const { return root_ == nullptr; }

  /// Free variable names in order of first appearance.
  std::vector<std::string> free_variables() const;

  /// Fully parenthesized canonical form; parses back to the same tree.
  std::string print() const;

  double eval(const Bindings& bindings) const;

  /// Jet of the expression in the `actives` variables at `point`. Free
  /// variables not in `actives` are looked up in `constants`.
  Jet3 eval_jet(std::span<const std::string> actives, std::span<const double> point, int order,
                const Bindings& constants = {}) const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  explicit Expression(ast::NodePtr root, std::string source)
      : root_(std::move(root)), source_(std::move(source)) {}

  ast::NodePtr root_;
  std::string source_;
};

/// Structural equality of two trees (numbers compared bitwise).
bool same_tree(const ast::Node& a, const ast::Node& b);

// Free-function spellings of the operations above.
inline Expression parse(std::string_view text) { return Expression::parse(text); }
inline std::vector<std::string> free_variables(const Expression& e) { return e.free_variables(); }
inline double eval_scalar(const Expression& e, const Bindings& b) { return e.eval(b); }
inline Jet3 eval_jet(const Expression& e, std::span<const std::string> actives,
                     std::span<const double> point, int order, const Bindings& constants = {}) {
  return e.eval_jet(actives, point, order, constants);
}

/// True for names of the form [a-zA-Z][a-zA-Z0-9_]* that are neither a
/// function name nor a reserved constant.
bool is_valid_variable_name(std::string_view name);

/// Names in `e` that are bound neither by `actives` nor by `constants`.
std::vector<std::string> unbound_names(const Expression& e, std::span<const std::string> actives,
                                       const Bindings& constants);

}  // namespace geodetica
