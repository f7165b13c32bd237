#include "geodetica/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>

#include "geodetica/error.hpp"

namespace geodetica {

namespace {

struct FunctionEntry {
  std::string_view name;
  Function fn;
};

constexpr FunctionEntry kFunctions[] = {
    {"sin", Function::Sin},   {"cos", Function::Cos},   {"tan", Function::Tan},
    {"asin", Function::Asin}, {"acos", Function::Acos}, {"atan", Function::Atan},
    {"sinh", Function::Sinh}, {"cosh", Function::Cosh}, {"tanh", Function::Tanh},
    {"exp", Function::Exp},   {"log", Function::Log},   {"sqrt", Function::Sqrt},
    {"abs", Function::Abs},
};

std::optional<Function> lookup_function(std::string_view name) {
  for (const auto& entry : kFunctions)
    if (entry.name == name) return entry.fn;
  return std::nullopt;
}

std::optional<double> lookup_reserved(std::string_view name) {
  if (name == "pi") return std::numbers::pi;
  if (name == "e") return std::numbers::e;
  return std::nullopt;
}

ast::NodePtr make(auto&& payload) {
  return std::make_shared<const ast::Node>(ast::Node{std::forward<decltype(payload)>(payload)});
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ast::NodePtr parse() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    ast::NodePtr root = expression();
    skip_space();
    if (pos_ < text_.size())
      throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
    return root;
  }

 private:
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
    skip_space();
    if (pos_ >= text_.size())
      throw ParseError(std::string("unexpected end of input, expected '") + c + "'", pos_);
    if (text_[pos_] != c)
      throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  ast::NodePtr expression() {
    ast::NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make(ast::Binary{'+', lhs, term()});
      else if (accept('-'))
        lhs = make(ast::Binary{'-', lhs, term()});
      else
        return lhs;
    }
  }

  ast::NodePtr term() {
    ast::NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make(ast::Binary{'*', lhs, unary()});
      else if (accept('/'))
        lhs = make(ast::Binary{'/', lhs, unary()});
      else
        return lhs;
    }
  }

  ast::NodePtr unary() {
    if (accept('-')) return make(ast::Negate{unary()});
    return power();
  }

  ast::NodePtr power() {
    ast::NodePtr base = primary();
    if (accept('^')) return make(ast::Binary{'^', base, unary()});
    return base;
  }

  ast::NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (c == '(') {
      ++pos_;
      ast::NodePtr inner = expression();
      expect(')');
      return inner;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  ast::NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    const std::string literal(text_.substr(start, pos_ - start));
    const double value = std::strtod(literal.c_str(), nullptr);
    if (!std::isfinite(value)) throw ParseError("numeric literal out of range", start);
    return make(ast::Number{value});
  }

  ast::NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      auto fn = lookup_function(name);
      if (!fn) throw ParseError("unknown function '" + name + "'", start);
      ++pos_;
      ast::NodePtr arg = expression();
      expect(')');
      return make(ast::Call{*fn, arg});
    }
    if (lookup_function(name))
      throw ParseError("function '" + name + "' used without argument", start);
    if (auto v = lookup_reserved(name)) return make(ast::NamedConstant{name, *v});
    return make(ast::Variable{name});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void collect_variables(const ast::Node& node, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::Variable>) {
          if (std::find(out.begin(), out.end(), n.name) == out.end()) out.push_back(n.name);
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          collect_variables(*n.operand, out);
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          collect_variables(*n.lhs, out);
          collect_variables(*n.rhs, out);
        } else if constexpr (std::is_same_v<T, ast::Call>) {
          collect_variables(*n.arg, out);
        }
      },
      node.data);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_node(const ast::Node& node, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::Number>) {
          out += format_number(n.value);
        } else if constexpr (std::is_same_v<T, ast::Variable>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, ast::NamedConstant>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          out += "(-";
          print_node(*n.operand, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          out += '(';
          print_node(*n.lhs, out);
          out += n.op;
          print_node(*n.rhs, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, ast::Call>) {
          out += function_name(n.fn);
          out += '(';
          print_node(*n.arg, out);
          out += ')';
        }
      },
      node.data);
}

/// Exponent that is a literal integer, possibly negated.
std::optional<long> integer_exponent(const ast::Node& node) {
  if (const auto* num = std::get_if<ast::Number>(&node.data)) {
    if (std::trunc(num->value) == num->value && std::abs(num->value) < 1e9)
      return static_cast<long>(num->value);
    return std::nullopt;
  }
  if (const auto* neg = std::get_if<ast::Negate>(&node.data)) {
    if (auto inner = integer_exponent(*neg->operand)) return -*inner;
  }
  return std::nullopt;
}

// Scalar arithmetic with the same domain rules the jet arithmetic enforces.
struct ScalarOps {
  using Value = double;
  const Bindings& bindings;

  double constant(double v) const { return v; }
  double variable(const std::string& name) const {
    auto it = bindings.find(name);
    if (it == bindings.end()) throw UnboundVariable({name});
    return it->second;
  }
  static double divide(double a, double b) {
    if (b == 0.0) throw DomainError("division by zero");
    return a / b;
  }
  static double int_pow(double x, long n) {
    if (n == 0) return 1.0;
    if (n < 0) {
      const double p = int_pow(x, -n);
      if (p == 0.0) throw DomainError("division by zero");
      return 1.0 / p;
    }
    double r = x;
    for (long i = 1; i < n; ++i) r *= x;
    return r;
  }
  static double real_pow(double x, double y) {
    if (!(x > 0.0)) throw DomainError("non-integer power of non-positive base");
    return std::exp(y * std::log(x));
  }
  static double apply(Function f, double x) {
    switch (f) {
      case Function::Sin: return std::sin(x);
      case Function::Cos: return std::cos(x);
      case Function::Tan:
        if (std::cos(x) == 0.0) throw DomainError("tan at a pole");
        return std::tan(x);
      case Function::Asin:
        if (std::abs(x) > 1.0) throw DomainError("asin argument outside [-1, 1]");
        return std::asin(x);
      case Function::Acos:
        if (std::abs(x) > 1.0) throw DomainError("acos argument outside [-1, 1]");
        return std::acos(x);
      case Function::Atan: return std::atan(x);
      case Function::Sinh: return std::sinh(x);
      case Function::Cosh: return std::cosh(x);
      case Function::Tanh: return std::tanh(x);
      case Function::Exp: return std::exp(x);
      case Function::Log:
        if (!(x > 0.0)) throw DomainError("log of non-positive value");
        return std::log(x);
      case Function::Sqrt:
        if (x < 0.0) throw DomainError("sqrt of negative value");
        return std::sqrt(x);
      case Function::Abs: return std::abs(x);
    }
    return 0.0;
  }
};

struct JetOps {
  using Value = Jet3;
  std::span<const std::string> actives;
  std::span<const double> point;
  int order;
  const Bindings& constants;

  Jet3 constant(double v) const { return Jet3::constant(v, static_cast<int>(actives.size()), order); }
  Jet3 variable(const std::string& name) const {
    const int n = static_cast<int>(actives.size());
    for (int i = 0; i < n; ++i)
      if (actives[i] == name) return Jet3::variable(point[i], i, n, order);
    auto it = constants.find(name);
    if (it == constants.end()) throw UnboundVariable({name});
    return constant(it->second);
  }
  static Jet3 divide(const Jet3& a, const Jet3& b) { return a / b; }
  static Jet3 int_pow(const Jet3& x, long n) { return integer_power(x, n); }
  static Jet3 real_pow(const Jet3& x, const Jet3& y) {
    if (!(x.value > 0.0)) throw DomainError("non-integer power of non-positive base");
    return exp(y * log(x));
  }
  static Jet3 apply(Function f, const Jet3& x) {
    switch (f) {
      case Function::Sin: return sin(x);
      case Function::Cos: return cos(x);
      case Function::Tan: return tan(x);
      case Function::Asin: return asin(x);
      case Function::Acos: return acos(x);
      case Function::Atan: return atan(x);
      case Function::Sinh: return sinh(x);
      case Function::Cosh: return cosh(x);
      case Function::Tanh: return tanh(x);
      case Function::Exp: return exp(x);
      case Function::Log: return log(x);
      case Function::Sqrt: return sqrt(x);
      case Function::Abs: return abs(x);
    }
    return x;
  }
};

template <typename Ops>
typename Ops::Value evaluate(const ast::Node& node, const Ops& ops) {
  using V = typename Ops::Value;
  return std::visit(
      [&](const auto& n) -> V {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::Number>) {
          return ops.constant(n.value);
        } else if constexpr (std::is_same_v<T, ast::Variable>) {
          return ops.variable(n.name);
        } else if constexpr (std::is_same_v<T, ast::NamedConstant>) {
          return ops.constant(n.value);
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          return -evaluate(*n.operand, ops);
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          if (n.op == '^') {
            const V base = evaluate(*n.lhs, ops);
            if (auto k = integer_exponent(*n.rhs)) return Ops::int_pow(base, *k);
            return Ops::real_pow(base, evaluate(*n.rhs, ops));
          }
          const V a = evaluate(*n.lhs, ops);
          const V b = evaluate(*n.rhs, ops);
          switch (n.op) {
            case '+': return a + b;
            case '-': return a - b;
            case '*': return a * b;
            default: return Ops::divide(a, b);
          }
        } else {
          return Ops::apply(n.fn, evaluate(*n.arg, ops));
        }
      },
      node.data);
}

}  // namespace

std::string_view function_name(Function f) {
  for (const auto& entry : kFunctions)
    if (entry.fn == f) return entry.name;
  return "?";
}

bool is_valid_variable_name(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return !lookup_function(name) && !lookup_reserved(name);
}

Expression Expression::parse(std::string_view text) {
  Parser parser(text);
  ast::NodePtr root = parser.parse();
  return Expression(std::move(root), std::string(text));
}

std::vector<std::string> Expression::free_variables() const {
  std::vector<std::string> out;
  if (root_) collect_variables(*root_, out);
  return out;
}

std::string Expression::print() const {
  std::string out;
  if (root_) print_node(*root_, out);
  return out;
}

double Expression::eval(const Bindings& bindings) const {
  if (!root_) throw InputError("evaluating an empty expression");
  auto missing = unbound_names(*this, {}, bindings);
  if (!missing.empty()) throw UnboundVariable(std::move(missing));
  return evaluate(*root_, ScalarOps{bindings});
}

Jet3 Expression::eval_jet(std::span<const std::string> actives, std::span<const double> point,
                          int order, const Bindings& constants) const {
  if (!root_) throw InputError("evaluating an empty expression");
  if (actives.size() > static_cast<std::size_t>(Jet3::kMaxVars) || actives.empty())
    throw ShapeError("jet evaluation needs 1 to 3 active variables");
  if (point.size() != actives.size()) throw ShapeError("point length does not match actives");
  if (order < 0 || order > Jet3::kMaxOrder) throw ShapeError("jet order must be 0..3");
  for (std::size_t i = 0; i < actives.size(); ++i)
    for (std::size_t j = i + 1; j < actives.size(); ++j)
      if (actives[i] == actives[j]) throw ShapeError("duplicate active variable " + actives[i]);
  return evaluate(*root_, JetOps{actives, point, order, constants});
}

bool same_tree(const ast::Node& a, const ast::Node& b) {
  if (a.data.index() != b.data.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.data);
        if constexpr (std::is_same_v<T, ast::Number>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, ast::Variable>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, ast::NamedConstant>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          return same_tree(*x.operand, *y.operand);
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          return x.op == y.op && same_tree(*x.lhs, *y.lhs) && same_tree(*x.rhs, *y.rhs);
        } else {
          return x.fn == y.fn && same_tree(*x.arg, *y.arg);
        }
      },
      a.data);
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  return same_tree(a.root(), b.root());
}

std::vector<std::string> unbound_names(const Expression& e, std::span<const std::string> actives,
                                       const Bindings& constants) {
  std::vector<std::string> missing;
  for (const auto& name : e.free_variables()) {
    if (std::find(actives.begin(), actives.end(), name) != actives.end()) continue;
    if (constants.find(name) != constants.end()) continue;
    missing.push_back(name);
  }
  return missing;
}

}  // namespace geodetica
