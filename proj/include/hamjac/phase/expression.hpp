#pragma once

/// Small expression language for user-defined Hamiltonians and sections.
///
/// Grammar (whitespace insignificant):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := ('+' | '-') unary | power
///     power   := primary ('^' unary)?          right-associative
///     primary := number | identifier | identifier '(' expr ')' | '(' expr ')'
///
/// Functions: sin cos tan exp ln sqrt abs. The constant `pi` is predefined.
/// Identifiers resolve first against the coordinate table, then against the
/// bound parameters; anything else is an UnknownSymbolError.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hamjac/errors.hpp"
#include "hamjac/numerics/dual.hpp"

namespace hamjac {

using ParameterMap = std::map<std::string, double>;

/// 17 significant digits: reads back to the same double.
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace expr {

enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { sin, cos, tan, exp, ln, sqrt, abs };

inline std::optional<Function> function_from_name(std::string_view name) {
  if (name == "sin") return Function::sin;
  if (name == "cos") return Function::cos;
  if (name == "tan") return Function::tan;
  if (name == "exp") return Function::exp;
  if (name == "ln") return Function::ln;
  if (name == "sqrt") return Function::sqrt;
  if (name == "abs") return Function::abs;
  return std::nullopt;
}

inline std::string_view function_name(Function f) {
  switch (f) {
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::tan: return "tan";
    case Function::exp: return "exp";
    case Function::ln: return "ln";
    case Function::sqrt: return "sqrt";
    case Function::abs: return "abs";
  }
  return "?";
}

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
  double value;
};
struct Variable {
  std::size_t slot;
};
struct Parameter {
  std::size_t slot;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct Call {
  Function function;
  NodePtr argument;
};

struct Node {
  std::variant<Number, Variable, Parameter, Negate, Binary, Call> data;
};

/// Names visible to the parser. Each variable name maps to a slot of the
/// evaluation vector; several names may alias one slot.
class SymbolTable {
 public:
  void add_variable(std::string canonical, std::size_t slot) {
    if (canonical_.size() <= slot) canonical_.resize(slot + 1);
    canonical_[slot] = canonical;
    aliases_[std::move(canonical)] = slot;
  }
  void add_alias(std::string alias, std::size_t slot) { aliases_[std::move(alias)] = slot; }

  std::optional<std::size_t> variable(std::string_view name) const {
    auto it = aliases_.find(std::string(name));
    if (it == aliases_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t slot_count() const noexcept { return canonical_.size(); }
  const std::string& canonical_name(std::size_t slot) const { return canonical_.at(slot); }

  /// q1..qn, p1..pn, s; with aliases t and S for s, and q, p when n == 1.
  static SymbolTable extended(std::size_t n) {
    SymbolTable t;
    for (std::size_t i = 0; i < n; ++i) t.add_variable("q" + std::to_string(i + 1), i);
    for (std::size_t i = 0; i < n; ++i) t.add_variable("p" + std::to_string(i + 1), n + i);
    t.add_variable("s", 2 * n);
    t.add_alias("t", 2 * n);
    t.add_alias("S", 2 * n);
    if (n == 1) {
      t.add_alias("q", 0);
      t.add_alias("p", 1);
    }
    return t;
  }

  /// q1..qn, s: the base Q x R on which sections live.
  static SymbolTable base(std::size_t n) {
    SymbolTable t;
    for (std::size_t i = 0; i < n; ++i) t.add_variable("q" + std::to_string(i + 1), i);
    t.add_variable("s", n);
    t.add_alias("t", n);
    t.add_alias("S", n);
    if (n == 1) t.add_alias("q", 0);
    return t;
  }

  /// A single time variable t (alias s).
  static SymbolTable time() {
    SymbolTable t;
    t.add_variable("t", 0);
    t.add_alias("s", 0);
    return t;
  }

 private:
  std::vector<std::string> canonical_;
  std::map<std::string, std::size_t, std::less<>> aliases_;
};

namespace detail {

inline int precedence(const Node& n) {
  if (auto* b = std::get_if<Binary>(&n.data)) {
    switch (b->op) {
      case BinaryOp::add:
      case BinaryOp::sub: return 1;
      case BinaryOp::mul:
      case BinaryOp::div: return 2;
      case BinaryOp::pow: return 4;
    }
  }
  if (std::holds_alternative<Negate>(n.data)) return 3;
  return 5;
}

class Parser {
 public:
  Parser(std::string_view text, const SymbolTable& symbols, const ParameterMap& params,
         std::vector<std::pair<std::string, double>>& bindings)
      : text_(text), symbols_(symbols), params_(params), bindings_(bindings) {}

  NodePtr parse() {
    skip_space();
    if (at_end()) throw ParseError("empty expression", pos_);
    NodePtr n = parse_expr();
    skip_space();
    if (!at_end()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return n;
  }

 private:
  static NodePtr make(auto&& v) { return std::make_shared<const Node>(Node{std::forward<decltype(v)>(v)}); }

  bool at_end() const { return pos_ >= text_.size(); }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = make(Binary{BinaryOp::add, lhs, parse_term()});
      else if (accept('-'))
        lhs = make(Binary{BinaryOp::sub, lhs, parse_term()});
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Binary{BinaryOp::mul, lhs, parse_unary()});
      else if (accept('/'))
        lhs = make(Binary{BinaryOp::div, lhs, parse_unary()});
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make(Negate{parse_unary()});
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make(Binary{BinaryOp::pow, base, parse_unary()});
    return base;
  }

  NodePtr parse_primary() {
    skip_space();
    if (at_end()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (!at_end() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (!at_end() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (!at_end() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (at_end() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        pos_ = save;
      else
        digits();
    }
    const std::string token(text_.substr(start, pos_ - start));
    if (token == ".") throw ParseError("malformed number", start);
    return make(Number{std::strtod(token.c_str(), nullptr)});
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    if (auto f = function_from_name(name)) {
      if (!accept('(')) throw ParseError("expected '(' after " + name, pos_);
      NodePtr arg = parse_expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return make(Call{*f, arg});
    }
    if (auto slot = symbols_.variable(name)) return make(Variable{*slot});
    if (auto it = params_.find(name); it != params_.end()) {
      for (std::size_t i = 0; i < bindings_.size(); ++i)
        if (bindings_[i].first == name) return make(Parameter{i});
      bindings_.emplace_back(name, it->second);
      return make(Parameter{bindings_.size() - 1});
    }
    if (name == "pi") return make(Number{std::numbers::pi});
    throw UnknownSymbolError(name);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  const SymbolTable& symbols_;
  const ParameterMap& params_;
  std::vector<std::pair<std::string, double>>& bindings_;
};

/// Smallest variable slot referenced by a subtree; used to attribute
/// singularities to a coordinate.
inline std::optional<std::size_t> first_variable(const Node& n) {
  return std::visit(
      [](const auto& v) -> std::optional<std::size_t> {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, Variable>) {
          return v.slot;
        } else if constexpr (std::is_same_v<V, Negate>) {
          return first_variable(*v.operand);
        } else if constexpr (std::is_same_v<V, Binary>) {
          auto a = first_variable(*v.lhs);
          auto b = first_variable(*v.rhs);
          if (a && b) return std::min(*a, *b);
          return a ? a : b;
        } else if constexpr (std::is_same_v<V, Call>) {
          return first_variable(*v.argument);
        } else {
          return std::nullopt;
        }
      },
      n.data);
}

template <class T>
T evaluate(const Node& node, std::span<const T> vars, std::span<const double> params) {
  return std::visit(
      [&](const auto& v) -> T {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, Number>) {
          return T(v.value);
        } else if constexpr (std::is_same_v<V, Variable>) {
          return vars[v.slot];
        } else if constexpr (std::is_same_v<V, Parameter>) {
          return T(params[v.slot]);
        } else if constexpr (std::is_same_v<V, Negate>) {
          return -evaluate(*v.operand, vars, params);
        } else if constexpr (std::is_same_v<V, Binary>) {
          const T a = evaluate(*v.lhs, vars, params);
          const T b = evaluate(*v.rhs, vars, params);
          switch (v.op) {
            case BinaryOp::add: return a + b;
            case BinaryOp::sub: return a - b;
            case BinaryOp::mul: return a * b;
            case BinaryOp::div:
              if (value_of(b) == 0.0) throw DomainError("division by zero", first_variable(*v.rhs));
              return a / b;
            case BinaryOp::pow: {
              using std::pow;
              const double base = value_of(a), e = value_of(b);
              if (base < 0.0 && e != std::floor(e))
                throw DomainError("negative base raised to a non-integer power", first_variable(*v.lhs));
              if (base == 0.0 && e < 0.0)
                throw DomainError("zero raised to a negative power", first_variable(*v.lhs));
              if constexpr (std::is_same_v<T, Dual>) {
                if (base <= 0.0 && b.derivative != 0.0)
                  throw DomainError("variable exponent on a non-positive base", first_variable(*v.lhs));
              }
              return pow(a, b);
            }
          }
          return T(0.0);
        } else {
          const T a = evaluate(*v.argument, vars, params);
          using std::abs, std::cos, std::exp, std::log, std::sin, std::sqrt, std::tan;
          switch (v.function) {
            case Function::sin: return sin(a);
            case Function::cos: return cos(a);
            case Function::tan:
              if (std::cos(value_of(a)) == 0.0) throw DomainError("tan pole", first_variable(*v.argument));
              return tan(a);
            case Function::exp: return exp(a);
            case Function::ln:
              if (value_of(a) <= 0.0) throw DomainError("ln of a non-positive value", first_variable(*v.argument));
              return log(a);
            case Function::sqrt:
              if (value_of(a) < 0.0) throw DomainError("sqrt of a negative value", first_variable(*v.argument));
              if constexpr (std::is_same_v<T, Dual>) {
                if (a.value == 0.0 && a.derivative != 0.0)
                  throw DomainError("sqrt is not differentiable at 0", first_variable(*v.argument));
              }
              return sqrt(a);
            case Function::abs: return abs(a);
          }
          return T(0.0);
        }
      },
      node.data);
}

inline void print(const Node& node, const SymbolTable& symbols,
                  const std::vector<std::pair<std::string, double>>& bindings, std::string& out) {
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, Number>) {
          out += format_real(v.value);
        } else if constexpr (std::is_same_v<V, Variable>) {
          out += symbols.canonical_name(v.slot);
        } else if constexpr (std::is_same_v<V, Parameter>) {
          out += bindings[v.slot].first;
        } else if constexpr (std::is_same_v<V, Negate>) {
          out += '-';
          const bool paren = precedence(*v.operand) < 3;
          if (paren) out += '(';
          print(*v.operand, symbols, bindings, out);
          if (paren) out += ')';
        } else if constexpr (std::is_same_v<V, Binary>) {
          const int mine = precedence(node);
          const bool right_assoc = v.op == BinaryOp::pow;
          const bool lp = right_assoc ? precedence(*v.lhs) <= mine : precedence(*v.lhs) < mine;
          const bool rp = right_assoc ? precedence(*v.rhs) < mine - 1 : precedence(*v.rhs) <= mine;
          if (lp) out += '(';
          print(*v.lhs, symbols, bindings, out);
          if (lp) out += ')';
          switch (v.op) {
            case BinaryOp::add: out += " + "; break;
            case BinaryOp::sub: out += " - "; break;
            case BinaryOp::mul: out += '*'; break;
            case BinaryOp::div: out += '/'; break;
            case BinaryOp::pow: out += '^'; break;
          }
          if (rp) out += '(';
          print(*v.rhs, symbols, bindings, out);
          if (rp) out += ')';
        } else {
          out += function_name(v.function);
          out += '(';
          print(*v.argument, symbols, bindings, out);
          out += ')';
        }
      },
      node.data);
}

inline bool structurally_equal(const Node& a, const Node& b) {
  if (a.data.index() != b.data.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using V = std::decay_t<decltype(x)>;
        const auto& y = std::get<V>(b.data);
        if constexpr (std::is_same_v<V, Number>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<V, Variable> || std::is_same_v<V, Parameter>) {
          return x.slot == y.slot;
        } else if constexpr (std::is_same_v<V, Negate>) {
          return structurally_equal(*x.operand, *y.operand);
        } else if constexpr (std::is_same_v<V, Binary>) {
          return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) && structurally_equal(*x.rhs, *y.rhs);
        } else {
          return x.function == y.function && structurally_equal(*x.argument, *y.argument);
        }
      },
      a.data);
}

}  // namespace detail

/// An immutable parsed expression together with its symbol table and the
/// parameter values captured at parse time.
class Expression {
 public:
  Expression(std::string_view text, SymbolTable symbols, const ParameterMap& params = {})
      : symbols_(std::make_shared<const SymbolTable>(std::move(symbols))) {
    std::vector<std::pair<std::string, double>> bindings;
    root_ = detail::Parser(text, *symbols_, params, bindings).parse();
    names_.reserve(bindings.size());
    values_.reserve(bindings.size());
    for (auto& [name, value] : bindings) {
      names_.push_back(name);
      values_.push_back(value);
    }
  }

  /// Number of variable slots the expression is evaluated over.
  std::size_t slot_count() const noexcept { return symbols_->slot_count(); }

  template <class T>
  T evaluate(std::span<const T> vars) const {
    if (vars.size() != slot_count()) throw InvalidArgument("expression evaluated with wrong number of variables");
    T r = detail::evaluate<T>(*root_, vars, values_);
    if (!std::isfinite(value_of(r))) throw DomainError("non-finite expression value");
    return r;
  }

  std::string to_string() const {
    std::vector<std::pair<std::string, double>> bindings;
    for (std::size_t i = 0; i < names_.size(); ++i) bindings.emplace_back(names_[i], values_[i]);
    std::string out;
    detail::print(*root_, *symbols_, bindings, out);
    return out;
  }

  /// Parameters actually referenced, in first-use order.
  ParameterMap bound_parameters() const {
    ParameterMap m;
    for (std::size_t i = 0; i < names_.size(); ++i) m[names_[i]] = values_[i];
    return m;
  }

  const SymbolTable& symbols() const noexcept { return *symbols_; }
  const Node& root() const noexcept { return *root_; }

  friend bool operator==(const Expression& a, const Expression& b) {
    return a.names_ == b.names_ && a.values_ == b.values_ && detail::structurally_equal(*a.root_, *b.root_);
  }

 private:
  std::shared_ptr<const SymbolTable> symbols_;
  NodePtr root_;
  std::vector<std::string> names_;
  std::vector<double> values_;
};

}  // namespace expr
}  // namespace hamjac
