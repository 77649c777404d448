#include "staticlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

#include "staticlab/errors.hpp"

namespace staticlab {

namespace {

enum class Op { Add, Sub, Mul, Div, Pow };
enum class Fn { Sin, Cos, Tan, Sinh, Cosh, Tanh, Sqrt, Exp, Log };

}  // namespace

struct Expression::Node {
  struct Constant { double value; };
  struct Variable {};
  struct Negate { std::shared_ptr<const Node> arg; };
  struct Binary { Op op; std::shared_ptr<const Node> lhs, rhs; };
  struct Call { Fn fn; std::shared_ptr<const Node> arg; };

  std::variant<Constant, Variable, Negate, Binary, Call> kind;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(Expression::Node::Constant c) { return std::make_shared<Expression::Node>(Expression::Node{c}); }

class Parser {
 public:
  Parser(const std::string& text, const std::string& variable,
         const std::map<std::string, double>& parameters)
      : text_(text), variable_(variable), parameters_(parameters) {}

  NodePtr parse() {
    NodePtr node = expr();
    skip_space();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return node;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCode::Parse, "expression '" + text_ + "' at offset " + std::to_string(pos_) + ": " + msg);
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

  NodePtr binary(Op op, NodePtr lhs, NodePtr rhs) {
    return std::make_shared<Expression::Node>(
        Expression::Node{Expression::Node::Binary{op, std::move(lhs), std::move(rhs)}});
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = binary(Op::Add, lhs, term());
      else if (accept('-')) lhs = binary(Op::Sub, lhs, term());
      else return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = binary(Op::Mul, lhs, unary());
      else if (accept('/')) lhs = binary(Op::Div, lhs, unary());
      else return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      return std::make_shared<Expression::Node>(Expression::Node{Expression::Node::Negate{unary()}});
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return binary(Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) error("unexpected end of input");
    const char c = text_[pos_];
    if (accept('(')) {
      NodePtr inner = expr();
      if (!accept(')')) error("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    error("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) error("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make({value});
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name = text_.substr(start, pos_ - start);
    if (accept('(')) {
      static const std::map<std::string, Fn> functions = {
          {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"tan", Fn::Tan},
          {"sinh", Fn::Sinh}, {"cosh", Fn::Cosh}, {"tanh", Fn::Tanh},
          {"sqrt", Fn::Sqrt}, {"exp", Fn::Exp},   {"log", Fn::Log}};
      const auto it = functions.find(name);
      if (it == functions.end()) error("unknown function '" + name + "'");
      NodePtr arg = expr();
      if (!accept(')')) error("expected ')' after argument of " + name);
      return std::make_shared<Expression::Node>(Expression::Node{Expression::Node::Call{it->second, arg}});
    }
    if (name == variable_) {
      return std::make_shared<Expression::Node>(Expression::Node{Expression::Node::Variable{}});
    }
    if (const auto it = parameters_.find(name); it != parameters_.end()) return make({it->second});
    if (name == "pi") return make({std::numbers::pi});
    if (name == "e") return make({std::numbers::e});
    error("unknown identifier '" + name + "'");
  }

  const std::string& text_;
  const std::string& variable_;
  const std::map<std::string, double>& parameters_;
  std::size_t pos_ = 0;
};

Jet apply(Fn fn, const Jet& x) {
  switch (fn) {
    case Fn::Sin: return sin(x);
    case Fn::Cos: return cos(x);
    case Fn::Tan: return tan(x);
    case Fn::Sinh: return sinh(x);
    case Fn::Cosh: return cosh(x);
    case Fn::Tanh: return tanh(x);
    case Fn::Sqrt: return sqrt(x);
    case Fn::Exp: return exp(x);
    case Fn::Log: return log(x);
  }
  return x;
}

Jet eval(const Expression::Node& node, const Jet& x) {
  using N = Expression::Node;
  return std::visit(
      [&](const auto& k) -> Jet {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, N::Constant>) {
          return Jet::constant(k.value);
        } else if constexpr (std::is_same_v<K, N::Variable>) {
          return x;
        } else if constexpr (std::is_same_v<K, N::Negate>) {
          return -eval(*k.arg, x);
        } else if constexpr (std::is_same_v<K, N::Binary>) {
          const Jet a = eval(*k.lhs, x);
          const Jet b = eval(*k.rhs, x);
          switch (k.op) {
            case Op::Add: return a + b;
            case Op::Sub: return a - b;
            case Op::Mul: return a * b;
            case Op::Div: return a / b;
            case Op::Pow: return pow(a, b);
          }
          return a;
        } else {
          return apply(k.fn, eval(*k.arg, x));
        }
      },
      node.kind);
}

}  // namespace

Expression Expression::parse(const std::string& source, const std::string& variable,
                             const std::map<std::string, double>& parameters) {
  Expression e;
  e.source_ = source;
  e.variable_ = variable;
  e.parameters_ = parameters;
  e.root_ = Parser(e.source_, e.variable_, e.parameters_).parse();
  return e;
}

Jet Expression::evaluate(const Jet& x) const { return eval(*root_, x); }

}  // namespace staticlab
