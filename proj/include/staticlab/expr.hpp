#pragma once

// Small expression grammar for radial profiles:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | identifier | identifier '(' expr ')' | '(' expr ')'
//
// Functions: sin cos tan sinh cosh tanh sqrt exp log. Identifiers resolve to
// the independent variable, named parameters, or the constants pi and e.

#include <map>
#include <memory>
#include <string>

#include "staticlab/jet.hpp"

namespace staticlab {

class Expression {
 public:
  struct Node;

  // Parses `source`; `variable` names the independent coordinate. Unknown
  // identifiers that are neither parameters nor constants are rejected.
  static Expression parse(const std::string& source, const std::string& variable = "r",
                          const std::map<std::string, double>& parameters = {});

  Jet evaluate(const Jet& x) const;
  double operator()(double x) const { return evaluate(Jet::constant(x)).value(); }

  const std::string& source() const { return source_; }
  const std::map<std::string, double>& parameters() const { return parameters_; }
  const std::string& variable() const { return variable_; }

 private:
  std::string source_;
  std::string variable_;
  std::map<std::string, double> parameters_;
  std::shared_ptr<const Node> root_;
};

}  // namespace staticlab
