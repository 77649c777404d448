#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "staticlab/expr.hpp"
#include "staticlab/jet.hpp"

namespace staticlab {

enum class DerivativeSource { ClosedForm, FiniteDifference };

// A smooth function of the radial coordinate, evaluable with derivatives up
// to third order. Immutable and cheap to copy.
class Profile {
 public:
  using JetFn = std::function<Jet(const Jet&)>;
  using ValueFn = std::function<double(double)>;

  // The constant 1.
  Profile();

  static Profile constant(double c);
  static Profile expression(const std::string& source,
                            const std::map<std::string, double>& parameters = {},
                            const std::string& variable = "r");
  static Profile from_expression(Expression e);
  // Closed-form derivatives through jet composition.
  static Profile from_jet(JetFn fn, std::string description = "custom");
  // Values only; derivatives come from central finite-difference stencils.
  static Profile from_values(ValueFn fn, std::string description = "sampled");

  Jet jet(double r) const;
  double operator()(double r) const;

  DerivativeSource derivative_source() const { return source_; }
  // Expression text when the profile is expressible in the model grammar.
  const std::optional<Expression>& expression_form() const { return expr_; }
  const std::string& description() const { return description_; }

  // Same values, derivatives recomputed from values by finite differences.
  Profile with_finite_differences() const;

  friend Profile operator*(const Profile& a, const Profile& b);
  friend Profile operator/(const Profile& a, const Profile& b);
  Profile pow(double p) const;
  Profile scaled(double c) const;
  Profile shifted(double c) const;

 private:
  JetFn jet_fn_;
  DerivativeSource source_ = DerivativeSource::ClosedForm;
  std::optional<Expression> expr_;
  std::string description_;
};

// Central stencils of sixth order for the first three derivatives of `f` at
// `x` with step `h`.
Jet finite_difference_jet(const Profile::ValueFn& f, double x, double h);

}  // namespace staticlab
