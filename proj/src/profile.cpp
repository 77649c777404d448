#include "staticlab/profile.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "staticlab/report.hpp"

namespace staticlab {

namespace {

double fd_step(double x) { return 1e-3 * std::max(1.0, std::abs(x)); }

}  // namespace

Jet finite_difference_jet(const Profile::ValueFn& f, double x, double h) {
  double v[9];
  for (int k = -4; k <= 4; ++k) v[k + 4] = f(x + k * h);
  const double d1 = (-v[1] + 9 * v[2] - 45 * v[3] + 45 * v[5] - 9 * v[6] + v[7]) / (60 * h);
  const double d2 =
      (2 * v[1] - 27 * v[2] + 270 * v[3] - 490 * v[4] + 270 * v[5] - 27 * v[6] + 2 * v[7]) /
      (180 * h * h);
  const double d3 = (-7.0 / 240 * v[0] + 3.0 / 10 * v[1] - 169.0 / 120 * v[2] + 61.0 / 30 * v[3] -
                     61.0 / 30 * v[5] + 169.0 / 120 * v[6] - 3.0 / 10 * v[7] + 7.0 / 240 * v[8]) /
                    (h * h * h);
  return {v[4], d1, d2, d3};
}

Profile::Profile()
    : jet_fn_([](const Jet&) { return Jet::constant(1.0); }), expr_(Expression::parse("1")), description_("1") {}

Profile Profile::constant(double c) {
  Profile p;
  p.jet_fn_ = [c](const Jet&) { return Jet::constant(c); };
  p.expr_ = Expression::parse(format_double(c));
  p.description_ = p.expr_->source();
  return p;
}

Profile Profile::expression(const std::string& source, const std::map<std::string, double>& parameters,
                            const std::string& variable) {
  return from_expression(Expression::parse(source, variable, parameters));
}

Profile Profile::from_expression(Expression e) {
  Profile p;
  p.jet_fn_ = [e](const Jet& x) { return e.evaluate(x); };
  p.description_ = e.source();
  p.expr_ = std::move(e);
  return p;
}

Profile Profile::from_jet(JetFn fn, std::string description) {
  Profile p;
  p.jet_fn_ = std::move(fn);
  p.expr_.reset();
  p.description_ = std::move(description);
  return p;
}

Profile Profile::from_values(ValueFn fn, std::string description) {
  Profile p;
  p.expr_.reset();
  p.source_ = DerivativeSource::FiniteDifference;
  p.jet_fn_ = [fn = std::move(fn)](const Jet& x) {
    return finite_difference_jet(fn, x.value(), fd_step(x.value()));
  };
  p.description_ = std::move(description);
  return p;
}

Jet Profile::jet(double r) const { return jet_fn_(Jet::variable(r)); }

double Profile::operator()(double r) const { return jet_fn_(Jet::constant(r)).value(); }

Profile Profile::with_finite_differences() const {
  Profile p = from_values([fn = jet_fn_](double r) { return fn(Jet::constant(r)).value(); },
                          description_);
  p.expr_ = expr_;
  return p;
}

namespace {

// Combined profiles stay closed-form only if both inputs are.
Profile combine(const Profile& a, const Profile& b, char op) {
  auto fn = [a, b, op](const Jet& x) {
    const Jet u = a.jet(x.value());
    const Jet v = b.jet(x.value());
    const Jet w = op == '*' ? u * v : u / v;
    // Re-chain through x so composed profiles remain usable as inner functions.
    return compose(x, w.d[0], w.d[1], w.d[2], w.d[3]);
  };
  const std::string text = "(" + a.description() + ")" + op + "(" + b.description() + ")";
  Profile p = Profile::from_jet(fn, text);
  if (a.derivative_source() == DerivativeSource::ClosedForm &&
      b.derivative_source() == DerivativeSource::ClosedForm && a.expression_form() &&
      b.expression_form()) {
    std::map<std::string, double> params = a.expression_form()->parameters();
    bool clash = a.expression_form()->variable() != b.expression_form()->variable();
    for (const auto& [k, v] : b.expression_form()->parameters()) {
      const auto [it, inserted] = params.emplace(k, v);
      if (!inserted && it->second != v) clash = true;
    }
    if (clash) return p;
    const std::string src = "(" + a.expression_form()->source() + ")" + op + "(" +
                            b.expression_form()->source() + ")";
    Profile q = Profile::expression(src, params, a.expression_form()->variable());
    return q;
  }
  if (a.derivative_source() == DerivativeSource::FiniteDifference ||
      b.derivative_source() == DerivativeSource::FiniteDifference) {
    return p.with_finite_differences();
  }
  return p;
}

}  // namespace

Profile operator*(const Profile& a, const Profile& b) { return combine(a, b, '*'); }
Profile operator/(const Profile& a, const Profile& b) { return combine(a, b, '/'); }

Profile Profile::pow(double p) const {
  if (expr_ && source_ == DerivativeSource::ClosedForm) {
    return expression("(" + expr_->source() + ")^" + format_double(p), expr_->parameters(),
                      expr_->variable());
  }
  Profile base = *this;
  Profile out = from_jet(
      [base, p](const Jet& x) {
        const Jet w = staticlab::pow(base.jet(x.value()), p);
        return compose(x, w.d[0], w.d[1], w.d[2], w.d[3]);
      },
      "(" + description_ + ")^" + format_double(p));
  return source_ == DerivativeSource::FiniteDifference ? out.with_finite_differences() : out;
}

Profile Profile::scaled(double c) const { return *this * constant(c); }

Profile Profile::shifted(double c) const {
  if (expr_ && source_ == DerivativeSource::ClosedForm) {
    return expression("(" + expr_->source() + ")+" + format_double(c), expr_->parameters(),
                      expr_->variable());
  }
  Profile base = *this;
  Profile out = from_jet(
      [base, c](const Jet& x) {
        const Jet w = base.jet(x.value()) + c;
        return compose(x, w.d[0], w.d[1], w.d[2], w.d[3]);
      },
      "(" + description_ + ")+" + format_double(c));
  return source_ == DerivativeSource::FiniteDifference ? out.with_finite_differences() : out;
}

}  // namespace staticlab
