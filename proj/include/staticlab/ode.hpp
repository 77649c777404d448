#pragma once

// Adaptive Dormand–Prince 5(4) integration with terminal events and cubic
// Hermite dense output.

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace staticlab {

using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

// Terminal event: integration stops at the first zero crossing of g from
// positive to non-positive.
struct OdeEvent {
  std::string name;
  std::function<double(double t, std::span<const double> y)> g;
};

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 1e-3;
  double max_step = 0.0;  // 0 means unlimited
  double min_step = 1e-14;
  double event_tolerance = 1e-12;
  long max_steps = 2'000'000;
  // State magnitude treated as blow-up.
  double blowup = 1e12;
};

struct OdeSample {
  double t;
  std::vector<double> y;
  std::vector<double> dy;
};

enum class OdeStop { SpanEnd, Event, Blowup };

struct OdeResult {
  std::vector<OdeSample> samples;
  OdeStop stop = OdeStop::SpanEnd;
  std::string event;  // name of the event that fired, if any
  long rejected = 0;
};

// Integrates from t0 toward t_end (either direction). Throws Stiffness when
// the step size collapses below min_step.
OdeResult integrate_ode(const OdeRhs& rhs, double t0, std::vector<double> y0, double t_end,
                        const OdeOptions& options = {}, const std::vector<OdeEvent>& events = {});

// Cubic Hermite interpolation of the state at t from accepted samples.
std::vector<double> dense_output(const std::vector<OdeSample>& samples, double t);

}  // namespace staticlab
