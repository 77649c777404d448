// staticlab_bench: serial reference kernels against their OpenMP versions.
// Prints wall time for both and checks that the results are identical.
//
//   staticlab_bench [--repeat N]

#include <chrono>
#include <cstdio>
#include <cstring>
#include <cstdlib>
#include <algorithm>
#include <functional>
#include <string>

#include "staticlab/catalog.hpp"
#include "staticlab/geodesic.hpp"
#include "staticlab/grid.hpp"
#include "staticlab/parallel.hpp"
#include "staticlab/riccati.hpp"
#include "staticlab/static_check.hpp"
#include "staticlab/warped.hpp"

using namespace staticlab;

namespace {

double seconds(const std::function<std::string()>& body, std::string& digest, int repeat) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < repeat; ++i) digest = body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / repeat;
}

bool row(const char* name, const std::function<std::string(Execution)>& kernel, int repeat) {
  std::string serial, parallel;
  const double ts = seconds([&] { return kernel(Execution::Serial); }, serial, repeat);
  const double tp = seconds([&] { return kernel(Execution::Parallel); }, parallel, repeat);
  const bool same = serial == parallel;
  std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  %s\n", name, ts, tp, ts / tp,
              same ? "identical" : "MISMATCH");
  return same;
}

std::string hex(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a,", x);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  int repeat = 1;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--repeat") == 0 && i + 1 < argc) repeat = std::max(1, std::atoi(argv[++i]));
  }
  std::printf("threads: %d\n", thread_count());
  const StaticModel hemi = build("hemisphere").model;
  const StaticModel dss = build("dss").model;

  bool ok = true;
  ok &= row("grid residual", [&](Execution mode) {
    CheckOptions o;
    o.execution = mode;
    const auto rep = static_residual(hemi, chebyshev_grid(hemi.grid_domain(), 4000), o);
    std::string d;
    for (const auto& r : rep.per_point) d += hex(r.sup_norm);
    return d;
  }, repeat);
  ok &= row("batch geodesics", [&](Execution mode) {
    std::vector<GeodesicState> starts;
    const Interval dom = dss.grid_domain();
    for (int i = 0; i < 256; ++i) {
      starts.push_back(make_start(dss, dom.lo + (dom.hi - dom.lo) * (0.1 + 0.8 * (i % 16) / 15.0), 0.2 * (i / 16)));
    }
    std::string d;
    for (const auto& t : integrate_batch(dss, starts, 4.0, riccati_geodesic_defaults(), mode)) {
      d += hex(t.states.back().r) + hex(t.states.back().psi);
    }
    return d;
  }, repeat);
  ok &= row("riccati suite", [&](Execution mode) {
    SuiteOptions o;
    o.count = 100;
    return inequality_suite(hemi, o, mode).to_json().dump();
  }, repeat);
  ok &= row("warped fuzz", [&](Execution mode) {
    const FuzzReport r = fuzz_warped(4, 2000, 7, 5.0, {}, mode);
    return std::to_string(r.potential_zero) + "," + std::to_string(r.warp_zero) + "," + std::to_string(r.blowup) +
           "," + std::to_string(r.span_end) + "," + hex(r.max_event_potential);
  }, repeat);
  return ok ? 0 : 1;
}
