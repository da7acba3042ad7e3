#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qws/defs.hpp"
#include "qws/scatter.hpp"

namespace qws {

struct PhaseSweep {
  std::vector<double> thetas;
  std::vector<cplx> values;
  std::vector<double> unwrapped_phase;
  int winding = 0;  // net turns of S around the circle
};

/// Evaluate S(e^{i theta}) on a uniform grid and unwrap the phase.
/// A pole landing on a node rotates the whole grid by half a step.
inline PhaseSweep phase_sweep(const ScatterFunction& s, int grid) {
  if (grid < 8) throw validation_error("phase_sweep: grid too small");
  PhaseSweep sw;
  for (int attempt = 0; attempt < 2; ++attempt) {
    double offset = attempt * std::numbers::pi / grid;
    sw.thetas.resize(grid);
    sw.values.resize(grid);
    try {
      for (int m = 0; m < grid; ++m) {
        sw.thetas[m] = 2.0 * std::numbers::pi * m / grid + offset;
        sw.values[m] = s.eval(std::polar(1.0, sw.thetas[m]));
      }
    } catch (const numerical_error&) {
      if (attempt == 0) continue;
      throw;
    }
    break;
  }

  sw.unwrapped_phase.resize(grid);
  double prev = std::arg(sw.values[0]);
  sw.unwrapped_phase[0] = prev;
  for (int m = 1; m < grid; ++m) {
    double a = std::arg(sw.values[m]);
    double d = a - std::fmod(prev, 2.0 * std::numbers::pi);
    while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
    prev += d;
    sw.unwrapped_phase[m] = prev;
  }
  // Close the loop back to theta = theta_0 + 2 pi.
  double a_close = std::arg(sw.values[0]);
  double d = a_close - std::fmod(prev, 2.0 * std::numbers::pi);
  while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
  while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
  double total = prev + d - sw.unwrapped_phase[0];
  double turns = total / (2.0 * std::numbers::pi);
  sw.winding = int(std::lround(turns));
  if (std::abs(turns - sw.winding) > 1e-3)
    throw numerical_error("phase_sweep: winding did not converge to an integer");
  return sw;
}

/// Double the grid until the winding agrees across two consecutive sizes.
inline PhaseSweep phase_sweep_stable(const ScatterFunction& s, int grid,
                                     int max_doublings = 6) {
  PhaseSweep sw = phase_sweep(s, grid);
  for (int i = 0; i < max_doublings; ++i) {
    PhaseSweep next = phase_sweep(s, grid * 2);
    if (next.winding == sw.winding) return next;
    sw = std::move(next);
    grid *= 2;
  }
  throw numerical_error("phase_sweep_stable: winding did not stabilize");
}

struct Resonance {
  double center = 0;  // theta of steepest phase slope
  double width = 0;   // interval where phase departs baseline by more than pi/2
  cplx eta_estimate = 0;
};

/// Locate narrow phase jumps in an unwrapped sweep. Slopes above the
/// threshold (default: 10x the median absolute slope) seed clusters; each
/// cluster yields one resonance with eta ~ (1 - width/2) e^{i theta_hat}.
inline std::vector<Resonance> find_resonances(const PhaseSweep& sw,
                                              double jump_threshold = 0) {
  const int K = int(sw.thetas.size());
  const double dt = 2.0 * std::numbers::pi / K;
  std::vector<double> slope(K - 1);
  for (int m = 0; m + 1 < K; ++m)
    slope[m] = std::abs(sw.unwrapped_phase[m + 1] - sw.unwrapped_phase[m]) / dt;

  if (jump_threshold <= 0) {
    std::vector<double> tmp = slope;
    std::nth_element(tmp.begin(), tmp.begin() + tmp.size() / 2, tmp.end());
    jump_threshold = 10.0 * tmp[tmp.size() / 2];
  }

  std::vector<Resonance> out;
  int m = 0;
  while (m + 1 < K) {
    if (slope[m] <= jump_threshold) {
      ++m;
      continue;
    }
    int lo = m;
    while (m + 1 < K && slope[m] > jump_threshold) ++m;
    int hi = m;  // cluster covers samples [lo, hi]

    int peak = lo;
    for (int q = lo; q <= hi; ++q)
      if (slope[q] > slope[peak]) peak = q;
    Resonance r;
    r.center = 0.5 * (sw.thetas[peak] + sw.thetas[peak + 1]);

    // Width: the interval where the phase has departed each side's baseline
    // by more than pi/2 (the transition core of the jump).
    double half = std::numbers::pi / 2.0;
    double base_lo = sw.unwrapped_phase[std::max(0, lo - 2)];
    double base_hi = sw.unwrapped_phase[std::min(K - 1, hi + 3)];
    int a = peak;
    while (a > 0 && std::abs(sw.unwrapped_phase[a - 1] - base_lo) > half) --a;
    int b = peak + 1;
    while (b < K - 1 && std::abs(sw.unwrapped_phase[b + 1] - base_hi) > half) ++b;
    r.width = std::max(dt, sw.thetas[b] - sw.thetas[a]);
    r.eta_estimate = (1.0 - r.width / 2.0) * std::polar(1.0, r.center);
    out.push_back(r);
  }
  return out;
}

/// |winding| bounds the count of internal eigenvalues from below.
inline int dimension_lower_bound(const PhaseSweep& sw) { return std::abs(sw.winding); }

}  // namespace qws
