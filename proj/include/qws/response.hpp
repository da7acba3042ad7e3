#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qws/defs.hpp"
#include "qws/graph.hpp"
#include "qws/scatter.hpp"

namespace qws {

/// h[n] = omega0 * delta[n-s] + sum_j omega_j eta_j^n for n >= s, 0 before.
struct ImpulseResponse {
  int s = 0;
  cplx omega0 = 0;
  std::vector<std::pair<cplx, cplx>> modes;  // (omega_j, eta_j)
  int max_n = 0;
  std::vector<cplx> sequence;  // h[0..max_n]
  bool closed_form = false;
  bool degenerate_fallback = false;
  double alias_bound = 0;  // DFT route only
};

struct Signal {
  std::vector<cplx> samples;
  std::string generator = "custom";  // delta | monochromatic | custom

  static Signal delta(int length) {
    Signal s;
    s.samples.assign(length, cplx(0));
    if (length > 0) s.samples[0] = 1.0;
    s.generator = "delta";
    return s;
  }

  static Signal monochromatic(cplx lambda, int length) {
    Signal s;
    s.samples.resize(length);
    cplx v = 1.0;
    for (int n = 0; n < length; ++n, v *= lambda) s.samples[n] = v;
    s.generator = "monochromatic";
    return s;
  }
};

/// DFT route: h[n] = (1/K) sum_m S(e^{i theta_m}) e^{i n theta_m}.
inline ImpulseResponse impulse_dft(const ScatterFunction& s, int grid, int max_n) {
  if (grid < 4 * max_n) throw validation_error("impulse_dft: grid must be at least 4*max_n");
  ImpulseResponse h;
  h.s = std::max(0, s.dec.s - s.delay_exponent);
  h.max_n = max_n;

  for (int attempt = 0; attempt < 2; ++attempt) {
    double offset = attempt * std::numbers::pi / grid;  // rotate half-step on pole hit
    std::vector<cplx> values(grid);
    try {
      for (int m = 0; m < grid; ++m)
        values[m] = s.eval(std::polar(1.0, 2.0 * std::numbers::pi * m / grid + offset));
    } catch (const numerical_error&) {
      if (attempt == 0) continue;
      throw;
    }
    h.sequence.assign(max_n + 1, cplx(0));
    double sum_abs = 0;
    for (int n = 0; n <= max_n; ++n) {
      cplx acc(0);
      for (int m = 0; m < grid; ++m)
        acc += values[m] * std::polar(1.0, n * (2.0 * std::numbers::pi * m / grid + offset));
      h.sequence[n] = acc / double(grid);
      sum_abs += std::abs(h.sequence[n]);
    }
    double eta_max = 0;
    for (cplx eta : s.dec.etas.roots) eta_max = std::max(eta_max, std::abs(eta));
    h.alias_bound = sum_abs * std::pow(eta_max, std::max(1, grid - max_n));
    return h;
  }
  throw numerical_error("impulse_dft: pole on grid after rotation");
}

/// Residue closed form (single runway): omega0 = -g0 prod(1/(-eta_k)),
/// omega_j = -g0 (1-|eta_j|^2)/eta_j^{s+1} prod_{k!=j} (1-eta_j eta_k*)/(eta_j-eta_k).
/// delay shifts the lag: the returned response is for z^delay * S(z).
inline ImpulseResponse impulse_closed_form(const CharDecomposition& dec, int max_n,
                                           int delay = 0) {
  if (!dec.single_runway())
    throw validation_error("impulse_closed_form: defined for a single runway only");
  if (dec.s - delay < 0)
    throw validation_error("impulse_closed_form: delay exceeds lag");

  const std::vector<cplx>& etas = dec.etas.roots;
  bool degenerate = false;
  for (std::size_t i = 0; i < etas.size() && !degenerate; ++i) {
    if (std::abs(etas[i]) < tol::common_root) degenerate = true;
    for (std::size_t k = i + 1; k < etas.size(); ++k)
      if (std::abs(etas[i] - etas[k]) < tol::common_root) degenerate = true;
  }
  if (degenerate) {
    ImpulseResponse h = impulse_dft({dec, delay}, std::max(512, 4 * max_n), max_n);
    h.degenerate_fallback = true;
    return h;
  }

  ImpulseResponse h;
  h.closed_form = true;
  h.s = dec.s - delay;
  h.max_n = max_n;

  cplx omega0 = -dec.g0;
  for (cplx eta : etas) omega0 *= 1.0 / (-eta);
  h.omega0 = omega0;

  for (std::size_t j = 0; j < etas.size(); ++j) {
    cplx eta = etas[j];
    cplx w = -dec.g0 * (1.0 - std::norm(eta)) / std::pow(eta, dec.s + 1);
    for (std::size_t k = 0; k < etas.size(); ++k) {
      if (k == j) continue;
      w *= (1.0 - eta * std::conj(etas[k])) / (eta - etas[k]);
    }
    // Fold the delay into the mode amplitude: h[n] <- h[n + delay].
    h.modes.emplace_back(w * std::pow(eta, delay), eta);
  }

  h.sequence.assign(max_n + 1, cplx(0));
  for (int n = 0; n <= max_n; ++n) {
    if (n < h.s) continue;
    cplx v = (n == h.s) ? h.omega0 : cplx(0);
    for (const auto& [w, eta] : h.modes) v += w * std::pow(eta, n);
    h.sequence[n] = v;
  }
  return h;
}

/// y[n] = sum_k h[k] x[n-k], causal, truncated to the input length.
inline Signal convolve(const Signal& x, const ImpulseResponse& h) {
  Signal y;
  y.samples.assign(x.samples.size(), cplx(0));
  for (std::size_t n = 0; n < x.samples.size(); ++n) {
    cplx acc(0);
    std::size_t kmax = std::min(n, h.sequence.size() - 1);
    for (std::size_t k = 0; k <= kmax; ++k) acc += h.sequence[k] * x.samples[n - k];
    y.samples[n] = acc;
  }
  return y;
}

struct OracleResult {
  Signal output;            // y[n]: coefficient of |0,1> on the readout runway at step n+1
  double max_norm_drift = 0;  // worst |norm - 1| seen during the walk
};

/// Brute-force stepper: the finite graph plus one truncated runway per port.
/// The input is encoded on the runway of in_port (delta by default) and the
/// output is read at out_port with the one-step anticipation convention.
inline OracleResult simulate_oracle(const GraphSpec& spec, const std::string& in_port,
                                    const std::string& out_port, int steps, int runway_len,
                                    const Signal* input = nullptr) {
  if (runway_len < steps + 2)
    throw validation_error("simulate_oracle: runway too short (need steps+2)");
  EdgeBasis basis = build_edge_basis(spec);
  TimeStepOperator op = assemble_U0(spec, basis);
  const int p = op.num_ports();
  const int jn = op.port_index(in_port);
  const int kt = op.port_index(out_port);

  Vector g = Vector::Zero(op.dim());
  // Per port: inc[j] is the coefficient of |j+1,j>, out[j] of |j,j+1>.
  std::vector<std::vector<cplx>> inc(p, std::vector<cplx>(runway_len, cplx(0)));
  std::vector<std::vector<cplx>> out(p, std::vector<cplx>(runway_len, cplx(0)));

  if (input) {
    for (std::size_t k = 0; k < input->samples.size() && k < std::size_t(runway_len); ++k)
      inc[jn][k] = input->samples[k];
  } else {
    inc[jn][0] = 1.0;  // |1,0>
  }

  double norm0 = 0;
  auto total_norm = [&]() {
    double t = g.squaredNorm();
    for (int q = 0; q < p; ++q)
      for (int j = 0; j < runway_len; ++j) t += std::norm(inc[q][j]) + std::norm(out[q][j]);
    return t;
  };
  norm0 = total_norm();

  OracleResult res;
  res.output.samples.reserve(steps);
  for (int t = 1; t <= steps; ++t) {
    Vector g_next = op.entries * g;
    for (int q = 0; q < p; ++q) {
      g_next(op.in_indices[q]) += inc[q][0];  // U|1,0> = |in>
      cplx leaving = g(op.out_indices[q]);    // U|out> = |0,1>
      for (int j = 0; j + 1 < runway_len; ++j) inc[q][j] = inc[q][j + 1];
      inc[q][runway_len - 1] = 0;
      for (int j = runway_len - 1; j >= 1; --j) out[q][j] = out[q][j - 1];
      out[q][0] = leaving;
    }
    g = std::move(g_next);
    res.output.samples.push_back(out[kt][0]);  // y[t-1]
    res.max_norm_drift = std::max(res.max_norm_drift, std::abs(total_norm() - norm0));
  }
  return res;
}

}  // namespace qws
