#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "qws/defs.hpp"
#include "qws/graph.hpp"
#include "qws/poly.hpp"

namespace qws {

/// Characteristic-polynomial split det(U_alpha - zI) = b(z) (f(z) + alpha g(z)).
/// f_red is monic; b is monic; the overall constant is folded out of both
/// f_red and g_red consistently so that S = -g_red/f_red.
struct CharDecomposition {
  ComplexPoly f_full, g_full;   // det and alpha-cofactor before reduction
  ComplexPoly b;                // monic common factor
  ComplexPoly f_red, g_red;     // reduced pair, f_red monic
  int s = 0;                    // multiplicity of 0 in f_red
  cplx g0 = 0;                  // constant term of g_red
  int d = 0;                    // degree of f_red
  RootSet etas;                 // roots of f_red (nonzero ones in .roots)
  int in_port = 0, out_port = 0;
  int num_ports = 1;
  double recompose_error = 0;   // max coeff deviation of b*f_red (and b*g_red) vs full

  bool single_runway() const { return num_ports == 1; }
};

/// f_full(z) = det(U0 - zI) at one point.
inline cplx char_poly_value(const TimeStepOperator& op, cplx z) {
  Matrix a = op.entries;
  a.diagonal().array() -= z;
  return Eigen::PartialPivLU<Matrix>(a).determinant();
}

/// Signed minor route for g(z): cofactor of the alpha element (row in, col out).
inline cplx cofactor_value(const TimeStepOperator& op, int row, int col, cplx z) {
  const int n = op.dim();
  Matrix a = op.entries;
  a.diagonal().array() -= z;
  Matrix m(n - 1, n - 1);
  for (int i = 0, mi = 0; i < n; ++i) {
    if (i == row) continue;
    for (int j = 0, mj = 0; j < n; ++j) {
      if (j == col) continue;
      m(mi, mj++) = a(i, j);
    }
    ++mi;
  }
  cplx det = (n > 1) ? Eigen::PartialPivLU<Matrix>(m).determinant() : cplx(1);
  double sign = ((row + col) % 2 == 0) ? 1.0 : -1.0;
  return sign * det;
}

/// All port-pair scattering values at z: S(out_k, in_j) = -<out_k|(U0-zI)^{-1}|in_j>.
inline Matrix resolvent_scatter(const TimeStepOperator& op, cplx z) {
  Matrix a = op.entries;
  a.diagonal().array() -= z;
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible())
    throw numerical_error("resolvent_scatter: U0 - zI is singular at this z");
  const int p = op.num_ports();
  Matrix rhs = Matrix::Zero(op.dim(), p);
  for (int j = 0; j < p; ++j) rhs(op.in_indices[j], j) = 1.0;
  Matrix x = lu.solve(rhs);
  Matrix s(p, p);  // row k: out port, col j: in port
  for (int k = 0; k < p; ++k)
    for (int j = 0; j < p; ++j) s(k, j) = -x(op.out_indices[k], j);
  return s;
}

inline CharDecomposition char_decompose(const TimeStepOperator& op, int in_port = 0,
                                        int out_port = 0) {
  if (in_port < 0 || in_port >= op.num_ports() || out_port < 0 || out_port >= op.num_ports())
    throw validation_error("char_decompose: invalid port index");
  const int n = op.dim();
  const int row = op.in_indices[in_port];
  const int col = op.out_indices[out_port];

  // Sample f and g on rotated roots of unity; g via the resolvent identity
  // g(z) = f(z) * [(U0-zI)^{-1}]_{out,in}, with a signed-minor fallback
  // wherever f is tiny.
  std::vector<cplx> nodes = circle_nodes(n + 1);
  std::vector<std::pair<cplx, cplx>> f_samples, g_samples;
  int usable = 0;
  for (cplx z : nodes) {
    Matrix a = op.entries;
    a.diagonal().array() -= z;
    Eigen::PartialPivLU<Matrix> lu(a);
    cplx det = lu.determinant();
    cplx gval;
    if (std::abs(det) < 1e-12) {
      gval = cofactor_value(op, row, col, z);
    } else {
      Vector e_in = Vector::Zero(n);
      e_in(row) = 1.0;
      Vector x = lu.solve(e_in);
      gval = det * x(col);
      ++usable;
    }
    f_samples.emplace_back(z, det);
    g_samples.emplace_back(z, gval);
  }
  if (usable == 0)
    throw numerical_error("char_decompose: all interpolation nodes singular");

  CharDecomposition dec;
  dec.in_port = in_port;
  dec.out_port = out_port;
  dec.num_ports = op.num_ports();
  dec.f_full = interpolate_from_circle(f_samples, n);
  dec.g_full = interpolate_from_circle(g_samples, n);

  if (dec.g_full.is_zero())
    throw numerical_error("char_decompose: vanishing cofactor for this port pair");

  // Common factor b: origin roots first, then matched nonzero root pairs.
  RootSet rf = poly_roots(dec.f_full);
  RootSet rg = dec.g_full.degree() >= 1 ? poly_roots(dec.g_full) : RootSet{};
  int zeros_in_b = std::min(rf.zero_count, rg.zero_count);

  std::vector<cplx> b_roots;
  for (auto [i, j] : pair_common_roots(rf, rg)) {
    // Polish on whichever polynomial gives the smaller backward error; a root
    // can be multiple in one factor and simple in the other.
    cplx cf = newton_polish(dec.f_full, rf.roots[i]);
    cplx cg = newton_polish(dec.g_full, rg.roots[j]);
    double sf = std::abs(dec.f_full.eval(cf)) / dec.f_full.max_coeff_mag() +
                std::abs(dec.g_full.eval(cf)) / dec.g_full.max_coeff_mag();
    double sg = std::abs(dec.f_full.eval(cg)) / dec.f_full.max_coeff_mag() +
                std::abs(dec.g_full.eval(cg)) / dec.g_full.max_coeff_mag();
    b_roots.push_back(sf <= sg ? cf : cg);
  }
  dec.b = ComplexPoly::from_roots(b_roots).shifted(zeros_in_b);

  auto [fq, fr] = poly_divmod(dec.f_full, dec.b);
  auto [gq, gr] = poly_divmod(dec.g_full, dec.b);
  (void)fr;
  (void)gr;
  cplx c = fq.lead();
  dec.f_red = fq.scaled(1.0 / c).trimmed();
  dec.g_red = gq.scaled(1.0 / c).trimmed();

  dec.s = dec.f_red.trailing_zeros();
  dec.d = dec.f_red.degree();
  dec.g0 = dec.g_red[0];
  dec.etas = poly_roots(dec.f_red);

  // Diagnostic: how well b * reduced reproduces the sampled polynomials.
  auto recompose_dev = [&](const ComplexPoly& full, const ComplexPoly& red) {
    ComplexPoly back = (dec.b * red).scaled(c);
    double dev = 0;
    int deg = std::max(full.degree(), back.degree());
    for (int k = 0; k <= deg; ++k) dev = std::max(dev, std::abs(full[k] - back[k]));
    return dev / std::max(full.max_coeff_mag(), 1e-300);
  };
  dec.recompose_error = std::max(recompose_dev(dec.f_full, dec.f_red),
                                 recompose_dev(dec.g_full, dec.g_red));
  return dec;
}

inline CharDecomposition char_decompose(const TimeStepOperator& op, const std::string& in_port,
                                        const std::string& out_port) {
  return char_decompose(op, op.port_index(in_port), op.port_index(out_port));
}

/// S(z) = z^delay * (-g_red(z)/f_red(z)).
struct ScatterFunction {
  CharDecomposition dec;
  int delay_exponent = 0;

  cplx eval(cplx z) const {
    double guard = tol::pole;
    if (dec.s > 0 && std::abs(z) < guard)
      throw numerical_error("scatter_eval: z too close to a pole at the origin");
    for (cplx eta : dec.etas.roots)
      if (std::abs(z - eta) < guard)
        throw numerical_error("scatter_eval: z too close to a pole");
    cplx v = -dec.g_red.eval(z) / dec.f_red.eval(z);
    if (delay_exponent != 0) v *= std::pow(z, delay_exponent);
    return v;
  }
};

inline cplx scatter_eval(const ScatterFunction& s, cplx z) { return s.eval(z); }

struct ReciprocalReport {
  double max_deviation = 0;
  bool pass = false;
};

/// Single-runway identity f_k = g0 * conj(g_{d-k}).
inline ReciprocalReport check_reciprocal(const CharDecomposition& dec, double tolerance = 1e-8) {
  double dev = 0;
  for (int k = 0; k <= dec.d; ++k)
    dev = std::max(dev, std::abs(dec.f_red[k] - dec.g0 * std::conj(dec.g_red[dec.d - k])));
  return {dev, dev <= tolerance};
}

/// Winding of alpha(theta) = -f(e^{i theta})/g(e^{i theta}) over one loop of
/// theta, in turns. Equals d for a single runway.
inline double alpha_winding(const CharDecomposition& dec, int grid = 4096) {
  double total = 0;
  cplx prev;
  for (int m = 0; m <= grid; ++m) {
    cplx z = std::polar(1.0, 2.0 * std::numbers::pi * m / grid + 1e-7);
    cplx a = -dec.f_red.eval(z) / dec.g_red.eval(z);
    if (m > 0) total += std::arg(a / prev);
    prev = a;
  }
  return total / (2.0 * std::numbers::pi);
}

struct SpectralFlow {
  std::vector<std::vector<cplx>> tracks;  // tracks[step][track]
  std::vector<int> permutation;           // final eigenvalue of track i = initial of permutation[i]
  std::vector<bool> moving;               // per track: did it travel
  double min_gap = 0;                     // min pairwise eigenvalue gap over the sweep
  int steps_used = 0;
  bool ambiguous = false;
};

namespace detail {
inline std::vector<int> greedy_match(const std::vector<cplx>& from, const std::vector<cplx>& to) {
  const int n = static_cast<int>(from.size());
  struct Cand {
    double dist;
    int i, j;
  };
  std::vector<Cand> cands;
  cands.reserve(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cands.push_back({std::abs(from[i] - to[j]), i, j});
  std::sort(cands.begin(), cands.end(),
            [](const Cand& a, const Cand& b) { return a.dist < b.dist; });
  std::vector<int> match(n, -1);
  std::vector<bool> used(n, false);
  for (const Cand& c : cands) {
    if (match[c.i] >= 0 || used[c.j]) continue;
    match[c.i] = c.j;
    used[c.j] = true;
  }
  return match;
}
}  // namespace detail

/// Eigenvalue tracks of U0 + alpha |in_j><out_k| as alpha loops once around
/// the unit circle. Single-runway setting: the operator is unitary there.
inline SpectralFlow spectral_flow(const TimeStepOperator& op, int in_port, int out_port,
                                  int steps) {
  const int n = op.dim();
  if (steps < 8 * n) steps = 8 * n;
  const int row = op.in_indices[in_port];
  const int col = op.out_indices[out_port];

  for (int attempt = 0; attempt < 4; ++attempt, steps *= 2) {
    SpectralFlow flow;
    flow.steps_used = steps;
    flow.tracks.assign(steps + 1, std::vector<cplx>(n));
    double max_move = 0;

    std::vector<cplx> prev(n);
    for (int m = 0; m <= steps; ++m) {
      Matrix a = op.entries;
      a(row, col) = std::polar(1.0, 2.0 * std::numbers::pi * m / steps);
      Eigen::ComplexEigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
      std::vector<cplx> eig(n);
      for (int i = 0; i < n; ++i) eig[i] = es.eigenvalues()(i);

      if (m == 0) {
        std::sort(eig.begin(), eig.end(),
                  [](cplx a_, cplx b_) { return std::arg(a_) < std::arg(b_); });
        flow.tracks[0] = eig;
      } else {
        std::vector<int> match = detail::greedy_match(prev, eig);
        for (int i = 0; i < n; ++i) {
          flow.tracks[m][i] = eig[match[i]];
          max_move = std::max(max_move, std::abs(flow.tracks[m][i] - prev[i]));
        }
      }
      prev = flow.tracks[m];
    }

    flow.moving.assign(n, false);
    for (int i = 0; i < n; ++i) {
      double travel = 0;
      for (int m = 1; m <= steps; ++m) travel += std::abs(flow.tracks[m][i] - flow.tracks[m - 1][i]);
      flow.moving[i] = travel > 0.05;
    }

    // Moving eigenvalues sweep the whole circle, so they inevitably coincide
    // with stationary (bound) ones; only gaps between moving tracks limit the
    // reliability of the matching.
    flow.min_gap = 1e300;
    for (int m = 0; m <= steps; ++m)
      for (int i = 0; i < n; ++i) {
        if (!flow.moving[i]) continue;
        for (int j = i + 1; j < n; ++j)
          if (flow.moving[j])
            flow.min_gap = std::min(flow.min_gap, std::abs(flow.tracks[m][i] - flow.tracks[m][j]));
      }

    // Tracking is trustworthy only when eigenvalues move much less per step
    // than they are separated.
    if (flow.min_gap < 10.0 * max_move && attempt < 3) continue;
    flow.ambiguous = flow.min_gap < 10.0 * max_move;

    flow.permutation = detail::greedy_match(flow.tracks[steps], flow.tracks[0]);
    return flow;
  }
  throw numerical_error("spectral_flow: track ambiguity persists after refinement");
}

struct LeakReport {
  double max_deviation = 0;  // worst | |eta|^2 - (1 - sum_k |<out_k|psi>|^2) |
  int checked = 0;
};

/// Eigenstate leak relation |eta|^2 = 1 - sum_k |<out_k|psi>|^2, checked for
/// every numerically clean eigenpair of U0.
inline LeakReport leak_relation(const TimeStepOperator& op) {
  Eigen::ComplexEigenSolver<Matrix> es(op.entries, /*computeEigenvectors=*/true);
  LeakReport rep;
  for (int i = 0; i < op.dim(); ++i) {
    cplx eta = es.eigenvalues()(i);
    Vector psi = es.eigenvectors().col(i);
    if ((op.entries * psi - eta * psi).norm() > 1e-8) continue;  // defective direction
    double out_weight = 0;
    for (int k : op.out_indices) out_weight += std::norm(psi(k));
    rep.max_deviation =
        std::max(rep.max_deviation, std::abs(std::norm(eta) - (1.0 - out_weight)));
    ++rep.checked;
  }
  return rep;
}

}  // namespace qws
