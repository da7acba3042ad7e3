#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qws/defs.hpp"

namespace qws {

/// Complex polynomial with coefficients in ascending degree order.
/// The zero polynomial has an empty coefficient list.
struct ComplexPoly {
  std::vector<cplx> coeffs;

  ComplexPoly() = default;
  explicit ComplexPoly(std::vector<cplx> c) : coeffs(std::move(c)) {}

  static ComplexPoly constant(cplx c) { return ComplexPoly{{c}}; }

  static ComplexPoly from_roots(const std::vector<cplx>& roots, cplx lead = 1.0) {
    ComplexPoly p{{lead}};
    for (cplx r : roots) {
      // multiply by (z - r)
      std::vector<cplx> next(p.coeffs.size() + 1, cplx(0));
      for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
        next[i + 1] += p.coeffs[i];
        next[i] -= r * p.coeffs[i];
      }
      p.coeffs = std::move(next);
    }
    return p;
  }

  bool is_zero() const { return coeffs.empty(); }
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  cplx lead() const { return coeffs.empty() ? cplx(0) : coeffs.back(); }

  cplx operator[](std::size_t k) const { return k < coeffs.size() ? coeffs[k] : cplx(0); }

  double max_coeff_mag() const {
    double m = 0;
    for (cplx c : coeffs) m = std::max(m, std::abs(c));
    return m;
  }

  cplx eval(cplx z) const {
    cplx acc(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  ComplexPoly derivative() const {
    if (coeffs.size() <= 1) return ComplexPoly{};
    std::vector<cplx> d(coeffs.size() - 1);
    for (std::size_t k = 1; k < coeffs.size(); ++k) d[k - 1] = double(k) * coeffs[k];
    return ComplexPoly{std::move(d)};
  }

  /// Drop leading coefficients below rel_eps * max |coeff|.
  ComplexPoly trimmed(double rel_eps = tol::trim) const {
    double cut = rel_eps * max_coeff_mag();
    std::vector<cplx> c = coeffs;
    while (!c.empty() && std::abs(c.back()) <= cut) c.pop_back();
    return ComplexPoly{std::move(c)};
  }

  /// Number of trailing (low-order) coefficients below rel_eps * max |coeff|,
  /// i.e. the multiplicity of the root at the origin.
  int trailing_zeros(double rel_eps = tol::trim) const {
    double cut = rel_eps * max_coeff_mag();
    int s = 0;
    while (s < static_cast<int>(coeffs.size()) && std::abs(coeffs[s]) <= cut) ++s;
    return s == static_cast<int>(coeffs.size()) ? 0 : s;  // zero polynomial: no roots at all
  }

  ComplexPoly scaled(cplx a) const {
    ComplexPoly p = *this;
    for (cplx& c : p.coeffs) c *= a;
    return p;
  }

  ComplexPoly monic() const {
    if (is_zero()) return *this;
    return scaled(1.0 / coeffs.back());
  }

  /// Multiply by z^k.
  ComplexPoly shifted(int k) const {
    if (is_zero()) return *this;
    std::vector<cplx> c(coeffs.size() + k, cplx(0));
    std::copy(coeffs.begin(), coeffs.end(), c.begin() + k);
    return ComplexPoly{std::move(c)};
  }
};

inline ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
  if (a.is_zero() || b.is_zero()) return ComplexPoly{};
  std::vector<cplx> c(a.coeffs.size() + b.coeffs.size() - 1, cplx(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
  return ComplexPoly{std::move(c)};
}

/// Long division a = q*b + r. b must be nonzero.
inline std::pair<ComplexPoly, ComplexPoly> poly_divmod(const ComplexPoly& a, const ComplexPoly& b) {
  if (b.is_zero()) throw numerical_error("poly_divmod: division by zero polynomial");
  std::vector<cplx> rem = a.coeffs;
  int db = b.degree();
  if (a.degree() < db) return {ComplexPoly{}, a};
  std::vector<cplx> q(a.degree() - db + 1, cplx(0));
  for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
    cplx f = rem[k + db] / b.coeffs[db];
    q[k] = f;
    for (int j = 0; j <= db; ++j) rem[k + j] -= f * b.coeffs[j];
  }
  rem.resize(db > 0 ? db : 0);
  return {ComplexPoly{std::move(q)}, ComplexPoly{std::move(rem)}.trimmed()};
}

enum class Ring { inside, on_circle, outside };

inline Ring classify_ring(cplx rho, double eps_circle = tol::circle) {
  double m = std::abs(rho);
  if (std::abs(m - 1.0) <= eps_circle) return Ring::on_circle;
  return m < 1.0 ? Ring::inside : Ring::outside;
}

/// Roots of a polynomial. Roots exactly at the origin are counted separately
/// (by trailing-coefficient trimming); `roots` holds the nonzero roots.
struct RootSet {
  int zero_count = 0;
  std::vector<cplx> roots;
  std::vector<Ring> rings;

  int total() const { return zero_count + static_cast<int>(roots.size()); }
};

inline cplx poly_eval(const ComplexPoly& p, cplx z) { return p.eval(z); }

/// Interpolate a polynomial of degree <= degree_bound from samples taken on
/// scaled/rotated roots of unity (inverse DFT). The nodes must be
/// node0 * omega^k in sample order, omega = exp(2*pi*i/(D+1)).
inline ComplexPoly interpolate_from_circle(const std::vector<std::pair<cplx, cplx>>& samples,
                                           int degree_bound) {
  const int n = static_cast<int>(samples.size());
  if (n < degree_bound + 1)
    throw validation_error("interpolate_from_circle: need at least degree_bound+1 samples");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(samples[i].first - samples[j].first) < 1e-14)
        throw validation_error("interpolate_from_circle: duplicate nodes");

  const cplx node0 = samples[0].first;
  const cplx omega = std::polar(1.0, 2.0 * std::numbers::pi / n);
  for (int k = 0; k < n; ++k) {
    cplx expect = node0 * std::pow(omega, k);
    if (std::abs(samples[k].first - expect) > 1e-9 * std::abs(node0))
      throw validation_error("interpolate_from_circle: nodes are not rotated roots of unity");
  }

  std::vector<cplx> coeffs(n, cplx(0));
  for (int j = 0; j < n; ++j) {
    cplx acc(0);
    for (int k = 0; k < n; ++k)
      acc += samples[k].second * std::polar(1.0, -2.0 * std::numbers::pi * j * k / n);
    coeffs[j] = acc / (double(n) * std::pow(node0, j));
  }
  return ComplexPoly{std::move(coeffs)}.trimmed();
}

/// Standard node set used when sampling determinants: (D+1)-th roots of unity
/// rotated by exp(i*pi/(4*(D+1))) so bound-state eigenvalues like z=-1 never
/// coincide with a node.
inline std::vector<cplx> circle_nodes(int count) {
  std::vector<cplx> nodes(count);
  const double rot = std::numbers::pi / (4.0 * count);
  for (int k = 0; k < count; ++k)
    nodes[k] = std::polar(1.0, rot + 2.0 * std::numbers::pi * k / count);
  return nodes;
}

/// Roots via companion-matrix eigenvalues; origin roots counted by trimming.
inline RootSet poly_roots(const ComplexPoly& p_in) {
  ComplexPoly p = p_in.trimmed();
  if (p.is_zero()) throw validation_error("poly_roots: zero polynomial");
  if (p.degree() < 1) throw validation_error("poly_roots: degree must be >= 1");

  RootSet rs;
  rs.zero_count = p.trailing_zeros();
  std::vector<cplx> c(p.coeffs.begin() + rs.zero_count, p.coeffs.end());

  const int d = static_cast<int>(c.size()) - 1;
  if (d >= 1) {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i] / c[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, /*computeEigenvectors=*/false);
    for (int i = 0; i < d; ++i) rs.roots.push_back(es.eigenvalues()(i));
    std::sort(rs.roots.begin(), rs.roots.end(), [](cplx a, cplx b) {
      return std::arg(a) != std::arg(b) ? std::arg(a) < std::arg(b) : std::abs(a) < std::abs(b);
    });
  }
  for (cplx r : rs.roots) rs.rings.push_back(classify_ring(r));
  return rs;
}

/// Greedy nearest-neighbor matching of roots within tol; each root used once.
/// Returns index pairs (into a.roots, b.roots).
inline std::vector<std::pair<int, int>> pair_common_roots(const RootSet& a, const RootSet& b,
                                                          double tolerance = tol::common_root) {
  struct Cand {
    double dist;
    int i, j;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < static_cast<int>(a.roots.size()); ++i)
    for (int j = 0; j < static_cast<int>(b.roots.size()); ++j) {
      double d = std::abs(a.roots[i] - b.roots[j]);
      if (d <= tolerance) cands.push_back({d, i, j});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.dist < y.dist; });

  std::vector<bool> ua(a.roots.size(), false), ub(b.roots.size(), false);
  std::vector<std::pair<int, int>> pairs;
  for (const Cand& c : cands) {
    if (ua[c.i] || ub[c.j]) continue;
    ua[c.i] = ub[c.j] = true;
    pairs.emplace_back(c.i, c.j);
  }
  return pairs;
}

/// A few Newton steps; returns the polished root (or the input if Newton stalls).
inline cplx newton_polish(const ComplexPoly& p, cplx x) {
  ComplexPoly dp = p.derivative();
  for (int it = 0; it < 12; ++it) {
    cplx fx = p.eval(x);
    cplx dfx = dp.eval(x);
    if (std::abs(dfx) < 1e-300) break;
    cplx step = fx / dfx;
    x -= step;
    if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) break;
  }
  return x;
}

}  // namespace qws
