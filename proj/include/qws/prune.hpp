#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "qws/defs.hpp"
#include "qws/graph.hpp"
#include "qws/poly.hpp"
#include "qws/scatter.hpp"

namespace qws {

/// A degree-1 stand-in vertex whose back-reflection amplitude depends on z:
/// an incoming amplitude returns multiplied by num(z)/den(z). The rational
/// already folds in the round-trip delay through the cut edge.
struct FrequencyVertex {
  std::string id;
  ComplexPoly num;
  ComplexPoly den;
  int delay = 2;

  cplx response(cplx z) const {
    cplx d = den.eval(z);
    if (std::abs(d) < tol::pole * std::max(1.0, den.max_coeff_mag()))
      throw numerical_error("frequency vertex response at a pole");
    return num.eval(z) / d;
  }
};

struct PrunedGraph {
  GraphSpec spec;  // frequency vertices appear as reflect-coin placeholders
  std::vector<FrequencyVertex> fvs;
};

namespace detail {

inline std::set<std::string> component_of(const GraphSpec& spec, const std::string& start,
                                          const std::pair<std::string, std::string>& cut) {
  std::set<std::string> seen{start};
  std::vector<std::string> stack{start};
  while (!stack.empty()) {
    std::string v = stack.back();
    stack.pop_back();
    for (const auto& [a, b] : spec.edges) {
      if ((a == cut.first && b == cut.second) || (a == cut.second && b == cut.first)) continue;
      std::string other;
      if (a == v) other = b;
      else if (b == v) other = a;
      else continue;
      if (seen.insert(other).second) stack.push_back(other);
    }
  }
  return seen;
}

}  // namespace detail

/// Cut the edge {keep_v, prune_v}, isolate the component containing prune_v,
/// and compute the back-reflection seen from keep_v:
///   r(z) = -z^2 g(z) / f(z), with common powers of z cancelled.
/// The cut edge must be the only connection between the two sides.
inline FrequencyVertex extract_subgraph_reflection(const GraphSpec& spec,
                                                   const std::string& keep_v,
                                                   const std::string& prune_v) {
  if (!spec.has_vertex(keep_v) || !spec.has_vertex(prune_v))
    throw validation_error("prune cut names an unknown vertex");
  if (!spec.has_edge(keep_v, prune_v))
    throw validation_error("prune cut is not an edge of the graph");
  std::set<std::string> comp = detail::component_of(spec, prune_v, {keep_v, prune_v});
  if (comp.count(keep_v))
    throw validation_error("prune cut is not a bridge: the two sides stay connected");
  for (const auto& [a, b] : spec.edges) {
    bool ain = comp.count(a) > 0, bin = comp.count(b) > 0;
    if (ain != bin && !((a == keep_v && b == prune_v) || (a == prune_v && b == keep_v)))
      throw validation_error("prune cut does not isolate the subgraph");
  }
  for (const auto& port : spec.ports) {
    if (comp.count(port.in_state.tail) && comp.count(port.in_state.head))
      throw validation_error("cannot prune a subgraph that carries a port");
  }

  // Subgraph plus the boundary stub keep_v, probed through the cut edge.
  GraphSpec sub;
  sub.vertices.emplace_back(keep_v, CoinSpec{CoinSpec::Kind::reflect, 1.0, {}});
  for (const auto& [id, coin] : spec.vertices)
    if (comp.count(id)) sub.vertices.emplace_back(id, coin);
  for (const auto& [a, b] : spec.edges)
    if (comp.count(a) && comp.count(b)) sub.edges.emplace_back(a, b);
  sub.edges.emplace_back(keep_v, prune_v);
  sub.ports.push_back(Port{"stub", {keep_v, prune_v}, {prune_v, keep_v}});
  validate_spec(sub);

  TimeStepOperator op = assemble_U0(sub, build_edge_basis(sub));
  CharDecomposition dec = char_decompose(op, "stub", "stub");

  ComplexPoly num = dec.g_red.shifted(2).scaled(-1.0);
  ComplexPoly den = dec.f_red;
  int cancel = std::min(num.trailing_zeros(tol::trim), den.trailing_zeros(tol::trim));
  num.coeffs.erase(num.coeffs.begin(), num.coeffs.begin() + cancel);
  den.coeffs.erase(den.coeffs.begin(), den.coeffs.begin() + cancel);

  FrequencyVertex fv;
  fv.id = prune_v;
  fv.num = num;
  fv.den = den;
  fv.delay = 2;

  // Sanity: |r| cannot exceed 1 on the unit circle.
  for (int m = 0; m < 256; ++m) {
    cplx z = std::polar(1.0, 2.0 * std::numbers::pi * (m + 0.37) / 256);
    if (std::abs(fv.response(z)) > 1.0 + 1e-8)
      throw numerical_error("subgraph reflection exceeds unit modulus on the circle");
  }
  return fv;
}

/// Replace the component behind each cut with a frequency vertex of the same
/// name, keeping the cut edge as its only attachment.
inline PrunedGraph prune(const GraphSpec& spec,
                         const std::vector<std::pair<std::string, std::string>>& cuts) {
  PrunedGraph pg;
  pg.spec = spec;
  for (const auto& [keep_v, prune_v] : cuts) {
    FrequencyVertex fv = extract_subgraph_reflection(pg.spec, keep_v, prune_v);
    std::set<std::string> comp = detail::component_of(pg.spec, prune_v, {keep_v, prune_v});

    GraphSpec next;
    for (const auto& [id, coin] : pg.spec.vertices)
      if (!comp.count(id)) next.vertices.emplace_back(id, coin);
    next.vertices.emplace_back(prune_v, CoinSpec{CoinSpec::Kind::reflect, 1.0, {}});
    for (const auto& [a, b] : pg.spec.edges)
      if (!comp.count(a) && !comp.count(b)) next.edges.emplace_back(a, b);
    next.edges.emplace_back(keep_v, prune_v);
    next.ports = pg.spec.ports;
    validate_spec(next);

    pg.spec = std::move(next);
    pg.fvs.push_back(std::move(fv));
  }
  return pg;
}

namespace detail {

/// The z-dependent step operator of a pruned graph, with frequency-vertex
/// reflections substituted pointwise.
inline Matrix pruned_step(const PrunedGraph& pg, const TimeStepOperator& op, cplx z) {
  Matrix U = op.entries;
  for (const FrequencyVertex& fv : pg.fvs) {
    std::vector<std::string> dirs = pg.spec.directions(fv.id);
    if (dirs.size() != 1)
      throw validation_error("frequency vertex must have exactly one neighbour");
    int in = op.basis.index({dirs[0], fv.id});
    int out = op.basis.index({fv.id, dirs[0]});
    U(out, in) = fv.response(z);
  }
  return U;
}

}  // namespace detail

/// S_jk(z) for the pruned graph: -<out_k| (U'(z) - z)^{-1} |in_j>, rows
/// indexed by out port, columns by in port. Near a frequency-vertex pole the
/// value is taken as the two-sided radial limit, which must agree.
inline Matrix pruned_resolvent_scatter(const PrunedGraph& pg, const TimeStepOperator& op,
                                       cplx z) {
  auto eval_at = [&](cplx zz) {
    Matrix A = detail::pruned_step(pg, op, zz);
    A.diagonal().array() -= zz;
    Eigen::FullPivLU<Matrix> lu(A);
    if (!lu.isInvertible())
      throw numerical_error("pruned step operator is singular at this z");
    Matrix inv = lu.inverse();
    const int p = op.num_ports();
    Matrix S(p, p);
    for (int k = 0; k < p; ++k)
      for (int j = 0; j < p; ++j) S(k, j) = -inv(op.out_indices[k], op.in_indices[j]);
    return S;
  };

  bool near_pole = false;
  for (const FrequencyVertex& fv : pg.fvs)
    if (std::abs(fv.den.eval(z)) < 1e-9 * std::max(1.0, fv.den.max_coeff_mag()))
      near_pole = true;
  if (!near_pole) {
    try {
      return eval_at(z);
    } catch (const numerical_error&) {
      near_pole = true;
    }
  }
  Matrix lo = eval_at(z * (1.0 - 1e-8));
  Matrix hi = eval_at(z * (1.0 + 1e-8));
  if ((lo - hi).cwiseAbs().maxCoeff() > 1e-6)
    throw numerical_error("two-sided limits disagree at a frequency-vertex pole");
  return 0.5 * (lo + hi);
}

inline cplx pruned_scatter_eval(const PrunedGraph& pg, const std::string& in_port,
                                const std::string& out_port, cplx z) {
  TimeStepOperator op = assemble_U0(pg.spec, build_edge_basis(pg.spec));
  Matrix S = pruned_resolvent_scatter(pg, op, z);
  return S(op.port_index(out_port), op.port_index(in_port));
}

struct PruneEquivalence {
  double max_deviation = 0;
  bool pass = false;
};

/// Compare every port pair of the full and pruned graphs on the circle.
inline PruneEquivalence verify_prune_equivalence(const GraphSpec& full, const PrunedGraph& pg,
                                                 int grid = 256) {
  TimeStepOperator op_full = assemble_U0(full, build_edge_basis(full));
  TimeStepOperator op_pr = assemble_U0(pg.spec, build_edge_basis(pg.spec));
  PruneEquivalence res;
  for (int m = 0; m < grid; ++m) {
    cplx z = std::polar(1.0, 2.0 * std::numbers::pi * (m + 0.31) / grid);
    Matrix a, b;
    try {
      a = resolvent_scatter(op_full, z);
      b = pruned_resolvent_scatter(pg, op_pr, z);
    } catch (const numerical_error&) {
      continue;  // both sides can be singular at isolated spectral points
    }
    res.max_deviation = std::max(res.max_deviation, (a - b).cwiseAbs().maxCoeff());
  }
  res.pass = res.max_deviation < 1e-8;
  return res;
}

}  // namespace qws
