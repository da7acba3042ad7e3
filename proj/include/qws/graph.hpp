#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qws/defs.hpp"

namespace qws {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Directed edge state |tail,head>: a walker on edge {tail,head} that has
/// just left tail, arriving at head.
struct DirectedEdge {
  std::string tail, head;

  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
  friend auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

struct CoinSpec {
  enum class Kind { grover, reflect, custom };
  Kind kind = Kind::grover;
  cplx phase = 1.0;  // reflect only
  Matrix matrix;     // custom only; rows/cols ordered lexicographically by neighbor id
};

struct Port {
  std::string name;
  DirectedEdge in_state;   // no pre-image under U0
  DirectedEdge out_state;  // no image under U0
};

struct GraphSpec {
  std::vector<std::pair<std::string, CoinSpec>> vertices;
  std::vector<std::pair<std::string, std::string>> edges;  // unordered; self-loops allowed
  std::vector<Port> ports;

  bool has_vertex(const std::string& id) const {
    return std::any_of(vertices.begin(), vertices.end(),
                       [&](const auto& v) { return v.first == id; });
  }

  const CoinSpec& coin(const std::string& id) const {
    for (const auto& v : vertices)
      if (v.first == id) return v.second;
    throw validation_error("unknown vertex: " + id);
  }

  bool has_edge(const std::string& u, const std::string& v) const {
    return std::any_of(edges.begin(), edges.end(), [&](const auto& e) {
      return (e.first == u && e.second == v) || (e.first == v && e.second == u);
    });
  }

  /// Sorted direction list at a vertex: neighbor ids, a self-loop contributing
  /// the vertex's own id once.
  std::vector<std::string> directions(const std::string& v) const {
    std::vector<std::string> dirs;
    for (const auto& e : edges) {
      if (e.first == v && e.second == v)
        dirs.push_back(v);
      else if (e.first == v)
        dirs.push_back(e.second);
      else if (e.second == v)
        dirs.push_back(e.first);
    }
    std::sort(dirs.begin(), dirs.end());
    return dirs;
  }

  int degree(const std::string& v) const { return static_cast<int>(directions(v).size()); }
};

inline void validate_spec(const GraphSpec& spec) {
  std::set<std::string> ids;
  for (const auto& [id, coin] : spec.vertices) {
    if (!ids.insert(id).second) throw validation_error("duplicate vertex id: " + id);
    (void)coin;
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& [u, v] : spec.edges) {
    if (!ids.count(u)) throw validation_error("edge references unknown vertex: " + u);
    if (!ids.count(v)) throw validation_error("edge references unknown vertex: " + v);
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second)
      throw validation_error("duplicate edge {" + u + "," + v + "}");
  }
  std::set<DirectedEdge> claimed;
  std::set<std::string> port_names;
  for (const Port& p : spec.ports) {
    if (!port_names.insert(p.name).second)
      throw validation_error("duplicate port name: " + p.name);
    for (const DirectedEdge& st : {p.in_state, p.out_state}) {
      if (!spec.has_edge(st.tail, st.head))
        throw validation_error("port " + p.name + " uses undeclared edge {" + st.tail + "," +
                               st.head + "}");
      if (!claimed.insert(st).second)
        throw validation_error("directed state |" + st.tail + "," + st.head +
                               "> claimed by two ports");
    }
  }
}

/// Ordered basis of directed edge states. Ordering is lexicographic by
/// (tail id, head id); a self-loop contributes exactly one state.
struct EdgeBasis {
  std::vector<DirectedEdge> states;
  std::map<DirectedEdge, int> index_of;

  int size() const { return static_cast<int>(states.size()); }

  int index(const DirectedEdge& st) const {
    auto it = index_of.find(st);
    if (it == index_of.end())
      throw validation_error("state |" + st.tail + "," + st.head + "> not in basis");
    return it->second;
  }
};

inline EdgeBasis build_edge_basis(const GraphSpec& spec) {
  validate_spec(spec);
  EdgeBasis basis;
  for (const auto& [u, v] : spec.edges) {
    if (u == v) {
      basis.states.push_back({u, u});
    } else {
      basis.states.push_back({u, v});
      basis.states.push_back({v, u});
    }
  }
  std::sort(basis.states.begin(), basis.states.end());
  for (int i = 0; i < basis.size(); ++i) basis.index_of[basis.states[i]] = i;
  return basis;
}

/// Dense time-step operator over an edge basis, with out-port columns and
/// in-port rows zeroed (U0 |out> = 0, no pre-image for |in>).
struct TimeStepOperator {
  Matrix entries;
  EdgeBasis basis;
  std::vector<int> in_indices, out_indices;
  std::vector<std::string> port_names;

  int dim() const { return static_cast<int>(entries.rows()); }
  int num_ports() const { return static_cast<int>(in_indices.size()); }

  int port_index(const std::string& name) const {
    for (std::size_t i = 0; i < port_names.size(); ++i)
      if (port_names[i] == name) return static_cast<int>(i);
    throw validation_error("unknown port: " + name);
  }
};

/// The local coin matrix at a vertex, indexed by its sorted direction list.
inline Matrix coin_matrix(const GraphSpec& spec, const std::string& v) {
  const CoinSpec& coin = spec.coin(v);
  const int n = spec.degree(v);
  switch (coin.kind) {
    case CoinSpec::Kind::grover: {
      // t = 2/n everywhere, r = -1 + 2/n on the back-direction.
      Matrix c = Matrix::Constant(n, n, cplx(2.0 / n));
      c -= Matrix::Identity(n, n);
      return c;
    }
    case CoinSpec::Kind::reflect: {
      if (n != 1)
        throw validation_error("reflect coin on vertex " + v + " of degree " + std::to_string(n));
      if (std::abs(std::abs(coin.phase) - 1.0) > tol::unitary)
        throw validation_error("reflect phase at vertex " + v + " is not unit modulus");
      Matrix c(1, 1);
      c(0, 0) = coin.phase;
      return c;
    }
    case CoinSpec::Kind::custom: {
      if (coin.matrix.rows() != n || coin.matrix.cols() != n)
        throw validation_error("custom coin at vertex " + v + " has wrong dimension");
      Matrix dev = coin.matrix.adjoint() * coin.matrix - Matrix::Identity(n, n);
      if (dev.cwiseAbs().maxCoeff() > tol::unitary)
        throw validation_error("custom coin at vertex " + v + " is not unitary");
      return coin.matrix;
    }
  }
  throw validation_error("unknown coin kind");
}

/// Assemble U0: entry <v,w|U0|u,v> is the coin amplitude at v from incoming
/// direction u to outgoing direction w, then out-port columns and in-port
/// rows are zeroed.
inline TimeStepOperator assemble_U0(const GraphSpec& spec, const EdgeBasis& basis) {
  TimeStepOperator op;
  op.basis = basis;
  op.entries = Matrix::Zero(basis.size(), basis.size());

  for (const auto& [v, coin] : spec.vertices) {
    (void)coin;
    std::vector<std::string> dirs = spec.directions(v);
    if (dirs.empty()) continue;
    Matrix c = coin_matrix(spec, v);
    for (std::size_t ju = 0; ju < dirs.size(); ++ju) {
      int col = basis.index({dirs[ju], v});
      for (std::size_t iw = 0; iw < dirs.size(); ++iw) {
        int row = basis.index({v, dirs[iw]});
        op.entries(row, col) = c(iw, ju);
      }
    }
  }

  for (const Port& p : spec.ports) {
    int in = basis.index(p.in_state);
    int out = basis.index(p.out_state);
    op.entries.col(out).setZero();
    op.entries.row(in).setZero();
    op.in_indices.push_back(in);
    op.out_indices.push_back(out);
    op.port_names.push_back(p.name);
  }
  return op;
}

struct IsometryReport {
  double max_deviation = 0;  // worst entrywise deviation over both identities
  bool pass = false;
};

/// Checks U0^dag U0 = I - sum |out><out| and U0 U0^dag = I - sum |in><in|.
inline IsometryReport validate_partial_isometry(const TimeStepOperator& op) {
  const int n = op.dim();
  Matrix lhs = op.entries.adjoint() * op.entries;
  Matrix rhs = Matrix::Identity(n, n);
  for (int k : op.out_indices) rhs(k, k) = 0;
  double dev = (lhs - rhs).cwiseAbs().maxCoeff();

  Matrix lhs2 = op.entries * op.entries.adjoint();
  Matrix rhs2 = Matrix::Identity(n, n);
  for (int j : op.in_indices) rhs2(j, j) = 0;
  dev = std::max(dev, (lhs2 - rhs2).cwiseAbs().maxCoeff());

  return {dev, dev <= tol::unitary};
}

}  // namespace qws
