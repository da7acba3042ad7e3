#pragma once

#include <cmath>
#include <string>

#include "qws/defs.hpp"
#include "qws/graph.hpp"

namespace qws {
namespace builders {

/// Loop resonator: port vertex 0, a reflecting arm A, and a hub B that
/// carries a self-loop. One port on the {0,B} edge.
inline GraphSpec bolo() {
  GraphSpec g;
  g.vertices.emplace_back("0", CoinSpec{CoinSpec::Kind::reflect, 1.0, {}});
  g.vertices.emplace_back("A", CoinSpec{CoinSpec::Kind::reflect, -1.0, {}});
  g.vertices.emplace_back("B", CoinSpec{CoinSpec::Kind::grover, 1.0, {}});
  g.edges = {{"0", "B"}, {"A", "B"}, {"B", "B"}};
  g.ports.push_back(Port{"main", {"0", "B"}, {"B", "0"}});
  return g;
}

/// Collapsed star with N arms, M of them phase-flipping. The symmetric
/// subspace reduces to six states: hub c with an effective 3x3 coin over
/// directions {0, a, b}, a reflecting -1 (the M flipped arms), b reflecting
/// +1 (the remaining N-M arms).
inline GraphSpec star(int N, int M) {
  if (N < 1 || M < 0 || M > N) throw validation_error("star: need 0 <= M <= N, N >= 1");
  double n1 = N + 1;
  double sM = std::sqrt(double(M)), sR = std::sqrt(double(N - M));
  Matrix C(3, 3);  // direction order 0 < a < b
  C << -1.0 + 2.0 / n1, 2.0 * sM / n1, 2.0 * sR / n1,
       2.0 * sM / n1, -1.0 + 2.0 * M / n1, 2.0 * sM * sR / n1,
       2.0 * sR / n1, 2.0 * sM * sR / n1, -1.0 + 2.0 * (N - M) / n1;
  GraphSpec g;
  g.vertices.emplace_back("0", CoinSpec{CoinSpec::Kind::reflect, 1.0, {}});
  g.vertices.emplace_back("a", CoinSpec{CoinSpec::Kind::reflect, -1.0, {}});
  g.vertices.emplace_back("b", CoinSpec{CoinSpec::Kind::reflect, 1.0, {}});
  g.vertices.emplace_back("c", CoinSpec{CoinSpec::Kind::custom, 1.0, C});
  g.edges = {{"0", "c"}, {"a", "c"}, {"b", "c"}};
  g.ports.push_back(Port{"main", {"0", "c"}, {"c", "0"}});
  return g;
}

/// Collapsed complete graph on N marked-free vertices probed at one vertex:
/// the symmetric subspace reduces to five states over {0, A0, P} with a
/// self-loop at P standing in for the internal clique edges.
inline GraphSpec complete(int N) {
  if (N < 2) throw validation_error("complete: need N >= 2");
  double n1 = N + 1;
  Matrix CA(2, 2);  // directions at A0: {0, P}
  CA << -1.0 + 2.0 / n1, 2.0 * std::sqrt(double(N)) / n1,
        2.0 * std::sqrt(double(N)) / n1, 1.0 - 2.0 / n1;
  Matrix CP(2, 2);  // directions at P: {A0, P}
  CP << -1.0 + 2.0 / N, 2.0 * std::sqrt(double(N - 1)) / N,
        2.0 * std::sqrt(double(N - 1)) / N, 1.0 - 2.0 / N;
  GraphSpec g;
  g.vertices.emplace_back("0", CoinSpec{CoinSpec::Kind::reflect, 1.0, {}});
  g.vertices.emplace_back("A0", CoinSpec{CoinSpec::Kind::custom, 1.0, CA});
  g.vertices.emplace_back("P", CoinSpec{CoinSpec::Kind::custom, 1.0, CP});
  g.edges = {{"0", "A0"}, {"A0", "P"}, {"P", "P"}};
  g.ports.push_back(Port{"main", {"0", "A0"}, {"A0", "0"}});
  return g;
}

/// Two-port valve: a hub B joining both ports with an arm A whose
/// reflection phase c gates transmission.
inline GraphSpec valve(cplx c = 1.0) {
  GraphSpec g;
  g.vertices.emplace_back("0", CoinSpec{CoinSpec::Kind::reflect, 1.0, {}});
  g.vertices.emplace_back("1", CoinSpec{CoinSpec::Kind::reflect, 1.0, {}});
  g.vertices.emplace_back("A", CoinSpec{CoinSpec::Kind::reflect, c, {}});
  g.vertices.emplace_back("B", CoinSpec{CoinSpec::Kind::grover, 1.0, {}});
  g.edges = {{"0", "B"}, {"1", "B"}, {"A", "B"}};
  g.ports.push_back(Port{"left", {"0", "B"}, {"B", "0"}});
  g.ports.push_back(Port{"right", {"1", "B"}, {"B", "1"}});
  return g;
}

/// Four-port junction: a 4-cycle of hubs, one port hanging off each hub.
inline GraphSpec square() {
  GraphSpec g;
  for (int i = 0; i < 4; ++i)
    g.vertices.emplace_back("p" + std::to_string(i), CoinSpec{CoinSpec::Kind::reflect, 1.0, {}});
  for (int i = 0; i < 4; ++i)
    g.vertices.emplace_back("v" + std::to_string(i), CoinSpec{CoinSpec::Kind::grover, 1.0, {}});
  for (int i = 0; i < 4; ++i) {
    g.edges.emplace_back("p" + std::to_string(i), "v" + std::to_string(i));
    g.edges.emplace_back("v" + std::to_string(i), "v" + std::to_string((i + 1) % 4));
  }
  for (int i = 0; i < 4; ++i) {
    std::string p = "p" + std::to_string(i), v = "v" + std::to_string(i);
    g.ports.push_back(Port{"q" + std::to_string(i + 1), {p, v}, {v, p}});
  }
  return g;
}

/// Binary tree used for pruning demos: 0 - A - {B, C}, C - {D, E}; leaf E
/// flips the phase, leaves B and D do not.
inline GraphSpec tree() {
  GraphSpec g;
  g.vertices.emplace_back("0", CoinSpec{CoinSpec::Kind::reflect, 1.0, {}});
  g.vertices.emplace_back("A", CoinSpec{CoinSpec::Kind::grover, 1.0, {}});
  g.vertices.emplace_back("B", CoinSpec{CoinSpec::Kind::reflect, 1.0, {}});
  g.vertices.emplace_back("C", CoinSpec{CoinSpec::Kind::grover, 1.0, {}});
  g.vertices.emplace_back("D", CoinSpec{CoinSpec::Kind::reflect, 1.0, {}});
  g.vertices.emplace_back("E", CoinSpec{CoinSpec::Kind::reflect, -1.0, {}});
  g.edges = {{"0", "A"}, {"A", "B"}, {"A", "C"}, {"C", "D"}, {"C", "E"}};
  g.ports.push_back(Port{"main", {"0", "A"}, {"A", "0"}});
  return g;
}

/// Smallest scatterer: a single reflecting vertex behind the port edge.
/// S(z) = phase / z^2, i.e. a constant reflection after the round trip.
inline GraphSpec reflector(cplx phase = 1.0) {
  GraphSpec g;
  g.vertices.emplace_back("0", CoinSpec{CoinSpec::Kind::reflect, 1.0, {}});
  g.vertices.emplace_back("R", CoinSpec{CoinSpec::Kind::reflect, phase, {}});
  g.edges = {{"0", "R"}};
  g.ports.push_back(Port{"main", {"0", "R"}, {"R", "0"}});
  return g;
}

}  // namespace builders
}  // namespace qws
