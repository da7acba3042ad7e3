#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qws/defs.hpp"
#include "qws/format.hpp"
#include "qws/graph.hpp"
#include "qws/prune.hpp"
#include "qws/response.hpp"
#include "qws/sounding.hpp"

namespace qws {
namespace io {

using nlohmann::json;

inline cplx json_cplx(const json& j) {
  if (j.is_number()) return cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2) return cplx(j[0].get<double>(), j[1].get<double>());
  if (j.is_string()) return parse_cplx(j.get<std::string>());
  throw io_error("expected a complex value ([re,im], number, or \"a+bi\")");
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path);
  out << text;
}

// ---- graph JSON ------------------------------------------------------------

inline GraphSpec parse_graph(const json& j) {
  GraphSpec g;
  if (!j.contains("vertices") || !j.contains("edges"))
    throw io_error("graph file needs \"vertices\" and \"edges\"");
  for (const json& jv : j.at("vertices")) {
    CoinSpec coin;
    const json& jc = jv.at("coin");
    std::string kind = jc.at("kind").get<std::string>();
    if (kind == "grover") coin.kind = CoinSpec::Kind::grover;
    else if (kind == "reflect") coin.kind = CoinSpec::Kind::reflect;
    else if (kind == "custom") coin.kind = CoinSpec::Kind::custom;
    else throw io_error("unknown coin kind: " + kind);
    if (jc.contains("phase")) coin.phase = json_cplx(jc.at("phase"));
    if (coin.kind == CoinSpec::Kind::custom) {
      const json& jm = jc.at("matrix");
      int n = int(jm.size());
      coin.matrix = Matrix(n, n);
      for (int r = 0; r < n; ++r) {
        if (int(jm[r].size()) != n) throw io_error("coin matrix is not square");
        for (int c = 0; c < n; ++c) coin.matrix(r, c) = json_cplx(jm[r][c]);
      }
    }
    g.vertices.emplace_back(jv.at("id").get<std::string>(), std::move(coin));
  }
  for (const json& je : j.at("edges")) {
    if (je.size() != 2) throw io_error("edge must name two vertices");
    g.edges.emplace_back(je[0].get<std::string>(), je[1].get<std::string>());
  }
  if (j.contains("ports")) {
    for (const json& jp : j.at("ports")) {
      Port p;
      p.name = jp.at("name").get<std::string>();
      p.in_state = {jp.at("in")[0].get<std::string>(), jp.at("in")[1].get<std::string>()};
      p.out_state = {jp.at("out")[0].get<std::string>(), jp.at("out")[1].get<std::string>()};
      g.ports.push_back(std::move(p));
    }
  }
  validate_spec(g);
  return g;
}

inline GraphSpec read_graph(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw io_error(std::string("bad JSON in ") + path + ": " + e.what());
  }
  return parse_graph(j);
}

inline PrunedGraph read_pruned_graph(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw io_error(std::string("bad JSON in ") + path + ": " + e.what());
  }
  PrunedGraph pg;
  pg.spec = parse_graph(j);
  if (j.contains("frequency_vertices")) {
    for (const json& jf : j.at("frequency_vertices")) {
      FrequencyVertex fv;
      fv.id = jf.at("id").get<std::string>();
      for (const json& c : jf.at("numerator")) fv.num.coeffs.push_back(json_cplx(c));
      for (const json& c : jf.at("denominator")) fv.den.coeffs.push_back(json_cplx(c));
      fv.delay = jf.at("delay").get<int>();
      if (!pg.spec.has_vertex(fv.id))
        throw io_error("frequency vertex names an unknown vertex: " + fv.id);
      pg.fvs.push_back(std::move(fv));
    }
  }
  return pg;
}

// Emitted by hand so the byte layout is stable across platforms.
namespace detail {

inline std::string coin_json(const CoinSpec& c) {
  std::string s = "{\"kind\":\"";
  switch (c.kind) {
    case CoinSpec::Kind::grover: s += "grover"; break;
    case CoinSpec::Kind::reflect: s += "reflect"; break;
    case CoinSpec::Kind::custom: s += "custom"; break;
  }
  s += "\"";
  if (c.kind == CoinSpec::Kind::reflect) s += ",\"phase\":" + fmt_cplx(c.phase);
  if (c.kind == CoinSpec::Kind::custom) {
    s += ",\"matrix\":[";
    for (int r = 0; r < c.matrix.rows(); ++r) {
      if (r) s += ",";
      s += "[";
      for (int q = 0; q < c.matrix.cols(); ++q) {
        if (q) s += ",";
        s += fmt_cplx(c.matrix(r, q));
      }
      s += "]";
    }
    s += "]";
  }
  return s + "}";
}

inline std::string quoted(const std::string& s) { return "\"" + s + "\""; }

inline std::string graph_body(const GraphSpec& g) {
  std::string s = "  \"vertices\": [\n";
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    s += "    {\"id\":" + quoted(g.vertices[i].first) +
         ",\"coin\":" + coin_json(g.vertices[i].second) + "}";
    s += (i + 1 < g.vertices.size()) ? ",\n" : "\n";
  }
  s += "  ],\n  \"edges\": [\n";
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    s += "    [" + quoted(g.edges[i].first) + "," + quoted(g.edges[i].second) + "]";
    s += (i + 1 < g.edges.size()) ? ",\n" : "\n";
  }
  s += "  ],\n  \"ports\": [\n";
  for (std::size_t i = 0; i < g.ports.size(); ++i) {
    const Port& p = g.ports[i];
    s += "    {\"name\":" + quoted(p.name) + ",\"in\":[" + quoted(p.in_state.tail) + "," +
         quoted(p.in_state.head) + "],\"out\":[" + quoted(p.out_state.tail) + "," +
         quoted(p.out_state.head) + "]}";
    s += (i + 1 < g.ports.size()) ? ",\n" : "\n";
  }
  s += "  ]";
  return s;
}

inline std::string poly_json(const ComplexPoly& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
    if (i) s += ",";
    s += fmt_cplx(p.coeffs[i]);
  }
  return s + "]";
}

}  // namespace detail

inline std::string graph_to_json(const GraphSpec& g) {
  return "{\n" + detail::graph_body(g) + "\n}\n";
}

inline std::string pruned_graph_to_json(const PrunedGraph& pg) {
  std::string s = "{\n" + detail::graph_body(pg.spec) + ",\n  \"frequency_vertices\": [\n";
  for (std::size_t i = 0; i < pg.fvs.size(); ++i) {
    const FrequencyVertex& fv = pg.fvs[i];
    s += "    {\"id\":" + detail::quoted(fv.id) + ",\"numerator\":" + detail::poly_json(fv.num) +
         ",\"denominator\":" + detail::poly_json(fv.den) +
         ",\"delay\":" + std::to_string(fv.delay) + "}";
    s += (i + 1 < pg.fvs.size()) ? ",\n" : "\n";
  }
  s += "  ]\n}\n";
  return s;
}

// ---- signals (CSV: n,re,im) ------------------------------------------------

inline std::string signal_to_csv(const Signal& sig) {
  std::string s = "n,re,im\n";
  for (std::size_t n = 0; n < sig.samples.size(); ++n)
    s += std::to_string(n) + "," + fmt_double(sig.samples[n].real()) + "," +
         fmt_double(sig.samples[n].imag()) + "\n";
  return s;
}

inline Signal read_signal_csv(const std::string& path) {
  std::istringstream in(read_text(path));
  Signal sig;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "n,re,im") continue;
    std::istringstream row(line);
    std::string n, re, im;
    if (!std::getline(row, n, ',') || !std::getline(row, re, ',') || !std::getline(row, im))
      throw io_error("bad signal row: " + line);
    try {
      std::size_t idx = std::stoul(n);
      if (idx != sig.samples.size()) throw io_error("signal rows must be consecutive from 0");
      sig.samples.emplace_back(std::stod(re), std::stod(im));
    } catch (const std::invalid_argument&) {
      throw io_error("bad signal row: " + line);
    }
  }
  return sig;
}

// ---- impulse responses -----------------------------------------------------

inline std::string impulse_to_json(const ImpulseResponse& h) {
  std::string s = "{\n  \"s\": " + std::to_string(h.s) + ",\n";
  s += "  \"omega0\": " + fmt_cplx(h.omega0) + ",\n  \"modes\": [\n";
  for (std::size_t j = 0; j < h.modes.size(); ++j) {
    s += "    {\"omega\":" + fmt_cplx(h.modes[j].first) +
         ",\"eta\":" + fmt_cplx(h.modes[j].second) + "}";
    s += (j + 1 < h.modes.size()) ? ",\n" : "\n";
  }
  s += "  ],\n  \"sequence\": [";
  for (std::size_t n = 0; n < h.sequence.size(); ++n) {
    if (n) s += ",";
    s += fmt_cplx(h.sequence[n]);
  }
  s += "]\n}\n";
  return s;
}

// ---- phase sweeps (CSV: theta,re,im,phase_unwrapped) -----------------------

inline std::string sweep_to_csv(const PhaseSweep& sw) {
  std::string s = "theta,re,im,phase_unwrapped\n";
  for (std::size_t m = 0; m < sw.thetas.size(); ++m)
    s += fmt_double(sw.thetas[m]) + "," + fmt_double(sw.values[m].real()) + "," +
         fmt_double(sw.values[m].imag()) + "," + fmt_double(sw.unwrapped_phase[m]) + "\n";
  return s;
}

}  // namespace io
}  // namespace qws
