#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qws/qws.hpp"

namespace {

using namespace qws;

struct Options {
  std::string graph_path;
  std::string port;
  std::vector<std::string> pair;
  std::optional<std::string> eval_at;
  bool all_pairs = false;
  std::string method = "auto";  // auto | closed | dft
  int grid = 4096;
  int n = 64;
  int steps = 0;
  int runway = 0;
  int delay = 0;
  double tolerance = 1e-8;
  double threshold = 0;
  std::string input_path;
  std::string pruned_path;
  std::vector<std::vector<std::string>> cuts;
  std::string out_path;
  std::string format = "json";
};

void emit(const Options& opt, const std::string& text) {
  if (opt.out_path.empty()) std::cout << text;
  else io::write_text(opt.out_path, text);
}

std::pair<std::string, std::string> resolve_ports(const GraphSpec& g, const Options& opt) {
  if (!opt.pair.empty()) return {opt.pair[0], opt.pair[1]};
  std::string p = opt.port;
  if (p.empty()) {
    if (g.ports.empty()) throw validation_error("graph declares no ports");
    p = g.ports[0].name;
  }
  return {p, p};
}

std::string poly_json(const ComplexPoly& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
    if (i) s += ",";
    s += fmt_cplx(p.coeffs[i]);
  }
  return s + "]";
}

int cmd_validate(const Options& opt) {
  GraphSpec g = io::read_graph(opt.graph_path);
  EdgeBasis basis = build_edge_basis(g);
  TimeStepOperator op = assemble_U0(g, basis);
  IsometryReport rep = validate_partial_isometry(op);
  std::string s = "{\n  \"states\": " + std::to_string(op.dim()) +
                  ",\n  \"ports\": " + std::to_string(op.num_ports()) +
                  ",\n  \"isometry_deviation\": " + fmt_double(rep.max_deviation) +
                  ",\n  \"valid\": " + (rep.pass ? "true" : "false") + "\n}\n";
  emit(opt, s);
  if (!rep.pass) throw numerical_error("partial isometry check failed");
  return 0;
}

int cmd_scatter(const Options& opt) {
  GraphSpec g = io::read_graph(opt.graph_path);
  TimeStepOperator op = assemble_U0(g, build_edge_basis(g));

  if (opt.eval_at) {
    cplx z = parse_cplx(*opt.eval_at);
    if (opt.all_pairs) {
      Matrix S = resolvent_scatter(op, z);
      std::string s;
      if (opt.format == "csv") {
        s = "out,in,re,im\n";
        for (int k = 0; k < S.rows(); ++k)
          for (int j = 0; j < S.cols(); ++j)
            s += op.port_names[k] + "," + op.port_names[j] + "," + fmt_double(S(k, j).real()) +
                 "," + fmt_double(S(k, j).imag()) + "\n";
      } else {
        s = "{\n  \"ports\": [";
        for (std::size_t i = 0; i < op.port_names.size(); ++i)
          s += (i ? "," : "") + ("\"" + op.port_names[i] + "\"");
        s += "],\n  \"matrix\": [\n";
        for (int k = 0; k < S.rows(); ++k) {
          s += "    [";
          for (int j = 0; j < S.cols(); ++j) s += (j ? "," : "") + fmt_cplx(S(k, j));
          s += (k + 1 < S.rows()) ? "],\n" : "]\n";
        }
        s += "  ]\n}\n";
      }
      emit(opt, s);
      return 0;
    }
    auto [in_p, out_p] = resolve_ports(g, opt);
    CharDecomposition dec = char_decompose(op, in_p, out_p);
    ScatterFunction S{dec, opt.delay};
    cplx v = S.eval(z);
    emit(opt, "{\"z\":" + fmt_cplx(z) + ",\"S\":" + fmt_cplx(v) + "}\n");
    return 0;
  }

  auto [in_p, out_p] = resolve_ports(g, opt);
  CharDecomposition dec = char_decompose(op, in_p, out_p);
  ScatterFunction S{dec, opt.delay};
  if (opt.format == "csv") {
    PhaseSweep sw = phase_sweep(S, opt.grid);
    emit(opt, io::sweep_to_csv(sw));
    return 0;
  }
  std::string s = "{\n";
  s += "  \"b\": " + poly_json(dec.b) + ",\n";
  s += "  \"f\": " + poly_json(dec.f_red) + ",\n";
  s += "  \"g\": " + poly_json(dec.g_red) + ",\n";
  s += "  \"s\": " + std::to_string(dec.s) + ",\n";
  s += "  \"g0\": " + fmt_cplx(dec.g0) + ",\n";
  s += "  \"etas\": [";
  for (std::size_t i = 0; i < dec.etas.roots.size(); ++i)
    s += (i ? "," : "") + fmt_cplx(dec.etas.roots[i]);
  s += "],\n  \"samples\": [";
  for (int m = 0; m < opt.grid; ++m) {
    cplx z = std::polar(1.0, 2.0 * std::numbers::pi * m / opt.grid);
    cplx v;
    try {
      v = S.eval(z);
    } catch (const numerical_error&) {
      v = S.eval(z * std::polar(1.0, 1e-9));
    }
    s += (m ? "," : "") + fmt_cplx(v);
  }
  s += "]\n}\n";
  emit(opt, s);
  return 0;
}

ImpulseResponse make_impulse(const GraphSpec& g, const TimeStepOperator& op, const Options& opt,
                             int horizon) {
  auto [in_p, out_p] = resolve_ports(g, opt);
  CharDecomposition dec = char_decompose(op, in_p, out_p);
  bool closed = (opt.method == "closed") ||
                (opt.method == "auto" && dec.single_runway() && in_p == out_p);
  if (closed) return impulse_closed_form(dec, horizon, opt.delay);
  int K = std::max(opt.grid, 4 * horizon);
  return impulse_dft({dec, opt.delay}, K, horizon);
}

int cmd_impulse(const Options& opt) {
  GraphSpec g = io::read_graph(opt.graph_path);
  TimeStepOperator op = assemble_U0(g, build_edge_basis(g));
  ImpulseResponse h = make_impulse(g, op, opt, opt.n);
  if (opt.format == "csv") {
    Signal sig{h.sequence, "impulse"};
    emit(opt, io::signal_to_csv(sig));
  } else {
    emit(opt, io::impulse_to_json(h));
  }
  return 0;
}

int cmd_respond(const Options& opt) {
  GraphSpec g = io::read_graph(opt.graph_path);
  TimeStepOperator op = assemble_U0(g, build_edge_basis(g));
  if (opt.input_path.empty()) throw validation_error("respond requires --input SIGNAL.csv");
  Signal x = io::read_signal_csv(opt.input_path);
  ImpulseResponse h = make_impulse(g, op, opt, int(x.samples.size()));
  Signal y = convolve(x, h);
  emit(opt, io::signal_to_csv(y));
  return 0;
}

int cmd_sound(const Options& opt) {
  GraphSpec g = io::read_graph(opt.graph_path);
  TimeStepOperator op = assemble_U0(g, build_edge_basis(g));
  auto [in_p, out_p] = resolve_ports(g, opt);
  CharDecomposition dec = char_decompose(op, in_p, out_p);
  ScatterFunction S{dec, opt.delay};
  PhaseSweep sw = phase_sweep_stable(S, opt.grid);
  std::vector<Resonance> res = find_resonances(sw, opt.threshold);

  std::string summary = "{\n  \"winding\": " + std::to_string(sw.winding) +
                        ",\n  \"dimension_lower_bound\": " +
                        std::to_string(dimension_lower_bound(sw)) + ",\n  \"resonances\": [\n";
  for (std::size_t i = 0; i < res.size(); ++i) {
    summary += "    {\"center\":" + fmt_double(res[i].center) +
               ",\"width\":" + fmt_double(res[i].width) +
               ",\"eta\":" + fmt_cplx(res[i].eta_estimate) + "}";
    summary += (i + 1 < res.size()) ? ",\n" : "\n";
  }
  summary += "  ]\n}\n";

  if (!opt.out_path.empty()) {
    io::write_text(opt.out_path, io::sweep_to_csv(sw));
    std::cout << summary;
  } else if (opt.format == "csv") {
    std::cout << io::sweep_to_csv(sw);
  } else {
    std::cout << summary;
  }
  return 0;
}

int cmd_prune(const Options& opt) {
  GraphSpec g = io::read_graph(opt.graph_path);
  if (opt.cuts.empty()) throw validation_error("prune requires at least one --cut KEEP PRUNE");
  std::vector<std::pair<std::string, std::string>> cuts;
  for (const auto& c : opt.cuts) cuts.emplace_back(c[0], c[1]);
  PrunedGraph pg = prune(g, cuts);
  emit(opt, io::pruned_graph_to_json(pg));
  return 0;
}

int cmd_verify(const Options& opt) {
  GraphSpec g = io::read_graph(opt.graph_path);
  if (opt.pruned_path.empty()) throw validation_error("verify requires --pruned FILE.json");
  PrunedGraph pg = io::read_pruned_graph(opt.pruned_path);
  int grid = std::min(opt.grid, 1024);
  PruneEquivalence rep = verify_prune_equivalence(g, pg, grid);
  emit(opt, "{\n  \"max_deviation\": " + fmt_double(rep.max_deviation) +
                ",\n  \"pass\": " + (rep.pass ? "true" : "false") + "\n}\n");
  return 0;
}

int cmd_simulate(const Options& opt) {
  GraphSpec g = io::read_graph(opt.graph_path);
  auto [in_p, out_p] = resolve_ports(g, opt);
  int steps = opt.steps > 0 ? opt.steps : opt.n;
  int runway = opt.runway > 0 ? opt.runway : steps + 2;
  std::optional<Signal> input;
  if (!opt.input_path.empty()) input = io::read_signal_csv(opt.input_path);
  OracleResult res = simulate_oracle(g, in_p, out_p, steps, runway,
                                     input ? &*input : nullptr);
  emit(opt, io::signal_to_csv(res.output));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("QGS_THREADS")) {
    int t = std::atoi(threads);
    if (t > 0) Eigen::setNbThreads(t);
  }

  CLI::App app{"Scattering analysis of discrete-time walks on graphs with attached runways"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* c, bool needs_graph = true) {
    if (needs_graph) c->add_option("graph", opt.graph_path, "graph JSON file")->required();
    c->add_option("--port", opt.port, "port name (single-runway view)");
    c->add_option("--pair", opt.pair, "input and output port names")->expected(2);
    c->add_option("--grid", opt.grid, "frequency grid size")->default_val(4096);
    c->add_option("--n", opt.n, "sample horizon")->default_val(64);
    c->add_option("--tol", opt.tolerance, "tolerance override")->default_val(1e-8);
    c->add_option("--delay", opt.delay, "delay exponent folded into S (R = z^delay S)");
    c->add_option("--out", opt.out_path, "output path (default stdout)");
    c->add_option("--format", opt.format, "json|csv")->default_val("json");
    return c;
  };

  auto* sc = add_common(app.add_subcommand("scatter", "characteristic decomposition and S(z)"));
  sc->add_option("--eval", opt.eval_at, "evaluate S at z (a+bi)");
  sc->add_flag("--all-pairs", opt.all_pairs, "full port-to-port matrix (with --eval)");

  auto* im = add_common(app.add_subcommand("impulse", "impulse response"));
  im->add_option("--method", opt.method, "auto|closed|dft")->default_val("auto");

  auto* re = add_common(app.add_subcommand("respond", "convolve an input signal"));
  re->add_option("--input", opt.input_path, "input signal CSV")->required();

  auto* so = add_common(app.add_subcommand("sound", "phase sweep, winding, resonances"));
  so->add_option("--threshold", opt.threshold, "resonance slope threshold (0 = auto)");

  auto* pr = add_common(app.add_subcommand("prune", "replace subgraphs by frequency vertices"));
  pr->add_option("--cut", opt.cuts, "KEEP PRUNE vertex pair (repeatable)")
      ->expected(2)
      ->take_all();

  auto* ve = add_common(app.add_subcommand("verify", "compare full and pruned scattering"));
  ve->add_option("--pruned", opt.pruned_path, "pruned graph JSON")->required();

  auto* si = add_common(app.add_subcommand("simulate", "brute-force runway walk"));
  si->add_option("--steps", opt.steps, "number of steps");
  si->add_option("--runway", opt.runway, "runway truncation length");
  si->add_option("--input", opt.input_path, "input signal CSV (default: delta)");

  add_common(app.add_subcommand("validate", "parse and check a graph file"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "scatter") return cmd_scatter(opt);
    if (cmd == "impulse") return cmd_impulse(opt);
    if (cmd == "respond") return cmd_respond(opt);
    if (cmd == "sound") return cmd_sound(opt);
    if (cmd == "prune") return cmd_prune(opt);
    if (cmd == "verify") return cmd_verify(opt);
    if (cmd == "simulate") return cmd_simulate(opt);
    if (cmd == "validate") return cmd_validate(opt);
    return 1;
  } catch (const qws::validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const qws::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const qws::io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
