#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "qws/builders.hpp"
#include "qws/response.hpp"

using namespace qws;

namespace {

TimeStepOperator make_op(const GraphSpec& g) { return assemble_U0(g, build_edge_basis(g)); }

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b, int upto) {
  double d = 0;
  for (int n = 0; n <= upto; ++n) d = std::max(d, std::abs(a[n] - b[n]));
  return d;
}

}  // namespace

TEST_CASE("loop resonator: residue amplitudes and sequence") {
  CharDecomposition dec = char_decompose(make_op(builders::bolo()));
  ImpulseResponse h = impulse_closed_form(dec, 20);
  CHECK(h.closed_form);
  CHECK(h.s == 2);
  CHECK(std::abs(h.omega0 + 3.0) < 1e-9);
  REQUIRE(h.modes.size() == 2);
  double rt2 = std::sqrt(2.0);
  for (const auto& [w, eta] : h.modes) {
    // omega = -+ 3 sqrt(2) i paired with eta = (1 +- i sqrt 2)/3
    cplx expect = cplx(0, -3.0 * rt2) * (eta.imag() > 0 ? 1.0 : -1.0);
    CHECK(std::abs(w - expect) < 1e-9);
  }
  std::vector<double> table{-1.0 / 3, 4.0 / 9, -16.0 / 27, -44.0 / 81};
  CHECK(std::abs(h.sequence[0]) < 1e-12);
  CHECK(std::abs(h.sequence[1]) < 1e-12);
  for (int n = 0; n < 4; ++n) CHECK(std::abs(h.sequence[n + 2] - table[n]) < 1e-10);
}

TEST_CASE("three routes to the impulse response agree") {
  for (const GraphSpec& g : {builders::bolo(), builders::star(3, 1), builders::tree(),
                             builders::complete(10), builders::reflector()}) {
    TimeStepOperator op = make_op(g);
    CharDecomposition dec = char_decompose(op);
    ImpulseResponse closed = impulse_closed_form(dec, 20);
    double eta_max = 0;
    for (cplx eta : dec.etas.roots) eta_max = std::max(eta_max, std::abs(eta));
    int K = 512;
    while (std::pow(eta_max, K) > 1e-10 && K < (1 << 14)) K *= 2;
    ImpulseResponse dft = impulse_dft({dec, 0}, K, 20);
    OracleResult oracle = simulate_oracle(g, g.ports[0].name, g.ports[0].name, 21, 32);
    CHECK(max_diff(closed.sequence, dft.sequence, 20) < 1e-8);
    for (int n = 0; n <= 20; ++n)
      CHECK(std::abs(closed.sequence[n] - oracle.output.samples[n]) < 1e-8);
  }
}

TEST_CASE("constant reflector: single spike") {
  cplx r(0.6, 0.8);
  CharDecomposition dec = char_decompose(make_op(builders::reflector(r)));
  ImpulseResponse h = impulse_closed_form(dec, 8, /*delay=*/2);  // fold out the round trip
  CHECK(h.s == 0);
  CHECK(std::abs(h.sequence[0] - r) < 1e-12);
  for (int n = 1; n <= 8; ++n) CHECK(std::abs(h.sequence[n]) < 1e-12);
  ImpulseResponse hd = impulse_dft({dec, 2}, 64, 8);
  CHECK(std::abs(hd.sequence[0] - r) < 1e-12);
  for (int n = 1; n <= 8; ++n) CHECK(std::abs(hd.sequence[n]) < 1e-12);
}

TEST_CASE("multi-runway pair: dft route against the oracle") {
  GraphSpec g = builders::square();
  TimeStepOperator op = make_op(g);
  CharDecomposition dec = char_decompose(op, op.port_index("q1"), op.port_index("q2"));
  ImpulseResponse h = impulse_dft({dec, 0}, 1024, 20);
  OracleResult oracle = simulate_oracle(g, "q1", "q2", 21, 32);
  for (int n = 0; n <= 20; ++n)
    CHECK(std::abs(h.sequence[n] - oracle.output.samples[n]) < 1e-8);
}

TEST_CASE("convolution basics") {
  CharDecomposition dec = char_decompose(make_op(builders::bolo()));
  ImpulseResponse h = impulse_closed_form(dec, 40);
  SUBCASE("delta recovers h") {
    Signal y = convolve(Signal::delta(30), h);
    for (int n = 0; n < 30; ++n) CHECK(std::abs(y.samples[n] - h.sequence[n]) < 1e-12);
  }
  SUBCASE("monochromatic drive converges to S(lambda)") {
    cplx lambda(0, 1);
    Signal x = Signal::monochromatic(lambda, 41);
    Signal y = convolve(x, h);
    cplx gain = y.samples[40] / x.samples[40];
    CHECK(std::abs(gain - cplx(0, 1)) < 1e-6);  // S(i) = i
  }
}

TEST_CASE("pulse through a constant reflector is a scaled pulse") {
  cplx r(0.6, -0.8);
  CharDecomposition dec = char_decompose(make_op(builders::reflector(r)));
  ImpulseResponse h = impulse_closed_form(dec, 16, /*delay=*/2);
  Signal x;
  x.samples.assign(12, cplx(1.0));
  Signal y = convolve(x, h);
  for (int n = 0; n < 12; ++n) CHECK(std::abs(y.samples[n] - r) < 1e-12);
}

TEST_CASE("oracle conserves norm") {
  for (const GraphSpec& g : {builders::bolo(), builders::valve(), builders::square()}) {
    OracleResult res = simulate_oracle(g, g.ports[0].name, g.ports[0].name, 100, 102);
    CHECK(res.max_norm_drift < 1e-12);
  }
}

TEST_CASE("oracle rejects a runway shorter than the horizon") {
  CHECK_THROWS_AS(simulate_oracle(builders::bolo(), "main", "main", 10, 11), validation_error);
}

TEST_CASE("valve becomes transparent under a resonant drive") {
  GraphSpec g = builders::valve(1.0);  // z^2 = c = 1 at lambda = 1
  Signal x = Signal::monochromatic(1.0, 80);
  OracleResult res = simulate_oracle(g, "left", "right", 80, 82, &x);
  CHECK(std::abs(std::abs(res.output.samples[79]) - 1.0) < 1e-3);
}

TEST_CASE("transfer sum reproduces S on the circle") {
  CharDecomposition dec = char_decompose(make_op(builders::bolo()));
  ImpulseResponse h = impulse_closed_form(dec, 60);
  ScatterFunction S{dec, 0};
  cplx z = std::polar(1.0, 0.9);
  cplx sum = 0;
  for (int n = 0; n <= 60; ++n) sum += h.sequence[n] * std::pow(z, -n);
  double eta_max = 0;
  for (cplx eta : dec.etas.roots) eta_max = std::max(eta_max, std::abs(eta));
  CHECK(std::abs(sum - S.eval(z)) < 100.0 * std::pow(eta_max, 60));
}
