#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "qws/builders.hpp"
#include "qws/scatter.hpp"

using namespace qws;

namespace {

TimeStepOperator make_op(const GraphSpec& g) { return assemble_U0(g, build_edge_basis(g)); }

cplx ratio(const ComplexPoly& num, const ComplexPoly& den, cplx z) {
  return num.eval(z) / den.eval(z);
}

}  // namespace

TEST_CASE("loop resonator: characteristic split") {
  CharDecomposition dec = char_decompose(make_op(builders::bolo()));
  // b = 1 + z
  REQUIRE(dec.b.degree() == 1);
  CHECK(std::abs(dec.b[0] - 1.0) < 1e-10);
  // f = z^2/3 - 2z^3/3 + z^4 (monic), g = 1 - 2z/3 + z^2/3
  std::vector<cplx> f_expect{0, 0, 1.0 / 3, -2.0 / 3, 1};
  std::vector<cplx> g_expect{1, -2.0 / 3, 1.0 / 3};
  REQUIRE(dec.f_red.degree() == 4);
  REQUIRE(dec.g_red.degree() == 2);
  for (int k = 0; k <= 4; ++k) CHECK(std::abs(dec.f_red[k] - f_expect[k]) < 1e-10);
  for (int k = 0; k <= 2; ++k) CHECK(std::abs(dec.g_red[k] - g_expect[k]) < 1e-10);
  CHECK(dec.s == 2);
  CHECK(dec.d == 4);
  CHECK(std::abs(dec.g0 - 1.0) < 1e-10);
  CHECK(dec.recompose_error < 1e-10);
  // internal eigenvalues (1 +- i sqrt 2)/3
  REQUIRE(dec.etas.roots.size() == 2);
  double rt2 = std::sqrt(2.0);
  for (cplx eta : dec.etas.roots) {
    CHECK(std::abs(eta.real() - 1.0 / 3) < 1e-10);
    CHECK(std::abs(std::abs(eta.imag()) - rt2 / 3) < 1e-10);
  }
}

TEST_CASE("loop resonator: S(i) = i and the closed-form reflection") {
  CharDecomposition dec = char_decompose(make_op(builders::bolo()));
  ScatterFunction S{dec, 0};
  CHECK(std::abs(S.eval(cplx(0, 1)) - cplx(0, 1)) < 1e-10);
  // z^2 S(z) = -(z^2 - 2z + 3)/(3z^2 - 2z + 1)
  ComplexPoly num{{3, -2, 1}}, den{{1, -2, 3}};
  for (int m = 0; m < 20; ++m) {
    cplx z = std::polar(1.0, 2.0 * std::numbers::pi * (m + 0.41) / 20);
    CHECK(std::abs(z * z * S.eval(z) + ratio(num, den, z)) < 1e-10);
  }
}

TEST_CASE("resolvent route and polynomial route agree pointwise") {
  for (const GraphSpec& g : {builders::bolo(), builders::tree(), builders::star(3, 1)}) {
    TimeStepOperator op = make_op(g);
    CharDecomposition dec = char_decompose(op);
    ScatterFunction S{dec, 0};
    for (int m = 0; m < 7; ++m) {
      cplx z = std::polar(1.0 + 0.05 * m, 0.7 * m + 0.3);
      CHECK(std::abs(resolvent_scatter(op, z)(0, 0) - S.eval(z)) < 1e-9);
    }
  }
}

TEST_CASE("single-runway scattering is unimodular on the circle") {
  for (const GraphSpec& g : {builders::bolo(), builders::star(3, 1), builders::complete(10)}) {
    ScatterFunction S{char_decompose(make_op(g)), 0};
    for (int m = 0; m < 200; ++m) {
      cplx z = std::polar(1.0, 2.0 * std::numbers::pi * (m + 0.13) / 200);
      CHECK(std::abs(std::abs(S.eval(z)) - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("reciprocal pairing of f and g coefficients") {
  for (const GraphSpec& g : {builders::bolo(), builders::star(3, 1), builders::tree()}) {
    ReciprocalReport rep = check_reciprocal(char_decompose(make_op(g)));
    CHECK(rep.pass);
    CHECK(rep.max_deviation < 1e-8);
  }
}

TEST_CASE("collapsed star: closed-form f and g") {
  for (auto [N, M] : std::vector<std::pair<int, int>>{{3, 1}, {100, 40}}) {
    CharDecomposition dec = char_decompose(make_op(builders::star(N, M)));
    double a = (4.0 * M - 2.0 * N) / (N + 1.0), b = (N - 1.0) / (N + 1.0);
    // f = z^2 (z^4 + a z^2 + b), g = b z^4 + a z^2 + 1
    std::vector<cplx> f_expect{0, 0, b, 0, a, 0, 1};
    std::vector<cplx> g_expect{1, 0, a, 0, b};
    REQUIRE(dec.f_red.degree() == 6);
    REQUIRE(dec.g_red.degree() == 4);
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(dec.f_red[k] - f_expect[k]) < 1e-9);
    for (int k = 0; k <= 4; ++k) CHECK(std::abs(dec.g_red[k] - g_expect[k]) < 1e-9);
  }
}

TEST_CASE("valve: gate reflection and transmission") {
  for (cplx c : {cplx(1.0), std::polar(1.0, std::numbers::pi / 3)}) {
    TimeStepOperator op = make_op(builders::valve(c));
    for (int m = 0; m < 10; ++m) {
      cplx z = std::polar(1.0, 2.0 * std::numbers::pi * (m + 0.29) / 10);
      Matrix S = resolvent_scatter(op, z);
      cplx r = z * z * S(0, 0), t = z * z * S(1, 0);
      CHECK(std::abs(r - (-z * z + c) / (3.0 * z * z + c)) < 1e-10);
      CHECK(std::abs(t - 2.0 * (z * z + c) / (3.0 * z * z + c)) < 1e-10);
      CHECK(std::abs(S(0, 1) - S(1, 0)) < 1e-12);  // symmetric junction
    }
    // transparency and full reflection at the special quadrature points
    cplx sq = std::sqrt(c);
    for (cplx z : {sq, -sq}) {
      Matrix S = resolvent_scatter(op, z);
      CHECK(std::abs(z * z * S(0, 0)) < 1e-10);
      CHECK(std::abs(z * z * S(1, 0) - 1.0) < 1e-10);
    }
    for (cplx z : {cplx(0, 1) * sq, -cplx(0, 1) * sq}) {
      Matrix S = resolvent_scatter(op, z);
      CHECK(std::abs(z * z * S(0, 0) + 1.0) < 1e-10);
      CHECK(std::abs(z * z * S(1, 0)) < 1e-10);
    }
  }
}

TEST_CASE("four-port junction: closed forms, zeros, and row norms") {
  TimeStepOperator op = make_op(builders::square());
  auto back = [](cplx z) {
    return -(9.0 * pow(z, 4) + 10.0 * z * z - 3.0) /
           (z * z * (27.0 * pow(z, 4) + 6.0 * z * z - 1.0));
  };
  auto adj = [](cplx z) { return 4.0 / (z * (9.0 * z * z - 1.0)); };
  auto opp = [](cplx z) { return 16.0 / (27.0 * pow(z, 4) + 6.0 * z * z - 1.0); };
  for (int m = 0; m < 10; ++m) {
    cplx z = std::polar(1.0, 2.0 * std::numbers::pi * (m + 0.17) / 10);
    Matrix S = resolvent_scatter(op, z);
    double rownorm = 0;
    for (int k = 0; k < 4; ++k) {
      for (int j = 0; j < 4; ++j) {
        int hop = std::min((k - j + 4) % 4, (j - k + 4) % 4);
        cplx expect = hop == 0 ? back(z) : (hop == 1 ? adj(z) : opp(z));
        CHECK(std::abs(S(k, j) - expect) < 1e-9);
      }
      rownorm = S.row(0).squaredNorm();
      CHECK(std::abs(rownorm - 1.0) < 1e-8);
    }
  }
  // zeros of the back-scattering numerator g_11
  CharDecomposition dec = char_decompose(op, 0, 0);
  double inner = std::sqrt(2.0 * std::sqrt(13.0) - 5.0) / 3.0;
  double outer = std::sqrt(2.0 * std::sqrt(13.0) + 5.0) / 3.0;
  RootSet zeros = poly_roots(dec.g_red);
  for (cplx want : {cplx(inner, 0), cplx(-inner, 0), cplx(0, outer), cplx(0, -outer)}) {
    double best = 1e9;
    for (cplx got : zeros.roots) best = std::min(best, std::abs(got - want));
    CHECK(best < 1e-8);
  }
}

TEST_CASE("winding of the coupling alpha equals the reduced degree") {
  for (const GraphSpec& g : {builders::bolo(), builders::star(3, 1), builders::reflector()}) {
    CharDecomposition dec = char_decompose(make_op(g));
    CHECK(std::abs(alpha_winding(dec, 2048) - dec.d) < 0.01 * std::max(1, dec.d));
  }
}

TEST_CASE("eigenvalue leak matches the out-port weight") {
  for (const GraphSpec& g : {builders::bolo(), builders::star(3, 1), builders::complete(10),
                             builders::valve(), builders::square(), builders::tree()}) {
    LeakReport rep = leak_relation(make_op(g));
    CHECK(rep.checked > 0);
    CHECK(rep.max_deviation < 1e-8);
  }
}

TEST_CASE("spectral flow: adaptive tracking stays unambiguous") {
  TimeStepOperator op = make_op(builders::reflector());
  SpectralFlow flow = spectral_flow(op, 0, 0, 0);  // floor kicks in: 8*dim steps
  CHECK_FALSE(flow.ambiguous);
  CHECK(flow.min_gap > 1e-3);
  int n = int(flow.permutation.size());
  std::vector<bool> hit(n, false);
  for (int i = 0; i < n; ++i) {
    REQUIRE(flow.permutation[i] >= 0);
    hit[flow.permutation[i]] = true;
  }
  for (int i = 0; i < n; ++i) CHECK(hit[i]);  // a genuine permutation
}

TEST_CASE("pole guard rejects evaluation on top of an internal eigenvalue") {
  CharDecomposition dec = char_decompose(make_op(builders::bolo()));
  ScatterFunction S{dec, 0};
  CHECK_THROWS_AS(S.eval(dec.etas.roots[0]), numerical_error);
  CHECK_THROWS_AS(S.eval(cplx(0, 0)), numerical_error);
}
