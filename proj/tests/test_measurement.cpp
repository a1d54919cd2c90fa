#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <vector>

#include "phasecode/core.hpp"
#include "phasecode/ensemble.hpp"
#include "phasecode/measurement.hpp"

using namespace phasecode;

namespace {

DenseMatrix to_complex(const std::vector<std::vector<int>>& H) {
  DenseMatrix out;
  for (const auto& r : H) out.emplace_back(r.begin(), r.end());
  return out;
}

std::vector<Complex> dense(const SparseSignal& x) {
  std::vector<Complex> v(x.n());
  for (const auto& c : x.support()) v[c.index - 1] = c.value;
  return v;
}

}  // namespace

TEST_SUITE("measurement") {

TEST_CASE("modulation coefficient identities") {
  const auto p = ModulationParams::draw(1000, RngSeed{4});
  CHECK(p.L >= 1);
  CHECK(p.L <= 999);
  for (Index l = 1; l <= 1000; ++l) {
    const auto g = modulation_coeffs(p, l);
    CHECK(std::abs(g[0] + g[1] - g[2]) < 1e-14);
    CHECK(std::abs(g[0]) == doctest::Approx(1.0));
    CHECK(std::abs(g[1]) == doctest::Approx(1.0));
    CHECK(std::abs(g[3]) == doctest::Approx(1.0));
    CHECK(g[2].imag() == 0.0);
    CHECK(g[2].real() >= 0.0);
    CHECK(std::abs(g[0] * std::conj(g[1]) - std::polar(1.0, 2.0 * p.omega() * l)) < 1e-13);
    CHECK(p.phase(l) > 0.0);
    CHECK(p.phase(l) <= kPi / 2 + 1e-15);
  }
}

TEST_CASE("check phase is exact for huge n") {
  const ModulationParams p{10000000000ULL, 9999999997ULL, ModulationMode::Standard};
  // L l mod n = (-3)(l) mod n, so for l = 1 the phase is 2 pi (n - 3) / n.
  CHECK(p.check_phase(1) == doctest::Approx(2 * kPi * (1.0 - 3e-10)));
  const auto g = modulation_coeffs(p, 7);
  CHECK(std::abs(g[3] - std::polar(1.0, -2 * kPi * 21e-10)) < 1e-12);
}

TEST_CASE("L = 0 is never drawn") {
  for (std::uint64_t s = 0; s < 2000; ++s) CHECK(ModulationParams::draw(2, RngSeed{s}).L == 1);
}

TEST_CASE("periodic mode draws an even check shift for even n") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto p = ModulationParams::draw(360, RngSeed{seed}, ModulationMode::Periodic);
    CHECK(p.L % 2 == 0);
    // l and l + n/2: first three coefficients flip sign, the check one does not.
    const auto a = modulation_coeffs(p, 7), b = modulation_coeffs(p, 187);
    for (int k = 0; k < 3; ++k) CHECK(std::abs(a[k] + b[k]) < 1e-12);
    CHECK(std::abs(a[3] - b[3]) < 1e-12);
  }
  CHECK(ModulationParams::draw(2, RngSeed{1}, ModulationMode::Periodic).L == 1);
}

TEST_CASE("location candidates invert the phase") {
  const auto p = ModulationParams::draw(100000, RngSeed{1});
  std::vector<Index> out;
  for (Index l : {Index{1}, Index{2}, Index{777}, Index{50000}, Index{99999}, Index{100000}}) {
    p.location_candidates(std::cos(p.phase(l)), out);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == l);
  }
  const auto q = ModulationParams::draw(360, RngSeed{1}, ModulationMode::Periodic);
  for (Index l = 1; l <= 360; ++l) {
    q.location_candidates(std::abs(std::cos(q.phase(l))), out);
    CHECK(std::find(out.begin(), out.end(), l) != out.end());
    CHECK(out.size() <= 4);
  }
}

TEST_CASE("row tensor product on the worked example") {
  const DenseMatrix H{{0, 1, 0}, {1, 1, 0}, {0, 0, 1}};
  const DenseMatrix G{{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}};
  const auto A = row_tensor_product(G, H);
  const std::vector<std::vector<double>> expected{{0, 0.2, 0}, {0, 0.5, 0}, {0.1, 0.2, 0},
                                                  {0.4, 0.5, 0}, {0, 0, 0.3}, {0, 0, 0.6}};
  REQUIRE(A.size() == 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t k = 0; k < 3; ++k) CHECK(A[i][k] == Complex(expected[i][k], 0.0));

  const DenseMatrix ones{{1, 1, 1}};
  const DenseMatrix g2{{1, 2, 3}, {4, 5, 6}};
  CHECK(row_tensor_product(g2, ones) == g2);
  const DenseMatrix bad{{1, 2}};
  CHECK_THROWS_AS(row_tensor_product(G, bad), ParameterError);
}

TEST_CASE("three-row illustration: the ratio test locates column 1") {
  // x = [1, -2i, 0, 0, 0], w = pi/10, rows (1, e^{iwk}, cos wk) for k = 0..4.
  const double w = kPi / 10;
  DenseMatrix G(3, std::vector<Complex>(5));
  for (int k = 0; k < 5; ++k) {
    G[0][k] = 1.0;
    G[1][k] = std::polar(1.0, w * k);
    G[2][k] = std::cos(w * k);
  }
  const DenseMatrix H{{1, 0, 1, 0, 0}, {0, 1, 0, 1, 0}, {1, 1, 0, 0, 1}};
  const auto A = row_tensor_product(G, H);
  const std::vector<Complex> x{1.0, Complex(0, -2), 0.0, 0.0, 0.0};
  const auto y = abs_matvec(A, x);
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(1.0));
  CHECK(y[2] / y[0] == doctest::Approx(std::cos(0.0)));
  CHECK(y[5] / y[3] == doctest::Approx(std::cos(w)));
  // Cosine law for the mixed bin.
  const double cos_a = (y[6] * y[6] - y[0] * y[0] - y[3] * y[3]) / (2 * y[0] * y[3]);
  CHECK(cos_a == doctest::Approx(std::cos(std::arg(x[1] / x[0]))).epsilon(1e-12));
}

TEST_CASE("implicit encoder equals the dense product") {
  const Index n = 512;
  const auto e = CodeEnsemble::balls_and_bins(n, 20, 3, RngSeed{6});
  const auto x = generate_signal(n, 8, RngSeed{12});
  const auto p = ModulationParams::draw(n, RngSeed{13});
  const auto m = encode(x, e, p);
  const auto A = row_tensor_product(modulation_matrix(p), to_complex(dense_code_matrix(e)));
  const auto y = abs_matvec(A, dense(x));
  REQUIRE(y.size() == m.scalar_count());
  for (std::size_t i = 0; i < m.num_bins(); ++i)
    for (int k = 0; k < 4; ++k) CHECK(std::abs(m.bins[i][k] - y[4 * i + k]) <= 1e-12);

  const auto crt = CodeEnsemble::crt(std::vector<std::uint64_t>{5, 7, 8});
  const auto xc = generate_signal(crt.n(), 6, RngSeed{14});
  for (auto mode : {ModulationMode::Standard, ModulationMode::Periodic}) {
    const auto pc = ModulationParams::draw(crt.n(), RngSeed{15}, mode);
    const auto mc = encode(xc, crt, pc);
    const auto Ac = row_tensor_product(modulation_matrix(pc), to_complex(dense_code_matrix(crt)));
    const auto yc = abs_matvec(Ac, dense(xc));
    for (std::size_t i = 0; i < mc.num_bins(); ++i)
      for (int k = 0; k < 4; ++k) CHECK(std::abs(mc.bins[i][k] - yc[4 * i + k]) <= 1e-12);
  }
}

TEST_CASE("zero signal, lone balls, and measurement count") {
  const auto e = CodeEnsemble::balls_and_bins(10000, 300, 5, RngSeed{1});
  const auto p = ModulationParams::draw(10000, RngSeed{2});
  const auto z = encode(SparseSignal(10000, {}), e, p);
  CHECK(z.scalar_count() == 4 * 300);
  for (const auto& b : z.bins)
    for (double v : b) CHECK(v == 0.0);

  const Complex v(0.3, -1.2);
  const Index l = 4321;
  const auto m = encode(SparseSignal(10000, {{l, v}}), e, p);
  for (auto b : e.bins_of(l)) {
    const auto& y = m.bins[b - 1];
    CHECK(y[0] == doctest::Approx(std::abs(v)));
    CHECK(y[1] == doctest::Approx(std::abs(v)));
    CHECK(y[2] == doctest::Approx(2 * std::abs(v) * std::cos(p.phase(l))));
    CHECK(y[3] == doctest::Approx(std::abs(v)));
  }
}

TEST_CASE("measurements are blind to a global phase") {
  const auto e = CodeEnsemble::balls_and_bins(1u << 24, 400, 7, RngSeed{9});
  const auto x = generate_signal(1u << 24, 100, RngSeed{10});
  const auto p = ModulationParams::draw(1u << 24, RngSeed{11});
  const auto a = encode(x, e, p);
  const auto b = encode(x.rotated(2.1), e, p);
  for (std::size_t i = 0; i < a.num_bins(); ++i)
    for (int k = 0; k < 4; ++k)
      CHECK(std::abs(a.bins[i][k] - b.bins[i][k]) <= 1e-12 * std::max(1.0, a.bins[i][k]));
}

TEST_CASE("dimension mismatch is rejected") {
  const auto e = CodeEnsemble::balls_and_bins(100, 10, 2, RngSeed{1});
  const auto p = ModulationParams::draw(200, RngSeed{2});
  CHECK_THROWS_AS(encode(SparseSignal(100, {{1, 1.0}}), e, p), ParameterError);
}

TEST_CASE("measurement file round trip is exact") {
  const auto e = CodeEnsemble::balls_and_bins(5000, 50, 4, RngSeed{3});
  const auto x = generate_signal(5000, 12, RngSeed{4});
  for (auto mode : {ModulationMode::Standard, ModulationMode::Periodic}) {
    const auto p = ModulationParams::draw(5000, RngSeed{5}, mode);
    const auto m = encode(x, e, p);
    const std::string path = "measurement_roundtrip.txt";
    write_measurements(path, m);
    const auto r = read_measurements(path);
    std::remove(path.c_str());
    CHECK(r.params.n == p.n);
    CHECK(r.params.L == p.L);
    CHECK(r.params.mode == p.mode);
    CHECK(r.bins == m.bins);
  }
}

}
