#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "phasecode/fft.hpp"
#include "phasecode/nonsparse.hpp"

using namespace phasecode;

namespace {

std::vector<Complex> random_dense(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  std::vector<Complex> x(n);
  for (auto& v : x) v = Complex(g(rng), g(rng));
  return x;
}

// Aligns on entry j and returns max |e^{i phi} est - x| / max |x|.
double residual(const std::vector<Complex>& est, const std::vector<Complex>& x, std::size_t j = 0) {
  const Complex rot = (x[j] / est[j]) / std::abs(x[j] / est[j]);
  double err = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    err = std::max(err, std::abs(rot * est[i] - x[i]));
    norm = std::max(norm, std::abs(x[i]));
  }
  return err / norm;
}

}  // namespace

TEST_SUITE("nonsparse") {

TEST_CASE("chain measurement layout") {
  std::mt19937_64 rng(1);
  const auto x = random_dense(16, rng);
  const auto m = chain_measure(x);
  CHECK(m.count() == 3 * 16 - 2);
  CHECK(m.omega == doctest::Approx(kPi / 32));

  const std::vector<Complex> r{0.8, 1.3, 0.4};
  const auto mr = chain_measure(r);
  const double w = mr.omega;
  CHECK(mr.rotated_sums[0] * mr.rotated_sums[0] ==
        doctest::Approx(0.8 * 0.8 + 1.3 * 1.3 + 2 * 0.8 * 1.3 * std::cos(w)));

  std::vector<Complex> e1(9, 0.0);
  e1[0] = Complex(0.3, 0.4);
  const auto me = chain_measure(e1);
  for (double s : me.sums) CHECK(s == doctest::Approx(0.5));
  CHECK_THROWS_AS(chain_measure(std::vector<Complex>{1.0}), ParameterError);
}

TEST_CASE("chain round trip") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 30; ++t) {
    auto x = random_dense(256, rng);
    while (std::abs(x[0]) < 0.1) x = random_dense(256, rng);
    CHECK(residual(chain_decode(chain_measure(x)), x) <= 1e-8);
  }
}

TEST_CASE("real positive multiples of the anchor") {
  std::vector<Complex> x{2.0, 1.0, 3.5, 0.25, 7.0};
  const auto est = chain_decode(chain_measure(x));
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(est[i].real() == doctest::Approx(x[i].real()));
    CHECK(std::abs(est[i].imag()) < 1e-9);
  }
}

TEST_CASE("zeros and a vanishing anchor") {
  std::mt19937_64 rng(3);
  auto x = random_dense(64, rng);
  x[10] = 0.0;
  x[40] = 0.0;
  const auto est = chain_decode(chain_measure(x));
  CHECK(est[10] == Complex(0.0, 0.0));
  CHECK(residual(est, x) <= 1e-8);
  x[0] = 0.0;
  CHECK_THROWS_AS(chain_decode(chain_measure(x)), AnchorError);
}

TEST_CASE("any nonzero anchor gives the same signal") {
  std::mt19937_64 rng(4);
  const auto x = random_dense(100, rng);
  for (std::size_t a : {1u, 17u, 100u})
    CHECK(residual(chain_decode(chain_measure(x, 0.0, a)), x, a - 1) <= 1e-8);
}

TEST_CASE("both sign branches are never consistent at once") {
  std::mt19937_64 rng(5);
  std::size_t ambiguous = 0;
  const std::size_t n = 64;
  const double w = kPi / (2.0 * n);
  for (int t = 0; t < 10000; ++t) {
    const auto v = random_dense(2, rng);
    const std::size_t pos = 1 + t % (n - 1);
    const double a = std::abs(v[0]), m = std::abs(v[1]);
    const double s = std::abs(v[0] + v[1]);
    const double r = std::abs(v[0] + std::polar(1.0, w * pos) * v[1]);
    const double cphi = (s * s - a * a - m * m) / (2 * a * m);
    const double phi = std::acos(std::clamp(cphi, -1.0, 1.0));
    int hits = 0;
    for (double sg : {1.0, -1.0}) {
      const Complex cand = std::polar(m, sg * phi);
      if (std::abs(std::abs(a + std::polar(1.0, w * pos) * cand) - r) <= 1e-9 * (a + m)) ++hits;
    }
    ambiguous += hits == 2 && phi > 1e-6 && phi < kPi - 1e-6;
  }
  CHECK(ambiguous == 0);
}

TEST_CASE("mask measurements") {
  std::mt19937_64 rng(6);
  const auto x = random_dense(50, rng);
  const auto m = ff_nonsparse_measure(x);
  CHECK(m.count() == 150);
  const auto X = dft(x);
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t k = 0; k < 50; ++k) {
    CHECK(m.plain[k] == doctest::Approx(std::abs(X[k])));
    CHECK(m.doubled[k] == doctest::Approx(std::abs(X[k] + x[0])));
    CHECK(m.quadrature[k] == doctest::Approx(std::abs(X[k] + Complex(0, 1) * x[0])));
    lhs += m.plain[k] * m.plain[k];
    rhs += std::norm(x[k]);
  }
  CHECK(lhs == doctest::Approx(50.0 * rhs));

  std::vector<Complex> e1(8, 0.0);
  e1[0] = Complex(0.6, -0.8);
  const auto me = ff_nonsparse_measure(e1);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(me.plain[k] == doctest::Approx(1.0));
    CHECK(me.doubled[k] == doctest::Approx(2.0));
  }
}

TEST_CASE("anchor magnitude candidates contain the truth") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 1000; ++t) {
    const Complex x1(u(rng), u(rng)), X(u(rng), u(rng));
    const double y1 = std::abs(X), y2 = std::abs(X + x1), y3 = std::abs(X + Complex(0, 1) * x1);
    const auto roots = solve_anchor_magnitude(y1, y2, y3);
    CHECK(roots.size() <= 2);
    double best = 1e300;
    for (double r : roots) best = std::min(best, std::abs(r - std::norm(x1)));
    CHECK(best <= 1e-10 * std::max(1.0, std::norm(x1)) * 100);
  }
  CHECK_THROWS_AS(solve_anchor_magnitude(0.0, 1.0, 1.0), ParameterError);
}

TEST_CASE("fourier round trip") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 30; ++t) {
    const auto x = random_dense(128, rng);
    CHECK(residual(ff_nonsparse_decode(ff_nonsparse_measure(x)), x) <= 1e-8);
  }
}

TEST_CASE("real symmetric spectrum") {
  // x real and even: X is real, so both signs of every relative phase occur.
  std::vector<Complex> x(64);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  x[0] = 3.0;
  for (std::size_t k = 1; k <= 32; ++k) x[k] = x[64 - k] = u(rng);
  const auto X = dft(x);
  for (const auto& v : X) CHECK(std::abs(v.imag()) < 1e-12);
  CHECK(residual(ff_nonsparse_decode(ff_nonsparse_measure(x)), x) <= 1e-8);
}

TEST_CASE("two-point closed form") {
  // X = (x1 + x2, x1 - x2); with x1 made real positive, x2 = X0 - x1.
  const std::vector<Complex> x{Complex(0.6, 0.8), Complex(-0.3, 1.1)};
  const auto est = ff_nonsparse_decode(ff_nonsparse_measure(x));
  const double a = std::abs(x[0]);
  const Complex rot = std::conj(x[0]) / a;
  CHECK(std::abs(est[0] - a) < 1e-12);
  CHECK(std::abs(est[1] - rot * x[1]) < 1e-12);
}

TEST_CASE("vanishing frequency bins are reported") {
  std::vector<Complex> x{1.0, 1.0, 1.0, 1.0};  // X = (4, 0, 0, 0)
  try {
    ff_nonsparse_decode(ff_nonsparse_measure(x));
    FAIL("expected UnresolvableBinsError");
  } catch (const UnresolvableBinsError& e) {
    CHECK(e.bins == std::vector<std::size_t>{1, 2, 3});
  }
}

TEST_CASE("anchor magnitude is unique across bins") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 200; ++t) {
    const auto x = random_dense(32, rng);
    const auto m = ff_nonsparse_measure(x);
    // Every bin votes; the true |x1|^2 must be the only value all bins share.
    std::vector<std::vector<double>> roots;
    for (std::size_t k = 0; k < 32; ++k)
      roots.push_back(solve_anchor_magnitude(m.plain[k], m.doubled[k], m.quadrature[k]));
    std::size_t shared = 0;
    for (double r : roots[0]) {
      bool all = true;
      for (const auto& rs : roots) {
        bool any = false;
        for (double v : rs) any = any || std::abs(v - r) <= 1e-8 * std::max(r, 1e-300);
        all = all && any;
      }
      shared += all;
    }
    CHECK(shared == 1);
  }
}

}
