#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "phasecode/experiment.hpp"
#include "phasecode/fft.hpp"
#include "phasecode/fourier.hpp"

using namespace phasecode;

namespace {

std::vector<Complex> random_dense(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> x(n);
  for (auto& v : x) v = Complex(g(rng), g(rng));
  return x;
}

std::vector<Complex> naive_dft(const std::vector<Complex>& x) {
  const std::size_t n = x.size();
  std::vector<Complex> X(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t t = 0; t < n; ++t)
      X[k] += x[t] * std::polar(1.0, -2.0 * kPi * static_cast<double>((k * t) % n) / n);
  return X;
}

}  // namespace

TEST_SUITE("fourier") {

TEST_CASE("fft matches the naive transform for mixed radices") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {1u, 2u, 7u, 60u, 97u, 360u, 2310u}) {
    const auto x = random_dense(n, rng);
    const auto X = dft(x);
    const auto R = naive_dft(x);
    double err = 0.0, norm = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      err = std::max(err, std::abs(X[k] - R[k]));
      norm = std::max(norm, std::abs(R[k]));
    }
    CHECK(err / norm < 1e-11);
    const auto back = idft(X);
    for (std::size_t t = 0; t < n; ++t) CHECK(std::abs(back[t] - x[t]) < 1e-12);
  }
}

TEST_CASE("mask and lens basics") {
  std::mt19937_64 rng(2);
  const auto x = random_dense(60, rng);
  const std::vector<double> ones(60, 1.0);
  const auto y = mask_lens_measure(x, ones);
  const auto X = dft(x);
  for (std::size_t k = 0; k < 60; ++k) CHECK(y[k] == doctest::Approx(std::abs(X[k])));

  // Impulse at t0: the output magnitude is flat at |mask[t0]|.
  std::vector<Complex> imp(60, 0.0);
  imp[12] = 1.0;
  std::vector<double> mask(60);
  for (std::size_t t = 0; t < 60; ++t) mask[t] = 0.5 + t;
  for (double v : mask_lens_measure(imp, mask)) CHECK(v == doctest::Approx(12.5));
}

TEST_CASE("stage masks diagonalize the subsampling circulant") {
  const auto crt = CodeEnsemble::crt(std::vector<std::uint64_t>{3, 4, 5});
  const auto plan = MaskLensPlan::build(crt, 7);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto x = random_dense(60, rng);
    const auto X = dft(x);
    for (std::size_t j = 0; j < 3; ++j) {
      const auto lhs = mask_lens_measure(x, plan.masks[j]);
      const auto rhs = circulant_apply(plan.heights[j], X);
      for (std::size_t k = 0; k < 60; ++k) CHECK(std::abs(lhs[k] - std::abs(rhs[k])) < 1e-10);
    }
  }
  for (std::size_t j = 0; j < 3; ++j) {
    const double s = 60.0 / plan.heights[j];
    for (double m : plan.masks[j]) CHECK((m == 0.0 || m == s));
  }
  for (double c : plan.cosine) CHECK(std::isfinite(c));
}

TEST_CASE("two-stage example: replicas of f unique values") {
  const auto crt = CodeEnsemble::crt(std::vector<std::uint64_t>{2, 3});
  const auto plan = MaskLensPlan::build(crt, 1);
  const std::vector<Complex> X{1.0, Complex(0, 2), -0.5, 0.25, Complex(1, 1), 3.0};
  const auto x = idft(X);
  const auto out = stage_output(plan, x, 0, StageVariant::Plain);
  // Stage 1 bins sum X over even and odd frequencies.
  const double even = std::abs(X[0] + X[2] + X[4]), odd = std::abs(X[1] + X[3] + X[5]);
  for (std::size_t r = 0; r < 6; ++r) CHECK(out[r] == doctest::Approx(r % 2 ? odd : even));
  const auto unique = acquire_stage(plan, x, 0, StageVariant::Plain);
  CHECK(unique.size() == 2);
  CHECK(acquire_stage(plan, x, 1, StageVariant::Plain).size() == 3);
}

TEST_CASE("lens twice is an index reversal") {
  std::mt19937_64 rng(4);
  const auto x = random_dense(36, rng);
  const auto y = dft(dft(x));
  for (std::size_t k = 0; k < 36; ++k) CHECK(std::abs(y[k] - 36.0 * x[(36 - k) % 36]) < 1e-10);
}

TEST_CASE("cosine cascade equals the dense reference") {
  const auto crt = CodeEnsemble::crt(std::vector<std::uint64_t>{3, 4, 5});
  const auto plan = MaskLensPlan::build(crt, 11);
  std::mt19937_64 rng(5);
  const auto x = random_dense(60, rng);
  const auto X = dft(x);
  for (std::size_t j = 0; j < 3; ++j) {
    // |C D X| with an explicit dense circulant.
    const auto f = plan.heights[j];
    std::vector<Complex> ref(60);
    for (std::size_t r = 0; r < 60; ++r)
      for (std::size_t k = 0; k < 60; ++k)
        if (k % f == r % f) ref[r] += 2.0 * std::cos(2 * kPi * k / 60.0) * X[k];
    const auto out = stage_output(plan, x, j, StageVariant::Cosine);
    for (std::size_t r = 0; r < 60; ++r) CHECK(std::abs(out[r] - std::abs(ref[r])) < 1e-9);
  }
}

TEST_CASE("experiment cost per variant") {
  CHECK(experiment_cost(StageVariant::Cosine).masks == 2);
  CHECK(experiment_cost(StageVariant::Cosine).lenses == 3);
  for (auto v : {StageVariant::Plain, StageVariant::ShiftFwd, StageVariant::ShiftBwd,
                 StageVariant::Check}) {
    CHECK(experiment_cost(v).masks == 1);
    CHECK(experiment_cost(v).lenses == 1);
  }
}

TEST_CASE("a wrong mask trips the replica check") {
  const auto crt = CodeEnsemble::crt(std::vector<std::uint64_t>{3, 4, 5});
  auto plan = MaskLensPlan::build(crt, 1);
  plan.masks[0][1] = 1.0;
  std::mt19937_64 rng(6);
  const auto x = random_dense(60, rng);
  CHECK_THROWS_AS(acquire_stage(plan, x, 0, StageVariant::Plain), std::logic_error);
}

TEST_CASE("physical acquisition equals the analytic encoder") {
  for (const auto& f : {std::vector<std::uint64_t>{3, 4, 5}, std::vector<std::uint64_t>{5, 8, 9},
                        std::vector<std::uint64_t>{2, 3, 5, 7, 11}}) {
    const auto crt = CodeEnsemble::crt(f);
    const auto p = ModulationParams::draw(crt.n(), RngSeed{7}, ModulationMode::Periodic);
    for (std::size_t K : {0u, 1u, 6u}) {
      const auto X = generate_signal(crt.n(), K, RngSeed{8 + K});
      const auto phys = ff_sparse_acquire_physical(X, crt, p);
      const auto ana = encode(X, crt, p);
      REQUIRE(phys.bins.size() == ana.bins.size());
      for (std::size_t b = 0; b < ana.bins.size(); ++b)
        for (int k = 0; k < 4; ++k) CHECK(std::abs(phys.bins[b][k] - ana.bins[b][k]) <= 1e-9);
      if (K == 0)
        for (const auto& b : phys.bins)
          for (double v : b) CHECK(v <= 1e-12);
      if (K == 1)
        for (const auto& b : phys.bins)
          if (b[0] > 1e-9) {
            CHECK(b[1] == doctest::Approx(b[0]));
            CHECK(b[3] == doctest::Approx(b[0]));
          }
    }
  }
}

TEST_CASE("fourier mode rejects other ensembles") {
  const auto bb = CodeEnsemble::balls_and_bins(60, 10, 3, RngSeed{1});
  const auto p = ModulationParams::draw(60, RngSeed{2}, ModulationMode::Periodic);
  CHECK_THROWS_AS(ff_sparse_acquire(generate_signal(60, 2, RngSeed{3}), bb, p), ParameterError);
  CHECK_THROWS_AS(MaskLensPlan::build(bb, 1), ParameterError);
}

TEST_CASE("single spectral line is recovered") {
  const auto crt = CodeEnsemble::crt(std::vector<std::uint64_t>{5, 8, 9});
  const auto p = ModulationParams::draw(crt.n(), RngSeed{9}, ModulationMode::Periodic);
  for (Index l : {Index{1}, Index{2}, Index{181}, Index{360}}) {
    const SparseSignal X(crt.n(), {{l, Complex(0.3, -0.7)}});
    const auto r = ff_sparse_decode(ff_sparse_acquire(X, crt, p), crt, 1);
    REQUIRE(r.recovered.size() == 1);
    CHECK(r.recovered[0].index == l);
    CHECK(r.status == DecodeStatus::FullRecovery);
  }
}

TEST_CASE("fourier-friendly sparse recovery keeps pace with random codes") {
  ExperimentConfig ff;
  ff.K = 20;
  ff.ensemble = EnsembleKind::Crt;
  ff.coprimes = {47, 49, 50, 53, 57, 59, 61};
  ff.modulation = ModulationMode::Periodic;
  ff.trials = 2000;
  ff.success_threshold = 1.0;
  ff.seed = RngSeed{21};
  const auto a = run_simulation(ff);

  ExperimentConfig bb;
  bb.n = ff.effective_n();
  bb.K = 20;
  bb.d = 7;
  bb.bins = 376;
  bb.trials = 2000;
  bb.success_threshold = 1.0;
  bb.seed = RngSeed{21};
  const auto b = run_simulation(bb);
  const double rate_ff = 1.0 - a.error_probability, rate_bb = 1.0 - b.error_probability;
  CHECK(rate_ff >= rate_bb - 0.03);
}

TEST_CASE("operator identity suite") {
  for (const auto& f : {std::vector<std::uint64_t>{3, 4, 5}, std::vector<std::uint64_t>{5, 8, 9}}) {
    for (const auto& c : ff_verify(f, 10, RngSeed{3})) {
      INFO(c.name);
      CHECK(c.passed);
      CHECK(c.max_residual <= 1e-9);
    }
  }
}

}
