#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "phasecode/color_forest.hpp"

using namespace phasecode;

TEST_SUITE("color_forest") {

TEST_CASE("unite rotates a whole component") {
  ColorForest f;
  const auto a = f.add(1, Complex(1, 0));
  const auto b = f.add(2, Complex(0, 2));
  const auto c = f.add_to(b, 3, Complex(3, 0));
  CHECK(f.component_size(b) == 2);
  const Complex rot = std::polar(1.0, 0.4);
  const auto root = f.unite(a, b, rot);
  CHECK(f.component_size(a) == 3);
  CHECK(f.find(a) == root);
  CHECK(f.find(c) == root);
  // Everything expressed in a's frame.
  const Complex ra = f.value(a), rb = f.value(b), rc = f.value(c);
  CHECK(std::abs(rb / ra - rot * Complex(0, 2) / Complex(1, 0)) < 1e-15);
  CHECK(std::abs(rc / rb - Complex(3, 0) / Complex(0, 2)) < 1e-15);
  CHECK(f.index(c) == 3);
}

// Oracle: keep every ball's true value and a per-ball frame rotation; the
// forest's relative values must always equal the truth ratios within a
// component.
TEST_CASE("random merges match an explicit-frame oracle") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const std::size_t N = 2000;
  ColorForest f;
  std::vector<Complex> truth(N), frame(N);
  std::vector<std::size_t> comp(N);
  for (std::size_t i = 0; i < N; ++i) {
    truth[i] = Complex(u(rng), u(rng));
    frame[i] = std::polar(1.0, u(rng));
    f.add(i + 1, truth[i] * frame[i]);
    comp[i] = i;
  }
  std::uniform_int_distribution<std::size_t> pick(0, N - 1);
  for (int step = 0; step < 3000; ++step) {
    const auto a = pick(rng), b = pick(rng);
    if (comp[a] == comp[b]) continue;
    const auto ra = f.find(static_cast<ColorForest::Id>(a));
    const auto rb = f.find(static_cast<ColorForest::Id>(b));
    // b's frame -> a's frame is frame[a] / frame[b] for the current frames.
    f.unite(ra, rb, frame[a] / frame[b]);
    // The merged component lives in whichever root survives; its frame is a
    // gauge choice, read it back from a's value.
    const auto old = comp[b];
    const Complex fa = f.value(static_cast<ColorForest::Id>(a)) / truth[a];
    for (std::size_t i = 0; i < N; ++i)
      if (comp[i] == old || comp[i] == comp[a]) {
        comp[i] = comp[a];
        frame[i] = fa;
      }
    if (step % 500 == 0) {
      for (std::size_t i = 0; i < N; i += 37) {
        const auto j = (i * 7919) % N;
        if (comp[i] != comp[j]) continue;
        const Complex got = f.value(static_cast<ColorForest::Id>(i)) /
                            f.value(static_cast<ColorForest::Id>(j));
        CHECK(std::abs(got - truth[i] / truth[j]) <= 1e-12 * std::abs(truth[i] / truth[j]));
      }
    }
  }
  std::size_t total = 0;
  std::vector<bool> seen(N, false);
  for (std::size_t i = 0; i < N; ++i) {
    const auto r = f.find(static_cast<ColorForest::Id>(i));
    if (!seen[r]) {
      seen[r] = true;
      total += f.component_size(r);
    }
  }
  CHECK(total == N);
  for (std::size_t i = 0; i < N; ++i) {
    const auto j = (i + 1) % N;
    if (comp[i] != comp[j]) continue;
    const Complex got =
        f.value(static_cast<ColorForest::Id>(i)) / f.value(static_cast<ColorForest::Id>(j));
    CHECK(std::abs(got - truth[i] / truth[j]) <= 1e-12 * std::abs(truth[i] / truth[j]));
  }
}

}
