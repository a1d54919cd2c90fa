#include "phasecode/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

namespace phasecode {

SparseSignal::SparseSignal(Index n, std::vector<Component> support)
    : n_(n), support_(std::move(support)) {
  if (support_.size() > n_) throw ParameterError("sparsity exceeds ambient dimension");
  for (std::size_t i = 0; i < support_.size(); ++i) {
    const auto& c = support_[i];
    if (c.index < 1 || c.index > n_) throw ParameterError("support index out of range");
    if (i > 0 && support_[i - 1].index >= c.index)
      throw ParameterError("support indices must be strictly increasing");
    if (c.value == Complex(0.0, 0.0)) throw ParameterError("support value is zero");
  }
}

std::vector<Index> SparseSignal::indices() const {
  std::vector<Index> out;
  out.reserve(support_.size());
  for (const auto& c : support_) out.push_back(c.index);
  return out;
}

SparseSignal SparseSignal::rotated(double phi) const {
  const Complex rot = std::polar(1.0, phi);
  std::vector<Component> s(support_);
  for (auto& c : s) c.value *= rot;
  return SparseSignal(n_, std::move(s));
}

SparseSignal generate_signal(Index n, std::size_t K, RngSeed seed, ValueModel model) {
  if (K > n) throw ParameterError("generate_signal: K > n");
  std::mt19937_64 rng(seed.value);

  // Floyd's sampling: K distinct values from [1, n] in O(K).
  std::unordered_set<Index> chosen;
  chosen.reserve(K * 2);
  for (Index j = n - K + 1; j <= n && K > 0; ++j) {
    std::uniform_int_distribution<Index> pick(1, j);
    const Index t = pick(rng);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<Index> idx(chosen.begin(), chosen.end());
  std::sort(idx.begin(), idx.end());

  std::vector<Component> support;
  support.reserve(K);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  for (Index l : idx) {
    Complex v;
    if (model == ValueModel::UnitCircle) {
      v = std::polar(1.0, angle(rng));
    } else {
      v = Complex(gauss(rng), gauss(rng));
      const double mag = std::abs(v);
      constexpr double kFloor = 1e-3;
      if (mag < kFloor) v = (mag > 0.0) ? v * (kFloor / mag) : Complex(kFloor, 0.0);
    }
    support.push_back({l, v});
  }
  return SparseSignal(n, std::move(support));
}

const char* to_string(DecodeStatus status) {
  switch (status) {
    case DecodeStatus::FullRecovery: return "FullRecovery";
    case DecodeStatus::PartialRecovery: return "PartialRecovery";
    case DecodeStatus::Failure: return "Failure";
  }
  return "Unknown";
}

namespace {

const Component* find_component(std::span<const Component> sorted, Index l) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), l,
                             [](const Component& c, Index v) { return c.index < v; });
  if (it == sorted.end() || it->index != l) return nullptr;
  return &*it;
}

}  // namespace

double align_global_phase(std::span<const Component> estimate, const SparseSignal& truth) {
  const auto ts = truth.support();
  Complex rot;
  bool anchored = false;
  for (const auto& e : estimate) {
    const Component* t = find_component(ts, e.index);
    if (t == nullptr) throw AlignmentError("estimate index not in truth support");
    if (!anchored && std::abs(e.value) > 0.0) {
      rot = t->value / e.value;
      rot /= std::abs(rot);
      anchored = true;
    }
  }
  if (!anchored) throw AlignmentError("no shared component to align on");
  double worst = 0.0;
  for (const auto& e : estimate) {
    const Component* t = find_component(ts, e.index);
    worst = std::max(worst, std::abs(rot * e.value - t->value) / std::abs(t->value));
  }
  return worst;
}

std::size_t count_correct(std::span<const Component> estimate, const SparseSignal& truth,
                          double rel_tol) {
  const auto ts = truth.support();
  // Anchor on the largest matched component for a well-conditioned rotation.
  Complex rot;
  double best = -1.0;
  for (const auto& e : estimate) {
    const Component* t = find_component(ts, e.index);
    if (t == nullptr || std::abs(e.value) == 0.0) continue;
    if (std::abs(t->value) > best) {
      best = std::abs(t->value);
      rot = t->value / e.value;
    }
  }
  if (best < 0.0) return 0;
  rot /= std::abs(rot);
  std::size_t ok = 0;
  for (const auto& e : estimate) {
    const Component* t = find_component(ts, e.index);
    if (t == nullptr) continue;
    if (std::abs(rot * e.value - t->value) <= rel_tol * std::abs(t->value)) ++ok;
  }
  return ok;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc()) throw ParameterError("malformed number: " + s);
  return v;
}

}  // namespace

void write_signal(const std::string& path, const SparseSignal& signal) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot open " + path);
  out << signal.n() << ' ' << signal.sparsity() << '\n';
  for (const auto& c : signal.support())
    out << c.index << ' ' << format_double(c.value.real()) << ' '
        << format_double(c.value.imag()) << '\n';
}

SparseSignal read_signal(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  Index n = 0;
  std::size_t K = 0;
  if (!(in >> n >> K)) throw ParameterError("bad signal header in " + path);
  std::vector<Component> support;
  support.reserve(K);
  for (std::size_t i = 0; i < K; ++i) {
    Index l = 0;
    std::string re, im;
    if (!(in >> l >> re >> im)) throw ParameterError("truncated signal file " + path);
    support.push_back({l, Complex(parse_double(re), parse_double(im))});
  }
  return SparseSignal(n, std::move(support));
}

}  // namespace phasecode
