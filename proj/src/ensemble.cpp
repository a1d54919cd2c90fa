#include "phasecode/ensemble.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace phasecode {

const char* to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::BallsAndBins: return "balls";
    case EnsembleKind::Crt: return "crt";
    case EnsembleKind::Explicit: return "explicit";
  }
  return "unknown";
}

CodeEnsemble CodeEnsemble::balls_and_bins(Index n, std::size_t bins, std::size_t d,
                                          RngSeed seed) {
  if (n < 1) throw ParameterError("balls_and_bins: n must be positive");
  if (d < 1) throw ParameterError("balls_and_bins: d must be positive");
  if (d > bins) throw ParameterError("balls_and_bins: d > M");
  CodeEnsemble e;
  e.kind_ = EnsembleKind::BallsAndBins;
  e.n_ = n;
  e.bins_ = bins;
  e.d_ = d;
  e.seed_ = seed;
  return e;
}

namespace {

using u128 = unsigned __int128;

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  const u128 p = static_cast<u128>(a) * b;
  if (p > static_cast<u128>(UINT64_MAX)) throw ParameterError("crt: product overflows 64 bits");
  return static_cast<std::uint64_t>(p);
}

}  // namespace

CodeEnsemble CodeEnsemble::crt(std::span<const std::uint64_t> coprimes, unsigned alpha) {
  const std::size_t d = coprimes.size();
  if (d == 0) throw ParameterError("crt: empty coprime set");
  if (alpha < 1 || alpha > d) throw ParameterError("crt: alpha must be in [1, d]");
  for (std::size_t i = 0; i < d; ++i) {
    if (coprimes[i] < 2) throw ParameterError("crt: stage heights must be >= 2");
    for (std::size_t j = i + 1; j < d; ++j)
      if (std::gcd(coprimes[i], coprimes[j]) != 1)
        throw ParameterError("crt: inputs are not pairwise coprime");
  }
  CodeEnsemble e;
  e.kind_ = EnsembleKind::Crt;
  e.coprimes_.assign(coprimes.begin(), coprimes.end());
  e.alpha_ = alpha;
  e.d_ = d;
  e.n_ = 1;
  for (auto f : coprimes) e.n_ = checked_mul(e.n_, f);
  e.heights_.resize(d);
  e.offsets_.resize(d);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < d; ++i) {
    std::uint64_t h = 1;
    for (unsigned j = 0; j < alpha; ++j) h = checked_mul(h, coprimes[(i + j) % d]);
    e.heights_[i] = h;
    e.offsets_[i] = total;
    total += h;
  }
  e.bins_ = total;
  return e;
}

CodeEnsemble CodeEnsemble::explicit_graph(std::size_t bins,
                                          std::vector<std::vector<std::size_t>> bins_per_ball) {
  CodeEnsemble e;
  e.kind_ = EnsembleKind::Explicit;
  e.n_ = bins_per_ball.size();
  e.bins_ = bins;
  for (auto& list : bins_per_ball) {
    std::vector<std::size_t> sorted(list);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ParameterError("explicit_graph: duplicate bin for a ball");
    for (auto b : list)
      if (b < 1 || b > bins) throw ParameterError("explicit_graph: bin out of range");
    e.d_ = std::max(e.d_, list.size());
  }
  e.explicit_ = std::move(bins_per_ball);
  return e;
}

std::vector<std::size_t> CodeEnsemble::bins_of(Index l) const {
  std::vector<std::size_t> out;
  bins_of(l, out);
  return out;
}

void CodeEnsemble::bins_of(Index l, std::vector<std::size_t>& out) const {
  if (l < 1 || l > n_) throw ParameterError("bins_of: index out of range");
  out.clear();
  switch (kind_) {
    case EnsembleKind::BallsAndBins: {
      const std::uint64_t key = mix64(seed_.value ^ mix64(l));
      for (std::uint64_t attempt = 0; out.size() < d_; ++attempt) {
        const std::uint64_t h = mix64(key + attempt * 0xd1342543de82ef95ULL);
        const auto bin = static_cast<std::size_t>((static_cast<u128>(h) * bins_) >> 64) + 1;
        if (std::find(out.begin(), out.end(), bin) == out.end()) out.push_back(bin);
      }
      break;
    }
    case EnsembleKind::Crt:
      for (std::size_t j = 0; j < heights_.size(); ++j)
        out.push_back(static_cast<std::size_t>(offsets_[j] + (l - 1) % heights_[j]) + 1);
      break;
    case EnsembleKind::Explicit:
      out = explicit_[l - 1];
      break;
  }
}

std::string CodeEnsemble::describe() const {
  std::ostringstream os;
  os << "kind=" << to_string(kind_) << " n=" << n_ << " M=" << bins_ << " d=" << d_;
  if (kind_ == EnsembleKind::BallsAndBins) os << " ensemble_seed=" << seed_.value;
  if (kind_ == EnsembleKind::Crt) {
    os << " coprimes=";
    for (std::size_t i = 0; i < coprimes_.size(); ++i) os << (i ? "," : "") << coprimes_[i];
    os << " alpha=" << alpha_;
  }
  return os.str();
}

Index crt_reconstruct(std::span<const std::uint64_t> coprimes,
                      std::span<const std::uint64_t> residues) {
  if (coprimes.size() != residues.size()) throw ParameterError("crt_reconstruct: size mismatch");
  // Garner-style incremental combination: x = x + m * t with t chosen mod f.
  u128 x = 0;
  u128 m = 1;
  for (std::size_t i = 0; i < coprimes.size(); ++i) {
    const std::uint64_t f = coprimes[i];
    const std::uint64_t r = residues[i] % f;
    const std::uint64_t xm = static_cast<std::uint64_t>(x % f);
    const std::uint64_t mm = static_cast<std::uint64_t>(m % f);
    // Solve xm + mm * t = r (mod f).
    std::uint64_t t = 0;
    for (; t < f; ++t)
      if ((xm + static_cast<u128>(mm) * t) % f == r) break;
    if (t == f) throw ParameterError("crt_reconstruct: moduli not coprime");
    x += m * t;
    m *= f;
  }
  return static_cast<Index>(x) + 1;
}

std::size_t InducedGraph::edge_count() const {
  std::size_t e = 0;
  for (const auto& m : members) e += m.size();
  return e;
}

std::vector<std::size_t> InducedGraph::degree_histogram() const {
  std::vector<std::size_t> hist;
  for (const auto& m : members) {
    if (m.size() >= hist.size()) hist.resize(m.size() + 1, 0);
    ++hist[m.size()];
  }
  return hist;
}

InducedGraph induce_graph(const CodeEnsemble& ensemble, std::span<const Index> support) {
  InducedGraph g;
  g.members.resize(ensemble.num_bins());
  std::vector<std::size_t> bins;
  for (Index l : support) {
    ensemble.bins_of(l, bins);
    for (auto b : bins) g.members[b - 1].push_back(l);
  }
  return g;
}

std::vector<std::vector<int>> dense_code_matrix(const CodeEnsemble& ensemble) {
  if (ensemble.n() > 10000 || ensemble.num_bins() > 10000)
    throw ParameterError("dense_code_matrix: too large to materialize");
  std::vector<std::vector<int>> H(ensemble.num_bins(),
                                  std::vector<int>(static_cast<std::size_t>(ensemble.n()), 0));
  std::vector<std::size_t> bins;
  for (Index l = 1; l <= ensemble.n(); ++l) {
    ensemble.bins_of(l, bins);
    for (auto b : bins) H[b - 1][l - 1] = 1;
  }
  return H;
}

}  // namespace phasecode
