#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "phasecode/core.hpp"

namespace phasecode {

enum class EnsembleKind { BallsAndBins, Crt, Explicit };

const char* to_string(EnsembleKind kind);

/// Implicit binary code matrix H (M x n). Bin ids are 1-based.
///
/// BallsAndBins: ball l occupies d distinct bins drawn by a seeded hash of
/// (seed, l, attempt) with duplicates rejected. Crt: stage j holds bins
/// [1 + sum_{i<j} f_i, sum_{i<=j} f_i] and ball l sits at offset (l-1) mod f_j.
/// Explicit: small hand-built graphs (tests and worked examples), possibly
/// irregular.
class CodeEnsemble {
 public:
  static CodeEnsemble balls_and_bins(Index n, std::size_t bins, std::size_t d, RngSeed seed);

  /// Tall stages: f'_i = prod_{j<alpha} f_{((i+j) mod d) + 1}; n = prod f_i.
  static CodeEnsemble crt(std::span<const std::uint64_t> coprimes, unsigned alpha = 1);

  /// `bins_per_ball[l-1]` lists the 1-based bins of ball l.
  static CodeEnsemble explicit_graph(std::size_t bins,
                                     std::vector<std::vector<std::size_t>> bins_per_ball);

  EnsembleKind kind() const { return kind_; }
  Index n() const { return n_; }
  std::size_t num_bins() const { return bins_; }
  /// Left degree (maximum degree for irregular explicit graphs).
  std::size_t degree() const { return d_; }
  RngSeed seed() const { return seed_; }
  const std::vector<std::uint64_t>& coprimes() const { return coprimes_; }
  unsigned alpha() const { return alpha_; }
  const std::vector<std::uint64_t>& stage_heights() const { return heights_; }

  /// Bins occupied by ball l, in stage order for Crt.
  std::vector<std::size_t> bins_of(Index l) const;
  /// Allocation-free variant; `out` is cleared first.
  void bins_of(Index l, std::vector<std::size_t>& out) const;

  /// One-line description used in output headers.
  std::string describe() const;

 private:
  EnsembleKind kind_ = EnsembleKind::BallsAndBins;
  Index n_ = 0;
  std::size_t bins_ = 0;
  std::size_t d_ = 0;
  RngSeed seed_{};
  std::vector<std::uint64_t> coprimes_;
  unsigned alpha_ = 1;
  std::vector<std::uint64_t> heights_;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::vector<std::size_t>> explicit_;
};

/// Reconstructs l from its per-stage residues (alpha = 1 only).
Index crt_reconstruct(std::span<const std::uint64_t> coprimes,
                      std::span<const std::uint64_t> residues);

/// Code graph restricted to a support: per-bin member lists (1-based bins in
/// `members[bin - 1]`).
struct InducedGraph {
  std::vector<std::vector<Index>> members;

  std::size_t edge_count() const;
  std::vector<std::size_t> degree_histogram() const;
};

InducedGraph induce_graph(const CodeEnsemble& ensemble, std::span<const Index> support);

/// Dense 0/1 dump of H, for n and M small (debug and tests).
std::vector<std::vector<int>> dense_code_matrix(const CodeEnsemble& ensemble);

}  // namespace phasecode
