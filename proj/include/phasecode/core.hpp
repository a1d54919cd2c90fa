#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace phasecode {

using Complex = std::complex<double>;

/// Signal coordinate, 1-based (1..n).
using Index = std::uint64_t;

inline constexpr double kPi = 3.14159265358979323846;

/// Raised for invalid construction parameters or malformed inputs.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RngSeed {
  std::uint64_t value = 0;
};

/// splitmix64 finalizer; good avalanche, used as the seeded PRF everywhere.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent child seed for stream `stream` of `master`.
constexpr RngSeed derive_seed(RngSeed master, std::uint64_t stream) {
  return RngSeed{mix64(mix64(master.value) ^ mix64(stream + 0x632be59bd9b4e019ULL))};
}

struct Component {
  Index index = 0;
  Complex value;
};

/// Exactly-K-sparse complex vector of ambient length n.
class SparseSignal {
 public:
  SparseSignal() = default;
  /// Validates: indices strictly increasing within [1, n], no zero values.
  SparseSignal(Index n, std::vector<Component> support);

  Index n() const { return n_; }
  std::size_t sparsity() const { return support_.size(); }
  std::span<const Component> support() const { return support_; }
  std::vector<Index> indices() const;

  /// Returns the signal multiplied by e^{i phi}.
  SparseSignal rotated(double phi) const;

 private:
  Index n_ = 0;
  std::vector<Component> support_;
};

enum class ValueModel { UnitCircle, ComplexGaussian };

/// Uniform support without replacement plus i.i.d. values. ComplexGaussian
/// magnitudes are clamped to at least 1e-3 of the RMS (RMS = 1).
SparseSignal generate_signal(Index n, std::size_t K, RngSeed seed,
                             ValueModel model = ValueModel::ComplexGaussian);

enum class DecodeStatus { FullRecovery, PartialRecovery, Failure };

const char* to_string(DecodeStatus status);

struct DecodeResult {
  std::vector<Component> recovered;  // sorted by index, decoder's global coordinate
  DecodeStatus status = DecodeStatus::Failure;
  std::size_t iterations = 0;
  double fraction_recovered = 0.0;

  // Instrumentation.
  std::vector<Index> coloring_order;       // every ball that entered the final component, in order
  std::size_t giant_after_merge = 0;       // unicolor: largest component after the doubleton phase
  std::vector<std::size_t> colored_after_sweep;  // size of the output component after each sweep
  std::size_t processor_calls = 0;
  std::size_t peak_state_elements = 0;
};

class AlignmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rotates `estimate` onto `truth` using the first index they share, then
/// returns max_l |e^{i phi} est_l - x_l| / |x_l| over shared indices.
double align_global_phase(std::span<const Component> estimate, const SparseSignal& truth);

/// Counts estimate components whose index is in the truth support and whose
/// value matches after global alignment within `rel_tol`.
std::size_t count_correct(std::span<const Component> estimate, const SparseSignal& truth,
                          double rel_tol = 1e-6);

// Signal file: header "n K", then K lines "index re im".
void write_signal(const std::string& path, const SparseSignal& signal);
SparseSignal read_signal(const std::string& path);

/// Shortest round-trip decimal representation, locale independent.
std::string format_double(double v);

}  // namespace phasecode
