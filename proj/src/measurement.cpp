#include "phasecode/measurement.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace phasecode {

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

}  // namespace

ModulationParams ModulationParams::draw(Index n, RngSeed seed, ModulationMode mode) {
  if (n < 2) throw ParameterError("modulation: n must be at least 2");
  std::mt19937_64 rng(seed.value);
  std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
  std::uint64_t L = 0;
  // Periodic mode with even n: l and l + n/2 flip the sign of the first three
  // coefficients. An even L keeps the check coefficient unchanged, so the
  // check row tells the two apart whenever the ball shares a bin.
  const bool want_even = mode == ModulationMode::Periodic && n % 2 == 0 && n >= 4;
  while (L == 0 || (want_even && L % 2 != 0)) L = pick(rng);
  return ModulationParams{n, L, mode};
}

double ModulationParams::omega() const {
  return mode == ModulationMode::Standard ? kPi / (2.0 * static_cast<double>(n))
                                          : 2.0 * kPi / static_cast<double>(n);
}

double ModulationParams::omega_prime() const {
  return 2.0 * kPi * static_cast<double>(L) / static_cast<double>(n);
}

double ModulationParams::phase(Index l) const {
  if (mode == ModulationMode::Standard)
    return kPi * static_cast<double>(l) / (2.0 * static_cast<double>(n));
  return 2.0 * kPi * static_cast<double>((l - 1) % n) / static_cast<double>(n);
}

double ModulationParams::check_phase(Index l) const {
  const std::uint64_t t = mode == ModulationMode::Standard ? l % n : (l - 1) % n;
  return 2.0 * kPi * static_cast<double>(mulmod(L, t, n)) / static_cast<double>(n);
}

void ModulationParams::location_candidates(double abs_cos, std::vector<Index>& out) const {
  out.clear();
  const double c = std::clamp(abs_cos, 0.0, 1.0);
  const double a = std::acos(c);
  const double nd = static_cast<double>(n);
  if (mode == ModulationMode::Standard) {
    const double lr = a * 2.0 * nd / kPi;
    const double l = std::nearbyint(lr);
    if (l >= 1.0 && l <= nd) out.push_back(static_cast<Index>(l));
    return;
  }
  const double thetas[4] = {a, 2.0 * kPi - a, kPi - a, kPi + a};
  for (double th : thetas) {
    const double kr = std::nearbyint(th * nd / (2.0 * kPi));
    if (kr < 0.0 || kr > nd) continue;
    const Index k = static_cast<Index>(kr) % n;
    const Index l = k + 1;
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  }
}

Coeffs modulation_coeffs(const ModulationParams& params, Index l) {
  const double th = params.phase(l);
  const Complex g1 = std::polar(1.0, th);
  return {g1, std::conj(g1), Complex(2.0 * std::cos(th), 0.0),
          std::polar(1.0, params.check_phase(l))};
}

std::vector<std::array<Complex, 4>> encode_complex(const SparseSignal& signal,
                                                    const CodeEnsemble& ensemble,
                                                    const ModulationParams& params) {
  if (signal.n() != ensemble.n() || signal.n() != params.n)
    throw ParameterError("encode: dimension mismatch");
  std::vector<std::array<Complex, 4>> sums(ensemble.num_bins());
  std::vector<std::size_t> bins;
  for (const auto& c : signal.support()) {
    const Coeffs g = modulation_coeffs(params, c.index);
    ensemble.bins_of(c.index, bins);
    for (auto b : bins)
      for (int k = 0; k < 4; ++k) sums[b - 1][k] += g[k] * c.value;
  }
  return sums;
}

MeasurementSet encode(const SparseSignal& signal, const CodeEnsemble& ensemble,
                      const ModulationParams& params) {
  const auto sums = encode_complex(signal, ensemble, params);
  MeasurementSet m;
  m.params = params;
  m.bins.resize(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i)
    for (int k = 0; k < 4; ++k) m.bins[i][k] = std::abs(sums[i][k]);
  return m;
}

DenseMatrix row_tensor_product(const DenseMatrix& G, const DenseMatrix& H) {
  if (G.empty() || H.empty()) throw ParameterError("row_tensor_product: empty operand");
  const std::size_t n = G[0].size();
  for (const auto& r : G)
    if (r.size() != n) throw ParameterError("row_tensor_product: ragged G");
  for (const auto& r : H)
    if (r.size() != n) throw ParameterError("row_tensor_product: column count mismatch");
  DenseMatrix A;
  A.reserve(G.size() * H.size());
  for (const auto& h : H)
    for (const auto& g : G) {
      std::vector<Complex> row(n);
      for (std::size_t k = 0; k < n; ++k) row[k] = g[k] * h[k];
      A.push_back(std::move(row));
    }
  return A;
}

DenseMatrix modulation_matrix(const ModulationParams& params) {
  if (params.n > 10000) throw ParameterError("modulation_matrix: n too large");
  DenseMatrix G(4, std::vector<Complex>(static_cast<std::size_t>(params.n)));
  for (Index l = 1; l <= params.n; ++l) {
    const Coeffs g = modulation_coeffs(params, l);
    for (int k = 0; k < 4; ++k) G[k][l - 1] = g[k];
  }
  return G;
}

std::vector<double> abs_matvec(const DenseMatrix& A, std::span<const Complex> x) {
  std::vector<double> y;
  y.reserve(A.size());
  for (const auto& row : A) {
    if (row.size() != x.size()) throw ParameterError("abs_matvec: dimension mismatch");
    Complex s;
    for (std::size_t k = 0; k < x.size(); ++k) s += row[k] * x[k];
    y.push_back(std::abs(s));
  }
  return y;
}

void write_measurements(const std::string& path, const MeasurementSet& meas) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot open " + path);
  out << "# mode=" << (meas.params.mode == ModulationMode::Standard ? "standard" : "periodic")
      << '\n';
  out << meas.num_bins() << ' ' << meas.params.n << ' ' << meas.params.L << '\n';
  for (const auto& y : meas.bins)
    out << format_double(y[0]) << ' ' << format_double(y[1]) << ' ' << format_double(y[2])
        << ' ' << format_double(y[3]) << '\n';
}

MeasurementSet read_measurements(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path);
  MeasurementSet m;
  std::string line;
  std::size_t M = 0;
  bool header = false;
  std::size_t read = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("mode=periodic") != std::string::npos)
        m.params.mode = ModulationMode::Periodic;
      continue;
    }
    std::istringstream ls(line);
    if (!header) {
      if (!(ls >> M >> m.params.n >> m.params.L))
        throw ParameterError("bad measurement header in " + path);
      m.bins.resize(M);
      header = true;
      continue;
    }
    if (read >= M) throw ParameterError("too many measurement rows in " + path);
    for (int k = 0; k < 4; ++k) {
      std::string tok;
      if (!(ls >> tok)) throw ParameterError("short measurement row in " + path);
      double v = 0.0;
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc() || v < 0.0)
        throw ParameterError("bad measurement value in " + path);
      m.bins[read][k] = v;
    }
    ++read;
  }
  if (!header || read != M) throw ParameterError("truncated measurement file " + path);
  if (m.params.n < 2 || m.params.L == 0 || m.params.L >= m.params.n)
    throw ParameterError("bad modulation parameters in " + path);
  return m;
}

}  // namespace phasecode
