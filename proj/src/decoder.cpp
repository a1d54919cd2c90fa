#include "phasecode/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <unordered_map>

#include "phasecode/color_forest.hpp"

namespace phasecode {

namespace {

double max4(const BinMeasurement& y) { return std::max({y[0], y[1], y[2], y[3]}); }

double total_magnitude(std::span<const KnownBall> balls) {
  double s = 0.0;
  for (const auto& b : balls) s += std::abs(b.value);
  return s;
}

std::array<double, 4> abs4(const std::array<Complex, 4>& s) {
  return {std::abs(s[0]), std::abs(s[1]), std::abs(s[2]), std::abs(s[3])};
}

// Beyond this, adjacent indices differ by less than double resolution in
// omega*l, so located indices are widened by one on each side.
constexpr Index kWideLocationN = Index{1} << 20;

double residual_norm(const std::array<Complex, 4>& base, const Coeffs& g, Complex x,
                     const BinMeasurement& y) {
  double r = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double e = std::abs(base[k] + g[k] * x) - y[k];
    r += e * e;
  }
  return r;
}

// Gauss-Newton on (Re x, Im x) for |base_k + g_k x| = y_k.
Complex refine_value(const std::array<Complex, 4>& base, const Coeffs& g, Complex x,
                     const BinMeasurement& y) {
  double best = residual_norm(base, g, x, y);
  for (int it = 0; it < 4 && best > 0.0; ++it) {
    double jtj[2][2] = {{0, 0}, {0, 0}};
    double jtr[2] = {0, 0};
    for (int k = 0; k < 4; ++k) {
      const Complex s = base[k] + g[k] * x;
      const double m = std::abs(s);
      if (m == 0.0) continue;
      const double r = m - y[k];
      const double jr = (std::conj(s) * g[k]).real() / m;
      const double ji = (std::conj(s) * g[k] * Complex(0.0, 1.0)).real() / m;
      jtj[0][0] += jr * jr;
      jtj[0][1] += jr * ji;
      jtj[1][1] += ji * ji;
      jtr[0] += jr * r;
      jtr[1] += ji * r;
    }
    const double det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[0][1];
    if (!(std::abs(det) > 0.0)) break;
    const double dr = (jtj[1][1] * jtr[0] - jtj[0][1] * jtr[1]) / det;
    const double di = (jtj[0][0] * jtr[1] - jtj[0][1] * jtr[0]) / det;
    const Complex trial = x - Complex(dr, di);
    const double rn = residual_norm(base, g, trial, y);
    if (!(rn < best)) break;
    best = rn;
    x = trial;
  }
  return x;
}

double rotation_residual(const std::array<Complex, 4>& a, const std::array<Complex, 4>& b,
                         Complex rot, const BinMeasurement& y) {
  double r = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double e = std::abs(a[k] + rot * b[k]) - y[k];
    r += e * e;
  }
  return r;
}

double refine_angle(const std::array<Complex, 4>& a, const std::array<Complex, 4>& b, double psi,
                    const BinMeasurement& y) {
  double best = rotation_residual(a, b, std::polar(1.0, psi), y);
  for (int it = 0; it < 4 && best > 0.0; ++it) {
    const Complex rot = std::polar(1.0, psi);
    double jj = 0.0;
    double jr = 0.0;
    for (int k = 0; k < 4; ++k) {
      const Complex s = a[k] + rot * b[k];
      const double m = std::abs(s);
      if (m == 0.0) continue;
      const double j = (std::conj(s) * Complex(0.0, 1.0) * rot * b[k]).real() / m;
      jj += j * j;
      jr += j * (m - y[k]);
    }
    if (!(jj > 0.0)) break;
    const double trial = psi - jr / jj;
    const double rn = rotation_residual(a, b, std::polar(1.0, trial), y);
    if (!(rn < best)) break;
    best = rn;
    psi = trial;
  }
  return psi;
}

}  // namespace

std::array<Complex, 4> modulated_sums(std::span<const KnownBall> balls,
                                      const ModulationParams& params) {
  std::array<Complex, 4> s{};
  for (const auto& b : balls) {
    const Coeffs g = modulation_coeffs(params, b.index);
    for (int k = 0; k < 4; ++k) s[k] += g[k] * b.value;
  }
  return s;
}

bool matches(const std::array<double, 4>& pred, const BinMeasurement& y, double scale,
             double tau) {
  for (int k = 0; k < 4; ++k)
    if (!(std::abs(pred[k] - y[k]) <= tau * scale)) return false;
  return true;
}

std::optional<SingletonHit> process_singleton(const BinMeasurement& y,
                                              const ModulationParams& params, double tau) {
  const double y1 = y[0];
  if (!(y1 > 0.0)) return std::nullopt;
  if (std::abs(y1 - y[1]) > tau * y1 || std::abs(y1 - y[3]) > tau * y1) return std::nullopt;
  SingletonHit hit;
  hit.magnitude = y1;
  std::vector<Index> cands;
  params.location_candidates(y[2] / (2.0 * y1), cands);
  const double scale = max4(y);
  for (Index l : cands) {
    const double c = std::abs(std::cos(params.phase(l)));
    const std::array<double, 4> pred = {y1, y1, 2.0 * y1 * c, y1};
    if (matches(pred, y, scale, tau)) hit.candidates.push_back(l);
  }
  if (hit.candidates.empty()) return std::nullopt;
  return hit;
}

std::optional<Complex> process_mergeable(const BinMeasurement& y, std::span<const KnownBall> red,
                                         std::span<const KnownBall> blue,
                                         const ModulationParams& params, double tau) {
  if (red.empty() || blue.empty()) return std::nullopt;
  const auto sr = modulated_sums(red, params);
  const auto sb = modulated_sums(blue, params);
  const double scale =
      std::max(max4(y), 2.0 * (total_magnitude(red) + total_magnitude(blue)));
  const double r = std::abs(sr[0]);
  const double b = std::abs(sb[0]);
  if (r <= tau * scale || b <= tau * scale) return std::nullopt;

  // |r + e^{i psi} b|^2 = |r|^2 + |b|^2 + 2|r||b| cos(psi + arg b - arg r).
  const double cos_t = std::clamp((y[0] * y[0] - r * r - b * b) / (2.0 * r * b), -1.0, 1.0);
  const double theta = std::acos(cos_t);
  const double base = std::arg(sr[0]) - std::arg(sb[0]);

  double accepted[2];
  int n_acc = 0;
  for (double s : {1.0, -1.0}) {
    const double psi = s * theta + base;
    const Complex rot = std::polar(1.0, psi);
    std::array<double, 4> pred;
    for (int k = 0; k < 4; ++k) pred[k] = std::abs(sr[k] + rot * sb[k]);
    if (matches(pred, y, scale, tau)) accepted[n_acc++] = psi;
  }
  if (n_acc == 0) return std::nullopt;
  if (n_acc == 2 && std::abs(std::polar(1.0, accepted[0]) - std::polar(1.0, accepted[1])) > 1e-3)
    return std::nullopt;  // two distinct consistent phases: ambiguous
  const double psi = refine_angle(sr, sb, accepted[0], y);
  return std::polar(1.0, psi);
}

std::vector<ResolvableHit> resolvable_candidates(const BinMeasurement& y,
                                                 std::span<const KnownBall> known,
                                                 const ModulationParams& params, double tau) {
  std::vector<ResolvableHit> hits;
  if (known.empty()) return hits;
  const auto s = modulated_sums(known, params);
  const Complex a = s[0];
  const Complex b = s[1];
  const Complex c = s[2];
  const double y1 = y[0];
  const double y2 = y[1];
  const double y3 = y[2];
  const double scale = std::max(max4(y), 2.0 * total_magnitude(known));
  if (y1 <= tau * scale || y2 <= tau * scale) return hits;
  if (std::abs(c) <= tau * scale) return hits;

  const double cos_a = std::clamp((y3 * y3 - y1 * y1 - y2 * y2) / (2.0 * y1 * y2), -1.0, 1.0);
  const double alpha = std::acos(cos_a);
  const double k4 = y3 / std::abs(c);
  const Index widen = params.n > kWideLocationN ? 1 : 0;

  std::vector<Index> cands;
  for (double sign : {1.0, -1.0}) {
    const Complex z = (y1 / y2) * std::polar(1.0, sign * alpha);
    const Complex zb_a = z * b - a;
    const Complex k1 = 1.0 - z + 2.0 * zb_a / c;
    const Complex k2 = 1.0 + z;
    const Complex k3 = 1.0 - z;
    const double k5 = std::norm(k1) - k4 * k4 * std::norm(k3);
    const double k6 = std::norm(k2) * (1.0 - k4 * k4);
    const double k7 = 2.0 * (k1.real() * k2.imag() - k1.imag() * k2.real()) +
                      2.0 * k4 * k4 * (k2.real() * k3.imag() - k3.real() * k2.imag());
    // k5 u + k6 (1 - u) = k7 sqrt(u (1 - u)), squared, with u = cos^2.
    const double A = (k5 - k6) * (k5 - k6) + k7 * k7;
    const double B = 2.0 * k6 * (k5 - k6) - k7 * k7;
    const double C = k6 * k6;
    double roots[2];
    int n_roots = 0;
    const double mag = std::max({std::abs(A), std::abs(B), std::abs(C)});
    if (!(mag > 0.0)) continue;
    if (std::abs(A) <= 1e-14 * mag) {
      if (std::abs(B) > 0.0) roots[n_roots++] = -C / B;
    } else {
      const double disc = std::max(B * B - 4.0 * A * C, 0.0);
      const double q = -0.5 * (B + std::copysign(std::sqrt(disc), B));
      roots[n_roots++] = q / A;
      if (q != 0.0) roots[n_roots++] = C / q;
    }
    for (int ri = 0; ri < n_roots; ++ri) {
      const double u = roots[ri];
      if (!(u >= -1e-9 && u <= 1.0 + 1e-9)) continue;
      params.location_candidates(std::sqrt(std::clamp(u, 0.0, 1.0)), cands);
      for (Index l0 : cands) {
        for (Index l = (l0 > widen ? l0 - widen : 1); l <= std::min(params.n, l0 + widen); ++l) {
          const Coeffs g = modulation_coeffs(params, l);
          const Complex den = g[0] - z * g[1];
          if (std::abs(den) <= 1e-300) continue;
          const Complex x = zb_a / den;
          if (std::abs(x) <= tau * scale) continue;
          std::array<double, 4> pred;
          for (int k = 0; k < 4; ++k) pred[k] = std::abs(s[k] + g[k] * x);
          if (!matches(pred, y, std::max(scale, 2.0 * std::abs(x)), tau)) continue;
          const bool seen = std::any_of(hits.begin(), hits.end(),
                                        [l](const ResolvableHit& h) { return h.index == l; });
          if (!seen) hits.push_back({l, refine_value(s, g, x, y)});
        }
      }
    }
  }
  return hits;
}

std::optional<ResolvableHit> process_resolvable(const BinMeasurement& y,
                                                std::span<const KnownBall> known,
                                                const ModulationParams& params, double tau) {
  auto hits = resolvable_candidates(y, known, params, tau);
  if (hits.size() != 1) return std::nullopt;
  return hits.front();
}

namespace {

using Id = ColorForest::Id;

class Engine {
 public:
  Engine(const MeasurementSet& meas, const CodeEnsemble& ens, std::size_t K_hint,
         const DecodeOptions& opt)
      : meas_(meas), ens_(ens), params_(meas.params), K_(K_hint), tau_(opt.tau) {
    if (meas.num_bins() != ens.num_bins() || meas.params.n != ens.n())
      throw ParameterError("decode: measurement set does not match ensemble");
    max_sweeps_ = opt.max_sweeps ? opt.max_sweeps : (K_ ? K_ : meas.num_bins()) + 2;
    disc_.resize(meas.num_bins());
    exhausted_.assign(meas.num_bins(), 0);
  }

  std::size_t max_sweeps() const { return max_sweeps_; }
  std::size_t target() const { return K_; }

  void singletons() {
    for (std::size_t bin = 1; bin <= meas_.num_bins(); ++bin) {
      const auto& y = meas_.bins[bin - 1];
      if (!(y[0] > 0.0)) continue;
      ++calls_;
      auto hit = process_singleton(y, params_, tau_);
      if (!hit) continue;
      std::vector<Index> ok;
      for (Index l : hit->candidates)
        if (contains_bin(l, bin)) ok.push_back(l);
      if (ok.size() > 1) {
        std::vector<Index> kept;
        for (Index l : ok)
          if (singleton_consistent(l, hit->magnitude, bin)) kept.push_back(l);
        ok.swap(kept);
      }
      if (ok.size() > 1) {
        // Periodic mode: l and l + n/2 give identical singleton measurements.
        // Decided later by a bin that only one of them fits.
        pending_.push_back({hit->magnitude, std::move(ok)});
        continue;
      }
      if (ok.size() != 1) continue;
      exhausted_[bin - 1] = 1;
      if (id_of_.count(ok[0])) continue;  // another singleton bin of the same ball
      color(ok[0], Complex(hit->magnitude, 0.0), std::nullopt);
    }
    note_state();
  }

  // Unicolor phase 2: bins with exactly two discovered balls in different components.
  void merge_doubletons() {
    do {
      merge_doubletons_once();
    } while (!pending_.empty() && resolve_pending(true));
    note_state();
  }

  void merge_doubletons_once() {
    for (std::size_t bin = 1; bin <= meas_.num_bins(); ++bin) {
      auto& d = disc_[bin - 1];
      if (exhausted_[bin - 1] || d.size() != 2) continue;
      if (forest_.find(d[0]) == forest_.find(d[1])) continue;
      try_mergeable(bin);
    }
  }

  // Settles ambiguous singletons. A candidate is confirmed by a bin where it
  // alone merges with a single known component, and ruled out by a bin of
  // its own that is empty or already explained. With `allow_new` a lone
  // survivor starts its own component.
  bool resolve_pending(bool allow_new) {
    bool changed = false;
    std::vector<std::vector<std::size_t>> bins;
    for (std::size_t i = 0; i < pending_.size();) {
      auto& pd = pending_[i];
      const std::size_t nc = pd.cands.size();
      bool drop = std::any_of(pd.cands.begin(), pd.cands.end(),
                              [this](Index l) { return id_of_.count(l) > 0; });
      bins.assign(nc, {});
      for (std::size_t c = 0; c < nc && !drop; ++c) ens_.bins_of(pd.cands[c], bins[c]);
      std::vector<char> out(nc, 0);
      // (bin, candidate, value in the root frame, root) for every merge that fits
      std::vector<std::tuple<std::size_t, std::size_t, Complex, Id>> merges;
      for (std::size_t c = 0; c < nc && !drop; ++c) {
        for (auto b : bins[c]) {
          bool shared = false;
          for (std::size_t o = 0; o < nc; ++o)
            shared = shared ||
                     (o != c && std::find(bins[o].begin(), bins[o].end(), b) != bins[o].end());
          const auto& y = meas_.bins[b - 1];
          Id r0 = 0;
          Id r1 = 0;
          const int comps = count_components(b, r0, r1);
          if (!shared && comps == 0 && max4(y) <= tau_ * pd.magnitude) {
            out[c] = 1;
            break;
          }
          if (comps != 1) continue;
          gather(b, r0, known_a_);
          if (!shared && explained(b, known_a_)) {
            out[c] = 1;
            break;
          }
          const KnownBall lone{pd.cands[c], Complex(pd.magnitude, 0.0)};
          ++calls_;
          const auto rot = process_mergeable(y, known_a_, std::span<const KnownBall>(&lone, 1),
                                             params_, tau_);
          if (rot) merges.emplace_back(b, c, *rot * pd.magnitude, r0);
        }
      }
      // A bin where two candidates both fit decides nothing.
      const std::tuple<std::size_t, std::size_t, Complex, Id>* pick = nullptr;
      for (const auto& m : merges) {
        const bool unique = std::none_of(merges.begin(), merges.end(), [&](const auto& o) {
          return std::get<0>(o) == std::get<0>(m) && std::get<1>(o) != std::get<1>(m);
        });
        if (unique && !out[std::get<1>(m)]) {
          pick = &m;
          break;
        }
      }
      std::size_t survivors = 0;
      std::size_t last = 0;
      for (std::size_t c = 0; c < nc; ++c)
        if (!out[c]) {
          ++survivors;
          last = c;
        }
      if (!drop && pick) {
        color(pd.cands[std::get<1>(*pick)], std::get<2>(*pick), std::get<3>(*pick));
        changed = drop = true;
      } else if (!drop && survivors == 1 && allow_new) {
        color(pd.cands[last], Complex(pd.magnitude, 0.0), std::nullopt);
        changed = drop = true;
      }
      if (drop || survivors == 0) {
        pending_[i] = std::move(pending_.back());
        pending_.pop_back();
      } else {
        ++i;
      }
    }
    return changed;
  }

  // One Gauss-Seidel pass. Returns whether anything changed.
  bool sweep(bool allow_merge) {
    bool changed = false;
    for (std::size_t bin = 1; bin <= meas_.num_bins(); ++bin) {
      if (exhausted_[bin - 1] || disc_[bin - 1].empty()) continue;
      Id r0 = 0;
      Id r1 = 0;
      const int comps = count_components(bin, r0, r1);
      if (comps == 1) {
        changed |= try_resolvable(bin, r0);
      } else if (comps == 2 && allow_merge) {
        changed |= try_mergeable(bin);
      }
    }
    if (!pending_.empty()) changed |= resolve_pending(allow_merge);
    note_state();
    return changed;
  }

  // Largest component; ties go to the one holding the smallest signal index.
  std::optional<Id> largest_root() {
    if (forest_.size() == 0) return std::nullopt;
    std::vector<std::uint32_t> size(forest_.size(), 0);
    std::vector<Index> min_idx(forest_.size(), ~Index{0});
    for (Id v = 0; v < forest_.size(); ++v) {
      const Id r = forest_.find(v);
      ++size[r];
      min_idx[r] = std::min(min_idx[r], forest_.index(v));
    }
    Id best = 0;
    bool have = false;
    for (Id r = 0; r < forest_.size(); ++r) {
      if (size[r] == 0) continue;
      if (!have || size[r] > size[best] || (size[r] == size[best] && min_idx[r] < min_idx[best])) {
        best = r;
        have = true;
      }
    }
    return best;
  }

  std::size_t component_size(Id root) { return forest_.component_size(root); }

  // Keeps only `root`'s component and rebuilds bin bookkeeping.
  Id prune_to(Id root) {
    root = forest_.find(root);
    std::vector<std::pair<Index, Complex>> keep;
    std::vector<Index> order;
    for (Index l : order_) {
      const Id v = id_of_.at(l);
      if (forest_.find(v) == root) {
        keep.emplace_back(l, forest_.value(v));
        order.push_back(l);
      }
    }
    forest_.clear();
    id_of_.clear();
    for (auto& d : disc_) d.clear();
    disc_entries_ = 0;
    std::fill(exhausted_.begin(), exhausted_.end(), 0);
    order_.clear();
    std::optional<Id> new_root;
    for (const auto& [l, v] : keep) {
      const Id id = color(l, v, new_root);
      if (!new_root) new_root = id;
    }
    note_state();
    return *new_root;
  }

  DecodeResult result(std::optional<Id> root) {
    DecodeResult res;
    res.processor_calls = calls_;
    res.peak_state_elements = peak_;
    if (root) {
      const Id r = forest_.find(*root);
      for (Index l : order_) {
        const Id v = id_of_.at(l);
        if (forest_.find(v) != r) continue;
        res.coloring_order.push_back(l);
        res.recovered.push_back({l, forest_.value(v)});
      }
      std::sort(res.recovered.begin(), res.recovered.end(),
                [](const Component& x, const Component& y) { return x.index < y.index; });
    }
    const std::size_t got = res.recovered.size();
    if (K_ == 0) {
      res.fraction_recovered = 1.0;
      res.status = got == 0 ? DecodeStatus::FullRecovery : DecodeStatus::PartialRecovery;
    } else {
      res.fraction_recovered = static_cast<double>(got) / static_cast<double>(K_);
      res.status = got >= K_  ? DecodeStatus::FullRecovery
                   : got > 0 ? DecodeStatus::PartialRecovery
                             : DecodeStatus::Failure;
    }
    return res;
  }

 private:
  bool contains_bin(Index l, std::size_t bin) {
    ens_.bins_of(l, scratch_bins_);
    return std::find(scratch_bins_.begin(), scratch_bins_.end(), bin) != scratch_bins_.end();
  }

  // For ambiguous singleton locations: every other bin of l must be nonempty,
  // and any of them showing a singleton signature must describe the same ball.
  bool singleton_consistent(Index l, double mag, std::size_t bin) {
    ens_.bins_of(l, scratch_bins_);
    for (auto b : scratch_bins_) {
      if (b == bin) continue;
      const auto& y = meas_.bins[b - 1];
      const double ym = max4(y);
      if (ym <= tau_ * mag) return false;
      const bool sig = y[0] > 0.0 && std::abs(y[0] - y[1]) <= tau_ * y[0] &&
                       std::abs(y[0] - y[3]) <= tau_ * y[0];
      if (!sig) continue;
      if (std::abs(y[0] - mag) > tau_ * std::max(y[0], mag)) return false;
      const double c = std::abs(std::cos(params_.phase(l)));
      if (std::abs(y[2] - 2.0 * mag * c) > tau_ * ym) return false;
    }
    return true;
  }

  Id color(Index l, Complex value, std::optional<Id> root) {
    const Id id = root ? forest_.add_to(*root, l, value) : forest_.add(l, value);
    id_of_.emplace(l, id);
    order_.push_back(l);
    ens_.bins_of(l, scratch_bins_);
    for (auto b : scratch_bins_) disc_[b - 1].push_back(id);
    disc_entries_ += scratch_bins_.size();
    return id;
  }

  int count_components(std::size_t bin, Id& r0, Id& r1) {
    int n = 0;
    for (Id v : disc_[bin - 1]) {
      const Id r = forest_.find(v);
      if (n == 0) {
        r0 = r;
        n = 1;
      } else if (r != r0) {
        if (n == 1) {
          r1 = r;
          n = 2;
        } else if (r != r1) {
          return 3;
        }
      }
    }
    return n;
  }

  void gather(std::size_t bin, Id root, std::vector<KnownBall>& out) {
    out.clear();
    for (Id v : disc_[bin - 1])
      if (forest_.find(v) == root) out.push_back({forest_.index(v), forest_.value(v)});
  }

  bool explained(std::size_t bin, std::span<const KnownBall> known) {
    const auto s = modulated_sums(known, params_);
    const auto& y = meas_.bins[bin - 1];
    return matches(abs4(s), y, std::max(max4(y), 2.0 * total_magnitude(known)), tau_);
  }

  bool try_resolvable(std::size_t bin, Id root) {
    gather(bin, root, known_a_);
    if (explained(bin, known_a_)) {
      exhausted_[bin - 1] = 1;
      return false;
    }
    ++calls_;
    const auto hits = resolvable_candidates(meas_.bins[bin - 1], known_a_, params_, tau_);
    const ResolvableHit* pick = nullptr;
    for (const auto& h : hits) {
      if (id_of_.count(h.index) || !contains_bin(h.index, bin)) continue;
      if (pick) return false;  // ambiguous
      pick = &h;
    }
    if (!pick) return false;
    color(pick->index, pick->value, root);
    return true;
  }

  bool try_mergeable(std::size_t bin) {
    Id r0 = 0;
    Id r1 = 0;
    if (count_components(bin, r0, r1) != 2) return false;
    gather(bin, r0, known_a_);
    gather(bin, r1, known_b_);
    ++calls_;
    const auto rot = process_mergeable(meas_.bins[bin - 1], known_a_, known_b_, params_, tau_);
    if (!rot) return false;
    forest_.unite(r0, r1, *rot);
    exhausted_[bin - 1] = 1;
    return true;
  }

  void note_state() {
    const std::size_t s = forest_.size() + id_of_.size() + disc_entries_ + 2 * disc_.size();
    peak_ = std::max(peak_, s);
  }

  const MeasurementSet& meas_;
  const CodeEnsemble& ens_;
  const ModulationParams& params_;
  std::size_t K_;
  double tau_;
  std::size_t max_sweeps_ = 0;

  ColorForest forest_;
  std::unordered_map<Index, Id> id_of_;
  std::vector<std::vector<Id>> disc_;
  std::vector<char> exhausted_;
  std::vector<Index> order_;
  std::size_t disc_entries_ = 0;
  std::size_t calls_ = 0;
  std::size_t peak_ = 0;

  struct Pending {
    double magnitude;
    std::vector<Index> cands;
  };
  std::vector<Pending> pending_;

  std::vector<std::size_t> scratch_bins_;
  std::vector<KnownBall> known_a_;
  std::vector<KnownBall> known_b_;
};

}  // namespace

DecodeResult decode_unicolor(const MeasurementSet& meas, const CodeEnsemble& ensemble,
                             std::size_t K_hint, const DecodeOptions& options) {
  Engine e(meas, ensemble, K_hint, options);
  e.singletons();
  e.merge_doubletons();
  std::size_t iterations = 2;
  auto root = e.largest_root();
  std::size_t giant = 0;
  std::vector<std::size_t> per_sweep;
  if (root) {
    root = e.prune_to(*root);
    giant = e.component_size(*root);
    for (std::size_t s = 0; s < e.max_sweeps(); ++s) {
      if (K_hint && e.component_size(*root) >= K_hint) break;
      const bool changed = e.sweep(false);
      ++iterations;
      per_sweep.push_back(e.component_size(*root));
      if (!changed) break;
    }
  }
  DecodeResult res = e.result(root);
  res.iterations = iterations;
  res.giant_after_merge = giant;
  res.colored_after_sweep = std::move(per_sweep);
  return res;
}

DecodeResult decode_multicolor(const MeasurementSet& meas, const CodeEnsemble& ensemble,
                               std::size_t K_hint, const DecodeOptions& options) {
  Engine e(meas, ensemble, K_hint, options);
  e.singletons();
  std::size_t iterations = 1;
  std::vector<std::size_t> per_sweep;
  for (std::size_t s = 0; s < e.max_sweeps(); ++s) {
    auto r = e.largest_root();
    if (!r || (K_hint && e.component_size(*r) >= K_hint)) break;
    const bool changed = e.sweep(true);
    ++iterations;
    per_sweep.push_back(e.component_size(*e.largest_root()));
    if (!changed) break;
  }
  DecodeResult res = e.result(e.largest_root());
  res.iterations = iterations;
  res.colored_after_sweep = std::move(per_sweep);
  return res;
}

}  // namespace phasecode
