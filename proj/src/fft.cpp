#include "phasecode/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace phasecode {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex planner_mutex;

std::vector<Complex> transform(std::span<const Complex> in, int sign) {
  const int n = static_cast<int>(in.size());
  std::vector<Complex> out(in.begin(), in.end());
  if (n == 0) return out;
  auto* data = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    plan = fftw_plan_dft_1d(n, data, data, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

std::vector<Complex> dft(std::span<const Complex> x) { return transform(x, FFTW_FORWARD); }

std::vector<Complex> idft(std::span<const Complex> X) {
  auto out = transform(X, FFTW_BACKWARD);
  const double s = out.empty() ? 1.0 : 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= s;
  return out;
}

}  // namespace phasecode
