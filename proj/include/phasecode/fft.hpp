#pragma once

#include <span>
#include <vector>

#include "phasecode/core.hpp"

namespace phasecode {

/// Unnormalized forward DFT: X_k = sum_t x_t e^{-2 pi i k t / n}. Any n.
std::vector<Complex> dft(std::span<const Complex> x);

/// Inverse of dft (includes the 1/n factor).
std::vector<Complex> idft(std::span<const Complex> X);

}  // namespace phasecode
