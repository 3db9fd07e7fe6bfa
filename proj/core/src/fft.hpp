#ifndef SUBLIMIT_SRC_FFT_HPP
#define SUBLIMIT_SRC_FFT_HPP

#include <span>

#include "sublimit/signal.hpp"

namespace sublimit::detail {

enum class FftSign { kNegative, kPositive };

/// out[j] = sum_k in[k] exp(sign * 2 pi i j k / n). Unnormalized.
/// Safe to call concurrently; plans are cached per (n, sign).
void dft(std::span<const Complex> in, std::span<Complex> out, FftSign sign);

}  // namespace sublimit::detail

#endif  // SUBLIMIT_SRC_FFT_HPP
