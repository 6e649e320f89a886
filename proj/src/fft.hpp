#pragma once

#include <complex>
#include <span>

namespace fgrover::detail {

enum class FftDirection { forward, backward };

/// In-place unnormalized FFT (FFTW sign convention: forward uses exp(-2 pi i jk/n)).
/// Plans are cached per (length, direction) and shared across threads.
void fft_inplace(std::span<std::complex<double>> data, FftDirection direction);

} // namespace fgrover::detail
