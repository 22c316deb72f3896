#pragma once
// Fast complex correlation with two independent routes.
//
// The transform route (FFTW) serves long inputs; plain direct summation is
// kept both as the small-input path and as a serial reference the tests hold
// the transform route against (agreement to 1e-12 relative).
#include <complex>
#include <span>
#include <vector>

namespace ccdas {

inline constexpr int kDirectCorrelationLimit = 64;  // below this, direct wins

using cvec = std::vector<std::complex<double>>;

// Periodic correlation, lags 0..N-1: out[k] = sum_n a(n) * conj(b((n-k) mod N))
cvec periodic_correlate_direct(std::span<const std::complex<double>> a,
                               std::span<const std::complex<double>> b);
cvec periodic_correlate_fft(std::span<const std::complex<double>> a,
                            std::span<const std::complex<double>> b);
// Dispatches on kDirectCorrelationLimit.
cvec periodic_correlate(std::span<const std::complex<double>> a,
                        std::span<const std::complex<double>> b);

// Aperiodic correlation, lags -(Lb-1)..(La-1), via zero padding on the
// transform route.
cvec aperiodic_correlate_direct(std::span<const std::complex<double>> a,
                                std::span<const std::complex<double>> b);
cvec aperiodic_correlate_fft(std::span<const std::complex<double>> a,
                             std::span<const std::complex<double>> b);
cvec aperiodic_correlate(std::span<const std::complex<double>> a,
                         std::span<const std::complex<double>> b);

// Unnormalized forward DFT of arbitrary length (spectral analysis helper).
cvec forward_dft(std::span<const std::complex<double>> x);

// Periodic correlation evaluated at selected lags only; O(delays * N) but with
// contiguous inner loops.  This is what the per-frame estimator runs.
void periodic_correlate_at(std::span<const std::complex<double>> a,
                           std::span<const std::complex<double>> b,
                           std::span<const int> lags,
                           std::complex<double>* out);

}  // namespace ccdas
