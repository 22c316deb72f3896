#include "ccdas/correlation.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace ccdas {

namespace {

// FFTW plan creation is not thread safe; execution on plan-owned buffers is
// serialized here too since the transform route only runs outside the
// per-frame hot path.
std::mutex fftw_mutex;

struct FftBuffers {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd{}, bwd{};
  int n = 0;

  void ensure(int len) {
    if (len == n) return;
    release();
    n = len;
    in = fftw_alloc_complex(n);
    out = fftw_alloc_complex(n);
    fwd = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  void release() {
    if (!n) return;
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(in);
    fftw_free(out);
    n = 0;
  }
  ~FftBuffers() { release(); }
};

cvec periodic_via_fft(std::span<const std::complex<double>> a,
                      std::span<const std::complex<double>> b) {
  const int n = static_cast<int>(a.size());
  std::lock_guard<std::mutex> lock(fftw_mutex);
  static FftBuffers fb;
  fb.ensure(n);

  cvec fa(n), fbv(n);
  for (int i = 0; i < n; ++i) {
    fb.in[i][0] = a[i].real();
    fb.in[i][1] = a[i].imag();
  }
  fftw_execute(fb.fwd);
  for (int i = 0; i < n; ++i) fa[i] = {fb.out[i][0], fb.out[i][1]};
  for (int i = 0; i < n; ++i) {
    fb.in[i][0] = b[i].real();
    fb.in[i][1] = b[i].imag();
  }
  fftw_execute(fb.fwd);
  for (int i = 0; i < n; ++i) fbv[i] = {fb.out[i][0], fb.out[i][1]};

  // corr(a,b)(k) = IDFT[ DFT(a) * conj(DFT(b)) ] / n
  for (int i = 0; i < n; ++i) {
    const std::complex<double> p = fa[i] * std::conj(fbv[i]);
    fb.in[i][0] = p.real();
    fb.in[i][1] = p.imag();
  }
  fftw_execute(fb.bwd);
  cvec out(n);
  for (int i = 0; i < n; ++i)
    out[i] = std::complex<double>(fb.out[i][0], fb.out[i][1]) / double(n);
  return out;
}

}  // namespace

cvec periodic_correlate_direct(std::span<const std::complex<double>> a,
                               std::span<const std::complex<double>> b) {
  const int n = static_cast<int>(a.size());
  if (n == 0 || b.size() != a.size())
    throw std::invalid_argument("periodic correlation needs equal nonzero lengths");
  cvec out(n);
  for (int k = 0; k < n; ++k) {
    std::complex<double> s = 0.0;
    for (int m = 0; m < n; ++m) s += a[m] * std::conj(b[(m - k + n) % n]);
    out[k] = s;
  }
  return out;
}

cvec periodic_correlate_fft(std::span<const std::complex<double>> a,
                            std::span<const std::complex<double>> b) {
  if (a.empty() || b.size() != a.size())
    throw std::invalid_argument("periodic correlation needs equal nonzero lengths");
  return periodic_via_fft(a, b);
}

cvec periodic_correlate(std::span<const std::complex<double>> a,
                        std::span<const std::complex<double>> b) {
  if (static_cast<int>(a.size()) < kDirectCorrelationLimit)
    return periodic_correlate_direct(a, b);
  return periodic_correlate_fft(a, b);
}

cvec forward_dft(std::span<const std::complex<double>> x) {
  const int n = static_cast<int>(x.size());
  if (n == 0) throw std::invalid_argument("empty sequence");
  std::lock_guard<std::mutex> lock(fftw_mutex);
  static FftBuffers fb;
  fb.ensure(n);
  for (int i = 0; i < n; ++i) {
    fb.in[i][0] = x[i].real();
    fb.in[i][1] = x[i].imag();
  }
  fftw_execute(fb.fwd);
  cvec out(n);
  for (int i = 0; i < n; ++i) out[i] = {fb.out[i][0], fb.out[i][1]};
  return out;
}

cvec aperiodic_correlate_direct(std::span<const std::complex<double>> a,
                                std::span<const std::complex<double>> b) {
  const int la = static_cast<int>(a.size());
  const int lb = static_cast<int>(b.size());
  if (la == 0 || lb == 0) throw std::invalid_argument("empty sequence");
  cvec out(la + lb - 1);
  for (int k = -(lb - 1); k < la; ++k) {
    std::complex<double> s = 0.0;
    const int n0 = std::max(0, k);
    const int n1 = std::min(la, lb + k);
    for (int n = n0; n < n1; ++n) s += a[n] * std::conj(b[n - k]);
    out[k + lb - 1] = s;
  }
  return out;
}

cvec aperiodic_correlate_fft(std::span<const std::complex<double>> a,
                             std::span<const std::complex<double>> b) {
  const int la = static_cast<int>(a.size());
  const int lb = static_cast<int>(b.size());
  if (la == 0 || lb == 0) throw std::invalid_argument("empty sequence");
  // zero-pad both to the full lag span; the periodic result then carries the
  // aperiodic lags with -(lb-1)..-1 wrapped to the top
  const int n = la + lb - 1;
  cvec pa(n, 0.0), pb(n, 0.0);
  for (int i = 0; i < la; ++i) pa[i] = a[i];
  for (int i = 0; i < lb; ++i) pb[i] = b[i];
  cvec per = periodic_via_fft(pa, pb);
  cvec out(n);
  for (int k = -(lb - 1); k < la; ++k) out[k + lb - 1] = per[(k + n) % n];
  return out;
}

cvec aperiodic_correlate(std::span<const std::complex<double>> a,
                         std::span<const std::complex<double>> b) {
  if (static_cast<int>(std::max(a.size(), b.size())) < kDirectCorrelationLimit)
    return aperiodic_correlate_direct(a, b);
  return aperiodic_correlate_fft(a, b);
}

void periodic_correlate_at(std::span<const std::complex<double>> a,
                           std::span<const std::complex<double>> b,
                           std::span<const int> lags,
                           std::complex<double>* out) {
  const int n = static_cast<int>(a.size());
  if (n == 0 || b.size() != a.size())
    throw std::invalid_argument("periodic correlation needs equal nonzero lengths");
  const double* ap = reinterpret_cast<const double*>(a.data());
  const double* bp = reinterpret_cast<const double*>(b.data());
  for (size_t j = 0; j < lags.size(); ++j) {
    const int d = ((lags[j] % n) + n) % n;
    double sr = 0.0, si = 0.0;
    // n in [0,d): b index n-d+N; n in [d,N): b index n-d -- two contiguous runs
    const double* bw = bp + 2 * (n - d);
    for (int m = 0; m < d; ++m) {
      const double ar = ap[2 * m], ai = ap[2 * m + 1];
      const double br = bw[2 * m], bi = bw[2 * m + 1];
      sr += ar * br + ai * bi;
      si += ai * br - ar * bi;
    }
    const double* bz = bp - 2 * d;
    for (int m = d; m < n; ++m) {
      const double ar = ap[2 * m], ai = ap[2 * m + 1];
      const double br = bz[2 * m], bi = bz[2 * m + 1];
      sr += ar * br + ai * bi;
      si += ai * br - ar * bi;
    }
    out[j] = {sr, si};
  }
}

}  // namespace ccdas
