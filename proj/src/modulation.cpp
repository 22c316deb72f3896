#include "ccdas/modulation.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace ccdas {

ProbeFrame build_pdm_bpsk_frame(const GolaySet& set, int n_sep, double f_s) {
  if (n_sep < 0) throw std::invalid_argument("n_sep must be >= 0");
  if (f_s <= 0) throw std::invalid_argument("symbol rate must be positive");
  const int n = set.length();
  ProbeFrame f;
  f.scheme = Scheme::pdm_bpsk;
  f.n_g = n;
  f.n_sep = n_sep;
  f.f_s = f_s;
  f.e_tx.assign(2 * (n + n_sep), 0.0);
  f.e_ty.assign(2 * (n + n_sep), 0.0);
  for (int i = 0; i < n; ++i) {
    f.e_tx[i] = set.a1[i];
    f.e_ty[i] = set.a2[i];
    f.e_tx[n + n_sep + i] = set.b1[i];
    f.e_ty[n + n_sep + i] = set.b2[i];
  }
  return f;
}

ProbeFrame build_pdm_qpsk_frame(const GolaySet& set, double f_s) {
  if (f_s <= 0) throw std::invalid_argument("symbol rate must be positive");
  const int n = set.length();
  const double s = std::sqrt(2.0) / 2.0;  // unit symbol power
  ProbeFrame f;
  f.scheme = Scheme::pdm_qpsk;
  f.n_g = n;
  f.n_sep = 0;
  f.f_s = f_s;
  f.e_tx.resize(n);
  f.e_ty.resize(n);
  for (int i = 0; i < n; ++i) {
    f.e_tx[i] = s * std::complex<double>(set.a1[i], set.b1[i]);
    f.e_ty[i] = s * std::complex<double>(set.a2[i], set.b2[i]);
  }
  return f;
}

int zero_correlation_zone(const ProbeFrame& frame) {
  if (frame.scheme != Scheme::pdm_bpsk)
    throw std::invalid_argument(
        "zero_correlation_zone is defined for PDM-BPSK frames only");
  return frame.n_g / 2 + frame.n_sep;
}

void write_frame_csv(std::ostream& os, const ProbeFrame& frame) {
  os << "index,e_tx_re,e_tx_im,e_ty_re,e_ty_im\n";
  char buf[160];
  for (int i = 0; i < frame.length(); ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", i,
                  frame.e_tx[i].real(), frame.e_tx[i].imag(),
                  frame.e_ty[i].real(), frame.e_ty[i].imag());
    os << buf;
  }
}

}  // namespace ccdas
