#pragma once
// Dual-polarization probing frames built from a Golay set.
//
// PDM-BPSK sends the two sequences of each pair time-multiplexed with an
// optional guard gap; the frame autocorrelation is a clean delta inside a
// zero-correlation zone of half-width n_g/2 + n_sep.
//
// PDM-QPSK packs each pair into one complex symbol stream, e = (a + i*b)/sqrt(2),
// so the frame is only n_g symbols long and has unit-modulus symbols.  Its
// correlation is a delta plus the residual terms g1 (vanishes at even lags)
// and g3 (vanishes at lags divisible by four): echo delays that land on
// multiples of four symbols are estimated exactly.
#include <complex>
#include <iosfwd>
#include <vector>

#include "ccdas/codes.hpp"

namespace ccdas {

enum class Scheme { pdm_bpsk, pdm_qpsk };

struct ProbeFrame {
  std::vector<std::complex<double>> e_tx, e_ty;
  Scheme scheme = Scheme::pdm_qpsk;
  int n_g = 0;     // underlying code length
  int n_sep = 0;   // guard symbols after each sequence (BPSK only)
  double f_s = 0;  // symbol rate, Hz

  int length() const { return static_cast<int>(e_tx.size()); }
  double period_seconds() const { return length() / f_s; }
  // peak of the frame correlation: 2*n_g times the constellation power
  double correlation_norm() const {
    return scheme == Scheme::pdm_qpsk ? double(n_g) : 2.0 * n_g;
  }
};

ProbeFrame build_pdm_bpsk_frame(const GolaySet& set, int n_sep, double f_s);
ProbeFrame build_pdm_qpsk_frame(const GolaySet& set, double f_s);

// Half-width of the BPSK zero-correlation zone (exclusive bound on |lag|).
// Throws for QPSK frames, which have no guard-based zone.
int zero_correlation_zone(const ProbeFrame& frame);

// CSV dump: index,e_tx_re,e_tx_im,e_ty_re,e_ty_im
void write_frame_csv(std::ostream& os, const ProbeFrame& frame);

}  // namespace ccdas
