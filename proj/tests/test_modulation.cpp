#include "doctest.h"

#include <cmath>
#include <complex>
#include <sstream>

#include "ccdas/codes.hpp"
#include "ccdas/correlation.hpp"
#include "ccdas/modulation.hpp"

using namespace ccdas;

TEST_CASE("BPSK frame lays out a then b per polarization with guard gaps") {
  const GolaySet s = generate_golay_set(4);
  const ProbeFrame f = build_pdm_bpsk_frame(s, 2, 10e6);
  REQUIRE(f.length() == 12);
  CHECK(f.period_seconds() == doctest::Approx(1.2e-6));
  for (int i = 0; i < 4; ++i) {
    CHECK(f.e_tx[i] == std::complex<double>(s.a1[i]));
    CHECK(f.e_ty[i] == std::complex<double>(s.a2[i]));
    CHECK(f.e_tx[6 + i] == std::complex<double>(s.b1[i]));
    CHECK(f.e_ty[6 + i] == std::complex<double>(s.b2[i]));
  }
  for (int i : {4, 5, 10, 11}) {
    CHECK(f.e_tx[i] == std::complex<double>(0.0));
    CHECK(f.e_ty[i] == std::complex<double>(0.0));
  }
}

TEST_CASE("QPSK frame packs both sequences into unit-modulus symbols") {
  const GolaySet s = generate_golay_set(4);
  const ProbeFrame f = build_pdm_qpsk_frame(s, 40e6);
  REQUIRE(f.length() == 4);
  const double h = std::sqrt(2.0) / 2.0;
  CHECK(f.e_tx[0] == std::complex<double>(h, -h));
  CHECK(f.e_ty[0] == std::complex<double>(-h, h));
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(f.e_tx[i]) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(f.e_ty[i]) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(f.correlation_norm() == 4.0);
  CHECK(build_pdm_bpsk_frame(s, 0, 1e6).correlation_norm() == 8.0);
}

TEST_CASE("zero-correlation zone half-width is n_g/2 + n_sep") {
  const GolaySet s = generate_golay_set(512);
  CHECK(zero_correlation_zone(build_pdm_bpsk_frame(s, 0, 1e6)) == 256);
  CHECK(zero_correlation_zone(build_pdm_bpsk_frame(s, 40, 1e6)) == 296);
  CHECK(zero_correlation_zone(build_pdm_bpsk_frame(generate_golay_set(4), 3, 1e6)) == 5);
  CHECK_THROWS_AS(zero_correlation_zone(build_pdm_qpsk_frame(s, 1e6)),
                  std::invalid_argument);
}

TEST_CASE("BPSK frame correlations are an exact delta inside the zone") {
  // Direct correlation of integer symbols is exact in doubles, so the checks
  // below are equality, not tolerance.
  for (auto [n, nsep] : {std::pair{64, 0}, {64, 5}, {256, 16}, {1024, 0}}) {
    const ProbeFrame f = build_pdm_bpsk_frame(generate_golay_set(n), nsep, 1e6);
    const int period = f.length();
    const int zone = zero_correlation_zone(f);
    const cvec ax = periodic_correlate_direct(f.e_tx, f.e_tx);
    const cvec ay = periodic_correlate_direct(f.e_ty, f.e_ty);
    const cvec cr = periodic_correlate_direct(f.e_tx, f.e_ty);
    CHECK(ax[0] == std::complex<double>(2.0 * n));
    CHECK(ay[0] == std::complex<double>(2.0 * n));
    for (int k = -(zone - 1); k < zone; ++k) {
      const int i = (k % period + period) % period;
      if (k != 0) {
        CHECK(ax[i] == std::complex<double>(0.0));
        CHECK(ay[i] == std::complex<double>(0.0));
      }
      CHECK(cr[i] == std::complex<double>(0.0));
    }
  }
}

TEST_CASE("QPSK frame correlations vanish on the even / mod-4 lag grids") {
  for (int n : {8, 64, 256, 1024}) {
    const ProbeFrame f = build_pdm_qpsk_frame(generate_golay_set(n), 1e6);
    const cvec ax = periodic_correlate_direct(f.e_tx, f.e_tx);
    const cvec ay = periodic_correlate_direct(f.e_ty, f.e_ty);
    const cvec cr = periodic_correlate_direct(f.e_tx, f.e_ty);
    CHECK(ax[0].real() == doctest::Approx(n).epsilon(1e-13));
    CHECK(ay[0].real() == doctest::Approx(n).epsilon(1e-13));
    double even = 0, mod4 = 0, odd = 0;
    for (int k = 1; k < n; ++k) {
      if (k % 2 == 0) even = std::max(even, std::max(std::abs(ax[k]), std::abs(ay[k])));
      else odd = std::max(odd, std::abs(ax[k]));
      if (k % 4 == 0) mod4 = std::max(mod4, std::abs(cr[k]));
    }
    mod4 = std::max(mod4, std::abs(cr[0]));
    CHECK(even < 1e-10);
    CHECK(mod4 < 1e-10);
    // The residual terms at odd lags are genuinely there; a delay off the
    // mod-4 grid is not recoverable exactly.
    CHECK(odd > 1.0);
  }
}

TEST_CASE("frame CSV dump is stable") {
  const ProbeFrame f = build_pdm_bpsk_frame(generate_golay_set(4), 0, 1e6);
  std::ostringstream os;
  write_frame_csv(os, f);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "index,e_tx_re,e_tx_im,e_ty_re,e_ty_im");
  std::getline(is, line);
  CHECK(line == "0,1,0,-1,0");
}

TEST_CASE("frame builders reject bad arguments") {
  const GolaySet s = generate_golay_set(8);
  CHECK_THROWS_AS(build_pdm_bpsk_frame(s, -1, 1e6), std::invalid_argument);
  CHECK_THROWS_AS(build_pdm_bpsk_frame(s, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_pdm_qpsk_frame(s, -5.0), std::invalid_argument);
}
