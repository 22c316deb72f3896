#pragma once
// Jones-matrix estimation from received IQ samples, determinant-phase
// extraction, and assembly of the per-sensor phase map.
#include <cmath>
#include <complex>
#include <vector>

#include "ccdas/channel.hpp"
#include "ccdas/jones.hpp"
#include "ccdas/modulation.hpp"

namespace ccdas {

struct JonesEstimateFrame {
  std::vector<std::pair<int, JonesMatrix>> taps;  // (delay in symbols, h')
  int frame_index = 0;
  double timestamp_s = 0.0;
};

struct PhaseMap {
  // One row per sensor, one column per code period, radians, unwrapped in time.
  std::vector<std::vector<double>> phases;
  int reference_index = 0;
  double t_code_s = 0.0;
  // Per-row count of unwrap steps whose increment came close to the mod-pi
  // limit; nonzero values mean the row can no longer be trusted.
  std::vector<int> near_limit_counts;

  std::size_t n_rows() const { return phases.size(); }
  std::size_t n_frames() const { return phases.empty() ? 0 : phases[0].size(); }
  double f_max_hz() const { return 1.0 / (2.0 * t_code_s); }
};

// Reduce x to [-pi/2, pi/2): the determinant phase is only defined mod pi.
inline double wrap_mod_pi(double x) {
  return x - M_PI * std::floor(x / M_PI + 0.5);
}

// Fraction of pi beyond which an unwrap increment counts as near the limit.
inline constexpr double kNearLimitFraction = 0.45;

// Throws std::invalid_argument unless the delays are estimable under the
// frame's scheme: sorted, inside one period, on the mod-4 grid for PDM-QPSK,
// inside the zero-correlation zone for PDM-BPSK.
void check_estimation_delays(const ProbeFrame& frame,
                             const std::vector<int>& delays);

// Estimate for one code period starting at rx/ry (frame.length() samples):
// the four received-vs-transmitted periodic correlations sampled at each
// delay, normalized so a static channel returns the tap matrix itself.
JonesEstimateFrame estimate_frame(const std::complex<double>* rx,
                                  const std::complex<double>* ry,
                                  const ProbeFrame& frame,
                                  const std::vector<int>& delays,
                                  int frame_index);

// All whole periods of a capture, frames processed in parallel.
std::vector<JonesEstimateFrame> estimate_jones(const IQCapture& capture,
                                               const ProbeFrame& frame,
                                               const std::vector<int>& delays);

// Same contract via full FFT correlation profiles; slower, kept as the
// cross-check route for the delay-sampled sums above.
std::vector<JonesEstimateFrame> estimate_jones_fft(const IQCapture& capture,
                                                   const ProbeFrame& frame,
                                                   const std::vector<int>& delays);

// Half the argument of det(h); the dual-pass phase is defined modulo pi.
double extract_phase(const JonesMatrix& h);

// Reference-row subtraction followed by per-row temporal unwrap under the
// assumption that true increments stay below pi/2 in magnitude.
PhaseMap build_phase_map(const std::vector<JonesEstimateFrame>& estimates,
                         int reference_index);

// Delays whose correlation intensity (summed over the four estimate entries)
// lies within threshold_db of the strongest, averaged over whole frames.
// Scans the estimable lags only: the mod-4 grid under PDM-QPSK, the
// zero-correlation zone under PDM-BPSK.
std::vector<int> detect_peaks(const IQCapture& capture, const ProbeFrame& frame,
                              double threshold_db);

}  // namespace ccdas
