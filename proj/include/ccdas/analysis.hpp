#pragma once
// Sensing metrics over phase maps: temporal stability, spectra, sensitivity,
// crosstalk and dynamic-range linearity.
#include <optional>
#include <vector>

#include "ccdas/receiver.hpp"

namespace ccdas {

struct PhaseStdResult {
  std::vector<double> per_row_rad;
  double mean_rad = 0.0;  // excludes the reference row
};

// Sample standard deviation of each row over the first `window_s` of the map.
PhaseStdResult phase_std(const PhaseMap& map, double window_s);

struct PsdSeries {
  std::vector<double> freq_hz;
  std::vector<double> density;  // one-sided, rad^2/Hz
  double bin_hz = 0.0;
  double f_max_hz = 0.0;
};

// Single flat-window periodogram of one row, mean removed, one-sided and
// scaled so that sum(density) * bin equals the row's variance.
PsdSeries psd(const PhaseMap& map, int row);

// Index of the strongest non-DC bin.
int peak_bin(const PsdSeries& s);

// Peak-to-peak amplitude of a bin-centered tone recovered from one PSD bin.
double recovered_tone_pp(const PhaseMap& map, int row, double tone_hz);

// Noise floor density in rad/sqrt(Hz): square root of the median off-tone bin
// density, the tone bin and its two neighbors on each side excluded. Throws
// when the tone does not rise at least 10 dB above that median.
double sensitivity(const PhaseMap& map, int row, double tone_hz);

// One row per fiber segment: row 0 kept, row k replaced by row k - row k-1.
PhaseMap spatial_difference(const PhaseMap& map);

// Tone power of the strongest unexcited row relative to the excited row, in
// dB, computed on the spatially differenced map (more negative is better).
double crosstalk_rejection(const PhaseMap& map, int excited_row, double tone_hz);

struct DynamicRangeFit {
  double slope = 0.0;
  double r_squared = 0.0;
  double range_db = 0.0;  // widest contiguous span with residuals < 0.5 dB
  int points_used = 0;    // points where the tone was dominant
};

// Log-log fit of recovered peak-to-peak phase against drive amplitude over a
// sweep of captures of the same scene.
DynamicRangeFit dynamic_range(const std::vector<PhaseMap>& maps,
                              const std::vector<double>& amplitudes_vpp,
                              int row, double tone_hz);

struct MetricReport {
  int frames = 0;
  double t_code_s = 0.0;
  double f_max_hz = 0.0;
  double std_window_s = 0.0;
  std::vector<double> per_fbg_std_rad;
  double mean_std_rad = 0.0;
  std::vector<int> near_limit_counts;
  std::optional<double> crosstalk_db;
  std::optional<double> sensitivity_rad_per_sqrt_hz;
};

}  // namespace ccdas
