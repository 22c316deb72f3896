#include "ccdas/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ccdas/correlation.hpp"

namespace ccdas {
namespace {

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  }
  return m;
}

int tone_bin_index(const PsdSeries& s, double tone_hz) {
  const int j = static_cast<int>(std::llround(tone_hz / s.bin_hz));
  if (j < 1 || j >= static_cast<int>(s.density.size()))
    throw std::invalid_argument("tone frequency outside the analysis band");
  return j;
}

// Median density with the tone bin and its +-2 neighbors (and DC) excluded.
double off_tone_median(const PsdSeries& s, int tone_bin) {
  std::vector<double> rest;
  rest.reserve(s.density.size());
  for (int j = 1; j < static_cast<int>(s.density.size()); ++j)
    if (std::abs(j - tone_bin) > 2) rest.push_back(s.density[j]);
  return median(std::move(rest));
}

double tone_bin_power(const PsdSeries& s, int tone_bin) {
  return s.density[tone_bin] * s.bin_hz;
}

}  // namespace

PhaseStdResult phase_std(const PhaseMap& map, double window_s) {
  const std::size_t n_frames = map.n_frames();
  const std::size_t m =
      static_cast<std::size_t>(std::llround(window_s / map.t_code_s));
  if (m < 2 || m > n_frames)
    throw std::invalid_argument("std window must cover 2..n_frames code periods");

  PhaseStdResult out;
  out.per_row_rad.reserve(map.n_rows());
  double acc = 0.0;
  for (std::size_t k = 0; k < map.n_rows(); ++k) {
    const auto& row = map.phases[k];
    const double mean = std::accumulate(row.begin(), row.begin() + m, 0.0) / m;
    double ss = 0.0;
    for (std::size_t f = 0; f < m; ++f) ss += (row[f] - mean) * (row[f] - mean);
    const double sd = std::sqrt(ss / (m - 1));
    out.per_row_rad.push_back(sd);
    if (static_cast<int>(k) != map.reference_index) acc += sd;
  }
  out.mean_rad = map.n_rows() > 1 ? acc / (map.n_rows() - 1) : 0.0;
  return out;
}

PsdSeries psd(const PhaseMap& map, int row) {
  if (row < 0 || static_cast<std::size_t>(row) >= map.n_rows())
    throw std::invalid_argument("row index out of range");
  const std::size_t n = map.n_frames();
  if (n < 64) throw std::invalid_argument("psd needs at least 64 frames");

  const auto& x = map.phases[row];
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  cvec xc(n);
  for (std::size_t i = 0; i < n; ++i) xc[i] = x[i] - mean;
  const cvec spec = forward_dft(xc);

  PsdSeries s;
  const double duration = n * map.t_code_s;
  s.bin_hz = 1.0 / duration;
  s.f_max_hz = map.f_max_hz();
  const std::size_t half = n / 2;
  s.freq_hz.resize(half + 1);
  s.density.resize(half + 1);
  const double scale = duration / (static_cast<double>(n) * n);
  for (std::size_t j = 0; j <= half; ++j) {
    s.freq_hz[j] = j * s.bin_hz;
    double p = std::norm(spec[j]);
    if (j > 0 && !(n % 2 == 0 && j == half)) p += std::norm(spec[n - j]);
    s.density[j] = p * scale;
  }
  return s;
}

int peak_bin(const PsdSeries& s) {
  int best = 1;
  for (int j = 2; j < static_cast<int>(s.density.size()); ++j)
    if (s.density[j] > s.density[best]) best = j;
  return best;
}

double recovered_tone_pp(const PhaseMap& map, int row, double tone_hz) {
  const PsdSeries s = psd(map, row);
  const double p = tone_bin_power(s, tone_bin_index(s, tone_hz));
  return 2.0 * std::sqrt(2.0 * p);
}

double sensitivity(const PhaseMap& map, int row, double tone_hz) {
  const PsdSeries s = psd(map, row);
  const int jt = tone_bin_index(s, tone_hz);
  const double floor = off_tone_median(s, jt);
  if (s.density[jt] < 10.0 * floor)
    throw std::runtime_error("tone not found: peak below 10 dB over the noise median");
  // Periodogram bins of white noise are exponential, so the median sits ln 2
  // below the mean density; divide it back out to report the mean floor.
  return std::sqrt(floor / M_LN2);
}

PhaseMap spatial_difference(const PhaseMap& map) {
  PhaseMap out;
  out.reference_index = map.reference_index;
  out.t_code_s = map.t_code_s;
  out.phases = map.phases;
  out.near_limit_counts = map.near_limit_counts;
  for (std::size_t k = map.n_rows(); k-- > 1;) {
    for (std::size_t f = 0; f < map.n_frames(); ++f)
      out.phases[k][f] -= map.phases[k - 1][f];
    out.near_limit_counts[k] += map.near_limit_counts[k - 1];
  }
  return out;
}

double crosstalk_rejection(const PhaseMap& map, int excited_row, double tone_hz) {
  const PhaseMap diff = spatial_difference(map);
  if (excited_row < 0 || static_cast<std::size_t>(excited_row) >= diff.n_rows())
    throw std::invalid_argument("excited row index out of range");

  const PsdSeries exc = psd(diff, excited_row);
  const int jt = tone_bin_index(exc, tone_hz);
  if (exc.density[jt] < 10.0 * off_tone_median(exc, jt))
    throw std::runtime_error("tone not found: peak below 10 dB over the noise median");
  const double p_exc = tone_bin_power(exc, jt);

  double worst = 0.0;
  for (std::size_t k = 0; k < diff.n_rows(); ++k) {
    if (static_cast<int>(k) == excited_row) continue;
    worst = std::max(worst, tone_bin_power(psd(diff, static_cast<int>(k)), jt));
  }
  return 10.0 * std::log10(worst / p_exc);
}

DynamicRangeFit dynamic_range(const std::vector<PhaseMap>& maps,
                              const std::vector<double>& amplitudes_vpp,
                              int row, double tone_hz) {
  if (maps.size() != amplitudes_vpp.size())
    throw std::invalid_argument("one amplitude per map required");
  if (maps.size() < 5)
    throw std::invalid_argument("dynamic range fit needs at least 5 points");
  const double a0 = amplitudes_vpp.front();
  if (std::all_of(amplitudes_vpp.begin(), amplitudes_vpp.end(),
                  [a0](double a) { return a == a0; }))
    throw std::invalid_argument("degenerate amplitude axis: all values equal");

  // Keep only points where the tone actually dominates the floor.
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const PsdSeries s = psd(maps[i], row);
    const int jt = tone_bin_index(s, tone_hz);
    if (s.density[jt] < 10.0 * off_tone_median(s, jt)) continue;
    lx.push_back(std::log(amplitudes_vpp[i]));
    ly.push_back(std::log(2.0 * std::sqrt(2.0 * tone_bin_power(s, jt))));
  }
  const std::size_t n = lx.size();
  if (n < 5)
    throw std::invalid_argument("dynamic range fit needs at least 5 points above the floor");

  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  DynamicRangeFit fit;
  fit.points_used = static_cast<int>(n);
  fit.slope = sxy / sxx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;

  // Longest run of consecutive points hugging the fit line within 0.5 dB.
  const double to_db = 20.0 / std::log(10.0);
  std::size_t best_lo = 0, best_hi = 0, lo = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    const bool ok =
        i < n &&
        std::abs(to_db * (ly[i] - (my + fit.slope * (lx[i] - mx)))) < 0.5;
    if (!ok) {
      if (i > lo && i - 1 - lo > best_hi - best_lo) {
        best_lo = lo;
        best_hi = i - 1;
      }
      lo = i + 1;
    }
  }
  if (best_hi > best_lo)
    fit.range_db = to_db * (lx[best_hi] - lx[best_lo]);
  return fit;
}

}  // namespace ccdas
