#include "ccdas/receiver.hpp"

#include <algorithm>
#include <stdexcept>

#include "ccdas/correlation.hpp"

namespace ccdas {

void check_estimation_delays(const ProbeFrame& frame,
                             const std::vector<int>& delays) {
  if (delays.empty()) throw std::invalid_argument("no tap delays given");
  const int n = frame.length();
  int prev = -1;
  for (int d : delays) {
    if (d <= prev) throw std::invalid_argument("tap delays must be strictly increasing");
    if (d < 0 || d >= n)
      throw std::invalid_argument("tap delays must lie within one frame period");
    prev = d;
  }
  if (frame.scheme == Scheme::pdm_qpsk) {
    for (int d : delays)
      if (d % 4 != 0)
        throw std::invalid_argument(
            "PDM-QPSK tap delays must be multiples of 4 symbols");
  } else {
    const int zone = zero_correlation_zone(frame);
    if (delays.back() >= zone)
      throw std::invalid_argument(
          "PDM-BPSK tap delays must lie inside the zero-correlation zone");
  }
}

JonesEstimateFrame estimate_frame(const std::complex<double>* rx,
                                  const std::complex<double>* ry,
                                  const ProbeFrame& frame,
                                  const std::vector<int>& delays,
                                  int frame_index) {
  const std::size_t n = frame.length();
  const std::size_t n_d = delays.size();
  const double norm = frame.correlation_norm();

  std::vector<std::complex<double>> cxx(n_d), cxy(n_d), cyx(n_d), cyy(n_d);
  periodic_correlate_at({rx, n}, frame.e_tx, delays, cxx.data());
  periodic_correlate_at({rx, n}, frame.e_ty, delays, cxy.data());
  periodic_correlate_at({ry, n}, frame.e_tx, delays, cyx.data());
  periodic_correlate_at({ry, n}, frame.e_ty, delays, cyy.data());

  JonesEstimateFrame out;
  out.frame_index = frame_index;
  out.timestamp_s = frame_index * frame.period_seconds();
  out.taps.reserve(n_d);
  for (std::size_t i = 0; i < n_d; ++i)
    out.taps.emplace_back(delays[i], JonesMatrix{cxx[i] / norm, cxy[i] / norm,
                                                 cyx[i] / norm, cyy[i] / norm});
  return out;
}

namespace {

std::size_t whole_frames_or_throw(const IQCapture& capture,
                                  const ProbeFrame& frame,
                                  const std::vector<int>& delays) {
  check_estimation_delays(frame, delays);
  const std::size_t n = frame.length();
  const std::size_t n_frames = capture.e_rx.size() / n;
  if (n_frames < 2)
    throw std::invalid_argument("capture must span at least two frame periods");
  return n_frames;
}

}  // namespace

std::vector<JonesEstimateFrame> estimate_jones(const IQCapture& capture,
                                               const ProbeFrame& frame,
                                               const std::vector<int>& delays) {
  const std::size_t n_frames = whole_frames_or_throw(capture, frame, delays);
  const std::size_t n = frame.length();
  std::vector<JonesEstimateFrame> out(n_frames);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < static_cast<std::ptrdiff_t>(n_frames); ++f)
    out[f] = estimate_frame(capture.e_rx.data() + f * n,
                            capture.e_ry.data() + f * n, frame, delays,
                            static_cast<int>(f));
  return out;
}

std::vector<JonesEstimateFrame> estimate_jones_fft(const IQCapture& capture,
                                                   const ProbeFrame& frame,
                                                   const std::vector<int>& delays) {
  const std::size_t n_frames = whole_frames_or_throw(capture, frame, delays);
  const std::size_t n = frame.length();
  const double norm = frame.correlation_norm();
  std::vector<JonesEstimateFrame> out(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f) {
    std::span<const std::complex<double>> rx{capture.e_rx.data() + f * n, n};
    std::span<const std::complex<double>> ry{capture.e_ry.data() + f * n, n};
    const cvec cxx = periodic_correlate_fft(rx, frame.e_tx);
    const cvec cxy = periodic_correlate_fft(rx, frame.e_ty);
    const cvec cyx = periodic_correlate_fft(ry, frame.e_tx);
    const cvec cyy = periodic_correlate_fft(ry, frame.e_ty);
    JonesEstimateFrame& est = out[f];
    est.frame_index = static_cast<int>(f);
    est.timestamp_s = f * frame.period_seconds();
    for (int d : delays)
      est.taps.emplace_back(
          d, JonesMatrix{cxx[d] / norm, cxy[d] / norm, cyx[d] / norm, cyy[d] / norm});
  }
  return out;
}

double extract_phase(const JonesMatrix& h) {
  const std::complex<double> det = h.det();
  if (det == std::complex<double>{0.0, 0.0})
    throw std::domain_error("degenerate Jones estimate: zero determinant");
  return 0.5 * std::arg(det);
}

PhaseMap build_phase_map(const std::vector<JonesEstimateFrame>& estimates,
                         int reference_index) {
  if (estimates.size() < 2)
    throw std::invalid_argument("phase map needs at least two frames");
  const std::size_t n_taps = estimates[0].taps.size();
  for (const auto& est : estimates)
    if (est.taps.size() != n_taps)
      throw std::invalid_argument("inconsistent tap counts across frames");
  if (reference_index < 0 || static_cast<std::size_t>(reference_index) >= n_taps)
    throw std::invalid_argument("reference index out of range");

  const std::size_t n_frames = estimates.size();
  std::vector<double> ref(n_frames);
  for (std::size_t f = 0; f < n_frames; ++f)
    ref[f] = extract_phase(estimates[f].taps[reference_index].second);

  PhaseMap map;
  map.reference_index = reference_index;
  map.t_code_s = n_frames > 1 ? estimates[1].timestamp_s - estimates[0].timestamp_s : 0.0;
  map.phases.assign(n_taps, std::vector<double>(n_frames));
  map.near_limit_counts.assign(n_taps, 0);
  for (std::size_t k = 0; k < n_taps; ++k) {
    auto& row = map.phases[k];
    double prev_rel = 0.0;
    for (std::size_t f = 0; f < n_frames; ++f) {
      const double rel = extract_phase(estimates[f].taps[k].second) - ref[f];
      if (f == 0) {
        row[0] = wrap_mod_pi(rel);
      } else {
        const double inc = wrap_mod_pi(rel - prev_rel);
        if (std::abs(inc) > kNearLimitFraction * M_PI) ++map.near_limit_counts[k];
        row[f] = row[f - 1] + inc;
      }
      prev_rel = rel;
    }
  }
  return map;
}

std::vector<int> detect_peaks(const IQCapture& capture, const ProbeFrame& frame,
                              double threshold_db) {
  const std::size_t n = frame.length();
  const std::size_t n_frames = capture.e_rx.size() / n;
  if (n_frames < 1)
    throw std::invalid_argument("capture must span at least one frame period");

  // Only the estimable lags are scanned: off the mod-4 grid (QPSK) or outside
  // the zero-correlation zone (BPSK) the profile carries structural code
  // residue rather than echo power, and no valid channel puts a tap there.
  std::vector<int> candidates;
  if (frame.scheme == Scheme::pdm_qpsk) {
    for (std::size_t d = 0; d < n; d += 4) candidates.push_back(static_cast<int>(d));
  } else {
    const int zone = zero_correlation_zone(frame);
    for (int d = 0; d < zone; ++d) candidates.push_back(d);
  }

  std::vector<double> intensity(candidates.size(), 0.0);
  std::vector<std::complex<double>> samples(candidates.size());
  for (std::size_t f = 0; f < n_frames; ++f) {
    std::span<const std::complex<double>> rx{capture.e_rx.data() + f * n, n};
    std::span<const std::complex<double>> ry{capture.e_ry.data() + f * n, n};
    for (const auto* tx : {&frame.e_tx, &frame.e_ty}) {
      for (const auto* r : {&rx, &ry}) {
        periodic_correlate_at(*r, *tx, candidates, samples.data());
        for (std::size_t i = 0; i < candidates.size(); ++i)
          intensity[i] += std::norm(samples[i]);
      }
    }
  }

  const double peak = *std::max_element(intensity.begin(), intensity.end());
  if (peak <= 0.0) return {};
  const double floor = peak * std::pow(10.0, -threshold_db / 10.0);
  std::vector<int> found;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (intensity[i] > floor) found.push_back(candidates[i]);
  return found;
}

}  // namespace ccdas
