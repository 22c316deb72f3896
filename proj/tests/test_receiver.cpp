#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "ccdas/channel.hpp"
#include "ccdas/codes.hpp"
#include "ccdas/modulation.hpp"
#include "ccdas/receiver.hpp"

using namespace ccdas;
using cd = std::complex<double>;

namespace {

ProbeFrame qpsk_frame(int n_g, double f_s = 160e6) {
  return build_pdm_qpsk_frame(generate_golay_set(n_g), f_s);
}

// Hand-rolled channel: applies (delay, matrix) pairs to the frame with
// periodic wrap, no noise.  Lets the tests place taps anywhere, including
// where the simulator's geometry never would.
IQCapture convolve(const ProbeFrame& frame,
                   const std::vector<std::pair<int, JonesMatrix>>& taps,
                   int n_frames) {
  const int n = frame.length();
  IQCapture cap;
  cap.f_s = frame.f_s;
  cap.duration_s = n_frames * frame.period_seconds();
  cap.e_rx.assign(static_cast<std::size_t>(n) * n_frames, 0.0);
  cap.e_ry.assign(static_cast<std::size_t>(n) * n_frames, 0.0);
  for (std::size_t i = 0; i < cap.e_rx.size(); ++i) {
    for (const auto& [d, m] : taps) {
      const int idx = ((static_cast<int>(i % static_cast<std::size_t>(n)) - d) % n + n) % n;
      cap.e_rx[i] += m.xx * frame.e_tx[idx] + m.xy * frame.e_ty[idx];
      cap.e_ry[i] += m.yx * frame.e_tx[idx] + m.yy * frame.e_ty[idx];
    }
  }
  return cap;
}

double entry_err(const JonesMatrix& a, const JonesMatrix& b) {
  return std::max({std::abs(a.xx - b.xx), std::abs(a.xy - b.xy),
                   std::abs(a.yx - b.yx), std::abs(a.yy - b.yy)});
}

JonesMatrix random_tap(std::uint64_t k, double amp) {
  const CounterRng rng(314, 9);
  return haar_unitary(rng, k) * cd(amp);
}

}  // namespace

TEST_CASE("delay preconditions reflect each scheme's exact-recovery grid") {
  const ProbeFrame q = qpsk_frame(256);
  CHECK_NOTHROW(check_estimation_delays(q, {0, 4, 16, 252}));
  CHECK_THROWS_WITH_AS(check_estimation_delays(q, {4, 18}),
                       "PDM-QPSK tap delays must be multiples of 4 symbols",
                       std::invalid_argument);
  CHECK_THROWS_AS(check_estimation_delays(q, {}), std::invalid_argument);
  CHECK_THROWS_AS(check_estimation_delays(q, {8, 8}), std::invalid_argument);
  CHECK_THROWS_AS(check_estimation_delays(q, {16, 8}), std::invalid_argument);
  CHECK_THROWS_AS(check_estimation_delays(q, {-4, 8}), std::invalid_argument);
  CHECK_THROWS_AS(check_estimation_delays(q, {0, 256}), std::invalid_argument);

  const ProbeFrame b = build_pdm_bpsk_frame(generate_golay_set(256), 10, 10e6);
  const int zone = zero_correlation_zone(b);  // 138
  CHECK_NOTHROW(check_estimation_delays(b, {1, 7, zone - 1}));
  CHECK_THROWS_WITH_AS(check_estimation_delays(b, {1, zone}),
                       "PDM-BPSK tap delays must lie inside the zero-correlation zone",
                       std::invalid_argument);
}

TEST_CASE("QPSK estimation is exact for taps on the mod-4 grid") {
  const ProbeFrame frame = qpsk_frame(512);
  std::vector<std::pair<int, JonesMatrix>> taps;
  std::vector<int> delays;
  for (int k = 0; k < 10; ++k) {
    delays.push_back(16 * (k + 1));
    taps.emplace_back(delays.back(), random_tap(static_cast<std::uint64_t>(k), 0.03));
  }
  const IQCapture cap = convolve(frame, taps, 3);
  const auto est = estimate_jones(cap, frame, delays);
  REQUIRE(est.size() == 3);
  for (const auto& f : est)
    for (std::size_t k = 0; k < taps.size(); ++k) {
      CHECK(f.taps[k].first == delays[k]);
      CHECK(entry_err(f.taps[k].second, taps[k].second) < 1e-10);
    }
}

TEST_CASE("BPSK estimation is exact at arbitrary in-zone delays") {
  const ProbeFrame frame = build_pdm_bpsk_frame(generate_golay_set(512), 8, 10e6);
  const int zone = zero_correlation_zone(frame);
  // Deliberately off any grid: odd, prime, adjacent.
  std::vector<int> delays{1, 2, 7, 23, 24, 101, zone - 1};
  std::vector<std::pair<int, JonesMatrix>> taps;
  for (std::size_t k = 0; k < delays.size(); ++k)
    taps.emplace_back(delays[k], random_tap(100 + k, 0.05));
  const IQCapture cap = convolve(frame, taps, 2);
  for (const auto& f : estimate_jones(cap, frame, delays))
    for (std::size_t k = 0; k < taps.size(); ++k)
      CHECK(entry_err(f.taps[k].second, taps[k].second) < 1e-10);
}

TEST_CASE("a tap off the QPSK grid breaks both the estimate and the precondition") {
  const ProbeFrame frame = qpsk_frame(512);
  const std::vector<int> aligned{16, 32, 48};
  std::vector<std::pair<int, JonesMatrix>> taps;
  for (std::size_t k = 0; k < aligned.size(); ++k)
    taps.emplace_back(aligned[k], random_tap(200 + k, 0.03));
  taps[1].first = 33;  // one symbol or bust

  CHECK_THROWS_AS(check_estimation_delays(frame, {16, 33, 48}), std::invalid_argument);

  const IQCapture cap = convolve(frame, taps, 2);
  const auto est = estimate_jones(cap, frame, aligned);
  const double err = entry_err(est[0].taps[1].second, taps[1].second);
  CHECK(err / 0.03 > 1e-3);
}

TEST_CASE("the sampled and full-profile estimation routes agree") {
  const ProbeFrame frame = qpsk_frame(256);
  SensorArrayConfig cfg;
  cfg.n_fbg = 5;
  LaserConfig laser;
  laser.linewidth_hz = 600.0;
  laser.rx_noise_sigma = 0.2;
  const IQCapture cap = propagate(frame, cfg, laser, 4 * 256 / 160e6, 13);
  const std::vector<int> delays{16, 32, 48, 64, 80};
  const auto a = estimate_jones(cap, frame, delays);
  const auto b = estimate_jones_fft(cap, frame, delays);
  REQUIRE(a.size() == b.size());
  for (std::size_t f = 0; f < a.size(); ++f) {
    CHECK(a[f].timestamp_s == b[f].timestamp_s);
    for (std::size_t k = 0; k < delays.size(); ++k)
      CHECK(entry_err(a[f].taps[k].second, b[f].taps[k].second) < 1e-10);
  }
}

TEST_CASE("estimation needs at least two whole frames") {
  const ProbeFrame frame = qpsk_frame(256);
  IQCapture cap = convolve(frame, {{16, random_tap(1, 0.1)}}, 2);
  cap.e_rx.resize(300);
  cap.e_ry.resize(300);
  CHECK_THROWS_WITH_AS(estimate_jones(cap, frame, {16}),
                       "capture must span at least two frame periods",
                       std::invalid_argument);
}

TEST_CASE("extract_phase takes half the determinant argument") {
  CHECK(extract_phase(JonesMatrix::identity()) == 0.0);
  const JonesMatrix rotated = JonesMatrix::identity() * std::polar(1.0, 0.3);
  CHECK(extract_phase(rotated) == doctest::Approx(0.3).epsilon(1e-12));
  // A real rotation has determinant one regardless of angle.
  const double a = 0.7;
  const JonesMatrix rot{std::cos(a), -std::sin(a), std::sin(a), std::cos(a)};
  CHECK(extract_phase(rot) == doctest::Approx(0.0).epsilon(1e-12));
  // Scaling by a positive number leaves the phase alone.
  const CounterRng rng(5, 6);
  const JonesMatrix h = haar_unitary(rng, 3) * cd(0.02);
  CHECK(extract_phase(h * cd(7.0)) == doctest::Approx(extract_phase(h)).epsilon(1e-12));
  CHECK_THROWS_AS(extract_phase(JonesMatrix{1.0, 1.0, 1.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(extract_phase(JonesMatrix{}), std::domain_error);
}

TEST_CASE("the determinant phase is blind to mod-pi jumps") {
  // e^{i*pi} I has determinant e^{2i*pi}: identical to the identity.  This is
  // the half-angle ambiguity the near-limit counter guards.
  const JonesMatrix flipped = JonesMatrix::identity() * std::polar(1.0, M_PI);
  CHECK(wrap_mod_pi(extract_phase(flipped) - extract_phase(JonesMatrix::identity())) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("wrap_mod_pi maps onto [-pi/2, pi/2)") {
  CHECK(wrap_mod_pi(0.0) == 0.0);
  CHECK(wrap_mod_pi(0.3) == doctest::Approx(0.3));
  CHECK(wrap_mod_pi(M_PI) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(wrap_mod_pi(M_PI_2) == doctest::Approx(-M_PI_2));
  CHECK(wrap_mod_pi(-M_PI_2) == doctest::Approx(-M_PI_2));
  CHECK(wrap_mod_pi(0.6 * M_PI) == doctest::Approx(-0.4 * M_PI));
  CHECK(wrap_mod_pi(5.1 * M_PI) == doctest::Approx(0.1 * M_PI).epsilon(1e-9));
}

namespace {

// Estimates whose tap phases follow the given per-frame angles.
std::vector<JonesEstimateFrame> synthetic_estimates(
    const std::vector<std::vector<double>>& angles, double t_code) {
  std::vector<JonesEstimateFrame> out;
  for (std::size_t f = 0; f < angles[0].size(); ++f) {
    JonesEstimateFrame e;
    e.frame_index = static_cast<int>(f);
    e.timestamp_s = f * t_code;
    for (const auto& row : angles)
      e.taps.emplace_back(static_cast<int>(e.taps.size()),
                          JonesMatrix::identity() * std::polar(1.0, row[f]));
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

TEST_CASE("phase map references, wraps and unwraps") {
  // Row 1 ramps by 0.4*pi per frame: each wrapped increment stays legal, so
  // the unwrapped row must keep climbing far past pi/2.
  std::vector<std::vector<double>> angles(2);
  for (int f = 0; f < 10; ++f) {
    angles[0].push_back(0.0);
    angles[1].push_back(0.4 * M_PI * f);
  }
  const PhaseMap map = build_phase_map(synthetic_estimates(angles, 1e-6), 0);
  CHECK(map.t_code_s == doctest::Approx(1e-6));
  CHECK(map.f_max_hz() == doctest::Approx(5e5));
  REQUIRE(map.n_rows() == 2);
  REQUIRE(map.n_frames() == 10);
  for (double v : map.phases[0]) CHECK(v == 0.0);
  for (int f = 0; f < 10; ++f)
    CHECK(map.phases[1][f] == doctest::Approx(0.4 * M_PI * f).epsilon(1e-10));
  CHECK(map.near_limit_counts[1] == 0);
}

TEST_CASE("a half-period step trips the near-limit counter") {
  std::vector<std::vector<double>> angles(2);
  for (int f = 0; f < 6; ++f) {
    angles[0].push_back(0.0);
    angles[1].push_back(f == 3 ? 0.5 * M_PI : 0.0);
  }
  const PhaseMap map = build_phase_map(synthetic_estimates(angles, 1e-6), 0);
  // Both the step in and the step out land at the wrap boundary.
  CHECK(map.near_limit_counts[1] == 2);
  CHECK(map.near_limit_counts[0] == 0);
}

TEST_CASE("phase map rejects malformed estimate streams") {
  std::vector<std::vector<double>> angles{{0.0, 0.0}, {0.1, 0.2}};
  auto est = synthetic_estimates(angles, 1e-6);
  CHECK_THROWS_AS(build_phase_map({est[0]}, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_phase_map(est, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_phase_map(est, -1), std::invalid_argument);
  est[1].taps.pop_back();
  CHECK_THROWS_AS(build_phase_map(est, 0), std::invalid_argument);
}

TEST_CASE("differential phase is invariant under receiver-side transforms") {
  const ProbeFrame frame = qpsk_frame(256);
  SensorArrayConfig cfg;
  cfg.n_fbg = 4;
  LaserConfig laser;
  laser.linewidth_hz = 200.0;
  const IQCapture cap = propagate(frame, cfg, laser, 8 * 256 / 160e6, 17);
  const std::vector<int> delays{16, 32, 48, 64};
  const PhaseMap base = build_phase_map(estimate_jones(cap, frame, delays), 0);

  IQCapture warped = cap;
  const cd g = std::polar(2.0, 0.7);  // common gain and phase
  const CounterRng rng(88, 1);
  const JonesMatrix u = haar_unitary(rng, 0);  // receiver basis rotation
  for (std::size_t i = 0; i < warped.e_rx.size(); ++i) {
    const cd x = warped.e_rx[i] * g, y = warped.e_ry[i] * g;
    warped.e_rx[i] = u.xx * x + u.xy * y;
    warped.e_ry[i] = u.yx * x + u.yy * y;
  }
  const PhaseMap twisted = build_phase_map(estimate_jones(warped, frame, delays), 0);
  for (std::size_t k = 0; k < base.n_rows(); ++k)
    for (std::size_t f = 0; f < base.n_frames(); ++f)
      CHECK(std::abs(twisted.phases[k][f] - base.phases[k][f]) < 1e-10);
}

TEST_CASE("a stimulus shifts downstream rows by twice its phase") {
  const ProbeFrame frame = qpsk_frame(1024);
  SensorArrayConfig cfg;
  cfg.n_fbg = 4;
  StimulusWaveform w;
  w.kind = StimulusWaveform::Kind::sine;
  w.amplitude_vpp = 0.0015;
  w.f_start_hz = 10.0;
  cfg.stimuli.push_back({3, w});
  LaserConfig laser;
  laser.linewidth_hz = 0.0;
  laser.rx_noise_sigma = 0.0;

  const int n_frames = 1953;  // 12.5 ms
  const int n = frame.length();
  const IQCapture cap = propagate(frame, cfg, laser, n_frames * frame.period_seconds(), 23);
  const PhaseMap map =
      build_phase_map(estimate_jones(cap, frame, {16, 32, 48, 64}), 0);

  // Per-frame expectation: the estimator weighs every sample equally, so the
  // recovered shift is the frame average of 2*beta(t).
  std::vector<double> expect(map.n_frames());
  for (std::size_t f = 0; f < map.n_frames(); ++f) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      acc += stimulus_phase(w, (static_cast<double>(f) * n + i) / frame.f_s);
    expect[f] = 2.0 * acc / n;
  }
  for (std::size_t f = 1; f < map.n_frames(); ++f) {
    const double want = expect[f] - expect[0];
    // Rows at and behind the stimulated segment move together...
    CHECK(std::abs(map.phases[2][f] - map.phases[2][0] - want) < 1e-8);
    CHECK(std::abs(map.phases[3][f] - map.phases[3][0] - want) < 1e-8);
    // ...while the row in front of it stays put.
    CHECK(std::abs(map.phases[1][f] - map.phases[1][0]) < 1e-8);
  }
}

TEST_CASE("peak detection finds exactly the physical tap delays") {
  const ProbeFrame frame = qpsk_frame(1024);
  SensorArrayConfig cfg;
  LaserConfig laser;
  laser.linewidth_hz = 0.0;
  const IQCapture cap = propagate(frame, cfg, laser, 4 * 1024 / 160e6, 41);
  std::vector<int> want;
  for (int k = 1; k <= 10; ++k) want.push_back(16 * k);
  CHECK(detect_peaks(cap, frame, 20.0) == want);
}

TEST_CASE("detection threshold separates reflectors 20 dB apart") {
  const ProbeFrame frame = qpsk_frame(1024);
  SensorArrayConfig cfg;
  cfg.n_fbg = 2;
  // 1000 dB/km over the extra 20 m round trip: the second tap returns 10x
  // less amplitude, i.e. 20 dB less correlation power.
  cfg.fiber_loss_db_per_km = 1000.0;
  LaserConfig laser;
  laser.linewidth_hz = 0.0;
  const IQCapture cap = propagate(frame, cfg, laser, 2 * 1024 / 160e6, 43);
  CHECK(detect_peaks(cap, frame, 25.0) == (std::vector<int>{16, 32}));
  CHECK(detect_peaks(cap, frame, 15.0) == (std::vector<int>{16}));
}

TEST_CASE("BPSK peak detection scans the zero-correlation zone") {
  const ProbeFrame frame = build_pdm_bpsk_frame(generate_golay_set(512), 0, 160e6);
  SensorArrayConfig cfg;
  LaserConfig laser;
  laser.linewidth_hz = 0.0;
  const IQCapture cap = propagate(frame, cfg, laser, 2 * frame.length() / 160e6, 47);
  std::vector<int> want;
  for (int k = 1; k <= 10; ++k) want.push_back(16 * k);
  CHECK(detect_peaks(cap, frame, 40.0) == want);
}

TEST_CASE("an all-zero capture yields no peaks") {
  const ProbeFrame frame = qpsk_frame(256);
  IQCapture cap;
  cap.f_s = frame.f_s;
  cap.e_rx.assign(512, 0.0);
  cap.e_ry.assign(512, 0.0);
  CHECK(detect_peaks(cap, frame, 30.0).empty());
}
