#pragma once
// Optical channel model for an FBG sensor array interrogated in reflection.
//
// The array is a chain of weak reflectors spliced every d_s meters behind an
// optional lead fiber. Light reflected off grating k crosses segments 1..k
// twice, so each grating contributes one tap at the round-trip delay with a
// dual-pass polarization matrix M_k^T M_k, an attenuation factor, and a phase
// that carries both the static propagation term and any piezo stimulus bound
// to a segment on the path. The interrogating laser also serves as the local
// oscillator, so laser phase noise enters only as the delayed self-difference.
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "ccdas/jones.hpp"
#include "ccdas/modulation.hpp"
#include "ccdas/rng.hpp"

namespace ccdas {

inline constexpr double kSpeedOfLight = 299792458.0;

// Group index chosen so that 10 m of fiber gives a 0.1 us round trip exactly.
inline constexpr double kDefaultGroupIndex = kSpeedOfLight / 2.0e8;

struct StimulusWaveform {
  enum class Kind { none, sine, chirp };
  Kind kind = Kind::none;
  double amplitude_vpp = 0.0;
  double f_start_hz = 0.0;
  double f_end_hz = 0.0;     // chirp only
  double duration_s = 0.0;   // 0 means always on

  // Instantaneous drive voltage; zero outside the active window.
  double voltage(double t) const;
};

// Piezo calibration: 3 V of drive stretches the fiber by one radian of
// one-way optical phase.
double stimulus_phase(const StimulusWaveform& w, double t);

struct BoundStimulus {
  int segment = 0;  // 1-based; segment k ends at grating k
  StimulusWaveform waveform;
};

struct SensorArrayConfig {
  int n_fbg = 10;
  double d_s_m = 10.0;
  double reflectivity = 1e-3;
  double group_index = kDefaultGroupIndex;
  double lead_fiber_m = 0.0;
  double fiber_loss_db_per_km = 0.2;
  // Empty means Haar-random per seed; otherwise one matrix per segment.
  std::vector<JonesMatrix> segment_jones;
  std::vector<BoundStimulus> stimuli;

  // Round-trip delay between adjacent gratings, seconds.
  double tau_s() const { return 2.0 * group_index * d_s_m / kSpeedOfLight; }
};

struct LaserConfig {
  double linewidth_hz = 600.0;
  double wavelength_m = 1549.1e-9;
  double rx_noise_sigma = 0.0;      // total std per complex sample, per polarization
  double signal_power_dbm = -27.0;  // amplitude 1.0 at the -27 dBm reference

  double amplitude_scale() const;
};

struct ChannelTap {
  int delay_symbols = 0;
  double amplitude = 0.0;        // sqrt(reflectivity) times round-trip loss
  double static_phase_rad = 0.0; // propagation phase at the carrier
  JonesMatrix round_trip;        // M_k^T M_k, unitary
  // Stimuli on segments 1..k, i.e. those this tap's light passes through.
  std::vector<int> stimulus_indices;

  // Full tap matrix at t = 0 with no stimulus contribution.
  JonesMatrix static_matrix() const {
    return round_trip * std::polar(amplitude, static_phase_rad);
  }
};

struct TapSet {
  std::vector<ChannelTap> taps;
  int symbols_per_segment = 0;  // K = F_S * tau_s
  int lead_delay_symbols = 0;
  int max_delay_symbols = 0;

  std::vector<int> delays() const;
};

// Per-segment birefringence: the explicit list from cfg, or Haar-random
// matrices drawn from the seed's dedicated stream.
std::vector<JonesMatrix> segment_matrices(const SensorArrayConfig& cfg,
                                          std::int64_t seed);

// Static tap decomposition for the given probing scheme. Checks the rate
// alignment invariant (F_S * tau_s integer, and a multiple of 4 under
// PDM-QPSK) and quantizes the lead-fiber delay onto the symbol grid.
TapSet build_tap_set(const ProbeFrame& frame, const SensorArrayConfig& cfg,
                     const LaserConfig& laser, std::int64_t seed);

// Fully evaluated impulse response at time t: one (delay, matrix) pair per
// grating, stimulus phases included, symbol-rate alignment at integer level.
std::vector<std::pair<int, JonesMatrix>> build_impulse_response(
    const SensorArrayConfig& cfg, const LaserConfig& laser, double f_s,
    std::int64_t seed, double t);

struct IQCapture {
  std::vector<std::complex<double>> e_rx, e_ry;
  double f_s = 0.0;
  double duration_s = 0.0;
  std::int64_t seed = 0;
};

// Streaming sample generator. Successive generate() calls continue the same
// capture: the laser phase walk, stimulus clock and noise counters all run on
// absolute sample indices, so block boundaries (and the number of OpenMP
// threads) do not change the output.
class Simulator {
 public:
  Simulator(const ProbeFrame& frame, const SensorArrayConfig& cfg,
            const LaserConfig& laser, std::int64_t seed);

  void generate(std::size_t count, std::complex<double>* rx,
                std::complex<double>* ry);

  const TapSet& tap_set() const { return taps_; }
  std::uint64_t samples_emitted() const { return emitted_; }

 private:
  ProbeFrame frame_;
  std::vector<BoundStimulus> stimuli_;
  TapSet taps_;
  double f_s_ = 0.0;
  double scale_ = 1.0;
  double noise_sigma_ = 0.0;
  double wiener_sigma_ = 0.0;
  CounterRng wiener_rng_, noise_x_rng_, noise_y_rng_;
  // Scaled tap matrices with the per-tap constant folded in.
  std::vector<JonesMatrix> tap_static_;
  std::uint64_t emitted_ = 0;
  double phi_last_ = 0.0;           // laser phase at the last generated index
  std::vector<double> phi_tail_;    // last max_delay phase values
};

IQCapture propagate(const ProbeFrame& frame, const SensorArrayConfig& cfg,
                    const LaserConfig& laser, double duration_s,
                    std::int64_t seed);

}  // namespace ccdas
