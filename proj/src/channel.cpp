#include "ccdas/channel.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ccdas {
namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Piezo stretch per volt over stretch per radian (25 nm/V, 75 nm/rad).
constexpr double kRadiansPerVolt = 1.0 / 3.0;

int quantize(double x, int quantum) {
  return quantum * static_cast<int>(std::llround(x / quantum));
}

void check_array_config(const SensorArrayConfig& cfg) {
  if (cfg.n_fbg < 0) throw std::invalid_argument("FBG count must not be negative");
  if (cfg.d_s_m <= 0.0) throw std::invalid_argument("FBG spacing must be positive");
  if (cfg.reflectivity <= 0.0 || cfg.reflectivity > 1.0)
    throw std::invalid_argument("reflectivity must lie in (0, 1]");
  if (cfg.lead_fiber_m < 0.0) throw std::invalid_argument("lead fiber length must be nonnegative");
  if (!cfg.segment_jones.empty() &&
      cfg.segment_jones.size() != static_cast<std::size_t>(cfg.n_fbg))
    throw std::invalid_argument("segment_jones must have one matrix per segment");
  for (const auto& s : cfg.stimuli) {
    if (s.segment < 1 || s.segment > cfg.n_fbg)
      throw std::invalid_argument("stimulus segment index out of range");
    if (s.waveform.kind == StimulusWaveform::Kind::chirp && s.waveform.duration_s <= 0.0)
      throw std::invalid_argument("chirp stimulus needs a positive duration");
  }
}

// Shared by build_tap_set and build_impulse_response; delay_quantum is 4 for
// PDM-QPSK (keeps every tap on the mod-4 grid the estimator needs) and 1
// otherwise.
TapSet build_taps_impl(const SensorArrayConfig& cfg, const LaserConfig& laser,
                       double f_s, std::int64_t seed, int delay_quantum) {
  check_array_config(cfg);
  if (f_s <= 0.0) throw std::invalid_argument("symbol rate must be positive");

  const double tau = cfg.tau_s();
  const double k_real = f_s * tau;
  const int k_sym = static_cast<int>(std::llround(k_real));
  const bool integer_ok = std::abs(k_real - k_sym) < 1e-6 && k_sym >= 1;
  if (!integer_ok || k_sym % delay_quantum != 0) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "symbol rate must be a multiple of %g MHz",
                  delay_quantum / tau / 1e6);
    throw std::invalid_argument(msg);
  }

  TapSet out;
  out.symbols_per_segment = k_sym;
  out.lead_delay_symbols =
      quantize(f_s * 2.0 * cfg.group_index * cfg.lead_fiber_m / kSpeedOfLight,
               delay_quantum);

  const auto segments = segment_matrices(cfg, seed);
  const double nu0 = kSpeedOfLight / laser.wavelength_m;
  JonesMatrix m_fwd = JonesMatrix::identity();
  out.taps.reserve(cfg.n_fbg);
  for (int k = 1; k <= cfg.n_fbg; ++k) {
    m_fwd = segments[k - 1] * m_fwd;
    ChannelTap tap;
    tap.delay_symbols = out.lead_delay_symbols + k * k_sym;
    const double dist_km = (cfg.lead_fiber_m + k * cfg.d_s_m) / 1000.0;
    tap.amplitude = std::sqrt(cfg.reflectivity) *
                    std::pow(10.0, -cfg.fiber_loss_db_per_km * 2.0 * dist_km / 20.0);
    // Carrier phase over the quantized round trip; only its value mod 2pi matters.
    const double cycles = nu0 * tap.delay_symbols / f_s;
    tap.static_phase_rad = -kTwoPi * (cycles - std::floor(cycles));
    tap.round_trip = m_fwd.transpose() * m_fwd;
    for (std::size_t j = 0; j < cfg.stimuli.size(); ++j)
      if (cfg.stimuli[j].segment <= k) tap.stimulus_indices.push_back(static_cast<int>(j));
    out.taps.push_back(std::move(tap));
  }
  out.max_delay_symbols = out.taps.empty() ? 0 : out.taps.back().delay_symbols;
  return out;
}

}  // namespace

double StimulusWaveform::voltage(double t) const {
  if (kind == Kind::none || amplitude_vpp <= 0.0) return 0.0;
  if (t < 0.0 || (duration_s > 0.0 && t >= duration_s)) return 0.0;
  double cycles;
  if (kind == Kind::sine) {
    cycles = f_start_hz * t;
  } else {
    const double rate = (f_end_hz - f_start_hz) / duration_s;
    cycles = (f_start_hz + 0.5 * rate * t) * t;
  }
  return 0.5 * amplitude_vpp * std::sin(kTwoPi * cycles);
}

double stimulus_phase(const StimulusWaveform& w, double t) {
  return w.voltage(t) * kRadiansPerVolt;
}

double LaserConfig::amplitude_scale() const {
  return std::pow(10.0, (signal_power_dbm - (-27.0)) / 20.0);
}

std::vector<int> TapSet::delays() const {
  std::vector<int> d;
  d.reserve(taps.size());
  for (const auto& t : taps) d.push_back(t.delay_symbols);
  return d;
}

std::vector<JonesMatrix> segment_matrices(const SensorArrayConfig& cfg,
                                          std::int64_t seed) {
  if (!cfg.segment_jones.empty()) return cfg.segment_jones;
  std::vector<JonesMatrix> out;
  out.reserve(cfg.n_fbg);
  const CounterRng rng(seed, rng_stream::segment_jones);
  for (int k = 0; k < cfg.n_fbg; ++k) out.push_back(haar_unitary(rng, k));
  return out;
}

TapSet build_tap_set(const ProbeFrame& frame, const SensorArrayConfig& cfg,
                     const LaserConfig& laser, std::int64_t seed) {
  const int quantum = frame.scheme == Scheme::pdm_qpsk ? 4 : 1;
  return build_taps_impl(cfg, laser, frame.f_s, seed, quantum);
}

std::vector<std::pair<int, JonesMatrix>> build_impulse_response(
    const SensorArrayConfig& cfg, const LaserConfig& laser, double f_s,
    std::int64_t seed, double t) {
  const TapSet set = build_taps_impl(cfg, laser, f_s, seed, 1);
  std::vector<std::pair<int, JonesMatrix>> out;
  out.reserve(set.taps.size());
  for (const auto& tap : set.taps) {
    double stim = 0.0;
    for (int j : tap.stimulus_indices)
      stim += 2.0 * stimulus_phase(cfg.stimuli[j].waveform, t);
    out.emplace_back(tap.delay_symbols,
                     tap.round_trip * std::polar(tap.amplitude,
                                                 tap.static_phase_rad + stim));
  }
  return out;
}

Simulator::Simulator(const ProbeFrame& frame, const SensorArrayConfig& cfg,
                     const LaserConfig& laser, std::int64_t seed)
    : frame_(frame),
      stimuli_(cfg.stimuli),
      taps_(build_tap_set(frame, cfg, laser, seed)),
      f_s_(frame.f_s),
      scale_(laser.amplitude_scale()),
      noise_sigma_(laser.rx_noise_sigma),
      wiener_sigma_(std::sqrt(kTwoPi * laser.linewidth_hz / frame.f_s)),
      wiener_rng_(seed, rng_stream::wiener),
      noise_x_rng_(seed, rng_stream::noise_x),
      noise_y_rng_(seed, rng_stream::noise_y) {
  if (laser.linewidth_hz < 0.0) throw std::invalid_argument("linewidth must be nonnegative");
  if (laser.rx_noise_sigma < 0.0) throw std::invalid_argument("noise sigma must be nonnegative");
  tap_static_.reserve(taps_.taps.size());
  for (const auto& tap : taps_.taps)
    tap_static_.push_back(tap.round_trip *
                          std::polar(scale_ * tap.amplitude, tap.static_phase_rad));

  // Seed the laser phase walk max_delay samples before the first emitted one,
  // so the delayed self-difference has proper history from sample zero.
  const int maxd = taps_.max_delay_symbols;
  phi_tail_.resize(maxd);
  double phi = 0.0;
  for (int p = 0; p < maxd; ++p) {
    if (p > 0) phi += wiener_sigma_ * wiener_rng_.gaussian(p);
    phi_tail_[p] = phi;
  }
  phi_last_ = phi;
}

void Simulator::generate(std::size_t count, std::complex<double>* rx,
                         std::complex<double>* ry) {
  if (count == 0) return;
  const int maxd = taps_.max_delay_symbols;
  const std::size_t n_taps = taps_.taps.size();
  const long long period = frame_.length();

  // Laser phase for this block plus the carried tail: phi[maxd + i] belongs to
  // absolute sample emitted_ + i. Increments are counter-indexed, the prefix
  // sum is sequential.
  std::vector<double> phi(maxd + count);
  for (int p = 0; p < maxd; ++p) phi[p] = phi_tail_[p];
  std::vector<double> inc(count);
  const std::uint64_t p0 = emitted_ + maxd;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    const std::uint64_t p = p0 + i;
    inc[i] = p == 0 ? 0.0 : wiener_sigma_ * wiener_rng_.gaussian(p);
  }
  double run = phi_last_;
  for (std::size_t i = 0; i < count; ++i) {
    run += inc[i];
    phi[maxd + i] = run;
  }

  const double inv_fs = 1.0 / f_s_;
  const double noise_amp = noise_sigma_ / std::sqrt(2.0);
#pragma omp parallel
  {
    std::vector<double> beta(stimuli_.size());
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
      const std::uint64_t n = emitted_ + i;
      const double t = static_cast<double>(n) * inv_fs;
      for (std::size_t j = 0; j < stimuli_.size(); ++j)
        beta[j] = stimulus_phase(stimuli_[j].waveform, t);

      std::complex<double> ax{0.0, 0.0}, ay{0.0, 0.0};
      for (std::size_t k = 0; k < n_taps; ++k) {
        const ChannelTap& tap = taps_.taps[k];
        const int d = tap.delay_symbols;
        double extra = phi[maxd + i - d] - phi[maxd + i];
        for (int j : tap.stimulus_indices) extra += 2.0 * beta[j];
        const std::complex<double> rot = std::polar(1.0, extra);
        const long long m =
            ((static_cast<long long>(n) - d) % period + period) % period;
        const std::complex<double> tx = frame_.e_tx[m] * rot;
        const std::complex<double> ty = frame_.e_ty[m] * rot;
        const JonesMatrix& s = tap_static_[k];
        ax += s.xx * tx + s.xy * ty;
        ay += s.yx * tx + s.yy * ty;
      }
      if (noise_sigma_ > 0.0) {
        const auto [gx0, gx1] = noise_x_rng_.gaussian_pair(n);
        const auto [gy0, gy1] = noise_y_rng_.gaussian_pair(n);
        ax += std::complex<double>(noise_amp * gx0, noise_amp * gx1);
        ay += std::complex<double>(noise_amp * gy0, noise_amp * gy1);
      }
      rx[i] = ax;
      ry[i] = ay;
    }
  }

  for (int p = 0; p < maxd; ++p) phi_tail_[p] = phi[count + p];
  phi_last_ = run;
  emitted_ += count;
}

IQCapture propagate(const ProbeFrame& frame, const SensorArrayConfig& cfg,
                    const LaserConfig& laser, double duration_s,
                    std::int64_t seed) {
  const std::size_t n = static_cast<std::size_t>(std::llround(duration_s * frame.f_s));
  if (n < static_cast<std::size_t>(frame.length()))
    throw std::invalid_argument("capture duration must cover at least one frame period");

  IQCapture cap;
  cap.e_rx.resize(n);
  cap.e_ry.resize(n);
  cap.f_s = frame.f_s;
  cap.duration_s = duration_s;
  cap.seed = seed;

  Simulator sim(frame, cfg, laser, seed);
  constexpr std::size_t kBlock = std::size_t{1} << 22;
  for (std::size_t at = 0; at < n; at += kBlock) {
    const std::size_t len = std::min(kBlock, n - at);
    sim.generate(len, cap.e_rx.data() + at, cap.e_ry.data() + at);
  }
  return cap;
}

}  // namespace ccdas
