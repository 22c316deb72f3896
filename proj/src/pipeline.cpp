#include "ccdas/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <stdexcept>

#include "ccdas/io.hpp"

namespace ccdas {
namespace {

// Frames per simulation block, sized to keep buffers around a hundred MB.
std::size_t frames_per_block(int period) {
  const std::size_t target = std::size_t{4} << 20;
  return std::max<std::size_t>(1, target / period);
}

std::size_t window_frames(double window_s, double t_code, std::size_t n_frames) {
  auto m = static_cast<std::size_t>(std::llround(window_s / t_code));
  return std::clamp<std::size_t>(m, 2, n_frames);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, const std::string& iq_path) {
  validate_config(cfg);
  const ProbeFrame frame = build_frame(cfg);
  const SensorArrayConfig array = resolved_array(cfg);
  Simulator sim(frame, array, cfg.laser, cfg.seed);

  const int period = frame.length();
  RunResult result;

  // Physical round-trip delays, folded into one code period for estimation.
  // Folding merges taps once the response outlasts the code; the phase rows
  // then mix several sensors and the run is flagged.
  std::set<int> folded;
  for (int d : sim.tap_set().delays()) {
    folded.insert(d % period);
    if (d >= period) result.aliased = true;
  }
  result.estimation_delays.assign(folded.begin(), folded.end());
  check_estimation_delays(frame, result.estimation_delays);

  const std::size_t n_frames =
      static_cast<std::size_t>(cfg.duration_s * cfg.f_s_hz) / period;
  const std::size_t block = frames_per_block(period);
  std::vector<std::complex<double>> rx(block * period), ry(block * period);
  std::vector<JonesEstimateFrame> estimates(n_frames);

  std::unique_ptr<IqWriter> iq;
  if (!iq_path.empty())
    iq = std::make_unique<IqWriter>(iq_path, frame.f_s, n_frames * period,
                                    cfg.seed, cfg.duration_s);

  for (std::size_t at = 0; at < n_frames; at += block) {
    const std::size_t todo = std::min(block, n_frames - at);
    sim.generate(todo * period, rx.data(), ry.data());
    if (iq) iq->append(todo * period, rx.data(), ry.data());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t f = 0; f < static_cast<std::ptrdiff_t>(todo); ++f)
      estimates[at + f] =
          estimate_frame(rx.data() + f * period, ry.data() + f * period, frame,
                         result.estimation_delays, static_cast<int>(at + f));
  }
  if (iq) iq->finish();

  const int ref_row = result.aliased ? 0 : cfg.reference_index;
  result.map = build_phase_map(estimates, ref_row);

  MetricReport& rep = result.report;
  rep.frames = static_cast<int>(n_frames);
  rep.t_code_s = frame.period_seconds();
  rep.f_max_hz = result.map.f_max_hz();
  const std::size_t m = window_frames(cfg.std_window_s, rep.t_code_s, n_frames);
  rep.std_window_s = m * rep.t_code_s;
  const PhaseStdResult stds = phase_std(result.map, rep.std_window_s);
  rep.per_fbg_std_rad = stds.per_row_rad;
  rep.mean_std_rad = stds.mean_rad;
  rep.near_limit_counts = result.map.near_limit_counts;

  // Tone metrics when a sine stimulus is bound and the record supports a
  // spectrum; left unset if the tone does not clear the floor.
  if (!result.aliased && n_frames >= 64) {
    for (const auto& stim : array.stimuli) {
      if (stim.waveform.kind != StimulusWaveform::Kind::sine) continue;
      try {
        rep.crosstalk_db = crosstalk_rejection(result.map, stim.segment - 1,
                                               stim.waveform.f_start_hz);
        rep.sensitivity_rad_per_sqrt_hz =
            sensitivity(spatial_difference(result.map), stim.segment - 1,
                        stim.waveform.f_start_hz);
      } catch (const std::runtime_error&) {
      }
      break;
    }
  }
  return result;
}

void write_run_outputs(const ExperimentConfig& cfg, const RunResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.outputs.directory);
  fs::create_directories(dir);

  {
    std::ofstream f(dir / "config.txt");
    f << render_config(cfg);
    if (!f) throw std::runtime_error("write failed: " + (dir / "config.txt").string());
  }
  write_phase_map_csv((dir / "phase_map.csv").string(), result.map);
  write_phase_map_csv((dir / "phase_map_diff.csv").string(),
                      spatial_difference(result.map));
  write_metric_report((dir / "metrics.txt").string(), result.report);

  if (cfg.outputs.psd_row >= 0) {
    if (static_cast<std::size_t>(cfg.outputs.psd_row) >= result.map.n_rows())
      throw ConfigError("psd_row exceeds the number of phase rows");
    write_psd_csv((dir / "psd.csv").string(), psd(result.map, cfg.outputs.psd_row));
  }
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& base,
                                   const std::string& parameter, double value,
                                   int point_index) {
  ExperimentConfig cfg = base;
  if (cfg.sweep_increment_seed) cfg.seed = base.seed + point_index;

  if (parameter == "code_length") {
    // value is a target period in seconds; pick the nearest power-of-two code
    // and stretch the capture to keep a usable number of frames
    const double target_symbols = cfg.scheme == Scheme::pdm_qpsk
                                      ? value * cfg.f_s_hz
                                      : value * cfg.f_s_hz / 2.0 - cfg.n_sep;
    if (target_symbols < 4.0)
      throw ConfigError("code_length value too short for the symbol rate");
    cfg.n_g = 1 << static_cast<int>(std::lround(std::log2(target_symbols)));
    cfg.n_g = std::max(cfg.n_g, 4);
    const int period = cfg.scheme == Scheme::pdm_qpsk
                           ? cfg.n_g
                           : 2 * (cfg.n_g + cfg.n_sep);
    cfg.duration_s = std::max(cfg.duration_s, 12.0 * period / cfg.f_s_hz);
  } else if (parameter == "signal_power_dbm") {
    cfg.laser.signal_power_dbm = value;
  } else if (parameter == "lead_fiber_length") {
    cfg.array.lead_fiber_m = value;
  } else if (parameter == "stimulus_amplitude" ||
             parameter == "stimulus_frequency") {
    if (cfg.array.stimuli.empty())
      throw ConfigError("sweep parameter '" + parameter +
                        "' needs a configured stimulus");
    auto& w = cfg.array.stimuli.front().waveform;
    if (parameter == "stimulus_amplitude") w.amplitude_vpp = value;
    else w.f_start_hz = value;
  } else {
    std::string all;
    for (const char* p : kSweepParameters) {
      if (!all.empty()) all += ", ";
      all += p;
    }
    throw ConfigError("unknown sweep parameter '" + parameter +
                      "'; supported: " + all);
  }
  return cfg;
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& base,
                                  const std::string& parameter,
                                  const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<SweepPoint> points;
  points.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const ExperimentConfig cfg =
        apply_sweep_value(base, parameter, values[i], static_cast<int>(i));
    RunResult res = run_experiment(cfg);
    points.push_back({values[i], res.aliased, std::move(res.report)});
  }
  return points;
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepPoint>& points) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "value,mean_std_rad,f_max_hz,frames,aliased,near_limit_total\n";
  for (const auto& p : points) {
    int flags = 0;
    for (int c : p.report.near_limit_counts) flags += c;
    f << format_double(p.value) << ',' << format_double(p.report.mean_std_rad)
      << ',' << format_double(p.report.f_max_hz) << ',' << p.report.frames
      << ',' << (p.aliased ? 1 : 0) << ',' << flags << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace ccdas
