#pragma once
// End-to-end experiment runner: wires code generation, frame synthesis,
// channel simulation, estimation and metrics, streaming the capture in
// bounded blocks so long codes never hold the whole sample record in memory.
#include <string>
#include <vector>

#include "ccdas/analysis.hpp"
#include "ccdas/config.hpp"
#include "ccdas/receiver.hpp"

namespace ccdas {

struct RunResult {
  PhaseMap map;  // referenced cumulative phases, one row per resolved delay
  MetricReport report;
  std::vector<int> estimation_delays;  // unique tap delays mod one period
  // Set when the code period is shorter than the array response, so several
  // physical taps fold onto one estimation delay.
  bool aliased = false;
};

// Simulates and processes one configured experiment. When iq_path is
// nonempty the raw capture is streamed to that file as it is generated.
RunResult run_experiment(const ExperimentConfig& cfg,
                         const std::string& iq_path = "");

// Writes config echo, phase maps (cumulative and spatially differenced),
// metric report and optional PSD export into cfg.outputs.directory.
void write_run_outputs(const ExperimentConfig& cfg, const RunResult& result);

struct SweepPoint {
  double value = 0.0;
  bool aliased = false;
  MetricReport report;
};

inline const char* const kSweepParameters[] = {
    "code_length", "signal_power_dbm", "lead_fiber_length",
    "stimulus_amplitude", "stimulus_frequency"};

// One run per value with the named parameter overridden; code_length values
// are target periods in seconds, rounded to the nearest power-of-two code.
std::vector<SweepPoint> run_sweep(const ExperimentConfig& base,
                                  const std::string& parameter,
                                  const std::vector<double>& values);

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepPoint>& points);

// The configuration actually run for one sweep point (exposed for tests).
ExperimentConfig apply_sweep_value(const ExperimentConfig& base,
                                   const std::string& parameter, double value,
                                   int point_index);

}  // namespace ccdas
