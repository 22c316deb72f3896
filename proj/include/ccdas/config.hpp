#pragma once
// Experiment configuration: a flat sectioned key-value file with explicit
// unit suffixes in key names. Parsing yields line-numbered diagnostics;
// validation reports the nearest valid symbol rates on alignment errors.
#include <cstdint>
#include <stdexcept>
#include <string>

#include "ccdas/channel.hpp"
#include "ccdas/modulation.hpp"

namespace ccdas {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SegmentJonesMode { random, identity };

struct OutputConfig {
  std::string directory = "out";
  bool write_iq = false;
  int psd_row = -1;  // row whose spectrum to export; -1 skips
};

struct ExperimentConfig {
  Scheme scheme = Scheme::pdm_qpsk;
  int n_g = 1024;
  int n_sep = 0;
  double f_s_hz = 160e6;
  double duration_s = 0.02;
  std::int64_t seed = 1;
  int reference_index = 0;
  double std_window_s = 0.02;
  bool sweep_increment_seed = false;

  SensorArrayConfig array;
  SegmentJonesMode jones_mode = SegmentJonesMode::random;
  LaserConfig laser;
  OutputConfig outputs;
};

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& name);
ExperimentConfig parse_config_file(const std::string& path);

// Semantic checks after parsing (rate alignment, ranges, referential
// validity); throws ConfigError.
void validate_config(const ExperimentConfig& cfg);

// Full round-trippable dump with every defaulted field made explicit.
std::string render_config(const ExperimentConfig& cfg);

ProbeFrame build_frame(const ExperimentConfig& cfg);

// The array block with the segment-matrix mode applied (identity mode fills
// the explicit list; random mode leaves it to the seed).
SensorArrayConfig resolved_array(const ExperimentConfig& cfg);

}  // namespace ccdas
