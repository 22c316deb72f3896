#include "ccdas/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "ccdas/codes.hpp"
#include "ccdas/io.hpp"

namespace ccdas {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Parser {
  const std::string& name;
  int line_no = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(name + ":" + std::to_string(line_no) + ": " + msg);
  }
  double num(const std::string& v) const {
    try {
      std::size_t used = 0;
      const double d = std::stod(v, &used);
      if (used != v.size()) fail("malformed number '" + v + "'");
      return d;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      fail("malformed number '" + v + "'");
    }
  }
  int integer(const std::string& v) const {
    const double d = num(v);
    if (d != std::floor(d)) fail("expected an integer, got '" + v + "'");
    return static_cast<int>(d);
  }
  bool boolean(const std::string& v) const {
    if (v == "true") return true;
    if (v == "false") return false;
    fail("expected true or false, got '" + v + "'");
  }
};

const char* scheme_name(Scheme s) {
  return s == Scheme::pdm_qpsk ? "pdm_qpsk" : "pdm_bpsk";
}
const char* kind_name(StimulusWaveform::Kind k) {
  switch (k) {
    case StimulusWaveform::Kind::sine: return "sine";
    case StimulusWaveform::Kind::chirp: return "chirp";
    default: return "none";
  }
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& name) {
  ExperimentConfig cfg;
  Parser p{name};
  std::string section;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++p.line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') p.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section == "stimulus") {
        cfg.array.stimuli.push_back({});
      } else if (section != "array" && section != "laser" && section != "outputs") {
        p.fail("unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) p.fail("expected 'key = value'");

    if (section.empty()) {
      if (key == "scheme") {
        if (val == "pdm_qpsk") cfg.scheme = Scheme::pdm_qpsk;
        else if (val == "pdm_bpsk") cfg.scheme = Scheme::pdm_bpsk;
        else p.fail("unknown scheme '" + val + "'");
      } else if (key == "n_g") cfg.n_g = p.integer(val);
      else if (key == "n_sep") cfg.n_sep = p.integer(val);
      else if (key == "f_s_hz") cfg.f_s_hz = p.num(val);
      else if (key == "duration_s") cfg.duration_s = p.num(val);
      else if (key == "seed") cfg.seed = p.integer(val);
      else if (key == "reference_index") cfg.reference_index = p.integer(val);
      else if (key == "std_window_s") cfg.std_window_s = p.num(val);
      else if (key == "sweep_seed_policy") {
        if (val == "fixed") cfg.sweep_increment_seed = false;
        else if (val == "increment") cfg.sweep_increment_seed = true;
        else p.fail("sweep_seed_policy must be fixed or increment");
      } else p.fail("unknown key '" + key + "'");
    } else if (section == "array") {
      if (key == "n_fbg") cfg.array.n_fbg = p.integer(val);
      else if (key == "d_s_m") cfg.array.d_s_m = p.num(val);
      else if (key == "reflectivity") cfg.array.reflectivity = p.num(val);
      else if (key == "group_index") cfg.array.group_index = p.num(val);
      else if (key == "lead_fiber_m") cfg.array.lead_fiber_m = p.num(val);
      else if (key == "fiber_loss_db_per_km") cfg.array.fiber_loss_db_per_km = p.num(val);
      else if (key == "segment_jones") {
        if (val == "random") cfg.jones_mode = SegmentJonesMode::random;
        else if (val == "identity") cfg.jones_mode = SegmentJonesMode::identity;
        else p.fail("segment_jones must be random or identity");
      } else p.fail("unknown key '" + key + "' in [array]");
    } else if (section == "laser") {
      if (key == "linewidth_hz") cfg.laser.linewidth_hz = p.num(val);
      else if (key == "wavelength_m") cfg.laser.wavelength_m = p.num(val);
      else if (key == "rx_noise_sigma") cfg.laser.rx_noise_sigma = p.num(val);
      else if (key == "signal_power_dbm") cfg.laser.signal_power_dbm = p.num(val);
      else p.fail("unknown key '" + key + "' in [laser]");
    } else if (section == "stimulus") {
      auto& stim = cfg.array.stimuli.back();
      if (key == "segment") stim.segment = p.integer(val);
      else if (key == "kind") {
        if (val == "sine") stim.waveform.kind = StimulusWaveform::Kind::sine;
        else if (val == "chirp") stim.waveform.kind = StimulusWaveform::Kind::chirp;
        else if (val == "none") stim.waveform.kind = StimulusWaveform::Kind::none;
        else p.fail("unknown stimulus kind '" + val + "'");
      } else if (key == "amplitude_vpp") stim.waveform.amplitude_vpp = p.num(val);
      else if (key == "f_start_hz") stim.waveform.f_start_hz = p.num(val);
      else if (key == "f_end_hz") stim.waveform.f_end_hz = p.num(val);
      else if (key == "duration_s") stim.waveform.duration_s = p.num(val);
      else p.fail("unknown key '" + key + "' in [stimulus]");
    } else {  // outputs
      if (key == "directory") cfg.outputs.directory = val;
      else if (key == "write_iq") cfg.outputs.write_iq = p.boolean(val);
      else if (key == "psd_row") cfg.outputs.psd_row = p.integer(val);
      else p.fail("unknown key '" + key + "' in [outputs]");
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config_text(buf.str(), path);
}

void validate_config(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };

  if (cfg.n_g < 4 || (cfg.n_g & (cfg.n_g - 1)) != 0)
    fail("n_g must be a power of two >= 4");
  if (cfg.n_sep < 0) fail("n_sep must be nonnegative");
  if (cfg.scheme == Scheme::pdm_qpsk && cfg.n_sep != 0)
    fail("n_sep must be 0 under pdm_qpsk");
  if (cfg.f_s_hz <= 0.0) fail("f_s_hz must be positive");
  if (cfg.array.n_fbg < 1) fail("n_fbg must be at least 1");
  if (cfg.array.d_s_m <= 0.0) fail("d_s_m must be positive");
  if (cfg.array.reflectivity <= 0.0 || cfg.array.reflectivity > 1.0)
    fail("reflectivity must lie in (0, 1]");
  if (cfg.array.group_index <= 0.0) fail("group_index must be positive");
  if (cfg.array.lead_fiber_m < 0.0) fail("lead_fiber_m must be nonnegative");
  if (cfg.array.fiber_loss_db_per_km < 0.0) fail("fiber_loss_db_per_km must be nonnegative");
  if (cfg.laser.linewidth_hz < 0.0) fail("linewidth_hz must be nonnegative");
  if (cfg.laser.wavelength_m <= 0.0) fail("wavelength_m must be positive");
  if (cfg.laser.rx_noise_sigma < 0.0) fail("rx_noise_sigma must be nonnegative");
  if (cfg.reference_index < 0 || cfg.reference_index >= cfg.array.n_fbg)
    fail("reference_index must name a configured FBG");
  if (cfg.std_window_s <= 0.0) fail("std_window_s must be positive");

  for (const auto& stim : cfg.array.stimuli) {
    if (stim.segment < 1 || stim.segment > cfg.array.n_fbg)
      fail("stimulus segment must lie in 1.." + std::to_string(cfg.array.n_fbg));
    if (stim.waveform.kind != StimulusWaveform::Kind::none) {
      if (stim.waveform.amplitude_vpp < 0.0) fail("stimulus amplitude_vpp must be nonnegative");
      if (stim.waveform.f_start_hz <= 0.0) fail("stimulus f_start_hz must be positive");
    }
    if (stim.waveform.kind == StimulusWaveform::Kind::chirp) {
      if (stim.waveform.duration_s <= 0.0) fail("chirp stimulus needs duration_s > 0");
      if (stim.waveform.f_end_hz <= 0.0) fail("chirp stimulus needs f_end_hz > 0");
    }
  }

  // Rate alignment: the inter-FBG round trip must be a whole number of
  // symbols, and a multiple of four of them under PDM-QPSK.
  const double tau = cfg.array.tau_s();
  const int quantum = cfg.scheme == Scheme::pdm_qpsk ? 4 : 1;
  const double gran = quantum / tau;
  const double k = cfg.f_s_hz / gran;
  if (std::abs(k - std::llround(k)) > 1e-6 || std::llround(k) < 1) {
    const double lower = std::max(1.0, std::floor(k)) * gran;
    const double upper = std::max(1.0, std::ceil(k)) * gran;
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "symbol rate must be a multiple of %g MHz (nearest valid: %g MHz, %g MHz)",
                  gran / 1e6, lower / 1e6, upper / 1e6);
    fail(msg);
  }

  const int period = cfg.scheme == Scheme::pdm_qpsk ? cfg.n_g
                                                    : 2 * (cfg.n_g + cfg.n_sep);
  if (cfg.duration_s * cfg.f_s_hz < 2.0 * period)
    fail("duration_s must cover at least two code periods");
}

std::string render_config(const ExperimentConfig& cfg) {
  std::string out;
  auto kv = [&out](const char* key, const std::string& val) {
    out += key;
    out += " = ";
    out += val;
    out += '\n';
  };
  kv("scheme", scheme_name(cfg.scheme));
  kv("n_g", std::to_string(cfg.n_g));
  kv("n_sep", std::to_string(cfg.n_sep));
  kv("f_s_hz", format_double(cfg.f_s_hz));
  kv("duration_s", format_double(cfg.duration_s));
  kv("seed", std::to_string(cfg.seed));
  kv("reference_index", std::to_string(cfg.reference_index));
  kv("std_window_s", format_double(cfg.std_window_s));
  kv("sweep_seed_policy", cfg.sweep_increment_seed ? "increment" : "fixed");

  out += "\n[array]\n";
  kv("n_fbg", std::to_string(cfg.array.n_fbg));
  kv("d_s_m", format_double(cfg.array.d_s_m));
  kv("reflectivity", format_double(cfg.array.reflectivity));
  kv("group_index", format_double(cfg.array.group_index));
  kv("lead_fiber_m", format_double(cfg.array.lead_fiber_m));
  kv("fiber_loss_db_per_km", format_double(cfg.array.fiber_loss_db_per_km));
  kv("segment_jones",
     cfg.jones_mode == SegmentJonesMode::identity ? "identity" : "random");

  out += "\n[laser]\n";
  kv("linewidth_hz", format_double(cfg.laser.linewidth_hz));
  kv("wavelength_m", format_double(cfg.laser.wavelength_m));
  kv("rx_noise_sigma", format_double(cfg.laser.rx_noise_sigma));
  kv("signal_power_dbm", format_double(cfg.laser.signal_power_dbm));

  for (const auto& stim : cfg.array.stimuli) {
    out += "\n[stimulus]\n";
    kv("segment", std::to_string(stim.segment));
    kv("kind", kind_name(stim.waveform.kind));
    kv("amplitude_vpp", format_double(stim.waveform.amplitude_vpp));
    kv("f_start_hz", format_double(stim.waveform.f_start_hz));
    kv("f_end_hz", format_double(stim.waveform.f_end_hz));
    kv("duration_s", format_double(stim.waveform.duration_s));
  }

  out += "\n[outputs]\n";
  kv("directory", cfg.outputs.directory);
  kv("write_iq", cfg.outputs.write_iq ? "true" : "false");
  kv("psd_row", std::to_string(cfg.outputs.psd_row));
  return out;
}

ProbeFrame build_frame(const ExperimentConfig& cfg) {
  const GolaySet set = generate_golay_set(cfg.n_g);
  return cfg.scheme == Scheme::pdm_qpsk
             ? build_pdm_qpsk_frame(set, cfg.f_s_hz)
             : build_pdm_bpsk_frame(set, cfg.n_sep, cfg.f_s_hz);
}

SensorArrayConfig resolved_array(const ExperimentConfig& cfg) {
  SensorArrayConfig array = cfg.array;
  if (cfg.jones_mode == SegmentJonesMode::identity)
    array.segment_jones.assign(array.n_fbg, JonesMatrix::identity());
  return array;
}

}  // namespace ccdas
