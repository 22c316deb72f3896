#include "ccdas/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace ccdas {
namespace {

constexpr char kMagic[4] = {'I', 'Q', 'C', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 64;

void put(std::uint8_t* dst, const void* src, std::size_t len) {
  std::memcpy(dst, src, len);
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode) {
  std::ofstream f(path, mode);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct IqWriter::Impl {
  std::ofstream file;
  std::uint64_t expected = 0;
  std::uint64_t written = 0;
  std::string path;
};

IqWriter::IqWriter(const std::string& path, double f_s, std::uint64_t n_samples,
                   std::int64_t seed, double duration_s)
    : impl_(new Impl{open_out(path, std::ios::binary), n_samples, 0, path}) {
  std::uint8_t header[kHeaderBytes] = {};
  put(header + 0, kMagic, 4);
  put(header + 4, &kVersion, 4);
  put(header + 8, &f_s, 8);
  put(header + 16, &n_samples, 8);
  put(header + 24, &seed, 8);
  put(header + 32, &duration_s, 8);
  impl_->file.write(reinterpret_cast<const char*>(header), kHeaderBytes);
}

IqWriter::~IqWriter() = default;

void IqWriter::append(std::size_t count, const std::complex<double>* rx,
                      const std::complex<double>* ry) {
  double quad[4];
  for (std::size_t i = 0; i < count; ++i) {
    quad[0] = rx[i].real();
    quad[1] = rx[i].imag();
    quad[2] = ry[i].real();
    quad[3] = ry[i].imag();
    impl_->file.write(reinterpret_cast<const char*>(quad), 32);
  }
  impl_->written += count;
}

void IqWriter::finish() {
  if (impl_->written != impl_->expected)
    throw std::runtime_error("IQC1 sample count mismatch: " + impl_->path);
  impl_->file.flush();
  if (!impl_->file) throw std::runtime_error("write failed: " + impl_->path);
}

void write_iq_capture(const std::string& path, const IQCapture& capture) {
  auto f = open_out(path, std::ios::binary);
  std::uint8_t header[kHeaderBytes] = {};
  const std::uint64_t n = capture.e_rx.size();
  put(header + 0, kMagic, 4);
  put(header + 4, &kVersion, 4);
  put(header + 8, &capture.f_s, 8);
  put(header + 16, &n, 8);
  put(header + 24, &capture.seed, 8);
  put(header + 32, &capture.duration_s, 8);
  f.write(reinterpret_cast<const char*>(header), kHeaderBytes);

  std::vector<double> quad(4);
  for (std::uint64_t i = 0; i < n; ++i) {
    quad[0] = capture.e_rx[i].real();
    quad[1] = capture.e_rx[i].imag();
    quad[2] = capture.e_ry[i].real();
    quad[3] = capture.e_ry[i].imag();
    f.write(reinterpret_cast<const char*>(quad.data()), 32);
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

IQCapture read_iq_capture(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::uint8_t header[kHeaderBytes];
  f.read(reinterpret_cast<char*>(header), kHeaderBytes);
  if (!f) throw std::runtime_error("truncated IQC1 header: " + path);
  if (std::memcmp(header, kMagic, 4) != 0)
    throw std::runtime_error("not an IQC1 file: " + path);
  std::uint32_t version;
  std::memcpy(&version, header + 4, 4);
  if (version != kVersion)
    throw std::runtime_error("unsupported IQC1 version: " + path);

  IQCapture cap;
  std::uint64_t n;
  std::memcpy(&cap.f_s, header + 8, 8);
  std::memcpy(&n, header + 16, 8);
  std::memcpy(&cap.seed, header + 24, 8);
  std::memcpy(&cap.duration_s, header + 32, 8);
  cap.e_rx.resize(n);
  cap.e_ry.resize(n);
  double quad[4];
  for (std::uint64_t i = 0; i < n; ++i) {
    f.read(reinterpret_cast<char*>(quad), 32);
    if (!f) throw std::runtime_error("truncated IQC1 samples: " + path);
    cap.e_rx[i] = {quad[0], quad[1]};
    cap.e_ry[i] = {quad[2], quad[3]};
  }
  return cap;
}

void write_phase_map_csv(const std::string& path, const PhaseMap& map) {
  auto f = open_out(path, std::ios::out);
  std::string line = "time_s";
  for (std::size_t k = 0; k < map.n_rows(); ++k)
    line += ",fbg_" + std::to_string(k);
  f << line << '\n';
  for (std::size_t fr = 0; fr < map.n_frames(); ++fr) {
    line = format_double(fr * map.t_code_s);
    for (std::size_t k = 0; k < map.n_rows(); ++k) {
      line += ',';
      line += format_double(map.phases[k][fr]);
    }
    f << line << '\n';
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_psd_csv(const std::string& path, const PsdSeries& series) {
  auto f = open_out(path, std::ios::out);
  f << "freq_hz,density_rad2_per_hz\n";
  for (std::size_t j = 0; j < series.freq_hz.size(); ++j)
    f << format_double(series.freq_hz[j]) << ','
      << format_double(series.density[j]) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string render_metric_report(const MetricReport& report) {
  std::string out;
  auto kv = [&out](const std::string& key, const std::string& val) {
    out += key;
    out += ' ';
    out += val;
    out += '\n';
  };
  kv("frames", std::to_string(report.frames));
  kv("t_code_s", format_double(report.t_code_s));
  kv("f_max_hz", format_double(report.f_max_hz));
  kv("std_window_s", format_double(report.std_window_s));
  kv("mean_std_rad", format_double(report.mean_std_rad));
  for (std::size_t k = 0; k < report.per_fbg_std_rad.size(); ++k)
    kv("std_rad_fbg_" + std::to_string(k), format_double(report.per_fbg_std_rad[k]));
  for (std::size_t k = 0; k < report.near_limit_counts.size(); ++k)
    kv("near_limit_fbg_" + std::to_string(k), std::to_string(report.near_limit_counts[k]));
  if (report.crosstalk_db)
    kv("crosstalk_db", format_double(*report.crosstalk_db));
  if (report.sensitivity_rad_per_sqrt_hz)
    kv("sensitivity_rad_per_sqrt_hz", format_double(*report.sensitivity_rad_per_sqrt_hz));
  return out;
}

void write_metric_report(const std::string& path, const MetricReport& report) {
  auto f = open_out(path, std::ios::out);
  f << render_metric_report(report);
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace ccdas
