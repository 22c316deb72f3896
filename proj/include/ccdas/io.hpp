#pragma once
// File formats: IQC1 binary captures, phase-map / PSD CSV, metric reports.
#include <memory>
#include <string>

#include "ccdas/analysis.hpp"
#include "ccdas/channel.hpp"
#include "ccdas/receiver.hpp"

namespace ccdas {

// Shortest round-trippable decimal form; used everywhere text output must be
// byte-reproducible.
std::string format_double(double v);

// IQC1: 64-byte header (magic "IQC1", u32 version, f64 sample rate,
// u64 sample count, i64 seed, f64 duration, zero padding), then one
// little-endian (rx_re, rx_im, ry_re, ry_im) float64 quad per sample.
void write_iq_capture(const std::string& path, const IQCapture& capture);
IQCapture read_iq_capture(const std::string& path);

// Same format, written incrementally; the sample count must be known up
// front. The destructor closes without the completeness check, so call
// finish() on the success path.
class IqWriter {
 public:
  IqWriter(const std::string& path, double f_s, std::uint64_t n_samples,
           std::int64_t seed, double duration_s);
  ~IqWriter();
  void append(std::size_t count, const std::complex<double>* rx,
              const std::complex<double>* ry);
  void finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// CSV with a time column and one column per sensor row.
void write_phase_map_csv(const std::string& path, const PhaseMap& map);

void write_psd_csv(const std::string& path, const PsdSeries& series);

// Flat key-value text, one metric per line.
void write_metric_report(const std::string& path, const MetricReport& report);
std::string render_metric_report(const MetricReport& report);

}  // namespace ccdas
