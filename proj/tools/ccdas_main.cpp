// Command-line front end: run one experiment, sweep a parameter, or check a
// generated code set.
#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccdas/codes.hpp"
#include "ccdas/io.hpp"
#include "ccdas/pipeline.hpp"

namespace {

int do_run(const std::string& config_path) {
  ccdas::ExperimentConfig cfg = ccdas::parse_config_file(config_path);
  ccdas::validate_config(cfg);

  std::string iq_path;
  if (cfg.outputs.write_iq) {
    std::filesystem::create_directories(cfg.outputs.directory);
    iq_path = (std::filesystem::path(cfg.outputs.directory) / "iq.bin").string();
  }
  const ccdas::RunResult result = ccdas::run_experiment(cfg, iq_path);
  ccdas::write_run_outputs(cfg, result);
  std::printf("frames=%d mean_std_rad=%s f_max_hz=%s\n", result.report.frames,
              ccdas::format_double(result.report.mean_std_rad).c_str(),
              ccdas::format_double(result.report.f_max_hz).c_str());
  return 0;
}

int do_sweep(const std::string& config_path, const std::string& param,
             const std::vector<double>& values) {
  ccdas::ExperimentConfig cfg = ccdas::parse_config_file(config_path);
  ccdas::validate_config(cfg);

  const auto points = ccdas::run_sweep(cfg, param, values);
  const std::filesystem::path dir(cfg.outputs.directory);
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "config.txt");
    f << ccdas::render_config(cfg);
  }
  ccdas::write_sweep_csv((dir / "sweep.csv").string(), points);
  for (const auto& p : points)
    std::printf("%s=%s mean_std_rad=%s\n", param.c_str(),
                ccdas::format_double(p.value).c_str(),
                ccdas::format_double(p.report.mean_std_rad).c_str());
  return 0;
}

int do_verify(int n_g, const std::string& dump_path) {
  const ccdas::GolaySet set = ccdas::generate_golay_set(n_g);
  const ccdas::GolayVerification v = ccdas::verify_golay_set(set);
  auto flag = [](bool b) { return b ? "true" : "false"; };
  std::printf("n_g %d\n", set.length());
  std::printf("complementary_1 %s\n", flag(v.pair1_complementary));
  std::printf("complementary_2 %s\n", flag(v.pair2_complementary));
  std::printf("mutual_a %s\n", flag(v.cross_a_orthogonal));
  std::printf("mutual_b %s\n", flag(v.cross_b_orthogonal));
  std::printf("max_sidelobe %lld\n", static_cast<long long>(v.max_sidelobe));
  if (!dump_path.empty()) {
    std::ofstream f(dump_path);
    ccdas::write_golay_dump(f, set);
  }
  return v.all() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"complementary-code sensor array interrogation toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = OpenMP default)");

  std::string run_config;
  auto* run_cmd = app.add_subcommand("run", "simulate and process one experiment");
  run_cmd->add_option("config", run_config, "experiment config file")->required();

  std::string sweep_config, sweep_param;
  std::vector<double> sweep_values;
  auto* sweep_cmd = app.add_subcommand("sweep", "repeat a run across parameter values");
  sweep_cmd->add_option("config", sweep_config, "experiment config file")->required();
  sweep_cmd->add_option("--param", sweep_param, "parameter to sweep")->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values")
      ->required()
      ->delimiter(',');

  int verify_ng = 0;
  std::string dump_path;
  auto* verify_cmd = app.add_subcommand("verify-codes", "check code identities");
  verify_cmd->add_option("--ng", verify_ng, "code length (power of two >= 4)")->required();
  verify_cmd->add_option("--dump", dump_path, "also write the sequences to this file");

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (run_cmd->parsed()) return do_run(run_config);
    if (sweep_cmd->parsed()) return do_sweep(sweep_config, sweep_param, sweep_values);
    return do_verify(verify_ng, dump_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
