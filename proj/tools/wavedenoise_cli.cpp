// Command-line frontend: add-noise, denoise, metrics, bench, report.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "wavedenoise/wavedenoise.hpp"

namespace wd = wavedenoise;

namespace {

// Shortest round-trip form, always with a decimal point ("1.0", "inf").
std::string cli_number(double v) {
  std::string s = wd::format_number(v);
  if (s.find_first_of(".ein") == std::string::npos) s += ".0";
  return s;
}

int cmd_add_noise(const std::string& input, const std::string& output, double sigma,
                  std::uint64_t seed) {
  const wd::Image clean = wd::load_image(input);
  const wd::Image noisy = wd::add_gaussian_noise(clean, {0.0, sigma, seed});
  wd::save_image(noisy, output);
  // Report against what was stored, i.e. after clipping and rounding.
  wd::Image stored = noisy;
  for (double& v : stored.mutable_pixels()) v = wd::quantize_pixel(v);
  std::cout << "psnr_db=" << cli_number(wd::psnr(clean, stored)) << '\n';
  return 0;
}

int cmd_denoise(const std::string& input, const std::string& output, const std::string& wavelet,
                int depth, const std::string& method, const std::string& mode,
                std::optional<double> sigma) {
  const wd::Image noisy = wd::load_image(input);
  wd::DenoiseConfig cfg;
  cfg.wavelet = wavelet;
  cfg.depth = depth;
  cfg.method = wd::parse_threshold_method(method);
  cfg.mode = wd::parse_shrinkage_mode(mode);
  cfg.sigma_policy = sigma ? wd::NoiseSigmaPolicy::known(*sigma) : wd::NoiseSigmaPolicy::estimate_mad();

  const wd::DenoiseResult result = wd::denoise_detailed(noisy, cfg);
  wd::save_image(result.image, output);
  std::cout << (result.sigma_estimated ? "sigma(estimated) = " : "sigma(known) = ")
            << cli_number(result.sigma) << '\n';
  for (const auto& t : result.thresholds) {
    std::cout << "tau " << wd::to_string(t.kind) << t.level << " = " << cli_number(t.tau) << '\n';
  }
  return 0;
}

int cmd_metrics(const std::string& ref, const std::string& test) {
  const wd::QualityReport q = wd::evaluate_quality(wd::load_image(ref), wd::load_image(test));
  std::cout << "psnr_db=" << cli_number(q.psnr_db) << " ssim=" << cli_number(q.ssim)
            << " mse=" << cli_number(q.mse) << '\n';
  return 0;
}

struct BenchArgs {
  std::string corpus;
  std::string out;
  std::string summary;
  std::vector<std::string> wavelets{"db3", "sym4", "bior6.8"};
  std::vector<int> depths{1, 2, 3, 4, 5};
  std::vector<std::string> methods{"bayes", "universal"};
  std::vector<std::string> modes{"hard", "soft"};
  std::vector<double> sigmas{10.0, 15.0, 25.0};
  std::uint64_t seed = wd::GridSpec{}.base_seed;
  unsigned threads = 0;
};

int cmd_bench(const BenchArgs& args) {
  wd::GridSpec grid;
  grid.wavelets = args.wavelets;
  grid.depths = args.depths;
  grid.methods.clear();
  for (const auto& m : args.methods) grid.methods.push_back(wd::parse_threshold_method(m));
  grid.modes.clear();
  for (const auto& m : args.modes) grid.modes.push_back(wd::parse_shrinkage_mode(m));
  grid.sigmas = args.sigmas;
  grid.base_seed = args.seed;

  wd::RunOptions options;
  options.threads = args.threads;
  options.log = [](const std::string& msg) { std::cerr << msg << '\n'; };
  const auto records = wd::run_grid(args.corpus, grid, args.out, options);
  const auto rows = wd::aggregate(records);
  if (!args.summary.empty()) {
    std::ofstream summary(args.summary, std::ios::binary);
    if (!summary) throw wd::Error(wd::ErrorCode::IoError, "cannot write '" + args.summary + "'");
    summary << wd::render_summary_csv(rows);
  }
  std::cerr << records.size() << " records written to " << args.out << '\n';
  std::cout << wd::render_report(wd::select_optima(rows), wd::ReportFormat::Markdown);
  return 0;
}

int cmd_report(const std::string& records_path, const std::string& fmt) {
  const auto format = wd::parse_report_format(fmt);
  const auto rows = wd::aggregate(wd::read_records(records_path));
  std::cout << wd::render_report(wd::select_optima(rows), format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wavelet shrinkage denoising for grayscale images"};
  app.require_subcommand(1);

  std::string input, output;
  double noise_sigma = 0.0;
  std::uint64_t noise_seed = 0;
  auto* add_noise = app.add_subcommand("add-noise", "Add seeded Gaussian noise and report PSNR");
  add_noise->add_option("--input,-i", input, "Clean image (PGM or PNG)")->required();
  add_noise->add_option("--output,-o", output, "Noisy image (.pgm or .png)")->required();
  add_noise->add_option("--sigma", noise_sigma, "Noise standard deviation")
      ->required()
      ->check(CLI::NonNegativeNumber);
  add_noise->add_option("--seed", noise_seed, "Noise generator seed")->capture_default_str();

  std::string wavelet = "bior6.8", method = "universal", mode = "hard";
  int depth = 2;
  std::optional<double> denoise_sigma;
  auto* denoise = app.add_subcommand("denoise", "Wavelet-shrinkage denoise one image");
  denoise->add_option("--input,-i", input, "Noisy image")->required();
  denoise->add_option("--output,-o", output, "Denoised image (.pgm or .png)")->required();
  denoise->add_option("--wavelet", wavelet, "db3, sym4 or bior6.8")
      ->check(CLI::IsMember({"db3", "sym4", "bior6.8"}))
      ->capture_default_str();
  denoise->add_option("--depth", depth, "Decomposition levels")->capture_default_str();
  denoise->add_option("--method", method, "Threshold method: bayes or universal")
      ->transform(CLI::IsMember({"bayes", "universal"}, CLI::ignore_case))
      ->capture_default_str();
  denoise->add_option("--mode", mode, "Shrinkage mode: hard or soft")
      ->transform(CLI::IsMember({"hard", "soft"}, CLI::ignore_case))
      ->capture_default_str();
  denoise->add_option("--sigma", denoise_sigma,
                      "Known noise sigma; estimated from the finest diagonal band when omitted")
      ->check(CLI::NonNegativeNumber);

  std::string ref, test;
  auto* metrics = app.add_subcommand("metrics", "PSNR, SSIM and MSE of a test image vs a reference");
  metrics->add_option("--ref", ref, "Reference image")->required();
  metrics->add_option("--test", test, "Test image")->required();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Run the factorial denoising experiment over a corpus");
  bench->add_option("--corpus", bench_args.corpus, "Directory of PGM/PNG images")->required();
  bench->add_option("--out", bench_args.out, "Records CSV output")->required();
  bench->add_option("--summary", bench_args.summary, "Summary CSV output (all configurations)");
  bench->add_option("--wavelets", bench_args.wavelets, "Wavelet list")
      ->delimiter(',')
      ->check(CLI::IsMember({"db3", "sym4", "bior6.8"}))
      ->capture_default_str();
  bench->add_option("--depths", bench_args.depths, "Depth list")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--methods", bench_args.methods, "Threshold methods")
      ->delimiter(',')
      ->transform(CLI::IsMember({"bayes", "universal"}, CLI::ignore_case))
      ->capture_default_str();
  bench->add_option("--modes", bench_args.modes, "Shrinkage modes")
      ->delimiter(',')
      ->transform(CLI::IsMember({"hard", "soft"}, CLI::ignore_case))
      ->capture_default_str();
  bench->add_option("--sigmas", bench_args.sigmas, "Noise sigmas")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--seed", bench_args.seed, "Base seed for noise realisations")
      ->capture_default_str();
  bench->add_option("--threads", bench_args.threads, "Worker threads (0: all cores)")
      ->capture_default_str();

  std::string records_path, fmt = "markdown";
  auto* report = app.add_subcommand("report", "Table of optimal configurations from a records CSV");
  report->add_option("--records", records_path, "Records CSV written by bench")->required();
  report->add_option("--fmt", fmt, "csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*add_noise) return cmd_add_noise(input, output, noise_sigma, noise_seed);
    if (*denoise) return cmd_denoise(input, output, wavelet, depth, method, mode, denoise_sigma);
    if (*metrics) return cmd_metrics(ref, test);
    if (*bench) return cmd_bench(bench_args);
    if (*report) return cmd_report(records_path, fmt);
  } catch (const wd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
