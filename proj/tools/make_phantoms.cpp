// Writes a corpus of synthetic brain-slice phantoms as PGM files.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "wavedenoise/imgio.hpp"
#include "wavedenoise/phantom.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate brain-slice phantom images"};
  std::string out_dir;
  int count = 10;
  std::size_t size = 256;
  std::uint64_t seed = 1000;
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--count", count, "Number of images")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--size", size, "Width and height in pixels")->check(CLI::Range(16, 4096))->capture_default_str();
  app.add_option("--seed", seed, "Seed of the first phantom; later ones use seed + i")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "phantom_%03d.pgm", i);
      const auto path = std::filesystem::path(out_dir) / name;
      wavedenoise::save_image(wavedenoise::make_brain_phantom(size, size, seed + static_cast<std::uint64_t>(i)), path);
      std::cout << path.string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
