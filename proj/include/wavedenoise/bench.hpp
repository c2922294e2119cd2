#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "wavedenoise/dwt.hpp"
#include "wavedenoise/error.hpp"
#include "wavedenoise/filters.hpp"
#include "wavedenoise/image.hpp"
#include "wavedenoise/imgio.hpp"
#include "wavedenoise/metrics.hpp"
#include "wavedenoise/noise.hpp"
#include "wavedenoise/shrinkage.hpp"

namespace wavedenoise {

/// Factorial experiment grid. Defaults are the full protocol:
/// three wavelets, depths 1-5, both threshold methods, both shrinkage modes,
/// noise sigma 10, 15 and 25.
struct GridSpec {
  std::vector<std::string> wavelets{"db3", "sym4", "bior6.8"};
  std::vector<int> depths{1, 2, 3, 4, 5};
  std::vector<ThresholdMethod> methods{ThresholdMethod::Bayes, ThresholdMethod::Universal};
  std::vector<ShrinkageMode> modes{ShrinkageMode::Hard, ShrinkageMode::Soft};
  std::vector<double> sigmas{10.0, 15.0, 25.0};
  std::uint64_t base_seed = 20240501;

  void validate() const {
    if (wavelets.empty() || depths.empty() || methods.empty() || modes.empty() || sigmas.empty()) {
      throw Error(ErrorCode::InvalidArgument, "grid lists must be non-empty");
    }
    for (const auto& w : wavelets) {
      if (!is_supported_wavelet(w)) get_filter_bank(w);  // throws UnknownWavelet
    }
    for (int d : depths) {
      if (d < 1) throw Error(ErrorCode::InvalidArgument, "grid depths must be >= 1");
    }
    for (double s : sigmas) {
      if (!std::isfinite(s) || s <= 0.0) {
        throw Error(ErrorCode::InvalidArgument, "grid sigmas must be finite and positive");
      }
    }
  }
};

struct ExperimentRecord {
  std::string image_id;
  double sigma = 0.0;
  std::string wavelet;
  int depth = 1;
  ThresholdMethod method = ThresholdMethod::Universal;
  ShrinkageMode mode = ShrinkageMode::Hard;
  double psnr_db = 0.0;
  double ssim = 0.0;

  bool operator==(const ExperimentRecord&) const = default;
};

struct ConfigKey {
  double sigma = 0.0;
  ThresholdMethod method = ThresholdMethod::Universal;
  int depth = 1;
  std::string wavelet;
  ShrinkageMode mode = ShrinkageMode::Hard;

  // Summary order: sigma, method name, depth, wavelet name, mode name.
  auto tie() const {
    return std::make_tuple(sigma, to_string(method), depth, std::string_view(wavelet),
                           to_string(mode));
  }
  bool operator<(const ConfigKey& o) const { return tie() < o.tie(); }
  bool operator==(const ConfigKey& o) const { return tie() == o.tie(); }
};

inline ConfigKey key_of(const ExperimentRecord& r) {
  return ConfigKey{r.sigma, r.method, r.depth, r.wavelet, r.mode};
}

struct AggregateRow {
  ConfigKey key;
  std::size_t n = 0;
  double psnr_mean = 0.0;
  double psnr_std = 0.0;
  double ssim_mean = 0.0;
  double ssim_std = 0.0;
};

struct NamedImage {
  std::string id;
  Image image;
};

/// Hooks for long runs and tests. `probe` sees every evaluated record along
/// with a hash of the noisy image it was computed from.
struct RunOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  std::function<void(const std::string&)> log;
  std::function<void(const ExperimentRecord&, std::uint64_t noisy_hash)> probe;
};

inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t hash = 0xcbf29ce484222325ULL) noexcept {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline std::uint64_t image_hash(const Image& img) noexcept {
  const auto px = img.pixels();
  const std::string_view bytes(reinterpret_cast<const char*>(px.data()), px.size() * sizeof(double));
  return fnv1a64(bytes);
}

/// Seed of the single noisy realisation shared by every configuration for
/// one (image, sigma) cell.
inline std::uint64_t noise_seed(std::uint64_t base_seed, std::string_view image_id, double sigma) {
  std::uint64_t bits = 0;
  static_assert(sizeof(bits) == sizeof(sigma));
  std::memcpy(&bits, &sigma, sizeof(bits));
  std::uint64_t state = base_seed ^ fnv1a64(image_id);
  const std::uint64_t mixed = splitmix64(state);
  state = mixed ^ bits;
  return splitmix64(state);
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kRecordsHeader =
    "image_id,sigma,wavelet,depth,method,mode,psnr_db,ssim";
inline constexpr std::string_view kSummaryHeader =
    "sigma,method,depth,wavelet,mode,n,psnr_mean,psnr_std,ssim_mean,ssim_std";

/// Shortest decimal form that parses back to the same double; "inf" for
/// the infinite PSNR sentinel.
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_fixed(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

inline double parse_number(std::string_view text) {
  if (text == "inf") return kInfinitePsnr;
  if (text == "-inf") return -kInfinitePsnr;
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::CorruptData, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

/// RFC 4180 field quoting.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::vector<std::string> parse_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw Error(ErrorCode::CorruptData, "unterminated quoted CSV field");
  fields.push_back(std::move(cur));
  return fields;
}

template <typename T, typename Fn>
std::string join(const std::vector<T>& items, Fn&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ' ';
    out += fmt(items[i]);
  }
  return out;
}

/// Comment line describing the grid that produced a records file.
inline std::string manifest_line(const GridSpec& grid) {
  std::string line = "# wavedenoise-bench";
  line += " wavelets=" + join(grid.wavelets, [](const std::string& w) { return w; });
  line += " depths=" + join(grid.depths, [](int d) { return std::to_string(d); });
  line += " methods=" +
          join(grid.methods, [](ThresholdMethod m) { return std::string(to_string(m)); });
  line += " modes=" + join(grid.modes, [](ShrinkageMode m) { return std::string(to_string(m)); });
  line += " sigmas=" + join(grid.sigmas, [](double s) { return format_number(s); });
  line += " base_seed=" + std::to_string(grid.base_seed);
  return line;
}

inline std::string format_record(const ExperimentRecord& r) {
  std::string line = csv_field(r.image_id);
  line += ',' + format_number(r.sigma);
  line += ',' + csv_field(r.wavelet);
  line += ',' + std::to_string(r.depth);
  line += ',' + std::string(to_string(r.method));
  line += ',' + std::string(to_string(r.mode));
  line += ',' + format_number(r.psnr_db);
  line += ',' + format_number(r.ssim);
  return line;
}

inline ExperimentRecord parse_record(std::string_view line) {
  const std::vector<std::string> f = parse_csv_line(line);
  if (f.size() != 8) {
    throw Error(ErrorCode::CorruptData, "record has " + std::to_string(f.size()) + " fields, expected 8");
  }
  ExperimentRecord r;
  r.image_id = f[0];
  r.sigma = parse_number(f[1]);
  r.wavelet = f[2];
  int depth = 0;
  const auto res = std::from_chars(f[3].data(), f[3].data() + f[3].size(), depth);
  if (res.ec != std::errc() || res.ptr != f[3].data() + f[3].size()) {
    throw Error(ErrorCode::CorruptData, "bad depth '" + f[3] + "'");
  }
  r.depth = depth;
  r.method = parse_threshold_method(f[4]);
  r.mode = parse_shrinkage_mode(f[5]);
  r.psnr_db = parse_number(f[6]);
  r.ssim = parse_number(f[7]);
  return r;
}

/// Read a records CSV. Lines starting with '#' are manifest comments.
inline std::vector<ExperimentRecord> read_records(std::istream& in) {
  std::vector<ExperimentRecord> records;
  std::string line;
  bool saw_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!saw_header) {
      if (line != kRecordsHeader) {
        throw Error(ErrorCode::CorruptData, "unexpected records header '" + line + "'");
      }
      saw_header = true;
      continue;
    }
    records.push_back(parse_record(line));
  }
  if (!saw_header) throw Error(ErrorCode::CorruptData, "records file has no header");
  return records;
}

inline std::vector<ExperimentRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
  return read_records(in);
}

// ---------------------------------------------------------------------------
// Grid execution

/// Supported image files in `dir`, sorted by file name.
inline std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::FileNotFound, "corpus directory '" + dir.string() + "' not found");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = detail::lower_extension(entry.path());
    if (ext == ".pgm" || ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

namespace detail {

struct GridCell {
  std::string wavelet;
  int depth;
  ThresholdMethod method;
  ShrinkageMode mode;
};

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(count, threads == 0 ? hw : threads));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
}

}  // namespace detail

/// Evaluate every legal configuration on every image and sigma. Records are
/// produced image-major, then sigma, then grid order, regardless of thread
/// count; each block is written to `out` (when given) as soon as it is done.
inline std::vector<ExperimentRecord> run_grid_images(const std::vector<NamedImage>& images,
                                                     const GridSpec& grid, std::ostream* out,
                                                     const RunOptions& options = {}) {
  grid.validate();
  if (images.empty()) throw Error(ErrorCode::EmptyCorpus, "no images to evaluate");
  if (out) *out << manifest_line(grid) << '\n' << kRecordsHeader << '\n';

  std::vector<ExperimentRecord> records;
  for (const NamedImage& item : images) {
    std::vector<detail::GridCell> cells;
    for (const auto& w : grid.wavelets) {
      const int limit = max_depth(item.image.width(), item.image.height(), get_filter_bank(w));
      for (int d : grid.depths) {
        if (d > limit) {
          if (options.log) {
            options.log("skip " + item.id + " " + w + " depth " + std::to_string(d) +
                        ": exceeds maximum depth " + std::to_string(limit));
          }
          continue;
        }
        for (auto m : grid.methods) {
          for (auto md : grid.modes) cells.push_back({w, d, m, md});
        }
      }
    }

    for (double sigma : grid.sigmas) {
      const Image noisy =
          add_gaussian_noise(item.image, {0.0, sigma, noise_seed(grid.base_seed, item.id, sigma)});
      const std::uint64_t noisy_hash = options.probe ? image_hash(noisy) : 0;
      std::vector<ExperimentRecord> block(cells.size());
      detail::parallel_for(cells.size(), options.threads, [&](std::size_t i) {
        const detail::GridCell& c = cells[i];
        const DenoiseConfig cfg{c.wavelet, c.depth, c.method, c.mode, NoiseSigmaPolicy::known(sigma)};
        const Image restored = denoise(noisy, cfg);
        block[i] = ExperimentRecord{item.id,  sigma,  c.wavelet,
                                    c.depth,  c.method, c.mode,
                                    psnr(item.image, restored), ssim(item.image, restored)};
      });
      for (const ExperimentRecord& r : block) {
        if (options.probe) options.probe(r, noisy_hash);
        if (out) *out << format_record(r) << '\n';
      }
      if (out) out->flush();
      records.insert(records.end(), block.begin(), block.end());
    }
  }
  return records;
}

/// Load every PGM/PNG in corpus_dir (image id = file name) and run the grid,
/// streaming records CSV to out_path.
inline std::vector<ExperimentRecord> run_grid(const std::filesystem::path& corpus_dir,
                                              const GridSpec& grid,
                                              const std::filesystem::path& out_path,
                                              const RunOptions& options = {}) {
  grid.validate();
  const auto files = list_corpus(corpus_dir);
  if (files.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "no PGM or PNG images in '" + corpus_dir.string() + "'");
  }
  std::vector<NamedImage> images;
  images.reserve(files.size());
  for (const auto& f : files) images.push_back({f.filename().string(), load_image(f)});

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + out_path.string() + "'");
  auto records = run_grid_images(images, grid, &out, options);
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + out_path.string() + "'");
  return records;
}

// ---------------------------------------------------------------------------
// Aggregation

/// Mean and sample (n - 1) standard deviation per configuration; std is 0
/// for single-record groups. Rows come out in summary order.
inline std::vector<AggregateRow> aggregate(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "no records to aggregate");
  std::map<ConfigKey, std::vector<const ExperimentRecord*>> groups;
  for (const auto& r : records) groups[key_of(r)].push_back(&r);

  std::vector<AggregateRow> rows;
  rows.reserve(groups.size());
  for (const auto& [key, members] : groups) {
    AggregateRow row;
    row.key = key;
    row.n = members.size();
    const double n = static_cast<double>(row.n);
    for (const auto* r : members) {
      row.psnr_mean += r->psnr_db;
      row.ssim_mean += r->ssim;
    }
    row.psnr_mean /= n;
    row.ssim_mean /= n;
    if (row.n > 1) {
      double sp = 0.0, ss = 0.0;
      for (const auto* r : members) {
        sp += (r->psnr_db - row.psnr_mean) * (r->psnr_db - row.psnr_mean);
        ss += (r->ssim - row.ssim_mean) * (r->ssim - row.ssim_mean);
      }
      row.psnr_std = std::sqrt(sp / (n - 1.0));
      row.ssim_std = std::sqrt(ss / (n - 1.0));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

/// True when `a` ranks above `b` within a (sigma, method) group: higher
/// mean PSNR, then higher mean SSIM, then smaller (wavelet, depth, mode).
inline bool ranks_above(const AggregateRow& a, const AggregateRow& b) {
  if (a.psnr_mean != b.psnr_mean) return a.psnr_mean > b.psnr_mean;
  if (a.ssim_mean != b.ssim_mean) return a.ssim_mean > b.ssim_mean;
  return std::make_tuple(std::string_view(a.key.wavelet), a.key.depth, to_string(a.key.mode)) <
         std::make_tuple(std::string_view(b.key.wavelet), b.key.depth, to_string(b.key.mode));
}

/// Best row per (sigma, method), ordered by sigma then method name.
inline std::vector<AggregateRow> select_optima(const std::vector<AggregateRow>& rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "no aggregate rows");
  std::map<std::pair<double, std::string_view>, const AggregateRow*> best;
  for (const auto& row : rows) {
    const auto group = std::make_pair(row.key.sigma, to_string(row.key.method));
    auto it = best.find(group);
    if (it == best.end()) {
      best.emplace(group, &row);
    } else if (ranks_above(row, *it->second)) {
      it->second = &row;
    }
  }
  std::vector<AggregateRow> out;
  out.reserve(best.size());
  for (const auto& [group, row] : best) out.push_back(*row);
  return out;
}

enum class ReportFormat { Csv, Markdown };

inline ReportFormat parse_report_format(std::string_view text) {
  const std::string s = detail::to_lower(text);
  if (s == "csv") return ReportFormat::Csv;
  if (s == "markdown" || s == "md") return ReportFormat::Markdown;
  throw Error(ErrorCode::InvalidArgument,
              "unknown report format '" + std::string(text) + "' (expected csv or markdown)");
}

inline std::string summary_csv_line(const AggregateRow& r) {
  std::string line = format_number(r.key.sigma);
  line += ',' + std::string(to_string(r.key.method));
  line += ',' + std::to_string(r.key.depth);
  line += ',' + csv_field(r.key.wavelet);
  line += ',' + std::string(to_string(r.key.mode));
  line += ',' + std::to_string(r.n);
  line += ',' + format_fixed(r.psnr_mean, 6);
  line += ',' + format_fixed(r.psnr_std, 6);
  line += ',' + format_fixed(r.ssim_mean, 6);
  line += ',' + format_fixed(r.ssim_std, 6);
  return line;
}

/// Summary CSV of every aggregate row.
inline std::string render_summary_csv(const std::vector<AggregateRow>& rows) {
  std::vector<AggregateRow> sorted = rows;
  std::sort(sorted.begin(), sorted.end(),
            [](const AggregateRow& a, const AggregateRow& b) { return a.key < b.key; });
  std::string text(kSummaryHeader);
  text += '\n';
  for (const auto& r : sorted) text += summary_csv_line(r) + '\n';
  return text;
}

namespace detail {
inline std::string capitalised(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}
}  // namespace detail

/// Table of optimal configurations ordered by sigma, then method name.
/// Markdown columns: noise sigma, method, optimal depth, wavelet and
/// shrinkage mode, then PSNR and SSIM as mean ± std.
inline std::string render_report(const std::vector<AggregateRow>& optima, ReportFormat fmt) {
  if (optima.empty()) throw Error(ErrorCode::EmptyInput, "no rows to report");
  std::vector<AggregateRow> rows = optima;
  std::sort(rows.begin(), rows.end(), [](const AggregateRow& a, const AggregateRow& b) {
    return std::make_tuple(a.key.sigma, to_string(a.key.method)) <
           std::make_tuple(b.key.sigma, to_string(b.key.method));
  });
  if (fmt == ReportFormat::Csv) return render_summary_csv(rows);

  std::string text =
      "| Noise (σ) | Method | Opt. Decomp. Level | Opt. Wavelet | Opt. Thr. | PSNR (dB) | SSIM |\n"
      "|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    text += "| " + format_number(r.key.sigma) + " | " +
            detail::capitalised(to_string(r.key.method)) + " | " + std::to_string(r.key.depth) +
            " | " + r.key.wavelet + " | " + detail::capitalised(to_string(r.key.mode)) + " | " +
            format_fixed(r.psnr_mean, 3) + " ± " + format_fixed(r.psnr_std, 3) + " | " +
            format_fixed(r.ssim_mean, 3) + " ± " + format_fixed(r.ssim_std, 3) + " |\n";
  }
  return text;
}

}  // namespace wavedenoise
