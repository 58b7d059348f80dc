#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsaps/peaks.hpp"
#include "lsaps/select.hpp"
#include "lsaps/sim.hpp"
#include "lsaps/smoothers.hpp"

namespace lsaps::io {

/// Significant digits of every number written by this module.
inline constexpr int kPrecision = 12;

enum class Delimiter { Auto, Comma, Tab, Whitespace };

[[nodiscard]] Delimiter parse_delimiter(std::string_view name);

/// Format a value with kPrecision significant digits ("inf"/"nan" for non-finite).
[[nodiscard]] std::string format_number(double value);

/**
 * Parse a two-column text export. Delimiter is detected from the first data
 * row unless given; a single non-numeric first row is treated as a header.
 * Rows are sorted by abscissa. Duplicate abscissae, non-finite values and
 * fewer than 5 points are rejected.
 */
[[nodiscard]] Spectrum parse_two_column(std::string_view text, Delimiter delimiter = Delimiter::Auto);
[[nodiscard]] Spectrum ingest(const std::filesystem::path& path, Delimiter delimiter = Delimiter::Auto);

void write_two_column(const std::filesystem::path& path, std::span<const double> abscissa,
                      std::span<const double> values, std::string_view header);

// ---------------------------------------------------------------------------
// smooth run

struct RunManifest {
    std::vector<std::filesystem::path> inputs;
    Delimiter delimiter = Delimiter::Auto;
    Method method = Method::LsaPs;
    std::optional<double> fixed_parameter;  // lambda (ps) or lambda_bar (lsa-ps)
    bool auto_select = true;                // ps / lsa-ps only
    bool clip = true;
    std::vector<double> grid = default_cv_grid();
    std::optional<int> window;      // sg, gaussian
    std::optional<int> poly_order;  // sg
    std::size_t peaks = 0;          // 0: no peak table requested
    std::filesystem::path output_dir = "lsaps-out";

    void validate() const;
};

struct RunResult {
    Spectrum input;
    std::vector<double> smoothed;
    std::string method;
    double parameter = 0.0;           // selected or fixed; 0 for sg/gaussian
    double effective_lambda = 0.0;
    std::optional<CvCurve> curve;
    std::optional<PeakSet> peaks;
    double smoothing_seconds = 0.0;
    double total_seconds = 0.0;
};

/// Smooth one spectrum as the manifest describes (no file output).
[[nodiscard]] RunResult process(const Spectrum& input, const RunManifest& manifest);

/**
 * Run every input and write, per input directory:
 *   smoothed.csv, second_derivative.csv, peaks.csv, cv_curve.csv, summary.json
 * A single input writes straight into output_dir; several inputs get one
 * subdirectory each, named after the file stem.
 */
std::vector<RunResult> run_smooth(const RunManifest& manifest);

void write_run(const RunResult& result, const RunManifest& manifest,
               const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// benchmark run

/// Parse a JSON scenario document into a benchmark configuration.
/// Schema violations raise ErrorKind::Schema naming the offending field.
[[nodiscard]] sim::BenchmarkConfig parse_scenario(std::string_view json_text);
[[nodiscard]] sim::BenchmarkConfig load_scenario(const std::filesystem::path& path);

/// Writes cells.csv, best.csv, aggregate.csv, timing.csv and summary.json.
void write_benchmark(const sim::BenchmarkReport& report, const sim::BenchmarkConfig& config,
                     const std::filesystem::path& dir);

sim::BenchmarkReport run_benchmark_cmd(const std::filesystem::path& scenario_path,
                                       const std::filesystem::path& output_dir,
                                       std::optional<int> timing_repeats = std::nullopt);

}  // namespace lsaps::io
