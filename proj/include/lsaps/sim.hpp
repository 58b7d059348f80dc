#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lsaps/smoothers.hpp"

namespace lsaps::sim {

struct LorentzianPeak {
    double center = 0.0;
    double height = 1.0;
    double half_width = 1.0;
};

/// Broad Gaussian hump plus linear ramp.
struct Background {
    double hump_center = 0.0;
    double hump_height = 0.0;
    double hump_width = 1.0;  // standard deviation, abscissa units
    double slope = 0.0;
    double intercept = 0.0;

    [[nodiscard]] double operator()(double t) const;
};

/**
 * Sum of Lorentzians on the half-open grid t_k = start + k (stop - start) / n.
 * Doubling n keeps every coarse grid point, so resolutions nest exactly when the
 * step is a dyadic fraction.
 */
struct SimScenario {
    std::vector<LorentzianPeak> peaks;
    std::size_t n = 1000;
    double start = 0.0;
    double stop = 1000.0;
    std::optional<Background> background;
    std::uint64_t seed = 0;
    double noise_sigma = 0.0;

    void validate() const;
    [[nodiscard]] std::vector<double> grid() const;
    /// Nearest grid index of every peak center, in peak order.
    [[nodiscard]] std::vector<std::size_t> center_indices() const;
};

/// The built-in 15-peak scenario used by the benchmark defaults: heights span
/// 20x, half-widths span 10x, and one pair sits 1.5 combined half-widths apart.
[[nodiscard]] SimScenario default_scenario(std::size_t n = 1000);
[[nodiscard]] Background default_background();

[[nodiscard]] Spectrum generate_clean(const SimScenario& scenario);

/**
 * Standard normal deviates: std::mt19937_64 (whose output sequence is fixed by
 * the C++ standard) feeding the Box-Muller transform. u1 = (b + 1) 2^-53 and
 * u2 = b 2^-53 for the top 53 bits b of successive draws; both outputs of each
 * pair are used, cosine first.
 */
class GaussianNoise {
public:
    explicit GaussianNoise(std::uint64_t seed) : engine_(seed) {}
    double next();

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

struct NoisySpectrum {
    Spectrum noisy;
    std::vector<double> noise;
    double snr_db = 0.0;  // +inf when sigma == 0
};

[[nodiscard]] NoisySpectrum add_noise(const Spectrum& clean, double sigma, std::uint64_t seed);

/// Noise level giving the requested SNR in expectation: ||x|| / sqrt(n) * 10^(-snr/20).
[[nodiscard]] double sigma_for_snr(std::span<const double> clean, double snr_db);

/// 10 log10(||reference||^2 / ||estimate - reference||^2); +inf on exact equality.
[[nodiscard]] double snr(std::span<const double> reference, std::span<const double> estimate);

/// ||D x* - D x_true|| / ||D x_true||
[[nodiscard]] double rrse_second_derivative(std::span<const double> estimate,
                                            std::span<const double> truth);

// ---------------------------------------------------------------------------
// Benchmark harness

struct NoiseLevel {
    enum class Kind { Sigma, TargetSnr };
    Kind kind = Kind::TargetSnr;
    double value = 30.0;
};

/// One method and its parameter column. An unset `method` is the identity
/// control ("none"), scored on the noisy input itself.
struct MethodSweep {
    std::string label;
    std::optional<Method> method;
    std::vector<SmootherConfig> configs;
};

struct BenchmarkConfig {
    SimScenario scenario;  // n, seed and noise_sigma are overridden per cell
    std::vector<std::size_t> resolutions{500, 1000, 2000};
    std::vector<NoiseLevel> noise_levels;
    std::vector<std::uint64_t> seeds;
    std::vector<MethodSweep> methods;
    int timing_repeats = 5;
};

/// Parameter grids for the four smoothers (the SG sweep covers every order
/// 1 <= order < window; window 1 uses order 0), plus the identity control.
[[nodiscard]] std::vector<MethodSweep> default_method_sweeps(bool include_control = true);

struct CellResult {
    std::size_t resolution = 0;
    std::size_t level = 0;  // index into noise_levels
    std::uint64_t seed = 0;
    std::string method;
    std::string parameter;
    double input_snr = 0.0;
    double output_snr = 0.0;
    double rrse = 0.0;
    double seconds = 0.0;
    std::string status = "ok";
};

enum class Criterion { Snr, Rrse };

struct BestRow {
    std::size_t resolution = 0;
    std::size_t level = 0;
    std::uint64_t seed = 0;
    std::string method;
    Criterion criterion = Criterion::Snr;
    std::string parameter;
    double value = 0.0;
    double input_snr = 0.0;
};

struct AggregateRow {
    std::size_t resolution = 0;
    std::size_t level = 0;
    std::string method;
    Criterion criterion = Criterion::Snr;
    double mean_input_snr = 0.0;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation over seeds
    std::size_t count = 0;
};

struct TimingRow {
    std::size_t resolution = 0;
    std::string method;
    std::string mode;  // "single" or "auto"
    std::string parameter;
    double median_seconds = 0.0;
    int repeats = 0;
};

struct BenchmarkReport {
    std::vector<CellResult> cells;
    std::vector<BestRow> best;
    std::vector<AggregateRow> aggregates;
    std::vector<TimingRow> timings;
};

[[nodiscard]] std::string_view to_string(Criterion c) noexcept;

/// Best-parameter rows per (resolution, level, seed, method), the higher SNR
/// and the lower RRSE chosen independently.
[[nodiscard]] std::vector<BestRow> best_rows(std::span<const CellResult> cells);

/// Mean and sample standard deviation over seeds of the best rows.
[[nodiscard]] std::vector<AggregateRow> aggregate(std::span<const BestRow> best);

[[nodiscard]] BenchmarkReport run_benchmark(const BenchmarkConfig& config);

}  // namespace lsaps::sim
