#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lsaps/localfit.hpp"

namespace lsaps {

/// Intensities sampled on a strictly increasing abscissa grid.
struct Spectrum {
    std::vector<double> abscissa;
    std::vector<double> intensity;
    std::string units;

    [[nodiscard]] std::size_t size() const noexcept { return intensity.size(); }

    /// Throws InvalidSize / Precondition when the invariants do not hold.
    void validate() const;
};

enum class Method { PS, LsaPs, SavitzkyGolay, Gaussian };

[[nodiscard]] std::string_view to_string(Method method) noexcept;
[[nodiscard]] Method parse_method(std::string_view name);

/// Parameters for one smoother; only the fields of `method` may be set.
struct SmootherConfig {
    Method method = Method::LsaPs;
    std::optional<double> lambda;      // PS
    std::optional<double> lambda_bar;  // LSA-PS
    std::optional<bool> clip;          // LSA-PS
    std::optional<int> window;         // SG, Gaussian
    std::optional<int> poly_order;     // SG

    static SmootherConfig ps(double lambda);
    static SmootherConfig lsa_ps(double lambda_bar, bool clip);
    static SmootherConfig savitzky_golay(int window, int poly_order);
    static SmootherConfig gaussian(int window);

    void validate() const;
    /// Compact "key=value;..." rendering used in report tables.
    [[nodiscard]] std::string describe() const;
};

/// Whittaker smoother: (I + lambda D^T D)^{-1} y.
[[nodiscard]] std::vector<double> smooth_ps(std::span<const double> y, double lambda);

struct LsaPsResult {
    std::vector<double> smoothed;
    CurvatureWeights weights;  // the weights that entered the solve
    double lambda = 0.0;       // lambda_bar * pre-clip median
};

/**
 * Locally self-adjusting smoother: (A + lambda D^T D)^{-1} A y with A from
 * five-point local quadratic fits and lambda = lambda_bar * median(A).
 *
 * Affine input has median(A) == 0; any lambda_bar > 0 then raises
 * DegenerateSignal rather than silently returning y.
 */
[[nodiscard]] LsaPsResult smooth_lsa_ps(std::span<const double> y, double lambda_bar,
                                        bool clip);

/// Same, with precomputed (unclipped) weights of y. Lets parameter sweeps
/// compute the local fits once.
[[nodiscard]] LsaPsResult smooth_lsa_ps(std::span<const double> y,
                                        const CurvatureWeights& raw_weights,
                                        double lambda_bar, bool clip);

/// Savitzky-Golay filter. Interior points use the convolution kernel; the first
/// and last half-windows are evaluated from the polynomial fitted to the first
/// and last full frame. 0 <= poly_order < window, window odd.
[[nodiscard]] std::vector<double> smooth_savitzky_golay(std::span<const double> y, int window,
                                                        int poly_order);

/// Least-squares projection matrix of a Savitzky-Golay frame, row-major
/// window x window. Row r gives the fitted value at frame position r.
[[nodiscard]] std::vector<double> savitzky_golay_projection(int window, int poly_order);

/// Truncated Gaussian kernel with sigma = window / 5 over `window` taps. Even
/// windows put the extra tap before the centre.
[[nodiscard]] std::vector<double> gaussian_kernel(int window);

/// Gaussian-weighted moving average; weights are renormalized near the edges.
[[nodiscard]] std::vector<double> smooth_gaussian(std::span<const double> y, int window);

/// Dispatch on config.method.
[[nodiscard]] std::vector<double> smooth(std::span<const double> y, const SmootherConfig& config);

}  // namespace lsaps
