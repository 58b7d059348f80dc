#include "lsaps/smoothers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "lsaps/error.hpp"
#include "lsaps/linalg.hpp"

namespace lsaps {

void Spectrum::validate() const {
    if (abscissa.size() != intensity.size()) {
        throw Error(ErrorKind::InvalidSize, "abscissa and intensity lengths differ");
    }
    for (std::size_t i = 0; i < intensity.size(); ++i) {
        if (!std::isfinite(abscissa[i]) || !std::isfinite(intensity[i])) {
            throw Error(ErrorKind::Precondition,
                        "non-finite value at point " + std::to_string(i));
        }
        if (i > 0 && !(abscissa[i] > abscissa[i - 1])) {
            throw Error(ErrorKind::Precondition,
                        "abscissa not strictly increasing at point " + std::to_string(i));
        }
    }
}

std::string_view to_string(Method method) noexcept {
    switch (method) {
        case Method::PS: return "ps";
        case Method::LsaPs: return "lsa-ps";
        case Method::SavitzkyGolay: return "sg";
        case Method::Gaussian: return "gaussian";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "ps") return Method::PS;
    if (name == "lsa-ps") return Method::LsaPs;
    if (name == "sg") return Method::SavitzkyGolay;
    if (name == "gaussian") return Method::Gaussian;
    throw Error(ErrorKind::InvalidConfig, "unknown method '" + std::string(name) + "'");
}

SmootherConfig SmootherConfig::ps(double lambda) {
    SmootherConfig c;
    c.method = Method::PS;
    c.lambda = lambda;
    return c;
}

SmootherConfig SmootherConfig::lsa_ps(double lambda_bar, bool clip) {
    SmootherConfig c;
    c.method = Method::LsaPs;
    c.lambda_bar = lambda_bar;
    c.clip = clip;
    return c;
}

SmootherConfig SmootherConfig::savitzky_golay(int window, int poly_order) {
    SmootherConfig c;
    c.method = Method::SavitzkyGolay;
    c.window = window;
    c.poly_order = poly_order;
    return c;
}

SmootherConfig SmootherConfig::gaussian(int window) {
    SmootherConfig c;
    c.method = Method::Gaussian;
    c.window = window;
    return c;
}

void SmootherConfig::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); };
    const bool penalized = method == Method::PS || method == Method::LsaPs;
    if (method != Method::PS && lambda) fail("lambda is only valid for ps");
    if (method != Method::LsaPs && (lambda_bar || clip)) fail("lambda_bar/clip only valid for lsa-ps");
    if (penalized && (window || poly_order)) fail("window/order not valid for penalized smoothers");
    if (method == Method::Gaussian && poly_order) fail("order not valid for gaussian");

    switch (method) {
        case Method::PS:
            if (!lambda || !(*lambda >= 0.0) || !std::isfinite(*lambda)) fail("ps needs lambda >= 0");
            break;
        case Method::LsaPs:
            if (!lambda_bar || !(*lambda_bar >= 0.0) || !std::isfinite(*lambda_bar)) {
                fail("lsa-ps needs lambda_bar >= 0");
            }
            if (!clip) fail("lsa-ps needs a clip setting");
            break;
        case Method::SavitzkyGolay:
            if (!window || *window < 1 || *window % 2 == 0) fail("sg window must be odd and >= 1");
            if (!poly_order || *poly_order < 0 || *poly_order >= *window) {
                fail("sg order must satisfy 0 <= order < window");
            }
            break;
        case Method::Gaussian:
            if (!window || *window < 1) fail("gaussian window must be >= 1");
            break;
    }
}

std::string SmootherConfig::describe() const {
    std::ostringstream os;
    os.precision(12);
    switch (method) {
        case Method::PS: os << "lambda=" << lambda.value_or(0.0); break;
        case Method::LsaPs:
            os << "lambda_bar=" << lambda_bar.value_or(0.0)
               << ";clip=" << (clip.value_or(false) ? "on" : "off");
            break;
        case Method::SavitzkyGolay:
            os << "window=" << window.value_or(0) << ";order=" << poly_order.value_or(0);
            break;
        case Method::Gaussian: os << "window=" << window.value_or(0); break;
    }
    return os.str();
}

std::vector<double> smooth_ps(std::span<const double> y, double lambda) {
    const std::vector<double> ones(y.size(), 1.0);
    return linalg::solve(linalg::assemble_system(ones, lambda), y);
}

LsaPsResult smooth_lsa_ps(std::span<const double> y, const CurvatureWeights& raw_weights,
                          double lambda_bar, bool clip) {
    if (raw_weights.size() != y.size()) {
        throw Error(ErrorKind::InvalidSize, "weights do not match the signal length");
    }
    if (!(lambda_bar >= 0.0) || !std::isfinite(lambda_bar)) {
        throw Error(ErrorKind::InvalidConfig, "lambda_bar must be finite and >= 0");
    }
    if (lambda_bar > 0.0 && raw_weights.median == 0.0) {
        throw Error(ErrorKind::DegenerateSignal,
                    "median curvature weight is zero (affine input); penalty scale undefined");
    }

    LsaPsResult out;
    out.lambda = lambda_bar * raw_weights.median;
    out.weights = clip ? clip_weights(raw_weights) : raw_weights;

    const auto& a = out.weights.values;
    std::vector<double> rhs(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) rhs[i] = a[i] * y[i];
    out.smoothed = linalg::solve(linalg::assemble_system(a, out.lambda), rhs);
    return out;
}

LsaPsResult smooth_lsa_ps(std::span<const double> y, double lambda_bar, bool clip) {
    return smooth_lsa_ps(y, local_quadratic_curvature(y), lambda_bar, clip);
}

std::vector<double> savitzky_golay_projection(int window, int poly_order) {
    if (window < 1 || window % 2 == 0) {
        throw Error(ErrorKind::InvalidConfig, "sg window must be odd and >= 1");
    }
    if (poly_order < 0 || poly_order >= window) {
        throw Error(ErrorKind::InvalidConfig, "sg order must satisfy 0 <= order < window");
    }
    const auto w = static_cast<std::size_t>(window);
    std::vector<double> proj(w * w, 0.0);
    if (poly_order == window - 1) {
        for (std::size_t r = 0; r < w; ++r) proj[r * w + r] = 1.0;
        return proj;
    }

    // Orthonormal basis of polynomials up to poly_order on the frame, built by
    // Stieltjes recursion (multiply by t, then re-orthogonalize twice).
    const double half = std::max(1.0, static_cast<double>(w - 1) / 2.0);
    std::vector<double> t(w);
    for (std::size_t r = 0; r < w; ++r) t[r] = (static_cast<double>(r) - (w - 1) / 2.0) / half;

    std::vector<std::vector<double>> basis;
    basis.emplace_back(w, 1.0 / std::sqrt(static_cast<double>(w)));
    for (int k = 1; k <= poly_order; ++k) {
        std::vector<double> v(w);
        for (std::size_t r = 0; r < w; ++r) v[r] = t[r] * basis.back()[r];
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : basis) {
                double dot = 0.0;
                for (std::size_t r = 0; r < w; ++r) dot += q[r] * v[r];
                for (std::size_t r = 0; r < w; ++r) v[r] -= dot * q[r];
            }
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        for (double& x : v) x /= norm;
        basis.push_back(std::move(v));
    }

    for (const auto& q : basis) {
        for (std::size_t r = 0; r < w; ++r) {
            for (std::size_t c = 0; c < w; ++c) proj[r * w + c] += q[r] * q[c];
        }
    }
    return proj;
}

namespace {

// y_i + sum_j k_j (y_j - y_i) / sum_j k_j: constants pass through bit-exactly.
double weighted_mean_about(std::span<const double> y, std::size_t center,
                           std::span<const double> kernel, std::size_t first) {
    double acc = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < kernel.size(); ++j) {
        acc += kernel[j] * (y[first + j] - y[center]);
        total += kernel[j];
    }
    return y[center] + acc / total;
}

}  // namespace

std::vector<double> smooth_savitzky_golay(std::span<const double> y, int window, int poly_order) {
    const std::vector<double> proj = savitzky_golay_projection(window, poly_order);
    const auto w = static_cast<std::size_t>(window);
    const std::size_t n = y.size();
    if (n < w) {
        throw Error(ErrorKind::InvalidConfig, "sg window exceeds signal length");
    }
    if (w == 1) return {y.begin(), y.end()};

    const std::size_t m = w / 2;
    std::vector<double> out(n);
    const std::span<const double> centre_row(proj.data() + m * w, w);
    for (std::size_t i = m; i + m < n; ++i) {
        out[i] = weighted_mean_about(y, i, centre_row, i - m);
    }
    for (std::size_t r = 0; r < m; ++r) {
        out[r] = weighted_mean_about(y, r, std::span<const double>(proj.data() + r * w, w), 0);
        const std::size_t tail_row = w - m + r;
        const std::size_t tail_index = n - m + r;
        out[tail_index] = weighted_mean_about(
            y, tail_index, std::span<const double>(proj.data() + tail_row * w, w), n - w);
    }
    return out;
}

std::vector<double> gaussian_kernel(int window) {
    if (window < 1) {
        throw Error(ErrorKind::InvalidConfig, "gaussian window must be >= 1");
    }
    const double sigma = window / 5.0;
    const int first = -(window / 2);
    std::vector<double> k(static_cast<std::size_t>(window));
    double total = 0.0;
    for (int j = 0; j < window; ++j) {
        const double offset = first + j;
        k[static_cast<std::size_t>(j)] = std::exp(-0.5 * (offset / sigma) * (offset / sigma));
        total += k[static_cast<std::size_t>(j)];
    }
    for (double& v : k) v /= total;
    return k;
}

std::vector<double> smooth_gaussian(std::span<const double> y, int window) {
    const std::vector<double> kernel = gaussian_kernel(window);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
    if (n < 1) {
        throw Error(ErrorKind::InvalidSize, "gaussian smoothing of an empty signal");
    }
    const std::ptrdiff_t first = -(window / 2);
    std::vector<double> out(y.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i + first);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n, i + first + window);
        const auto k0 = static_cast<std::size_t>(lo - (i + first));
        out[static_cast<std::size_t>(i)] = weighted_mean_about(
            y, static_cast<std::size_t>(i),
            std::span<const double>(kernel).subspan(k0, static_cast<std::size_t>(hi - lo)),
            static_cast<std::size_t>(lo));
    }
    return out;
}

std::vector<double> smooth(std::span<const double> y, const SmootherConfig& config) {
    config.validate();
    switch (config.method) {
        case Method::PS: return smooth_ps(y, *config.lambda);
        case Method::LsaPs: return smooth_lsa_ps(y, *config.lambda_bar, *config.clip).smoothed;
        case Method::SavitzkyGolay: return smooth_savitzky_golay(y, *config.window, *config.poly_order);
        case Method::Gaussian: return smooth_gaussian(y, *config.window);
    }
    throw Error(ErrorKind::InvalidConfig, "unhandled method");
}

}  // namespace lsaps
