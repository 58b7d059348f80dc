#include "lsaps/localfit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsaps/error.hpp"

namespace lsaps {

double median(std::span<const double> values) {
    if (values.empty()) {
        throw Error(ErrorKind::InvalidSize, "median of an empty sequence");
    }
    std::vector<double> v(values.begin(), values.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::vector<double> local_quadratic_coefficients(std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < 5) {
        throw Error(ErrorKind::InvalidSize,
                    "local curvature needs at least 5 points, got " + std::to_string(n));
    }
    // Normal equations over xi = (-2..2): sum xi^2 = 10, sum xi^4 = 34, odd sums
    // vanish, which leaves a = (2 y_-2 - y_-1 - 2 y_0 - y_1 + 2 y_2) / 14.
    std::vector<double> a(n);
    for (std::size_t i = 2; i + 2 < n; ++i) {
        a[i] = (2.0 * y[i - 2] - y[i - 1] - 2.0 * y[i] - y[i + 1] + 2.0 * y[i + 2]) / 14.0;
    }
    a[0] = a[1] = a[2];
    a[n - 1] = a[n - 2] = a[n - 3];
    return a;
}

CurvatureWeights local_quadratic_curvature(std::span<const double> y) {
    CurvatureWeights w;
    w.values = local_quadratic_coefficients(y);
    for (double& v : w.values) {
        const double k = 2.0 * v;
        v = k * k;
    }
    w.median = median(w.values);
    return w;
}

CurvatureWeights clip_weights(CurvatureWeights weights) {
    if (weights.values.empty()) return weights;
    const double threshold = weights.clipped ? weights.median : median(weights.values);
    for (double& v : weights.values) v = std::min(v, threshold);
    weights.median = threshold;
    weights.clipped = true;
    return weights;
}

CurvatureWeights floor_weights(CurvatureWeights weights, double epsilon_ratio) {
    if (!(epsilon_ratio > 0.0)) {
        throw Error(ErrorKind::InvalidConfig, "floor ratio must be positive");
    }
    std::vector<double> positive;
    positive.reserve(weights.values.size());
    for (double v : weights.values) {
        if (v > 0.0) positive.push_back(v);
    }
    if (positive.empty()) {
        throw Error(ErrorKind::DegenerateSignal,
                    "all curvature weights are zero (input is affine)");
    }
    const double floor = epsilon_ratio * median(positive);
    for (double& v : weights.values) v = std::max(v, floor);
    return weights;
}

}  // namespace lsaps
