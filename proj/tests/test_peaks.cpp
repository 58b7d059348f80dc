#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lsaps/linalg.hpp"
#include "lsaps/peaks.hpp"
#include "support/oracles.hpp"

using namespace lsaps;

namespace {

std::vector<double> lorentzians(std::size_t n, std::initializer_list<std::array<double, 3>> peaks) {
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [c, h, w] : peaks) {
            const double z = (static_cast<double>(i) - c) / w;
            x[i] += h / (1.0 + z * z);
        }
    }
    return x;
}

// Rebuild a signal whose second difference is exactly d (x0 = x1 = 0).
std::vector<double> integrate_twice(const std::vector<double>& d) {
    std::vector<double> x(d.size() + 2, 0.0);
    for (std::size_t r = 0; r < d.size(); ++r) x[r + 2] = d[r] + 2.0 * x[r + 1] - x[r];
    return x;
}

}  // namespace

TEST_CASE("detect_peaks") {
    SUBCASE("single Lorentzian apex") {
        const auto x = lorentzians(500, {{250.0, 3.0, 6.0}});
        const auto p = detect_peaks(x, 1);
        REQUIRE(p.size() == 1);
        CHECK(p.entries[0].index == 250);
        CHECK(p.entries[0].intensity == doctest::Approx(3.0));
        CHECK(p.entries[0].abscissa == 250.0);
    }
    SUBCASE("linear ramp has no peaks") {
        std::vector<double> x(100);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.5 * static_cast<double>(i);
        const auto p = detect_peaks(x, 5);
        CHECK(p.size() == 0);
        CHECK(p.candidates == 0);
    }
    SUBCASE("narrower peak ranks first") {
        // Analytic apex second difference: 2 h (1 / (1 + 1/w^2) - 1).
        auto apex = [](double h, double w) { return 2.0 * h * (1.0 / (1.0 + 1.0 / (w * w)) - 1.0); };
        CHECK(std::abs(apex(2.0, 3.0)) > std::abs(apex(2.0, 9.0)));
        const auto x = lorentzians(400, {{100.0, 2.0, 9.0}, {300.0, 2.0, 3.0}});
        const auto p = detect_peaks(x, 2);
        REQUIRE(p.size() == 2);
        CHECK(p.entries[0].index == 300);
        CHECK(p.entries[1].index == 100);
        CHECK(p.entries[0].sharpness > p.entries[1].sharpness);
        const auto d = linalg::second_difference(x);
        CHECK(p.entries[0].sharpness == std::abs(d[299]));
    }
    SUBCASE("plateau minimum reports its leftmost point") {
        const std::vector<double> d{0, -1, -3, -3, -1, 0, 0, -2, 0};
        const auto x = integrate_twice(d);
        const auto p = detect_peaks(x, 5);
        REQUIRE(p.size() == 2);
        CHECK(p.entries[0].index == 3);  // d index 2
        CHECK(p.entries[1].index == 8);  // d index 7
    }
    SUBCASE("returns at most k, sorted by sharpness") {
        std::mt19937_64 rng(12);
        const auto x = oracle::random_vector(rng, 300);
        const auto p = detect_peaks(x, 20);
        CHECK(p.size() == 20);
        CHECK(p.candidates >= 20);
        for (std::size_t i = 1; i < p.size(); ++i) CHECK(p.entries[i - 1].sharpness >= p.entries[i].sharpness);
        auto idx = p.indices();
        std::sort(idx.begin(), idx.end());
        CHECK(std::adjacent_find(idx.begin(), idx.end()) == idx.end());
        for (auto i : idx) {
            CHECK(i >= 2);
            CHECK(i + 3 <= x.size());
        }
    }
    SUBCASE("abscissa mapping") {
        const auto x = lorentzians(50, {{20.0, 1.0, 2.0}});
        std::vector<double> grid(50);
        for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = 400.0 + 2.0 * static_cast<double>(i);
        CHECK(detect_peaks(x, 1, grid).entries[0].abscissa == 440.0);
    }
}

TEST_CASE("detect_peaks invariances on smooth signals") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = oracle::random_smooth_signal(rng, 300);
        const auto base = detect_peaks(x, 10);
        CHECK(base.size() <= base.candidates);

        std::vector<double> trend(x), scaled(x), rev(x.rbegin(), x.rend());
        const double a = u(rng), b = u(rng), s = 0.1 + std::abs(u(rng));
        for (std::size_t i = 0; i < x.size(); ++i) {
            trend[i] += a + b * static_cast<double>(i) / 300.0;
            scaled[i] *= s;
        }
        CHECK(detect_peaks(trend, 10).indices() == base.indices());
        CHECK(detect_peaks(scaled, 10).indices() == base.indices());

        auto fwd = base.indices();
        auto bwd = detect_peaks(rev, 10).indices();
        for (auto& i : bwd) i = x.size() - 1 - i;
        std::sort(fwd.begin(), fwd.end());
        std::sort(bwd.begin(), bwd.end());
        CHECK(fwd == bwd);
    }
}

TEST_CASE("match_peaks") {
    auto set_at = [](std::vector<std::size_t> idx) {
        PeakSet s;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            s.entries.push_back({idx[i], static_cast<double>(idx[i]), 10.0 - static_cast<double>(i), 0.0});
        }
        return s;
    };
    const std::vector<std::size_t> truth{10, 40, 90};

    auto exact = match_peaks(set_at({10, 40, 90}), truth, 0);
    CHECK(exact.hits == 3);
    CHECK(exact.misses == 0);
    CHECK(exact.false_positives == 0);

    auto none = match_peaks(PeakSet{}, truth, 3);
    CHECK(none.hits == 0);
    CHECK(none.misses == 3);

    auto shifted = set_at({12, 42, 92});
    CHECK(match_peaks(shifted, truth, 3).hits == 3);
    auto strict = match_peaks(shifted, truth, 1);
    CHECK(strict.hits == 0);
    CHECK(strict.false_positives == 3);
    CHECK(strict.misses == 3);

    // One-to-one: two found peaks near the same truth, sharpest wins.
    auto crowded = match_peaks(set_at({41, 39}), truth, 3);
    CHECK(crowded.hits == 1);
    CHECK(crowded.false_positives == 1);
    CHECK(crowded.misses == 2);

    // Nearest unmatched truth is taken.
    const std::vector<std::size_t> close{20, 24};
    auto near = match_peaks(set_at({23, 21}), close, 3);
    CHECK(near.hits == 2);
}
