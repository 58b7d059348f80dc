#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lsaps {

struct Peak {
    std::size_t index = 0;   // signal index of the apex
    double abscissa = 0.0;   // abscissa[index] when a grid is supplied, else index
    double sharpness = 0.0;  // |second difference| at the apex
    double intensity = 0.0;
};

/// Peaks ordered by descending sharpness.
struct PeakSet {
    std::vector<Peak> entries;
    std::size_t requested = 0;
    std::size_t candidates = 0;  // strict local minima of the second difference with d < 0

    [[nodiscard]] std::size_t size() const noexcept { return entries.size(); }
    [[nodiscard]] std::vector<std::size_t> indices() const;
};

/**
 * Rank the negative local minima of the second difference of x by |d| and keep
 * the top k. A flat run of equal minima reports its leftmost point. Equal
 * sharpness is broken toward the lower index.
 */
[[nodiscard]] PeakSet detect_peaks(std::span<const double> x, std::size_t k,
                                   std::span<const double> abscissa = {});

struct MatchReport {
    std::size_t hits = 0;
    std::size_t misses = 0;
    std::size_t false_positives = 0;
};

/// Greedy one-to-one matching in the PeakSet's order: each found peak takes the
/// nearest unmatched true index within +/- tolerance (lower index on ties).
[[nodiscard]] MatchReport match_peaks(const PeakSet& found, std::span<const std::size_t> truth,
                                      std::size_t tolerance);

}  // namespace lsaps
