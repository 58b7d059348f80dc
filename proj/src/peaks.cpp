#include "lsaps/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsaps/error.hpp"
#include "lsaps/linalg.hpp"

namespace lsaps {

std::vector<std::size_t> PeakSet::indices() const {
    std::vector<std::size_t> out;
    out.reserve(entries.size());
    for (const auto& p : entries) out.push_back(p.index);
    return out;
}

PeakSet detect_peaks(std::span<const double> x, std::size_t k, std::span<const double> abscissa) {
    if (x.size() < 5) {
        throw Error(ErrorKind::InvalidSize, "peak detection needs at least 5 points");
    }
    if (k < 1) {
        throw Error(ErrorKind::InvalidConfig, "peak count must be >= 1");
    }
    if (!abscissa.empty() && abscissa.size() != x.size()) {
        throw Error(ErrorKind::InvalidSize, "abscissa length does not match the signal");
    }

    const std::vector<double> d = linalg::second_difference(x);
    const std::size_t m = d.size();

    // d[j] belongs to signal index j + 1; both neighbours of a minimum must exist.
    std::vector<std::size_t> minima;
    std::size_t j = 1;
    while (j + 1 < m) {
        if (!(d[j] < d[j - 1])) {
            ++j;
            continue;
        }
        std::size_t end = j;
        while (end + 1 < m && d[end + 1] == d[j]) ++end;
        if (end + 1 < m && d[end + 1] > d[j] && d[j] < 0.0) minima.push_back(j);
        j = end + 1;
    }

    std::sort(minima.begin(), minima.end(), [&](std::size_t a, std::size_t b) {
        if (d[a] != d[b]) return d[a] < d[b];
        return a < b;
    });

    PeakSet set;
    set.requested = k;
    set.candidates = minima.size();
    const std::size_t keep = std::min(k, minima.size());
    set.entries.reserve(keep);
    for (std::size_t r = 0; r < keep; ++r) {
        const std::size_t i = minima[r] + 1;
        Peak p;
        p.index = i;
        p.abscissa = abscissa.empty() ? static_cast<double>(i) : abscissa[i];
        p.sharpness = std::abs(d[minima[r]]);
        p.intensity = x[i];
        set.entries.push_back(p);
    }
    return set;
}

MatchReport match_peaks(const PeakSet& found, std::span<const std::size_t> truth,
                        std::size_t tolerance) {
    std::vector<bool> taken(truth.size(), false);
    MatchReport report;
    for (const auto& peak : found.entries) {
        std::size_t best = truth.size();
        std::size_t best_gap = 0;
        for (std::size_t t = 0; t < truth.size(); ++t) {
            if (taken[t]) continue;
            const std::size_t gap =
                peak.index > truth[t] ? peak.index - truth[t] : truth[t] - peak.index;
            if (gap > tolerance) continue;
            if (best == truth.size() || gap < best_gap ||
                (gap == best_gap && truth[t] < truth[best])) {
                best = t;
                best_gap = gap;
            }
        }
        if (best == truth.size()) {
            ++report.false_positives;
        } else {
            taken[best] = true;
            ++report.hits;
        }
    }
    report.misses = truth.size() - report.hits;
    return report;
}

}  // namespace lsaps
