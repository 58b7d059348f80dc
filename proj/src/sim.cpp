#include "lsaps/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <tuple>

#include "lsaps/error.hpp"
#include "lsaps/linalg.hpp"
#include "lsaps/select.hpp"

namespace lsaps::sim {

namespace {

// Neumaier summation keeps aggregate means independent of accumulation noise.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double squared_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

template <typename F>
double time_call(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::max(std::chrono::duration<double>(t1 - t0).count(),
                    std::numeric_limits<double>::min());
}

template <typename F>
double median_time(F&& fn, int repeats) {
    fn();  // warm-up
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) t.push_back(time_call(fn));
    return lsaps::median(t);
}

}  // namespace

double Background::operator()(double t) const {
    const double z = (t - hump_center) / hump_width;
    return hump_height * std::exp(-0.5 * z * z) + slope * t + intercept;
}

void SimScenario::validate() const {
    if (peaks.empty()) throw Error(ErrorKind::Schema, "scenario needs at least one peak");
    if (n < 5) throw Error(ErrorKind::Schema, "scenario resolution must be >= 5");
    if (!(stop > start)) throw Error(ErrorKind::Schema, "scenario range must satisfy stop > start");
    if (!(noise_sigma >= 0.0)) throw Error(ErrorKind::Schema, "noise sigma must be >= 0");
    for (const auto& p : peaks) {
        if (!(p.height > 0.0)) throw Error(ErrorKind::Schema, "peak height must be > 0");
        if (!(p.half_width > 0.0)) throw Error(ErrorKind::Schema, "peak half_width must be > 0");
        if (p.center < start || p.center >= stop) {
            throw Error(ErrorKind::Schema, "peak center outside the abscissa range");
        }
    }
    if (background && !(background->hump_width > 0.0)) {
        throw Error(ErrorKind::Schema, "background hump_width must be > 0");
    }
}

std::vector<double> SimScenario::grid() const {
    const double step = (stop - start) / static_cast<double>(n);
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = start + static_cast<double>(k) * step;
    return t;
}

std::vector<std::size_t> SimScenario::center_indices() const {
    const double step = (stop - start) / static_cast<double>(n);
    std::vector<std::size_t> idx;
    idx.reserve(peaks.size());
    for (const auto& p : peaks) {
        const double k = std::round((p.center - start) / step);
        idx.push_back(static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(n - 1))));
    }
    return idx;
}

SimScenario default_scenario(std::size_t n) {
    SimScenario s;
    s.n = n;
    s.start = 0.0;
    s.stop = 1000.0;
    s.peaks = {
        {50.0, 4.0, 3.0},   {115.0, 1.5, 10.0}, {180.0, 8.0, 2.0},  {250.0, 0.8, 6.0},
        {320.0, 10.0, 1.5}, {390.0, 3.0, 15.0}, {460.0, 6.0, 2.5},  {530.0, 2.5, 5.0},
        {600.0, 5.0, 2.0},  {606.0, 3.5, 2.0},  {680.0, 2.0, 6.0},  {750.0, 7.0, 1.5},
        {820.0, 1.0, 8.0},  {885.0, 4.5, 3.0},  {950.0, 0.5, 3.0},
    };
    return s;
}

Background default_background() {
    Background b;
    b.hump_center = 500.0;
    b.hump_height = 3.0;
    b.hump_width = 200.0;
    b.slope = 0.002;
    b.intercept = 0.5;
    return b;
}

Spectrum generate_clean(const SimScenario& scenario) {
    scenario.validate();
    Spectrum s;
    s.abscissa = scenario.grid();
    s.intensity.assign(scenario.n, 0.0);
    for (std::size_t k = 0; k < scenario.n; ++k) {
        const double t = s.abscissa[k];
        double v = 0.0;
        for (const auto& p : scenario.peaks) {
            const double z = (t - p.center) / p.half_width;
            v += p.height / (1.0 + z * z);
        }
        if (scenario.background) v += (*scenario.background)(t);
        s.intensity[k] = v;
    }
    return s;
}

double GaussianNoise::next() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * kScale;
    const double u2 = static_cast<double>(engine_() >> 11) * kScale;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

NoisySpectrum add_noise(const Spectrum& clean, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorKind::InvalidConfig, "noise sigma must be finite and >= 0");
    }
    NoisySpectrum out;
    out.noisy = clean;
    out.noise.assign(clean.size(), 0.0);
    if (sigma > 0.0) {
        GaussianNoise gen(seed);
        for (std::size_t i = 0; i < clean.size(); ++i) {
            out.noise[i] = sigma * gen.next();
            out.noisy.intensity[i] = clean.intensity[i] + out.noise[i];
        }
    }
    const double noise_energy = squared_norm(out.noise);
    out.snr_db = noise_energy == 0.0
                     ? std::numeric_limits<double>::infinity()
                     : 10.0 * std::log10(squared_norm(clean.intensity) / noise_energy);
    return out;
}

double sigma_for_snr(std::span<const double> clean, double snr_db) {
    const double rms = std::sqrt(squared_norm(clean) / static_cast<double>(clean.size()));
    return rms * std::pow(10.0, -snr_db / 20.0);
}

double snr(std::span<const double> reference, std::span<const double> estimate) {
    if (reference.size() != estimate.size()) {
        throw Error(ErrorKind::InvalidSize, "snr: length mismatch");
    }
    const double signal = squared_norm(reference);
    if (signal == 0.0) throw Error(ErrorKind::UndefinedMetric, "snr of a zero reference");
    double err = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double e = estimate[i] - reference[i];
        err += e * e;
    }
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(signal / err);
}

double rrse_second_derivative(std::span<const double> estimate, std::span<const double> truth) {
    if (estimate.size() != truth.size()) {
        throw Error(ErrorKind::InvalidSize, "rrse: length mismatch");
    }
    const auto de = linalg::second_difference(estimate);
    const auto dt = linalg::second_difference(truth);
    const double denom = squared_norm(dt);
    if (denom == 0.0) {
        throw Error(ErrorKind::UndefinedMetric, "rrse undefined for an affine reference");
    }
    double num = 0.0;
    for (std::size_t k = 0; k < de.size(); ++k) {
        const double e = de[k] - dt[k];
        num += e * e;
    }
    return std::sqrt(num) / std::sqrt(denom);
}

std::vector<MethodSweep> default_method_sweeps(bool include_control) {
    const std::vector<double> grid = {0.0001, 0.001, 0.01, 0.1, 0.5, 1, 2, 3, 4,
                                      5,      6,     7,    8,   9,   10, 20, 50, 100};
    std::vector<MethodSweep> sweeps;
    if (include_control) sweeps.push_back({"none", std::nullopt, {}});

    MethodSweep ps{"ps", Method::PS, {}};
    for (double l : grid) ps.configs.push_back(SmootherConfig::ps(l));
    sweeps.push_back(std::move(ps));

    MethodSweep lsa{"lsa-ps", Method::LsaPs, {}};
    for (bool clip : {false, true}) {
        for (double l : grid) lsa.configs.push_back(SmootherConfig::lsa_ps(l, clip));
    }
    sweeps.push_back(std::move(lsa));

    MethodSweep sg{"sg", Method::SavitzkyGolay, {}};
    for (int w = 1; w <= 35; w += 2) {
        if (w == 1) {
            sg.configs.push_back(SmootherConfig::savitzky_golay(1, 0));
            continue;
        }
        for (int order = 1; order < w; ++order) {
            sg.configs.push_back(SmootherConfig::savitzky_golay(w, order));
        }
    }
    sweeps.push_back(std::move(sg));

    MethodSweep gauss{"gaussian", Method::Gaussian, {}};
    for (int w = 1; w <= 10; ++w) gauss.configs.push_back(SmootherConfig::gaussian(w));
    sweeps.push_back(std::move(gauss));
    return sweeps;
}

std::string_view to_string(Criterion c) noexcept {
    return c == Criterion::Snr ? "snr" : "rrse";
}

std::vector<BestRow> best_rows(std::span<const CellResult> cells) {
    using Key = std::tuple<std::size_t, std::size_t, std::uint64_t, std::string>;
    std::map<Key, std::pair<std::size_t, std::size_t>> slot;  // key -> (snr row, rrse row)
    std::vector<BestRow> rows;
    for (const auto& c : cells) {
        if (c.status != "ok") continue;
        const Key key{c.resolution, c.level, c.seed, c.method};
        auto it = slot.find(key);
        if (it == slot.end()) {
            BestRow s{c.resolution, c.level, c.seed, c.method, Criterion::Snr,
                      c.parameter, c.output_snr, c.input_snr};
            BestRow r{c.resolution, c.level, c.seed, c.method, Criterion::Rrse,
                      c.parameter, c.rrse, c.input_snr};
            slot.emplace(key, std::make_pair(rows.size(), rows.size() + 1));
            rows.push_back(std::move(s));
            rows.push_back(std::move(r));
            continue;
        }
        BestRow& s = rows[it->second.first];
        BestRow& r = rows[it->second.second];
        if (c.output_snr > s.value) {
            s.value = c.output_snr;
            s.parameter = c.parameter;
        }
        if (c.rrse < r.value) {
            r.value = c.rrse;
            r.parameter = c.parameter;
        }
    }
    return rows;
}

std::vector<AggregateRow> aggregate(std::span<const BestRow> best) {
    using Key = std::tuple<std::size_t, std::size_t, std::string, int>;
    struct Acc {
        std::vector<double> values;
        std::vector<double> inputs;
    };
    std::map<Key, std::size_t> slot;
    std::vector<Key> order;
    std::vector<Acc> accs;
    for (const auto& b : best) {
        const Key key{b.resolution, b.level, b.method, static_cast<int>(b.criterion)};
        auto [it, fresh] = slot.emplace(key, accs.size());
        if (fresh) {
            order.push_back(key);
            accs.emplace_back();
        }
        accs[it->second].values.push_back(b.value);
        accs[it->second].inputs.push_back(b.input_snr);
    }

    std::vector<AggregateRow> rows;
    rows.reserve(order.size());
    for (std::size_t g = 0; g < order.size(); ++g) {
        const auto& [res, level, method, crit] = order[g];
        const Acc& acc = accs[g];
        CompensatedSum sum, in_sum;
        for (double v : acc.values) sum.add(v);
        for (double v : acc.inputs) in_sum.add(v);
        const double count = static_cast<double>(acc.values.size());
        const double mean = sum.value() / count;
        double sd = 0.0;
        if (acc.values.size() > 1) {
            CompensatedSum sq;
            for (double v : acc.values) sq.add((v - mean) * (v - mean));
            sd = std::sqrt(sq.value() / (count - 1.0));
        }
        AggregateRow row;
        row.resolution = res;
        row.level = level;
        row.method = method;
        row.criterion = static_cast<Criterion>(crit);
        row.mean_input_snr = in_sum.value() / count;
        row.mean = mean;
        row.stddev = sd;
        row.count = acc.values.size();
        rows.push_back(std::move(row));
    }
    return rows;
}

BenchmarkReport run_benchmark(const BenchmarkConfig& config) {
    if (config.seeds.empty()) throw Error(ErrorKind::Schema, "benchmark needs at least one seed");
    if (config.resolutions.empty()) throw Error(ErrorKind::Schema, "benchmark needs a resolution");
    if (config.noise_levels.empty()) throw Error(ErrorKind::Schema, "benchmark needs a noise level");
    if (config.methods.empty()) throw Error(ErrorKind::Schema, "benchmark needs a method");

    BenchmarkReport report;
    for (std::size_t res : config.resolutions) {
        SimScenario scenario = config.scenario;
        scenario.n = res;
        const Spectrum clean = generate_clean(scenario);

        for (std::size_t level = 0; level < config.noise_levels.size(); ++level) {
            const NoiseLevel& nl = config.noise_levels[level];
            const double sigma = nl.kind == NoiseLevel::Kind::Sigma
                                     ? nl.value
                                     : sigma_for_snr(clean.intensity, nl.value);
            for (std::uint64_t seed : config.seeds) {
                const NoisySpectrum draw = add_noise(clean, sigma, seed);
                const auto& y = draw.noisy.intensity;
                const std::optional<CurvatureWeights> raw =
                    y.size() >= 5 ? std::optional(local_quadratic_curvature(y)) : std::nullopt;

                for (const auto& sweep : config.methods) {
                    auto record = [&](const std::string& param, auto&& run) {
                        CellResult cell;
                        cell.resolution = res;
                        cell.level = level;
                        cell.seed = seed;
                        cell.method = sweep.label;
                        cell.parameter = param;
                        cell.input_snr = draw.snr_db;
                        try {
                            std::vector<double> out;
                            cell.seconds = time_call([&] { out = run(); });
                            cell.output_snr = snr(clean.intensity, out);
                            cell.rrse = rrse_second_derivative(out, clean.intensity);
                            if (std::isnan(cell.output_snr) || std::isnan(cell.rrse)) {
                                cell.status = "error:non-finite";
                            }
                        } catch (const Error& e) {
                            cell.status = "error:" + std::string(to_string(e.kind()));
                            cell.output_snr = std::numeric_limits<double>::quiet_NaN();
                            cell.rrse = std::numeric_limits<double>::quiet_NaN();
                        }
                        report.cells.push_back(std::move(cell));
                    };

                    if (!sweep.method) {
                        record("none", [&] { return y; });
                        continue;
                    }
                    for (const auto& cfg : sweep.configs) {
                        if (cfg.method == Method::LsaPs && raw) {
                            record(cfg.describe(), [&] {
                                cfg.validate();
                                return smooth_lsa_ps(y, *raw, *cfg.lambda_bar, *cfg.clip).smoothed;
                            });
                        } else {
                            record(cfg.describe(), [&] { return smooth(y, cfg); });
                        }
                    }
                }
            }
        }

        if (config.timing_repeats > 0) {
            const double sigma =
                config.noise_levels.front().kind == NoiseLevel::Kind::Sigma
                    ? config.noise_levels.front().value
                    : sigma_for_snr(clean.intensity, config.noise_levels.front().value);
            const auto y = add_noise(clean, sigma, config.seeds.front()).noisy.intensity;
            const auto grid = default_cv_grid();
            for (const auto& sweep : config.methods) {
                if (!sweep.method) continue;
                SmootherConfig probe;
                switch (*sweep.method) {
                    case Method::PS: probe = SmootherConfig::ps(1.0); break;
                    case Method::LsaPs: probe = SmootherConfig::lsa_ps(1.0, true); break;
                    case Method::SavitzkyGolay: probe = SmootherConfig::savitzky_golay(11, 2); break;
                    case Method::Gaussian: probe = SmootherConfig::gaussian(5); break;
                }
                try {
                    const double t = median_time([&] { (void)smooth(y, probe); },
                                                 config.timing_repeats);
                    report.timings.push_back(
                        {res, sweep.label, "single", probe.describe(), t, config.timing_repeats});
                    if (*sweep.method == Method::PS || *sweep.method == Method::LsaPs) {
                        const double ta = median_time(
                            [&] { (void)select_parameter(y, *sweep.method, grid, true); },
                            config.timing_repeats);
                        report.timings.push_back(
                            {res, sweep.label, "auto", "default-grid", ta, config.timing_repeats});
                    }
                } catch (const Error&) {
                    // Timing is informational; failing configurations already show up per cell.
                }
            }
        }
    }

    report.best = best_rows(report.cells);
    report.aggregates = aggregate(report.best);
    return report;
}

}  // namespace lsaps::sim
