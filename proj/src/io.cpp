#include "lsaps/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "lsaps/error.hpp"
#include "lsaps/linalg.hpp"
#include "lsaps/peaks.hpp"

namespace lsaps::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_double(std::string_view field) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    if (field.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
    return v;
}

std::vector<std::string_view> split(std::string_view line, Delimiter d) {
    std::vector<std::string_view> out;
    if (d == Delimiter::Whitespace) {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            const std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
            if (i > start) out.push_back(line.substr(start, i - start));
        }
        return out;
    }
    const char sep = d == Delimiter::Comma ? ',' : '\t';
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

Delimiter detect(std::string_view line) {
    if (line.find(',') != std::string_view::npos) return Delimiter::Comma;
    if (line.find('\t') != std::string_view::npos) return Delimiter::Tab;
    return Delimiter::Whitespace;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// ---- scenario schema helpers ------------------------------------------------

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
    throw Error(ErrorKind::Schema, field + ": " + what);
}

double get_number(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) schema_error(path + "." + key, "missing");
    const json& v = obj.at(key);
    if (!v.is_number()) schema_error(path + "." + key, "expected a number");
    return v.get<double>();
}

// A bare number is shorthand for a one-element list.
std::vector<double> get_number_list(const json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array() || v.empty()) schema_error(path, "expected a number or a non-empty array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) schema_error(path + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

std::vector<int> get_int_list(const json& v, const std::string& path) {
    std::vector<int> out;
    for (double d : get_number_list(v, path)) {
        if (d != std::floor(d)) schema_error(path, "expected integers");
        out.push_back(static_cast<int>(d));
    }
    return out;
}

bool parse_switch(const json& v, const std::string& path) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "on") return true;
        if (s == "off") return false;
    }
    schema_error(path, "expected \"on\", \"off\" or a boolean");
}

sim::MethodSweep parse_method_sweep(const std::string& name, const json& params) {
    const std::string path = "methods." + name;
    if (!params.is_object()) schema_error(path, "expected an object");
    const auto defaults = sim::default_method_sweeps(true);
    auto default_for = [&](const std::string& label) {
        for (const auto& s : defaults) {
            if (s.label == label) return s;
        }
        return sim::MethodSweep{};
    };

    if (name == "none") return {"none", std::nullopt, {}};

    sim::MethodSweep sweep;
    sweep.label = name;
    if (name == "ps") {
        sweep.method = Method::PS;
        if (!params.contains("lambda")) return default_for("ps");
        for (double l : get_number_list(params.at("lambda"), path + ".lambda")) {
            if (!(l >= 0.0)) schema_error(path + ".lambda", "values must be >= 0");
            sweep.configs.push_back(SmootherConfig::ps(l));
        }
    } else if (name == "lsa-ps") {
        sweep.method = Method::LsaPs;
        if (!params.contains("lambda_bar") && !params.contains("clip")) return default_for("lsa-ps");
        std::vector<double> grid = params.contains("lambda_bar")
                                       ? get_number_list(params.at("lambda_bar"), path + ".lambda_bar")
                                       : std::vector<double>{0.0001, 0.001, 0.01, 0.1, 0.5, 1, 2, 3, 4,
                                                             5, 6, 7, 8, 9, 10, 20, 50, 100};
        std::vector<bool> clips{false, true};
        if (params.contains("clip")) {
            clips.clear();
            const json& c = params.at("clip");
            if (c.is_array()) {
                for (std::size_t i = 0; i < c.size(); ++i) {
                    clips.push_back(parse_switch(c[i], path + ".clip[" + std::to_string(i) + "]"));
                }
            } else {
                clips.push_back(parse_switch(c, path + ".clip"));
            }
            if (clips.empty()) schema_error(path + ".clip", "expected at least one setting");
        }
        for (bool clip : clips) {
            for (double l : grid) {
                if (!(l >= 0.0)) schema_error(path + ".lambda_bar", "values must be >= 0");
                sweep.configs.push_back(SmootherConfig::lsa_ps(l, clip));
            }
        }
    } else if (name == "sg") {
        sweep.method = Method::SavitzkyGolay;
        if (!params.contains("window")) return default_for("sg");
        const auto windows = get_int_list(params.at("window"), path + ".window");
        std::optional<std::vector<int>> orders;
        if (params.contains("order") && !(params.at("order").is_string() && params.at("order") == "all")) {
            orders = get_int_list(params.at("order"), path + ".order");
        }
        for (int w : windows) {
            if (w < 1 || w % 2 == 0) schema_error(path + ".window", "windows must be odd and >= 1");
            if (w == 1) {
                sweep.configs.push_back(SmootherConfig::savitzky_golay(1, 0));
                continue;
            }
            if (orders) {
                for (int o : *orders) {
                    if (o >= 1 && o < w) sweep.configs.push_back(SmootherConfig::savitzky_golay(w, o));
                }
            } else {
                for (int o = 1; o < w; ++o) sweep.configs.push_back(SmootherConfig::savitzky_golay(w, o));
            }
        }
    } else if (name == "gaussian") {
        sweep.method = Method::Gaussian;
        if (!params.contains("window")) return default_for("gaussian");
        for (int w : get_int_list(params.at("window"), path + ".window")) {
            if (w < 1) schema_error(path + ".window", "windows must be >= 1");
            sweep.configs.push_back(SmootherConfig::gaussian(w));
        }
    } else {
        schema_error(path, "unknown method (expected none, ps, lsa-ps, sg or gaussian)");
    }
    if (sweep.configs.empty()) schema_error(path, "parameter sweep is empty");
    return sweep;
}

}  // namespace

Delimiter parse_delimiter(std::string_view name) {
    if (name == "auto") return Delimiter::Auto;
    if (name == "csv" || name == "comma") return Delimiter::Comma;
    if (name == "tsv" || name == "tab") return Delimiter::Tab;
    if (name == "whitespace" || name == "space") return Delimiter::Whitespace;
    throw Error(ErrorKind::InvalidConfig, "unknown format '" + std::string(name) + "'");
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", kPrecision, value);
    return buf;
}

Spectrum parse_two_column(std::string_view text, Delimiter delimiter) {
    std::vector<std::pair<double, double>> rows;
    std::size_t line_no = 0;
    bool first_content = true;
    Delimiter d = delimiter;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        line = trim(line);
        if (line.empty()) continue;
        if (d == Delimiter::Auto) d = detect(line);

        const auto fields = split(line, d);
        std::optional<double> x, y;
        if (fields.size() >= 2) {
            x = parse_double(fields[0]);
            y = parse_double(fields[1]);
        }
        if (!x || !y) {
            if (first_content) {
                first_content = false;
                if (delimiter == Delimiter::Auto) d = Delimiter::Auto;  // re-detect on data
                continue;
            }
            throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) +
                                              ": expected two numeric columns");
        }
        first_content = false;
        if (!std::isfinite(*x) || !std::isfinite(*y)) {
            throw Error(ErrorKind::Parse,
                        "line " + std::to_string(line_no) + ": non-finite value");
        }
        rows.emplace_back(*x, *y);
    }

    if (rows.size() < 5) {
        throw Error(ErrorKind::InvalidSize,
                    "need at least 5 data points, got " + std::to_string(rows.size()));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    Spectrum s;
    s.abscissa.reserve(rows.size());
    s.intensity.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].first == rows[i - 1].first) {
            throw Error(ErrorKind::Parse,
                        "duplicate abscissa value " + format_number(rows[i].first));
        }
        s.abscissa.push_back(rows[i].first);
        s.intensity.push_back(rows[i].second);
    }
    return s;
}

Spectrum ingest(const fs::path& path, Delimiter delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_two_column(buf.str(), delimiter);
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

void write_two_column(const fs::path& path, std::span<const double> abscissa,
                      std::span<const double> values, std::string_view header) {
    if (abscissa.size() != values.size()) {
        throw Error(ErrorKind::InvalidSize, "write_two_column: length mismatch");
    }
    std::string text;
    text.reserve(values.size() * 32);
    text += header;
    text += '\n';
    for (std::size_t i = 0; i < values.size(); ++i) {
        text += format_number(abscissa[i]);
        text += ',';
        text += format_number(values[i]);
        text += '\n';
    }
    write_text(path, text);
}

void RunManifest::validate() const {
    auto fail = [](const std::string& m) { throw Error(ErrorKind::InvalidConfig, m); };
    if (inputs.empty()) fail("no input files");
    for (const auto& p : inputs) {
        if (!fs::exists(p)) throw Error(ErrorKind::Io, "input not found: " + p.string());
    }
    const bool penalized = method == Method::PS || method == Method::LsaPs;
    if (penalized) {
        if (auto_select == fixed_parameter.has_value()) {
            fail("choose exactly one of a fixed parameter or automatic selection");
        }
        if (fixed_parameter && !(*fixed_parameter >= 0.0)) fail("parameter must be >= 0");
        if (auto_select && grid.empty()) fail("empty selection grid");
        if (window || poly_order) fail("window/order apply to sg and gaussian only");
    } else {
        if (auto_select || fixed_parameter) fail("sg and gaussian take a fixed window only");
        if (!window) fail("sg and gaussian need a window");
        if (method == Method::Gaussian && poly_order) fail("gaussian takes no order");
        if (method == Method::SavitzkyGolay && !poly_order) fail("sg needs an order");
    }
}

RunResult process(const Spectrum& input, const RunManifest& manifest) {
    const auto t0 = std::chrono::steady_clock::now();
    input.validate();
    RunResult r;
    r.input = input;
    r.method = std::string(to_string(manifest.method));
    const auto& y = input.intensity;

    const auto s0 = std::chrono::steady_clock::now();
    switch (manifest.method) {
        case Method::PS:
        case Method::LsaPs:
            if (manifest.auto_select) {
                Selection sel = select_parameter(y, manifest.method, manifest.grid, manifest.clip);
                r.parameter = sel.best_parameter;
                r.effective_lambda = sel.effective_lambda;
                r.smoothed = std::move(sel.smoothed);
                r.curve = std::move(sel.curve);
            } else if (manifest.method == Method::PS) {
                r.parameter = *manifest.fixed_parameter;
                r.effective_lambda = r.parameter;
                r.smoothed = smooth_ps(y, r.parameter);
            } else {
                LsaPsResult lsa = smooth_lsa_ps(y, *manifest.fixed_parameter, manifest.clip);
                r.parameter = *manifest.fixed_parameter;
                r.effective_lambda = lsa.lambda;
                r.smoothed = std::move(lsa.smoothed);
            }
            break;
        case Method::SavitzkyGolay:
            r.smoothed = smooth_savitzky_golay(y, *manifest.window, *manifest.poly_order);
            break;
        case Method::Gaussian:
            r.smoothed = smooth_gaussian(y, *manifest.window);
            break;
    }
    const auto s1 = std::chrono::steady_clock::now();
    r.smoothing_seconds = std::chrono::duration<double>(s1 - s0).count();

    if (manifest.peaks > 0) r.peaks = detect_peaks(r.smoothed, manifest.peaks, input.abscissa);
    r.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

void write_run(const RunResult& r, const RunManifest& manifest, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());

    const auto& x = r.input.abscissa;
    write_two_column(dir / "smoothed.csv", x, r.smoothed, "abscissa,intensity");

    const auto d = linalg::second_difference(r.smoothed);
    write_two_column(dir / "second_derivative.csv",
                     std::span<const double>(x).subspan(1, d.size()), d,
                     "abscissa,second_difference");

    std::string peaks = "index,abscissa,sharpness,intensity\n";
    if (r.peaks) {
        for (const auto& p : r.peaks->entries) {
            peaks += std::to_string(p.index) + ',' + format_number(p.abscissa) + ',' +
                     format_number(p.sharpness) + ',' + format_number(p.intensity) + '\n';
        }
    }
    write_text(dir / "peaks.csv", peaks);

    std::string cv = "parameter,loss,normalized_loss\n";
    if (r.curve) {
        for (std::size_t i = 0; i < r.curve->grid.size(); ++i) {
            cv += format_number(r.curve->grid[i]) + ',' + format_number(r.curve->losses[i]) + ',' +
                  format_number(r.curve->losses[i] / r.curve->normalization) + '\n';
        }
    }
    write_text(dir / "cv_curve.csv", cv);

    json summary;
    summary["points"] = r.input.size();
    summary["method"] = r.method;
    summary["selection"] = r.curve ? "auto" : "fixed";
    if (manifest.method == Method::PS || manifest.method == Method::LsaPs) {
        summary["parameter"] = r.parameter;
        summary["effective_lambda"] = r.effective_lambda;
    }
    if (manifest.method == Method::LsaPs) summary["clip"] = manifest.clip;
    if (manifest.window) summary["window"] = *manifest.window;
    if (manifest.poly_order) summary["order"] = *manifest.poly_order;
    if (r.curve) {
        json curve;
        curve["grid"] = r.curve->grid;
        json losses = json::array();
        for (double l : r.curve->losses) losses.push_back(number_or_null(l));
        curve["losses"] = losses;
        curve["best_index"] = r.curve->best_index;
        curve["normalization"] = r.curve->normalization;
        summary["cv_curve"] = curve;
    }
    summary["peaks_requested"] = manifest.peaks;
    summary["peaks_found"] = r.peaks ? r.peaks->size() : 0;
    summary["precision_digits"] = kPrecision;
    summary["timing_seconds"] = {{"smoothing", r.smoothing_seconds}, {"total", r.total_seconds}};
    write_text(dir / "summary.json", summary.dump(2) + "\n");
}

std::vector<RunResult> run_smooth(const RunManifest& manifest) {
    manifest.validate();
    std::vector<RunResult> results;
    for (const auto& path : manifest.inputs) {
        const Spectrum s = ingest(path, manifest.delimiter);
        RunResult r = process(s, manifest);
        const fs::path dir = manifest.inputs.size() == 1
                                 ? manifest.output_dir
                                 : manifest.output_dir / path.stem();
        write_run(r, manifest, dir);
        results.push_back(std::move(r));
    }
    return results;
}

sim::BenchmarkConfig parse_scenario(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Schema, std::string("scenario: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) schema_error("scenario", "expected a JSON object");

    sim::BenchmarkConfig cfg;
    cfg.scenario = sim::default_scenario();

    if (doc.contains("abscissa")) {
        const json& a = doc.at("abscissa");
        if (!a.is_object()) schema_error("abscissa", "expected an object");
        cfg.scenario.start = get_number(a, "start", "abscissa");
        cfg.scenario.stop = get_number(a, "stop", "abscissa");
        if (!(cfg.scenario.stop > cfg.scenario.start)) schema_error("abscissa", "stop must exceed start");
    }

    if (doc.contains("peaks")) {
        const json& p = doc.at("peaks");
        if (p.is_string() && p.get<std::string>() == "default") {
            // keep the built-in table
        } else {
            if (!p.is_array() || p.empty()) schema_error("peaks", "expected a non-empty array or \"default\"");
            cfg.scenario.peaks.clear();
            for (std::size_t i = 0; i < p.size(); ++i) {
                const std::string path = "peaks[" + std::to_string(i) + "]";
                if (!p[i].is_object()) schema_error(path, "expected an object");
                sim::LorentzianPeak pk;
                pk.center = get_number(p[i], "center", path);
                pk.height = get_number(p[i], "height", path);
                pk.half_width = get_number(p[i], "half_width", path);
                if (!(pk.height > 0.0)) schema_error(path + ".height", "must be > 0");
                if (!(pk.half_width > 0.0)) schema_error(path + ".half_width", "must be > 0");
                if (pk.center < cfg.scenario.start || pk.center >= cfg.scenario.stop) {
                    schema_error(path + ".center", "outside the abscissa range");
                }
                cfg.scenario.peaks.push_back(pk);
            }
        }
    }

    if (doc.contains("background")) {
        const json& b = doc.at("background");
        if (b.is_string() && b.get<std::string>() == "default") {
            cfg.scenario.background = sim::default_background();
        } else if (b.is_object()) {
            sim::Background bg;
            bg.hump_center = get_number(b, "hump_center", "background");
            bg.hump_height = get_number(b, "hump_height", "background");
            bg.hump_width = get_number(b, "hump_width", "background");
            bg.slope = b.contains("slope") ? get_number(b, "slope", "background") : 0.0;
            bg.intercept = b.contains("intercept") ? get_number(b, "intercept", "background") : 0.0;
            if (!(bg.hump_width > 0.0)) schema_error("background.hump_width", "must be > 0");
            cfg.scenario.background = bg;
        } else if (!b.is_null()) {
            schema_error("background", "expected an object, \"default\" or null");
        }
    }

    if (doc.contains("resolutions")) {
        cfg.resolutions.clear();
        for (int r : get_int_list(doc.at("resolutions"), "resolutions")) {
            if (r < 5) schema_error("resolutions", "every resolution must be >= 5");
            cfg.resolutions.push_back(static_cast<std::size_t>(r));
        }
    }

    if (!doc.contains("noise")) schema_error("noise", "missing");
    {
        const json& n = doc.at("noise");
        if (!n.is_object()) schema_error("noise", "expected an object");
        const bool by_snr = n.contains("target_snr_db");
        const bool by_sigma = n.contains("sigma");
        if (by_snr == by_sigma) schema_error("noise", "give exactly one of target_snr_db or sigma");
        const std::string key = by_snr ? "target_snr_db" : "sigma";
        for (double v : get_number_list(n.at(key), "noise." + key)) {
            if (by_sigma && !(v >= 0.0)) schema_error("noise.sigma", "values must be >= 0");
            cfg.noise_levels.push_back(
                {by_snr ? sim::NoiseLevel::Kind::TargetSnr : sim::NoiseLevel::Kind::Sigma, v});
        }
    }

    if (!doc.contains("seeds")) schema_error("seeds", "missing");
    {
        const json& s = doc.at("seeds");
        if (s.is_array()) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (!s[i].is_number_unsigned() && !(s[i].is_number_integer() && s[i].get<long long>() >= 0)) {
                    schema_error("seeds[" + std::to_string(i) + "]", "expected a non-negative integer");
                }
                cfg.seeds.push_back(s[i].get<std::uint64_t>());
            }
        } else if (s.is_object()) {
            const double count = get_number(s, "count", "seeds");
            const double first = s.contains("first") ? get_number(s, "first", "seeds") : 0.0;
            if (count < 1 || count != std::floor(count)) schema_error("seeds.count", "expected an integer >= 1");
            if (first < 0 || first != std::floor(first)) schema_error("seeds.first", "expected an integer >= 0");
            for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(count); ++i) {
                cfg.seeds.push_back(static_cast<std::uint64_t>(first) + i);
            }
        } else {
            schema_error("seeds", "expected an array or {\"count\", \"first\"}");
        }
        if (cfg.seeds.empty()) schema_error("seeds", "need at least one seed");
    }

    if (doc.contains("methods")) {
        const json& m = doc.at("methods");
        if (!m.is_object() || m.empty()) schema_error("methods", "expected a non-empty object");
        // Fixed column order regardless of key order in the file.
        for (const char* name : {"none", "ps", "lsa-ps", "sg", "gaussian"}) {
            if (m.contains(name)) cfg.methods.push_back(parse_method_sweep(name, m.at(name)));
        }
        for (const auto& [key, value] : m.items()) {
            (void)value;
            if (key != "none" && key != "ps" && key != "lsa-ps" && key != "sg" && key != "gaussian") {
                schema_error("methods." + key, "unknown method");
            }
        }
    } else {
        cfg.methods = sim::default_method_sweeps(true);
    }

    if (doc.contains("timing")) {
        const json& t = doc.at("timing");
        if (!t.is_object()) schema_error("timing", "expected an object");
        const double reps = get_number(t, "repeats", "timing");
        if (reps < 0 || reps != std::floor(reps)) schema_error("timing.repeats", "expected an integer >= 0");
        cfg.timing_repeats = static_cast<int>(reps);
    }
    return cfg;
}

sim::BenchmarkConfig load_scenario(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

void write_benchmark(const sim::BenchmarkReport& report, const sim::BenchmarkConfig& config,
                     const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());

    auto level_value = [&](std::size_t level) { return format_number(config.noise_levels[level].value); };
    const std::string level_kind =
        config.noise_levels.front().kind == sim::NoiseLevel::Kind::Sigma ? "sigma" : "target_snr_db";

    std::string cells = "resolution,level," + level_kind +
                        ",seed,method,parameter,input_snr,output_snr,rrse,status,seconds\n";
    for (const auto& c : report.cells) {
        cells += std::to_string(c.resolution) + ',' + std::to_string(c.level) + ',' +
                 level_value(c.level) + ',' + std::to_string(c.seed) + ',' + c.method + ',' +
                 c.parameter + ',' + format_number(c.input_snr) + ',' + format_number(c.output_snr) +
                 ',' + format_number(c.rrse) + ',' + c.status + ',' + format_number(c.seconds) + '\n';
    }
    write_text(dir / "cells.csv", cells);

    std::string best = "resolution,level,seed,method,criterion,parameter,value,input_snr\n";
    for (const auto& b : report.best) {
        best += std::to_string(b.resolution) + ',' + std::to_string(b.level) + ',' +
                std::to_string(b.seed) + ',' + b.method + ',' + std::string(to_string(b.criterion)) +
                ',' + b.parameter + ',' + format_number(b.value) + ',' + format_number(b.input_snr) + '\n';
    }
    write_text(dir / "best.csv", best);

    std::string agg = "resolution,level," + level_kind +
                      ",method,criterion,mean_input_snr,mean,stddev,count\n";
    for (const auto& a : report.aggregates) {
        agg += std::to_string(a.resolution) + ',' + std::to_string(a.level) + ',' +
               level_value(a.level) + ',' + a.method + ',' + std::string(to_string(a.criterion)) +
               ',' + format_number(a.mean_input_snr) + ',' + format_number(a.mean) + ',' +
               format_number(a.stddev) + ',' + std::to_string(a.count) + '\n';
    }
    write_text(dir / "aggregate.csv", agg);

    std::string timing = "resolution,method,mode,parameter,repeats,median_seconds\n";
    for (const auto& t : report.timings) {
        timing += std::to_string(t.resolution) + ',' + t.method + ',' + t.mode + ',' + t.parameter +
                  ',' + std::to_string(t.repeats) + ',' + format_number(t.median_seconds) + '\n';
    }
    write_text(dir / "timing.csv", timing);

    json summary;
    summary["resolutions"] = config.resolutions;
    summary["noise_kind"] = level_kind;
    json levels = json::array();
    for (const auto& l : config.noise_levels) levels.push_back(l.value);
    summary["noise_levels"] = levels;
    summary["seeds"] = config.seeds;
    json methods = json::array();
    for (const auto& m : config.methods) {
        methods.push_back({{"label", m.label}, {"parameters", m.method ? m.configs.size() : 1}});
    }
    summary["methods"] = methods;
    summary["peaks"] = config.scenario.peaks.size();
    summary["background"] = config.scenario.background.has_value();
    summary["cells"] = report.cells.size();
    std::size_t failed = 0;
    for (const auto& c : report.cells) failed += c.status != "ok";
    summary["failed_cells"] = failed;
    json best_json = json::array();
    for (const auto& a : report.aggregates) {
        best_json.push_back({{"resolution", a.resolution},
                             {"level", config.noise_levels[a.level].value},
                             {"method", a.method},
                             {"criterion", to_string(a.criterion)},
                             {"mean_input_snr", number_or_null(a.mean_input_snr)},
                             {"mean", number_or_null(a.mean)},
                             {"stddev", number_or_null(a.stddev)}});
    }
    summary["aggregates"] = best_json;
    summary["precision_digits"] = kPrecision;
    write_text(dir / "summary.json", summary.dump(2) + "\n");
}

sim::BenchmarkReport run_benchmark_cmd(const fs::path& scenario_path, const fs::path& output_dir,
                                       std::optional<int> timing_repeats) {
    sim::BenchmarkConfig cfg = load_scenario(scenario_path);
    if (timing_repeats) cfg.timing_repeats = *timing_repeats;
    sim::BenchmarkReport report = sim::run_benchmark(cfg);
    write_benchmark(report, cfg, output_dir);
    return report;
}

}  // namespace lsaps::io
