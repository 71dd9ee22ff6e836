#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gssa/bootstrap.hpp"
#include "gssa/breaks.hpp"
#include "gssa/csv.hpp"
#include "gssa/errors.hpp"
#include "gssa/evaluation.hpp"
#include "gssa/forecast_record.hpp"
#include "gssa/kalman.hpp"
#include "gssa/rng.hpp"
#include "gssa/ssa.hpp"
#include "gssa/time_series.hpp"

namespace gssa {

inline constexpr const char* kToolVersion = "1.0.0";

/// The three forecasting methods the batch driver can run.
enum class Method { Ssa, Boot, Gssa };

inline const char* methodName(Method m) {
    switch (m) {
    case Method::Ssa:
        return "SSA";
    case Method::Boot:
        return "Boot SSA";
    case Method::Gssa:
        return "GSSA";
    }
    return "?";
}

/// Lowercase config/CLI token for a method.
inline const char* methodKey(Method m) {
    switch (m) {
    case Method::Ssa:
        return "ssa";
    case Method::Boot:
        return "boot";
    case Method::Gssa:
        return "gssa";
    }
    return "?";
}

inline Method parseMethod(std::string_view token) {
    if (token == "ssa") {
        return Method::Ssa;
    }
    if (token == "boot") {
        return Method::Boot;
    }
    if (token == "gssa") {
        return Method::Gssa;
    }
    throw std::invalid_argument("unknown method \"" + std::string(token) +
                                "\" (expected ssa, boot, or gssa)");
}

/// Thrown for unreadable or inconsistent experiment configuration; messages
/// carry the config source and line where applicable.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One series to forecast: either a CSV file or inline values, plus optional
/// per-series overrides of the resolved parameters.
struct SeriesSpec {
    std::string name;
    std::string file;           ///< CSV path; empty when `values` is used
    std::vector<double> values; ///< inline data, mainly for tests and demos
    std::optional<int> window_length;
    std::optional<int> rank;
    std::optional<int> break_index; ///< explicit split, skips detection
};

/// Full description of a batch run. Defaults mirror the monthly setting:
/// horizons up to a year, a thousand bootstrap replicates, two-year minimum
/// segments for break detection.
struct ExperimentConfig {
    std::uint64_t seed = 42;
    double smoothing_factor = 1e-4;
    int diff_lag = 1;
    int bootstrap_b = 1000;
    std::vector<int> horizons{1, 3, 6, 12};
    std::vector<Method> methods{Method::Ssa, Method::Boot, Method::Gssa};
    bool detect_break_points = true; ///< false: every series needs break_index
    bool gssa_bootstrap_covariance = false;
    int max_breaks = 5;
    int min_segment = 24;
    std::vector<SeriesSpec> series;

    void validate() const {
        if (horizons.empty()) {
            throw ConfigError("config: horizons must be nonempty");
        }
        for (const int h : horizons) {
            if (h < 1) {
                throw ConfigError("config: horizon " + std::to_string(h) + " is not positive");
            }
        }
        if (methods.empty()) {
            throw ConfigError("config: methods must be nonempty");
        }
        for (std::size_t i = 0; i < methods.size(); ++i) {
            for (std::size_t j = i + 1; j < methods.size(); ++j) {
                if (methods[i] == methods[j]) {
                    throw ConfigError(std::string("config: method ") + methodKey(methods[i]) +
                                      " listed twice");
                }
            }
        }
        if (bootstrap_b < 1) {
            throw ConfigError("config: bootstrap_b must be at least 1");
        }
        if (diff_lag < 1) {
            throw ConfigError("config: diff_lag must be at least 1");
        }
        if (smoothing_factor != 0.0 &&
            (smoothing_factor < 1e-8 || smoothing_factor > 1e-1)) {
            throw ConfigError("config: smoothing_factor must be 0 or in [1e-8, 0.1]");
        }
        if (max_breaks < 0) {
            throw ConfigError("config: max_breaks must be >= 0");
        }
        if (min_segment < 2) {
            throw ConfigError("config: min_segment must be >= 2");
        }
        if (series.empty()) {
            throw ConfigError("config: no series given");
        }
        for (const SeriesSpec& s : series) {
            if (s.name.empty()) {
                throw ConfigError("config: a series has no name");
            }
            const bool has_file = !s.file.empty();
            const bool has_values = !s.values.empty();
            if (has_file == has_values) {
                throw ConfigError("config: series \"" + s.name +
                                  "\" needs exactly one of file or values");
            }
            if (has_file && !std::filesystem::exists(s.file)) {
                throw ConfigError("config: series \"" + s.name + "\" file not found: " + s.file);
            }
            if (s.break_index && *s.break_index < 2) {
                throw ConfigError("config: series \"" + s.name +
                                  "\" break_index must be at least 2");
            }
            if (!detect_break_points && !s.break_index) {
                throw ConfigError("config: break detection is off but series \"" + s.name +
                                  "\" has no break_index");
            }
            if (s.window_length && *s.window_length < 2) {
                throw ConfigError("config: series \"" + s.name +
                                  "\" window_length must be at least 2");
            }
            if (s.rank && *s.rank < 1) {
                throw ConfigError("config: series \"" + s.name + "\" rank must be at least 1");
            }
        }
    }
};

namespace detail {

inline std::string_view trimView(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string> splitList(std::string_view s) {
    std::vector<std::string> out;
    while (!s.empty()) {
        const std::size_t comma = s.find(',');
        const std::string_view item = trimView(s.substr(0, comma));
        if (item.empty()) {
            throw std::invalid_argument("empty list item");
        }
        out.emplace_back(item);
        if (comma == std::string_view::npos) {
            break;
        }
        s.remove_prefix(comma + 1);
    }
    if (out.empty()) {
        throw std::invalid_argument("empty list");
    }
    return out;
}

inline long parseLong(const std::string& s) {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) {
        throw std::invalid_argument("trailing characters in integer \"" + s + "\"");
    }
    return v;
}

inline double parseDouble(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) {
        throw std::invalid_argument("bad number \"" + s + "\"");
    }
    return v;
}

inline bool parseBool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") {
        return true;
    }
    if (s == "false" || s == "0" || s == "no") {
        return false;
    }
    throw std::invalid_argument("bad boolean \"" + s + "\"");
}

} // namespace detail

/// Parses the flat key=value config dialect: global keys first, then one
/// [name] section per series. `#` and `;` start comments; `base_dir` anchors
/// relative series file paths.
inline ExperimentConfig parseConfigText(const std::string& text, const std::string& source,
                                        const std::string& base_dir) {
    ExperimentConfig cfg;
    cfg.series.clear();
    SeriesSpec* current = nullptr;

    std::istringstream in(text);
    std::string line;
    long line_number = 0;
    auto fail = [&](const std::string& msg) -> ConfigError {
        return ConfigError(source + ":" + std::to_string(line_number) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++line_number;
        std::string_view view = detail::trimView(line);
        if (view.empty() || view.front() == '#' || view.front() == ';') {
            continue;
        }
        if (view.front() == '[') {
            if (view.back() != ']') {
                throw fail("unterminated section header");
            }
            const std::string_view name = detail::trimView(view.substr(1, view.size() - 2));
            if (name.empty()) {
                throw fail("empty section name");
            }
            cfg.series.push_back(SeriesSpec{std::string(name)});
            current = &cfg.series.back();
            continue;
        }
        const std::size_t eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw fail("expected key = value");
        }
        const std::string key(detail::trimView(view.substr(0, eq)));
        const std::string value(detail::trimView(view.substr(eq + 1)));
        if (key.empty() || value.empty()) {
            throw fail("expected key = value");
        }

        try {
            if (current == nullptr) {
                if (key == "seed") {
                    cfg.seed = static_cast<std::uint64_t>(detail::parseLong(value));
                } else if (key == "smoothing_factor") {
                    cfg.smoothing_factor = detail::parseDouble(value);
                } else if (key == "diff_lag") {
                    cfg.diff_lag = static_cast<int>(detail::parseLong(value));
                } else if (key == "bootstrap_b") {
                    cfg.bootstrap_b = static_cast<int>(detail::parseLong(value));
                } else if (key == "horizons") {
                    cfg.horizons.clear();
                    for (const std::string& item : detail::splitList(value)) {
                        cfg.horizons.push_back(static_cast<int>(detail::parseLong(item)));
                    }
                } else if (key == "methods") {
                    cfg.methods.clear();
                    for (const std::string& item : detail::splitList(value)) {
                        cfg.methods.push_back(parseMethod(item));
                    }
                } else if (key == "detect_breaks") {
                    cfg.detect_break_points = detail::parseBool(value);
                } else if (key == "gssa_bootstrap_covariance") {
                    cfg.gssa_bootstrap_covariance = detail::parseBool(value);
                } else if (key == "max_breaks") {
                    cfg.max_breaks = static_cast<int>(detail::parseLong(value));
                } else if (key == "min_segment") {
                    cfg.min_segment = static_cast<int>(detail::parseLong(value));
                } else {
                    throw fail("unknown global key \"" + key + "\"");
                }
            } else {
                if (key == "file") {
                    current->file = base_dir.empty()
                                        ? value
                                        : (std::filesystem::path(base_dir) / value).string();
                } else if (key == "values") {
                    current->values.clear();
                    for (const std::string& item : detail::splitList(value)) {
                        current->values.push_back(detail::parseDouble(item));
                    }
                } else if (key == "window_length") {
                    current->window_length = static_cast<int>(detail::parseLong(value));
                } else if (key == "rank") {
                    current->rank = static_cast<int>(detail::parseLong(value));
                } else if (key == "break_index") {
                    current->break_index = static_cast<int>(detail::parseLong(value));
                } else {
                    throw fail("unknown series key \"" + key + "\"");
                }
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw fail(key + ": " + e.what());
        }
    }
    return cfg;
}

inline ExperimentConfig loadConfigFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path + ": cannot open config file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string dir = std::filesystem::path(path).parent_path().string();
    return parseConfigText(buffer.str(), path, dir);
}

namespace detail {

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string formatDouble(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

/// Canonical serialization of a config: global keys sorted, series kept in
/// declared order (their position feeds the RNG stream derivation) with
/// sorted keys inside each block. Key order in the source never changes it.
inline std::string canonicalConfig(const ExperimentConfig& cfg) {
    std::map<std::string, std::string> globals;
    globals["bootstrap_b"] = std::to_string(cfg.bootstrap_b);
    globals["detect_breaks"] = cfg.detect_break_points ? "true" : "false";
    globals["diff_lag"] = std::to_string(cfg.diff_lag);
    globals["gssa_bootstrap_covariance"] = cfg.gssa_bootstrap_covariance ? "true" : "false";
    std::string hs;
    for (const int h : cfg.horizons) {
        hs += (hs.empty() ? "" : ",") + std::to_string(h);
    }
    globals["horizons"] = hs;
    globals["max_breaks"] = std::to_string(cfg.max_breaks);
    std::string ms;
    for (const Method m : cfg.methods) {
        ms += (ms.empty() ? "" : ",") + std::string(methodKey(m));
    }
    globals["methods"] = ms;
    globals["min_segment"] = std::to_string(cfg.min_segment);
    globals["seed"] = std::to_string(cfg.seed);
    globals["smoothing_factor"] = detail::formatDouble(cfg.smoothing_factor);

    std::string out;
    for (const auto& [k, v] : globals) {
        out += k + "=" + v + "\n";
    }
    for (const SeriesSpec& s : cfg.series) {
        out += "[" + s.name + "]\n";
        std::map<std::string, std::string> keys;
        if (!s.file.empty()) {
            keys["file"] = s.file;
        }
        if (!s.values.empty()) {
            std::string vs;
            for (const double v : s.values) {
                vs += (vs.empty() ? "" : ",") + detail::formatDouble(v);
            }
            keys["values"] = vs;
        }
        if (s.window_length) {
            keys["window_length"] = std::to_string(*s.window_length);
        }
        if (s.rank) {
            keys["rank"] = std::to_string(*s.rank);
        }
        if (s.break_index) {
            keys["break_index"] = std::to_string(*s.break_index);
        }
        for (const auto& [k, v] : keys) {
            out += k + "=" + v + "\n";
        }
    }
    return out;
}

inline std::string configHash(const ExperimentConfig& cfg) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(detail::fnv1a64(canonicalConfig(cfg))));
    return buf;
}

/// Accuracy of one method at one horizon on one series.
struct MetricCell {
    double rmse = 0.0;
    double dc = 0.0;
};

/// Head-to-head numbers of a challenger method against the SSA baseline at
/// one horizon. rrmse_available is false when the baseline was error-free
/// and the ratio has no finite value; dm_available is false when too few
/// forecasts exist for the significance test.
struct PairCell {
    double rrmse = 0.0;
    bool rrmse_available = false;
    double dm_statistic = 0.0;
    double dm_p_value = 1.0;
    bool dm_degenerate = false;
    bool dm_available = false;
    bool significant_1pct = false;
};

/// One entry of the leakage trace: the highest series index the named
/// method's forecasting path could see when forecasting from `origin`.
struct OriginVisibility {
    Method method = Method::Ssa;
    int origin = 0;
    int max_index_visible = 0;
};

/// Everything the driver produced for one series.
struct SeriesResult {
    std::string name;
    bool failed = false;
    std::string error;
    int window_length = 0;
    int rank = 0;
    int break_index = 0;
    std::map<Method, ForecastTable> records;
    std::map<Method, std::map<int, MetricCell>> metrics;
    std::map<Method, std::map<int, PairCell>> versus_ssa; ///< keyed by challenger
    std::vector<OriginVisibility> visibility;
};

/// The full evaluation product of a run.
struct EvalReport {
    std::vector<int> horizons;
    std::vector<Method> methods;
    std::vector<SeriesResult> series;

    std::size_t failedCount() const {
        std::size_t c = 0;
        for (const SeriesResult& s : series) {
            c += s.failed ? 1 : 0;
        }
        return c;
    }
};

/// Per-horizon cross-series averages plus the significance tally.
struct SummaryRow {
    int horizon = 0; ///< 0 marks the overall row
    std::map<Method, double> avg_rmse;
    std::map<Method, double> avg_dc;
    std::map<Method, double> avg_rrmse; ///< challengers only
    int significant_count = 0;          ///< GSSA-vs-SSA tests below 1%
    int series_count = 0;
};

struct ReportSummary {
    std::vector<SummaryRow> per_horizon;
    SummaryRow overall;
};

/// Provenance record of a run: what was resolved per series and a stable
/// hash of the exact configuration.
struct RunManifest {
    std::string tool_version;
    std::string config_hash;
    std::string generated_at; ///< ISO-8601 UTC; the only nondeterministic field

    struct Entry {
        std::string name;
        int window_length = 0;
        int rank = 0;
        int break_index = 0;
        bool failed = false;
        std::string error;
    };
    std::vector<Entry> series;
};

namespace detail {

inline ForecastTable sliceAtHorizon(const ForecastTable& table, int h) {
    ForecastTable out;
    for (const ForecastRecord& r : table) {
        if (r.horizon == h) {
            out.push_back(r);
        }
    }
    return out;
}

inline std::vector<double> recordErrors(const ForecastTable& records) {
    std::vector<double> errs;
    errs.reserve(records.size());
    for (const ForecastRecord& r : records) {
        errs.push_back(r.forecast - r.actual);
    }
    return errs;
}

/// Horizons actually reachable in the out-of-sample window, in config order.
inline std::vector<int> reachableHorizons(const std::vector<int>& horizons, int out_len) {
    std::vector<int> out;
    for (const int h : horizons) {
        if (h <= out_len) {
            out.push_back(h);
        }
    }
    return out;
}

inline ForecastTable rollingSsa(const TimeSeries& series, const SampleSplit& split, int L, int r,
                                const std::vector<int>& horizons,
                                std::vector<OriginVisibility>& trace) {
    const int n = static_cast<int>(series.size());
    const int max_h = *std::max_element(horizons.begin(), horizons.end());
    ForecastTable table;
    for (int origin = split.break_index; origin <= n - 1; ++origin) {
        // the model only ever sees the first `origin` observations
        const std::vector<double> prefix(series.values().begin(),
                                         series.values().begin() + origin);
        const LrfModel model = fitLrf(TimeSeries(prefix), L, r);
        const int reach = std::min(max_h, n - origin);
        const std::vector<double> path = forecastRecurrent(model, reach);
        for (const int h : horizons) {
            if (origin + h <= n) {
                table.push_back(ForecastRecord{origin, h, origin + h, path[h - 1],
                                               series[origin + h - 1], methodName(Method::Ssa)});
            }
        }
        trace.push_back(OriginVisibility{Method::Ssa, origin, origin});
    }
    return table;
}

inline ForecastTable rollingBoot(const TimeSeries& series, const SampleSplit& split, int L, int r,
                                 const std::vector<int>& horizons, const ExperimentConfig& cfg,
                                 int series_index, std::vector<OriginVisibility>& trace) {
    const int n = static_cast<int>(series.size());
    const int max_h = *std::max_element(horizons.begin(), horizons.end());
    ForecastTable table;
    for (int origin = split.break_index; origin <= n - 1; ++origin) {
        const std::vector<double> prefix(series.values().begin(),
                                         series.values().begin() + origin);
        BootstrapConfig bcfg;
        bcfg.replications = cfg.bootstrap_b;
        bcfg.seed = deriveStreamSeed(cfg.seed, static_cast<std::uint64_t>(series_index),
                                     static_cast<std::uint64_t>(origin));
        const int reach = std::min(max_h, n - origin);
        const BootstrapForecast out =
            bootstrapForecast(TimeSeries(prefix), EmbeddingConfig{L, r}, bcfg, reach);
        for (const int h : horizons) {
            if (origin + h <= n) {
                table.push_back(ForecastRecord{origin, h, origin + h, out.mean_forecasts[h - 1],
                                               series[origin + h - 1], methodName(Method::Boot)});
            }
        }
        trace.push_back(OriginVisibility{Method::Boot, origin, origin});
    }
    return table;
}

inline ForecastTable rollingGssa(const TimeSeries& series, const SampleSplit& split, int L, int r,
                                 const std::vector<int>& horizons, const ExperimentConfig& cfg,
                                 int series_index, std::vector<OriginVisibility>& trace) {
    const std::vector<double> in_sample(series.values().begin(),
                                        series.values().begin() + split.break_index);
    LrfModel model = fitLrf(TimeSeries(in_sample), L, r);
    if (cfg.gssa_bootstrap_covariance) {
        BootstrapConfig bcfg;
        bcfg.replications = cfg.bootstrap_b;
        bcfg.seed = deriveStreamSeed(cfg.seed, static_cast<std::uint64_t>(series_index), 0, 1);
        model.init_cov =
            lrfCoefficientCovariance(TimeSeries(in_sample), EmbeddingConfig{L, r}, bcfg);
    }
    GssaConfig gcfg;
    gcfg.smoothing_factor = cfg.smoothing_factor;
    gcfg.diff_lag = cfg.diff_lag;
    ForecastTable table = gssaForecast(series, split, model, gcfg, horizons);
    // the filter consumes observations one origin at a time; forecasting from
    // `origin` has seen exactly the first `origin` values
    const int n = static_cast<int>(series.size());
    for (int origin = split.break_index; origin <= n - 1; ++origin) {
        trace.push_back(OriginVisibility{Method::Gssa, origin, origin});
    }
    return table;
}

inline SeriesResult runOneSeries(const ExperimentConfig& cfg, const SeriesSpec& spec,
                                 int series_index) {
    SeriesResult result;
    result.name = spec.name;
    try {
        const TimeSeries series =
            spec.values.empty() ? loadCsv(spec.file) : TimeSeries(spec.values);
        const int n = static_cast<int>(series.size());

        SampleSplit split{};
        if (spec.break_index) {
            split = SampleSplit::atBreak(*spec.break_index, series.size());
            if (split.out_sample_len < 1) {
                throw std::invalid_argument("break index " + std::to_string(*spec.break_index) +
                                            " leaves no out-of-sample period");
            }
        } else {
            const int budget = std::max(0, std::min(cfg.max_breaks, n / cfg.min_segment - 1));
            split = splitAtFinalBreak(series, detectBreaks(series, budget, cfg.min_segment));
        }
        result.break_index = split.break_index;

        const int L = spec.window_length ? *spec.window_length
                                         : defaultWindow(static_cast<std::size_t>(split.in_sample_len));
        EmbeddingConfig probe{L, 1};
        probe.validate(static_cast<std::size_t>(split.in_sample_len));
        const std::vector<double> in_sample(series.values().begin(),
                                            series.values().begin() + split.break_index);
        const SsaDecomposition dec = decompose(embed(TimeSeries(in_sample), L));
        const int r = spec.rank ? std::min(*spec.rank, dec.d) : chooseRank(dec);
        result.window_length = L;
        result.rank = r;

        const std::vector<int> horizons = reachableHorizons(cfg.horizons, split.out_sample_len);
        if (horizons.empty()) {
            throw std::invalid_argument("out-of-sample window of " +
                                        std::to_string(split.out_sample_len) +
                                        " is shorter than every requested horizon");
        }

        for (const Method m : cfg.methods) {
            switch (m) {
            case Method::Ssa:
                result.records[m] =
                    rollingSsa(series, split, L, r, horizons, result.visibility);
                break;
            case Method::Boot:
                result.records[m] = rollingBoot(series, split, L, r, horizons, cfg, series_index,
                                                result.visibility);
                break;
            case Method::Gssa:
                result.records[m] = rollingGssa(series, split, L, r, horizons, cfg, series_index,
                                                result.visibility);
                break;
            }
        }

        for (const Method m : cfg.methods) {
            for (const int h : horizons) {
                const ForecastTable slice = sliceAtHorizon(result.records[m], h);
                if (slice.empty()) {
                    continue;
                }
                result.metrics[m][h] = MetricCell{rmse(slice), directionOfChange(slice, series)};
            }
        }

        const bool have_ssa =
            std::find(cfg.methods.begin(), cfg.methods.end(), Method::Ssa) != cfg.methods.end();
        if (have_ssa) {
            for (const Method m : cfg.methods) {
                if (m == Method::Ssa) {
                    continue;
                }
                for (const int h : horizons) {
                    const ForecastTable challenger = sliceAtHorizon(result.records[m], h);
                    const ForecastTable baseline =
                        sliceAtHorizon(result.records[Method::Ssa], h);
                    if (challenger.empty() || baseline.empty()) {
                        continue;
                    }
                    PairCell cell;
                    try {
                        cell.rrmse = rrmse(challenger, baseline);
                        cell.rrmse_available = true;
                    } catch (const InfiniteRatioError&) {
                        // error-free baseline against a fallible challenger
                    }
                    if (challenger.size() >= 4) {
                        const DmResult dm =
                            modifiedDmTest(recordErrors(challenger), recordErrors(baseline), h);
                        cell.dm_statistic = dm.statistic;
                        cell.dm_p_value = dm.p_value;
                        cell.dm_degenerate = dm.degenerate;
                        cell.dm_available = true;
                        cell.significant_1pct = !dm.degenerate && dm.p_value < 0.01;
                    }
                    result.versus_ssa[m][h] = cell;
                }
            }
        }
    } catch (const std::exception& e) {
        result.failed = true;
        result.error = e.what();
        result.records.clear();
        result.metrics.clear();
        result.versus_ssa.clear();
        result.visibility.clear();
    }
    return result;
}

inline std::string utcTimestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm parts{};
    gmtime_r(&now, &parts);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &parts);
    return buf;
}

} // namespace detail

/// Result bundle of a batch run.
struct ExperimentOutcome {
    EvalReport report;
    RunManifest manifest;
};

/// Runs the full rolling-origin protocol for every configured series. Series
/// failures are isolated: a failed series is marked in the report and the
/// manifest while the rest proceed.
inline ExperimentOutcome runExperiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentOutcome out;
    out.report.horizons = cfg.horizons;
    out.report.methods = cfg.methods;
    out.manifest.tool_version = kToolVersion;
    out.manifest.config_hash = configHash(cfg);
    out.manifest.generated_at = detail::utcTimestamp();

    for (std::size_t i = 0; i < cfg.series.size(); ++i) {
        SeriesResult result = detail::runOneSeries(cfg, cfg.series[i], static_cast<int>(i));
        out.manifest.series.push_back(RunManifest::Entry{result.name, result.window_length,
                                                         result.rank, result.break_index,
                                                         result.failed, result.error});
        out.report.series.push_back(std::move(result));
    }
    return out;
}

/// Cross-series averages per horizon plus the overall row: metric averages
/// of the per-horizon rows, significance tallies summed.
inline ReportSummary summarize(const EvalReport& report) {
    ReportSummary summary;
    for (const int h : report.horizons) {
        SummaryRow row;
        row.horizon = h;
        for (const Method m : report.methods) {
            double rmse_sum = 0.0, dc_sum = 0.0, rr_sum = 0.0;
            int n_metric = 0, n_rr = 0;
            for (const SeriesResult& s : report.series) {
                if (s.failed) {
                    continue;
                }
                const auto mit = s.metrics.find(m);
                if (mit != s.metrics.end()) {
                    const auto hit = mit->second.find(h);
                    if (hit != mit->second.end()) {
                        rmse_sum += hit->second.rmse;
                        dc_sum += hit->second.dc;
                        ++n_metric;
                    }
                }
                const auto pit = s.versus_ssa.find(m);
                if (pit != s.versus_ssa.end()) {
                    const auto hit = pit->second.find(h);
                    if (hit != pit->second.end() && hit->second.rrmse_available) {
                        rr_sum += hit->second.rrmse;
                        ++n_rr;
                    }
                    if (m == Method::Gssa && hit != pit->second.end() &&
                        hit->second.significant_1pct) {
                        ++row.significant_count;
                    }
                }
            }
            if (n_metric > 0) {
                row.avg_rmse[m] = rmse_sum / n_metric;
                row.avg_dc[m] = dc_sum / n_metric;
                row.series_count = std::max(row.series_count, n_metric);
            }
            if (n_rr > 0) {
                row.avg_rrmse[m] = rr_sum / n_rr;
            }
        }
        summary.per_horizon.push_back(std::move(row));
    }

    SummaryRow& overall = summary.overall;
    overall.horizon = 0;
    for (const Method m : report.methods) {
        double rmse_sum = 0.0, dc_sum = 0.0, rr_sum = 0.0;
        int n_metric = 0, n_rr = 0;
        for (const SummaryRow& row : summary.per_horizon) {
            if (row.avg_rmse.count(m)) {
                rmse_sum += row.avg_rmse.at(m);
                dc_sum += row.avg_dc.at(m);
                ++n_metric;
            }
            if (row.avg_rrmse.count(m)) {
                rr_sum += row.avg_rrmse.at(m);
                ++n_rr;
            }
        }
        if (n_metric > 0) {
            overall.avg_rmse[m] = rmse_sum / n_metric;
            overall.avg_dc[m] = dc_sum / n_metric;
        }
        if (n_rr > 0) {
            overall.avg_rrmse[m] = rr_sum / n_rr;
        }
    }
    for (const SummaryRow& row : summary.per_horizon) {
        overall.significant_count += row.significant_count;
        overall.series_count = std::max(overall.series_count, row.series_count);
    }
    return summary;
}

} // namespace gssa
