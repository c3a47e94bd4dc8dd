#include "behavior_metrics/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "behavior_metrics/errors.hpp"
#include "behavior_metrics/io.hpp"
#include "behavior_metrics/metrics.hpp"

namespace bmetrics::anomaly {

namespace {

struct WindowResult {
    double chordal = 0.0;
    double l_gap = 0.0;
    Eigen::Index rank = 0;
};

double sine(double amplitude, double freq_hz, double t) {
    return amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * t);
}

void check_frequency(double f, double nyquist, const char* name) {
    if (!std::isfinite(f) || f <= 0.0 || f >= nyquist) {
        throw ConfigError(std::string(name) + " must lie in (0, " + format_console(nyquist) + ")");
    }
}

void check_window(const TimeWindow& w, double horizon_end, const char* name) {
    if (!(w.start >= 0.0 && w.start <= w.end && w.end <= horizon_end)) {
        throw ConfigError(std::string(name) + " must satisfy 0 <= start <= end <= horizon_end");
    }
}

WindowResult evaluate_window(const AnomalyConfig& cfg, const Trajectory& y, Eigen::Index end,
                             const Subspace& nominal) {
    const Eigen::Index span = cfg.window_span();
    const Matrix h = hankel(y.slice(end - span + 1, span), cfg.window_rows);
    const Subspace image = orthonormal_basis(h, cfg.rank_tol);
    WindowResult r;
    r.rank = image.dim();
    r.chordal = distance(MetricKind::Chordal, image, nominal);
    r.l_gap = l_gap(image, nominal);
    return r;
}

Regime window_regime(const AnomalyConfig& cfg, Eigen::Index end) {
    const Eigen::Index span = cfg.window_span();
    if (end < span - 1) {
        return Regime::Init;
    }
    const Regime first = sample_regime(cfg, end - span + 1);
    for (Eigen::Index k = end - span + 2; k <= end; ++k) {
        if (sample_regime(cfg, k) != first) {
            return Regime::Transition;
        }
    }
    return first;
}

DistanceSeries empty_series(const AnomalyConfig& cfg) {
    const Eigen::Index n = cfg.sample_count();
    DistanceSeries s;
    s.times.resize(static_cast<std::size_t>(n));
    s.regime.resize(static_cast<std::size_t>(n));
    s.chordal.resize(static_cast<std::size_t>(n));
    s.l_gap.resize(static_cast<std::size_t>(n));
    s.window_rank.resize(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        s.times[static_cast<std::size_t>(k)] = k;
        s.regime[static_cast<std::size_t>(k)] = window_regime(cfg, k);
    }
    return s;
}

void store(DistanceSeries& s, Eigen::Index k, const WindowResult& r) {
    const auto i = static_cast<std::size_t>(k);
    s.chordal[i] = r.chordal;
    s.l_gap[i] = r.l_gap;
    s.window_rank[i] = r.rank;
}

template <class T>
void write_optional(std::ostream& os, const std::optional<T>& v) {
    if (v) {
        if constexpr (std::is_floating_point_v<T>) {
            os << format_roundtrip(*v);
        } else {
            os << *v;
        }
    }
}

} // namespace

void AnomalyConfig::validate() const {
    if (!(sample_period_s > 0.0) || !std::isfinite(sample_period_s)) {
        throw ConfigError("sample_period_s must be positive");
    }
    if (!(horizon_end > 0.0) || !std::isfinite(horizon_end)) {
        throw ConfigError("horizon_end must be positive");
    }
    if (window_rows < 1 || window_cols < 1) {
        throw ConfigError("window_rows and window_cols must be at least 1");
    }
    const double nyquist = 1.0 / (2.0 * sample_period_s);
    check_frequency(nominal_freq_hz, nyquist, "nominal_freq_hz");
    check_frequency(fault1_freq_hz, nyquist, "fault1_freq_hz");
    check_frequency(fault2_freq_hz, nyquist, "fault2_freq_hz");
    check_window(fault1_window, horizon_end, "fault1_window");
    check_window(fault2_window, horizon_end, "fault2_window");
    for (double a : {nominal_amplitude, fault1_amplitude, fault2_amplitude}) {
        if (!std::isfinite(a)) {
            throw ConfigError("amplitudes must be finite");
        }
    }
    if (sample_count() < window_span()) {
        throw ConfigError("horizon holds fewer samples than one Hankel window (T + tau - 1)");
    }
}

Eigen::Index AnomalyConfig::sample_count() const {
    return static_cast<Eigen::Index>(std::floor(horizon_end / sample_period_s + 1e-9)) + 1;
}

AnomalyConfig AnomalyConfig::from_json(std::string_view text) {
    AnomalyConfig cfg;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    try {
        auto get = [&](const char* key, auto& field) {
            if (j.contains(key)) {
                j.at(key).get_to(field);
            }
        };
        auto get_window = [&](const char* key, TimeWindow& w) {
            if (j.contains(key)) {
                const auto& v = j.at(key);
                if (!v.is_array() || v.size() != 2) {
                    throw ConfigError(std::string(key) + " must be [start, end]");
                }
                w.start = v[0].get<double>();
                w.end = v[1].get<double>();
            }
        };
        for (const auto& [key, _] : j.items()) {
            static const std::array<std::string_view, 13> known = {
                "nominal_freq_hz", "fault1_freq_hz",   "fault2_freq_hz",   "fault1_window",
                "fault2_window",   "horizon_end",      "sample_period_s",  "window_rows",
                "window_cols",     "nominal_amplitude", "fault1_amplitude", "fault2_amplitude",
                "rank_tol"};
            if (std::find(known.begin(), known.end(), key) == known.end()) {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
        get("nominal_freq_hz", cfg.nominal_freq_hz);
        get("fault1_freq_hz", cfg.fault1_freq_hz);
        get("fault2_freq_hz", cfg.fault2_freq_hz);
        get_window("fault1_window", cfg.fault1_window);
        get_window("fault2_window", cfg.fault2_window);
        get("horizon_end", cfg.horizon_end);
        get("sample_period_s", cfg.sample_period_s);
        get("window_rows", cfg.window_rows);
        get("window_cols", cfg.window_cols);
        get("nominal_amplitude", cfg.nominal_amplitude);
        get("fault1_amplitude", cfg.fault1_amplitude);
        get("fault2_amplitude", cfg.fault2_amplitude);
        if (j.contains("rank_tol")) {
            const auto& t = j.at("rank_tol");
            if (t.is_string() && t.get<std::string>() == "auto") {
                cfg.rank_tol = RankTolerance::automatic();
            } else {
                cfg.rank_tol = RankTolerance::relative(t.get<double>());
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config has a field of the wrong type: ") + e.what());
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
    cfg.validate();
    return cfg;
}

AnomalyConfig AnomalyConfig::load(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("cannot open config " + path.string());
    }
    std::stringstream buf;
    buf << is.rdbuf();
    return from_json(buf.str());
}

std::string_view to_string(Regime r) {
    switch (r) {
    case Regime::Init:
        return "init";
    case Regime::Normal:
        return "normal";
    case Regime::Fault1:
        return "fault1";
    case Regime::Fault2:
        return "fault2";
    case Regime::Transition:
        return "transition";
    }
    return "unknown";
}

Trajectory generate_signal(const AnomalyConfig& cfg) {
    cfg.validate();
    const Eigen::Index n = cfg.sample_count();
    Matrix y(1, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double t = cfg.time_of(k);
        double v = sine(cfg.nominal_amplitude, cfg.nominal_freq_hz, t);
        if (cfg.fault1_window.contains(t)) {
            v += sine(cfg.fault1_amplitude, cfg.fault1_freq_hz, t);
        }
        if (cfg.fault2_window.contains(t)) {
            v += sine(cfg.fault1_amplitude, cfg.fault1_freq_hz, t) +
                 sine(cfg.fault2_amplitude, cfg.fault2_freq_hz, t);
        }
        y(0, k) = v;
    }
    return Trajectory(1, std::move(y));
}

FiniteHorizonBehavior nominal_behavior(const AnomalyConfig& cfg) {
    cfg.validate();
    const Eigen::Index span = cfg.window_span();
    Matrix y(1, span);
    for (Eigen::Index k = 0; k < span; ++k) {
        y(0, k) = sine(cfg.nominal_amplitude, cfg.nominal_freq_hz, cfg.time_of(k));
    }
    const Trajectory clean(1, std::move(y));
    return behavior_from_data(std::span(&clean, 1), cfg.window_rows, cfg.rank_tol);
}

Regime sample_regime(const AnomalyConfig& cfg, Eigen::Index k) {
    const double t = cfg.time_of(k);
    if (cfg.fault2_window.contains(t)) {
        return Regime::Fault2;
    }
    if (cfg.fault1_window.contains(t)) {
        return Regime::Fault1;
    }
    return Regime::Normal;
}

DistanceSeries run_detection(const AnomalyConfig& cfg) {
    const Trajectory y = generate_signal(cfg);
    const FiniteHorizonBehavior nominal = nominal_behavior(cfg);
    DistanceSeries s = empty_series(cfg);
    const Eigen::Index first = cfg.window_span() - 1;
    const Eigen::Index n = cfg.sample_count();
#pragma omp parallel for schedule(static)
    for (Eigen::Index k = first; k < n; ++k) {
        store(s, k, evaluate_window(cfg, y, k, nominal.subspace()));
    }
    return s;
}

DistanceSeries run_detection_serial(const AnomalyConfig& cfg) {
    const Trajectory y = generate_signal(cfg);
    const FiniteHorizonBehavior nominal = nominal_behavior(cfg);
    DistanceSeries s = empty_series(cfg);
    const Eigen::Index first = cfg.window_span() - 1;
    for (Eigen::Index k = first; k < cfg.sample_count(); ++k) {
        store(s, k, evaluate_window(cfg, y, k, nominal.subspace()));
    }
    return s;
}

std::array<RegimeStats, 3> steady_state_stats(const DistanceSeries& series) {
    std::array<RegimeStats, 3> out{};
    for (std::size_t i = 0; i < series.size(); ++i) {
        int slot = -1;
        switch (series.regime[i]) {
        case Regime::Normal:
            slot = 0;
            break;
        case Regime::Fault1:
            slot = 1;
            break;
        case Regime::Fault2:
            slot = 2;
            break;
        default:
            break;
        }
        if (slot < 0 || !series.chordal[i]) {
            continue;
        }
        RegimeStats& st = out[static_cast<std::size_t>(slot)];
        const double c = *series.chordal[i];
        const double g = *series.l_gap[i];
        const Eigen::Index r = *series.window_rank[i];
        if (st.count == 0) {
            st.chordal_min = st.chordal_max = c;
            st.l_gap_min = st.l_gap_max = g;
            st.rank_min = st.rank_max = r;
        }
        st.chordal_min = std::min(st.chordal_min, c);
        st.chordal_max = std::max(st.chordal_max, c);
        st.l_gap_min = std::min(st.l_gap_min, g);
        st.l_gap_max = std::max(st.l_gap_max, g);
        st.rank_min = std::min(st.rank_min, r);
        st.rank_max = std::max(st.rank_max, r);
        st.chordal_mean += c;
        ++st.count;
    }
    for (auto& st : out) {
        if (st.count > 0) {
            st.chordal_mean /= static_cast<double>(st.count);
        }
    }
    return out;
}

void write_signal_csv(std::ostream& os, const AnomalyConfig& cfg, const Trajectory& y) {
    os << "t,y\n";
    for (Eigen::Index k = 0; k < y.length(); ++k) {
        os << format_roundtrip(cfg.time_of(k)) << ',' << format_roundtrip(y.samples()(0, k))
           << '\n';
    }
}

void write_chordal_csv(std::ostream& os, const AnomalyConfig& cfg, const DistanceSeries& s) {
    os << "t,distance\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.chordal[i]) {
            os << format_roundtrip(cfg.time_of(s.times[i])) << ','
               << format_roundtrip(*s.chordal[i]) << '\n';
        }
    }
}

void write_gap_csv(std::ostream& os, const AnomalyConfig& cfg, const DistanceSeries& s) {
    os << "t,distance\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.l_gap[i]) {
            os << format_roundtrip(cfg.time_of(s.times[i])) << ','
               << format_roundtrip(*s.l_gap[i]) << '\n';
        }
    }
}

void write_series_csv(std::ostream& os, const AnomalyConfig& cfg, const DistanceSeries& s) {
    os << "t,regime,window_rank,chordal,l_gap\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        os << format_roundtrip(cfg.time_of(s.times[i])) << ',' << to_string(s.regime[i]) << ',';
        write_optional(os, s.window_rank[i]);
        os << ',';
        write_optional(os, s.chordal[i]);
        os << ',';
        write_optional(os, s.l_gap[i]);
        os << '\n';
    }
}

} // namespace bmetrics::anomaly
