#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "behavior_metrics/behaviors.hpp"

namespace bmetrics::anomaly {

struct TimeWindow {
    double start = 0.0;
    double end = 0.0;

    bool contains(double t) const { return t >= start && t <= end; }
};

/// Harmonic-fault detection setup. Defaults reproduce the reference experiment:
/// a 0.2 Hz nominal sine on [0, 250], a 0.1 Hz fault on [50, 100], and both the
/// 0.1 Hz and 0.05 Hz components on [150, 200], processed through 10 x 16
/// Hankel windows.
struct AnomalyConfig {
    double nominal_freq_hz = 0.2;
    double fault1_freq_hz = 0.1;
    double fault2_freq_hz = 0.05;
    TimeWindow fault1_window{50.0, 100.0};
    TimeWindow fault2_window{150.0, 200.0};
    double horizon_end = 250.0;
    double sample_period_s = 1.0;
    Eigen::Index window_rows = 10; // T, the behavior horizon
    Eigen::Index window_cols = 16; // tau, number of shifted segments
    double nominal_amplitude = 1.0;
    double fault1_amplitude = 1.0;
    double fault2_amplitude = 1.0;
    RankTolerance rank_tol = RankTolerance::relative(1e-8);

    // Throws ConfigError.
    void validate() const;

    Eigen::Index sample_count() const;
    // Samples spanned by one Hankel window: T + tau - 1.
    Eigen::Index window_span() const { return window_rows + window_cols - 1; }
    double time_of(Eigen::Index k) const { return static_cast<double>(k) * sample_period_s; }

    // JSON object with the field names above; missing keys keep their defaults.
    static AnomalyConfig from_json(std::string_view text);
    static AnomalyConfig load(const std::filesystem::path& path);
};

enum class Regime { Init, Normal, Fault1, Fault2, Transition };

std::string_view to_string(Regime r);

struct DistanceSeries {
    std::vector<Eigen::Index> times; // sample indices
    std::vector<Regime> regime;
    // Empty during Init, when no full window is available yet.
    std::vector<std::optional<double>> chordal;
    std::vector<std::optional<double>> l_gap;
    std::vector<std::optional<Eigen::Index>> window_rank;

    std::size_t size() const { return times.size(); }
};

Trajectory generate_signal(const AnomalyConfig& cfg);

// Column space of the depth-T Hankel matrix of a clean nominal sine of T + tau - 1 samples.
FiniteHorizonBehavior nominal_behavior(const AnomalyConfig& cfg);

// Regime of the sample at index k, ignoring windowing.
Regime sample_regime(const AnomalyConfig& cfg, Eigen::Index k);

/// Distances between each trailing Hankel window and the nominal behavior.
/// Windows are independent and evaluated across OpenMP threads; the output is
/// in time order and identical to run_detection_serial.
DistanceSeries run_detection(const AnomalyConfig& cfg);
DistanceSeries run_detection_serial(const AnomalyConfig& cfg);

struct RegimeStats {
    std::size_t count = 0;
    double chordal_mean = 0.0;
    double chordal_min = 0.0;
    double chordal_max = 0.0;
    double l_gap_min = 0.0;
    double l_gap_max = 0.0;
    Eigen::Index rank_min = 0;
    Eigen::Index rank_max = 0;
};

// Stats over windows lying entirely inside one regime, indexed Normal, Fault1, Fault2.
std::array<RegimeStats, 3> steady_state_stats(const DistanceSeries& series);

void write_signal_csv(std::ostream& os, const AnomalyConfig& cfg, const Trajectory& y);
void write_chordal_csv(std::ostream& os, const AnomalyConfig& cfg, const DistanceSeries& s);
void write_gap_csv(std::ostream& os, const AnomalyConfig& cfg, const DistanceSeries& s);
// t,regime,window_rank,chordal,l_gap for every sample (empty fields during Init).
void write_series_csv(std::ostream& os, const AnomalyConfig& cfg, const DistanceSeries& s);

} // namespace bmetrics::anomaly
