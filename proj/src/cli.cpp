#include "behavior_metrics/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "behavior_metrics/anomaly.hpp"
#include "behavior_metrics/behaviors.hpp"
#include "behavior_metrics/errors.hpp"
#include "behavior_metrics/io.hpp"
#include "behavior_metrics/metrics.hpp"
#include "behavior_metrics/modeling.hpp"

namespace bmetrics::cli {

namespace fs = std::filesystem;

namespace {

RankTolerance parse_tolerance(const std::string& text) {
    if (text == "auto") {
        return RankTolerance::automatic();
    }
    double value = 0.0;
    try {
        std::size_t used = 0;
        value = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
    } catch (const std::exception&) {
        throw InvalidInput("--tol must be 'auto' or a non-negative number, got '" + text + "'");
    }
    return RankTolerance::relative(value);
}

void print_angles(std::ostream& out, const PrincipalAngleSet& angles) {
    out << "principal angles:";
    if (angles.empty()) {
        out << " (none)";
    }
    for (double a : angles.angles) {
        out << ' ' << format_console(a);
    }
    out << '\n';
}

struct LoadedBehavior {
    FiniteHorizonBehavior behavior;
    Eigen::Index columns;
};

LoadedBehavior load_behavior(const std::string& path, Eigen::Index horizon, RankTolerance tol) {
    const Trajectory w = read_trajectory_csv(fs::path(path));
    auto b = behavior_from_data(std::span(&w, 1), horizon, tol);
    return {std::move(b), w.length() - horizon + 1};
}

void describe(std::ostream& out, std::ostream& err, const std::string& label,
              const std::string& path, const LoadedBehavior& lb) {
    const auto& b = lb.behavior;
    out << label << ": " << path << "  q=" << b.q() << " L=" << b.horizon() << " dim=" << b.dim()
        << " complexity=" << format_console(complexity(b)) << '\n';
    if (b.dim() == lb.columns && b.dim() < b.q() * b.horizon()) {
        err << "warning: " << path << ": rank equals the Hankel column count (" << lb.columns
            << "); the data may not span the behavior\n";
    }
}

// Embeds the smaller-ambient subspace so both live in the same space.
std::pair<Subspace, Subspace> common_ambient(std::ostream& out, const Subspace& a,
                                             const Subspace& b) {
    if (a.ambient_dim() == b.ambient_dim()) {
        return {a, b};
    }
    const Eigen::Index n = std::max(a.ambient_dim(), b.ambient_dim());
    out << "notice: ambient dimensions differ (" << a.ambient_dim() << " vs " << b.ambient_dim()
        << "); zero-padding the smaller into R^" << n << '\n';
    return {embed_zero_pad(a, n), embed_zero_pad(b, n)};
}

int cmd_distance(std::ostream& out, std::ostream& err, const std::string& file_a,
                 const std::string& file_b, Eigen::Index horizon, const std::string& metric,
                 const std::string& tol_text) {
    const RankTolerance tol = parse_tolerance(tol_text);
    const auto a = load_behavior(file_a, horizon, tol);
    const auto b = load_behavior(file_b, horizon, tol);
    describe(out, err, "A", file_a, a);
    describe(out, err, "B", file_b, b);
    const auto [va, vb] = common_ambient(out, a.behavior.subspace(), b.behavior.subspace());

    out << "metric: " << metric << '\n';
    if (metric == "lgap") {
        out << "distance: " << format_console(l_gap(va, vb)) << '\n';
        print_angles(out, principal_angles(va, vb));
        return kSuccess;
    }
    const auto kind = parse_metric_kind(metric);
    const auto br = distance_breakdown(*kind, va, vb);
    out << "distance: " << format_console(br.distance) << '\n';
    out << "premetric: " << format_console(br.premetric) << '\n';
    out << "dimension penalty: " << format_console(br.penalty) << '\n';
    print_angles(out, br.angles);
    return kSuccess;
}

int cmd_angles(std::ostream& out, std::ostream& err, const std::string& file_a,
               const std::string& file_b, Eigen::Index horizon, const std::string& tol_text) {
    const RankTolerance tol = parse_tolerance(tol_text);
    const auto a = load_behavior(file_a, horizon, tol);
    const auto b = load_behavior(file_b, horizon, tol);
    describe(out, err, "A", file_a, a);
    describe(out, err, "B", file_b, b);
    const auto [va, vb] = common_ambient(out, a.behavior.subspace(), b.behavior.subspace());
    print_angles(out, principal_angles(va, vb));
    return kSuccess;
}

int cmd_invariants(std::ostream& out, const std::string& kernel_file, Eigen::Index max_horizon) {
    const KernelRep r = read_kernel(fs::path(kernel_file));
    const IntegerInvariants inv = integer_invariants(r);
    out << "m=" << inv.inputs << " lag=" << inv.lag << " n=" << inv.order << '\n';
    const Eigen::Index last = max_horizon > 0 ? max_horizon : std::max<Eigen::Index>(inv.lag + 5, 1);
    out << "L,dim,mL+n,L>=lag\n";
    for (Eigen::Index l = 1; l <= last; ++l) {
        const auto b = behavior_from_kernel(r, l);
        out << l << ',' << b.dim() << ',' << inv.inputs * l + inv.order << ','
            << (l >= inv.lag ? "yes" : "no") << '\n';
    }
    return kSuccess;
}

struct NamedCandidate {
    std::string name;
    FiniteHorizonBehavior behavior;
};

std::vector<NamedCandidate> load_candidates(const fs::path& dir, Eigen::Index horizon,
                                            RankTolerance tol) {
    if (!fs::is_directory(dir)) {
        throw ParseError("candidate directory " + dir.string() + " does not exist");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".csv" || ext == ".ker")) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<NamedCandidate> out;
    for (const auto& f : files) {
        if (f.extension() == ".ker") {
            out.push_back({f.filename().string(), behavior_from_kernel(read_kernel(f), horizon)});
        } else {
            const Trajectory w = read_trajectory_csv(f);
            out.push_back({f.filename().string(), behavior_from_data(std::span(&w, 1), horizon, tol)});
        }
    }
    if (out.empty()) {
        throw ParseError("no .csv or .ker candidates in " + dir.string());
    }
    return out;
}

int cmd_mpum(std::ostream& out, std::ostream& err, const std::vector<std::string>& data_files,
             Eigen::Index horizon, const std::string& candidate_dir, const std::string& metric,
             const std::string& tol_text, const std::string& report_path) {
    const RankTolerance tol = parse_tolerance(tol_text);
    const MetricKind kind = *parse_metric_kind(metric);
    std::vector<Trajectory> ws;
    for (const auto& f : data_files) {
        ws.push_back(read_trajectory_csv(fs::path(f)));
    }
    const Dataset data(std::move(ws));
    const auto named = load_candidates(candidate_dir, horizon, tol);
    std::vector<FiniteHorizonBehavior> candidates;
    for (const auto& c : named) {
        candidates.push_back(c.behavior);
    }

    OptimalityReport report;
    try {
        report = verify_mpum_optimality(data, candidates, kind, horizon, tol);
    } catch (const PreconditionViolation& e) {
        const auto mpum = mpum_restricted(data, horizon, tol);
        err << "error: falsified candidates (they do not contain the data's behavior):\n";
        for (std::size_t i : e.offending()) {
            err << "  candidate " << i << " (" << named[i].name << "): largest angle "
                << format_console(containment_angle(mpum.subspace(), named[i].behavior.subspace()))
                << ", dim " << named[i].behavior.dim() << " vs mpum dim " << mpum.dim() << '\n';
        }
        return kPrecondition;
    }

    for (std::size_t i = 0; i < named.size(); ++i) {
        out << "candidate " << i << " = " << named[i].name << '\n';
    }
    write_report_text(out, report);
    if (!report_path.empty()) {
        std::ostringstream csv;
        write_report_csv(csv, report);
        write_file_atomic(report_path, csv.str());
    }
    return report.confirmed() ? kSuccess : kCheckFailed;
}

int cmd_anomaly(std::ostream& out, const std::string& config_path, const std::string& out_dir,
                bool combined) {
    const anomaly::AnomalyConfig cfg =
        config_path.empty() ? anomaly::AnomalyConfig{} : anomaly::AnomalyConfig::load(config_path);
    cfg.validate();
    const Trajectory y = anomaly::generate_signal(cfg);
    const anomaly::DistanceSeries series = anomaly::run_detection(cfg);

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    auto emit = [&](const char* name, auto&& writer) {
        std::ostringstream os;
        writer(os);
        write_file_atomic(dir / name, os.str());
        out << "wrote " << (dir / name).string() << '\n';
    };
    emit("output_signal.csv", [&](std::ostream& os) { anomaly::write_signal_csv(os, cfg, y); });
    emit("distance_chordal.csv",
         [&](std::ostream& os) { anomaly::write_chordal_csv(os, cfg, series); });
    emit("distance_gap.csv", [&](std::ostream& os) { anomaly::write_gap_csv(os, cfg, series); });
    if (combined) {
        emit("detection_series.csv",
             [&](std::ostream& os) { anomaly::write_series_csv(os, cfg, series); });
    }

    const auto stats = anomaly::steady_state_stats(series);
    constexpr std::array<anomaly::Regime, 3> regimes = {
        anomaly::Regime::Normal, anomaly::Regime::Fault1, anomaly::Regime::Fault2};
    for (std::size_t i = 0; i < regimes.size(); ++i) {
        const auto& st = stats[i];
        out << "steady " << anomaly::to_string(regimes[i]) << ": windows=" << st.count;
        if (st.count > 0) {
            out << " chordal mean=" << format_console(st.chordal_mean)
                << " min=" << format_console(st.chordal_min)
                << " max=" << format_console(st.chordal_max)
                << " l_gap min=" << format_console(st.l_gap_min)
                << " max=" << format_console(st.l_gap_max) << " rank=" << st.rank_min;
            if (st.rank_max != st.rank_min) {
                out << ".." << st.rank_max;
            }
        }
        out << '\n';
    }
    return kSuccess;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Distances between finite-horizon linear behaviors", "behavior-metrics"};
    app.require_subcommand(1);

    const std::vector<std::string> metrics = {"chordal", "grassmann", "procrustes", "lgap"};
    const std::vector<std::string> subspace_metrics = {"chordal", "grassmann", "procrustes"};

    std::string file_a, file_b, metric = "chordal", tol = "auto";
    Eigen::Index horizon = 0;
    auto* distance_cmd = app.add_subcommand("distance", "Distance between two data-defined behaviors");
    distance_cmd->add_option("file_a", file_a, "Trajectory CSV")->required();
    distance_cmd->add_option("file_b", file_b, "Trajectory CSV")->required();
    distance_cmd->add_option("-L,--horizon", horizon, "Horizon L")->required()->check(CLI::PositiveNumber);
    distance_cmd->add_option("-m,--metric", metric, "chordal | grassmann | procrustes | lgap")
        ->check(CLI::IsMember(metrics));
    distance_cmd->add_option("--tol", tol, "Relative rank tolerance or 'auto'");

    auto* angles_cmd = app.add_subcommand("angles", "Principal angles between two data-defined behaviors");
    angles_cmd->add_option("file_a", file_a, "Trajectory CSV")->required();
    angles_cmd->add_option("file_b", file_b, "Trajectory CSV")->required();
    angles_cmd->add_option("-L,--horizon", horizon, "Horizon L")->required()->check(CLI::PositiveNumber);
    angles_cmd->add_option("--tol", tol, "Relative rank tolerance or 'auto'");

    std::string kernel_file;
    Eigen::Index max_horizon = 0;
    auto* inv_cmd = app.add_subcommand("invariants", "Integer invariants and dim B|_L of a kernel representation");
    inv_cmd->add_option("kernel_file", kernel_file, "Kernel file")->required();
    inv_cmd->add_option("--max-horizon", max_horizon, "Largest L in the sweep (default lag + 5)")
        ->check(CLI::NonNegativeNumber);

    std::vector<std::string> data_files;
    std::string candidate_dir, report_path;
    auto* mpum_cmd = app.add_subcommand("mpum", "Check optimality of the MPUM over candidate models");
    mpum_cmd->add_option("data", data_files, "Trajectory CSV files")->required();
    mpum_cmd->add_option("-L,--horizon", horizon, "Horizon L")->required()->check(CLI::PositiveNumber);
    mpum_cmd->add_option("--candidates", candidate_dir, "Directory of .csv / .ker candidate models")
        ->required();
    mpum_cmd->add_option("-m,--metric", metric, "chordal | grassmann | procrustes")
        ->check(CLI::IsMember(subspace_metrics));
    mpum_cmd->add_option("--tol", tol, "Relative rank tolerance or 'auto'");
    mpum_cmd->add_option("--report", report_path, "Write the CSV report here");

    std::string config_path, out_dir = ".";
    bool combined = false;
    auto* anomaly_cmd = app.add_subcommand("anomaly", "Harmonic-fault detection experiment");
    anomaly_cmd->add_option("--config", config_path, "JSON config (defaults when absent)");
    anomaly_cmd->add_option("-o,--out-dir", out_dir, "Output directory");
    anomaly_cmd->add_flag("--combined", combined, "Also write detection_series.csv");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        if (*distance_cmd) {
            return cmd_distance(out, err, file_a, file_b, horizon, metric, tol);
        }
        if (*angles_cmd) {
            return cmd_angles(out, err, file_a, file_b, horizon, tol);
        }
        if (*inv_cmd) {
            return cmd_invariants(out, kernel_file, max_horizon);
        }
        if (*mpum_cmd) {
            return cmd_mpum(out, err, data_files, horizon, candidate_dir, metric, tol, report_path);
        }
        if (*anomaly_cmd) {
            return cmd_anomaly(out, config_path, out_dir, combined);
        }
    } catch (const PreconditionViolation& e) {
        err << "error: " << e.what() << '\n';
        return kPrecondition;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
    return kUsage;
}

} // namespace bmetrics::cli
