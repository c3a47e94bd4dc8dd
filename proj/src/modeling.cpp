#include "behavior_metrics/modeling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "behavior_metrics/errors.hpp"
#include "behavior_metrics/io.hpp"

namespace bmetrics {

namespace {

void require_compatible(const FiniteHorizonBehavior& mpum, const FiniteHorizonBehavior& model) {
    if (model.q() != mpum.q()) {
        throw InvalidInput("model has q = " + std::to_string(model.q()) + " but data has q = " +
                           std::to_string(mpum.q()));
    }
    if (model.horizon() != mpum.horizon()) {
        throw InvalidInput("model horizon " + std::to_string(model.horizon()) +
                           " differs from working horizon " + std::to_string(mpum.horizon()));
    }
}

} // namespace

Dataset::Dataset(std::vector<Trajectory> trajectories) : trajectories_(std::move(trajectories)) {
    if (trajectories_.empty()) {
        throw InvalidInput("dataset: at least one trajectory is required");
    }
    for (const auto& w : trajectories_) {
        if (w.q() != trajectories_.front().q()) {
            throw InvalidInput("dataset: trajectories differ in q");
        }
    }
}

FiniteHorizonBehavior mpum_restricted(const Dataset& data, Eigen::Index horizon,
                                      RankTolerance tol) {
    return behavior_from_data(data.trajectories(), horizon, tol);
}

double misfit(const FiniteHorizonBehavior& mpum, const FiniteHorizonBehavior& model,
              MetricKind kind) {
    require_compatible(mpum, model);
    const double delta = premetric(kind, mpum.subspace(), model.subspace());
    return delta * delta;
}

double utility(const FiniteHorizonBehavior& mpum, const FiniteHorizonBehavior& model,
               MetricKind kind) {
    const double alpha = penalty_coefficient(kind);
    const double ql = static_cast<double>(mpum.q() * mpum.horizon());
    return -misfit(mpum, model, kind) -
           alpha * alpha * ql * std::abs(complexity(mpum) - complexity(model));
}

double misfit(const Dataset& data, const FiniteHorizonBehavior& model, MetricKind kind,
              Eigen::Index horizon, RankTolerance tol) {
    if (model.horizon() != horizon) {
        throw InvalidInput("misfit: model horizon differs from L");
    }
    return misfit(mpum_restricted(data, horizon, tol), model, kind);
}

double utility(const Dataset& data, const FiniteHorizonBehavior& model, MetricKind kind,
               Eigen::Index horizon, RankTolerance tol) {
    if (model.horizon() != horizon) {
        throw InvalidInput("utility: model horizon differs from L");
    }
    return utility(mpum_restricted(data, horizon, tol), model, kind);
}

double containment_angle(const Subspace& inner, const Subspace& outer) {
    if (inner.dim() > outer.dim()) {
        return std::numeric_limits<double>::infinity();
    }
    return principal_angles(inner, outer).largest();
}

bool is_unfalsified(const FiniteHorizonBehavior& mpum, const FiniteHorizonBehavior& model) {
    require_compatible(mpum, model);
    return containment_angle(mpum.subspace(), model.subspace()) <= kUnfalsifiedAngleTol;
}

double projection_misfit(const Trajectory& w, const FiniteHorizonBehavior& model) {
    if (w.q() != model.q() || w.length() != model.horizon()) {
        throw InvalidInput("projection_misfit: trajectory must have q = " +
                           std::to_string(model.q()) + " and length " +
                           std::to_string(model.horizon()));
    }
    const Vector x = w.stacked();
    const Matrix& basis = model.subspace().basis();
    const Vector residual = x - basis * (basis.transpose() * x);
    return residual.norm();
}

OptimalityReport verify_mpum_optimality(const Dataset& data,
                                        std::span<const FiniteHorizonBehavior> candidates,
                                        MetricKind kind, Eigen::Index horizon,
                                        RankTolerance tol) {
    const FiniteHorizonBehavior mpum = mpum_restricted(data, horizon, tol);

    std::vector<std::size_t> falsified;
    std::string detail;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        require_compatible(mpum, candidates[i]);
        const double angle = containment_angle(mpum.subspace(), candidates[i].subspace());
        if (angle > kUnfalsifiedAngleTol) {
            falsified.push_back(i);
            detail += " candidate " + std::to_string(i) + " (largest angle " +
                      format_console(angle) + ")";
        }
    }
    if (!falsified.empty()) {
        throw PreconditionViolation("candidates falsified by the data:" + detail,
                                    std::move(falsified));
    }

    OptimalityReport report;
    report.kind = kind;
    report.horizon = horizon;
    report.mpum_dim = mpum.dim();
    report.mpum_utility = utility(mpum, mpum, kind);
    report.candidates.resize(candidates.size());

    const auto n = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const FiniteHorizonBehavior& b = candidates[idx];
        CandidateResult& r = report.candidates[idx];
        r.index = idx;
        r.dim = b.dim();
        const double d = distance(kind, mpum.subspace(), b.subspace());
        r.distance_sq = d * d;
        r.utility = utility(mpum, b, kind);
        r.projector_gap = projector_distance(mpum.subspace(), b.subspace());
    }

    if (report.candidates.empty()) {
        report.mpum_dominates = true;
        report.argmax_matches_argmin = true;
        report.zero_distance_is_mpum = true;
        return report;
    }

    double best_utility = -std::numeric_limits<double>::infinity();
    double best_distance = std::numeric_limits<double>::infinity();
    for (const auto& r : report.candidates) {
        best_utility = std::max(best_utility, r.utility);
        best_distance = std::min(best_distance, r.distance_sq);
    }

    report.mpum_dominates = report.mpum_utility >= best_utility - kObjectiveTieTol;
    report.argmax_matches_argmin = true;
    report.zero_distance_is_mpum = true;
    for (auto& r : report.candidates) {
        r.optimal = r.utility >= best_utility - kObjectiveTieTol;
        const bool minimizer = r.distance_sq <= best_distance + kObjectiveTieTol;
        if (r.optimal != minimizer) {
            report.argmax_matches_argmin = false;
        }
        if (std::sqrt(r.distance_sq) <= kZeroDistanceTol && r.projector_gap > kProjectorMatchTol) {
            report.zero_distance_is_mpum = false;
        }
    }
    return report;
}

void write_report_text(std::ostream& os, const OptimalityReport& report) {
    os << "metric: " << to_string(report.kind) << "\n";
    os << "horizon: " << report.horizon << "\n";
    os << "mpum dim: " << report.mpum_dim << "\n";
    os << "mpum utility: " << format_console(report.mpum_utility) << "\n";
    for (const auto& r : report.candidates) {
        os << "candidate " << r.index << ": dim " << r.dim
           << "  distance^2 " << format_console(r.distance_sq)
           << "  utility " << format_console(r.utility) << (r.optimal ? "  [optimal]" : "")
           << "\n";
    }
    os << "mpum maximizes utility: " << (report.mpum_dominates ? "yes" : "no") << "\n";
    os << "utility argmax == distance argmin: " << (report.argmax_matches_argmin ? "yes" : "no")
       << "\n";
    os << "zero-distance candidates equal the mpum: "
       << (report.zero_distance_is_mpum ? "yes" : "no") << "\n";
}

void write_report_csv(std::ostream& os, const OptimalityReport& report) {
    os << "candidate,distance_sq,utility,optimal\n";
    for (const auto& r : report.candidates) {
        os << r.index << ',' << format_roundtrip(r.distance_sq) << ','
           << format_roundtrip(r.utility) << ',' << (r.optimal ? 1 : 0) << '\n';
    }
}

} // namespace bmetrics
