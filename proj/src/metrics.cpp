#include "behavior_metrics/metrics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "behavior_metrics/errors.hpp"

namespace bmetrics {

namespace {

double dim_gap(const Subspace& v, const Subspace& u) {
    return static_cast<double>(std::abs(v.dim() - u.dim()));
}

void require_same_ambient(const Subspace& v, const Subspace& u) {
    if (v.ambient_dim() != u.ambient_dim()) {
        throw DimensionMismatch("metric: ambient dimensions differ (" +
                                std::to_string(v.ambient_dim()) + " vs " +
                                std::to_string(u.ambient_dim()) + "); embed first");
    }
}

} // namespace

double penalty_coefficient(MetricKind kind) {
    switch (kind) {
    case MetricKind::Chordal:
        return 1.0;
    case MetricKind::Grassmann:
        return std::numbers::pi / 2.0;
    case MetricKind::Procrustes:
        return 1.0;
    }
    return 1.0;
}

std::string_view to_string(MetricKind kind) {
    switch (kind) {
    case MetricKind::Chordal:
        return "chordal";
    case MetricKind::Grassmann:
        return "grassmann";
    case MetricKind::Procrustes:
        return "procrustes";
    }
    return "unknown";
}

std::optional<MetricKind> parse_metric_kind(std::string_view name) {
    for (MetricKind k : kAllMetricKinds) {
        if (name == to_string(k)) {
            return k;
        }
    }
    return std::nullopt;
}

double premetric(MetricKind kind, const PrincipalAngleSet& angles) {
    double acc = 0.0;
    for (double t : angles.angles) {
        switch (kind) {
        case MetricKind::Chordal: {
            const double s = std::sin(t);
            acc += s * s;
            break;
        }
        case MetricKind::Grassmann:
            acc += t * t;
            break;
        case MetricKind::Procrustes: {
            const double s = std::sin(t / 2.0);
            acc += 2.0 * s * s;
            break;
        }
        }
    }
    return std::sqrt(acc);
}

double premetric(MetricKind kind, const Subspace& v, const Subspace& u) {
    require_same_ambient(v, u);
    return premetric(kind, principal_angles(v, u));
}

DistanceBreakdown distance_breakdown(MetricKind kind, const Subspace& v, const Subspace& u) {
    require_same_ambient(v, u);
    DistanceBreakdown out;
    out.angles = principal_angles(v, u);
    out.premetric = premetric(kind, out.angles);
    const double alpha = penalty_coefficient(kind);
    out.penalty = alpha * alpha * dim_gap(v, u);
    out.distance = std::sqrt(out.premetric * out.premetric + out.penalty);
    return out;
}

double distance(MetricKind kind, const Subspace& v, const Subspace& u) {
    return distance_breakdown(kind, v, u).distance;
}

double l_gap(const Subspace& v, const Subspace& u) {
    require_same_ambient(v, u);
    if (v.dim() != u.dim()) {
        return 1.0;
    }
    if (v.dim() == 0) {
        return 0.0;
    }
    return std::sin(principal_angles(v, u).largest());
}

Matrix pairwise_distances(MetricKind kind, std::span<const Subspace> subspaces) {
    const auto n = static_cast<Eigen::Index>(subspaces.size());
    for (const auto& s : subspaces) {
        require_same_ambient(subspaces.front(), s);
    }
    Matrix out = Matrix::Zero(n, n);
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = distance(kind, subspaces[static_cast<std::size_t>(i)],
                                      subspaces[static_cast<std::size_t>(j)]);
            out(i, j) = d;
            out(j, i) = d;
        }
    }
    return out;
}

Matrix pairwise_distances_serial(MetricKind kind, std::span<const Subspace> subspaces) {
    const auto n = static_cast<Eigen::Index>(subspaces.size());
    for (const auto& s : subspaces) {
        require_same_ambient(subspaces.front(), s);
    }
    Matrix out = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = distance(kind, subspaces[static_cast<std::size_t>(i)],
                                      subspaces[static_cast<std::size_t>(j)]);
            out(i, j) = d;
            out(j, i) = d;
        }
    }
    return out;
}

} // namespace bmetrics
