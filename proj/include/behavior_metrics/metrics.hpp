#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

#include "behavior_metrics/linalg.hpp"

namespace bmetrics {

// Subspace metrics that stay informative across different dimensions.
enum class MetricKind { Chordal, Grassmann, Procrustes };

inline constexpr std::array<MetricKind, 3> kAllMetricKinds = {
    MetricKind::Chordal, MetricKind::Grassmann, MetricKind::Procrustes};

// Weight of the dimension-mismatch penalty: 1, pi/2, 1.
double penalty_coefficient(MetricKind kind);

std::string_view to_string(MetricKind kind);
std::optional<MetricKind> parse_metric_kind(std::string_view name);

/// Angle-only part of the distance; 0 when either subspace is {0}.
///   chordal     sqrt(sum sin^2 t)
///   grassmann   sqrt(sum t^2)
///   procrustes  sqrt(2 sum sin^2(t/2))
double premetric(MetricKind kind, const PrincipalAngleSet& angles);
double premetric(MetricKind kind, const Subspace& v, const Subspace& u);

// sqrt(premetric^2 + alpha^2 |dim V - dim U|)
double distance(MetricKind kind, const Subspace& v, const Subspace& u);

struct DistanceBreakdown {
    PrincipalAngleSet angles;
    double premetric = 0.0;
    double penalty = 0.0; // alpha^2 |k - l|, already squared
    double distance = 0.0;
};

// Everything the CLI reports, from a single principal-angle evaluation.
DistanceBreakdown distance_breakdown(MetricKind kind, const Subspace& v, const Subspace& u);

// 1 whenever the dimensions differ, otherwise the sine of the largest principal angle.
double l_gap(const Subspace& v, const Subspace& u);

// Symmetric matrix of distances between all pairs; rows are split across OpenMP threads.
Matrix pairwise_distances(MetricKind kind, std::span<const Subspace> subspaces);

// Single-threaded reference for pairwise_distances.
Matrix pairwise_distances_serial(MetricKind kind, std::span<const Subspace> subspaces);

} // namespace bmetrics
