#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "behavior_metrics/behaviors.hpp"
#include "behavior_metrics/metrics.hpp"

namespace bmetrics {

/// Non-empty collection of trajectories that share q.
class Dataset {
public:
    explicit Dataset(std::vector<Trajectory> trajectories);

    const std::vector<Trajectory>& trajectories() const { return trajectories_; }
    Eigen::Index q() const { return trajectories_.front().q(); }

private:
    std::vector<Trajectory> trajectories_;
};

// Largest principal angle allowed for the data's restricted MPUM to count as inside a model.
inline constexpr double kUnfalsifiedAngleTol = 1e-8;

/// The most powerful unfalsified LTI model of the data, restricted to 1..L.
/// Every shift of every trajectory contributes exactly its depth-L Hankel columns.
FiniteHorizonBehavior mpum_restricted(const Dataset& data, Eigen::Index horizon,
                                      RankTolerance tol = RankTolerance::automatic());

// Squared premetric between the restricted MPUM and the model.
double misfit(const Dataset& data, const FiniteHorizonBehavior& model, MetricKind kind,
              Eigen::Index horizon, RankTolerance tol = RankTolerance::automatic());

// -misfit - alpha^2 q L |c_L(mpum) - c_L(model)|
double utility(const Dataset& data, const FiniteHorizonBehavior& model, MetricKind kind,
               Eigen::Index horizon, RankTolerance tol = RankTolerance::automatic());

// Versions that reuse an already computed restricted MPUM.
double misfit(const FiniteHorizonBehavior& mpum, const FiniteHorizonBehavior& model,
              MetricKind kind);
double utility(const FiniteHorizonBehavior& mpum, const FiniteHorizonBehavior& model,
               MetricKind kind);

// Largest principal angle from `inner` into `outer`; +inf when dim inner > dim outer.
double containment_angle(const Subspace& inner, const Subspace& outer);
bool is_unfalsified(const FiniteHorizonBehavior& mpum, const FiniteHorizonBehavior& model);

// Euclidean distance from the stacked trajectory to the model, i.e. the exact
// infimum over model trajectories.
double projection_misfit(const Trajectory& w, const FiniteHorizonBehavior& model);

struct CandidateResult {
    std::size_t index = 0;
    Eigen::Index dim = 0;
    double distance_sq = 0.0;
    double utility = 0.0;
    double projector_gap = 0.0; // max-entry projector difference to the MPUM
    bool optimal = false;
};

struct OptimalityReport {
    MetricKind kind = MetricKind::Chordal;
    Eigen::Index horizon = 0;
    Eigen::Index mpum_dim = 0;
    double mpum_utility = 0.0;
    std::vector<CandidateResult> candidates;

    bool mpum_dominates = false;        // utility(mpum) >= utility(B) for all B
    bool argmax_matches_argmin = false; // utility maximizers == distance^2 minimizers
    bool zero_distance_is_mpum = false; // every d = 0 candidate has the MPUM's projector

    bool confirmed() const { return mpum_dominates && argmax_matches_argmin && zero_distance_is_mpum; }
};

// Tolerances the report uses when comparing objective values and projectors.
inline constexpr double kObjectiveTieTol = 1e-12;
inline constexpr double kZeroDistanceTol = 1e-9;
inline constexpr double kProjectorMatchTol = 1e-7;

/// Checks that the restricted MPUM maximizes utility over a finite list of
/// unfalsified candidates and that utility maximizers coincide with
/// squared-distance minimizers. Candidates are evaluated concurrently.
///
/// Throws PreconditionViolation listing every candidate that does not contain the data.
OptimalityReport verify_mpum_optimality(const Dataset& data,
                                        std::span<const FiniteHorizonBehavior> candidates,
                                        MetricKind kind, Eigen::Index horizon,
                                        RankTolerance tol = RankTolerance::automatic());

void write_report_text(std::ostream& os, const OptimalityReport& report);
// Columns: candidate,distance_sq,utility,optimal
void write_report_csv(std::ostream& os, const OptimalityReport& report);

} // namespace bmetrics
