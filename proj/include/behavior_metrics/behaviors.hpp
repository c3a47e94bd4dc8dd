#pragma once

#include <span>
#include <vector>

#include "behavior_metrics/linalg.hpp"

namespace bmetrics {

/// A finite q-variate real sequence. Samples are stored column-wise (q x length).
class Trajectory {
public:
    Trajectory(Eigen::Index q, Matrix samples);

    // Scalar (q = 1) trajectory.
    static Trajectory scalar(std::span<const double> values);

    Eigen::Index q() const { return samples_.rows(); }
    Eigen::Index length() const { return samples_.cols(); }
    const Matrix& samples() const { return samples_; }

    // The window w_start .. w_start+len-1 stacked into one q*len vector.
    Vector stacked(Eigen::Index start, Eigen::Index len) const;
    Vector stacked() const { return stacked(0, length()); }

    // First `len` samples / samples [start, start+len).
    Trajectory slice(Eigen::Index start, Eigen::Index len) const;

private:
    Matrix samples_;
};

/// Restriction of a linear behavior to the horizon 1..L, as a subspace of R^{qL}.
///
/// Coordinates are ordered sample-major: (w_1; w_2; ...; w_L) with each w_i a
/// contiguous q-block, matching the columns of hankel().
class FiniteHorizonBehavior {
public:
    FiniteHorizonBehavior(Subspace subspace, Eigen::Index q, Eigen::Index horizon);

    const Subspace& subspace() const { return subspace_; }
    Eigen::Index q() const { return q_; }
    Eigen::Index horizon() const { return horizon_; }
    Eigen::Index dim() const { return subspace_.dim(); }

private:
    Subspace subspace_;
    Eigen::Index q_;
    Eigen::Index horizon_;
};

/// Polynomial matrix R(z) = R_0 + R_1 z + ... + R_l z^l (each p x q).
class KernelRep {
public:
    explicit KernelRep(std::vector<Matrix> coeffs);

    const std::vector<Matrix>& coeffs() const { return coeffs_; }
    Eigen::Index p() const { return coeffs_.front().rows(); }
    Eigen::Index q() const { return coeffs_.front().cols(); }
    Eigen::Index degree() const { return static_cast<Eigen::Index>(coeffs_.size()) - 1; }

    // Degree of row i: largest power with an entry above the structural-zero threshold.
    Eigen::Index row_degree(Eigen::Index row) const;

private:
    std::vector<Matrix> coeffs_;
};

struct IntegerInvariants {
    Eigen::Index inputs = 0; // m
    Eigen::Index lag = 0;    // l
    Eigen::Index order = 0;  // n
};

/// x+ = A x + B u, y = C x + D u; a trajectory sample is (u; y), q = m + p.
struct StateSpaceModel {
    Matrix a;
    Matrix b;
    Matrix c;
    Matrix d;

    Eigen::Index states() const { return a.rows(); }
    Eigen::Index inputs() const { return b.cols(); }
    Eigen::Index outputs() const { return c.rows(); }
    Eigen::Index q() const { return inputs() + outputs(); }

    // Throws InvalidInput on inconsistent shapes.
    void validate() const;

    // Autonomous model (m = 0).
    static StateSpaceModel autonomous(Matrix a, Matrix c);
};

// Entries at or below this magnitude count as structural zeros in row degrees.
inline constexpr double kStructuralZero = 1e-12;

/// Depth-L Hankel matrix: column j is the stacked window (w_j; ...; w_{j+L-1}).
Matrix hankel(const Trajectory& w, Eigen::Index depth);

/// Column space of the horizontally concatenated Hankel matrices of all
/// trajectories long enough for the horizon; shorter ones are skipped.
FiniteHorizonBehavior behavior_from_data(std::span<const Trajectory> ws, Eigen::Index horizon,
                                         RankTolerance tol = RankTolerance::automatic());

FiniteHorizonBehavior behavior_from_kernel(const KernelRep& r, Eigen::Index horizon);

// The block-banded matrix whose null space is behavior_from_kernel; 0 rows when L <= l.
Matrix kernel_toeplitz(const KernelRep& r, Eigen::Index horizon);

/// (m, lag, order) read off a kernel representation that the caller asserts
/// has full row rank. Minimality is not checked.
IntegerInvariants integer_invariants(const KernelRep& r);

/// Span of the free responses from each unit initial state and of the impulse
/// responses injected at every step 0..L-1 in every input channel.
FiniteHorizonBehavior behavior_from_state_space(const StateSpaceModel& s, Eigen::Index horizon);

// Single trajectory of length `length` from initial state x0 and inputs u (m x length).
Trajectory simulate(const StateSpaceModel& s, const Vector& x0, const Matrix& u);

// Observability index: smallest k with rank [C; CA; ...; CA^{k-1}] = n (0 when n = 0).
// Returns -1 for an unobservable pair.
Eigen::Index observability_index(const StateSpaceModel& s);

double complexity(const FiniteHorizonBehavior& b);

// Keep the first q*L_new coordinates and re-orthonormalize.
FiniteHorizonBehavior restrict(const FiniteHorizonBehavior& b, Eigen::Index new_horizon);

// Canonical inclusion R^N -> R^{N_target} by trailing zeros.
Subspace embed_zero_pad(const Subspace& v, Eigen::Index target_ambient);
Subspace embed_zero_pad(const FiniteHorizonBehavior& b, Eigen::Index target_ambient);

} // namespace bmetrics
