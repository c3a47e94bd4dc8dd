#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace bmetrics {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Threshold rule for deciding which singular values count as nonzero.
///
/// `automatic()` uses max(rows, cols) * eps * sigma_max; `relative(r)` uses r * sigma_max.
class RankTolerance {
public:
    static RankTolerance automatic() { return RankTolerance{}; }
    static RankTolerance relative(double r);

    bool is_automatic() const { return !relative_.has_value(); }
    double relative_value() const { return relative_.value(); }

    // Absolute cutoff for a rows x cols matrix whose largest singular value is sigma_max.
    double absolute(Eigen::Index rows, Eigen::Index cols, double sigma_max) const;

private:
    std::optional<double> relative_;
};

/// A linear subspace of R^N held as an orthonormal basis (N x k).
///
/// k = 0 is the zero subspace. Instances are immutable.
class Subspace {
public:
    // Validates orthonormality to 1e-10 in the max-entry norm.
    static Subspace from_orthonormal(Matrix basis);
    static Subspace zero(Eigen::Index ambient_dim);
    static Subspace full(Eigen::Index ambient_dim);

    const Matrix& basis() const { return basis_; }
    Eigen::Index ambient_dim() const { return basis_.rows(); }
    Eigen::Index dim() const { return basis_.cols(); }

private:
    explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
    Matrix basis_;
};

/// Principal angles in radians, ascending, min(dim V, dim U) of them.
struct PrincipalAngleSet {
    std::vector<double> angles;

    std::size_t size() const { return angles.size(); }
    bool empty() const { return angles.empty(); }
    double largest() const { return angles.empty() ? 0.0 : angles.back(); }
};

Vector singular_values(const Matrix& m);

Eigen::Index numerical_rank(const Matrix& m, RankTolerance tol = RankTolerance::automatic());

// Orthonormal basis for the numerical column space of m.
Subspace orthonormal_basis(const Matrix& m, RankTolerance tol = RankTolerance::automatic());

// Orthonormal basis for the numerical right null space of m (columns x with m x ~ 0).
Subspace null_space(const Matrix& m, Eigen::Index cols,
                    RankTolerance tol = RankTolerance::automatic());

/// Cosines come from the SVD of V^T U. Angles whose cosine exceeds 1/sqrt(2)
/// are recomputed from the sines, i.e. the singular values of the part of the
/// smaller basis orthogonal to the larger subspace, which keeps full relative
/// precision near zero.
PrincipalAngleSet principal_angles(const Subspace& v, const Subspace& u);

Matrix projector(const Subspace& v);

// Max-entry norm of the projector difference; zero iff the subspaces coincide.
double projector_distance(const Subspace& v, const Subspace& u);

} // namespace bmetrics
