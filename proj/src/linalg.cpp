#include "behavior_metrics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "behavior_metrics/errors.hpp"

namespace bmetrics {

namespace {

constexpr double kOrthonormalityTol = 1e-10;

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

void require_same_ambient(const Subspace& v, const Subspace& u, const char* op) {
    if (v.ambient_dim() != u.ambient_dim()) {
        throw DimensionMismatch(std::string(op) + ": ambient dimensions differ (" +
                                std::to_string(v.ambient_dim()) + " vs " +
                                std::to_string(u.ambient_dim()) + "); embed first");
    }
}

} // namespace

RankTolerance RankTolerance::relative(double r) {
    if (!std::isfinite(r) || r < 0.0) {
        throw InvalidInput("rank tolerance must be a finite non-negative number");
    }
    RankTolerance t;
    t.relative_ = r;
    return t;
}

double RankTolerance::absolute(Eigen::Index rows, Eigen::Index cols, double sigma_max) const {
    if (relative_) {
        return *relative_ * sigma_max;
    }
    return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() *
           sigma_max;
}

Subspace Subspace::from_orthonormal(Matrix basis) {
    if (basis.rows() == 0) {
        throw InvalidInput("subspace basis must have at least one row");
    }
    if (!basis.allFinite()) {
        throw InvalidInput("subspace basis has non-finite entries");
    }
    if (basis.cols() > basis.rows()) {
        throw InvalidInput("subspace basis has more columns than rows");
    }
    if (basis.cols() > 0) {
        const Matrix gram = basis.transpose() * basis;
        const double dev =
            (gram - Matrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
        if (dev > kOrthonormalityTol) {
            throw InvalidInput("basis columns are not orthonormal (deviation " +
                               std::to_string(dev) + ")");
        }
    }
    return Subspace(std::move(basis));
}

Subspace Subspace::zero(Eigen::Index ambient_dim) {
    if (ambient_dim < 1) {
        throw InvalidInput("ambient dimension must be positive");
    }
    return Subspace(Matrix(ambient_dim, 0));
}

Subspace Subspace::full(Eigen::Index ambient_dim) {
    if (ambient_dim < 1) {
        throw InvalidInput("ambient dimension must be positive");
    }
    return Subspace(Matrix::Identity(ambient_dim, ambient_dim));
}

Vector singular_values(const Matrix& m) {
    if (m.size() == 0) {
        return Vector(0);
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues();
}

Eigen::Index numerical_rank(const Matrix& m, RankTolerance tol) {
    if (m.rows() == 0) {
        throw InvalidInput("numerical_rank: matrix has no rows");
    }
    if (m.cols() == 0) {
        return 0;
    }
    const Vector s = singular_values(m);
    const double cutoff = tol.absolute(m.rows(), m.cols(), s(0));
    return (s.array() > cutoff).count();
}

Subspace orthonormal_basis(const Matrix& m, RankTolerance tol) {
    if (m.rows() == 0) {
        throw InvalidInput("orthonormal_basis: matrix has no rows");
    }
    if (!m.allFinite()) {
        throw InvalidInput("orthonormal_basis: matrix has non-finite entries");
    }
    if (m.cols() == 0) {
        return Subspace::zero(m.rows());
    }
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
    const Vector& s = svd.singularValues();
    const double cutoff = tol.absolute(m.rows(), m.cols(), s(0));
    const Eigen::Index rank = (s.array() > cutoff).count();
    return Subspace::from_orthonormal(svd.matrixU().leftCols(rank));
}

Subspace null_space(const Matrix& m, Eigen::Index cols, RankTolerance tol) {
    if (cols < 1) {
        throw InvalidInput("null_space: column count must be positive");
    }
    if (m.rows() == 0) {
        return Subspace::full(cols);
    }
    if (m.cols() != cols) {
        throw InvalidInput("null_space: matrix column count mismatch");
    }
    if (!m.allFinite()) {
        throw InvalidInput("null_space: matrix has non-finite entries");
    }
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    const double cutoff = tol.absolute(m.rows(), m.cols(), s(0));
    const Eigen::Index rank = (s.array() > cutoff).count();
    return Subspace::from_orthonormal(svd.matrixV().rightCols(cols - rank));
}

PrincipalAngleSet principal_angles(const Subspace& v, const Subspace& u) {
    require_same_ambient(v, u, "principal_angles");
    PrincipalAngleSet out;
    if (v.dim() == 0 || u.dim() == 0) {
        return out;
    }

    // Work with the smaller subspace on the right so that exactly min(k, l)
    // sines come out of the residual.
    const Subspace& large = v.dim() >= u.dim() ? v : u;
    const Subspace& small = v.dim() >= u.dim() ? u : v;
    const Eigen::Index r = small.dim();

    const Matrix cross = large.basis().transpose() * small.basis();
    const Vector cosines = singular_values(cross); // descending

    constexpr double kSwitch = 0.70710678118654752440; // 1/sqrt(2)
    const bool need_sines = (cosines.array() > kSwitch).any();

    Vector sines_asc;
    if (need_sines) {
        const Matrix residual = small.basis() - large.basis() * cross;
        const Vector s = singular_values(residual); // descending, r of them
        sines_asc = s.reverse();
    }

    out.angles.resize(static_cast<std::size_t>(r));
    for (Eigen::Index i = 0; i < r; ++i) {
        const double c = clamp_unit(cosines(i));
        out.angles[static_cast<std::size_t>(i)] =
            c > kSwitch ? std::asin(clamp_unit(sines_asc(i))) : std::acos(c);
    }
    std::sort(out.angles.begin(), out.angles.end());
    return out;
}

Matrix projector(const Subspace& v) { return v.basis() * v.basis().transpose(); }

double projector_distance(const Subspace& v, const Subspace& u) {
    require_same_ambient(v, u, "projector_distance");
    return (projector(v) - projector(u)).cwiseAbs().maxCoeff();
}

} // namespace bmetrics
