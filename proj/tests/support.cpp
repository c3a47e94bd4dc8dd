#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <string>

namespace bmetrics::testing {

std::uint64_t base_seed() {
    if (const char* env = std::getenv("BEHAVIOR_METRICS_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
        }
    }
    return 20251016ULL;
}

Rng make_rng(std::uint64_t salt) {
    std::seed_seq seq{base_seed(), salt};
    return Rng(seq);
}

Matrix gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, j) = dist(rng);
        }
    }
    return m;
}

Matrix random_orthogonal(Rng& rng, Eigen::Index n) {
    Eigen::HouseholderQR<Matrix> qr(gaussian(rng, n, n));
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (r(i, i) < 0) {
            q.col(i) *= -1.0;
        }
    }
    return q;
}

Matrix random_permutation(Rng& rng, Eigen::Index n) {
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix p = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        p(i, perm[static_cast<std::size_t>(i)]) = 1.0;
    }
    return p;
}

Matrix random_invertible(Rng& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> scale(0.5, 2.0);
    Vector s(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        s(i) = scale(rng);
    }
    return random_orthogonal(rng, n) * s.asDiagonal() * random_orthogonal(rng, n);
}

Subspace random_subspace(Rng& rng, Eigen::Index ambient, Eigen::Index dim) {
    if (dim == 0) {
        return Subspace::zero(ambient);
    }
    return orthonormal_basis(gaussian(rng, ambient, dim));
}

Subspace random_subspace_of(Rng& rng, const Subspace& outer, Eigen::Index dim) {
    if (dim == 0) {
        return Subspace::zero(outer.ambient_dim());
    }
    return orthonormal_basis(outer.basis() * gaussian(rng, outer.dim(), dim));
}

Subspace transform(const Matrix& q, const Subspace& v) {
    if (v.dim() == 0) {
        return v;
    }
    return orthonormal_basis(q * v.basis());
}

int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

StateSpaceModel random_state_space(Rng& rng, Eigen::Index n, Eigen::Index m, Eigen::Index p) {
    StateSpaceModel s;
    s.a = gaussian(rng, n, n);
    if (n > 0) {
        const double radius = s.a.eigenvalues().cwiseAbs().maxCoeff();
        if (radius > 0) {
            s.a *= 0.9 / radius;
        }
    }
    s.b = gaussian(rng, n, m);
    s.c = gaussian(rng, p, n);
    s.d = gaussian(rng, p, m);
    return s;
}

Trajectory sine_trajectory(Eigen::Index length, double freq_hz, double phase) {
    Matrix y(1, length);
    for (Eigen::Index t = 0; t < length; ++t) {
        y(0, t) = std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(t) + phase);
    }
    return Trajectory(1, std::move(y));
}

} // namespace bmetrics::testing
