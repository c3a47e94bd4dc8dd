#include "behavior_metrics/behaviors.hpp"

#include <algorithm>
#include <string>

#include "behavior_metrics/errors.hpp"

namespace bmetrics {

FiniteHorizonBehavior::FiniteHorizonBehavior(Subspace subspace, Eigen::Index q,
                                             Eigen::Index horizon)
    : subspace_(std::move(subspace)), q_(q), horizon_(horizon) {
    if (q_ < 1 || horizon_ < 1) {
        throw InvalidInput("behavior: q and horizon must be positive");
    }
    if (subspace_.ambient_dim() != q_ * horizon_) {
        throw InvalidInput("behavior: ambient dimension " +
                           std::to_string(subspace_.ambient_dim()) + " != q*L = " +
                           std::to_string(q_ * horizon_));
    }
}

KernelRep::KernelRep(std::vector<Matrix> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
        throw InvalidInput("kernel: at least one coefficient matrix is required");
    }
    const Eigen::Index p = coeffs_.front().rows();
    const Eigen::Index q = coeffs_.front().cols();
    if (p < 1 || q < 1) {
        throw InvalidInput("kernel: coefficient matrices must be non-empty");
    }
    if (p > q) {
        throw InvalidInput("kernel: more rows than variables (p > q)");
    }
    for (const auto& c : coeffs_) {
        if (c.rows() != p || c.cols() != q) {
            throw InvalidInput("kernel: coefficient matrices differ in shape");
        }
        if (!c.allFinite()) {
            throw InvalidInput("kernel: non-finite coefficient");
        }
    }
    if (coeffs_.back().cwiseAbs().maxCoeff() <= kStructuralZero) {
        throw InvalidInput("kernel: leading coefficient is zero; degree is not tight");
    }
}

Eigen::Index KernelRep::row_degree(Eigen::Index row) const {
    for (Eigen::Index i = degree(); i >= 0; --i) {
        if (coeffs_[static_cast<std::size_t>(i)].row(row).cwiseAbs().maxCoeff() >
            kStructuralZero) {
            return i;
        }
    }
    return -1;
}

void StateSpaceModel::validate() const {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) {
        throw InvalidInput("state space: A must be square");
    }
    if (b.rows() != n) {
        throw InvalidInput("state space: B must have n rows");
    }
    if (c.cols() != n) {
        throw InvalidInput("state space: C must have n columns");
    }
    if (d.rows() != c.rows() || d.cols() != b.cols()) {
        throw InvalidInput("state space: D must be p x m");
    }
    if (q() < 1) {
        throw InvalidInput("state space: model has no variables (m + p = 0)");
    }
    if (!a.allFinite() || !b.allFinite() || !c.allFinite() || !d.allFinite()) {
        throw InvalidInput("state space: non-finite entry");
    }
}

StateSpaceModel StateSpaceModel::autonomous(Matrix a, Matrix c) {
    StateSpaceModel s;
    const Eigen::Index n = a.rows();
    const Eigen::Index p = c.rows();
    s.a = std::move(a);
    s.c = std::move(c);
    s.b = Matrix(n, 0);
    s.d = Matrix(p, 0);
    return s;
}

Matrix hankel(const Trajectory& w, Eigen::Index depth) {
    if (depth < 1) {
        throw InvalidInput("hankel: depth must be positive");
    }
    if (w.length() < depth) {
        throw InsufficientData("hankel: trajectory of length " + std::to_string(w.length()) +
                               " is shorter than depth " + std::to_string(depth));
    }
    const Eigen::Index q = w.q();
    const Eigen::Index cols = w.length() - depth + 1;
    Matrix h(q * depth, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        h.col(j) = w.samples().middleCols(j, depth).reshaped();
    }
    return h;
}

FiniteHorizonBehavior behavior_from_data(std::span<const Trajectory> ws, Eigen::Index horizon,
                                         RankTolerance tol) {
    if (horizon < 1) {
        throw InvalidInput("behavior_from_data: horizon must be positive");
    }
    if (ws.empty()) {
        throw InsufficientData("behavior_from_data: no trajectories");
    }
    const Eigen::Index q = ws.front().q();
    Eigen::Index cols = 0;
    for (const auto& w : ws) {
        if (w.q() != q) {
            throw InvalidInput("behavior_from_data: trajectories differ in q");
        }
        if (w.length() >= horizon) {
            cols += w.length() - horizon + 1;
        }
    }
    if (cols == 0) {
        throw InsufficientData("behavior_from_data: no trajectory has length >= " +
                               std::to_string(horizon));
    }
    Matrix mosaic(q * horizon, cols);
    Eigen::Index at = 0;
    for (const auto& w : ws) {
        if (w.length() < horizon) {
            continue;
        }
        const Matrix h = hankel(w, horizon);
        mosaic.middleCols(at, h.cols()) = h;
        at += h.cols();
    }
    return FiniteHorizonBehavior(orthonormal_basis(mosaic, tol), q, horizon);
}

Matrix kernel_toeplitz(const KernelRep& r, Eigen::Index horizon) {
    if (horizon < 1) {
        throw InvalidInput("kernel_toeplitz: horizon must be positive");
    }
    const Eigen::Index p = r.p();
    const Eigen::Index q = r.q();
    const Eigen::Index lag = r.degree();
    const Eigen::Index block_rows = std::max<Eigen::Index>(horizon - lag, 0);
    Matrix t = Matrix::Zero(p * block_rows, q * horizon);
    for (Eigen::Index i = 0; i < block_rows; ++i) {
        for (Eigen::Index k = 0; k <= lag; ++k) {
            t.block(i * p, (i + k) * q, p, q) = r.coeffs()[static_cast<std::size_t>(k)];
        }
    }
    return t;
}

FiniteHorizonBehavior behavior_from_kernel(const KernelRep& r, Eigen::Index horizon) {
    const Matrix t = kernel_toeplitz(r, horizon);
    return FiniteHorizonBehavior(null_space(t, r.q() * horizon), r.q(), horizon);
}

IntegerInvariants integer_invariants(const KernelRep& r) {
    IntegerInvariants inv;
    inv.inputs = r.q() - r.p();
    for (Eigen::Index i = 0; i < r.p(); ++i) {
        const Eigen::Index deg = r.row_degree(i);
        if (deg < 0) {
            throw InvalidInput("integer_invariants: row " + std::to_string(i) +
                               " is zero; its degree is undefined");
        }
        inv.lag = std::max(inv.lag, deg);
        inv.order += deg;
    }
    return inv;
}

FiniteHorizonBehavior behavior_from_state_space(const StateSpaceModel& s, Eigen::Index horizon) {
    s.validate();
    if (horizon < 1) {
        throw InvalidInput("behavior_from_state_space: horizon must be positive");
    }
    const Eigen::Index n = s.states();
    const Eigen::Index m = s.inputs();
    const Eigen::Index p = s.outputs();
    const Eigen::Index q = m + p;

    // Markov-style blocks: free[t] = C A^t (p x n), impulse[t] = response t steps after the kick.
    std::vector<Matrix> free(static_cast<std::size_t>(horizon));
    Matrix power = Matrix::Identity(n, n);
    for (Eigen::Index t = 0; t < horizon; ++t) {
        free[static_cast<std::size_t>(t)] = s.c * power;
        power = s.a * power;
    }

    Matrix gen = Matrix::Zero(q * horizon, n + m * horizon);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index t = 0; t < horizon; ++t) {
            gen.block(t * q + m, i, p, 1) = free[static_cast<std::size_t>(t)].col(i);
        }
    }
    for (Eigen::Index k = 0; k < horizon; ++k) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const Eigen::Index col = n + k * m + j;
            gen(k * q + j, col) = 1.0;
            gen.block(k * q + m, col, p, 1) = s.d.col(j);
            for (Eigen::Index t = k + 1; t < horizon; ++t) {
                gen.block(t * q + m, col, p, 1) =
                    free[static_cast<std::size_t>(t - k - 1)] * s.b.col(j);
            }
        }
    }
    return FiniteHorizonBehavior(orthonormal_basis(gen), q, horizon);
}

Trajectory simulate(const StateSpaceModel& s, const Vector& x0, const Matrix& u) {
    s.validate();
    if (x0.size() != s.states()) {
        throw InvalidInput("simulate: initial state has wrong size");
    }
    if (u.rows() != s.inputs()) {
        throw InvalidInput("simulate: input matrix must have m rows");
    }
    const Eigen::Index len = u.cols();
    const Eigen::Index m = s.inputs();
    Matrix w(s.q(), len);
    Vector x = x0;
    for (Eigen::Index t = 0; t < len; ++t) {
        w.col(t).head(m) = u.col(t);
        w.col(t).tail(s.outputs()) = s.c * x + s.d * u.col(t);
        x = s.a * x + s.b * u.col(t);
    }
    return Trajectory(s.q(), std::move(w));
}

Eigen::Index observability_index(const StateSpaceModel& s) {
    s.validate();
    const Eigen::Index n = s.states();
    if (n == 0) {
        return 0;
    }
    const Eigen::Index p = s.outputs();
    if (p == 0) {
        return -1;
    }
    Matrix obs(0, n);
    Matrix block = s.c;
    for (Eigen::Index k = 1; k <= n; ++k) {
        Matrix next(obs.rows() + p, n);
        next << obs, block;
        obs = std::move(next);
        if (numerical_rank(obs) == n) {
            return k;
        }
        block = block * s.a;
    }
    return -1;
}

double complexity(const FiniteHorizonBehavior& b) {
    return static_cast<double>(b.dim()) / static_cast<double>(b.q() * b.horizon());
}

FiniteHorizonBehavior restrict(const FiniteHorizonBehavior& b, Eigen::Index new_horizon) {
    if (new_horizon < 1 || new_horizon > b.horizon()) {
        throw InvalidInput("restrict: new horizon must lie in [1, " +
                           std::to_string(b.horizon()) + "]");
    }
    const Eigen::Index rows = b.q() * new_horizon;
    const Matrix truncated = b.subspace().basis().topRows(rows);
    return FiniteHorizonBehavior(orthonormal_basis(truncated), b.q(), new_horizon);
}

Subspace embed_zero_pad(const Subspace& v, Eigen::Index target_ambient) {
    if (target_ambient < v.ambient_dim()) {
        throw InvalidInput("embed_zero_pad: target ambient dimension " +
                           std::to_string(target_ambient) + " is smaller than " +
                           std::to_string(v.ambient_dim()));
    }
    Matrix padded = Matrix::Zero(target_ambient, v.dim());
    padded.topRows(v.ambient_dim()) = v.basis();
    return Subspace::from_orthonormal(std::move(padded));
}

Subspace embed_zero_pad(const FiniteHorizonBehavior& b, Eigen::Index target_ambient) {
    return embed_zero_pad(b.subspace(), target_ambient);
}

} // namespace bmetrics
