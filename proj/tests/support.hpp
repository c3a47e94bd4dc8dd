#pragma once

// Random generators shared by the unit and acceptance suites.
// BEHAVIOR_METRICS_SEED overrides the base seed.

#include <cstdint>
#include <random>
#include <vector>

#include "behavior_metrics/behaviors.hpp"
#include "behavior_metrics/linalg.hpp"

namespace bmetrics::testing {

using Rng = std::mt19937_64;

std::uint64_t base_seed();
// Independent stream per test, derived from the base seed and a salt.
Rng make_rng(std::uint64_t salt);

Matrix gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols);
Matrix random_orthogonal(Rng& rng, Eigen::Index n);
Matrix random_permutation(Rng& rng, Eigen::Index n);
// Well-conditioned: Q1 diag(s) Q2 with s in [0.5, 2].
Matrix random_invertible(Rng& rng, Eigen::Index n);
Subspace random_subspace(Rng& rng, Eigen::Index ambient, Eigen::Index dim);
// Subspace of dimension `dim` inside `outer`.
Subspace random_subspace_of(Rng& rng, const Subspace& outer, Eigen::Index dim);
// Apply a square matrix to every basis vector and re-orthonormalize.
Subspace transform(const Matrix& q, const Subspace& v);

int uniform_int(Rng& rng, int lo, int hi); // inclusive

// Random model with spectral radius 0.9; A, B, C, D Gaussian otherwise.
StateSpaceModel random_state_space(Rng& rng, Eigen::Index n, Eigen::Index m, Eigen::Index p);

Trajectory sine_trajectory(Eigen::Index length, double freq_hz, double phase = 0.0);

} // namespace bmetrics::testing
