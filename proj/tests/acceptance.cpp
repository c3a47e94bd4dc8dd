// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Tolerances are pinned here and must not be loosened to make a run pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "behavior_metrics/anomaly.hpp"
#include "behavior_metrics/cli.hpp"
#include "behavior_metrics/metrics.hpp"
#include "behavior_metrics/modeling.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace bmetrics;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    // Records the first failure only; later ones rarely add information.
    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

Subspace rebase(testing::Rng& rng, const Subspace& v) {
    if (v.dim() == 0) {
        return v;
    }
    return orthonormal_basis(v.basis() * testing::random_invertible(rng, v.dim()));
}

// Pairs of behaviors of equal signal count and horizon.
std::pair<StateSpaceModel, StateSpaceModel> random_model_pair(testing::Rng& rng) {
    const int m = testing::uniform_int(rng, 0, 2);
    const int p = testing::uniform_int(rng, 1, 4 - m);
    return {testing::random_state_space(rng, testing::uniform_int(rng, 0, 4), m, p),
            testing::random_state_space(rng, testing::uniform_int(rng, 0, 4), m, p)};
}

StateSpaceModel similarity(const StateSpaceModel& s, const Matrix& t) {
    const Matrix ti = t.inverse();
    return {ti * s.a * t, ti * s.b, s.c * t, s.d};
}

Outcome metric_axioms() {
    Outcome o;
    auto rng = testing::make_rng(101);
    const auto t0 = Clock::now();
    double worst_sym = 0.0, worst_tri = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const int n = testing::uniform_int(rng, 1, 30);
        std::array<Subspace, 3> s = {
            testing::random_subspace(rng, n, testing::uniform_int(rng, 0, n)),
            testing::random_subspace(rng, n, testing::uniform_int(rng, 0, n)),
            testing::random_subspace(rng, n, testing::uniform_int(rng, 0, n)),
        };
        // Every third triple repeats a subspace under a different basis, so the
        // identity-of-indiscernibles check sees both outcomes.
        if (trial % 3 == 0) {
            s[1] = rebase(rng, s[0]);
        }
        for (auto k : kAllMetricKinds) {
            Matrix d(3, 3);
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    d(i, j) = distance(k, s[i], s[j]);
                }
            }
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    const double sym = std::abs(d(i, j) - d(j, i));
                    worst_sym = std::max(worst_sym, sym);
                    o.require(sym <= 1e-10, "symmetry violated by " + fmt(sym));
                    const bool same_by_metric = d(i, j) <= 1e-8;
                    const bool same_by_projector =
                        s[i].dim() == s[j].dim() && projector_distance(s[i], s[j]) <= 1e-7;
                    o.require(same_by_metric == same_by_projector,
                              "identity of indiscernibles violated, d = " + fmt(d(i, j)));
                    for (int l = 0; l < 3; ++l) {
                        const double slack = d(i, l) - d(i, j) - d(j, l);
                        worst_tri = std::max(worst_tri, slack);
                        o.require(slack <= 1e-9, "triangle inequality off by " + fmt(slack));
                    }
                }
            }
        }
    }
    const double elapsed = seconds_since(t0);
    o.require(elapsed < 10.0, "runtime " + fmt(elapsed) + " s");
    if (o.pass) {
        o.detail = "500 triples, max asymmetry " + fmt(worst_sym) + ", max triangle excess " +
                   fmt(worst_tri) + ", " + fmt(elapsed) + " s";
    }
    return o;
}

Outcome decomposition() {
    Outcome o;
    auto rng = testing::make_rng(102);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = testing::uniform_int(rng, 1, 30);
        const Subspace v = testing::random_subspace(rng, n, testing::uniform_int(rng, 0, n));
        const Subspace u = testing::random_subspace(rng, n, testing::uniform_int(rng, 0, n));
        const double gap = static_cast<double>(std::abs(v.dim() - u.dim()));
        for (auto k : kAllMetricKinds) {
            const double d = distance(k, v, u);
            const double p = premetric(k, v, u);
            const double a = penalty_coefficient(k);
            const double err = std::abs(d * d - p * p - a * a * gap);
            worst = std::max(worst, err);
            o.require(err <= 1e-10, std::string(to_string(k)) + " residual " + fmt(err));
        }
    }
    if (o.pass) {
        o.detail = "1000 pairs, max residual " + fmt(worst);
    }
    return o;
}

Outcome invariances() {
    Outcome o;
    auto rng = testing::make_rng(103);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto [s1, s2] = random_model_pair(rng);
        const Eigen::Index lag = std::max(observability_index(s1), observability_index(s2));
        const Eigen::Index l = std::max<Eigen::Index>(lag, 1) + testing::uniform_int(rng, 0, 3);
        const Subspace v = behavior_from_state_space(s1, l).subspace();
        const Subspace u = behavior_from_state_space(s2, l).subspace();

        const Subspace v_coord =
            behavior_from_state_space(similarity(s1, testing::random_invertible(rng, s1.states())), l)
                .subspace();
        const Subspace u_coord =
            behavior_from_state_space(similarity(s2, testing::random_invertible(rng, s2.states())), l)
                .subspace();
        const Subspace v_rep = rebase(rng, v);
        const Subspace u_rep = rebase(rng, u);
        const Matrix q = testing::random_orthogonal(rng, v.ambient_dim());
        const Matrix perm = testing::random_permutation(rng, v.ambient_dim());

        for (auto k : kAllMetricKinds) {
            const double d = distance(k, v, u);
            const double checks[] = {
                distance(k, v_coord, u_coord),
                distance(k, v_rep, u_rep),
                distance(k, testing::transform(q, v), testing::transform(q, u)),
                distance(k, testing::transform(perm, v), testing::transform(perm, u)),
            };
            for (double c : checks) {
                const double err = std::abs(c - d);
                worst = std::max(worst, err);
                o.require(err <= 1e-8, std::string(to_string(k)) + " changed by " + fmt(err));
            }
        }
    }
    if (o.pass) {
        o.detail = "200 pairs, max change " + fmt(worst);
    }
    return o;
}

Outcome dimension_formula() {
    Outcome o;
    auto rng = testing::make_rng(104);
    int horizons = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = testing::uniform_int(rng, 0, 4);
        const int m = testing::uniform_int(rng, 0, 2);
        const int p = testing::uniform_int(rng, 1, 4 - m);
        const auto s = testing::random_state_space(rng, n, m, p);
        const Eigen::Index lag = observability_index(s);
        o.require(lag >= 0, "random model is unobservable");
        const Eigen::Index last = lag + 5;
        // One long run with white input excites every trajectory of length <= last.
        const Eigen::Index len = (m + 1) * (last + n) + last + 20;
        const Trajectory w = simulate(s, testing::gaussian(rng, n, 1), testing::gaussian(rng, m, len));
        for (Eigen::Index l = std::max<Eigen::Index>(lag, 1); l <= last; ++l) {
            const Eigen::Index expected = m * l + n;
            const Eigen::Index from_model = behavior_from_state_space(s, l).dim();
            const Eigen::Index from_data =
                behavior_from_data(std::span(&w, 1), l, RankTolerance::relative(1e-10)).dim();
            o.require(from_model == expected, "state space: dim " + std::to_string(from_model) +
                                                  " != " + std::to_string(expected));
            o.require(from_data == expected,
                      "data: dim " + std::to_string(from_data) + " != " + std::to_string(expected));
            ++horizons;
        }
    }
    if (o.pass) {
        o.detail = "50 systems, " + std::to_string(horizons) + " horizons, both constructions exact";
    }
    return o;
}

Outcome matrix_vs_subspace() {
    Outcome o;
    std::string report;
    for (double eps : {1e-6, 1e-3, 1.0}) {
        Matrix a(2, 1), b(2, 1);
        a << eps, 0;
        b << 0, eps;
        const double d = distance(MetricKind::Chordal, orthonormal_basis(a), orthonormal_basis(b));
        const double frob = (a - b).norm();
        o.require(std::abs(d - 1.0) <= 1e-12, "chordal " + fmt(d) + " at eps " + fmt(eps));
        o.require(std::abs(frob - std::sqrt(2.0) * eps) <= 1e-15 * eps,
                  "Frobenius norm " + fmt(frob) + " does not scale with eps " + fmt(eps));
        report += " eps=" + fmt(eps) + ": chordal=" + fmt(d) + " frobenius=" + fmt(frob) + ";";
    }
    if (o.pass) {
        o.detail = report.substr(1, report.size() - 2);
    }
    return o;
}

Outcome utility_identity() {
    Outcome o;
    auto rng = testing::make_rng(106);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int q = testing::uniform_int(rng, 1, 3);
        const int l = testing::uniform_int(rng, 1, 5);
        Dataset data({Trajectory(q, Matrix::Zero(q, 1))});
        if (trial % 2 == 0) {
            const auto s = testing::random_state_space(rng, testing::uniform_int(rng, 0, 3), q > 1 ? 1 : 0,
                                                       q > 1 ? q - 1 : 1);
            data = Dataset({simulate(s, testing::gaussian(rng, s.states(), 1),
                                     testing::gaussian(rng, s.inputs(), l + 12))});
        } else {
            data = Dataset({Trajectory(q, testing::gaussian(rng, q, l + testing::uniform_int(rng, 0, 8)))});
        }
        const FiniteHorizonBehavior model(
            testing::random_subspace(rng, q * l, testing::uniform_int(rng, 0, q * l)), q, l);
        const auto mpum = mpum_restricted(data, l);
        for (auto k : kAllMetricKinds) {
            const double d = distance(k, mpum.subspace(), model.subspace());
            const double err = std::abs(utility(data, model, k, l) + d * d);
            worst = std::max(worst, err);
            o.require(err <= 1e-9, std::string(to_string(k)) + " residual " + fmt(err));
        }
    }
    if (o.pass) {
        o.detail = "100 pairs, max |utility + d^2| " + fmt(worst);
    }
    return o;
}

Outcome mpum_optimality() {
    Outcome o;
    auto rng = testing::make_rng(107);
    int lists = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const int m = testing::uniform_int(rng, 0, 1);
        const int p = testing::uniform_int(rng, 1, 2);
        const auto s = testing::random_state_space(rng, testing::uniform_int(rng, 1, 3), m, p);
        const Eigen::Index l = observability_index(s) + testing::uniform_int(rng, 1, 3);
        const Eigen::Index len = (m + 1) * (l + 3) + l + 20;
        const Dataset data({simulate(s, testing::gaussian(rng, s.states(), 1), testing::gaussian(rng, m, len))});
        const auto mpum = mpum_restricted(data, l);
        const Eigen::Index ambient = mpum.subspace().ambient_dim();

        std::vector<FiniteHorizonBehavior> candidates = {mpum};
        for (int extra = 1; extra <= 2 && mpum.dim() + extra <= ambient; ++extra) {
            Matrix basis(ambient, mpum.dim() + extra);
            basis << mpum.subspace().basis(), testing::gaussian(rng, ambient, extra);
            candidates.emplace_back(orthonormal_basis(basis), mpum.q(), l);
        }
        for (int copy = 0; copy < 2; ++copy) {
            candidates.emplace_back(rebase(rng, mpum.subspace()), mpum.q(), l);
        }
        std::shuffle(candidates.begin(), candidates.end(), rng);

        for (auto k : kAllMetricKinds) {
            const auto report = verify_mpum_optimality(data, candidates, k, l);
            o.require(report.confirmed(), "optimality not confirmed for " + std::string(to_string(k)));
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& c : report.candidates) {
                best = std::max(best, c.utility);
            }
            o.require(std::abs(best - report.mpum_utility) <= 1e-12, "a candidate beats the MPUM");
            for (const auto& c : report.candidates) {
                if (c.distance_sq <= 1e-18) {
                    const double gap = projector_distance(candidates[c.index].subspace(), mpum.subspace());
                    o.require(gap <= 1e-7, "zero-distance candidate with projector gap " + fmt(gap));
                }
            }
            ++lists;
        }
    }
    if (o.pass) {
        o.detail = std::to_string(lists) + " candidate lists, MPUM always maximal";
    }
    return o;
}

Outcome anomaly_steady_states() {
    Outcome o;
    const auto t0 = Clock::now();
    const anomaly::AnomalyConfig cfg;
    const auto series = anomaly::run_detection(cfg);
    const double elapsed = seconds_since(t0);

    o.require(series.size() == 251, "expected 251 samples");
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto r = series.regime[k];
        if (r == anomaly::Regime::Init || r == anomaly::Regime::Transition) {
            continue;
        }
        const double c = *series.chordal[k];
        const double g = *series.l_gap[k];
        const std::string at = " at t=" + std::to_string(k);
        if (r == anomaly::Regime::Normal) {
            o.require(c <= 1e-6, "normal chordal " + fmt(c) + at);
            o.require(g <= 1e-6, "normal l_gap " + fmt(g) + at);
        } else {
            const double target = r == anomaly::Regime::Fault1 ? std::sqrt(2.0) : 2.0;
            o.require(std::abs(c - target) <= 1e-3, "fault chordal " + fmt(c) + at);
            o.require(g == 1.0, "fault l_gap " + fmt(g) + at);
        }
    }
    const auto stats = anomaly::steady_state_stats(series);
    for (const auto& st : stats) {
        o.require(st.count > 0, "a regime has no steady-state windows");
    }
    o.require(stats[0].chordal_mean < stats[1].chordal_mean &&
                  stats[1].chordal_mean < stats[2].chordal_mean,
              "mean chordal distances are not strictly ordered");
    o.require(elapsed < 5.0, "runtime " + fmt(elapsed) + " s");
    if (o.pass) {
        o.detail = "chordal means " + fmt(stats[0].chordal_mean) + " < " + fmt(stats[1].chordal_mean) +
                   " < " + fmt(stats[2].chordal_mean) + ", " + fmt(elapsed) + " s";
    }
    return o;
}

Outcome oracle_angles() {
    Outcome o;
    auto rng = testing::make_rng(109);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = testing::uniform_int(rng, 2, 30);
        const int k = testing::uniform_int(rng, 1, n);
        const Subspace v = testing::random_subspace(rng, n, k);
        const Subspace u = testing::random_subspace(rng, n, k);
        const auto prod = principal_angles(v, u).angles;
        const auto ref = oracle::angles_from_projector_difference(v.basis(), u.basis());
        o.require(prod.size() == ref.size(), "angle counts differ");
        for (std::size_t i = 0; i < std::min(prod.size(), ref.size()); ++i) {
            const double err = std::abs(prod[i] - ref[i]);
            worst = std::max(worst, err);
            o.require(err <= 1e-7, "angle differs by " + fmt(err));
        }
    }
    if (o.pass) {
        o.detail = "100 pairs, max deviation " + fmt(worst);
    }
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

Outcome determinism() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "bm_acceptance_determinism";
    fs::remove_all(root);
    for (const char* run : {"a", "b"}) {
        std::ostringstream out, err;
        const int code = cli::run({"anomaly", "--combined", "-o", (root / run).string()}, out, err);
        o.require(code == 0, "anomaly run failed: " + err.str());
    }
    for (const char* f : {"output_signal.csv", "distance_chordal.csv", "distance_gap.csv",
                          "detection_series.csv"}) {
        const std::string a = slurp(root / "a" / f);
        o.require(!a.empty(), std::string(f) + " is empty");
        o.require(a == slurp(root / "b" / f), std::string(f) + " differs between runs");
    }
    fs::remove_all(root);
    if (o.pass) {
        o.detail = "4 CSVs byte-identical across two runs";
    }
    return o;
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"metric axioms", metric_axioms},
        {"distance decomposition", decomposition},
        {"coordinate, rotation and permutation invariance", invariances},
        {"dimension formula mL + n", dimension_formula},
        {"subspace vs matrix distance", matrix_vs_subspace},
        {"utility equals minus squared distance", utility_identity},
        {"optimality of the MPUM", mpum_optimality},
        {"anomaly steady states", anomaly_steady_states},
        {"principal angles vs projector oracle", oracle_angles},
        {"anomaly CSV determinism", determinism},
    };
    std::printf("seed %llu\n", static_cast<unsigned long long>(testing::base_seed()));
    int failed = 0;
    int index = 1;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str());
    }
    std::printf("%d/%d criteria passed\n", index - 1 - failed, index - 1);
    return failed == 0 ? 0 : 1;
}
