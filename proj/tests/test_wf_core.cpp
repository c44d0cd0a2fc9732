#include <cmath>

#include "doctest.h"
#include "wfren/rng.hpp"
#include "wfren/stats.hpp"
#include "wfren/wf_core.hpp"

using namespace wfren;
using namespace wfren::wf;

TEST_SUITE("wf_core") {
    TEST_CASE("invariant_moment closed form") {
        CHECK(invariant_moment(0.7, 0.42, 1) == doctest::Approx(0.42));
        CHECK(invariant_moment(1.0, 0.5, 2) == doctest::Approx(0.375));
        CHECK(invariant_moment(0.3, 1.0, 5) == doctest::Approx(1.0));
        CHECK(invariant_moment(2.0, 0.25, 0) == doctest::Approx(1.0));
    }

    TEST_CASE("invariant_moment bounds and monotonicity in x") {
        for (double gamma : {0.5, 1.0, 2.0}) {
            for (int n = 1; n <= 4; ++n) {
                double prev = -1.0;
                for (int i = 0; i <= 20; ++i) {
                    const double x = i / 20.0;
                    const double m = invariant_moment(gamma, x, n);
                    CHECK(m >= 0.0);
                    CHECK(m <= 1.0);
                    CHECK(m >= prev);
                    prev = m;
                }
            }
        }
    }

    TEST_CASE("fixed-shape identity from moment algebra") {
        for (double gamma : {0.25, 1.0, 3.0}) {
            for (double x : {0.1, 0.5, 0.9}) {
                const double lhs = invariant_moment(gamma, x, 1) - invariant_moment(gamma, x, 2);
                CHECK(lhs == doctest::Approx(x * (1.0 - x) / (1.0 + gamma)).epsilon(1e-12));
            }
        }
    }

    TEST_CASE("absorbing boundary: path from 0 with attraction 0 stays 0") {
        Rng rng = StreamKey::root(7).sub("abs").rng();
        const WfPath path = simulate_wf_path({0.0, 1.0, 1e-3}, 0.0, 5.0, rng);
        for (double v : path.values) CHECK(v == 0.0);
    }

    TEST_CASE("parameter validation") {
        Rng rng = StreamKey::root(7).sub("bad").rng();
        CHECK_THROWS_AS(simulate_wf_path({0.5, -1.0, 1e-3}, 0.5, 1.0, rng), std::invalid_argument);
        CHECK_THROWS_AS(simulate_wf_path({0.5, 1.0, 0.0}, 0.5, 1.0, rng), std::invalid_argument);
        CHECK_THROWS_AS(simulate_wf_path({1.5, 1.0, 1e-3}, 0.5, 1.0, rng), std::invalid_argument);
        const WfParams lo{0.6, 1.0, 1e-3};
        const WfParams hi{0.4, 1.0, 1e-3};
        CHECK_THROWS_AS(couple_wf_pair(lo, hi, 0.2, 0.8, 1.0, rng), std::invalid_argument);
        CHECK_THROWS_AS(couple_wf_pair(hi, lo, 0.8, 0.2, 1.0, rng), std::invalid_argument);
    }

    TEST_CASE("long-run time averages match the stationary moments") {
        const double gamma = 1.0;
        const double x = 0.3;
        Rng rng = StreamKey::root(8).sub("avg").rng();
        const int n_batches = 20;
        const double batch_time = 100.0;
        MeanAcc mean_y, mean_yy;
        BetaInvariantLaw law{gamma, x};
        double y = sample_invariant(law, rng);  // stationary start, no burn-in
        const double dt = 1e-3;
        for (int b = 0; b < n_batches; ++b) {
            double s1 = 0.0, s2 = 0.0;
            const auto steps = static_cast<long long>(batch_time / dt);
            for (long long k = 0; k < steps; ++k) {
                y = euler_step(y, x, gamma, dt, rng.normal());
                s1 += y;
                s2 += y * (1.0 - y);
            }
            mean_y.add(s1 / steps);
            mean_yy.add(s2 / steps);
        }
        CHECK(std::fabs(mean_y.mean() - x) < 3.0 * mean_y.se());
        const double target = x * (1.0 - x) / (1.0 + gamma);
        CHECK(std::fabs(mean_yy.mean() - target) < 3.0 * mean_yy.se() + 2e-3);
    }

    TEST_CASE("sample_invariant matches closed-form moments") {
        StreamKey key = StreamKey::root(9);
        SUBCASE("endpoint is a point mass") {
            Rng rng = key.sub("pt").rng();
            for (int i = 0; i < 100; ++i) CHECK(sample_invariant({1.0, 0.0}, rng) == 0.0);
            for (int i = 0; i < 100; ++i) CHECK(sample_invariant({0.5, 1.0}, rng) == 1.0);
        }
        SUBCASE("moments at (gamma=1, x=0.3)") {
            Rng rng = key.sub("mom").rng();
            BetaInvariantLaw law{1.0, 0.3};
            MeanAcc m1, myy;
            for (int i = 0; i < 100000; ++i) {
                const double yv = sample_invariant(law, rng);
                m1.add(yv);
                myy.add(yv * (1.0 - yv));
            }
            CHECK(std::fabs(m1.mean() - 0.3) < 3.0 * m1.se());
            CHECK(std::fabs(myy.mean() - 0.105) < 3.0 * myy.se());
        }
        SUBCASE("higher moments across a parameter grid") {
            Rng rng = key.sub("grid").rng();
            for (double gamma : {0.5, 2.0}) {
                for (double x : {0.2, 0.7}) {
                    BetaInvariantLaw law{gamma, x};
                    MeanAcc m[3];
                    for (int i = 0; i < 50000; ++i) {
                        const double yv = sample_invariant(law, rng);
                        m[0].add(yv);
                        m[1].add(yv * yv);
                        m[2].add(yv * yv * yv);
                    }
                    for (int n = 1; n <= 3; ++n) {
                        const double target = invariant_moment(gamma, x, n);
                        CHECK(std::fabs(m[n - 1].mean() - target) < 3.0 * m[n - 1].se());
                    }
                }
            }
        }
    }

    TEST_CASE("coupling: identical inputs give identical paths") {
        Rng rng = StreamKey::root(10).sub("same").rng();
        const WfParams p{0.4, 1.0, 1e-3};
        const CoupledPair cp = couple_wf_pair(p, p, 0.6, 0.6, 2.0, rng);
        CHECK(cp.ordering_violation_fraction == 0.0);
        for (std::size_t k = 0; k < cp.low.values.size(); ++k)
            CHECK(cp.low.values[k] == cp.high.values[k]);
    }

    TEST_CASE("exponential coupling decay at t = 1/c") {
        const double gamma = 1.0;  // c = 1
        const double t = 1.0;
        const double dt = 1e-3;
        StreamKey key = StreamKey::root(11).sub("decay");
        MeanAcc diff;
        for (int r = 0; r < 4000; ++r) {
            Rng rng = key.sub(r).rng();
            const WfParams p{0.5, gamma, dt};
            const CoupledPair cp = couple_wf_pair(p, p, 0.2, 0.8, t, rng);
            diff.add(cp.high.values.back() - cp.low.values.back());
        }
        const double expected = 0.6 * std::exp(-1.0);
        CHECK(std::fabs(diff.mean() - expected) < 0.05 * expected);
    }

    TEST_CASE("ordering violations vanish as dt is refined") {
        StreamKey key = StreamKey::root(12).sub("viol");
        double prev = 1.0;
        int level = 0;
        for (double dt : {4e-4, 2e-4, 1e-4}) {
            MeanAcc frac;
            for (int r = 0; r < 200; ++r) {
                Rng rng = key.sub(level).sub(r).rng();
                const WfParams p{0.5, 1.0, dt};
                const CoupledPair cp = couple_wf_pair(p, p, 0.45, 0.55, 1.0, rng);
                frac.add(cp.ordering_violation_fraction);
            }
            CHECK(frac.mean() <= prev + 1e-9);
            prev = frac.mean();
            ++level;
        }
        CHECK(prev < 0.01);
    }

    TEST_CASE("dual chain without injection") {
        StreamKey key = StreamKey::root(13);
        SUBCASE("m=0 starts absorbed") {
            Rng rng = key.sub("zero").rng();
            for (int i = 0; i < 50; ++i) CHECK(dual_chain_psi_infinity(0, 1.0, false, rng) == 0);
        }
        SUBCASE("mean for m=3, gamma=1 is 11/6") {
            Rng rng = key.sub("mean").rng();
            MeanAcc m;
            for (int i = 0; i < 100000; ++i)
                m.add(static_cast<double>(dual_chain_psi_infinity(3, 1.0, false, rng)));
            CHECK(std::fabs(m.mean() - 11.0 / 6.0) < 3.0 * m.se());
        }
        SUBCASE("two-rate race: P[psi=2] = 1/(1+gamma) for m=2") {
            for (double gamma : {0.5, 1.0, 2.0}) {
                Rng rng = key.sub("race").sub(static_cast<std::uint64_t>(gamma * 10)).rng();
                MeanAcc p2;
                for (int i = 0; i < 50000; ++i)
                    p2.add(dual_chain_psi_infinity(2, gamma, false, rng) == 2 ? 1.0 : 0.0);
                CHECK(std::fabs(p2.mean() - 1.0 / (1.0 + gamma)) < 3.0 * p2.se());
            }
        }
        SUBCASE("moment duality: E[x^psi] equals the invariant moment") {
            Rng rng = key.sub("dual").rng();
            for (double gamma : {0.5, 1.0}) {
                for (double x : {0.4, 0.8}) {
                    for (int m = 1; m <= 3; ++m) {
                        MeanAcc acc;
                        for (int i = 0; i < 50000; ++i) {
                            const auto psi = dual_chain_psi_infinity(m, gamma, false, rng);
                            acc.add(std::pow(x, static_cast<double>(psi)));
                        }
                        const double target = invariant_moment(gamma, x, m);
                        CHECK(std::fabs(acc.mean() - target) < 3.0 * acc.se() + 1e-12);
                    }
                }
            }
        }
    }
}
