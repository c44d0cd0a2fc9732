#include <cmath>

#include "doctest.h"
#include "wfren/loglaplace.hpp"
#include "wfren/stats.hpp"
#include "wfren/wf_core.hpp"

using namespace wfren;
using namespace wfren::ll;

namespace {
double closed_form_constant(double r, double gamma) { return (1.0 + gamma) / (1.0 / r + gamma); }
}  // namespace

TEST_SUITE("loglaplace") {
    TEST_CASE("catalyzing function basics") {
        const auto h = CatalyzingFunction::h01(50);
        CHECK(h.boundary_class() == std::pair{0, 1});
        CHECK(CatalyzingFunction::h00(50).boundary_class() == std::pair{0, 0});
        CHECK(CatalyzingFunction::h11(50).boundary_class() == std::pair{1, 1});
        CHECK(h(0.0) == 0.0);
        CHECK(h(1.0) == 1.0);
        CHECK(h(0.5) == doctest::Approx(1.0 - std::pow(0.5, 7)).epsilon(1e-3));
        // interpolation is exact at the nodes and linear between them
        const auto f = CatalyzingFunction({0.0, 1.0, 0.5});
        CHECK(f(0.25) == doctest::Approx(0.5));
        CHECK(f(0.75) == doctest::Approx(0.75));
        CHECK(f.max_slope() == doctest::Approx(2.0));
        CHECK_THROWS_AS(CatalyzingFunction({0.1, -0.2, 0.3}), std::invalid_argument);
    }

    TEST_CASE("cluster mass is an exact exponential with the stated moments") {
        StreamKey key = StreamKey::root(21).sub("cluster");
        for (double gamma : {0.25, 1.0}) {
            MeanAcc m1, m2, mf;
            for (int r = 0; r < 40000; ++r) {
                Rng rng = key.sub(static_cast<std::uint64_t>(gamma * 100)).sub(r).rng();
                const ClusterSample z = sample_cluster(gamma, 0.3, 2e-3, rng);
                double sumw = 0.0, sumf = 0.0;
                for (const auto& [pos, w] : z.atoms) {
                    sumw += w;
                    sumf += w * pos;
                }
                CHECK(sumw == doctest::Approx(z.total_mass).epsilon(1e-12));
                m1.add(z.total_mass);
                m2.add(z.total_mass * z.total_mass);
                mf.add(sumf);
            }
            CHECK(std::fabs(m1.mean() - gamma) < 3.0 * m1.se());
            CHECK(std::fabs(m2.mean() - 2.0 * gamma * gamma) < 3.0 * m2.se());
            // E<Z, y> = gamma * x
            CHECK(std::fabs(mf.mean() - gamma * 0.3) < 3.0 * mf.se() + 2e-3);
        }
    }

    TEST_CASE("apply_U on constants reproduces the closed form") {
        StreamKey key = StreamKey::root(22);
        SUBCASE("zero maps to zero") {
            const auto est = apply_U(1.0, CatalyzingFunction::constant(0.0, 20), {500, 2e-3},
                                     key.sub("zero"));
            for (double v : est.value) CHECK(v == 0.0);
        }
        SUBCASE("r=2, gamma=0.5 gives 1.5 at every node") {
            const auto est = apply_U(0.5, CatalyzingFunction::constant(2.0, 10), {20000, 2e-3},
                                     key.sub("const"));
            for (std::size_t i = 0; i < est.value.size(); ++i) {
                CHECK(std::fabs(est.value[i] - 1.5) < 3.0 * est.std_error[i]);
            }
        }
        SUBCASE("general r, gamma anchor at a single node") {
            for (auto [r, gamma] : {std::pair{0.5, 1.0}, {3.0, 2.0}}) {
                const auto est =
                    apply_U_at(gamma, CatalyzingFunction::constant(r, 4), 0.5, {30000, 2e-3},
                               key.sub("rg").sub(static_cast<std::uint64_t>(r * 10 + gamma)));
                CHECK(std::fabs(est.value - closed_form_constant(r, gamma)) < 3.0 * est.std_error);
            }
        }
    }

    TEST_CASE("h00 is superharmonic, h1 subharmonic (pointwise, 3 SE)") {
        StreamKey key = StreamKey::root(23);
        const McConfig mc{12000, 2e-3};
        const auto h00 = CatalyzingFunction::h00(10);
        const auto est00 = apply_U(1.0, h00, mc, key.sub("h00"));
        for (int i = 0; i <= 10; ++i) {
            const double x = i / 10.0;
            CHECK(est00.value[i] <= h00(x) + 3.0 * est00.std_error[i] + 2e-3);
        }
        const auto h1 = CatalyzingFunction::h1(10);
        const auto est1 = apply_U(1.0, h1, mc, key.sub("h1"));
        for (int i = 0; i <= 10; ++i) {
            const double x = i / 10.0;
            CHECK(est1.value[i] >= x - 3.0 * est1.std_error[i] - 2e-3);
        }
    }

    TEST_CASE("linear sandwich: <Gamma,f> <= U f <= (1+gamma)<Gamma,f>") {
        StreamKey key = StreamKey::root(24).sub("gast");
        const double gamma = 1.0;
        const auto h1 = CatalyzingFunction::h1(8);
        const auto est = apply_U(gamma, h1, {12000, 2e-3}, key);
        for (int i = 0; i <= 8; ++i) {
            const double x = i / 8.0;  // <Gamma_x, id> = x
            CHECK(est.value[i] <= (1.0 + gamma) * x + 3.0 * est.std_error[i] + 2e-3);
            CHECK(est.value[i] >= x - 3.0 * est.std_error[i] - 2e-3);
        }
    }

    TEST_CASE("constant-multiple bounds from Jensen") {
        StreamKey key = StreamKey::root(25).sub("rh");
        const double gamma = 1.0;
        const auto p = CatalyzingFunction::h01(8);
        const McConfig mc{20000, 2e-3};
        const auto u1 = apply_U(gamma, p, mc, key.sub("u1"));
        std::vector<double> scaled = p.values();
        for (double& v : scaled) v *= 2.0;
        const auto u2 = apply_U(gamma, CatalyzingFunction(scaled), mc, key.sub("u2"));
        for (int i = 0; i <= 8; ++i) {
            const double se = 3.0 * std::sqrt(u2.std_error[i] * u2.std_error[i] +
                                              4.0 * u1.std_error[i] * u1.std_error[i]);
            CHECK(u2.value[i] <= 2.0 * u1.value[i] + se + 2e-3);
        }
    }

    TEST_CASE("dual chain oracle for h_m") {
        StreamKey key = StreamKey::root(26);
        SUBCASE("x=1 gives exactly 1") {
            const auto est = apply_U_dual_hm(1.0, 3, 1.0, 2000, key.sub("one"));
            CHECK(est.value == doctest::Approx(1.0));
        }
        SUBCASE("primary cross-oracle: dual vs cluster MC at m=7") {
            for (double gamma : {0.5, 1.0}) {
                for (double x : {0.1, 0.5, 0.9}) {
                    const auto tag = static_cast<std::uint64_t>(gamma * 8 + x * 100);
                    const auto dual = apply_U_dual_hm(gamma, 7, x, 150000, key.sub("dual").sub(tag));
                    const auto mc = apply_U_at(gamma, CatalyzingFunction::hm(7, 200), x,
                                               {40000, 1e-3}, key.sub("mc").sub(tag));
                    const double combined = 3.0 * std::sqrt(dual.std_error * dual.std_error +
                                                            mc.std_error * mc.std_error);
                    CHECK(std::fabs(dual.value - mc.value) < combined + 5e-3);
                }
            }
        }
        SUBCASE("Jensen bound via mean of psi") {
            const double gamma = 1.0;
            const int m = 7;
            const double x = 0.5;
            const auto mean_psi = injected_chain_mean_psi(gamma, m, 100000, key.sub("mp"));
            const auto est = apply_U_dual_hm(gamma, m, x, 100000, key.sub("jb"));
            const double bound = 1.0 - std::pow(1.0 - x, mean_psi.value);
            CHECK(est.value <= bound + 3.0 * est.std_error + 3.0 * mean_psi.std_error);
        }
        SUBCASE("E[psi'] < 7 for m=7, all tested gamma") {
            for (double gamma : {0.5, 1.0, 2.0, 5.0}) {
                const auto mp = injected_chain_mean_psi(
                    gamma, 7, 60000, key.sub("lt7").sub(static_cast<std::uint64_t>(gamma * 10)));
                CHECK(mp.value + 3.0 * mp.std_error < 7.0);
                CHECK(mp.value - 3.0 * mp.std_error < large_gamma_bound(gamma, 7));
            }
        }
    }

    TEST_CASE("chi_m closed form") {
        CHECK(chi_m(0.0, 3) == doctest::Approx(1.0));
        CHECK(chi_m(0.0, 9) == doctest::Approx(1.0));
        CHECK(chi_m(0.7, 1) == doctest::Approx(1.7));
        const double chi51 = (2.0 + 1.0 + 2.0 / 3.0 + 0.5 + 0.4) / 5.0;
        CHECK(chi_m(1.0, 5) == doctest::Approx(chi51));
        CHECK(chi_m(1.0, 5) < 1.0);
    }

    TEST_CASE("large gamma bound closed form") {
        double h7 = 0.0;
        for (int k = 1; k <= 7; ++k) h7 += 1.0 / k;
        CHECK(large_gamma_bound(1.0, 7) == doctest::Approx(2.0 * h7 + 1.5));
        CHECK(large_gamma_bound(1.0, 7) < 7.0);
        CHECK(large_gamma_bound(1e12, 7) == doctest::Approx(h7 + 1.5).epsilon(1e-6));
    }

    TEST_CASE("iterate_U on constants follows the exact recursion") {
        StreamKey key = StreamKey::root(27).sub("itc");
        const std::vector<double> gammas(6, 1.0);
        const double lambda = 0.5;
        const auto stages =
            iterate_U(gammas, CatalyzingFunction::constant(lambda, 8), {8000, 2e-3}, key);
        double prod = 1.0;
        for (std::size_t s = 0; s < stages.size(); ++s) {
            prod *= 2.0;  // 1 + gamma_k
            const double exact = prod / (prod - 1.0 + 1.0 / lambda);
            for (int i = 0; i <= 8; ++i) {
                CHECK(std::fabs(stages[s].p.values()[i] - exact) <
                      5.0 * stages[s].estimate.std_error[i] + 0.02);
            }
        }
    }

    TEST_CASE("iterate_U contracts H00 toward zero and merges H01 starts") {
        StreamKey key = StreamKey::root(28);
        const std::vector<double> gammas(8, 1.0);
        const McConfig mc{3000, 2e-3};
        const auto h00_run = iterate_U(gammas, CatalyzingFunction::h00(40), mc, key.sub("h00"));
        CHECK(h00_run.back().p.sup_norm() < 0.05);

        const auto run_a = iterate_U(gammas, CatalyzingFunction::h01(40), mc, key.sub("a"));
        const auto run_b = iterate_U(
            gammas,
            CatalyzingFunction::from_function(
                [](double x) { return 0.4 * x + 0.5 * (1.0 - std::pow(1.0 - x, 3)); }, 40),
            mc, key.sub("b"));
        const double dn = sup_distance(run_a.back().p, run_b.back().p);
        CHECK(dn < 0.06);
    }

    TEST_CASE("strict contraction for r h01, r > 1") {
        StreamKey key = StreamKey::root(29).sub("strong");
        const double gamma = 1.0;
        const double r = 2.0;
        std::vector<double> scaled = CatalyzingFunction::h01(40).values();
        for (double& v : scaled) v *= r;
        const CatalyzingFunction rh(scaled);
        const auto est = apply_U(gamma, rh, {15000, 2e-3}, key);
        double worst = 0.0;
        for (int i = 1; i <= 40; ++i) {
            const double x = i / 40.0;
            worst = std::max(worst, (est.value[i] + 3.0 * est.std_error[i]) / rh(x));
        }
        CHECK(worst < 1.0);
    }

    TEST_CASE("shape preservation") {
        StreamKey key = StreamKey::root(30);
        const McConfig mc{8000, 2e-3};
        SUBCASE("monotone input stays monotone") {
            const auto rep = check_shape_preservation(1.0, CatalyzingFunction::h1(20), false, mc,
                                                      key.sub("mono"));
            CHECK(rep.monotone_ok);
        }
        SUBCASE("monotone concave input stays monotone concave") {
            const auto rep = check_shape_preservation(1.0, CatalyzingFunction::hm(2, 20), true, mc,
                                                      key.sub("conc"));
            CHECK(rep.monotone_ok);
            CHECK(rep.concave_ok);
        }
        SUBCASE("constant input gives constant output within noise") {
            const auto est = apply_U(1.0, CatalyzingFunction::constant(1.0, 20), mc, key.sub("c"));
            double lo = 1e300, hi = -1e300;
            for (double v : est.value) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            CHECK(hi - lo < 6.0 * est.max_se() + 1e-3);
        }
        SUBCASE("input of the wrong claimed shape is rejected") {
            CHECK_THROWS_AS(check_shape_preservation(1.0, CatalyzingFunction::h00(20), false, mc,
                                                     key.sub("bad")),
                            std::invalid_argument);
            CHECK_THROWS_AS(check_shape_preservation(1.0, CatalyzingFunction::h1(20), true, mc,
                                                     key.sub("bad2")),
                            std::invalid_argument);
        }
    }
}
