#include <cmath>

#include "doctest.h"
#include "wfren/rng.hpp"
#include "wfren/stats.hpp"

using namespace wfren;

TEST_SUITE("rng_stats") {
    TEST_CASE("stream splitting is deterministic and label-sensitive") {
        StreamKey root = StreamKey::root(42);
        Rng a = root.sub("alpha").sub(3).rng();
        Rng b = root.sub("alpha").sub(3).rng();
        Rng c = root.sub("alpha").sub(4).rng();
        Rng d = root.sub("beta").sub(3).rng();
        CHECK(a() == b());
        CHECK(a() == b());
        Rng a2 = root.sub("alpha").sub(3).rng();
        CHECK(a2() != c());
        CHECK(a2() != d());
    }

    TEST_CASE("uniform stays inside the open interval") {
        Rng rng = StreamKey::root(1).sub("u").rng();
        for (int i = 0; i < 100000; ++i) {
            const double u = rng.uniform();
            CHECK(u > 0.0);
            CHECK(u < 1.0);
        }
    }

    TEST_CASE("normal and exponential moments") {
        Rng rng = StreamKey::root(2).sub("n").rng();
        MeanAcc n, n2, e;
        for (int i = 0; i < 200000; ++i) {
            const double z = rng.normal();
            n.add(z);
            n2.add(z * z);
            e.add(rng.exponential(2.5));
        }
        CHECK(std::fabs(n.mean()) < 3.0 * n.se());
        CHECK(std::fabs(n2.mean() - 1.0) < 3.0 * n2.se());
        CHECK(std::fabs(e.mean() - 2.5) < 3.0 * e.se());
    }

    TEST_CASE("beta sampler matches exact moments, including small shapes") {
        Rng rng = StreamKey::root(3).sub("b").rng();
        for (auto [a, b] : {std::pair{0.3, 0.7}, {2.0, 5.0}, {0.05, 0.1}}) {
            MeanAcc m1, m2;
            for (int i = 0; i < 100000; ++i) {
                const double y = rng.beta(a, b);
                m1.add(y);
                m2.add(y * y);
            }
            const double mean = a / (a + b);
            const double second = a * (a + 1.0) / ((a + b) * (a + b + 1.0));
            CHECK(std::fabs(m1.mean() - mean) < 3.0 * m1.se() + 1e-4);
            CHECK(std::fabs(m2.mean() - second) < 3.0 * m2.se() + 1e-4);
        }
    }

    TEST_CASE("beta endpoint handling for degenerate shapes") {
        Rng rng = StreamKey::root(4).sub("b2").rng();
        CHECK(rng.beta(1e-15, 0.5) == 0.0);
        CHECK(rng.beta(0.5, 1e-15) == 1.0);
    }

    TEST_CASE("poisson mean and variance, small and chunked") {
        Rng rng = StreamKey::root(5).sub("p").rng();
        for (double mean : {0.7, 35.0, 700.0}) {
            MeanAcc m, v;
            const int reps = mean > 100 ? 20000 : 100000;
            for (int i = 0; i < reps; ++i) {
                const double k = static_cast<double>(rng.poisson(mean));
                m.add(k);
                v.add((k - mean) * (k - mean));
            }
            CHECK(std::fabs(m.mean() - mean) < 3.0 * m.se());
            CHECK(std::fabs(v.mean() - mean) < 3.0 * v.se());
        }
    }

    TEST_CASE("chi-square tail matches tabulated critical points") {
        CHECK(chi2_sf(6.634896601021213, 1) == doctest::Approx(0.01).epsilon(1e-3));
        CHECK(chi2_sf(21.665994333461924, 9) == doctest::Approx(0.01).epsilon(1e-3));
        CHECK(chi2_sf(0.0, 3) == doctest::Approx(1.0));
        CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-6));
    }
}
