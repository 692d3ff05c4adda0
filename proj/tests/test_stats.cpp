#include <doctest.h>

#include <cmath>

#include "hesitator/rng.hpp"
#include "hesitator/stats.hpp"
#include "support/wilcoxon_oracle.hpp"

using namespace hesitator;



TEST_CASE("documented small cases") {
    const auto r1 = wilcoxon_signed_rank({1.0, 2.0, 3.0});
    CHECK(r1.w_plus == doctest::Approx(6.0));
    CHECK(r1.p_two_sided == doctest::Approx(0.25));
    CHECK(r1.method == "exact");

    const auto r2 = wilcoxon_signed_rank({1.0, -1.0});
    CHECK(r2.p_two_sided == doctest::Approx(1.0));

    const auto r3 = wilcoxon_signed_rank({2.0, -2.0, 2.0, -2.0});
    CHECK(r3.p_two_sided == doctest::Approx(1.0));
}

TEST_CASE("zeros are discarded; all-zero sample is degenerate") {
    const auto r = wilcoxon_signed_rank({0.0, 1.0, 2.0, 0.0, 3.0});
    CHECK(r.n_nonzero == 3);
    CHECK(r.p_two_sided == doctest::Approx(0.25));
    CHECK_THROWS_AS(wilcoxon_signed_rank({0.0, 0.0}), ConfigError);
}

TEST_CASE("exact p matches full enumeration for all sign patterns, n <= 10") {
    for (size_t n = 1; n <= 10; ++n) {
        for (size_t mask = 0; mask < (size_t{1} << n); ++mask) {
            std::vector<double> d;
            for (size_t i = 0; i < n; ++i) {
                const double mag = static_cast<double>(i + 1);
                d.push_back((mask & (size_t{1} << i)) ? mag : -mag);
            }
            const auto r = wilcoxon_signed_rank(d);
            CHECK(r.p_two_sided == doctest::Approx(oracle::wilcoxon_enumeration_p(d)).epsilon(1e-12));
        }
    }
}

TEST_CASE("exact p matches enumeration with tied magnitudes") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const size_t n = 2 + rng.uniform_index(9);
        std::vector<double> d(n);
        for (auto& v : d) {
            const double mag = 1.0 + static_cast<double>(rng.uniform_index(4));  // many ties
            v = rng.uniform() < 0.5 ? mag : -mag;
        }
        const auto r = wilcoxon_signed_rank(d);
        CHECK(r.p_two_sided == doctest::Approx(oracle::wilcoxon_enumeration_p(d)).epsilon(1e-12));
    }
}

TEST_CASE("normal branch engages past 25 pairs and behaves sanely") {
    std::vector<double> strong;
    for (int i = 0; i < 60; ++i) strong.push_back(1.0);
    for (int i = 0; i < 6; ++i) strong.push_back(-1.0);
    const auto r = wilcoxon_signed_rank(strong);
    CHECK(r.method == "normal");
    CHECK(r.p_two_sided < 1e-6);

    std::vector<double> balanced;
    for (int i = 0; i < 30; ++i) {
        balanced.push_back(1.0);
        balanced.push_back(-1.0);
    }
    const auto r2 = wilcoxon_signed_rank(balanced);
    CHECK(r2.p_two_sided > 0.5);
}

TEST_CASE("paired interface subtracts elementwise") {
    const auto r = wilcoxon_signed_rank({5.0, 6.0, 7.0}, {4.0, 4.0, 4.0});
    CHECK(r.w_plus == doctest::Approx(6.0));
    CHECK_THROWS_AS(wilcoxon_signed_rank({1.0}, {1.0, 2.0}), ConfigError);
}

TEST_CASE("normal cdf sanity") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_cdf(-1.96) == doctest::Approx(0.025).epsilon(1e-3));
    CHECK(normal_cdf(1.96) == doctest::Approx(0.975).epsilon(1e-3));
}
