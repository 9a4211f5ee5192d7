#include <doctest.h>

#include <cmath>

#include "qri/distribution.hpp"
#include "qri/error.hpp"
#include "qri/partition.hpp"
#include "qri/theory.hpp"

using namespace qri;

TEST_CASE("true_r basics") {
    const auto ln = DistributionSpec::lognormal(0, 1);
    CHECK(true_r(ln, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(true_r(ln, 0.5) == doctest::Approx(0.2595049502650713).epsilon(1e-9));

    const auto lomax = DistributionSpec::pareto2(1, 1);
    for (double p = 0.1; p <= 1.0; p += 0.1) {
        const double t = p / 2.0;
        CHECK(true_r(lomax, p) == doctest::Approx(t * t / ((1 - t) * (1 - t))).epsilon(1e-12));
    }
    CHECK_THROWS_AS(true_r(ln, 0.0), Error);
    CHECK_THROWS_AS(true_r(ln, 1.2), Error);
}

TEST_CASE("true_i matches closed forms") {
    CHECK(true_i(DistributionSpec::lognormal(0, 1)) ==
          doctest::Approx(0.6637959975536588).epsilon(2e-8));
    CHECK(true_i(DistributionSpec::exponential(1)) ==
          doctest::Approx(0.7015737451565936).epsilon(1e-7));
    // 4 ln 2 - 2, by hand-integrating the Lomax(1,1) ratio curve
    CHECK(true_i(DistributionSpec::pareto2(1, 1)) ==
          doctest::Approx(4.0 * std::log(2.0) - 2.0).epsilon(1e-8));
}

TEST_CASE("true_ik matches lognormal closed forms and sums back") {
    const auto ln = DistributionSpec::lognormal(0, 1);
    const auto quintile = make_partition({0.2, 0.4});
    const auto got = true_ik(ln, quintile);
    const auto want = lognormal_Ik(1.0, quintile);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-7));
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < 3; ++k) sum += quintile.weights[k] * got[k];
    CHECK(sum == doctest::Approx(true_i(ln)).epsilon(1e-7));

    // whole-interval partition reduces to true_i
    const auto whole = make_partition({});
    CHECK(true_ik(ln, whole)[0] == doctest::Approx(true_i(ln)).epsilon(1e-8));
}

TEST_CASE("exponential quartile components") {
    const auto exp1 = DistributionSpec::exponential(1);
    const auto quartile = make_partition({0.25});
    const auto got = true_ik(exp1, quartile);
    CHECK(got[0] == doctest::Approx(0.9229522956223569).epsilon(1e-7));
    CHECK(got[1] == doctest::Approx(0.4801951946908303).epsilon(1e-7));
}

TEST_CASE("component ordering is nonincreasing") {
    const auto part = equi_partition(6);
    for (const char* lit : {"lognormal:0,1", "exp:2", "pareto2:3,1", "weibull:0.7", "chisq:4"}) {
        const auto comps = true_ik(parse_distribution(lit), part);
        for (std::size_t k = 1; k < comps.size(); ++k) {
            CHECK(comps[k] <= comps[k - 1] + 1e-9);
        }
    }
}

TEST_CASE("scale invariance of the Lomax QRI") {
    const double a = true_i(DistributionSpec::pareto2(2, 1));
    const double b = true_i(DistributionSpec::pareto2(2, 100));
    CHECK(std::fabs(a - b) < 1e-12);
}

TEST_CASE("refinement consistency with coarsen") {
    const auto ln = DistributionSpec::lognormal(0, 1);
    const auto deciles = equi_partition(5);
    const auto quintile = make_partition({0.2, 0.4});
    const auto fine = true_ik(ln, deciles);
    const auto direct = true_ik(ln, quintile);
    const auto regrouped = coarsen(deciles, quintile, fine);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(regrouped[k] == doctest::Approx(direct[k]).epsilon(1e-6));
    }
}

TEST_CASE("shape curves behave like the families say") {
    // Lomax: I decreasing in the shape, outer-quartile contribution falls
    // from 1/2 toward the exponential limit 0.46148
    const auto quartile = make_partition({0.25});
    double prev_i = 2.0;
    for (double a : {1.0, 2.0, 4.0, 10.0, 100.0}) {
        const auto d = DistributionSpec::pareto2(a, 1);
        const double i = true_i(d);
        CHECK(i < prev_i);
        prev_i = i;
        const double half_i1 = true_ik(d, quartile)[0] / 2.0;
        CHECK(half_i1 > 0.4614);
        CHECK(half_i1 <= 0.5);
    }
    CHECK(prev_i == doctest::Approx(0.7016).epsilon(2e-3));
    CHECK(true_ik(DistributionSpec::pareto2(100, 1), quartile)[0] / 2.0 ==
          doctest::Approx(0.9229522956223569 / 2.0).epsilon(1e-2));

    double prev = 0.0;
    for (double sigma : {0.25, 0.5, 1.0, 2.0}) {
        const double i = true_i(DistributionSpec::lognormal(0, sigma));
        CHECK(i > prev);
        prev = i;
    }
}

TEST_CASE("equi-K limit identification") {
    const auto ln = DistributionSpec::lognormal(0, 1);
    const auto [ik, one_minus_r] = equi_limit_check(ln, 200, 0.5);
    CHECK(std::fabs(ik - (1.0 - 0.2595049502650713)) < 0.01);
    CHECK(std::fabs(one_minus_r - (1.0 - 0.2595049502650713)) < 1e-9);

    // degenerate call reduces to (true_I, 1 - R(p))
    const auto [i1, r1] = equi_limit_check(ln, 1, 0.37);
    CHECK(i1 == doctest::Approx(true_i(ln)).epsilon(1e-7));
    CHECK(r1 == doctest::Approx(1.0 - true_r(ln, 0.37)).epsilon(1e-12));

    // gap shrinks by >= 1.5x when K doubles
    const auto exp1 = DistributionSpec::exponential(1);
    const auto [a200, b200] = equi_limit_check(exp1, 200, 0.3);
    const auto [a400, b400] = equi_limit_check(exp1, 400, 0.3);
    const double gap200 = std::fabs(a200 - b200);
    const double gap400 = std::fabs(a400 - b400);
    CHECK(gap400 * 1.5 <= gap200);
}
