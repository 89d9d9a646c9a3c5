#include "powprofit/analytic.hpp"
#include "powprofit/markov.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

using namespace powprofit;

TEST_CASE("kernel rows are probability distributions")
{
    auto chain = markov::build_chain({0.3, 0.5}, 50);
    std::size_t n = chain.size();
    REQUIRE(chain.kernel.size() == n * n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double pij = chain.kernel[i * n + j];
            CHECK(pij >= 0.0);
            sum += pij;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("stationary mass at lead zero matches the closed form")
{
    // pi_0 = (p - q) / A with A = (1 + pq)(p - q) + pq
    for (double q : {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45}) {
        double p = 1.0 - q;
        double A = (1.0 + p * q) * (p - q) + p * q;
        auto st = markov::stationary(markov::build_chain({q, 0.9}));
        CHECK(st.pi[0] == doctest::Approx((p - q) / A).epsilon(1e-10));
        CHECK(st.expected_return_time == doctest::Approx(A / (p - q)).epsilon(1e-10));
    }
}

TEST_CASE("revenue rates reproduce the closed-form apparent hashrate")
{
    for (double q : {0.1, 0.25, 0.4}) {
        for (double g : {0.0, 0.5, 0.9, 1.0}) {
            MinerParams m{q, g};
            auto st = markov::stationary(markov::build_chain(m));
            double total = st.r_pool + st.r_others;
            CHECK(1.0 / total ==
                  doctest::Approx(analytic::sm_difficulty_drift(m)).epsilon(1e-10));
            CHECK(st.r_pool / total ==
                  doctest::Approx(analytic::sm_apparent_hashrate(m)).epsilon(1e-10));
        }
    }
}

TEST_CASE("truncation is converged at the default size")
{
    MinerParams m{0.45, 0.5}; // heaviest geometric tail in the valid range
    auto a = markov::stationary(markov::build_chain(m, 200));
    auto b = markov::stationary(markov::build_chain(m, 400));
    CHECK(a.truncation_mass < 1e-12);
    CHECK(a.pi[0] == doctest::Approx(b.pi[0]).epsilon(1e-10));
    CHECK(a.r_pool == doctest::Approx(b.r_pool).epsilon(1e-10));
    CHECK(a.r_others == doctest::Approx(b.r_others).epsilon(1e-10));
}

TEST_CASE("a too-small chain is rejected")
{
    CHECK_THROWS_AS(markov::build_chain({0.45, 0.5}, 5), std::invalid_argument);
    // builds, but the truncation state still carries visible mass
    CHECK_THROWS_AS(markov::stationary(markov::build_chain({0.45, 0.5}, 10)), std::runtime_error);
}

TEST_CASE("stationary distribution sums to one")
{
    auto st = markov::stationary(markov::build_chain({0.2, 0.3}));
    double sum = std::accumulate(st.pi.begin(), st.pi.end(), 0.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : st.pi) CHECK(v >= -1e-15);
}
