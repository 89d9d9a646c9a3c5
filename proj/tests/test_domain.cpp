#include "powprofit/domain.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace powprofit;

TEST_CASE("strategy names round-trip")
{
    for (Strategy s : {Strategy::HM, Strategy::SM, Strategy::ISM, Strategy::ANM}) {
        CHECK(strategy_from_string(to_string(s)) == s);
    }
    CHECK_THROWS_AS(strategy_from_string("bogus"), std::invalid_argument);
    CHECK_THROWS_AS(strategy_from_string(""), std::invalid_argument);
}

TEST_CASE("miner parameter validation")
{
    CHECK_NOTHROW(validate(MinerParams{0.1, 0.9}));
    CHECK_NOTHROW(validate(MinerParams{0.499, 0.0}));
    CHECK_NOTHROW(validate(MinerParams{0.001, 1.0}));
    CHECK_THROWS_AS(validate(MinerParams{0.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(validate(MinerParams{0.5, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(validate(MinerParams{-0.1, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(validate(MinerParams{0.7, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(validate(MinerParams{0.1, -0.01}), std::invalid_argument);
    CHECK_THROWS_AS(validate(MinerParams{0.1, 1.01}), std::invalid_argument);
}

TEST_CASE("protocol parameter validation")
{
    CHECK_NOTHROW(validate(ProtocolParams{}));
    CHECK_NOTHROW(validate(ProtocolParams{1.0, 1, 0.5}));
    CHECK_THROWS_AS(validate(ProtocolParams{0.0, 2016, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ProtocolParams{-600.0, 2016, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ProtocolParams{600.0, 0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ProtocolParams{600.0, -5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ProtocolParams{600.0, 2016, 0.0}), std::invalid_argument);
}

TEST_CASE("validation messages name the violated invariant")
{
    try {
        validate(MinerParams{0.6, 0.5});
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("q") != std::string::npos);
    }
    try {
        validate(ProtocolParams{600.0, 0, 1.0});
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("n0") != std::string::npos);
    }
}

TEST_CASE("bitcoin defaults")
{
    ProtocolParams p;
    CHECK(p.tau0 == 600.0);
    CHECK(p.n0 == 2016);
    CHECK(p.b == 1.0);
}
