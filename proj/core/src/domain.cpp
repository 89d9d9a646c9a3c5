#include "powprofit/domain.hpp"

#include <cmath>
#include <stdexcept>

namespace powprofit {

const char* to_string(Strategy s)
{
    switch (s) {
    case Strategy::HM: return "hm";
    case Strategy::SM: return "sm";
    case Strategy::ISM: return "ism";
    case Strategy::ANM: return "anm";
    }
    return "?";
}

Strategy strategy_from_string(const std::string& name)
{
    if (name == "hm") return Strategy::HM;
    if (name == "sm") return Strategy::SM;
    if (name == "ism") return Strategy::ISM;
    if (name == "anm") return Strategy::ANM;
    throw std::invalid_argument("unknown strategy '" + name + "' (expected hm, sm, ism or anm)");
}

void validate(const MinerParams& params)
{
    if (!(std::isfinite(params.q)) || !(params.q > 0.0) || !(params.q < 0.5)) {
        throw std::invalid_argument("q must lie in (0, 0.5)");
    }
    if (!(std::isfinite(params.gamma)) || !(params.gamma >= 0.0) || !(params.gamma <= 1.0)) {
        throw std::invalid_argument("gamma must lie in [0,1]");
    }
}

void validate(const ProtocolParams& proto)
{
    if (!(std::isfinite(proto.tau0)) || !(proto.tau0 > 0.0)) {
        throw std::invalid_argument("tau0 must be positive");
    }
    if (proto.n0 < 1) {
        throw std::invalid_argument("n0 must be a positive integer");
    }
    if (!(std::isfinite(proto.b)) || !(proto.b > 0.0)) {
        throw std::invalid_argument("b must be positive");
    }
}

} // namespace powprofit
