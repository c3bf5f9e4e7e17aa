#include "cegen/distribution.hpp"

namespace cegen {

double TokenDistribution::sum() const {
    double s = 0.0;
    for (double p : probs_) s += p;
    return s;
}

TokenDistribution zero_out(const TokenDistribution& dist, TokenId id) {
    TokenDistribution out = dist;
    out.zero_out(id);
    return out;
}

}  // namespace cegen
