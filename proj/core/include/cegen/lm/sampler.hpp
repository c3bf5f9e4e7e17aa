#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cegen/distribution.hpp"
#include "cegen/rng.hpp"

namespace cegen::lm {

struct SamplerConfig {
    double top_p = 1.0;
    double temperature = 1.0;
    int max_tokens = 50;
    std::uint64_t rng_seed = 0;
};

/// Temperature-adjusted, nucleus-restricted view of a distribution, computed
/// once. Draws map a uniform variate onto fixed member brackets, so the
/// mapping does not shift as entries get zeroed later: a zeroed member shows
/// up as a hole that costs one redraw. That property is what makes cached
/// rejections indistinguishable from engine rejections downstream.
class SampleSpace {
public:
    SampleSpace(const TokenDistribution& dist, double top_p, double temperature);

    /// Single renormalized inverse-CDF draw over the nucleus.
    std::optional<TokenId> draw(Rng& rng) const;

    /// Anchored draw against `live`: redraws while the bracket it lands on is
    /// zeroed in `live`. Returns nullopt once no nucleus member is live.
    std::optional<TokenId> draw_live(const TokenDistribution& live, Rng& rng) const;

    const std::vector<TokenId>& members() const { return members_; }

private:
    std::vector<TokenId> members_;   // nucleus, highest weight first, ties by id
    std::vector<double> cum_;        // cumulative weights over members_
    double total_ = 0.0;
};

/// Top-p nucleus sampling: temperature reshaping (p^(1/T), renormalized),
/// restriction to the smallest probability-sorted prefix reaching top_p (ties
/// by token id), renormalization over survivors, inverse-CDF draw. Returns
/// nullopt when the distribution has no positive mass left (search space
/// exhausted).
std::optional<TokenId> sample(const TokenDistribution& dist, const SamplerConfig& cfg, Rng& rng);

}  // namespace cegen::lm
