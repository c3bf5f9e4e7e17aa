#include "cegen/lm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cegen::lm {

SampleSpace::SampleSpace(const TokenDistribution& dist, double top_p, double temperature) {
    const std::size_t n = dist.size();
    std::vector<double> weight(n, 0.0);
    double wsum = 0.0;
    for (TokenId t = 0; t < n; ++t) {
        double p = dist[t];
        if (p <= 0.0) continue;
        double w = temperature == 1.0 ? p : std::pow(p, 1.0 / temperature);
        weight[t] = w;
        wsum += w;
    }
    if (wsum <= 0.0) return;

    std::vector<TokenId> order;
    order.reserve(n);
    for (TokenId t = 0; t < n; ++t)
        if (weight[t] > 0.0) order.push_back(t);
    std::sort(order.begin(), order.end(), [&](TokenId a, TokenId b) {
        if (weight[a] != weight[b]) return weight[a] > weight[b];
        return a < b;
    });

    const double target = top_p * wsum - 1e-12 * wsum;
    double cum = 0.0;
    for (TokenId t : order) {
        members_.push_back(t);
        cum += weight[t];
        cum_.push_back(cum);
        if (cum >= target) break;
    }
    total_ = cum_.back();
}

std::optional<TokenId> SampleSpace::draw(Rng& rng) const {
    if (members_.empty()) return std::nullopt;
    const double u = rng.next_double() * total_;
    auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    if (it == cum_.end()) --it;
    return members_[static_cast<std::size_t>(it - cum_.begin())];
}

std::optional<TokenId> SampleSpace::draw_live(const TokenDistribution& live, Rng& rng) const {
    if (members_.empty()) return std::nullopt;
    bool any_live = false;
    for (TokenId t : members_)
        if (live[t] > 0.0) {
            any_live = true;
            break;
        }
    if (!any_live) return std::nullopt;
    while (true) {
        const double u = rng.next_double() * total_;
        auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
        if (it == cum_.end()) --it;
        TokenId t = members_[static_cast<std::size_t>(it - cum_.begin())];
        if (live[t] > 0.0) return t;
    }
}

std::optional<TokenId> sample(const TokenDistribution& dist, const SamplerConfig& cfg, Rng& rng) {
    return SampleSpace(dist, cfg.top_p, cfg.temperature).draw(rng);
}

}  // namespace cegen::lm
