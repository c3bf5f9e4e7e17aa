#pragma once

#include <cstddef>
#include <vector>

#include "cegen/vocab.hpp"

namespace cegen {

/// Dense next-token probability map indexed by token id. Entries are in
/// [0, 1]; the sum may drop below 1 after entries are zeroed out, and no
/// renormalization happens here (the sampler renormalizes over survivors).
class TokenDistribution {
public:
    TokenDistribution() = default;
    explicit TokenDistribution(std::size_t vocab_size) : probs_(vocab_size, 0.0) {}
    explicit TokenDistribution(std::vector<double> probs) : probs_(std::move(probs)) {}

    std::size_t size() const { return probs_.size(); }
    double operator[](TokenId id) const { return probs_[id]; }
    double at(TokenId id) const { return probs_.at(id); }
    void set(TokenId id, double p) { probs_.at(id) = p; }

    double sum() const;

    /// Sets exactly one entry to zero. Idempotent. Throws std::out_of_range
    /// for an id outside the vocabulary.
    void zero_out(TokenId id) { probs_.at(id) = 0.0; }

    const std::vector<double>& probs() const { return probs_; }

private:
    std::vector<double> probs_;
};

/// Functional form: a copy of `dist` with `id` zeroed.
TokenDistribution zero_out(const TokenDistribution& dist, TokenId id);

}  // namespace cegen
