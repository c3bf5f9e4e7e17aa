#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "cegen/lm/model.hpp"

namespace cegen::lm {

struct NGramConfig {
    int order = 3;        // conditioning window is order-1 tokens
    double k = 0.01;      // add-k smoothing constant
    double lambda = 0.5;  // weight of the per-context table vs the global one
};

/// Deterministic add-k smoothed n-gram model with one global count table and
/// one table per encoder state, mixed with weight lambda. An unseen context
/// row yields the uniform distribution (0+k)/(0+k*|V|) = 1/|V| per token, so
/// every token keeps positive probability.
class NGramModel final : public LanguageModel {
public:
    /// Per-context count rows, keyed by packed token-id context, one map per
    /// context length 0..order-1. Ordered maps keep serialization stable.
    struct Row {
        std::uint64_t total = 0;
        std::map<TokenId, std::uint64_t> counts;
    };
    struct Table {
        std::vector<std::map<std::string, Row>> levels;
    };

    using StateMap = std::map<Hash128, Table, Hash128Less>;

    class Builder {
    public:
        Builder(Vocabulary vocab, NGramConfig cfg);

        /// Counts a whole token sequence into the global table. The end token
        /// is appended as the terminal.
        void add_sequence(const TokenSequence& seq);
        /// Counts a hunk sequence into the table of one encoder state.
        void add_state_sequence(const Hash128& state, const TokenSequence& seq);

        NGramModel build() &&;

    private:
        Vocabulary vocab_;
        NGramConfig cfg_;
        Table global_;
        StateMap states_;
        void count_into(Table& table, const TokenSequence& seq);
    };

    const Vocabulary& vocabulary() const override { return vocab_; }
    const NGramConfig& config() const { return cfg_; }

    EncState encode(const TokenSequence& inputs) const override;
    TokenDistribution decode(const EncState& state, const TokenSequence& prefix) const override;

    /// Versioned binary format with magic "RPLT1"; loading refuses anything
    /// else byte-for-byte.
    void save(std::ostream& out) const;
    static NGramModel load(std::istream& in);
    void save_file(const std::string& path) const;
    static NGramModel load_file(const std::string& path);

private:
    NGramModel() = default;

    Vocabulary vocab_;
    NGramConfig cfg_;
    Table global_;
    StateMap states_;

    void accumulate(std::vector<double>& out, const Table& table, const TokenSequence& prefix,
                    double weight) const;
};

/// Packs a context window of token ids into a map key.
std::string pack_context(const TokenSequence& prefix, std::size_t length);

}  // namespace cegen::lm
