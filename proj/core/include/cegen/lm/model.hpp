#pragma once

#include "cegen/distribution.hpp"
#include "cegen/hash.hpp"
#include "cegen/vocab.hpp"

namespace cegen::lm {

/// Opaque encoder output. The decoder conditions on it; nothing else reads
/// into it. `inputs` is retained so adapters can forward the raw context.
struct EncState {
    Hash128 key;
    TokenSequence inputs;
};

/// Encoder/decoder split: `encode` digests the cloze context once, `decode`
/// maps the generated prefix to a next-token distribution under that context.
class LanguageModel {
public:
    virtual ~LanguageModel() = default;

    virtual const Vocabulary& vocabulary() const = 0;
    virtual EncState encode(const TokenSequence& inputs) const = 0;
    /// Pure in (state, prefix); sums to 1 within 1e-9 before any pruning.
    virtual TokenDistribution decode(const EncState& state, const TokenSequence& prefix) const = 0;
};

/// Canonical digest of encoder inputs; the shared implementation behind the
/// built-in and remote models.
EncState encode_inputs(const TokenSequence& inputs);

}  // namespace cegen::lm
