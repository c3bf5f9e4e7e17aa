#pragma once

#include <functional>
#include <optional>
#include <string>

#include "cegen/decoder/memo.hpp"
#include "cegen/decoder/variant.hpp"
#include "cegen/engine/completion.hpp"
#include "cegen/lm/model.hpp"
#include "cegen/lm/sampler.hpp"
#include "cegen/rng.hpp"
#include "cegen/text.hpp"

namespace cegen::decoder {

/// A token zeroed out during guided pruning, with enough context to rerun the
/// feasibility check offline ("hunk" rebuilds the exact program prefix).
struct PruneEvent {
    std::string bug_id;
    ContextKey prefix_hash;
    std::uint64_t caret = 0;
    TokenId token = 0;
    std::string token_text;
    const char* reason = "";  // "empty-completions" | "trie-prefix"
    std::string hunk;         // generation text before this token
};

struct AcceptEvent {
    std::string bug_id;
    std::uint64_t caret = 0;
    TokenId token = 0;
    std::string token_text;
    std::string hunk;
    bool from_memo = false;
};

struct CompletionEvent {
    std::string bug_id;
    std::uint64_t caret = 0;  // caret after the completion was applied
    std::string completion;
};

struct DecoderHooks {
    std::function<void(const PruneEvent&)> on_prune;
    std::function<void(const AcceptEvent&)> on_accept;
    std::function<void(const CompletionEvent&)> on_active_completion;
};

/// Samples from the reference space built over the incoming distribution,
/// asking the completion engine whether each candidate leaves the program
/// completable and zeroing the ones that provably do not. With a memo store
/// the known rejections are zeroed up front and known acceptances skip the
/// engine; both shortcuts replay earlier engine answers, so the emitted token
/// stream is identical with or without them. Returns nullopt when every
/// candidate in the space has been pruned.
std::optional<TokenId> guided_prune(engine::CompletionEngine& ce, const SourceBuffer& patch,
                                    std::size_t caret, TokenDistribution& dist,
                                    const Vocabulary& vocab, const lm::SamplerConfig& sampler,
                                    Rng& rng, MemoStore* memo, const std::string& bug_id,
                                    DecoderHooks* hooks, const std::string& hunk_so_far = {});

/// Common prefix of the engine's suggestions at the caret, tokenized; empty
/// when the engine is unsure or the suggestions diverge immediately.
TokenSequence actively_complete(engine::CompletionEngine& ce, const SourceBuffer& buf,
                                std::size_t caret, const Vocabulary& vocab, MemoStore* memo,
                                const std::string& bug_id);

/// Encoder input for a cloze repair: up to `window` characters on each side
/// of the hunk (newlines flattened to spaces), tokenized and joined by one
/// end-token separator.
TokenSequence build_inputs(const Vocabulary& vocab, const SourceBuffer& buggy, HunkRange range,
                           std::size_t window = 64);

struct RepairOutcome {
    enum class Kind { Patch, MaxTokens, Exhausted, AdapterFailure };
    Kind kind = Kind::Patch;
    std::string patched_text;  // whole program with the hunk replaced
    std::string hunk_text;     // replacement hunk alone
    int lm_steps = 0;          // sampled tokens, end token included
};

struct RepairContext {
    const lm::LanguageModel& model;
    engine::CompletionEngine& engine;
    std::string bug_id;
    SourceBuffer buggy;
    HunkRange range;
    VariantConfig variant;
    lm::SamplerConfig sampler;
    MemoStore* memo = nullptr;      // required when variant.memoization
    DecoderHooks* hooks = nullptr;  // optional
};

/// One repair sample: regenerates the hunk token by token until the end
/// token, pruning and completing per the variant flags.
RepairOutcome repair(RepairContext& ctx, Rng& rng);

}  // namespace cegen::decoder
