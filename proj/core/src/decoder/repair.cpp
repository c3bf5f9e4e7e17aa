#include "cegen/decoder/repair.hpp"

#include <cassert>

#include "cegen/adapter.hpp"

namespace cegen::decoder {

namespace {

/// Engine query with replay through the memo store. Cached per queried
/// position; the engine is deterministic, so a replay is exact.
engine::CompletionResult query_engine(engine::CompletionEngine& ce, MemoStore* memo,
                                      const std::string& bug_id, const SourceBuffer& buf,
                                      std::size_t caret) {
    if (!memo) return ce.complete(buf, caret);
    MemoStore::Entry& e = memo->entry(context_key(bug_id, buf, caret));
    if (!e.completion) e.completion = ce.complete(buf, caret);
    return *e.completion;
}

void log_prune(DecoderHooks* hooks, MemoStore::Entry* entry, const std::string& bug_id,
               const SourceBuffer& patch, std::size_t caret, const ContextKey& key, TokenId token,
               const std::string& token_text, const char* reason, const std::string& hunk) {
    if (!hooks || !hooks->on_prune) return;
    if (entry) {
        if (entry->prune_logged[token]) return;
        entry->prune_logged[token] = true;
    }
    (void)patch;
    hooks->on_prune(PruneEvent{bug_id, key, caret, token, token_text, reason, hunk});
}

}  // namespace

std::optional<TokenId> guided_prune(engine::CompletionEngine& ce, const SourceBuffer& patch,
                                    std::size_t caret, TokenDistribution& dist,
                                    const Vocabulary& vocab, const lm::SamplerConfig& sampler,
                                    Rng& rng, MemoStore* memo, const std::string& bug_id,
                                    DecoderHooks* hooks, const std::string& hunk_so_far) {
    // The sample space is anchored to the distribution as handed in, before
    // any memo-based zeroing; see SampleSpace for why that matters.
    lm::SampleSpace space(dist, sampler.top_p, sampler.temperature);

    MemoStore::Entry* entry = nullptr;
    ContextKey here_key{};
    if (memo) {
        here_key = context_key(bug_id, patch, caret);
        entry = &memo->entry(here_key);
        // Zero everything already known rejected here, extensions included.
        for (TokenId t = 0; t < vocab.size(); ++t)
            if (entry->rejected_mask[t]) dist.zero_out(t);
    }

    while (true) {
        std::optional<TokenId> drawn = space.draw_live(dist, rng);
        if (!drawn) return std::nullopt;  // search space exhausted
        const TokenId token = *drawn;
        const std::string& token_text = vocab.token_text(token);

        if (entry && entry->accepted.count(token)) {
            if (hooks && hooks->on_accept)
                hooks->on_accept(AcceptEvent{bug_id, caret, token, token_text, hunk_so_far, true});
            return token;
        }
        if (entry && entry->rejected.has_rejected_prefix(token_text)) {
            dist.zero_out(token);
            log_prune(hooks, entry, bug_id, patch, caret, here_key, token, token_text,
                      "trie-prefix", hunk_so_far);
            continue;
        }

        SourceBuffer candidate = insert_at(patch, caret, token_text);
        const std::size_t candidate_caret = caret + token_text.size();
        engine::CompletionResult result =
            query_engine(ce, memo, bug_id, candidate, candidate_caret);

        if (!result.is_unknown() && result.empty_completions()) {
            dist.zero_out(token);
            if (entry) memo->record_rejected(*entry, token);
            log_prune(hooks, entry, bug_id, patch, caret, here_key, token, token_text,
                      "empty-completions", hunk_so_far);
            continue;
        }

        if (entry) memo->record_accepted(*entry, token);
        if (hooks && hooks->on_accept)
            hooks->on_accept(AcceptEvent{bug_id, caret, token, token_text, hunk_so_far, false});
        return token;
    }
}

TokenSequence actively_complete(engine::CompletionEngine& ce, const SourceBuffer& buf,
                                std::size_t caret, const Vocabulary& vocab, MemoStore* memo,
                                const std::string& bug_id) {
    engine::CompletionResult result = query_engine(ce, memo, bug_id, buf, caret);
    if (result.is_unknown() || result.completions().empty()) return {};

    const auto& set = result.completions();
    std::string common = set.front();
    for (const std::string& s : set) {
        std::size_t i = 0;
        while (i < common.size() && i < s.size() && common[i] == s[i]) ++i;
        common.resize(i);
        if (common.empty()) return {};
    }
    return align_tokens(vocab, common);
}

TokenSequence build_inputs(const Vocabulary& vocab, const SourceBuffer& buggy, HunkRange range,
                           std::size_t window) {
    auto sanitize = [](std::string s) {
        for (char& c : s)
            if (c == '\n' || c == '\t' || c == '\r') c = ' ';
        return s;
    };
    const std::string& text = buggy.text();
    const std::size_t pre_begin = range.start > window ? range.start - window : 0;
    std::string pre = sanitize(text.substr(pre_begin, range.start - pre_begin));
    std::string post = sanitize(text.substr(range.end, window));

    TokenSequence inputs = align_tokens(vocab, pre);
    inputs.push_back(vocab.end_token());  // mask separator
    TokenSequence suffix = align_tokens(vocab, post);
    inputs.insert(inputs.end(), suffix.begin(), suffix.end());
    return inputs;
}

RepairOutcome repair(RepairContext& ctx, Rng& rng) {
    assert(ctx.variant.valid());
    assert(!ctx.variant.memoization || ctx.memo != nullptr);

    const Vocabulary& vocab = ctx.model.vocabulary();
    MemoStore* memo = ctx.variant.memoization ? ctx.memo : nullptr;

    RepairOutcome out;
    try {
        TokenSequence inputs = build_inputs(vocab, ctx.buggy, ctx.range);
        lm::EncState state = ctx.model.encode(inputs);

        TokenSequence hunk;
        std::string hunk_text;
        int steps = 0;

        while (true) {
            SourceBuffer patch = splice(ctx.buggy, ctx.range, hunk_text);
            const std::size_t caret = ctx.range.start + hunk_text.size();
            assert(hunk_text == detokenize(vocab, hunk));

            if (steps >= ctx.sampler.max_tokens) {
                out.kind = RepairOutcome::Kind::MaxTokens;
                out.lm_steps = steps;
                return out;
            }

            TokenDistribution dist = ctx.model.decode(state, hunk);
            std::optional<TokenId> token;
            if (ctx.variant.pruning) {
                token = guided_prune(ctx.engine, patch, caret, dist, vocab, ctx.sampler, rng,
                                     memo, ctx.bug_id, ctx.hooks, hunk_text);
            } else {
                token = lm::sample(dist, ctx.sampler, rng);
            }
            if (!token) {
                out.kind = RepairOutcome::Kind::Exhausted;
                out.lm_steps = steps;
                return out;
            }
            ++steps;

            if (*token == vocab.end_token()) {
                out.kind = RepairOutcome::Kind::Patch;
                out.patched_text = patch.text();
                out.hunk_text = hunk_text;
                out.lm_steps = steps;
                return out;
            }

            hunk.push_back(*token);
            hunk_text += vocab.token_text(*token);

            if (ctx.variant.active_completion) {
                SourceBuffer advanced = splice(ctx.buggy, ctx.range, hunk_text);
                const std::size_t advanced_caret = ctx.range.start + hunk_text.size();
                TokenSequence completion = actively_complete(ctx.engine, advanced, advanced_caret,
                                                             vocab, memo, ctx.bug_id);
                if (!completion.empty()) {
                    std::string completion_text = detokenize(vocab, completion);
                    hunk.insert(hunk.end(), completion.begin(), completion.end());
                    hunk_text += completion_text;
                    if (ctx.hooks && ctx.hooks->on_active_completion)
                        ctx.hooks->on_active_completion(CompletionEvent{
                            ctx.bug_id, ctx.range.start + hunk_text.size(), completion_text});
                }
            }
        }
    } catch (const AdapterError&) {
        out.kind = RepairOutcome::Kind::AdapterFailure;
        return out;
    }
}

}  // namespace cegen::decoder
