#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cegen/engine/completion.hpp"
#include "cegen/hash.hpp"
#include "cegen/text.hpp"
#include "cegen/vocab.hpp"

namespace cegen::decoder {

using ContextKey = Hash128;

/// Keyed by the bug and the text before the caret; the text after it is the
/// same for every sample of one bug, so the prefix pins the whole context.
ContextKey context_key(std::string_view bug_id, const SourceBuffer& buf, std::size_t caret);

/// Character-level prefix tree of rejected token strings. If a token is
/// rejected at a context, every token extending it is rejected there too.
class RejectedTrie {
public:
    void insert(std::string_view token);
    /// True iff some inserted token is a prefix of `token` (or equals it).
    bool has_rejected_prefix(std::string_view token) const;
    bool empty() const { return root_ == nullptr; }

private:
    struct Node {
        std::map<char, std::unique_ptr<Node>> children;
        bool terminal = false;
    };
    std::unique_ptr<Node> root_;
};

/// Per-context memory shared by all samples of one bug: tokens already
/// accepted or rejected by the completion engine, plus the engine's cached
/// reply at this exact position. The engine is deterministic, so replaying a
/// cached reply is indistinguishable from asking again.
class MemoStore {
public:
    explicit MemoStore(const Vocabulary& vocab);

    struct Entry {
        std::unordered_set<TokenId> accepted;
        RejectedTrie rejected;
        std::vector<bool> rejected_mask;  // vocab-indexed; covers trie extensions
        std::vector<bool> prune_logged;   // audit-log dedup per token
        std::optional<engine::CompletionResult> completion;
    };

    Entry& entry(const ContextKey& key);

    void record_accepted(Entry& e, TokenId token);
    /// Inserts into the trie and marks the token and all vocabulary tokens
    /// extending it in the rejection mask.
    void record_rejected(Entry& e, TokenId token);

    const Vocabulary& vocab() const { return vocab_; }
    std::size_t context_count() const { return entries_.size(); }

private:
    const Vocabulary& vocab_;
    std::vector<std::vector<TokenId>> extensions_;  // token -> tokens it prefixes
    std::unordered_map<ContextKey, Entry, Hash128Hasher> entries_;
};

}  // namespace cegen::decoder
