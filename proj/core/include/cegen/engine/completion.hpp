#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cegen/text.hpp"

namespace cegen::engine {

/// Result of asking a completion engine for the continuations of a partial
/// program. `Unknown` means the engine cannot tell; an empty completion set
/// is a positive claim that no continuation exists. The two are distinct on
/// purpose: only the latter may be used to prune.
class CompletionResult {
public:
    static CompletionResult unknown() { return CompletionResult(true, {}); }
    static CompletionResult of(std::vector<std::string> completions) {
        std::sort(completions.begin(), completions.end());
        completions.erase(std::unique(completions.begin(), completions.end()),
                          completions.end());
        return CompletionResult(false, std::move(completions));
    }
    static CompletionResult none() { return of({}); }

    bool is_unknown() const { return unknown_; }
    bool empty_completions() const { return !unknown_ && completions_.empty(); }
    const std::vector<std::string>& completions() const { return completions_; }

    /// Prefix-closure membership per the strictness contract: `s` matches if
    /// it is a prefix of some completion or some completion is a prefix of it.
    bool in_prefix_closure(std::string_view s) const;

    friend bool operator==(const CompletionResult&, const CompletionResult&) = default;

private:
    CompletionResult(bool unknown, std::vector<std::string> completions)
        : unknown_(unknown), completions_(std::move(completions)) {}

    bool unknown_;
    std::vector<std::string> completions_;
};

class CompletionEngine {
public:
    virtual ~CompletionEngine() = default;

    /// Continuations of text[0..caret); the text after the caret is pinned
    /// context and must be ignored by the analysis.
    virtual CompletionResult complete(const SourceBuffer& buf, std::size_t caret) = 0;
};

/// Decorator counting engine invocations; the measurement hooks for the
/// bench harness and the memoization tests.
class CountingEngine final : public CompletionEngine {
public:
    explicit CountingEngine(CompletionEngine& inner) : inner_(inner) {}

    CompletionResult complete(const SourceBuffer& buf, std::size_t caret) override {
        ++queries_;
        return inner_.complete(buf, caret);
    }

    std::uint64_t queries() const { return queries_; }
    void reset() { queries_ = 0; }

private:
    CompletionEngine& inner_;
    std::uint64_t queries_ = 0;
};

}  // namespace cegen::engine
