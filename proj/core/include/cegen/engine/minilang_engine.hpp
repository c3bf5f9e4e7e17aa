#pragma once

#include "cegen/engine/completion.hpp"

namespace cegen::engine {

/// Completion engine backed by the built-in language's incremental checker.
/// Strict by construction: a non-`Unknown` answer with completion set S
/// guarantees that any continuation outside the prefix closure of S leaves
/// the program infeasible. Whenever the position admits arbitrary fresh
/// names, or the committed suffix could fuse with a suggestion, the engine
/// answers `Unknown` instead of guessing.
class MiniLangEngine final : public CompletionEngine {
public:
    CompletionResult complete(const SourceBuffer& buf, std::size_t caret) override;
};

}  // namespace cegen::engine
