#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "cegen/text.hpp"

namespace cegen::minilang {

/// Outcome of the bounded feasibility search. A witness, when present, is a
/// continuation string whose insertion at the caret makes the whole buffer
/// pass the static check (verified before returning). The negative verdict is
/// one-sided: it means no witness was found within the bound, not that none
/// exists.
struct FeasibilityVerdict {
    std::optional<std::string> witness;
    int depth_bound = 0;

    bool feasible() const { return witness.has_value(); }
};

struct OracleConfig {
    int depth = 4;          // lexemes appended by the search
    int node_budget = 4096; // cap on explored search nodes
};

/// Searches for a continuation that completes text[0..caret) into a valid
/// program (the text after the caret stays in place). First tries a fixed
/// family of closure templates (';' stems plus brace/paren closers with
/// return variants), then runs a grammar-directed breadth-first search over
/// candidate next lexemes, retrying the closure templates on every branch.
FeasibilityVerdict feasibility_oracle(const SourceBuffer& buf, std::size_t caret,
                                      const OracleConfig& cfg = {});

FeasibilityVerdict feasibility_oracle(const SourceBuffer& buf, std::size_t caret, int depth);

}  // namespace cegen::minilang
