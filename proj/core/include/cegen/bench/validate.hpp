#pragma once

#include <string>

#include "cegen/bench/corpus.hpp"

namespace cegen::bench {

/// Classification of a candidate hunk, ordered: each class implies all the
/// weaker ones. Plausible means the visible asserts pass; Correct addition-
/// ally requires the held-out asserts, the stand-in for reference equivalence.
enum class PatchClass : int { Invalid = 0, CompilableOnly = 1, Plausible = 2, Correct = 3 };

const char* patch_class_name(PatchClass c);

PatchClass validate(const BugCase& bug, const std::string& patch_hunk);

/// The patched program with the bug's hidden asserts injected at the top of
/// main, so a patch cannot dodge them by returning early. Empty when the
/// patched program is invalid.
std::string with_hidden_asserts(const BugCase& bug, const std::string& patch_hunk);

}  // namespace cegen::bench
