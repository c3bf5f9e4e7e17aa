#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cegen/rng.hpp"
#include "cegen/text.hpp"

namespace cegen::bench {

/// One single-hunk bug: a valid source program, the character range of the
/// statement that was broken, the broken replacement, the original statement
/// as the reference fix, and extra held-out asserts used as the correctness
/// proxy.
struct BugCase {
    std::string id;
    std::string source;
    HunkRange hunk;  // range in `source`
    std::string buggy_hunk;
    std::string reference_fix;
    std::vector<std::string> hidden_asserts;

    std::string buggy_text() const;
    /// The hunk range inside buggy_text().
    HunkRange buggy_range() const {
        return HunkRange{hunk.start, hunk.start + buggy_hunk.size()};
    }
};

/// A seed program plus its held-out asserts (kept in a sidecar file since the
/// language has no comments to carry them).
struct SeedProgram {
    std::string name;
    std::string text;
    std::vector<std::string> hidden_asserts;
};

/// Loads `*.mini` sources with optional `*.hidden` sidecars (one assert
/// statement per line), sorted by name.
std::vector<SeedProgram> load_seed_dir(const std::string& dir);

/// Applies one mutation (operator swap, same-type identifier substitution,
/// integer literal perturbation, same-signature method-call swap, or
/// condition negation) at a random site inside a record method, and keeps it
/// only if the visible asserts expose it. Returns nullopt when `max_attempts`
/// mutations all go unexposed.
std::optional<BugCase> mutate(const SeedProgram& seed, Rng& rng, int max_attempts = 100);

/// Builds `count` bug cases by cycling through the seeds.
std::vector<BugCase> build_corpus(const std::vector<SeedProgram>& seeds, int count, Rng& rng);

void save_corpus(const std::string& path, const std::vector<BugCase>& corpus);
std::vector<BugCase> load_corpus(const std::string& path);

}  // namespace cegen::bench
