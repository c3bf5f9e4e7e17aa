#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cegen/bench/corpus.hpp"
#include "cegen/bench/validate.hpp"
#include "cegen/decoder/repair.hpp"
#include "cegen/decoder/variant.hpp"
#include "cegen/engine/completion.hpp"
#include "cegen/lm/model.hpp"
#include "cegen/lm/sampler.hpp"

namespace cegen::bench {

struct BugRunResult {
    std::string bug_id;
    int samples = 0;
    int aborted_max_tokens = 0;
    int aborted_exhausted = 0;
    int aborted_adapter = 0;
    /// Canonical patch key -> classification; whitespace variants collapse.
    std::map<std::string, PatchClass> unique_patches;
    std::uint64_t ce_queries = 0;
    double seconds = 0.0;  // generation only: decode + engine + sampling

    int aborted() const { return aborted_max_tokens + aborted_exhausted + aborted_adapter; }
    int count_at_least(PatchClass c) const;
    int compilable() const { return count_at_least(PatchClass::CompilableOnly); }
    int plausible() const { return count_at_least(PatchClass::Plausible); }
    int correct() const { return count_at_least(PatchClass::Correct); }
    double sec_per_patch() const { return samples > 0 ? seconds / samples : 0.0; }
};

struct VariantReport {
    decoder::VariantConfig variant;
    std::vector<BugRunResult> bugs;  // corpus order

    std::uint64_t total_unique() const;
    std::uint64_t total_aborted() const;
    std::uint64_t total_at_least(PatchClass c) const;
    std::uint64_t total_ce_queries() const;
    double total_seconds() const;
    double total_samples() const;
    /// Aborted samples sit in the denominator as non-compilable patches.
    double pct_compilable() const;
    double pct_plausible() const;
    int bugs_with(PatchClass c) const;  // "#plausible fixes" / "#correct fixes"
    double sec_per_patch() const;
};

struct RunReport {
    std::uint64_t seed = 0;
    int samples_per_bug = 0;
    std::vector<VariantReport> variants;
};

struct AblationOptions {
    std::vector<decoder::VariantConfig> variants = {
        decoder::VariantConfig::baseline(), decoder::VariantConfig::prune(),
        decoder::VariantConfig::prune_memo(), decoder::VariantConfig::full()};
    int samples_per_bug = 200;
    std::uint64_t seed = 42;
    int workers = 1;
    lm::SamplerConfig sampler;
    /// Optional per-variant event hooks; must be thread-safe when workers > 1.
    std::function<decoder::DecoderHooks*(const decoder::VariantConfig&)> hooks_for;
};

/// Runs samples_per_bug repairs per variant and bug. The per-sample RNG
/// stream is derived from (seed, bug, sample) only, so variants sharing a
/// seed see identical randomness; results are merged in corpus order no
/// matter how the worker pool schedules them.
RunReport run_ablation(const std::vector<BugCase>& corpus, const AblationOptions& options,
                       const lm::LanguageModel& model, engine::CompletionEngine& engine);

/// CSV rows: variant,bug,unique_patches,compilable,plausible,correct,
/// ce_queries,sec_per_patch. `zero_timing` writes 0 for the timing column so
/// the artifact is byte-reproducible.
void write_report_csv(std::ostream& out, const RunReport& report, bool zero_timing);
void write_report_json(std::ostream& out, const RunReport& report, bool zero_timing);

}  // namespace cegen::bench
