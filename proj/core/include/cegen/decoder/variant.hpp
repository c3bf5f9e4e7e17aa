#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace cegen::decoder {

/// Feature switches for the ablation lattice. Only four combinations are
/// legal: baseline (nothing), prune, prune+memo, and full (prune+memo+active
/// completion). Memoization requires pruning; active completion requires
/// memoization.
struct VariantConfig {
    bool pruning = false;
    bool memoization = false;
    bool active_completion = false;

    static VariantConfig baseline() { return {false, false, false}; }
    static VariantConfig prune() { return {true, false, false}; }
    static VariantConfig prune_memo() { return {true, true, false}; }
    static VariantConfig full() { return {true, true, true}; }

    static std::optional<VariantConfig> parse(std::string_view name);
    static std::array<VariantConfig, 4> all() {
        return {baseline(), prune(), prune_memo(), full()};
    }

    const char* name() const;
    bool valid() const {
        return (!memoization || pruning) && (!active_completion || memoization);
    }

    friend bool operator==(const VariantConfig&, const VariantConfig&) = default;
};

}  // namespace cegen::decoder
