#include "cegen/decoder/variant.hpp"

namespace cegen::decoder {

std::optional<VariantConfig> VariantConfig::parse(std::string_view name) {
    if (name == "baseline") return baseline();
    if (name == "prune") return prune();
    if (name == "prune-memo") return prune_memo();
    if (name == "full") return full();
    return std::nullopt;
}

const char* VariantConfig::name() const {
    if (active_completion) return "full";
    if (memoization) return "prune-memo";
    if (pruning) return "prune";
    return "baseline";
}

}  // namespace cegen::decoder
