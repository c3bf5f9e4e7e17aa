#include "cegen/engine/completion.hpp"

namespace cegen::engine {

bool CompletionResult::in_prefix_closure(std::string_view s) const {
    for (const std::string& c : completions_) {
        std::string_view cv = c;
        if (s.size() <= cv.size() ? cv.substr(0, s.size()) == s
                                  : s.substr(0, cv.size()) == cv)
            return true;
    }
    return false;
}

}  // namespace cegen::engine
