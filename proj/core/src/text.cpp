#include "cegen/text.hpp"

#include <stdexcept>

namespace cegen {

SourceBuffer splice(const SourceBuffer& buf, HunkRange range, std::string_view replacement) {
    if (!range.valid_for(buf)) {
        throw std::out_of_range("splice: range [" + std::to_string(range.start) + ", " +
                                std::to_string(range.end) + ") out of bounds for buffer of size " +
                                std::to_string(buf.size()));
    }
    std::string out;
    out.reserve(buf.size() - range.length() + replacement.size());
    out.append(buf.text(), 0, range.start);
    out.append(replacement);
    out.append(buf.text(), range.end, std::string::npos);
    return SourceBuffer(std::move(out));
}

SourceBuffer insert_at(const SourceBuffer& buf, std::size_t caret, std::string_view s) {
    return splice(buf, HunkRange{caret, caret}, s);
}

}  // namespace cegen
