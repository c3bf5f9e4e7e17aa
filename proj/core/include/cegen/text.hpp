#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace cegen {

/// Immutable program text. Offsets are character offsets; the language is
/// ASCII-only, so characters and bytes coincide.
class SourceBuffer {
public:
    SourceBuffer() = default;
    explicit SourceBuffer(std::string text) : text_(std::move(text)) {}

    const std::string& text() const { return text_; }
    std::string_view view() const { return text_; }
    std::size_t size() const { return text_.size(); }
    char at(std::size_t i) const { return text_.at(i); }

    friend bool operator==(const SourceBuffer&, const SourceBuffer&) = default;

private:
    std::string text_;
};

/// Half-open character range [start, end) into a SourceBuffer.
struct HunkRange {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - start; }
    bool valid_for(const SourceBuffer& buf) const {
        return start <= end && end <= buf.size();
    }
};

/// Returns a new buffer with `range` replaced by `replacement`. The input
/// buffer is left untouched. Throws std::out_of_range if the range does not
/// fit the buffer.
SourceBuffer splice(const SourceBuffer& buf, HunkRange range, std::string_view replacement);

/// Insertion at a caret is splicing an empty range.
SourceBuffer insert_at(const SourceBuffer& buf, std::size_t caret, std::string_view s);

}  // namespace cegen
