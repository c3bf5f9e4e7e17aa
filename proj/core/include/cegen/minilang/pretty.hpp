#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace cegen::minilang {

/// Canonical single-space form: the fragment's lexemes joined by single
/// spaces. Works for whole programs and for hunk fragments alike; returns
/// nullopt if the text does not lex. Two fragments with the same canonical
/// form differ only in whitespace.
std::optional<std::string> canonical(std::string_view text);

/// Dedup key for generated patches: the canonical form when the patch lexes,
/// the raw text otherwise.
std::string patch_key(std::string_view patch);

}  // namespace cegen::minilang
