#include "cegen/minilang/pretty.hpp"

#include "cegen/minilang/lexer.hpp"

namespace cegen::minilang {

std::optional<std::string> canonical(std::string_view text) {
    LexOutput lx = lex(text, LexMode::Complete);
    if (lx.error) return std::nullopt;
    std::string out;
    for (std::size_t i = 0; i < lx.lexemes.size(); ++i) {
        if (i > 0) out += ' ';
        out += lx.lexemes[i].text;
    }
    return out;
}

std::string patch_key(std::string_view patch) {
    if (auto c = canonical(patch)) return *c;
    return std::string(patch);
}

}  // namespace cegen::minilang
