#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cegen::minilang {

enum class Lex : std::uint8_t {
    KwRecord, KwInt, KwBool, KwStr, KwAssert, KwReturn, KwIf, KwElse, KwNew, KwTrue, KwFalse,
    Ident, IntLit, StrLit,
    LParen, RParen, LBrace, RBrace, Semi, Comma, Dot,
    Assign, Plus, Minus, Star, Slash,
    Eq, Ne, Lt, Le, Gt, Ge, AndAnd, OrOr,
};

const char* lex_name(Lex k);
/// Spelling of fixed lexemes (keywords, punctuation, operators); empty for
/// Ident/IntLit/StrLit.
std::string_view lex_spelling(Lex k);

struct Lexeme {
    Lex kind;
    std::string text;       // raw spelling; for StrLit includes the quotes
    std::uint32_t begin = 0;
    std::uint32_t end = 0;  // [begin, end)
};

struct LexDiag {
    std::uint32_t pos = 0;
    std::string message;
};

/// Trailing piece of a prefix that could still grow into a longer lexeme
/// given more input, and therefore must not be committed when analyzing a
/// partial program.
struct Boundary {
    enum class Kind { None, Word, Number, StrPartial, OpPartial };
    Kind kind = Kind::None;
    std::string text;
    std::uint32_t begin = 0;
};

struct LexOutput {
    std::vector<Lexeme> lexemes;
    Boundary boundary;             // only populated in prefix mode
    std::optional<LexDiag> error;  // committed lexical error; fatal in both modes
};

enum class LexMode {
    Complete,  // whole program: trailing partial lexemes are errors
    Prefix,    // text ends at a caret: trailing extendable chars become the boundary
};

/// Tokenizes printable-ASCII + newline text. Maximal munch; a digit run
/// immediately followed by an identifier character is an error (as is any
/// character that cannot start a lexeme). Strings run to the closing quote on
/// the same line and have no escapes.
LexOutput lex(std::string_view text, LexMode mode);

bool is_ident_start(char c);
bool is_ident_char(char c);

}  // namespace cegen::minilang
