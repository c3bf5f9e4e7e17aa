#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cegen {

using TokenId = std::uint32_t;

/// A generation is a list of vocabulary token ids.
using TokenSequence = std::vector<TokenId>;

/// Subword vocabulary. Ids 0..94 are the printable-ASCII single characters
/// (0x20..0x7E), followed by the end token (which renders as the empty
/// string), followed by multi-character subword entries. Every printable
/// ASCII character being present guarantees that any printable string can be
/// tokenized.
class Vocabulary {
public:
    static constexpr std::size_t kBaseSize = 96;  // 95 printable chars + end token

    Vocabulary() = default;
    /// Builds from an explicit token list; `end_index` names the end token.
    /// Used by deserialization and the remote-LM adapter.
    Vocabulary(std::vector<std::string> tokens, TokenId end_index);

    std::size_t size() const { return tokens_.size(); }
    const std::string& token_text(TokenId id) const { return tokens_.at(id); }
    TokenId end_token() const { return end_token_; }
    const std::vector<std::string>& tokens() const { return tokens_; }

    /// Dense index of `text`, or -1 if absent.
    std::int64_t find(std::string_view text) const;
    bool contains(std::string_view text) const { return find(text) >= 0; }

    std::size_t max_token_length() const { return max_len_; }

    /// Ids whose token string has token `id`'s string as a prefix (including
    /// `id` itself). Used to propagate rejections to extending tokens.
    std::vector<TokenId> extensions_of(TokenId id) const;

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string_view, TokenId> index_;
    TokenId end_token_ = 0;
    std::size_t max_len_ = 1;

    void rebuild_index();
};

/// Concatenates the token strings; the end token contributes nothing.
std::string detokenize(const Vocabulary& vocab, const TokenSequence& seq);

/// Greedy longest-match tokenization, left to right. Total over strings whose
/// characters are all in the vocabulary; throws std::invalid_argument on an
/// unencodable character.
TokenSequence align_tokens(const Vocabulary& vocab, std::string_view s);

/// Builds a vocabulary of exactly `size` entries: the printable-ASCII base,
/// the end token, and the most frequent length-2..8 substrings of the
/// whitespace-separated words of `corpus`, ties broken lexicographically.
/// Throws std::invalid_argument if `size` < base size.
Vocabulary build_vocabulary(const std::set<std::string>& corpus, std::size_t size);

}  // namespace cegen
