#include "cegen/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace cegen {

Vocabulary::Vocabulary(std::vector<std::string> tokens, TokenId end_index)
    : tokens_(std::move(tokens)), end_token_(end_index) {
    if (end_token_ >= tokens_.size()) {
        throw std::invalid_argument("vocabulary: end token index out of range");
    }
    rebuild_index();
}

void Vocabulary::rebuild_index() {
    index_.clear();
    index_.reserve(tokens_.size());
    max_len_ = 1;
    for (TokenId id = 0; id < tokens_.size(); ++id) {
        const std::string& t = tokens_[id];
        if (id != end_token_ && t.empty()) {
            throw std::invalid_argument("vocabulary: empty token at id " + std::to_string(id));
        }
        if (!t.empty() && !index_.emplace(t, id).second) {
            throw std::invalid_argument("vocabulary: duplicate token '" + t + "'");
        }
        max_len_ = std::max(max_len_, t.size());
    }
}

std::int64_t Vocabulary::find(std::string_view text) const {
    auto it = index_.find(text);
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::vector<TokenId> Vocabulary::extensions_of(TokenId id) const {
    const std::string& prefix = tokens_.at(id);
    std::vector<TokenId> out;
    for (TokenId other = 0; other < tokens_.size(); ++other) {
        if (other == end_token_) continue;
        const std::string& t = tokens_[other];
        if (t.size() >= prefix.size() && t.compare(0, prefix.size(), prefix) == 0) {
            out.push_back(other);
        }
    }
    return out;
}

std::string detokenize(const Vocabulary& vocab, const TokenSequence& seq) {
    std::string out;
    for (TokenId id : seq) out += vocab.token_text(id);
    return out;
}

TokenSequence align_tokens(const Vocabulary& vocab, std::string_view s) {
    TokenSequence out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t limit = std::min(vocab.max_token_length(), s.size() - pos);
        std::int64_t match = -1;
        std::size_t match_len = 0;
        for (std::size_t len = limit; len >= 1; --len) {
            match = vocab.find(s.substr(pos, len));
            if (match >= 0) {
                match_len = len;
                break;
            }
        }
        if (match < 0) {
            throw std::invalid_argument("align_tokens: unencodable character 0x" +
                                        std::to_string(static_cast<unsigned char>(s[pos])) +
                                        " at offset " + std::to_string(pos));
        }
        out.push_back(static_cast<TokenId>(match));
        pos += match_len;
    }
    return out;
}

Vocabulary build_vocabulary(const std::set<std::string>& corpus, std::size_t size) {
    if (size < Vocabulary::kBaseSize) {
        throw std::invalid_argument("build_vocabulary: size " + std::to_string(size) +
                                    " below base alphabet size " +
                                    std::to_string(Vocabulary::kBaseSize));
    }

    // Count substrings of length 2..8 of whitespace-separated words, once per
    // occurrence position.
    std::map<std::string, std::uint64_t> counts;
    for (const std::string& doc : corpus) {
        std::size_t i = 0;
        while (i < doc.size()) {
            while (i < doc.size() && std::isspace(static_cast<unsigned char>(doc[i]))) ++i;
            std::size_t j = i;
            while (j < doc.size() && !std::isspace(static_cast<unsigned char>(doc[j]))) ++j;
            if (j > i) {
                std::string_view word(doc.data() + i, j - i);
                for (std::size_t a = 0; a < word.size(); ++a) {
                    for (std::size_t len = 2; len <= 8 && a + len <= word.size(); ++len) {
                        ++counts[std::string(word.substr(a, len))];
                    }
                }
            }
            i = j;
        }
    }

    std::vector<std::pair<std::string, std::uint64_t>> ranked(counts.begin(), counts.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second > y.second;
        return x.first < y.first;
    });

    std::vector<std::string> tokens;
    tokens.reserve(size);
    for (char c = 0x20; c <= 0x7E; ++c) tokens.emplace_back(1, c);
    tokens.emplace_back();  // end token
    const TokenId end_index = static_cast<TokenId>(tokens.size() - 1);

    std::size_t budget = size - tokens.size();
    for (const auto& [sub, n] : ranked) {
        if (budget == 0) break;
        (void)n;
        tokens.push_back(sub);
        --budget;
    }
    return Vocabulary(std::move(tokens), end_index);
}

}  // namespace cegen
