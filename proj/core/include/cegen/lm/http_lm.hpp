#pragma once

#include <memory>
#include <string>

#include "cegen/adapter.hpp"
#include "cegen/lm/model.hpp"

namespace cegen::lm {

/// One decode round-trip against a remote model:
///   POST <base_url>/v1/token_probs  {"prefix_tokens":[ids], "suffix_text":s}
///   -> {"probs":[f64; vocab_size]}
/// Validates shape, non-negativity, and that the probabilities sum to 1
/// (within 1e-6); throws MalformedDistribution otherwise, AdapterError on
/// transport failure.
TokenDistribution http_decode(const std::string& base_url, const TokenSequence& prefix_tokens,
                              const std::string& suffix_text, std::size_t vocab_size,
                              int timeout_ms = 2000);

/// Language model served over HTTP. The vocabulary is fetched once at
/// construction from GET <base_url>/v1/vocab -> {"tokens":[string...]}
/// (the end token is the entry rendering as the empty string).
///
/// `encode` splits its input at the first end-token separator: tokens before
/// it are the prefix context, tokens after it detokenize into the suffix
/// text sent with every decode request.
class HttpLanguageModel final : public LanguageModel {
public:
    explicit HttpLanguageModel(std::string base_url, int timeout_ms = 2000);
    ~HttpLanguageModel() override;

    const Vocabulary& vocabulary() const override { return vocab_; }
    EncState encode(const TokenSequence& inputs) const override;
    TokenDistribution decode(const EncState& state, const TokenSequence& prefix) const override;

private:
    std::string base_url_;
    int timeout_ms_;
    Vocabulary vocab_;
};

}  // namespace cegen::lm
