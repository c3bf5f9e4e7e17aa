#include "cegen/lm/http_lm.hpp"

#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace cegen::lm {

namespace {

using nlohmann::json;

httplib::Client make_client(const std::string& base_url, int timeout_ms) {
    httplib::Client client(base_url);
    client.set_connection_timeout(0, timeout_ms * 1000);
    client.set_read_timeout(0, timeout_ms * 1000);
    client.set_write_timeout(0, timeout_ms * 1000);
    return client;
}

}  // namespace

TokenDistribution http_decode(const std::string& base_url, const TokenSequence& prefix_tokens,
                              const std::string& suffix_text, std::size_t vocab_size,
                              int timeout_ms) {
    httplib::Client client = make_client(base_url, timeout_ms);
    json request = {{"prefix_tokens", prefix_tokens}, {"suffix_text", suffix_text}};
    auto res = client.Post("/v1/token_probs", request.dump(), "application/json");
    if (!res)
        throw AdapterError("language model endpoint unreachable: " + base_url);
    if (res->status != 200)
        throw AdapterError("language model returned HTTP " + std::to_string(res->status));

    json reply;
    try {
        reply = json::parse(res->body);
    } catch (const json::exception& e) {
        throw AdapterError(std::string("bad token_probs reply: ") + e.what());
    }
    if (!reply.contains("probs") || !reply["probs"].is_array())
        throw MalformedDistribution("token_probs reply has no probs array");

    std::vector<double> probs;
    probs.reserve(reply["probs"].size());
    double sum = 0.0;
    for (const auto& p : reply["probs"]) {
        double v = p.get<double>();
        if (v < 0.0 || !std::isfinite(v))
            throw MalformedDistribution("negative or non-finite probability");
        probs.push_back(v);
        sum += v;
    }
    if (probs.size() != vocab_size)
        throw MalformedDistribution("probs length " + std::to_string(probs.size()) +
                                    " does not match vocabulary size " +
                                    std::to_string(vocab_size));
    if (std::abs(sum - 1.0) > 1e-6)
        throw MalformedDistribution("probabilities sum to " + std::to_string(sum));
    return TokenDistribution(std::move(probs));
}

HttpLanguageModel::HttpLanguageModel(std::string base_url, int timeout_ms)
    : base_url_(std::move(base_url)), timeout_ms_(timeout_ms) {
    httplib::Client client = make_client(base_url_, timeout_ms_);
    auto res = client.Get("/v1/vocab");
    if (!res) throw AdapterError("language model endpoint unreachable: " + base_url_);
    if (res->status != 200)
        throw AdapterError("vocab fetch returned HTTP " + std::to_string(res->status));
    json reply;
    try {
        reply = json::parse(res->body);
    } catch (const json::exception& e) {
        throw AdapterError(std::string("bad vocab reply: ") + e.what());
    }
    std::vector<std::string> tokens;
    std::int64_t end_index = -1;
    for (const auto& t : reply.at("tokens")) {
        std::string s = t.get<std::string>();
        if (s.empty()) end_index = static_cast<std::int64_t>(tokens.size());
        tokens.push_back(std::move(s));
    }
    if (end_index < 0) throw AdapterError("remote vocabulary has no end token");
    vocab_ = Vocabulary(std::move(tokens), static_cast<TokenId>(end_index));
}

HttpLanguageModel::~HttpLanguageModel() = default;

EncState HttpLanguageModel::encode(const TokenSequence& inputs) const {
    return encode_inputs(inputs);
}

TokenDistribution HttpLanguageModel::decode(const EncState& state,
                                            const TokenSequence& prefix) const {
    // Split the encoder input at the first end-token separator.
    const TokenId end = vocab_.end_token();
    std::size_t sep = state.inputs.size();
    for (std::size_t i = 0; i < state.inputs.size(); ++i)
        if (state.inputs[i] == end) {
            sep = i;
            break;
        }
    TokenSequence prefix_tokens(state.inputs.begin(),
                                state.inputs.begin() + static_cast<std::ptrdiff_t>(sep));
    prefix_tokens.insert(prefix_tokens.end(), prefix.begin(), prefix.end());
    TokenSequence suffix_tokens(
        sep < state.inputs.size() ? state.inputs.begin() + static_cast<std::ptrdiff_t>(sep) + 1
                                  : state.inputs.end(),
        state.inputs.end());
    return http_decode(base_url_, prefix_tokens, detokenize(vocab_, suffix_tokens),
                       vocab_.size(), timeout_ms_);
}

}  // namespace cegen::lm
