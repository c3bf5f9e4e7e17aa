#include "cegen/lm/ngram.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cegen::lm {

namespace {

constexpr char kMagic[5] = {'R', 'P', 'L', 'T', '1'};
constexpr std::uint8_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw std::runtime_error("model file truncated");
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

void put_str(std::ostream& out, const std::string& s) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_str(std::istream& in) {
    auto n = get<std::uint32_t>(in);
    std::string s(n, '\0');
    in.read(s.data(), n);
    if (!in) throw std::runtime_error("model file truncated");
    return s;
}

}  // namespace

std::string pack_context(const TokenSequence& prefix, std::size_t length) {
    std::string key;
    key.reserve(length * sizeof(TokenId));
    for (std::size_t i = prefix.size() - length; i < prefix.size(); ++i) {
        TokenId id = prefix[i];
        key.append(reinterpret_cast<const char*>(&id), sizeof(TokenId));
    }
    return key;
}

NGramModel::Builder::Builder(Vocabulary vocab, NGramConfig cfg)
    : vocab_(std::move(vocab)), cfg_(cfg) {
    if (cfg.order < 1 || cfg.order > 8)
        throw std::invalid_argument("ngram order must be in 1..8");
    global_.levels.resize(static_cast<std::size_t>(cfg.order));
}

void NGramModel::Builder::count_into(Table& table, const TokenSequence& seq) {
    TokenSequence full = seq;
    full.push_back(vocab_.end_token());
    const auto order = static_cast<std::size_t>(cfg_.order);
    std::string key;
    for (std::size_t i = 0; i < full.size(); ++i) {
        TokenId target = full[i];
        for (std::size_t l = 0; l < order && l <= i; ++l) {
            key.clear();
            for (std::size_t j = i - l; j < i; ++j)
                key.append(reinterpret_cast<const char*>(&full[j]), sizeof(TokenId));
            Row& row = table.levels[l][key];
            ++row.total;
            ++row.counts[target];
        }
    }
}

void NGramModel::Builder::add_sequence(const TokenSequence& seq) {
    count_into(global_, seq);
}

void NGramModel::Builder::add_state_sequence(const Hash128& state, const TokenSequence& seq) {
    auto it = states_.find(state);
    if (it == states_.end()) {
        Table t;
        t.levels.resize(static_cast<std::size_t>(cfg_.order));
        it = states_.emplace(state, std::move(t)).first;
    }
    count_into(it->second, seq);
}

NGramModel NGramModel::Builder::build() && {
    NGramModel model;
    model.vocab_ = std::move(vocab_);
    model.cfg_ = cfg_;
    model.global_ = std::move(global_);
    model.states_ = std::move(states_);
    return model;
}

EncState NGramModel::encode(const TokenSequence& inputs) const {
    return encode_inputs(inputs);
}

void NGramModel::accumulate(std::vector<double>& out, const Table& table,
                            const TokenSequence& prefix, double weight) const {
    const std::size_t vocab_size = vocab_.size();
    const double k = cfg_.k;
    const std::size_t level =
        std::min(static_cast<std::size_t>(cfg_.order) - 1, prefix.size());

    const Row* row = nullptr;
    if (level < table.levels.size()) {
        const auto& m = table.levels[level];
        auto it = m.find(pack_context(prefix, level));
        if (it != m.end()) row = &it->second;
    }
    const double total = row ? static_cast<double>(row->total) : 0.0;
    const double denom = total + k * static_cast<double>(vocab_size);
    const double base = weight * k / denom;
    for (std::size_t t = 0; t < vocab_size; ++t) out[t] += base;
    if (row)
        for (const auto& [tok, cnt] : row->counts)
            out[tok] += weight * static_cast<double>(cnt) / denom;
}

TokenDistribution NGramModel::decode(const EncState& state, const TokenSequence& prefix) const {
    std::vector<double> probs(vocab_.size(), 0.0);
    const double lambda = cfg_.lambda;

    auto it = states_.find(state.key);
    if (it != states_.end()) {
        accumulate(probs, it->second, prefix, lambda);
    } else {
        // Unseen state: its table is all zeros, which smooths to uniform.
        const double u = lambda / static_cast<double>(vocab_.size());
        for (double& p : probs) p += u;
    }
    accumulate(probs, global_, prefix, 1.0 - lambda);
    return TokenDistribution(std::move(probs));
}

namespace {

void save_table(std::ostream& out, const NGramModel::Table& table) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(table.levels.size()));
    for (const auto& level : table.levels) {
        put<std::uint64_t>(out, level.size());
        for (const auto& [ctx, row] : level) {
            put_str(out, ctx);
            put<std::uint64_t>(out, row.total);
            put<std::uint32_t>(out, static_cast<std::uint32_t>(row.counts.size()));
            for (const auto& [tok, cnt] : row.counts) {
                put<std::uint32_t>(out, tok);
                put<std::uint64_t>(out, cnt);
            }
        }
    }
}

NGramModel::Table load_table(std::istream& in) {
    NGramModel::Table table;
    table.levels.resize(get<std::uint32_t>(in));
    for (auto& level : table.levels) {
        auto entries = get<std::uint64_t>(in);
        for (std::uint64_t e = 0; e < entries; ++e) {
            std::string ctx = get_str(in);
            NGramModel::Row row;
            row.total = get<std::uint64_t>(in);
            auto n = get<std::uint32_t>(in);
            for (std::uint32_t i = 0; i < n; ++i) {
                TokenId tok = get<std::uint32_t>(in);
                row.counts[tok] = get<std::uint64_t>(in);
            }
            level.emplace(std::move(ctx), std::move(row));
        }
    }
    return table;
}

}  // namespace

void NGramModel::save(std::ostream& out) const {
    out.write(kMagic, sizeof kMagic);
    put<std::uint8_t>(out, kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(cfg_.order));
    put<double>(out, cfg_.k);
    put<double>(out, cfg_.lambda);

    put<std::uint32_t>(out, static_cast<std::uint32_t>(vocab_.size()));
    put<std::uint32_t>(out, vocab_.end_token());
    for (const std::string& t : vocab_.tokens()) put_str(out, t);

    save_table(out, global_);
    put<std::uint64_t>(out, states_.size());
    for (const auto& [key, table] : states_) {
        put<std::uint64_t>(out, key.hi);
        put<std::uint64_t>(out, key.lo);
        save_table(out, table);
    }
}

NGramModel NGramModel::load(std::istream& in) {
    char magic[sizeof kMagic];
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw std::runtime_error("not a model file (bad magic)");
    auto version = get<std::uint8_t>(in);
    if (version != kVersion)
        throw std::runtime_error("unsupported model version " + std::to_string(version));

    NGramModel model;
    model.cfg_.order = static_cast<int>(get<std::uint32_t>(in));
    model.cfg_.k = get<double>(in);
    model.cfg_.lambda = get<double>(in);

    auto vocab_size = get<std::uint32_t>(in);
    auto end_index = get<std::uint32_t>(in);
    std::vector<std::string> tokens;
    tokens.reserve(vocab_size);
    for (std::uint32_t i = 0; i < vocab_size; ++i) tokens.push_back(get_str(in));
    model.vocab_ = Vocabulary(std::move(tokens), end_index);

    model.global_ = load_table(in);
    auto nstates = get<std::uint64_t>(in);
    for (std::uint64_t i = 0; i < nstates; ++i) {
        Hash128 key;
        key.hi = get<std::uint64_t>(in);
        key.lo = get<std::uint64_t>(in);
        model.states_.emplace(key, load_table(in));
    }
    return model;
}

void NGramModel::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    save(out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

NGramModel NGramModel::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    return load(in);
}

}  // namespace cegen::lm
