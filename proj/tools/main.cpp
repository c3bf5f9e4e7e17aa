#include <chrono>
#include <functional>
#include <set>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cegen/adapter.hpp"
#include "cegen/bench/ablation.hpp"
#include "cegen/bench/corpus.hpp"
#include "cegen/bench/validate.hpp"
#include "cegen/decoder/repair.hpp"
#include "cegen/engine/minilang_engine.hpp"
#include "cegen/engine/remote_engine.hpp"
#include "cegen/lm/http_lm.hpp"
#include "cegen/lm/ngram.hpp"
#include "cegen/minilang/check.hpp"
#include "cegen/minilang/feasibility.hpp"
#include "cegen/minilang/pretty.hpp"

namespace {

using namespace cegen;

constexpr int kExitOk = 0;
constexpr int kExitNoResult = 1;
constexpr int kExitError = 2;

struct LmChoice {
    std::unique_ptr<lm::NGramModel> ngram;
    std::unique_ptr<lm::HttpLanguageModel> http;
    lm::LanguageModel* get() { return ngram ? static_cast<lm::LanguageModel*>(ngram.get())
                                            : static_cast<lm::LanguageModel*>(http.get()); }
};

LmChoice open_lm(const std::string& spec) {
    LmChoice out;
    if (spec.rfind("ngram:", 0) == 0) {
        out.ngram = std::make_unique<lm::NGramModel>(
            lm::NGramModel::load_file(spec.substr(6)));
        return out;
    }
    if (spec.rfind("http:", 0) == 0) {
        out.http = std::make_unique<lm::HttpLanguageModel>(spec.substr(5));
        return out;
    }
    throw std::runtime_error("--lm must be ngram:PATH or http:URL, got '" + spec + "'");
}

struct CeChoice {
    std::unique_ptr<engine::MiniLangEngine> builtin;
    std::unique_ptr<engine::RemoteEngine> remote;
    engine::CompletionEngine* get() {
        return builtin ? static_cast<engine::CompletionEngine*>(builtin.get())
                       : static_cast<engine::CompletionEngine*>(remote.get());
    }
};

CeChoice open_ce(const std::string& spec) {
    CeChoice out;
    if (spec == "builtin") {
        out.builtin = std::make_unique<engine::MiniLangEngine>();
        return out;
    }
    if (spec.rfind("tcp:", 0) == 0) {
        out.remote = std::make_unique<engine::RemoteEngine>(engine::connect_tcp(spec.substr(4)));
        return out;
    }
    throw std::runtime_error("--ce must be builtin or tcp:HOST:PORT, got '" + spec + "'");
}

const bench::BugCase* find_bug(const std::vector<bench::BugCase>& corpus, const std::string& id) {
    for (const auto& b : corpus)
        if (b.id == id) return &b;
    return nullptr;
}

/// JSONL prune-log writer matching the audit schema; "hunk" makes the exact
/// context reproducible offline.
class PruneLogWriter {
public:
    explicit PruneLogWriter(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("cannot write " + path);
        hooks_.on_prune = [this](const decoder::PruneEvent& e) {
            nlohmann::ordered_json j = {{"bug", e.bug_id},
                                        {"prefix_hash", e.prefix_hash.hex()},
                                        {"caret", e.caret},
                                        {"token", e.token_text},
                                        {"reason", e.reason},
                                        {"hunk", e.hunk}};
            out_ << j.dump() << "\n";
        };
    }
    decoder::DecoderHooks* hooks() { return &hooks_; }

private:
    std::ofstream out_;
    decoder::DecoderHooks hooks_;
};

int cmd_repair(const std::string& corpus_path, const std::string& bug_id,
               const std::string& lm_spec, const std::string& ce_spec,
               const std::string& variant_name, int samples, std::uint64_t seed,
               lm::SamplerConfig sampler, const std::string& out_path,
               const std::string& audit_path) {
    auto corpus = bench::load_corpus(corpus_path);
    const bench::BugCase* bug = find_bug(corpus, bug_id);
    if (!bug) {
        std::cerr << "error: no bug '" << bug_id << "' in " << corpus_path << "\n";
        return kExitError;
    }
    auto variant = decoder::VariantConfig::parse(variant_name);
    if (!variant) {
        std::cerr << "error: unknown variant '" << variant_name << "'\n";
        return kExitError;
    }

    LmChoice lm = open_lm(lm_spec);
    CeChoice ce = open_ce(ce_spec);

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitError;
    }
    std::unique_ptr<PruneLogWriter> audit;
    if (!audit_path.empty()) audit = std::make_unique<PruneLogWriter>(audit_path);

    decoder::MemoStore memo(lm.get()->vocabulary());
    SourceBuffer buggy(bug->buggy_text());
    decoder::RepairContext ctx{*lm.get(),
                               *ce.get(),
                               bug->id,
                               buggy,
                               bug->buggy_range(),
                               *variant,
                               sampler,
                               &memo,
                               audit ? audit->hooks() : nullptr};

    bool any_plausible = false;
    for (int s = 0; s < samples; ++s) {
        Rng rng = Rng::derive(seed, {Hash128Builder().str(bug->id).finish().lo,
                                     static_cast<std::uint64_t>(s)});
        auto t0 = std::chrono::steady_clock::now();
        decoder::RepairOutcome outcome = decoder::repair(ctx, rng);
        auto t1 = std::chrono::steady_clock::now();
        double secs = std::chrono::duration<double>(t1 - t0).count();

        nlohmann::ordered_json j;
        j["bug"] = bug->id;
        if (outcome.kind == decoder::RepairOutcome::Kind::Patch) {
            bench::PatchClass cls = bench::validate(*bug, outcome.hunk_text);
            any_plausible |= static_cast<int>(cls) >= static_cast<int>(bench::PatchClass::Plausible);
            j["patch"] = outcome.hunk_text;
            j["class"] = bench::patch_class_name(cls);
        } else {
            j["patch"] = nullptr;
            j["class"] = outcome.kind == decoder::RepairOutcome::Kind::MaxTokens ? "aborted-max-tokens"
                         : outcome.kind == decoder::RepairOutcome::Kind::Exhausted
                             ? "aborted-exhausted"
                             : "aborted-adapter";
        }
        j["seconds"] = secs;
        out << j.dump() << "\n";
    }
    return any_plausible ? kExitOk : kExitNoResult;
}

int cmd_bench(const std::string& corpus_path, const std::string& lm_spec,
              const std::string& ce_spec, const std::vector<std::string>& variant_names,
              int samples, std::uint64_t seed, lm::SamplerConfig sampler, int workers,
              const std::string& out_prefix, const std::string& timing_mode) {
    auto corpus = bench::load_corpus(corpus_path);
    if (corpus.empty()) {
        std::cerr << "error: corpus is empty\n";
        return kExitError;
    }
    bench::AblationOptions options;
    options.variants.clear();
    for (const std::string& name : variant_names) {
        auto v = decoder::VariantConfig::parse(name);
        if (!v) {
            std::cerr << "error: unknown variant '" << name << "'\n";
            return kExitError;
        }
        options.variants.push_back(*v);
    }
    options.samples_per_bug = samples;
    options.seed = seed;
    options.workers = workers;
    options.sampler = sampler;

    LmChoice lm = open_lm(lm_spec);
    CeChoice ce = open_ce(ce_spec);

    bench::RunReport report = bench::run_ablation(corpus, options, *lm.get(), *ce.get());
    const bool zero_timing = timing_mode == "zero";

    std::ofstream csv(out_prefix + ".csv");
    std::ofstream json(out_prefix + ".json");
    if (!csv || !json) {
        std::cerr << "error: cannot write " << out_prefix << ".{csv,json}\n";
        return kExitError;
    }
    bench::write_report_csv(csv, report, zero_timing);
    bench::write_report_json(json, report, zero_timing);
    if (!csv.flush() || !json.flush()) {
        std::cerr << "error: report write failed\n";
        return kExitError;
    }
    return kExitOk;
}

int cmd_mutate(const std::string& seed_dir, int count, std::uint64_t seed,
               const std::string& out_path) {
    auto seeds = bench::load_seed_dir(seed_dir);
    Rng rng(seed);
    auto corpus = bench::build_corpus(seeds, count, rng);
    bench::save_corpus(out_path, corpus);
    if (static_cast<int>(corpus.size()) < count) {
        std::cerr << "warning: only " << corpus.size() << " of " << count
                  << " requested exposing mutations found\n";
        return kExitNoResult;
    }
    return kExitOk;
}

int cmd_train_lm(const std::string& seed_dir, int order, int vocab_size,
                 const std::string& out_path) {
    auto seeds = bench::load_seed_dir(seed_dir);

    std::set<std::string> texts;
    std::vector<std::pair<std::string, std::shared_ptr<const minilang::Program>>> programs;
    for (const auto& seed : seeds) {
        auto canon = minilang::canonical(seed.text);
        if (!canon) throw std::runtime_error("seed '" + seed.name + "' does not lex");
        minilang::CheckResult checked = minilang::check(seed.text);
        if (!checked.valid())
            throw std::runtime_error("seed '" + seed.name + "': " + checked.diagnostic->message);
        texts.insert(*canon);
        programs.emplace_back(seed.text, checked.program);
    }

    Vocabulary vocab = build_vocabulary(texts, static_cast<std::size_t>(vocab_size));
    lm::NGramModel::Builder builder(vocab, lm::NGramConfig{order, 0.01, 0.5});

    for (const auto& [text, program] : programs) {
        auto canon = minilang::canonical(text);
        builder.add_sequence(align_tokens(vocab, *canon));

        // Each statement doubles as a cloze training example: the statement
        // span is masked and its canonical text becomes the target hunk.
        SourceBuffer buf(text);
        auto train_stmt = [&](const minilang::Stmt& stmt) {
            std::string stmt_text =
                text.substr(stmt.span.begin, stmt.span.end - stmt.span.begin);
            auto stmt_canon = minilang::canonical(stmt_text);
            if (!stmt_canon) return;
            TokenSequence inputs = decoder::build_inputs(
                vocab, buf, HunkRange{stmt.span.begin, stmt.span.end});
            builder.add_state_sequence(lm::encode_inputs(inputs).key,
                                       align_tokens(vocab, *stmt_canon));
        };
        std::function<void(const minilang::Block&)> walk = [&](const minilang::Block& block) {
            for (const auto& stmt : block.stmts) {
                train_stmt(*stmt);
                if (stmt->kind == minilang::Stmt::Kind::If) {
                    walk(stmt->then_block);
                    if (stmt->has_else) walk(stmt->else_block);
                }
            }
        };
        for (const auto& rec : program->records)
            for (const auto& m : rec.methods) walk(m.body);
        for (const auto& fn : program->functions) walk(fn.body);
    }

    lm::NGramModel model = std::move(builder).build();
    model.save_file(out_path);
    return kExitOk;
}

int cmd_audit(const std::string& corpus_path, const std::string& log_path, int oracle_depth) {
    auto corpus = bench::load_corpus(corpus_path);
    std::ifstream in(log_path);
    if (!in) {
        std::cerr << "error: cannot read " << log_path << "\n";
        return kExitError;
    }
    std::string line;
    std::uint64_t audited = 0, witnesses = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        const bench::BugCase* bug = find_bug(corpus, j.at("bug").get<std::string>());
        if (!bug) {
            std::cerr << "error: log references unknown bug '" << j.at("bug") << "'\n";
            return kExitError;
        }
        std::string hunk = j.at("hunk").get<std::string>();
        std::string token = j.at("token").get<std::string>();
        SourceBuffer patch =
            splice(SourceBuffer(bug->buggy_text()), bug->buggy_range(), hunk + token);
        std::size_t caret = bug->buggy_range().start + hunk.size() + token.size();
        auto verdict = minilang::feasibility_oracle(patch, caret, oracle_depth);
        ++audited;
        if (verdict.feasible()) {
            ++witnesses;
            std::cerr << "witness for pruned token: bug=" << bug->id << " hunk='" << hunk
                      << "' token='" << token << "' witness='" << *verdict.witness << "'\n";
        }
    }
    std::cout << "audited " << audited << " pruned tokens, " << witnesses << " witnesses\n";
    return witnesses == 0 ? kExitOk : kExitNoResult;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"completion-engine guided patch synthesis"};
    app.require_subcommand(1);

    std::string corpus, bug, lm_spec = "ngram:model.rplt", ce_spec = "builtin";
    std::string variant = "full", out = "out";
    std::vector<std::string> variants = {"baseline", "prune", "prune-memo", "full"};
    std::string timing = "wall", audit_log, seeds_dir, log_path;
    int samples = 200, workers = 4, count = 30, order = 3, vocab_size = 192, oracle_depth = 4;
    std::uint64_t seed = 42;
    cegen::lm::SamplerConfig sampler;

    auto add_sampler_flags = [&](CLI::App* cmd) {
        cmd->add_option("--top-p", sampler.top_p, "nucleus mass")->check(CLI::Range(0.0, 1.0));
        cmd->add_option("--temperature", sampler.temperature, "sampling temperature")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--max-tokens", sampler.max_tokens, "token budget per sample")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* repair = app.add_subcommand("repair", "generate patches for one bug");
    repair->add_option("--corpus", corpus)->required();
    repair->add_option("--bug", bug)->required();
    repair->add_option("--lm", lm_spec, "ngram:PATH or http:URL");
    repair->add_option("--ce", ce_spec, "builtin or tcp:HOST:PORT");
    repair->add_option("--variant", variant, "baseline|prune|prune-memo|full");
    repair->add_option("--samples", samples);
    repair->add_option("--seed", seed);
    repair->add_option("--workers", workers);
    repair->add_option("--out", out)->required();
    repair->add_option("--audit-log", audit_log, "JSONL log of pruned tokens");
    add_sampler_flags(repair);

    CLI::App* bench_cmd = app.add_subcommand("bench", "run the ablation harness");
    bench_cmd->add_option("--corpus", corpus)->required();
    bench_cmd->add_option("--lm", lm_spec);
    bench_cmd->add_option("--ce", ce_spec);
    bench_cmd->add_option("--variants", variants, "subset of baseline,prune,prune-memo,full");
    bench_cmd->add_option("--samples", samples);
    bench_cmd->add_option("--seed", seed);
    bench_cmd->add_option("--workers", workers);
    bench_cmd->add_option("--out", out, "report path prefix")->required();
    bench_cmd->add_option("--timing", timing, "wall or zero")
        ->check(CLI::IsMember({"wall", "zero"}));
    add_sampler_flags(bench_cmd);

    CLI::App* mutate = app.add_subcommand("mutate", "build a bug corpus from seed programs");
    mutate->add_option("--seeds", seeds_dir, "directory of .mini seeds")->required();
    mutate->add_option("--count", count);
    mutate->add_option("--seed", seed);
    mutate->add_option("--out", out)->required();

    CLI::App* train = app.add_subcommand("train-lm", "train and serialize the n-gram model");
    train->add_option("--seeds", seeds_dir, "directory of .mini seeds")->required();
    train->add_option("--order", order)->check(CLI::Range(1, 8));
    train->add_option("--vocab-size", vocab_size);
    train->add_option("--out", out)->required();

    CLI::App* audit = app.add_subcommand("audit", "check a prune log against the oracle");
    audit->add_option("--corpus", corpus)->required();
    audit->add_option("--log", log_path)->required();
    audit->add_option("--oracle-depth", oracle_depth);

    CLI11_PARSE(app, argc, argv);

    try {
        if (repair->parsed())
            return cmd_repair(corpus, bug, lm_spec, ce_spec, variant, samples, seed, sampler, out,
                              audit_log);
        if (bench_cmd->parsed())
            return cmd_bench(corpus, lm_spec, ce_spec, variants, samples, seed, sampler, workers,
                             out, timing);
        if (mutate->parsed()) return cmd_mutate(seeds_dir, count, seed, out);
        if (train->parsed()) return cmd_train_lm(seeds_dir, order, vocab_size, out);
        if (audit->parsed()) return cmd_audit(corpus, log_path, oracle_depth);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
