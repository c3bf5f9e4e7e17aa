#include "cegen/bench/ablation.hpp"

#include <atomic>
#include <chrono>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cegen/minilang/pretty.hpp"

namespace cegen::bench {

int BugRunResult::count_at_least(PatchClass c) const {
    int n = 0;
    for (const auto& [key, cls] : unique_patches)
        if (static_cast<int>(cls) >= static_cast<int>(c)) ++n;
    return n;
}

std::uint64_t VariantReport::total_unique() const {
    std::uint64_t n = 0;
    for (const auto& b : bugs) n += b.unique_patches.size();
    return n;
}
std::uint64_t VariantReport::total_aborted() const {
    std::uint64_t n = 0;
    for (const auto& b : bugs) n += static_cast<std::uint64_t>(b.aborted());
    return n;
}
std::uint64_t VariantReport::total_at_least(PatchClass c) const {
    std::uint64_t n = 0;
    for (const auto& b : bugs) n += static_cast<std::uint64_t>(b.count_at_least(c));
    return n;
}
std::uint64_t VariantReport::total_ce_queries() const {
    std::uint64_t n = 0;
    for (const auto& b : bugs) n += b.ce_queries;
    return n;
}
double VariantReport::total_seconds() const {
    double s = 0.0;
    for (const auto& b : bugs) s += b.seconds;
    return s;
}
double VariantReport::total_samples() const {
    double s = 0.0;
    for (const auto& b : bugs) s += b.samples;
    return s;
}
double VariantReport::pct_compilable() const {
    const double denom = static_cast<double>(total_unique() + total_aborted());
    return denom > 0 ? 100.0 * static_cast<double>(total_at_least(PatchClass::CompilableOnly)) /
                           denom
                     : 0.0;
}
double VariantReport::pct_plausible() const {
    const double denom = static_cast<double>(total_unique() + total_aborted());
    return denom > 0 ? 100.0 * static_cast<double>(total_at_least(PatchClass::Plausible)) / denom
                     : 0.0;
}
int VariantReport::bugs_with(PatchClass c) const {
    int n = 0;
    for (const auto& b : bugs) n += b.count_at_least(c) > 0 ? 1 : 0;
    return n;
}
double VariantReport::sec_per_patch() const {
    const double samples = total_samples();
    return samples > 0 ? total_seconds() / samples : 0.0;
}

namespace {

BugRunResult run_bug(const BugCase& bug, const decoder::VariantConfig& variant,
                     const AblationOptions& options, const lm::LanguageModel& model,
                     engine::CompletionEngine& engine) {
    BugRunResult result;
    result.bug_id = bug.id;

    engine::CountingEngine counting(engine);
    decoder::MemoStore memo(model.vocabulary());
    decoder::DecoderHooks* hooks =
        options.hooks_for ? options.hooks_for(variant) : nullptr;

    SourceBuffer buggy(bug.buggy_text());
    HunkRange range = bug.buggy_range();

    decoder::RepairContext ctx{model,
                               counting,
                               bug.id,
                               buggy,
                               range,
                               variant,
                               options.sampler,
                               &memo,
                               hooks};

    for (int s = 0; s < options.samples_per_bug; ++s) {
        Rng rng = Rng::derive(options.seed,
                              {Hash128Builder().str(bug.id).finish().lo,
                               static_cast<std::uint64_t>(s)});
        auto t0 = std::chrono::steady_clock::now();
        decoder::RepairOutcome outcome = decoder::repair(ctx, rng);
        auto t1 = std::chrono::steady_clock::now();
        result.seconds += std::chrono::duration<double>(t1 - t0).count();
        ++result.samples;

        switch (outcome.kind) {
            case decoder::RepairOutcome::Kind::MaxTokens: ++result.aborted_max_tokens; break;
            case decoder::RepairOutcome::Kind::Exhausted: ++result.aborted_exhausted; break;
            case decoder::RepairOutcome::Kind::AdapterFailure: ++result.aborted_adapter; break;
            case decoder::RepairOutcome::Kind::Patch: {
                std::string key = minilang::patch_key(outcome.hunk_text);
                if (!result.unique_patches.count(key))
                    result.unique_patches.emplace(key, validate(bug, outcome.hunk_text));
                break;
            }
        }
    }
    result.ce_queries = counting.queries();
    return result;
}

}  // namespace

RunReport run_ablation(const std::vector<BugCase>& corpus, const AblationOptions& options,
                       const lm::LanguageModel& model, engine::CompletionEngine& engine) {
    RunReport report;
    report.seed = options.seed;
    report.samples_per_bug = options.samples_per_bug;
    report.variants.resize(options.variants.size());
    for (std::size_t v = 0; v < options.variants.size(); ++v) {
        report.variants[v].variant = options.variants[v];
        report.variants[v].bugs.resize(corpus.size());
    }

    struct Task {
        std::size_t variant;
        std::size_t bug;
    };
    std::vector<Task> tasks;
    for (std::size_t v = 0; v < options.variants.size(); ++v)
        for (std::size_t b = 0; b < corpus.size(); ++b) tasks.push_back({v, b});

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const Task& t = tasks[i];
            report.variants[t.variant].bugs[t.bug] =
                run_bug(corpus[t.bug], options.variants[t.variant], options, model, engine);
        }
    };

    const int workers = std::max(1, options.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return report;
}

namespace {

std::string format_seconds(double s, bool zero_timing) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << (zero_timing ? 0.0 : s);
    return os.str();
}

}  // namespace

void write_report_csv(std::ostream& out, const RunReport& report, bool zero_timing) {
    out << "variant,bug,unique_patches,compilable,plausible,correct,ce_queries,sec_per_patch\n";
    for (const VariantReport& vr : report.variants) {
        for (const BugRunResult& b : vr.bugs) {
            out << vr.variant.name() << ',' << b.bug_id << ',' << b.unique_patches.size() << ','
                << b.compilable() << ',' << b.plausible() << ',' << b.correct() << ','
                << b.ce_queries << ',' << format_seconds(b.sec_per_patch(), zero_timing) << "\n";
        }
    }
}

void write_report_json(std::ostream& out, const RunReport& report, bool zero_timing) {
    nlohmann::ordered_json j;
    j["seed"] = report.seed;
    j["samples_per_bug"] = report.samples_per_bug;
    j["variants"] = nlohmann::ordered_json::array();
    for (const VariantReport& vr : report.variants) {
        nlohmann::ordered_json jv;
        jv["variant"] = vr.variant.name();
        jv["bugs"] = nlohmann::ordered_json::array();
        for (const BugRunResult& b : vr.bugs) {
            nlohmann::ordered_json jb;
            jb["bug"] = b.bug_id;
            jb["samples"] = b.samples;
            jb["aborted_max_tokens"] = b.aborted_max_tokens;
            jb["aborted_exhausted"] = b.aborted_exhausted;
            jb["aborted_adapter"] = b.aborted_adapter;
            jb["unique_patches"] = b.unique_patches.size();
            jb["compilable"] = b.compilable();
            jb["plausible"] = b.plausible();
            jb["correct"] = b.correct();
            jb["ce_queries"] = b.ce_queries;
            jb["sec_per_patch"] = zero_timing ? 0.0 : b.sec_per_patch();
            nlohmann::ordered_json patches = nlohmann::ordered_json::array();
            for (const auto& [key, cls] : b.unique_patches)
                patches.push_back({{"patch", key}, {"class", patch_class_name(cls)}});
            jb["patches"] = std::move(patches);
            jv["bugs"].push_back(std::move(jb));
        }
        nlohmann::ordered_json agg;
        agg["unique_patches"] = vr.total_unique();
        agg["aborted"] = vr.total_aborted();
        agg["compilable"] = vr.total_at_least(PatchClass::CompilableOnly);
        agg["plausible"] = vr.total_at_least(PatchClass::Plausible);
        agg["correct"] = vr.total_at_least(PatchClass::Correct);
        agg["pct_compilable"] = vr.pct_compilable();
        agg["pct_plausible"] = vr.pct_plausible();
        agg["plausible_fixes"] = vr.bugs_with(PatchClass::Plausible);
        agg["correct_fixes"] = vr.bugs_with(PatchClass::Correct);
        agg["ce_queries"] = vr.total_ce_queries();
        agg["sec_per_patch"] = zero_timing ? 0.0 : vr.sec_per_patch();
        jv["aggregate"] = std::move(agg);
        j["variants"].push_back(std::move(jv));
    }
    out << j.dump(2) << "\n";
}

}  // namespace cegen::bench
