#include "cegen/bench/validate.hpp"

#include "cegen/minilang/check.hpp"
#include "cegen/minilang/interp.hpp"

namespace cegen::bench {

const char* patch_class_name(PatchClass c) {
    switch (c) {
        case PatchClass::Invalid: return "invalid";
        case PatchClass::CompilableOnly: return "compilable";
        case PatchClass::Plausible: return "plausible";
        case PatchClass::Correct: return "correct";
    }
    return "?";
}

namespace {

std::string patched_text(const BugCase& bug, const std::string& patch_hunk) {
    return splice(SourceBuffer(bug.source), bug.hunk, patch_hunk).text();
}

std::string inject_hidden(const std::string& text, const minilang::Program& prog,
                          const std::vector<std::string>& hidden) {
    if (hidden.empty()) return text;
    std::string block;
    for (const std::string& a : hidden) {
        block += ' ';
        block += a;
    }
    // Right after main's opening brace.
    const std::size_t at = prog.main().body.span.begin + 1;
    return text.substr(0, at) + block + text.substr(at);
}

}  // namespace

std::string with_hidden_asserts(const BugCase& bug, const std::string& patch_hunk) {
    std::string text = patched_text(bug, patch_hunk);
    minilang::CheckResult checked = minilang::check(text);
    if (!checked.valid()) return {};
    return inject_hidden(text, *checked.program, bug.hidden_asserts);
}

PatchClass validate(const BugCase& bug, const std::string& patch_hunk) {
    std::string text = patched_text(bug, patch_hunk);
    minilang::CheckResult checked = minilang::check(text);
    if (!checked.valid()) return PatchClass::Invalid;

    if (!minilang::run_tests(*checked.program).all_pass()) return PatchClass::CompilableOnly;

    std::string hardened = inject_hidden(text, *checked.program, bug.hidden_asserts);
    minilang::CheckResult hardened_check = minilang::check(hardened);
    if (!hardened_check.valid()) return PatchClass::Plausible;  // asserts didn't fit the patch
    if (!minilang::run_tests(*hardened_check.program).all_pass()) return PatchClass::Plausible;
    return PatchClass::Correct;
}

}  // namespace cegen::bench
