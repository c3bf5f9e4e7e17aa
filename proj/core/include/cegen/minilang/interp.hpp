#pragma once

#include <cstdint>

#include "cegen/minilang/ast.hpp"

namespace cegen::minilang {

enum class RunStatus : std::uint8_t { AllPass, AssertFailed, RuntimeError };
enum class RuntimeFault : std::uint8_t { DivByZero, FuelExhausted, MissingReturn };

struct RunOutcome {
    RunStatus status = RunStatus::AllPass;
    std::uint32_t assert_pos = 0;  // position of the failing assert
    RuntimeFault fault = RuntimeFault::DivByZero;

    bool all_pass() const { return status == RunStatus::AllPass; }
};

constexpr std::uint64_t kDefaultFuel = 1'000'000;

/// Executes `main`. Asserts anywhere in the program act as the test suite;
/// the first failing assert or runtime fault stops execution.
RunOutcome run_tests(const Program& prog, std::uint64_t fuel = kDefaultFuel);

}  // namespace cegen::minilang
