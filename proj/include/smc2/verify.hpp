#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smc2/ast.hpp"
#include "smc2/io.hpp"
#include "smc2/protocols.hpp"
#include "smc2/smc2.hpp"

namespace smc2 {

enum class Verdict { Pass, Fail, Skip };

struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::Pass;
  std::string detail;
  bool fault = false;  // the failure was a runtime error, not a property violation

  bool passed() const { return verdict != Verdict::Fail; }
};

// "CHECK <name> PASS|FAIL|SKIP <detail>"
std::string format(const CheckResult& r);

// SMC2 run against a run of the erased program: derivation congruence for
// every party, final-state correspondence and identical outputs. Runs with
// a misaligned out-of-bounds access are skipped.
CheckResult check_correctness(const std::string& name, const Program& program, const InputSet& inputs,
                              const RunOptions& options = {});

struct NIReport {
  bool pass = true;
  std::string detail;  // first divergence
};

// Two runs on inputs that differ only in private values. The second run may
// use a different seed: traces must not depend on the randomness either.
NIReport check_noninterference(const Program& program, const InputSet& a, const InputSet& b,
                               const RunOptions& options = {}, std::optional<std::uint64_t> seed_b = {});

// All parties of one run saw the same codes, locations and public memory.
NIReport check_confluence(const Smc2State& state);

// At every private if on the executed path, the resolved memory equals a
// plaintext execution of only the branch the guard selects.
CheckResult check_branch_oracle(const std::string& name, const Program& program, const InputSet& inputs,
                                const RunOptions& options = {});

// Exhaustive protocol checks over a small field.
std::vector<CheckResult> check_protocol_axioms(const mpc::FieldParams& field);

}  // namespace smc2
