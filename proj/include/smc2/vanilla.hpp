#pragma once

#include <cstdint>
#include <vector>

#include "smc2/ast.hpp"
#include "smc2/env.hpp"
#include "smc2/io.hpp"
#include "smc2/memory.hpp"
#include "smc2/trace.hpp"

namespace smc2 {

// A defined (or only declared, def == nullptr) function. Function blocks
// store the index of their entry in the program's function table.
struct FunctionDef {
  StmtPtr def;
  Env env;  // bindings visible in the body, including the function itself
  bool side_effects = false;
};

using FunctionTable = std::vector<FunctionDef>;

inline constexpr std::uint64_t kDefaultLoopBudget = 1'000'000;
// Nested call limit; deeper recursion raises LoopBudgetExceeded.
inline constexpr int kMaxCallDepth = 256;

struct VanillaParty {
  Env env;
  Memory mem;
  Trace trace;
  Outputs outputs;
};

struct VanillaResult {
  std::vector<VanillaParty> parties;
  FunctionTable functions;
  bool misaligned = false;  // some out-of-bounds access was not well aligned
};

// Runs every party independently on the unlabeled program.
VanillaResult run_vanilla(const Program& program, const InputSet& inputs, int parties,
                          std::uint64_t loop_budget = kDefaultLoopBudget);

// Executes one statement for `party` starting from an existing state.
struct VanillaState {
  Env env;
  Memory mem;
  FunctionTable functions;
  Trace trace;
  Outputs outputs;
  bool misaligned = false;
};
void exec_vanilla(VanillaState& state, const Stmt& stmt, InputSet& inputs, int party, int parties,
                  std::uint64_t loop_budget = kDefaultLoopBudget);

// Shared runtime helpers.
namespace rt {

// Public scalar arithmetic with C semantics (32-bit wrap-around ints).
Value public_binop(BinOp op, const Value& a, const Value& b);
Value convert_public(const Value& v, BaseType to);
bool truthy(const Value& v);
Value parse_public(const std::string& text, BaseType base);
std::string format_public(const Value& v);
// Allocation of the distinguished default block every memory starts with.
void allocate_default(Memory& mem);
Value zero_of(const Type& ty);

}  // namespace rt

}  // namespace smc2
