#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "smc2/ast.hpp"
#include "smc2/env.hpp"
#include "smc2/io.hpp"
#include "smc2/memory.hpp"
#include "smc2/protocols.hpp"
#include "smc2/trace.hpp"
#include "smc2/vanilla.hpp"

namespace smc2 {

// How private-conditioned branches keep the two sides apart.
enum class Tracking { Auto, Variable, Location };

// Where a block came from. Temporaries belong to branch bookkeeping; path
// lists the enclosing private-if instances and the side (true = then) the
// allocation happened on.
struct BlockInfo {
  bool temp = false;
  std::vector<std::pair<std::uint32_t, bool>> path;
};

struct Smc2Party {
  int id = 1;
  Env env;
  Memory mem;
  FunctionTable functions;
  Trace trace;
  Outputs outputs;
};

struct Smc2State {
  mpc::FieldParams field;
  std::vector<Smc2Party> parties;
  // Keyed by party 1's block ids; every party allocates in the same order.
  std::map<BlockId, BlockInfo> provenance;
  // Plaintext guard of every private-if instance, in execution order.
  std::vector<bool> taken;
  // One [freed, relocation target] pair per multi-location pfree.
  std::vector<std::vector<Location>> psi;
  mpc::RoundReport rounds;
  bool misaligned = false;
};

struct BranchEvent {
  enum class Phase { Before, After };
  Phase phase = Phase::Before;
  const Stmt* stmt = nullptr;
  std::uint32_t instance = 0;
  bool taken = false;
  // All enclosing private-if instances took the side this if sits on.
  bool on_taken_path = true;
  const Smc2State* state = nullptr;
};

struct RunOptions {
  mpc::FieldParams field;
  std::uint64_t seed = 1;
  mpc::Backend backend = mpc::Backend::Shamir;
  Tracking tracking = Tracking::Auto;
  // Resolve every write inside a private branch on the spot instead of once per branch.
  bool legacy = false;
  std::uint64_t loop_budget = kDefaultLoopBudget;
  // Test hook: party whose allocator is shifted by one id (0 = none).
  int desync_party = 0;
  // Called after a private guard is evaluated and after the branch resolves.
  std::function<void(const BranchEvent&)> hook;
};

Smc2State run_smc2(const Program& program, const InputSet& inputs, const RunOptions& options = {});

// God's-eye reconstruction helpers shared by the checkers.
std::int64_t reconstruct_value(const Smc2State& state, const std::vector<Value>& per_party);
Value plaintext(const Smc2State& state, const std::vector<Value>& per_party, const Type& ty);

}  // namespace smc2
