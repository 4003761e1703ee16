#pragma once

#include <map>
#include <string>
#include <vector>

#include "smc2/analysis.hpp"
#include "smc2/ast.hpp"
#include "smc2/env.hpp"
#include "smc2/memory.hpp"
#include "smc2/smc2.hpp"
#include "smc2/trace.hpp"
#include "smc2/vanilla.hpp"

namespace smc2 {

// Label-free copy of a type, recursively through function signatures.
Type erase_type(const Type& ty);

// SMC2 source to the unlabeled dialect. The result carries multiparty hints
// on ifs, operators and indexing whose SMC2 counterpart ran on shares.
StmtPtr erase_stmt(const Stmt& s, TypeEnv& env);
Program erase_program(const Program& program);

struct ErasedState {
  Memory mem;
  Env env;
  FunctionTable functions;  // bodies erased, environments remapped
  // SMC2 block id (party 1) to erased block id; dropped blocks are absent.
  std::map<BlockId, BlockId> blocks;
  // Bookkeeping names and blocks that have no unlabeled counterpart.
  std::vector<std::string> dropped_names;
  std::vector<BlockId> dropped_blocks;
};

// Reconstructs every private value and re-encodes memory at public widths.
// Temporaries and blocks allocated on the untaken side of a private if are
// dropped and the remaining blocks renumbered densely. With undo_psi the
// relocations of multi-location pfree are reversed.
ErasedState erase_memory(const Smc2State& state, bool undo_psi = false);

struct Congruence {
  bool ok = true;
  std::string detail;  // first divergence when !ok
};

// Final-state correspondence of an SMC2 run and a run of its erasure.
Congruence psi_congruent(const Smc2State& smc, const VanillaParty& van);

// Erased state against an unlabeled memory and environment.
Congruence same_state(const ErasedState& erased, const Memory& mem, const Env& env);

// Derivation-tree congruence of an SMC2 code list and an unlabeled one.
Congruence code_congruent(const std::vector<Code>& smc, const std::vector<Code>& van);

}  // namespace smc2
