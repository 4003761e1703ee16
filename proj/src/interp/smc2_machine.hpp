#pragma once

#include <set>
#include <string>
#include <vector>

#include "smc2/analysis.hpp"
#include "smc2/error.hpp"
#include "smc2/smc2.hpp"

namespace smc2::detail {

// One value per party, index k holding party k+1's view.
using PV = std::vector<Value>;

struct Eval {
  PV v;
  Type t;
};

// Storage of a whole variable: a scalar or pointer block, or an array's data block.
struct Slot {
  enum class Kind { Scalar, Pointer, Array };
  Kind kind = Kind::Scalar;
  std::vector<Location> at;
  Type ty;  // element type for arrays
  std::size_t count = 1;
};

// A variable the branch bookkeeping must save and resolve.
struct Tracked {
  std::string name;
  std::vector<Location> at;  // binding location per party
  Type type;
};

// Location-tracking entry: original and then-branch contents of one location.
struct Delta {
  std::vector<Location> at;
  Type ty;
  bool whole_ptr = false;
  PV orig;
  PV then;
  bool tagged = false;
};

enum class WriteKind { Plain, Tracked, Init };

class Machine {
 public:
  Machine(const RunOptions& options, const InputSet& inputs);

  void run(const Program& program);
  Smc2State take() { return std::move(state_); }

 private:
  friend class Extractor;

  // Trace bookkeeping.
  int parties() const { return static_cast<int>(state_.parties.size()); }
  std::size_t mark() const { return state_.parties[0].trace.d.size(); }
  void emit(const char* name, std::size_t m);
  void touch(const std::vector<Location>& at);

  struct Binding {
    std::vector<Location> loc;
    Type type;
  };
  Binding lookup(const std::string& name) const;
  std::vector<Location> allocate(const std::vector<MemoryBlock>& blocks, bool temp = false);
  std::vector<Location> allocate_same(const MemoryBlock& block, bool temp = false);
  void bind(const std::string& name, const std::vector<Location>& at, const Type& ty);
  std::vector<Env> save_env() const;
  void restore_env(const std::vector<Env>& envs);

  // Share plumbing.
  const Value& agreed(const PV& v) const;
  mpc::Shares shares_of(const PV& v, const Type& t) const;
  mpc::Typed typed_of(const PV& v, const Type& t) const;
  static PV values_of(const mpc::Shares& s, BaseType base);
  PV share_public(const Value& v, BaseType base);
  mpc::Shares tag_shares(const PV& ptrs, std::size_t k) const;

  // Memory access.
  PV load(const std::vector<Location>& at, const Type& ty);
  void raw_store(Smc2Party& p, Location at, const Value& v, const Type& ty);
  void store(const std::vector<Location>& at, PV v, const Type& ty, WriteKind kind);
  bool whole_ptr(Location at, const Type& ty) const;
  PV load_raw(const std::vector<Location>& at, const Type& ty, bool whole);
  void store_raw(const std::vector<Location>& at, const PV& v, const Type& ty, bool whole);
  Slot slot_of(const Tracked& x) const;
  PV read_slot(const Slot& s) const;
  void write_slot(const Slot& s, const PV& v);
  std::vector<Location> data_of(const Binding& b);
  std::vector<Location> element_at(const std::vector<Location>& data, std::int64_t index, const Type& elem) const;
  bool in_bounds(const std::vector<Location>& data, std::int64_t index) const;
  void check_aligned(const std::vector<Location>& at, const Type& ty);

  PV coerce(const Eval& x, const Type& ty);
  PV resolve(const mpc::Shares& res, const PV& a, const PV& b, const Type& ty);
  PV resolve_pointer(const mpc::Shares& res, const PV& a, const PV& b, int depth);
  void require_public_context(const char* what) const;

  // Expressions.
  Eval eval(const Expr& e);
  Eval eval_var(const Expr& e, std::size_t m);
  Eval eval_index(const Expr& e, std::size_t m);
  Eval eval_deref(const Expr& e, std::size_t m);
  Eval eval_binary(const Expr& e, std::size_t m);
  Eval eval_cast(const Expr& e, std::size_t m);
  Eval pre_increment(const Expr& target, std::size_t m);
  Eval eval_free(const Expr& e, std::size_t m);
  void multiparty_free(const Eval& p);
  void call(const Expr& e, std::size_t m);
  void io(const Expr& e, std::size_t m);
  Eval declassify(const Expr& e);
  // Pointer dereference, read all candidate locations and pick the true one.
  PV deref_multi(const PV& ptrs, const Type& pointee);
  // Writes v through every candidate location, weighted by the tags.
  void write_multi(const PV& ptrs, const PV& v, const Type& pointee);

  // Statements.
  void exec_list(const std::vector<StmtPtr>& stmts);
  void exec(const Stmt& s);
  void declare(const Stmt& s);
  void assign(const Expr& target, const Expr& value, std::size_t m);
  void assign_index(const Expr& target, const Expr& value, std::size_t m);
  void assign_deref(const Expr& target, const Expr& value, std::size_t m);
  void define_function(const Stmt& s);
  bool function_side_effects(const Stmt& s) const;
  // Static view of a party's environment, with function side-effect flags.
  TypeEnv static_env(const Env& env) const;

  // Private branches.
  void private_if(const Stmt& s, const Eval& guard, std::size_t m);
  void variable_tracking(const Stmt& s, const mpc::Shares& res, const std::vector<Tracked>& mods);
  void location_tracking(const Stmt& s, const mpc::Shares& res, const std::vector<Tracked>& mods);
  void legacy_branches(const Stmt& s, const mpc::Shares& res);
  void run_branch(const Stmt& branch);
  void dynamic_update(const std::vector<Location>& at, const Type& ty);
  void insert_delta(std::vector<Delta>& level, const std::vector<Location>& at, const Type& ty);
  void fire(BranchEvent::Phase phase, const Stmt& s, std::uint32_t instance);

  RunOptions options_;
  InputSet inputs_;
  mpc::Engine engine_;
  Smc2State state_;
  std::uint32_t acc_ = 0;
  std::vector<std::vector<Delta>> delta_;
  std::vector<mpc::Shares> cond_;  // legacy mode: effective condition per nesting level
  std::vector<std::pair<std::uint32_t, bool>> path_;
  int depth_ = 0;
};

// Scans both branches of a private if for the variables they modify.
class Extractor {
 public:
  Extractor(Machine& m, std::vector<Env> envs, std::set<std::int32_t>& visited);

  void stmt(const Stmt& s);
  void expr(const Expr& e);

  void merge(Extractor& inner);

  std::vector<Tracked> mods;
  bool location = false;  // a dereference write or public-index array write occurs

 private:
  bool local(const std::string& name) const;
  void add(const std::string& name);

  Machine& m_;
  std::vector<Env> envs_;
  TypeEnv tenv_;
  std::vector<std::set<std::string>> locals_;
  std::set<std::int32_t>& visited_;
};

}  // namespace smc2::detail
