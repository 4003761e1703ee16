#include <algorithm>

#include "smc2_machine.hpp"

namespace smc2::detail {

namespace {

const Type kPrivInt = Type::scalar(Label::Private, BaseType::Int);

bool holds_private(const Type& t) { return t.is_array() ? t.element().is_private() : t.is_private(); }

}  // namespace

Extractor::Extractor(Machine& m, std::vector<Env> envs, std::set<std::int32_t>& visited)
    : m_(m), envs_(std::move(envs)), tenv_(m.static_env(envs_[0])), locals_(1), visited_(visited) {}

bool Extractor::local(const std::string& name) const {
  return std::any_of(locals_.begin(), locals_.end(), [&](const auto& s) { return s.count(name) != 0; });
}

void Extractor::add(const std::string& name) {
  if (local(name)) return;
  Tracked t;
  t.name = name;
  for (const auto& env : envs_) {
    const Env::Binding* b = env.find(name);
    if (!b) return;
    t.at.push_back(b->loc);
    t.type = b->type;
  }
  for (const auto& x : mods)
    if (x.at[0] == t.at[0]) return;
  mods.push_back(std::move(t));
}

void Extractor::merge(Extractor& inner) {
  for (auto& t : inner.mods) {
    bool seen = std::any_of(mods.begin(), mods.end(), [&](const Tracked& x) { return x.at[0] == t.at[0]; });
    if (!seen) mods.push_back(std::move(t));
  }
  location = location || inner.location;
}

void Extractor::stmt(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Decl:
      if (s.array_size) expr(*s.array_size);
      if (s.init) expr(*s.init);
      for (const auto& e : s.init_list) expr(*e);
      locals_.back().insert(s.name);
      tenv_.declare(s.name, s.type);
      return;
    case StmtKind::Assign: {
      expr(*s.value);
      const Expr& t = *s.target;
      if (t.kind == ExprKind::Var) {
        add(t.name);
      } else if (t.kind == ExprKind::Index) {
        expr(*t.args[0]);
        if (label_of(*t.args[0], tenv_) == Label::Private)
          add(t.name);
        else if (!local(t.name))
          location = true;
      } else {
        for (const auto& a : t.args) expr(*a);
        location = true;
      }
      return;
    }
    case StmtKind::ExprStmt:
      expr(*s.expr);
      return;
    case StmtKind::If:
    case StmtKind::While: {
      expr(*s.cond);
      for (const Stmt* b : {s.then_branch.get(), s.else_branch.get(), s.body.get()}) {
        if (!b) continue;
        ScopeGuard g(tenv_);
        locals_.emplace_back();
        stmt(*b);
        locals_.pop_back();
      }
      return;
    }
    case StmtKind::Block: {
      ScopeGuard g(tenv_);
      locals_.emplace_back();
      for (const auto& x : s.stmts) stmt(*x);
      locals_.pop_back();
      return;
    }
    case StmtKind::FunDef:
    case StmtKind::FunDecl:
      // Bodies of functions defined here are scanned at their call sites.
      locals_.back().insert(s.name);
      tenv_.declare_function(s.name, s.type, false);
      return;
  }
}

void Extractor::expr(const Expr& e) {
  switch (e.kind) {
    case ExprKind::PreInc:
      if (e.args[0]->kind == ExprKind::Var) {
        add(e.args[0]->name);
      } else {
        location = true;
        for (const auto& a : e.args[0]->args) expr(*a);
      }
      return;
    case ExprKind::Input:
      add(e.args[0]->name);
      break;
    case ExprKind::Call: {
      if (local(e.name)) break;
      const Env::Binding* b = envs_[0].find(e.name);
      if (!b || !b->type.is_function()) break;
      const auto& p0 = m_.state_.parties[0];
      std::int32_t idx = p0.mem.read_val(b->loc.block, b->type).i;
      if (idx < 0 || static_cast<std::size_t>(idx) >= p0.functions.size()) break;
      if (!visited_.insert(idx).second) break;
      std::vector<Env> envs;
      for (const auto& p : m_.state_.parties) envs.push_back(p.functions[static_cast<std::size_t>(idx)].env);
      const Stmt& def = *p0.functions[static_cast<std::size_t>(idx)].def;
      Extractor inner(m_, std::move(envs), visited_);
      for (const auto& prm : def.params) {
        inner.locals_.back().insert(prm.name);
        inner.tenv_.declare(prm.name, prm.type);
      }
      inner.stmt(*def.body);
      merge(inner);
      break;
    }
    default:
      break;
  }
  for (const auto& a : e.args) expr(*a);
}

void Machine::private_if(const Stmt& s, const Eval& guard, std::size_t m) {
  const Expr& c = *s.cond;
  mpc::Shares res;
  if (c.kind == ExprKind::Binary && is_comparison(c.op))
    res = shares_of(guard.v, guard.t);
  else
    res = engine_.cmp(BinOp::Ne, shares_of(guard.v, guard.t), engine_.constant(0));
  auto instance = static_cast<std::uint32_t>(state_.taken.size());
  state_.taken.push_back(reconstruct_value(state_, values_of(res, BaseType::Int)) != 0);

  std::set<std::int32_t> visited;
  Extractor ex(*this, save_env(), visited);
  for (const Stmt* b : {s.then_branch.get(), s.else_branch.get()}) {
    Extractor side(*this, save_env(), visited);
    side.stmt(*b);
    ex.merge(side);
  }
  std::vector<Tracked> mods;
  for (auto& t : ex.mods)
    if (holds_private(t.type)) mods.push_back(std::move(t));

  bool use_lt = false;
  if (!options_.legacy) {
    switch (options_.tracking) {
      case Tracking::Auto: use_lt = ex.location; break;
      case Tracking::Variable:
        if (ex.location)
          fail(ErrorKind::UnsupportedConstruct,
               "variable tracking cannot handle writes through pointers or array indices");
        break;
      case Tracking::Location: use_lt = true; break;
    }
  }

  fire(BranchEvent::Phase::Before, s, instance);
  ++acc_;
  path_.emplace_back(instance, true);
  if (options_.legacy)
    legacy_branches(s, res);
  else if (use_lt)
    location_tracking(s, res, mods);
  else
    variable_tracking(s, res, mods);
  path_.pop_back();
  --acc_;
  fire(BranchEvent::Phase::After, s, instance);
  emit(use_lt ? "iepd" : "iep", m);
}

void Machine::run_branch(const Stmt& branch) {
  auto saved = save_env();
  exec(branch);
  restore_env(saved);
}

void Machine::variable_tracking(const Stmt& s, const mpc::Shares& res, const std::vector<Tracked>& mods) {
  auto outer = save_env();
  std::string suffix = "_" + std::to_string(acc_);

  auto copy_of = [&](const Slot& slot, const PV& v) {
    std::vector<MemoryBlock> blocks;
    for (const auto& x : v) {
      if (slot.kind == Slot::Kind::Array)
        blocks.push_back(make_block(slot.ty, slot.count, encode_arr(slot.ty, x.elems), Origin::Declaration));
      else if (slot.kind == Slot::Kind::Pointer)
        blocks.push_back(make_block(slot.ty, x.ptr.alpha(), encode_ptr(slot.ty, x.ptr), Origin::Declaration));
      else
        blocks.push_back(make_block(slot.ty, 1, encode_val(slot.ty, x), Origin::Declaration));
    }
    return blocks;
  };
  auto temp_slot = [](Slot slot, std::vector<Location> at) {
    slot.at = std::move(at);
    return slot;
  };

  std::vector<MemoryBlock> res_blocks;
  for (auto x : res) {
    auto bytes = encode_val(kPrivInt, Value::of_share(x, BaseType::Int));
    res_blocks.push_back(make_block(kPrivInt, 1, std::move(bytes), Origin::Declaration));
  }
  auto res_at = allocate(res_blocks, true);
  bind("$res" + suffix, res_at, kPrivInt);
  touch(res_at);

  std::vector<Slot> slots;
  std::vector<Slot> then_temps;
  std::vector<Slot> else_temps;
  for (const auto& x : mods) {
    Slot slot = slot_of(x);
    PV cur = read_slot(slot);
    auto t_at = allocate(copy_of(slot, cur), true);
    auto e_at = allocate(copy_of(slot, cur), true);
    Type bound = slot.kind == Slot::Kind::Array ? slot.ty : x.type;
    bind("$" + x.name + "_then" + suffix, t_at, bound);
    bind("$" + x.name + "_else" + suffix, e_at, bound);
    touch(t_at);
    touch(e_at);
    slots.push_back(slot);
    then_temps.push_back(temp_slot(slot, t_at));
    else_temps.push_back(temp_slot(slot, e_at));
  }

  run_branch(*s.then_branch);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    write_slot(then_temps[i], read_slot(slots[i]));
    write_slot(slots[i], read_slot(else_temps[i]));
  }
  path_.back().second = false;
  run_branch(*s.else_branch);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    Type ty = slots[i].kind == Slot::Kind::Array ? Type::array(slots[i].ty.label, slots[i].ty.base) : slots[i].ty;
    write_slot(slots[i], resolve(res, read_slot(then_temps[i]), read_slot(slots[i]), ty));
  }
  restore_env(outer);
}

void Machine::insert_delta(std::vector<Delta>& level, const std::vector<Location>& at, const Type& ty) {
  for (const auto& d : level)
    if (d.at[0] == at[0]) return;
  Delta d;
  d.at = at;
  d.ty = ty;
  d.whole_ptr = whole_ptr(at[0], ty);
  d.orig = load_raw(at, ty, d.whole_ptr);
  level.push_back(std::move(d));
}

void Machine::dynamic_update(const std::vector<Location>& at, const Type& ty) {
  for (auto& level : delta_) insert_delta(level, at, ty);
}

void Machine::location_tracking(const Stmt& s, const mpc::Shares& res, const std::vector<Tracked>& mods) {
  delta_.emplace_back();
  for (const auto& x : mods) {
    Slot slot = slot_of(x);
    if (slot.kind == Slot::Kind::Array) {
      for (std::size_t i = 0; i < slot.count; ++i)
        insert_delta(delta_.back(), element_at(slot.at, static_cast<std::int64_t>(i), slot.ty), slot.ty);
    } else {
      insert_delta(delta_.back(), slot.at, slot.ty);
    }
  }

  run_branch(*s.then_branch);
  for (auto& d : delta_.back()) {
    d.then = load_raw(d.at, d.ty, d.whole_ptr);
    d.tagged = true;
    store_raw(d.at, d.orig, d.ty, d.whole_ptr);
  }
  path_.back().second = false;
  run_branch(*s.else_branch);
  // Entries first seen in the else branch were untouched by the then branch.
  std::vector<Delta> level = std::move(delta_.back());
  delta_.pop_back();
  for (auto& d : level) {
    PV cur = load_raw(d.at, d.ty, d.whole_ptr);
    store_raw(d.at, resolve(res, d.tagged ? d.then : d.orig, cur, d.ty), d.ty, d.whole_ptr);
  }
}

void Machine::legacy_branches(const Stmt& s, const mpc::Shares& res) {
  mpc::Shares then_cond = cond_.empty() ? res : engine_.mult(cond_.back(), res);
  mpc::Shares else_cond = engine_.sub(cond_.empty() ? engine_.constant(1) : cond_.back(), then_cond);
  cond_.push_back(then_cond);
  run_branch(*s.then_branch);
  cond_.back() = else_cond;
  path_.back().second = false;
  run_branch(*s.else_branch);
  cond_.pop_back();
}

}  // namespace smc2::detail
