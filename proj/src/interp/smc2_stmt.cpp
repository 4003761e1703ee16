#include "smc2_machine.hpp"

namespace smc2::detail {

namespace {

bool is_loc_type(const Type& t) { return t.is_pointer() || t.is_array(); }

}  // namespace

TypeEnv Machine::static_env(const Env& env) const {
  TypeEnv t;
  const auto& party = state_.parties[0];
  for (const auto& b : env.visible()) {
    if (!b.type.is_function()) {
      t.declare(b.name, b.type);
      continue;
    }
    std::int32_t idx = party.mem.read_val(b.loc.block, b.type).i;
    bool fx = idx >= 0 && static_cast<std::size_t>(idx) < party.functions.size() &&
              party.functions[static_cast<std::size_t>(idx)].side_effects;
    t.declare_function(b.name, b.type, fx);
  }
  return t;
}

void Machine::exec_list(const std::vector<StmtPtr>& stmts) {
  if (stmts.empty()) return;
  std::size_t m = mark();
  exec(*stmts[0]);
  for (std::size_t i = 1; i < stmts.size(); ++i) {
    exec(*stmts[i]);
    emit("ss", m);
  }
}

void Machine::exec(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Decl:
      declare(s);
      return;
    case StmtKind::Assign:
      assign(*s.target, *s.value, mark());
      return;
    case StmtKind::ExprStmt: {
      std::size_t m = mark();
      eval(*s.expr);
      emit("ep", m);
      return;
    }
    case StmtKind::If: {
      std::size_t m = mark();
      Eval g = eval(*s.cond);
      if (g.t.is_private() && g.t.is_scalar()) {
        private_if(s, g, m);
        return;
      }
      bool c = rt::truthy(agreed(g.v));
      auto saved = save_env();
      exec(c ? *s.then_branch : *s.else_branch);
      restore_env(saved);
      emit(c ? "iet" : "ief", m);
      return;
    }
    case StmtKind::While: {
      for (std::uint64_t iter = 0;; ++iter) {
        if (iter >= options_.loop_budget)
          fail(ErrorKind::LoopBudgetExceeded, "loop ran " + std::to_string(options_.loop_budget) + " iterations");
        std::size_t m = mark();
        Eval g = eval(*s.cond);
        if (g.t.is_private()) fail(ErrorKind::PrivateLoopGuard, "while loop guard depends on private data");
        if (!rt::truthy(agreed(g.v))) {
          emit("wle", m);
          return;
        }
        auto saved = save_env();
        exec(*s.body);
        restore_env(saved);
        emit("wlc", m);
      }
    }
    case StmtKind::Block: {
      std::size_t m = mark();
      auto saved = save_env();
      exec_list(s.stmts);
      restore_env(saved);
      emit("sb", m);
      return;
    }
    case StmtKind::FunDef:
    case StmtKind::FunDecl:
      define_function(s);
      return;
  }
}

void Machine::declare(const Stmt& s) {
  std::size_t m = mark();
  const Type& ty = s.type;
  if (ty.is_array()) {
    Eval n = eval(*s.array_size);
    const Value& nv = agreed(n.v);
    if (n.t.is_private() || !nv.is(Value::Kind::Int) || nv.i < 0)
      fail(ErrorKind::SizeMismatch, "array size must be a public non-negative int");
    Type elem = ty.element();
    std::vector<Value> zeros(static_cast<std::size_t>(nv.i), rt::zero_of(elem));
    std::vector<Location> hdr;
    std::vector<Location> data;
    for (auto& p : state_.parties) {
      Location h = p.mem.phi();
      Location d = p.mem.phi();
      p.mem.insert(h.block, make_block(ty, 1, encode_ptr(ty, {{d}, {1}, 1}), Origin::Declaration));
      p.mem.insert(d.block, make_block(elem, zeros.size(), encode_arr(elem, zeros), Origin::Declaration));
      hdr.push_back(h);
      data.push_back(d);
    }
    state_.provenance[hdr[0].block] = BlockInfo{false, path_};
    state_.provenance[data[0].block] = BlockInfo{false, path_};
    bind(s.name, hdr, ty);
    touch(hdr);
    emit(elem.is_private() ? "da1" : "da", m);
    if (s.has_init_list) {
      std::size_t mw = mark();
      if (s.init_list.size() > zeros.size()) fail(ErrorKind::SizeMismatch, "too many initializers for " + s.name);
      bool any_private = false;
      for (std::size_t i = 0; i < s.init_list.size(); ++i) {
        Eval x = eval(*s.init_list[i]);
        any_private = any_private || x.t.is_private();
        auto at = element_at(data, static_cast<std::int64_t>(i), elem);
        store(at, coerce(x, elem), elem, WriteKind::Init);
        touch(at);
      }
      emit(!elem.is_private() ? "wea" : any_private ? "wea1" : "wea2", mw);
      emit("ds", m);
    }
    return;
  }
  auto at = allocate_same(make_block(ty, 1, encode_val(ty, rt::zero_of(ty)), Origin::Declaration));
  bind(s.name, at, ty);
  touch(at);
  if (ty.is_pointer())
    emit(ty.is_private() ? "dp1" : "dp", m);
  else
    emit(ty.is_private() ? "d1" : "dv", m);
  if (s.init) {
    std::size_t mw = mark();
    Eval x = eval(*s.init);
    PV v = coerce(x, ty);
    store(at, v, ty, WriteKind::Init);
    touch(at);
    if (ty.is_pointer())
      emit(ty.is_private() ? "wp1" : "wp", mw);
    else
      emit(!ty.is_private() ? "w" : x.t.is_private() ? "w1" : "w2", mw);
    emit("ds", m);
  }
}

void Machine::assign(const Expr& target, const Expr& value, std::size_t m) {
  switch (target.kind) {
    case ExprKind::Var: {
      Binding b = lookup(target.name);
      if (b.type.is_array() || b.type.is_function()) fail(ErrorKind::TypeError, "cannot assign to " + target.name);
      Eval x = eval(value);
      PV v = coerce(x, b.type);
      store(b.loc, v, b.type, WriteKind::Plain);
      touch(b.loc);
      if (b.type.is_pointer())
        emit(b.type.is_private() ? "wp1" : "wp", m);
      else
        emit(!b.type.is_private() ? "w" : x.t.is_private() ? "w1" : "w2", m);
      return;
    }
    case ExprKind::Index:
      assign_index(target, value, m);
      return;
    case ExprKind::Deref:
      assign_deref(target, value, m);
      return;
    default:
      fail(ErrorKind::TypeError, "not an assignable target");
  }
}

void Machine::assign_index(const Expr& target, const Expr& value, std::size_t m) {
  Binding b = lookup(target.name);
  if (!b.type.is_array()) fail(ErrorKind::TypeError, target.name + " is not an array");
  Type elem = b.type.element();
  Eval idx = eval(*target.args[0]);
  if (!idx.t.is_scalar() || (idx.t.is_private() && idx.t.base != BaseType::Int))
    fail(ErrorKind::TypeError, "array index must be an int");
  Eval x = eval(value);
  PV v = coerce(x, elem);
  std::vector<Location> data = data_of(b);
  if (idx.t.is_private()) {
    if (!elem.is_private()) fail(ErrorKind::ObliviousFault, "write to public array " + target.name + " at a private index");
    std::size_t n = state_.parties[0].mem.block(data[0].block).count;
    std::vector<mpc::Shares> elems;
    for (std::size_t i = 0; i < n; ++i) {
      PV col;
      for (std::size_t k = 0; k < data.size(); ++k) col.push_back(state_.parties[k].mem.read_arr(data[k].block, i, elem));
      elems.push_back(shares_of(col, elem));
    }
    auto next = engine_.aw(shares_of(idx.v, idx.t), elems, shares_of(v, elem));
    for (std::size_t i = 0; i < n; ++i) {
      auto at = element_at(data, static_cast<std::int64_t>(i), elem);
      store(at, values_of(next[i], elem.base), elem, WriteKind::Plain);
      touch(at);
    }
    emit("mpwa", m);
    return;
  }
  const Value& iv = agreed(idx.v);
  if (!iv.is(Value::Kind::Int)) fail(ErrorKind::TypeError, "array index must be an int");
  auto at = element_at(data, iv.i, elem);
  bool inside = in_bounds(data, iv.i);
  store(at, v, elem, WriteKind::Tracked);
  if (inside) {
    touch(at);
  } else {
    std::vector<Location> norm;
    for (std::size_t k = 0; k < at.size(); ++k) {
      Location l;
      norm.push_back(state_.parties[k].mem.normalize(at[k], l) ? l : at[k]);
    }
    touch(norm);
  }
  std::string code = inside ? "wa" : "wao";
  if (elem.is_private()) code += x.t.is_private() ? "1" : "2";
  emit(code.c_str(), m);
}

void Machine::assign_deref(const Expr& target, const Expr& value, std::size_t m) {
  Eval p = eval(*target.args[0]);
  if (!is_loc_type(p.t)) fail(ErrorKind::TypeError, "dereference of a non-pointer");
  Type pointee = p.t.element();
  Eval x = eval(value);
  PV v = coerce(x, pointee);
  const Value& p0 = p.v[0];
  std::size_t alpha = p0.is(Value::Kind::Ptr) ? p0.ptr.alpha() : 1;
  auto location = [&](std::size_t j) {
    std::vector<Location> out;
    for (const auto& q : p.v) out.push_back(q.is(Value::Kind::Ptr) ? q.ptr.locs.at(j) : q.loc);
    return out;
  };
  if (alpha == 1) {
    auto at = location(0);
    store(at, v, pointee, WriteKind::Tracked);
    touch(at);
    if (is_loc_type(pointee))
      emit(pointee.is_private() ? "wdp2" : "wdp1", m);
    else
      emit(!pointee.is_private() ? "wdp" : x.t.is_private() ? "wdp3" : "wdp4", m);
    return;
  }
  write_multi(p.v, v, pointee);
  for (std::size_t j = 0; j < alpha; ++j) touch(location(j));
  if (is_loc_type(pointee))
    emit("mpwdp2", m);
  else
    emit(x.t.is_private() ? "mpwdp" : "mpwdp3", m);
}

bool Machine::function_side_effects(const Stmt& s) const {
  TypeEnv env = static_env(state_.parties[0].env);
  env.declare_function(s.name, s.type, false);
  for (const auto& prm : s.params) env.declare(prm.name, prm.type);
  return has_public_side_effects(*s.body, env);
}

void Machine::define_function(const Stmt& s) {
  std::size_t m = mark();
  const Env::Binding* prior = state_.parties[0].env.find(s.name);
  bool reuse = prior && prior->type.is_function();
  std::int32_t idx = -1;
  if (s.kind == StmtKind::FunDef) idx = static_cast<std::int32_t>(state_.parties[0].functions.size());
  std::vector<Location> at;
  if (reuse) {
    for (auto& p : state_.parties) {
      Location l = p.env.lookup(s.name).loc;
      if (s.kind == StmtKind::FunDef) p.mem.update_val(l.block, Value::of_int(idx), s.type);
      at.push_back(l);
    }
  } else {
    at = allocate_same(make_block(s.type, 1, encode_val(s.type, Value::of_int(idx)), Origin::Function));
    bind(s.name, at, s.type);
  }
  touch(at);
  if (s.kind == StmtKind::FunDef) {
    bool fx = function_side_effects(s);
    auto def = std::make_shared<Stmt>(s);
    for (auto& p : state_.parties) p.functions.push_back(FunctionDef{def, p.env, fx});
  }
  emit(s.kind == StmtKind::FunDef ? "fd" : "fpd", m);
}

}  // namespace smc2::detail
