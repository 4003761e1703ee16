#include <algorithm>

#include "smc2_machine.hpp"

namespace smc2::detail {

namespace {

bool is_loc_type(const Type& t) { return t.is_pointer() || t.is_array(); }

PointerData as_ptr(const Value& v) {
  if (v.is(Value::Kind::Loc)) return PointerData{{v.loc}, {1}, 1};
  if (!v.is(Value::Kind::Ptr)) fail(ErrorKind::TypeError, "not a pointer: " + to_string(v));
  return v.ptr;
}

std::size_t alpha_of(const PV& ptrs) { return as_ptr(ptrs[0]).alpha(); }

std::vector<Location> location(const PV& ptrs, std::size_t m) {
  std::vector<Location> out;
  for (const auto& p : ptrs) out.push_back(as_ptr(p).locs.at(m));
  return out;
}

const char* public_code(BinOp op, const Value& r) {
  bool t = r.i != 0;
  switch (op) {
    case BinOp::Add: return "bp";
    case BinOp::Sub: return "bs";
    case BinOp::Mul: return "bm";
    case BinOp::Div: return "bd";
    case BinOp::Lt: return t ? "ltt" : "ltf";
    case BinOp::Eq: return t ? "eqt" : "eqf";
    case BinOp::Ne: return t ? "net" : "nef";
  }
  return "bp";
}

const Type kPubInt = Type::scalar(Label::Public, BaseType::Int);
const Type kVoid = Type::scalar(Label::Public, BaseType::Void);

}  // namespace

Eval Machine::eval(const Expr& e) {
  std::size_t m = mark();
  auto same = [&](const Value& v) { return PV(state_.parties.size(), v); };
  switch (e.kind) {
    case ExprKind::IntLit:
      return {same(Value::of_int(static_cast<std::int32_t>(e.int_value))), kPubInt};
    case ExprKind::FloatLit:
      return {same(Value::of_float(static_cast<float>(e.float_value))), Type::scalar(Label::Public, BaseType::Float)};
    case ExprKind::Null:
      return {same(Value::of_loc({0, 0})), Type::pointer(Label::Public, BaseType::Void, 1)};
    case ExprKind::Var:
      return eval_var(e, m);
    case ExprKind::Index:
      return eval_index(e, m);
    case ExprKind::AddrOf: {
      Binding b = lookup(e.name);
      PV out;
      for (const auto& l : b.loc) out.push_back(Value::of_loc(l));
      emit("loc", m);
      Type t = b.type.is_pointer() ? Type::pointer(b.type.label, b.type.base, b.type.depth + 1)
                                   : Type::pointer(b.type.label, b.type.base, 1);
      return {out, t};
    }
    case ExprKind::Deref:
      return eval_deref(e, m);
    case ExprKind::PreInc:
      return pre_increment(*e.args[0], m);
    case ExprKind::Binary:
      return eval_binary(e, m);
    case ExprKind::Cast:
      return eval_cast(e, m);
    case ExprKind::Call:
      call(e, m);
      return {same(Value::none()), kVoid};
    case ExprKind::Malloc:
    case ExprKind::PMalloc: {
      bool priv = e.kind == ExprKind::PMalloc;
      require_public_context(priv ? "pmalloc" : "malloc");
      Eval n = eval(*e.args[0]);
      const Value& nv = agreed(n.v);
      if (n.t.is_private() || !nv.is(Value::Kind::Int) || nv.i < 0)
        fail(ErrorKind::SizeMismatch, "allocation size must be a public non-negative int");
      auto count = static_cast<std::size_t>(nv.i);
      if (!priv) {
        auto at = allocate_same(make_block(kVoid, count, Bytes(count, 0), Origin::Heap));
        touch(at);
        emit("mal", m);
        PV out;
        for (const auto& l : at) out.push_back(Value::of_loc(l));
        return {out, Type::pointer(Label::Public, BaseType::Void, 1)};
      }
      const Type& ty = e.type;
      auto at = allocate_same(make_block(ty, count, Bytes(count * size_of(ty), 0), Origin::Heap));
      touch(at);
      emit("malp", m);
      PV out;
      for (const auto& l : at) out.push_back(Value::of_loc(l));
      Type t = ty.is_pointer() ? Type::pointer(ty.label, ty.base, ty.depth + 1) : Type::pointer(ty.label, ty.base, 1);
      return {out, t};
    }
    case ExprKind::Sizeof:
      emit("ty", m);
      return {same(Value::of_int(static_cast<std::int32_t>(size_of(e.type)))), kPubInt};
    case ExprKind::Free:
    case ExprKind::PFree:
      return eval_free(e, m);
    case ExprKind::Input:
    case ExprKind::Output:
      io(e, m);
      return {same(Value::none()), kVoid};
    case ExprKind::Declassify:
      return declassify(e);
  }
  fail(ErrorKind::TypeError, "unknown expression");
}

Eval Machine::eval_var(const Expr& e, std::size_t m) {
  Binding b = lookup(e.name);
  touch(b.loc);
  PV out;
  if (b.type.is_array()) {
    for (std::size_t k = 0; k < b.loc.size(); ++k)
      out.push_back(Value::of_loc(state_.parties[k].mem.read_ptr(b.loc[k].block, b.type).locs[0]));
    emit("rea", m);
    return {out, b.type};
  }
  if (b.type.is_function()) fail(ErrorKind::TypeError, "function " + e.name + " used as a value");
  for (std::size_t k = 0; k < b.loc.size(); ++k) out.push_back(state_.parties[k].mem.read_val(b.loc[k].block, b.type));
  if (b.type.is_pointer())
    emit(b.type.is_private() ? "rp1" : "rp", m);
  else
    emit(b.type.is_private() ? "r1" : "r", m);
  return {out, b.type};
}

Eval Machine::eval_index(const Expr& e, std::size_t m) {
  Binding b = lookup(e.name);
  if (!b.type.is_array()) fail(ErrorKind::TypeError, e.name + " is not an array");
  Eval idx = eval(*e.args[0]);
  if (!idx.t.is_scalar() || (idx.t.is_private() && idx.t.base != BaseType::Int))
    fail(ErrorKind::TypeError, "array index must be an int");
  Type elem = b.type.element();
  std::vector<Location> data = data_of(b);
  if (idx.t.is_private()) {
    std::size_t n = state_.parties[0].mem.block(data[0].block).count;
    std::vector<mpc::Shares> elems;
    for (std::size_t i = 0; i < n; ++i) {
      PV col;
      for (std::size_t k = 0; k < data.size(); ++k) col.push_back(state_.parties[k].mem.read_arr(data[k].block, i, elem));
      elems.push_back(shares_of(col, elem));
      touch(element_at(data, static_cast<std::int64_t>(i), elem));
    }
    PV out = values_of(engine_.ar(shares_of(idx.v, idx.t), elems), elem.base);
    emit("mpra", m);
    return {out, Type::scalar(Label::Private, elem.base)};
  }
  const Value& iv = agreed(idx.v);
  if (!iv.is(Value::Kind::Int)) fail(ErrorKind::TypeError, "array index must be an int");
  auto at = element_at(data, iv.i, elem);
  PV out;
  if (in_bounds(data, iv.i)) {
    for (std::size_t k = 0; k < data.size(); ++k)
      out.push_back(state_.parties[k].mem.read_arr(data[k].block, static_cast<std::size_t>(iv.i), elem));
    touch(at);
    emit(elem.is_private() ? "ra1" : "ra", m);
    return {out, elem};
  }
  check_aligned(at, elem);
  std::vector<Location> norm;
  for (std::size_t k = 0; k < data.size(); ++k) {
    out.push_back(state_.parties[k].mem.read_oob(at[k], elem));
    Location n;
    norm.push_back(state_.parties[k].mem.normalize(at[k], n) ? n : at[k]);
  }
  touch(norm);
  emit(elem.is_private() ? "rao1" : "rao", m);
  return {out, elem};
}

PV Machine::deref_multi(const PV& ptrs, const Type& pointee) {
  std::size_t alpha = alpha_of(ptrs);
  std::vector<mpc::Shares> tags;
  for (std::size_t j = 0; j < alpha; ++j) tags.push_back(tag_shares(ptrs, j));
  if (!is_loc_type(pointee)) {
    std::vector<mpc::Shares> values;
    for (std::size_t j = 0; j < alpha; ++j) values.push_back(shares_of(load(location(ptrs, j), pointee), pointee));
    return values_of(engine_.dv(values, tags), pointee.base);
  }
  // Pointer to pointer: tag of each candidate target = sum over the pointer's
  // candidates of (tag of that candidate) * (its tag for the target).
  std::vector<PV> targets;
  for (std::size_t j = 0; j < alpha; ++j) targets.push_back(load(location(ptrs, j), pointee));
  PV out;
  std::vector<std::vector<Location>> locs(ptrs.size());
  for (std::size_t k = 0; k < ptrs.size(); ++k)
    for (const auto& t : targets)
      for (const auto& l : as_ptr(t[k]).locs)
        if (std::find(locs[k].begin(), locs[k].end(), l) == locs[k].end()) locs[k].push_back(l);
  std::vector<mpc::Shares> combined;
  for (std::size_t u = 0; u < locs[0].size(); ++u) {
    std::vector<mpc::Shares> weights;
    for (std::size_t j = 0; j < alpha; ++j) {
      mpc::Shares w;
      for (std::size_t k = 0; k < ptrs.size(); ++k) {
        PointerData t = as_ptr(targets[j][k]);
        auto it = std::find(t.locs.begin(), t.locs.end(), locs[k][u]);
        w.push_back(it == t.locs.end() ? 0 : t.tags[static_cast<std::size_t>(it - t.locs.begin())]);
      }
      weights.push_back(std::move(w));
    }
    combined.push_back(engine_.dv(weights, tags));
  }
  for (std::size_t k = 0; k < ptrs.size(); ++k) {
    PointerData p;
    p.locs = locs[k];
    p.depth = std::max(pointee.depth, 1);
    for (const auto& c : combined) p.tags.push_back(c[k]);
    out.push_back(Value::of_ptr(std::move(p)));
  }
  return out;
}

void Machine::write_multi(const PV& ptrs, const PV& v, const Type& pointee) {
  std::size_t alpha = alpha_of(ptrs);
  for (std::size_t j = 0; j < alpha; ++j) {
    auto at = location(ptrs, j);
    if (acc_ > 0 && !options_.legacy) dynamic_update(at, pointee);
    PV old = load(at, pointee);
    PV next = resolve(tag_shares(ptrs, j), v, old, pointee);
    store(at, next, pointee, WriteKind::Plain);
  }
}

Eval Machine::eval_deref(const Expr& e, std::size_t m) {
  Eval p = eval(*e.args[0]);
  if (!is_loc_type(p.t)) fail(ErrorKind::TypeError, "dereference of a non-pointer");
  Type pointee = p.t.element();
  if (pointee.is_scalar() && pointee.base == BaseType::Void) fail(ErrorKind::TypeError, "dereference of a void pointer");
  std::size_t alpha = alpha_of(p.v);
  if (alpha == 1) {
    auto at = location(p.v, 0);
    PV v = load(at, pointee);
    touch(at);
    emit(is_loc_type(pointee) ? "rdp1" : "rdp", m);
    return {v, pointee};
  }
  PV v = deref_multi(p.v, pointee);
  for (std::size_t j = 0; j < alpha; ++j) touch(location(p.v, j));
  emit(is_loc_type(pointee) ? "mprdp1" : "mprdp", m);
  return {v, pointee};
}

Eval Machine::eval_binary(const Expr& e, std::size_t m) {
  Eval a = eval(*e.args[0]);
  Eval b = eval(*e.args[1]);
  if (!a.t.is_scalar() || !b.t.is_scalar() || a.t.base == BaseType::Void || b.t.base == BaseType::Void)
    fail(ErrorKind::TypeError, "arithmetic on non-scalars");
  if (!a.t.is_private() && !b.t.is_private()) {
    PV out;
    for (std::size_t k = 0; k < a.v.size(); ++k) out.push_back(rt::public_binop(e.op, a.v[k], b.v[k]));
    emit(public_code(e.op, out[0]), m);
    BaseType base = out[0].is(Value::Kind::Float) ? BaseType::Float : BaseType::Int;
    return {out, Type::scalar(Label::Public, base)};
  }
  mpc::Typed r = engine_.binop(e.op, typed_of(a.v, a.t), typed_of(b.v, b.t));
  emit(is_comparison(e.op) ? "mpcmp" : "mpb", m);
  return {values_of(r.shares, r.base), Type::scalar(Label::Private, r.base)};
}

Eval Machine::eval_cast(const Expr& e, std::size_t m) {
  Eval x = eval(*e.args[0]);
  const Type& to = e.type;
  if (to.label != x.t.label && !(to.base == BaseType::Void && !is_loc_type(to)))
    fail(ErrorKind::TypeError, "cast from " + to_string(x.t) + " to " + to_string(to) + " changes the privacy label");
  PV out;
  if (to.is_scalar()) {
    if (!x.t.is_scalar()) fail(ErrorKind::TypeError, "cast of a pointer to a scalar");
    if (to.is_private()) {
      out = values_of(engine_.convert(typed_of(x.v, x.t), to.base).shares, to.base);
    } else {
      for (const auto& v : x.v) out.push_back(rt::convert_public(v, to.base));
    }
  } else {
    out = x.v;
  }
  emit(to.is_private() ? "cv1" : "cv", m);
  return {out, to};
}

Eval Machine::pre_increment(const Expr& target, std::size_t m) {
  auto bump = [&](const PV& v, const Type& ty) -> PV {
    if (!ty.is_private()) {
      PV out;
      for (const auto& x : v)
        out.push_back(rt::convert_public(rt::public_binop(BinOp::Add, x, Value::of_int(1)), ty.base));
      return out;
    }
    mpc::Typed r = engine_.binop(BinOp::Add, typed_of(v, ty), {engine_.constant(1), BaseType::Int});
    if (r.base != ty.base) r = engine_.convert(r, ty.base);
    return values_of(r.shares, ty.base);
  };
  if (target.kind == ExprKind::Var) {
    Binding b = lookup(target.name);
    touch(b.loc);
    if (b.type.is_pointer()) {
      auto stride = static_cast<std::int64_t>(size_of(b.type.element()));
      PV out;
      for (std::size_t k = 0; k < b.loc.size(); ++k) {
        Memory& mem = state_.parties[k].mem;
        PointerData p = mem.read_ptr(b.loc[k].block, b.type);
        for (auto& l : p.locs) l = mem.get_location(l, stride).first;
        out.push_back(Value::of_ptr(std::move(p)));
      }
      std::size_t alpha = out[0].ptr.alpha();
      store(b.loc, out, b.type, WriteKind::Plain);
      emit(!b.type.is_private() ? "pin1" : alpha == 1 ? "pin4" : "mppin", m);
      return {out, b.type};
    }
    if (!b.type.is_scalar()) fail(ErrorKind::TypeError, "cannot increment " + target.name);
    PV cur;
    for (std::size_t k = 0; k < b.loc.size(); ++k) cur.push_back(state_.parties[k].mem.read_val(b.loc[k].block, b.type));
    PV next = bump(cur, b.type);
    store(b.loc, next, b.type, WriteKind::Plain);
    emit(b.type.is_private() ? "pin3" : "pin", m);
    return {next, b.type};
  }
  if (target.kind != ExprKind::Deref) fail(ErrorKind::TypeError, "cannot increment this expression");
  Eval p = eval(*target.args[0]);
  if (!p.t.is_pointer()) fail(ErrorKind::TypeError, "dereference of a non-pointer");
  Type pointee = p.t.element();
  if (!pointee.is_scalar() || pointee.base == BaseType::Void)
    fail(ErrorKind::UnsupportedConstruct, "increment through a pointer to a pointer");
  std::size_t alpha = alpha_of(p.v);
  PV next;
  if (alpha == 1) {
    auto at = location(p.v, 0);
    next = bump(load(at, pointee), pointee);
    store(at, next, pointee, WriteKind::Tracked);
    touch(at);
  } else {
    next = bump(deref_multi(p.v, pointee), pointee);
    write_multi(p.v, next, pointee);
    for (std::size_t j = 0; j < alpha; ++j) touch(location(p.v, j));
  }
  emit(pointee.is_private() ? "pin5" : "pin2", m);
  return {next, pointee};
}

Eval Machine::eval_free(const Expr& e, std::size_t m) {
  require_public_context(e.kind == ExprKind::PFree ? "pfree" : "free");
  Eval p = eval(*e.args[0]);
  if (!is_loc_type(p.t)) fail(ErrorKind::TypeError, "free of a non-pointer");
  std::size_t alpha = alpha_of(p.v);
  PV none(state_.parties.size(), Value::none());
  // Freeing NULL does nothing, so NULL candidates (left behind by
  // per-statement resolution) stay out of the freed set.
  bool dropped_null = false;
  if (alpha > 1) {
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < alpha; ++j)
      if (!(as_ptr(p.v[0]).locs[j] == Location{0, 0})) keep.push_back(j);
    if (!keep.empty() && keep.size() < alpha) {
      dropped_null = true;
      for (auto& v : p.v) {
        PointerData pd = as_ptr(v);
        PointerData kept;
        kept.depth = pd.depth;
        for (auto j : keep) {
          kept.locs.push_back(pd.locs[j]);
          kept.tags.push_back(pd.tags[j]);
        }
        v = Value::of_ptr(kept);
      }
      alpha = keep.size();
    }
  }
  if (alpha == 1) {
    auto at = location(p.v, 0);
    for (std::size_t k = 0; k < at.size(); ++k) {
      std::vector<Location> one{at[k]};
      if (!state_.parties[k].mem.check_freeable(one)) fail(ErrorKind::NotFreeable, "free of " + to_string(at[k]));
      state_.parties[k].mem.free_block(at[k].block);
    }
    touch(at);
    emit(p.t.is_private() ? "pfre" : "fre", m);
    return {none, kVoid};
  }
  multiparty_free(p);
  // The freed pointer keeps the surviving candidates. With NULL candidates
  // left out it was updated like any other holder.
  if (e.args[0]->kind == ExprKind::Var && !dropped_null) {
    Binding b = lookup(e.args[0]->name);
    for (std::size_t k = 0; k < b.loc.size(); ++k) {
      PointerData next = as_ptr(p.v[k]);
      next.locs.erase(next.locs.begin());
      next.tags = state_.parties[k].mem.read_ptr(b.loc[k].block, b.type).tags;
      state_.parties[k].mem.update_ptr(b.loc[k].block, next, b.type);
    }
  }
  emit("mpfre", m);
  return {none, kVoid};
}

void Machine::multiparty_free(const Eval& p) {
  Type pointee = p.t.element();
  if (!pointee.is_scalar() || !pointee.is_private())
    fail(ErrorKind::UnsupportedConstruct, "private free of several locations needs a pointer to private scalars");
  std::size_t alpha = alpha_of(p.v);
  const Memory& mem0 = state_.parties[0].mem;
  std::vector<std::vector<Location>> at;
  for (std::size_t j = 0; j < alpha; ++j) at.push_back(location(p.v, j));
  const MemoryBlock& first = mem0.block(at[0][0].block);
  for (std::size_t k = 0; k < state_.parties.size(); ++k) {
    const Memory& mem = state_.parties[k].mem;
    std::vector<Location> locs;
    for (std::size_t j = 0; j < alpha; ++j) locs.push_back(at[j][k]);
    if (!mem.check_freeable(locs)) fail(ErrorKind::NotFreeable, "private free of a location that was not allocated");
    for (const auto& l : locs) {
      const MemoryBlock& b = mem.block(l.block);
      if (!b.live()) fail(ErrorKind::DoubleFree, "block " + std::to_string(l.block) + " already freed");
      if (!(b.type == first.type) || b.count != first.count)
        fail(ErrorKind::ShapeMismatch, "private free over blocks of different shapes");
    }
  }
  Type elem = first.type;
  std::vector<std::vector<mpc::Shares>> contents(alpha);
  std::vector<mpc::Shares> tags;
  for (std::size_t j = 0; j < alpha; ++j) {
    for (std::size_t i = 0; i < first.count; ++i) {
      PV col;
      for (std::size_t k = 0; k < state_.parties.size(); ++k)
        col.push_back(state_.parties[k].mem.read_arr(at[j][k].block, i, elem));
      contents[j].push_back(shares_of(col, elem));
    }
    tags.push_back(tag_shares(p.v, j));
    touch(at[j]);
  }
  std::size_t truth = 0;
  for (std::size_t j = 0; j < alpha; ++j) {
    PV t;
    for (auto s : tags[j]) t.push_back(Value::of_share(s, BaseType::Int));
    if (reconstruct_value(state_, t) == 1) truth = j;
  }
  mpc::FreeResult r = engine_.free(contents, tags);
  for (std::size_t k = 0; k < state_.parties.size(); ++k) {
    Memory& mem = state_.parties[k].mem;
    for (std::size_t j = 0; j < alpha; ++j)
      for (std::size_t i = 0; i < first.count; ++i)
        mem.update_arr(at[j][k].block, i, Value::of_share(r.contents[j][i][k], elem.base), elem);
    mem.free_block(at[0][k].block);
  }
  state_.psi.push_back({at[0][0], at[truth][0]});

  // Every other private pointer that referenced the freed location now
  // references the surviving candidates, weighted by the new tags.
  std::vector<BlockId> holders;
  for (const auto& [id, b] : mem0.blocks()) {
    if (!b.type.is_pointer() || !b.type.is_private() || !b.live()) continue;
    PointerData pd = mem0.read_ptr(id, b.type);
    if (std::find(pd.locs.begin(), pd.locs.end(), at[0][0]) != pd.locs.end()) holders.push_back(id);
  }
  for (BlockId id : holders) {
    // Only pointers other than the one being freed; its own list shrinks later.
    PointerData pd0 = mem0.read_ptr(id, mem0.block(id).type);
    if (pd0 == as_ptr(p.v[0])) continue;
    Type ty = mem0.block(id).type;
    auto pos = static_cast<std::size_t>(std::find(pd0.locs.begin(), pd0.locs.end(), at[0][0]) - pd0.locs.begin());
    std::vector<PointerData> pds;
    for (std::size_t k = 0; k < state_.parties.size(); ++k) pds.push_back(state_.parties[k].mem.read_ptr(id, ty));
    mpc::Shares t0;
    for (const auto& pd : pds) t0.push_back(pd.tags[pos]);
    std::vector<mpc::Shares> added;
    for (std::size_t j = 1; j < alpha; ++j) added.push_back(engine_.mult(t0, r.tags[j - 1]));
    for (std::size_t k = 0; k < state_.parties.size(); ++k) {
      PointerData& pd = pds[k];
      pd.locs.erase(pd.locs.begin() + static_cast<std::ptrdiff_t>(pos));
      pd.tags.erase(pd.tags.begin() + static_cast<std::ptrdiff_t>(pos));
      for (std::size_t j = 1; j < alpha; ++j) {
        auto it = std::find(pd.locs.begin(), pd.locs.end(), at[j][k]);
        if (it == pd.locs.end()) {
          pd.locs.push_back(at[j][k]);
          pd.tags.push_back(added[j - 1][k]);
        } else {
          auto q = static_cast<std::size_t>(it - pd.locs.begin());
          pd.tags[q] = engine_.field().add(pd.tags[q], added[j - 1][k]);
        }
      }
      state_.parties[k].mem.update_ptr(id, pd, ty);
    }
  }
  // The freed pointer itself: surviving candidates with the re-one-hot tags.
  for (std::size_t k = 0; k < state_.parties.size(); ++k) {
    for (BlockId id : holders) {
      const MemoryBlock& b = state_.parties[k].mem.block(id);
      PointerData pd = state_.parties[k].mem.read_ptr(id, b.type);
      if (!(pd == as_ptr(p.v[k]))) continue;
      PointerData next;
      next.depth = pd.depth;
      for (std::size_t j = 1; j < alpha; ++j) {
        next.locs.push_back(at[j][k]);
        next.tags.push_back(r.tags[j - 1][k]);
      }
      state_.parties[k].mem.update_ptr(id, next, b.type);
    }
  }
}

Eval Machine::declassify(const Expr& e) {
  Eval x = eval(*e.args[0]);
  Value v = plaintext(state_, x.v, x.t);
  if (v.is(Value::Kind::Ptr)) v = Value::of_loc(v.ptr.locs[0]);
  return {PV(state_.parties.size(), v), x.t.with_label(Label::Public)};
}

void Machine::call(const Expr& e, std::size_t m) {
  Binding fb = lookup(e.name);
  if (!fb.type.is_function()) fail(ErrorKind::TypeError, e.name + " is not a function");
  touch(fb.loc);
  std::vector<FunctionDef> fns;
  for (std::size_t k = 0; k < fb.loc.size(); ++k) {
    auto& party = state_.parties[k];
    std::int32_t idx = party.mem.read_val(fb.loc[k].block, fb.type).i;
    if (idx < 0 || static_cast<std::size_t>(idx) >= party.functions.size() || !party.functions[idx].def)
      fail(ErrorKind::UnboundVariable, "function " + e.name + " is declared but not defined");
    fns.push_back(party.functions[static_cast<std::size_t>(idx)]);
  }
  const Stmt& def = *fns[0].def;
  if (acc_ > 0 && fns[0].side_effects)
    fail(ErrorKind::ObliviousFault, "call to " + e.name + ", which has public side effects, inside a private branch");
  if (def.params.size() != e.args.size())
    fail(ErrorKind::TypeError, e.name + " expects " + std::to_string(def.params.size()) + " arguments");
  std::vector<PV> args;
  bool priv = false;
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    const Type& pt = def.params[i].type;
    priv = priv || pt.is_private();
    args.push_back(coerce(eval(*e.args[i]), pt));
  }
  if (++depth_ > kMaxCallDepth) fail(ErrorKind::LoopBudgetExceeded, "call depth limit reached");
  auto saved = save_env();
  for (std::size_t k = 0; k < fns.size(); ++k) state_.parties[k].env = fns[k].env;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const Type& pt = def.params[i].type;
    std::vector<MemoryBlock> blocks;
    for (const auto& v : args[i]) {
      std::size_t count = v.is(Value::Kind::Ptr) ? v.ptr.alpha() : 1;
      blocks.push_back(make_block(pt, count, v.is(Value::Kind::Ptr) ? encode_ptr(pt, v.ptr) : encode_val(pt, v),
                                  Origin::Declaration));
    }
    auto at = allocate(blocks);
    touch(at);
    bind(def.params[i].name, at, pt);
  }
  exec(*def.body);
  restore_env(saved);
  --depth_;
  emit(priv ? "fc1" : "fc", m);
}

void Machine::io(const Expr& e, std::size_t m) {
  bool input = e.kind == ExprKind::Input;
  require_public_context(input ? "smcinput" : "smcoutput");
  const Expr& var = *e.args[0];
  if (var.kind != ExprKind::Var) fail(ErrorKind::TypeError, "I/O needs a variable name");
  Binding b = lookup(var.name);
  Eval who = eval(*e.args[1]);
  const Value& wv = agreed(who.v);
  if (who.t.is_private() || !wv.is(Value::Kind::Int) || wv.i < 1 || wv.i > parties())
    fail(ErrorKind::IndexOutOfParties,
         "party index " + to_string(wv) + " with " + std::to_string(parties()) + " parties");
  int party = wv.i;
  auto text_of = [&](const PV& v, const Type& ty) {
    return rt::format_public(ty.is_private() ? plaintext(state_, v, ty) : v[0]);
  };
  if (b.type.is_array()) {
    if (e.args.size() < 3) fail(ErrorKind::TypeError, "array I/O needs a length");
    Eval len = eval(*e.args[2]);
    const Value& lv = agreed(len.v);
    if (len.t.is_private() || !lv.is(Value::Kind::Int) || lv.i < 0)
      fail(ErrorKind::SizeMismatch, "I/O length must be a public non-negative int");
    auto n = static_cast<std::size_t>(lv.i);
    Type elem = b.type.element();
    auto data = data_of(b);
    if (n > state_.parties[0].mem.block(data[0].block).count)
      fail(ErrorKind::SizeMismatch, "I/O length exceeds the size of " + var.name);
    if (input) {
      auto rec = inputs_.next(party, var.name);
      if (rec.size() < n) fail(ErrorKind::MissingInput, var.name + " needs " + std::to_string(n) + " values");
      for (std::size_t i = 0; i < n; ++i) {
        Value x = rt::parse_public(rec[i], elem.base);
        PV v = elem.is_private() ? share_public(x, elem.base) : PV(state_.parties.size(), x);
        auto at = element_at(data, static_cast<std::int64_t>(i), elem);
        store(at, v, elem, WriteKind::Init);
        touch(at);
      }
      emit(elem.is_private() ? "inp3" : "inp1", m);
    } else {
      std::string text = "[";
      for (std::size_t i = 0; i < n; ++i) {
        auto at = element_at(data, static_cast<std::int64_t>(i), elem);
        PV v;
        for (std::size_t k = 0; k < at.size(); ++k) v.push_back(state_.parties[k].mem.read_arr(at[k].block, i, elem));
        text += (i ? ", " : "") + text_of(v, elem);
        touch(at);
      }
      text += "]";
      state_.parties[static_cast<std::size_t>(party - 1)].outputs.push_back({var.name, text});
      emit(elem.is_private() ? "out3" : "out1", m);
    }
    return;
  }
  if (!b.type.is_scalar()) fail(ErrorKind::TypeError, "I/O on " + to_string(b.type));
  touch(b.loc);
  if (input) {
    auto rec = inputs_.next(party, var.name);
    if (rec.size() != 1) fail(ErrorKind::MissingInput, var.name + " expects a single value");
    Value x = rt::parse_public(rec[0], b.type.base);
    PV v = b.type.is_private() ? share_public(x, b.type.base) : PV(state_.parties.size(), x);
    store(b.loc, v, b.type, WriteKind::Init);
    emit(b.type.is_private() ? "inp2" : "inp", m);
  } else {
    PV v;
    for (std::size_t k = 0; k < b.loc.size(); ++k) v.push_back(state_.parties[k].mem.read_val(b.loc[k].block, b.type));
    state_.parties[static_cast<std::size_t>(party - 1)].outputs.push_back({var.name, text_of(v, b.type)});
    emit(b.type.is_private() ? "out2" : "out", m);
  }
}

}  // namespace smc2::detail
