#include <algorithm>

#include "smc2_machine.hpp"

namespace smc2 {
namespace detail {

namespace {

bool is_loc_type(const Type& t) { return t.is_pointer() || t.is_array(); }

}  // namespace

Machine::Machine(const RunOptions& options, const InputSet& inputs)
    : options_(options), inputs_(inputs), engine_(options.field, options.seed, options.backend) {
  state_.field = options.field;
  for (int p = 1; p <= options.field.q; ++p) {
    Smc2Party party;
    party.id = p;
    rt::allocate_default(party.mem);
    if (p == options.desync_party) party.mem.skip_ids(1);
    state_.parties.push_back(std::move(party));
  }
  state_.provenance[0] = {};
}

void Machine::run(const Program& program) {
  exec_list(program.stmts);
  state_.rounds = engine_.report();
}

void Machine::emit(const char* name, std::size_t m) {
  for (auto& p : state_.parties)
    p.trace.d.push_back({name, static_cast<std::uint32_t>(p.trace.d.size() - m + 1), acc_});
}

void Machine::touch(const std::vector<Location>& at) {
  for (std::size_t k = 0; k < state_.parties.size(); ++k) state_.parties[k].trace.l.push_back(at[k]);
}

Machine::Binding Machine::lookup(const std::string& name) const {
  Binding b;
  for (const auto& p : state_.parties) {
    const Env::Binding& e = p.env.lookup(name);
    b.loc.push_back(e.loc);
    if (b.loc.size() == 1) b.type = e.type;
  }
  return b;
}

std::vector<Location> Machine::allocate(const std::vector<MemoryBlock>& blocks, bool temp) {
  std::vector<Location> out;
  for (std::size_t k = 0; k < state_.parties.size(); ++k) out.push_back(state_.parties[k].mem.allocate(blocks[k]));
  state_.provenance[out[0].block] = BlockInfo{temp, path_};
  return out;
}

std::vector<Location> Machine::allocate_same(const MemoryBlock& block, bool temp) {
  return allocate(std::vector<MemoryBlock>(state_.parties.size(), block), temp);
}

void Machine::bind(const std::string& name, const std::vector<Location>& at, const Type& ty) {
  for (std::size_t k = 0; k < state_.parties.size(); ++k)
    state_.parties[k].env = state_.parties[k].env.bind(name, at[k], ty);
}

std::vector<Env> Machine::save_env() const {
  std::vector<Env> out;
  for (const auto& p : state_.parties) out.push_back(p.env);
  return out;
}

void Machine::restore_env(const std::vector<Env>& envs) {
  for (std::size_t k = 0; k < envs.size(); ++k) state_.parties[k].env = envs[k];
}

const Value& Machine::agreed(const PV& v) const {
  for (const auto& x : v)
    if (!(x == v[0])) fail(ErrorKind::Desync, "parties disagree on a public value");
  return v[0];
}

mpc::Shares Machine::shares_of(const PV& v, const Type& t) const {
  if (t.is_private()) {
    mpc::Shares s;
    for (const auto& x : v) {
      if (!x.is(Value::Kind::Share)) fail(ErrorKind::MalformedShare, "expected a share, found " + to_string(x));
      s.push_back(x.share);
    }
    return s;
  }
  const Value& x = agreed(v);
  if (x.is(Value::Kind::Float)) return engine_.constant(mpc::Engine::float_to_bits(x.f));
  if (!x.is(Value::Kind::Int)) fail(ErrorKind::TypeError, "expected a number, found " + to_string(x));
  return engine_.constant(x.i);
}

mpc::Typed Machine::typed_of(const PV& v, const Type& t) const {
  BaseType base = t.base;
  if (!t.is_private()) base = v[0].is(Value::Kind::Float) ? BaseType::Float : BaseType::Int;
  return {shares_of(v, t), base};
}

PV Machine::values_of(const mpc::Shares& s, BaseType base) {
  PV out;
  for (auto x : s) out.push_back(Value::of_share(x, base));
  return out;
}

PV Machine::share_public(const Value& v, BaseType base) {
  Value c = rt::convert_public(v, base);
  std::int64_t x = c.is(Value::Kind::Float) ? mpc::Engine::float_to_bits(c.f) : c.i;
  return values_of(engine_.share(x), base);
}

mpc::Shares Machine::tag_shares(const PV& ptrs, std::size_t k) const {
  mpc::Shares s;
  for (const auto& p : ptrs) s.push_back(p.ptr.tags[k]);
  return s;
}

bool Machine::whole_ptr(Location at, const Type& ty) const {
  const MemoryBlock& b = state_.parties[0].mem.block(at.block);
  return is_loc_type(ty) && at.offset == 0 && is_loc_type(b.type);
}

void Machine::check_aligned(const std::vector<Location>& at, const Type& ty) {
  for (std::size_t k = 0; k < at.size(); ++k)
    if (!state_.parties[k].mem.well_aligned(at[k], ty)) state_.misaligned = true;
}

PV Machine::load(const std::vector<Location>& at, const Type& ty) {
  PV out;
  bool whole = whole_ptr(at[0], ty);
  for (std::size_t k = 0; k < at.size(); ++k) out.push_back(state_.parties[k].mem.deref_ptr(ty, at[k]).first);
  if (!whole) check_aligned(at, ty);
  return out;
}

void Machine::raw_store(Smc2Party& p, Location at, const Value& v, const Type& ty) {
  const MemoryBlock& b = p.mem.block(at.block);
  if (is_loc_type(ty) && at.offset == 0 && is_loc_type(b.type)) {
    p.mem.update_ptr(at.block, v.ptr, ty);
    return;
  }
  Bytes bytes = encode_val(ty, v);
  if (at.offset >= 0 && static_cast<std::size_t>(at.offset) + bytes.size() <= b.bytes.size())
    p.mem.write_bytes(at, bytes);
  else
    p.mem.write_oob(at, v, ty);
}

void Machine::store(const std::vector<Location>& at, PV v, const Type& ty, WriteKind kind) {
  if (!ty.is_private() && acc_ > 0) fail(ErrorKind::ObliviousFault, "public write inside a private branch");
  bool legacy = options_.legacy && acc_ > 0 && kind != WriteKind::Init;
  if (kind == WriteKind::Tracked && acc_ > 0 && !options_.legacy) dynamic_update(at, ty);
  if (!whole_ptr(at[0], ty)) check_aligned(at, ty);
  if (legacy) {
    PV old = load_raw(at, ty, whole_ptr(at[0], ty));
    v = resolve(cond_.back(), v, old, ty);
  }
  for (std::size_t k = 0; k < at.size(); ++k) raw_store(state_.parties[k], at[k], v[k], ty);
}

PV Machine::load_raw(const std::vector<Location>& at, const Type& ty, bool whole) {
  PV out;
  for (std::size_t k = 0; k < at.size(); ++k) {
    const Memory& mem = state_.parties[k].mem;
    out.push_back(whole ? Value::of_ptr(mem.read_ptr(at[k].block, ty)) : mem.read_oob(at[k], ty));
  }
  return out;
}

void Machine::store_raw(const std::vector<Location>& at, const PV& v, const Type& ty, bool whole) {
  for (std::size_t k = 0; k < at.size(); ++k) {
    Memory& mem = state_.parties[k].mem;
    if (whole)
      mem.update_ptr(at[k].block, v[k].ptr, ty);
    else
      mem.write_oob(at[k], v[k], ty);
  }
}

Slot Machine::slot_of(const Tracked& x) const {
  Slot s;
  if (x.type.is_array()) {
    s.kind = Slot::Kind::Array;
    s.ty = x.type.element();
    for (std::size_t k = 0; k < x.at.size(); ++k)
      s.at.push_back(state_.parties[k].mem.read_ptr(x.at[k].block, x.type).locs[0]);
    s.count = state_.parties[0].mem.block(s.at[0].block).count;
    return s;
  }
  s.kind = x.type.is_pointer() ? Slot::Kind::Pointer : Slot::Kind::Scalar;
  s.at = x.at;
  s.ty = x.type;
  return s;
}

PV Machine::read_slot(const Slot& s) const {
  PV out;
  for (std::size_t k = 0; k < s.at.size(); ++k) {
    const Memory& mem = state_.parties[k].mem;
    if (s.kind == Slot::Kind::Array) {
      std::vector<Value> elems;
      for (std::size_t i = 0; i < s.count; ++i) elems.push_back(mem.read_arr(s.at[k].block, i, s.ty));
      out.push_back(Value::of_array(std::move(elems)));
    } else {
      out.push_back(mem.read_val(s.at[k].block, s.ty));
    }
  }
  return out;
}

void Machine::write_slot(const Slot& s, const PV& v) {
  for (std::size_t k = 0; k < s.at.size(); ++k) {
    Memory& mem = state_.parties[k].mem;
    if (s.kind == Slot::Kind::Array) {
      for (std::size_t i = 0; i < s.count; ++i) mem.update_arr(s.at[k].block, i, v[k].elems[i], s.ty);
    } else {
      mem.update_val(s.at[k].block, v[k], s.ty);
    }
  }
}

std::vector<Location> Machine::data_of(const Binding& b) {
  std::vector<Location> out;
  for (std::size_t k = 0; k < b.loc.size(); ++k)
    out.push_back(state_.parties[k].mem.read_ptr(b.loc[k].block, b.type).locs[0]);
  touch(b.loc);
  return out;
}

std::vector<Location> Machine::element_at(const std::vector<Location>& data, std::int64_t index,
                                          const Type& elem) const {
  std::vector<Location> out;
  for (const auto& d : data) out.push_back({d.block, d.offset + index * static_cast<std::int64_t>(size_of(elem))});
  return out;
}

bool Machine::in_bounds(const std::vector<Location>& data, std::int64_t index) const {
  return index >= 0 && static_cast<std::size_t>(index) < state_.parties[0].mem.block(data[0].block).count;
}

void Machine::require_public_context(const char* what) const {
  if (acc_ > 0) fail(ErrorKind::ObliviousFault, std::string(what) + " inside a private branch");
}

PV Machine::coerce(const Eval& x, const Type& ty) {
  if (is_loc_type(ty)) {
    PV out;
    bool is_null = std::all_of(x.v.begin(), x.v.end(), [](const Value& v) {
      return (v.is(Value::Kind::Loc) && v.loc == Location{0, 0}) ||
             (v.is(Value::Kind::Ptr) && v.ptr.alpha() == 1 && v.ptr.locs[0] == Location{0, 0});
    });
    if (ty.is_private() && !x.t.is_private() && !is_null)
      fail(ErrorKind::TypeError, "a public pointer cannot be stored in a private pointer; use pmalloc for private data");
    if (!ty.is_private() && x.t.is_private())
      fail(ErrorKind::TypeError, "a private pointer cannot be stored in a public one");
    for (const auto& v : x.v) {
      if (v.is(Value::Kind::Loc)) {
        out.push_back(Value::of_ptr(PointerData{{v.loc}, {1}, std::max(ty.depth, 1)}));
      } else if (v.is(Value::Kind::Ptr)) {
        PointerData p = v.ptr;
        p.depth = std::max(ty.depth, 1);
        if (ty.is_private() && !x.t.is_private()) p.tags.assign(p.alpha(), 1);
        out.push_back(Value::of_ptr(std::move(p)));
      } else {
        fail(ErrorKind::TypeError, "cannot store " + to_string(v) + " in a pointer");
      }
    }
    return out;
  }
  if (!ty.is_scalar() || ty.base == BaseType::Void || !x.t.is_scalar())
    fail(ErrorKind::TypeError, "cannot store a " + to_string(x.t) + " in a " + to_string(ty));
  if (!ty.is_private()) {
    if (x.t.is_private()) fail(ErrorKind::TypeError, "a private value cannot be stored in a public variable");
    PV out;
    for (const auto& v : x.v) out.push_back(rt::convert_public(v, ty.base));
    return out;
  }
  if (!x.t.is_private()) return share_public(agreed(x.v), ty.base);
  if (x.t.base == ty.base) return x.v;
  mpc::Typed c = engine_.convert(typed_of(x.v, x.t), ty.base);
  return values_of(c.shares, ty.base);
}

PV Machine::resolve(const mpc::Shares& res, const PV& a, const PV& b, const Type& ty) {
  if (a[0].is(Value::Kind::Ptr)) return resolve_pointer(res, a, b, std::max(ty.depth, 1));
  if (a[0].is(Value::Kind::Array)) {
    std::size_t n = a[0].elems.size();
    if (b[0].elems.size() != n) fail(ErrorKind::ShapeMismatch, "resolve of arrays of different lengths");
    std::vector<mpc::Shares> xs;
    std::vector<mpc::Shares> ys;
    Type elem = Type::scalar(Label::Private, a[0].elems.empty() ? BaseType::Int : a[0].elems[0].base);
    for (std::size_t i = 0; i < n; ++i) {
      PV ai;
      PV bi;
      for (std::size_t k = 0; k < a.size(); ++k) {
        ai.push_back(a[k].elems[i]);
        bi.push_back(b[k].elems[i]);
      }
      xs.push_back(shares_of(ai, elem));
      ys.push_back(shares_of(bi, elem));
    }
    auto r = engine_.resolve_all(res, xs, ys);
    PV out(a.size(), Value::of_array({}));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < a.size(); ++k) out[k].elems.push_back(Value::of_share(r[i][k], elem.base));
    return out;
  }
  if (!ty.is_private()) {
    if (a == b) return a;
    fail(ErrorKind::ObliviousFault, "public data differs between the two sides of a private branch");
  }
  return values_of(engine_.resolve(res, shares_of(a, ty), shares_of(b, ty)), ty.base);
}

PV Machine::resolve_pointer(const mpc::Shares& res, const PV& a, const PV& b, int depth) {
  PV out;
  std::vector<mpc::Shares> ta;
  std::vector<mpc::Shares> tb;
  std::vector<std::vector<Location>> locs(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    locs[k] = a[k].ptr.locs;
    for (const auto& l : b[k].ptr.locs)
      if (std::find(locs[k].begin(), locs[k].end(), l) == locs[k].end()) locs[k].push_back(l);
  }
  std::size_t alpha = locs[0].size();
  for (std::size_t m = 0; m < alpha; ++m) {
    mpc::Shares x;
    mpc::Shares y;
    for (std::size_t k = 0; k < a.size(); ++k) {
      auto find_tag = [&](const PointerData& p) -> std::uint64_t {
        if (m >= locs[k].size()) fail(ErrorKind::Desync, "parties disagree on pointer shapes");
        auto it = std::find(p.locs.begin(), p.locs.end(), locs[k][m]);
        return it == p.locs.end() ? 0 : p.tags[static_cast<std::size_t>(it - p.locs.begin())];
      };
      x.push_back(find_tag(a[k].ptr));
      y.push_back(find_tag(b[k].ptr));
    }
    ta.push_back(std::move(x));
    tb.push_back(std::move(y));
  }
  auto tags = engine_.resolve_all(res, ta, tb);
  for (std::size_t k = 0; k < a.size(); ++k) {
    PointerData p;
    p.locs = locs[k];
    p.depth = depth;
    for (std::size_t m = 0; m < alpha; ++m) p.tags.push_back(tags[m][k]);
    out.push_back(Value::of_ptr(std::move(p)));
  }
  return out;
}

void Machine::fire(BranchEvent::Phase phase, const Stmt& s, std::uint32_t instance) {
  if (!options_.hook) return;
  state_.rounds = engine_.report();
  BranchEvent ev;
  ev.phase = phase;
  ev.stmt = &s;
  ev.instance = instance;
  ev.taken = state_.taken[instance];
  for (const auto& [k, side] : path_)
    if (state_.taken[k] != side) ev.on_taken_path = false;
  ev.state = &state_;
  options_.hook(ev);
}

}  // namespace detail

Smc2State run_smc2(const Program& program, const InputSet& inputs, const RunOptions& options) {
  options.field.validate();
  detail::Machine m(options, inputs);
  m.run(program);
  return m.take();
}

std::int64_t reconstruct_value(const Smc2State& state, const std::vector<Value>& per_party) {
  mpc::Field f(state.field.p);
  auto need = static_cast<std::size_t>(state.field.t + 1);
  if (per_party.size() < need) fail(ErrorKind::NotEnoughShares, "too few shares to reconstruct");
  std::vector<std::uint64_t> xs;
  std::vector<std::uint64_t> ys;
  for (std::size_t k = 0; k < need; ++k) {
    if (!per_party[k].is(Value::Kind::Share)) fail(ErrorKind::MalformedShare, "not a share: " + to_string(per_party[k]));
    xs.push_back(k + 1);
    ys.push_back(per_party[k].share);
  }
  return f.to_signed(f.interpolate(xs, ys, 0));
}

Value plaintext(const Smc2State& state, const std::vector<Value>& per_party, const Type& ty) {
  const Value& v0 = per_party[0];
  if (v0.is(Value::Kind::Share)) {
    std::int64_t x = reconstruct_value(state, per_party);
    if (v0.base == BaseType::Float) return Value::of_float(mpc::Engine::bits_to_float(x));
    return Value::of_int(static_cast<std::int32_t>(x));
  }
  if (v0.is(Value::Kind::Array)) {
    std::vector<Value> elems;
    for (std::size_t i = 0; i < v0.elems.size(); ++i) {
      std::vector<Value> col;
      for (const auto& v : per_party) col.push_back(v.elems[i]);
      elems.push_back(plaintext(state, col, ty.is_array() ? ty.element() : ty));
    }
    return Value::of_array(std::move(elems));
  }
  if (v0.is(Value::Kind::Ptr) && ty.is_private()) {
    for (std::size_t m = 0; m < v0.ptr.alpha(); ++m) {
      std::vector<Value> tag;
      for (const auto& v : per_party) tag.push_back(Value::of_share(v.ptr.tags[m], BaseType::Int));
      if (reconstruct_value(state, tag) == 1) return Value::of_ptr(PointerData{{v0.ptr.locs[m]}, {1}, v0.ptr.depth});
    }
    fail(ErrorKind::MalformedShare, "private pointer without a true location");
  }
  return v0;
}

}  // namespace smc2
