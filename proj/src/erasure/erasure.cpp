#include "smc2/erasure.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "smc2/error.hpp"

namespace smc2 {

namespace {

bool is_loc_type(const Type& t) { return t.is_pointer() || t.is_array(); }

ExprPtr erase_expr(const Expr& e, const TypeEnv& env) {
  if (e.kind == ExprKind::Declassify) return erase_expr(*e.args[0], env);
  Expr x = e;
  x.type = erase_type(e.type);
  x.args.clear();
  for (const auto& a : e.args) x.args.push_back(erase_expr(*a, env));
  switch (e.kind) {
    case ExprKind::Binary:
      x.multiparty = e.multiparty || label_of(e, env) == Label::Private;
      break;
    case ExprKind::Index:
      x.multiparty = e.multiparty || label_of(*e.args[0], env) == Label::Private;
      break;
    case ExprKind::PMalloc: {
      // Count first, then the element size, so the size code sits next to the multiply.
      Expr size;
      size.kind = ExprKind::Sizeof;
      size.pos = e.pos;
      size.type = x.type;
      Expr mul;
      mul.kind = ExprKind::Binary;
      mul.pos = e.pos;
      mul.op = BinOp::Mul;
      mul.args = {x.args[0], make_expr(std::move(size))};
      x.kind = ExprKind::Malloc;
      x.type = Type{};
      x.args = {make_expr(std::move(mul))};
      break;
    }
    case ExprKind::PFree:
      x.kind = ExprKind::Free;
      break;
    default:
      break;
  }
  return make_expr(std::move(x));
}

ExprPtr erase_opt(const ExprPtr& e, const TypeEnv& env) { return e ? erase_expr(*e, env) : nullptr; }

}  // namespace

Type erase_type(const Type& ty) {
  Type t = ty;
  t.label = Label::Public;
  if (ty.sig) {
    auto sig = std::make_shared<FunctionSig>();
    for (const auto& p : ty.sig->params) sig->params.push_back(erase_type(p));
    sig->ret = erase_type(ty.sig->ret);
    t.sig = std::move(sig);
  }
  return t;
}

StmtPtr erase_stmt(const Stmt& s, TypeEnv& env) {
  Stmt x = s;
  x.type = erase_type(s.type);
  switch (s.kind) {
    case StmtKind::Decl:
      x.array_size = erase_opt(s.array_size, env);
      x.init = erase_opt(s.init, env);
      x.init_list.clear();
      for (const auto& e : s.init_list) x.init_list.push_back(erase_expr(*e, env));
      env.declare(s.name, s.type);
      break;
    case StmtKind::Assign:
      x.target = erase_expr(*s.target, env);
      x.value = erase_expr(*s.value, env);
      break;
    case StmtKind::ExprStmt:
      x.expr = erase_expr(*s.expr, env);
      break;
    case StmtKind::If: {
      x.cond = erase_expr(*s.cond, env);
      x.multiparty = s.multiparty || label_of(*s.cond, env) == Label::Private;
      {
        ScopeGuard g(env);
        x.then_branch = erase_stmt(*s.then_branch, env);
      }
      ScopeGuard g(env);
      x.else_branch = erase_stmt(*s.else_branch, env);
      break;
    }
    case StmtKind::While: {
      x.cond = erase_expr(*s.cond, env);
      ScopeGuard g(env);
      x.body = erase_stmt(*s.body, env);
      break;
    }
    case StmtKind::Block: {
      ScopeGuard g(env);
      x.stmts.clear();
      for (const auto& st : s.stmts) x.stmts.push_back(erase_stmt(*st, env));
      break;
    }
    case StmtKind::FunDef:
    case StmtKind::FunDecl: {
      for (auto& p : x.params) p.type = erase_type(p.type);
      env.declare_function(s.name, s.type, false);
      if (s.kind == StmtKind::FunDef) {
        ScopeGuard g(env);
        for (const auto& p : s.params) env.declare(p.name, p.type);
        x.body = erase_stmt(*s.body, env);
      }
      break;
    }
  }
  return make_stmt(std::move(x));
}

Program erase_program(const Program& program) {
  Program out;
  out.dialect = Dialect::Vanilla;
  TypeEnv env;
  for (const auto& s : program.stmts) out.stmts.push_back(erase_stmt(*s, env));
  return out;
}

namespace {

constexpr BlockId kDangling = std::numeric_limits<BlockId>::max();

class MemoryEraser {
 public:
  MemoryEraser(const Smc2State& s, bool undo_psi) : s_(s) {
    const Memory& mem0 = s.parties[0].mem;
    BlockId next = 0;
    std::vector<BlockId> kept;
    for (const auto& [id, b] : mem0.blocks()) {
      if (dropped(id)) {
        out_.dropped_blocks.push_back(id);
        continue;
      }
      out_.blocks[id] = next++;
      kept.push_back(id);
    }
    if (undo_psi) {
      for (auto it = s.psi.rbegin(); it != s.psi.rend(); ++it) {
        auto a = out_.blocks.find((*it)[0].block);
        auto b = out_.blocks.find((*it)[1].block);
        if (a != out_.blocks.end() && b != out_.blocks.end()) std::swap(a->second, b->second);
      }
    }
    std::map<BlockId, MemoryBlock> erased;
    for (BlockId id : kept) erased[out_.blocks[id]] = erase_block(id);
    for (auto& [id, b] : erased) out_.mem.insert(out_.mem.phi().block, std::move(b));
    out_.env = erase_env(s.parties[0].env, &out_.dropped_names);
    for (const auto& f : s.parties[0].functions) {
      FunctionDef g;
      g.env = erase_env(f.env, nullptr);
      if (f.def) {
        TypeEnv tenv;
        for (const auto& b : f.env.visible()) tenv.declare(b.name, b.type);
        g.def = erase_stmt(*f.def, tenv);
      }
      out_.functions.push_back(std::move(g));
    }
  }

  ErasedState take() { return std::move(out_); }

 private:
  bool dropped(BlockId id) const {
    auto it = s_.provenance.find(id);
    if (it == s_.provenance.end()) return false;
    if (it->second.temp) return true;
    for (const auto& [instance, side] : it->second.path)
      if (instance < s_.taken.size() && s_.taken[instance] != side) return true;
    return false;
  }

  Env erase_env(const Env& env, std::vector<std::string>* dropped) const {
    Env out;
    for (const auto& b : env.visible()) {
      if (!b.name.empty() && b.name[0] == '$') {
        if (dropped) dropped->push_back(b.name);
        continue;
      }
      out = out.bind(b.name, remap(b.loc, b.type), erase_type(b.type));
    }
    return out;
  }

  // Location remap; the offset scales with the pointee's public/private width ratio.
  Location remap(Location l, const Type& pointee) const {
    auto it = out_.blocks.find(l.block);
    if (it == out_.blocks.end()) return {kDangling, l.offset};
    std::int64_t off = l.offset;
    if (pointee.is_private() && !pointee.is_function()) {
      auto from = static_cast<std::int64_t>(size_of(pointee));
      auto to = static_cast<std::int64_t>(size_of(erase_type(pointee)));
      off = off * to / from;
    }
    return {it->second, off};
  }

  Value collapse(const std::vector<PointerData>& per_party, const Type& ty) const {
    const PointerData& p0 = per_party[0];
    Type pointee = ty.element();
    std::size_t pick = 0;
    if (ty.is_private() && p0.alpha() > 1) {
      for (std::size_t m = 0; m < p0.alpha(); ++m) {
        std::vector<Value> tag;
        for (const auto& p : per_party) tag.push_back(Value::of_share(p.tags[m], BaseType::Int));
        if (reconstruct_value(s_, tag) == 1) {
          pick = m;
          break;
        }
      }
    }
    return Value::of_ptr(PointerData{{remap(p0.locs.at(pick), pointee)}, {1}, p0.depth});
  }

  MemoryBlock erase_block(BlockId id) const {
    const MemoryBlock& b = s_.parties[0].mem.block(id);
    Type ty = erase_type(b.type);
    MemoryBlock out;
    out.type = ty;
    out.origin = b.origin;
    auto perm_at = [&](std::size_t byte) { return byte < b.meta.size() ? b.meta[byte].perm : Perm::Freeable; };
    if (is_loc_type(b.type)) {
      std::vector<PointerData> per_party;
      for (const auto& p : s_.parties) {
        const MemoryBlock& pb = p.mem.block(id);
        per_party.push_back(decode_ptr(b.type, pb.count, pb.bytes));
      }
      if (per_party[0].alpha() == 0) {
        out.bytes = b.bytes;
        out.count = b.count;
      } else {
        Value v = collapse(per_party, b.type);
        out.bytes = encode_ptr(ty, v.ptr);
        out.count = 1;
      }
      out.meta.assign(out.bytes.size(), ByteMeta{Label::Public, perm_at(0)});
      return out;
    }
    if (b.type.is_function() || b.type.base == BaseType::Void || !b.type.is_private()) {
      out.bytes = b.bytes;
      out.count = b.count;
      for (std::size_t i = 0; i < b.bytes.size(); ++i) out.meta.push_back(ByteMeta{Label::Public, perm_at(i)});
      return out;
    }
    std::size_t width = size_of(b.type);
    std::size_t pub = size_of(ty);
    out.count = b.count;
    for (std::size_t i = 0; i < b.count; ++i) {
      std::vector<Value> col;
      for (const auto& p : s_.parties) col.push_back(decode_arr(b.type, i, p.mem.block(id).bytes));
      Bytes enc = encode_val(ty, plaintext(s_, col, b.type));
      out.bytes.insert(out.bytes.end(), enc.begin(), enc.end());
      for (std::size_t k = 0; k < pub; ++k) out.meta.push_back(ByteMeta{Label::Public, perm_at(i * width)});
    }
    return out;
  }

  const Smc2State& s_;
  ErasedState out_;
};

std::string hex(std::uint8_t b) {
  static const char* digits = "0123456789abcdef";
  return {digits[b >> 4], digits[b & 15]};
}

bool all_freed(const MemoryBlock& b) {
  return !b.meta.empty() &&
         std::all_of(b.meta.begin(), b.meta.end(), [](const ByteMeta& m) { return m.perm == Perm::None; });
}

}  // namespace

ErasedState erase_memory(const Smc2State& state, bool undo_psi) { return MemoryEraser(state, undo_psi).take(); }

Congruence psi_congruent(const Smc2State& smc, const VanillaParty& van) {
  return same_state(erase_memory(smc, true), van.mem, van.env);
}

Congruence same_state(const ErasedState& e, const Memory& mem, const Env& env) {
  auto fail_with = [](std::string msg) { return Congruence{false, std::move(msg)}; };
  const auto& a = e.mem.blocks();
  const auto& b = mem.blocks();
  if (a.size() != b.size())
    return fail_with("block count " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    const auto& [id, x] = *ia;
    const auto& [vid, y] = *ib;
    std::string where = "block #" + std::to_string(id);
    if (id != vid) return fail_with("block ids " + std::to_string(id) + " vs " + std::to_string(vid));
    bool untyped = (x.type.is_scalar() && x.type.base == BaseType::Void) ||
                   (y.type.is_scalar() && y.type.base == BaseType::Void);
    if (!untyped && !(x.type == y.type))
      return fail_with(where + ": type " + to_string(x.type) + " vs " + to_string(y.type));
    if (x.bytes.size() != y.bytes.size())
      return fail_with(where + ": size " + std::to_string(x.bytes.size()) + " vs " + std::to_string(y.bytes.size()));
    for (std::size_t k = 0; k < x.meta.size() && k < y.meta.size(); ++k)
      if (x.meta[k].perm != y.meta[k].perm)
        return fail_with(where + " offset " + std::to_string(k) + ": permission differs");
    if (x.bytes == y.bytes) continue;
    if (is_loc_type(y.type) && x.count == 1 && y.count == 1) {
      // A pointer left dangling at a freed block may name either side of a pfree relocation.
      PointerData py = decode_ptr(y.type, 1, y.bytes);
      if (mem.contains(py.locs[0].block) && all_freed(mem.block(py.locs[0].block))) continue;
    }
    for (std::size_t k = 0; k < x.bytes.size(); ++k)
      if (x.bytes[k] != y.bytes[k])
        return fail_with(where + " offset " + std::to_string(k) + ": " + hex(x.bytes[k]) + " vs " + hex(y.bytes[k]));
  }
  auto ea = e.env.visible();
  auto eb = env.visible();
  if (ea.size() != eb.size())
    return fail_with("environment size " + std::to_string(ea.size()) + " vs " + std::to_string(eb.size()));
  for (const auto& v : eb) {
    const Env::Binding* x = e.env.find(v.name);
    if (!x) return fail_with("variable " + v.name + " missing after erasure");
    if (!(x->loc == v.loc)) return fail_with("variable " + v.name + " at " + to_string(x->loc) + " vs " + to_string(v.loc));
    if (!(x->type == v.type)) return fail_with("variable " + v.name + " has type " + to_string(x->type));
  }
  return {};
}

namespace {

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> table = {
      {"r1", "r"},         {"rp1", "rp"},      {"d1", "dv"},       {"dp1", "dp"},     {"da1", "da"},
      {"wp1", "wp"},       {"w1", "w"},        {"w2", "w"},        {"wea", "wae"},    {"wea1", "wae"},
      {"wea2", "wae"},     {"pin3", "pin"},    {"pin4", "pin1"},   {"mppin", "pin1"}, {"pin5", "pin2"},
      {"mprdp", "rdp"},    {"mprdp1", "rdp1"}, {"wdp3", "wdp"},    {"wdp4", "wdp"},   {"wdp2", "wdp1"},
      {"mpwdp", "wdp"},    {"mpwdp3", "wdp"},  {"mpwdp2", "wdp1"}, {"ra1", "ra"},     {"rao1", "rao"},
      {"wa1", "wa"},       {"wa2", "wa"},      {"wao1", "wao"},    {"wao2", "wao"},   {"mpwa", "mpwe"},
      {"cv1", "cv"},       {"fc1", "fc"},      {"pfre", "fre"},    {"mpfre", "fre"},  {"inp2", "inp"},
      {"inp3", "inp1"},    {"out2", "out"},    {"out3", "out1"},   {"rea", "rae"},
  };
  return table;
}

bool same_code(const std::string& smc, const std::string& van) {
  if (smc == "mpcmp") return van == "mpcmpt" || van == "mpcmpf";
  auto it = aliases().find(smc);
  return (it == aliases().end() ? smc : it->second) == van;
}

struct Node {
  std::size_t end;
  std::vector<std::size_t> kids;  // end indices of children
};

Node node(const std::vector<Code>& d, std::size_t end) {
  Node n{end, {}};
  auto starts = children(d, end);
  for (std::size_t i = 0; i < starts.size(); ++i) n.kids.push_back(i + 1 < starts.size() ? starts[i + 1] - 1 : end - 1);
  return n;
}

std::vector<std::size_t> roots(const std::vector<Code>& d) {
  std::vector<std::size_t> out;
  std::size_t at = d.size();
  while (at > 0) {
    out.push_back(at - 1);
    at -= d[at - 1].span;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

class CodeMatcher {
 public:
  CodeMatcher(const std::vector<Code>& a, const std::vector<Code>& b) : a_(a), b_(b) {}

  bool match(std::size_t ea, std::size_t eb) {
    const std::string& na = a_[ea].name;
    const std::string& nb = b_[eb].name;
    Node x = node(a_, ea);
    Node y = node(b_, eb);
    if (na == "iep" || na == "iepd") {
      if ((nb != "mpiet" && nb != "mpief") || x.kids.size() < 2 || y.kids.empty()) return miss(ea, eb);
      std::size_t guards = x.kids.size() - 2;
      if (y.kids.size() != guards + 1) return miss(ea, eb);
      for (std::size_t i = 0; i < guards; ++i)
        if (!match(x.kids[i], y.kids[i])) return false;
      return match(x.kids[nb == "mpiet" ? guards : guards + 1], y.kids.back());
    }
    if (na == "malp") {
      if (nb != "mal" || y.kids.size() != 1 || b_[y.kids[0]].name != "bm") return miss(ea, eb);
      Node mul = node(b_, y.kids[0]);
      if (mul.kids.size() != x.kids.size() + 1 || b_[mul.kids.back()].name != "ty") return miss(ea, eb);
      for (std::size_t i = 0; i < x.kids.size(); ++i)
        if (!match(x.kids[i], mul.kids[i])) return false;
      return true;
    }
    if (!same_code(na, nb) || x.kids.size() != y.kids.size()) return miss(ea, eb);
    for (std::size_t i = 0; i < x.kids.size(); ++i)
      if (!match(x.kids[i], y.kids[i])) return false;
    return true;
  }

  std::string detail;

 private:
  bool miss(std::size_t ea, std::size_t eb) {
    std::ostringstream os;
    os << "code " << ea << " '" << a_[ea].name << "' (span " << a_[ea].span << ") vs code " << eb << " '"
       << b_[eb].name << "' (span " << b_[eb].span << ")";
    detail = os.str();
    return false;
  }

  const std::vector<Code>& a_;
  const std::vector<Code>& b_;
};

}  // namespace

Congruence code_congruent(const std::vector<Code>& smc, const std::vector<Code>& van) {
  auto ra = roots(smc);
  auto rb = roots(van);
  if (ra.size() != rb.size())
    return {false, std::to_string(ra.size()) + " top-level derivations vs " + std::to_string(rb.size())};
  CodeMatcher m(smc, van);
  for (std::size_t i = 0; i < ra.size(); ++i)
    if (!m.match(ra[i], rb[i])) return {false, m.detail};
  return {};
}

}  // namespace smc2
