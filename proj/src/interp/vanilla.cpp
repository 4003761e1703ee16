#include "smc2/vanilla.hpp"

#include <charconv>
#include <cmath>

#include "smc2/error.hpp"

namespace smc2 {

namespace rt {

Value public_binop(BinOp op, const Value& a, const Value& b) {
  bool fl = a.is(Value::Kind::Float) || b.is(Value::Kind::Float);
  if (fl) {
    float x = a.is(Value::Kind::Float) ? a.f : static_cast<float>(a.i);
    float y = b.is(Value::Kind::Float) ? b.f : static_cast<float>(b.i);
    switch (op) {
      case BinOp::Add: return Value::of_float(x + y);
      case BinOp::Sub: return Value::of_float(x - y);
      case BinOp::Mul: return Value::of_float(x * y);
      case BinOp::Div: return Value::of_float(x / y);
      case BinOp::Lt: return Value::of_int(x < y);
      case BinOp::Eq: return Value::of_int(x == y);
      case BinOp::Ne: return Value::of_int(x != y);
    }
  }
  if (!a.is(Value::Kind::Int) || !b.is(Value::Kind::Int))
    fail(ErrorKind::TypeError, "arithmetic on " + to_string(a) + " and " + to_string(b));
  auto wrap = [](std::int64_t v) { return Value::of_int(static_cast<std::int32_t>(static_cast<std::uint32_t>(v))); };
  std::int64_t x = a.i;
  std::int64_t y = b.i;
  switch (op) {
    case BinOp::Add: return wrap(x + y);
    case BinOp::Sub: return wrap(x - y);
    case BinOp::Mul: return wrap(x * y);
    case BinOp::Div:
      if (y == 0) fail(ErrorKind::DivisionByZero, "division by zero");
      return wrap(x / y);
    case BinOp::Lt: return Value::of_int(x < y);
    case BinOp::Eq: return Value::of_int(x == y);
    case BinOp::Ne: return Value::of_int(x != y);
  }
  return Value::none();
}

Value convert_public(const Value& v, BaseType to) {
  if (to == BaseType::Float && v.is(Value::Kind::Int)) return Value::of_float(static_cast<float>(v.i));
  if (to == BaseType::Int && v.is(Value::Kind::Float)) return Value::of_int(static_cast<std::int32_t>(std::trunc(v.f)));
  return v;
}

bool truthy(const Value& v) {
  if (v.is(Value::Kind::Int)) return v.i != 0;
  if (v.is(Value::Kind::Float)) return v.f != 0.0F;
  fail(ErrorKind::TypeError, "condition is not a number: " + to_string(v));
}

Value parse_public(const std::string& text, BaseType base) {
  if (base == BaseType::Float) {
    float f = 0;
    auto r = std::from_chars(text.data(), text.data() + text.size(), f);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size())
      fail(ErrorKind::MissingInput, "not a float input: '" + text + "'");
    return Value::of_float(f);
  }
  long long v = 0;
  auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size())
    fail(ErrorKind::MissingInput, "not an int input: '" + text + "'");
  return Value::of_int(static_cast<std::int32_t>(v));
}

std::string format_public(const Value& v) {
  if (v.is(Value::Kind::Float)) return format_float(v.f);
  return format_int(v.i);
}

void allocate_default(Memory& mem) {
  Location l = mem.allocate(make_block(Type::scalar(Label::Public, BaseType::Void), SizeModel::kDefaultBlockBytes,
                                       Bytes(SizeModel::kDefaultBlockBytes, 0), Origin::Default));
  if (l.block != 0) fail(ErrorKind::Desync, "default block must be allocated first");
}

Value zero_of(const Type& ty) {
  if (ty.is_pointer() || ty.is_array()) return Value::of_ptr(PointerData{{{0, 0}}, {1}, std::max(ty.depth, 1)});
  if (ty.is_private()) return Value::of_share(0, ty.base);
  if (ty.base == BaseType::Float) return Value::of_float(0.0F);
  return Value::of_int(0);
}

}  // namespace rt

namespace {

const Type kPubInt = Type::scalar(Label::Public, BaseType::Int);


struct Typed {
  Value v;
  Type t;
};

bool is_loc_type(const Type& t) { return t.is_pointer() || t.is_array(); }

class Machine {
 public:
  Machine(VanillaState& s, InputSet& inputs, int party, int parties, std::uint64_t budget)
      : s_(s), in_(inputs), party_(party), parties_(parties), budget_(budget) {}

  void exec_list(const std::vector<StmtPtr>& stmts) {
    std::size_t m = mark();
    for (std::size_t k = 0; k < stmts.size(); ++k) {
      exec(*stmts[k]);
      if (k > 0) emit("ss", m);
    }
  }

  void exec(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Decl: declare(s); return;
      case StmtKind::Assign: {
        std::size_t m = mark();
        assign(*s.target, *s.value, m);
        return;
      }
      case StmtKind::ExprStmt: {
        std::size_t m = mark();
        eval(*s.expr);
        emit("ep", m);
        return;
      }
      case StmtKind::If: {
        std::size_t m = mark();
        bool c = rt::truthy(eval(*s.cond).v);
        Env saved = s_.env;
        exec(c ? *s.then_branch : *s.else_branch);
        s_.env = saved;
        if (s.multiparty) emit(c ? "mpiet" : "mpief", m);
        else emit(c ? "iet" : "ief", m);
        return;
      }
      case StmtKind::While: {
        for (std::uint64_t iter = 0;; ++iter) {
          if (iter >= budget_) fail(ErrorKind::LoopBudgetExceeded, "loop ran " + std::to_string(budget_) + " iterations");
          std::size_t m = mark();
          bool c = rt::truthy(eval(*s.cond).v);
          if (!c) {
            emit("wle", m);
            return;
          }
          Env saved = s_.env;
          exec(*s.body);
          s_.env = saved;
          emit("wlc", m);
        }
      }
      case StmtKind::Block: {
        std::size_t m = mark();
        Env saved = s_.env;
        exec_list(s.stmts);
        s_.env = saved;
        emit("sb", m);
        return;
      }
      case StmtKind::FunDef:
      case StmtKind::FunDecl:
        define_function(s);
        return;
    }
  }

 private:
  std::size_t mark() const { return s_.trace.d.size(); }
  void emit(const char* name, std::size_t m) {
    s_.trace.d.push_back({name, static_cast<std::uint32_t>(s_.trace.d.size() - m + 1), 0});
  }
  void touch(Location l) { s_.trace.l.push_back(l); }

  void check_aligned(Location l, const Type& ty) {
    if (!s_.mem.well_aligned(l, ty)) s_.misaligned = true;
  }

  Value load(Location l, const Type& ty) {
    auto [v, in_block] = s_.mem.deref_ptr(ty, l);
    check_aligned(l, ty);
    return v;
  }

  void store(Location l, const Value& v, const Type& ty) {
    const MemoryBlock& b = s_.mem.block(l.block);
    if (is_loc_type(ty) && l.offset == 0 && is_loc_type(b.type)) {
      s_.mem.update_ptr(l.block, v.ptr, ty);
      return;
    }
    check_aligned(l, ty);
    Bytes bytes = encode_val(ty, v);
    if (l.offset >= 0 && static_cast<std::size_t>(l.offset) + bytes.size() <= b.bytes.size())
      s_.mem.write_bytes(l, bytes);
    else
      s_.mem.write_oob(l, v, ty);
  }

  // Converts a value to storage type ty (numeric conversion or pointer retag).
  Value coerce(const Typed& x, const Type& ty) {
    if (is_loc_type(ty)) {
      if (x.v.is(Value::Kind::Loc)) return Value::of_ptr(PointerData{{x.v.loc}, {1}, std::max(ty.depth, 1)});
      if (!x.v.is(Value::Kind::Ptr)) fail(ErrorKind::TypeError, "cannot store " + to_string(x.v) + " in a pointer");
      PointerData p = x.v.ptr;
      p.depth = std::max(ty.depth, 1);
      return Value::of_ptr(std::move(p));
    }
    if (!x.t.is_scalar()) fail(ErrorKind::TypeError, "cannot store a " + to_string(x.t) + " in a " + to_string(ty));
    return rt::convert_public(x.v, ty.base);
  }

  Location single(const Value& p) {
    if (p.is(Value::Kind::Loc)) return p.loc;
    if (!p.is(Value::Kind::Ptr) || p.ptr.alpha() != 1) fail(ErrorKind::MalformedPointer, "not a single location");
    return p.ptr.locs[0];
  }

  Location data_of(const Env::Binding& b) {
    touch(b.loc);
    return s_.mem.read_ptr(b.loc.block, b.type).locs[0];
  }

  std::int32_t index_value(const Expr& e) {
    Typed i = eval(e);
    if (!i.v.is(Value::Kind::Int)) fail(ErrorKind::TypeError, "array index must be an int");
    return i.v.i;
  }

  void declare(const Stmt& s) {
    std::size_t m = mark();
    const Type& ty = s.type;
    if (ty.is_array()) {
      Typed n = eval(*s.array_size);
      if (!n.v.is(Value::Kind::Int) || n.v.i < 0) fail(ErrorKind::SizeMismatch, "array size must be a non-negative int");
      Type elem = ty.element();
      Location hdr = s_.mem.phi();
      Location data = s_.mem.phi();
      s_.mem.insert(hdr.block, make_block(ty, 1, encode_ptr(ty, {{data}, {1}, 1}), Origin::Declaration));
      std::vector<Value> zeros(static_cast<std::size_t>(n.v.i), rt::zero_of(elem));
      s_.mem.insert(data.block, make_block(elem, zeros.size(), encode_arr(elem, zeros), Origin::Declaration));
      s_.env = s_.env.bind(s.name, hdr, ty);
      touch(hdr);
      emit("da", m);
      if (s.has_init_list) {
        std::size_t mw = mark();
        if (s.init_list.size() > zeros.size()) fail(ErrorKind::SizeMismatch, "too many initializers for " + s.name);
        for (std::size_t k = 0; k < s.init_list.size(); ++k) {
          Value v = coerce(eval(*s.init_list[k]), elem);
          s_.mem.update_arr(data.block, k, v, elem);
          touch({data.block, static_cast<std::int64_t>(k * size_of(elem))});
        }
        emit("wae", mw);
        emit("ds", m);
      }
      return;
    }
    Value z = rt::zero_of(ty);
    Location l = s_.mem.allocate(make_block(ty, 1, encode_val(ty, z), Origin::Declaration));
    s_.env = s_.env.bind(s.name, l, ty);
    touch(l);
    emit(ty.is_pointer() ? "dp" : "dv", m);
    if (s.init) {
      Expr target;
      target.kind = ExprKind::Var;
      target.name = s.name;
      assign(target, *s.init, mark());
      emit("ds", m);
    }
  }

  void assign(const Expr& target, const Expr& value, std::size_t m) {
    switch (target.kind) {
      case ExprKind::Var: {
        const Env::Binding b = s_.env.lookup(target.name);
        if (b.type.is_array() || b.type.is_function()) fail(ErrorKind::TypeError, "cannot assign to " + target.name);
        Value v = coerce(eval(value), b.type);
        s_.mem.update_val(b.loc.block, v, b.type);
        touch(b.loc);
        emit(b.type.is_pointer() ? "wp" : "w", m);
        return;
      }
      case ExprKind::Index: {
        const Env::Binding b = s_.env.lookup(target.name);
        if (!b.type.is_array()) fail(ErrorKind::TypeError, target.name + " is not an array");
        std::int32_t i = index_value(*target.args[0]);
        Type elem = b.type.element();
        Value v = coerce(eval(value), elem);
        Location data = data_of(b);
        const MemoryBlock& blk = s_.mem.block(data.block);
        Location at{data.block, static_cast<std::int64_t>(i) * static_cast<std::int64_t>(size_of(elem))};
        if (i >= 0 && static_cast<std::size_t>(i) < blk.count) {
          s_.mem.update_arr(data.block, static_cast<std::size_t>(i), v, elem);
          touch(at);
          emit(target.multiparty ? "mpwe" : "wa", m);
        } else {
          check_aligned(at, elem);
          s_.mem.write_oob(at, v, elem);
          Location norm;
          if (s_.mem.normalize(at, norm)) touch(norm);
          emit("wao", m);
        }
        return;
      }
      case ExprKind::Deref: {
        Typed p = eval(*target.args[0]);
        if (!is_loc_type(p.t)) fail(ErrorKind::TypeError, "dereference of a non-pointer");
        Type pointee = p.t.element();
        Value v = coerce(eval(value), pointee);
        Location l = single(p.v);
        store(l, v, pointee);
        touch(l);
        emit(pointee.is_pointer() ? "wdp1" : "wdp", m);
        return;
      }
      default:
        fail(ErrorKind::TypeError, "not an assignable target");
    }
  }

  Typed eval(const Expr& e) {
    std::size_t m = mark();
    switch (e.kind) {
      case ExprKind::IntLit:
        return {Value::of_int(static_cast<std::int32_t>(e.int_value)), kPubInt};
      case ExprKind::FloatLit:
        return {Value::of_float(static_cast<float>(e.float_value)), Type::scalar(Label::Public, BaseType::Float)};
      case ExprKind::Null:
        return {Value::of_loc({0, 0}), Type::pointer(Label::Public, BaseType::Void, 1)};
      case ExprKind::Var: {
        const Env::Binding b = s_.env.lookup(e.name);
        touch(b.loc);
        if (b.type.is_array()) {
          Location data = s_.mem.read_ptr(b.loc.block, b.type).locs[0];
          emit("rae", m);
          return {Value::of_loc(data), b.type};
        }
        if (b.type.is_function()) fail(ErrorKind::TypeError, "function " + e.name + " used as a value");
        Value v = s_.mem.read_val(b.loc.block, b.type);
        emit(b.type.is_pointer() ? "rp" : "r", m);
        return {v, b.type};
      }
      case ExprKind::Index: {
        const Env::Binding b = s_.env.lookup(e.name);
        if (!b.type.is_array()) fail(ErrorKind::TypeError, e.name + " is not an array");
        std::int32_t i = index_value(*e.args[0]);
        Type elem = b.type.element();
        Location data = data_of(b);
        const MemoryBlock& blk = s_.mem.block(data.block);
        Location at{data.block, static_cast<std::int64_t>(i) * static_cast<std::int64_t>(size_of(elem))};
        if (i >= 0 && static_cast<std::size_t>(i) < blk.count) {
          Value v = s_.mem.read_arr(data.block, static_cast<std::size_t>(i), elem);
          touch(at);
          emit(e.multiparty ? "mpra" : "ra", m);
          return {v, elem};
        }
        check_aligned(at, elem);
        Value v = s_.mem.read_oob(at, elem);
        Location norm;
        if (s_.mem.normalize(at, norm)) touch(norm);
        emit("rao", m);
        return {v, elem};
      }
      case ExprKind::AddrOf: {
        const Env::Binding b = s_.env.lookup(e.name);
        emit("loc", m);
        Type t = b.type.is_pointer() ? Type::pointer(b.type.label, b.type.base, b.type.depth + 1)
                                     : Type::pointer(b.type.label, b.type.base, 1);
        return {Value::of_loc(b.loc), t};
      }
      case ExprKind::Deref: {
        Typed p = eval(*e.args[0]);
        if (!is_loc_type(p.t)) fail(ErrorKind::TypeError, "dereference of a non-pointer");
        Type pointee = p.t.element();
        Location l = single(p.v);
        Value v = load(l, pointee);
        touch(l);
        emit(pointee.is_pointer() ? "rdp1" : "rdp", m);
        return {v, pointee};
      }
      case ExprKind::PreInc:
        return pre_increment(*e.args[0], m);
      case ExprKind::Binary: {
        Typed a = eval(*e.args[0]);
        Typed b = eval(*e.args[1]);
        if (!a.t.is_scalar() || !b.t.is_scalar()) fail(ErrorKind::TypeError, "arithmetic on non-scalars");
        Value r = rt::public_binop(e.op, a.v, b.v);
        Type rt_type = r.is(Value::Kind::Float) ? Type::scalar(Label::Public, BaseType::Float) : kPubInt;
        emit(binop_code(e, r), m);
        return {r, rt_type};
      }
      case ExprKind::Cast: {
        Typed x = eval(*e.args[0]);
        Value v = e.type.is_scalar() ? rt::convert_public(x.v, e.type.base) : x.v;
        emit("cv", m);
        return {v, e.type};
      }
      case ExprKind::Call:
        call(e, m);
        return {Value::none(), Type::scalar(Label::Public, BaseType::Void)};
      case ExprKind::Malloc: {
        Typed n = eval(*e.args[0]);
        if (!n.v.is(Value::Kind::Int) || n.v.i < 0) fail(ErrorKind::SizeMismatch, "malloc size must be a non-negative int");
        auto size = static_cast<std::size_t>(n.v.i);
        Location l = s_.mem.allocate(
            make_block(Type::scalar(Label::Public, BaseType::Void), size, Bytes(size, 0), Origin::Heap));
        touch(l);
        emit("mal", m);
        return {Value::of_loc(l), Type::pointer(Label::Public, BaseType::Void, 1)};
      }
      case ExprKind::Sizeof:
        emit("ty", m);
        return {Value::of_int(static_cast<std::int32_t>(size_of(e.type))), kPubInt};
      case ExprKind::Free: {
        Typed p = eval(*e.args[0]);
        Location l = single(p.v);
        std::vector<Location> ls{l};
        if (!s_.mem.check_freeable(ls)) fail(ErrorKind::NotFreeable, "free of " + to_string(l));
        s_.mem.free_block(l.block);
        touch(l);
        emit("fre", m);
        return {Value::none(), Type::scalar(Label::Public, BaseType::Void)};
      }
      case ExprKind::Input:
      case ExprKind::Output:
        io(e, m);
        return {Value::none(), Type::scalar(Label::Public, BaseType::Void)};
      case ExprKind::Declassify:
        return eval(*e.args[0]);
      case ExprKind::PMalloc:
      case ExprKind::PFree:
        fail(ErrorKind::UnsupportedConstruct, "private primitive in an unlabeled program");
    }
    fail(ErrorKind::TypeError, "unknown expression");
  }

  static const char* binop_code(const Expr& e, const Value& r) {
    if (is_comparison(e.op)) {
      bool t = r.i != 0;
      if (e.multiparty) return t ? "mpcmpt" : "mpcmpf";
      switch (e.op) {
        case BinOp::Lt: return t ? "ltt" : "ltf";
        case BinOp::Eq: return t ? "eqt" : "eqf";
        default: return t ? "net" : "nef";
      }
    }
    if (e.multiparty) return "mpb";
    switch (e.op) {
      case BinOp::Add: return "bp";
      case BinOp::Sub: return "bs";
      case BinOp::Mul: return "bm";
      default: return "bd";
    }
  }

  Typed pre_increment(const Expr& target, std::size_t m) {
    if (target.kind == ExprKind::Var) {
      const Env::Binding b = s_.env.lookup(target.name);
      touch(b.loc);
      if (b.type.is_pointer()) {
        PointerData p = s_.mem.read_ptr(b.loc.block, b.type);
        auto [next, same] = s_.mem.get_location(p.locs[0], static_cast<std::int64_t>(size_of(b.type.element())));
        p.locs[0] = next;
        s_.mem.update_ptr(b.loc.block, p, b.type);
        emit("pin1", m);
        return {Value::of_ptr(p), b.type};
      }
      if (!b.type.is_scalar()) fail(ErrorKind::TypeError, "cannot increment " + target.name);
      Value v = rt::public_binop(BinOp::Add, s_.mem.read_val(b.loc.block, b.type), Value::of_int(1));
      v = rt::convert_public(v, b.type.base);
      s_.mem.update_val(b.loc.block, v, b.type);
      emit("pin", m);
      return {v, b.type};
    }
    if (target.kind == ExprKind::Deref) {
      Typed p = eval(*target.args[0]);
      if (!p.t.is_pointer()) fail(ErrorKind::TypeError, "dereference of a non-pointer");
      Type pointee = p.t.element();
      if (!pointee.is_scalar()) fail(ErrorKind::UnsupportedConstruct, "increment through a pointer to a pointer");
      Location l = single(p.v);
      Value v = rt::convert_public(rt::public_binop(BinOp::Add, load(l, pointee), Value::of_int(1)), pointee.base);
      store(l, v, pointee);
      touch(l);
      emit("pin2", m);
      return {v, pointee};
    }
    fail(ErrorKind::TypeError, "cannot increment this expression");
  }

  void call(const Expr& e, std::size_t m) {
    const Env::Binding fb = s_.env.lookup(e.name);
    if (!fb.type.is_function()) fail(ErrorKind::TypeError, e.name + " is not a function");
    touch(fb.loc);
    std::int32_t idx = s_.mem.read_val(fb.loc.block, fb.type).i;
    if (idx < 0 || static_cast<std::size_t>(idx) >= s_.functions.size() || !s_.functions[idx].def)
      fail(ErrorKind::UnboundVariable, "function " + e.name + " is declared but not defined");
    const FunctionDef fn = s_.functions[static_cast<std::size_t>(idx)];
    const Stmt& def = *fn.def;
    if (def.params.size() != e.args.size())
      fail(ErrorKind::TypeError, e.name + " expects " + std::to_string(def.params.size()) + " arguments");
    std::vector<Value> args;
    for (std::size_t k = 0; k < e.args.size(); ++k) args.push_back(coerce(eval(*e.args[k]), def.params[k].type));
    if (++depth_ > kMaxCallDepth) fail(ErrorKind::LoopBudgetExceeded, "call depth limit reached");
    Env saved = s_.env;
    s_.env = fn.env;
    for (std::size_t k = 0; k < args.size(); ++k) {
      const Type& pt = def.params[k].type;
      Location l = s_.mem.allocate(make_block(pt, 1, encode_val(pt, args[k]), Origin::Declaration));
      touch(l);
      s_.env = s_.env.bind(def.params[k].name, l, pt);
    }
    exec(*def.body);
    s_.env = saved;
    --depth_;
    emit("fc", m);
  }

  void define_function(const Stmt& s) {
    std::size_t m = mark();
    const Env::Binding* prior = s_.env.find(s.name);
    std::int32_t idx = -1;
    if (s.kind == StmtKind::FunDef) {
      idx = static_cast<std::int32_t>(s_.functions.size());
      s_.functions.push_back({});
    }
    Location l;
    if (prior && prior->type.is_function()) {
      l = prior->loc;
      if (s.kind == StmtKind::FunDef) s_.mem.update_val(l.block, Value::of_int(idx), s.type);
    } else {
      l = s_.mem.allocate(make_block(s.type, 1, encode_val(s.type, Value::of_int(idx)), Origin::Function));
      s_.env = s_.env.bind(s.name, l, s.type);
    }
    touch(l);
    if (s.kind == StmtKind::FunDef) {
      auto def = std::make_shared<Stmt>(s);
      s_.functions[static_cast<std::size_t>(idx)] = FunctionDef{def, s_.env, false};
    }
    emit(s.kind == StmtKind::FunDef ? "fd" : "fpd", m);
  }

  void io(const Expr& e, std::size_t m) {
    bool input = e.kind == ExprKind::Input;
    const Expr& var = *e.args[0];
    if (var.kind != ExprKind::Var) fail(ErrorKind::TypeError, "I/O needs a variable name");
    const Env::Binding b = s_.env.lookup(var.name);
    Typed who = eval(*e.args[1]);
    if (!who.v.is(Value::Kind::Int) || who.v.i < 1 || who.v.i > parties_)
      fail(ErrorKind::IndexOutOfParties,
           "party index " + to_string(who.v) + " with " + std::to_string(parties_) + " parties");
    int party = who.v.i;
    if (b.type.is_array()) {
      if (e.args.size() < 3) fail(ErrorKind::TypeError, "array I/O needs a length");
      Typed len = eval(*e.args[2]);
      if (!len.v.is(Value::Kind::Int) || len.v.i < 0) fail(ErrorKind::SizeMismatch, "I/O length must be a non-negative int");
      auto n = static_cast<std::size_t>(len.v.i);
      Type elem = b.type.element();
      Location data = data_of(b);
      if (n > s_.mem.block(data.block).count) fail(ErrorKind::SizeMismatch, "I/O length exceeds " + var.name + "'s size");
      if (input) {
        auto rec = in_.next(party, var.name);
        if (rec.size() < n) fail(ErrorKind::MissingInput, var.name + " needs " + std::to_string(n) + " values");
        for (std::size_t k = 0; k < n; ++k) {
          s_.mem.update_arr(data.block, k, rt::parse_public(rec[k], elem.base), elem);
          touch({data.block, static_cast<std::int64_t>(k * size_of(elem))});
        }
        emit("inp1", m);
      } else {
        std::string text = "[";
        for (std::size_t k = 0; k < n; ++k) {
          text += (k ? ", " : "") + rt::format_public(s_.mem.read_arr(data.block, k, elem));
          touch({data.block, static_cast<std::int64_t>(k * size_of(elem))});
        }
        text += "]";
        if (party == party_) s_.outputs.push_back({var.name, text});
        emit("out1", m);
      }
      return;
    }
    if (!b.type.is_scalar()) fail(ErrorKind::TypeError, "I/O on " + to_string(b.type));
    touch(b.loc);
    if (input) {
      auto rec = in_.next(party, var.name);
      if (rec.size() != 1) fail(ErrorKind::MissingInput, var.name + " expects a single value");
      s_.mem.update_val(b.loc.block, rt::parse_public(rec[0], b.type.base), b.type);
      emit("inp", m);
    } else {
      if (party == party_) s_.outputs.push_back({var.name, rt::format_public(s_.mem.read_val(b.loc.block, b.type))});
      emit("out", m);
    }
  }

  VanillaState& s_;
  InputSet& in_;
  int party_;
  int parties_;
  std::uint64_t budget_;
  int depth_ = 0;
};

}  // namespace

void exec_vanilla(VanillaState& state, const Stmt& stmt, InputSet& inputs, int party, int parties,
                  std::uint64_t loop_budget) {
  Machine(state, inputs, party, parties, loop_budget).exec(stmt);
}

VanillaResult run_vanilla(const Program& program, const InputSet& inputs, int parties, std::uint64_t loop_budget) {
  VanillaResult result;
  for (int p = 1; p <= parties; ++p) {
    VanillaState st;
    rt::allocate_default(st.mem);
    InputSet in = inputs;
    Machine(st, in, p, parties, loop_budget).exec_list(program.stmts);
    result.misaligned = result.misaligned || st.misaligned;
    if (p == 1) result.functions = st.functions;
    result.parties.push_back({std::move(st.env), std::move(st.mem), std::move(st.trace), std::move(st.outputs)});
  }
  return result;
}

}  // namespace smc2
