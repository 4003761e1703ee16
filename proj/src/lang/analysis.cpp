#include "smc2/analysis.hpp"

#include "smc2/error.hpp"

namespace smc2 {

void TypeEnv::declare(std::string name, Type type) {
  entries_.push_back({std::move(name), std::move(type), false});
}

void TypeEnv::declare_function(std::string name, Type type, bool side_effects) {
  entries_.push_back({std::move(name), std::move(type), side_effects});
}

void TypeEnv::set_side_effects(const std::string& name, bool side_effects) {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->name == name) {
      it->side_effects = side_effects;
      return;
    }
  }
}

const TypeEnv::Entry* TypeEnv::find(const std::string& name) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->name == name) return &*it;
  return nullptr;
}

const TypeEnv::Entry& TypeEnv::lookup(const std::string& name) const {
  const Entry* e = find(name);
  if (!e) fail(ErrorKind::UnboundVariable, name);
  return *e;
}

namespace {

Type arithmetic_result(const Type& a, const Type& b, const Expr& e) {
  if (!a.is_scalar() || !b.is_scalar() || a.base == BaseType::Void || b.base == BaseType::Void)
    fail(ErrorKind::TypeError, "operator '" + std::string(to_string(e.op)) + "' needs scalar operands at line " +
                                   std::to_string(e.pos.line));
  Label l = join(a.label, b.label);
  if (is_comparison(e.op)) return Type::scalar(l, BaseType::Int);
  BaseType base = (a.base == BaseType::Float || b.base == BaseType::Float) ? BaseType::Float : BaseType::Int;
  return Type::scalar(l, base);
}

}  // namespace

Type type_of(const Expr& e, const TypeEnv& env) {
  switch (e.kind) {
    case ExprKind::IntLit:
      return Type::scalar(Label::Public, BaseType::Int);
    case ExprKind::FloatLit:
      return Type::scalar(Label::Public, BaseType::Float);
    case ExprKind::Null:
      return Type::pointer(Label::Public, BaseType::Void, 1);
    case ExprKind::Var:
      return env.lookup(e.name).type;
    case ExprKind::Index: {
      Type arr = env.lookup(e.name).type;
      if (!arr.is_array()) fail(ErrorKind::TypeError, e.name + " is not an array");
      Type idx = type_of(*e.args[0], env);
      return Type::scalar(join(arr.label, idx.label), arr.base);
    }
    case ExprKind::AddrOf: {
      Type t = env.lookup(e.name).type;
      if (t.is_scalar()) return Type::pointer(t.label, t.base, 1);
      if (t.is_pointer()) return Type::pointer(t.label, t.base, t.depth + 1);
      fail(ErrorKind::TypeError, "cannot take the address of " + e.name);
    }
    case ExprKind::Deref: {
      Type p = type_of(*e.args[0], env);
      if (!p.is_pointer()) fail(ErrorKind::TypeError, "dereference of a non-pointer");
      return p.element();
    }
    case ExprKind::PreInc:
      return type_of(*e.args[0], env);
    case ExprKind::Binary:
      return arithmetic_result(type_of(*e.args[0], env), type_of(*e.args[1], env), e);
    case ExprKind::Cast:
      return e.type;
    case ExprKind::Call: {
      const auto& f = env.lookup(e.name);
      if (!f.type.is_function()) fail(ErrorKind::TypeError, e.name + " is not a function");
      return f.type.sig->ret;
    }
    case ExprKind::Malloc:
      return Type::pointer(Label::Public, BaseType::Void, 1);
    case ExprKind::PMalloc:
      if (e.type.is_pointer()) return Type::pointer(e.type.label, e.type.base, e.type.depth + 1);
      return Type::pointer(e.type.label, e.type.base, 1);
    case ExprKind::Sizeof:
      return Type::scalar(Label::Public, BaseType::Int);
    case ExprKind::Free:
    case ExprKind::PFree:
    case ExprKind::Input:
    case ExprKind::Output:
      return Type::scalar(Label::Public, BaseType::Void);
    case ExprKind::Declassify:
      return type_of(*e.args[0], env).with_label(Label::Public);
  }
  fail(ErrorKind::TypeError, "unknown expression");
}

Label label_of(const Expr& e, const TypeEnv& env) {
  switch (e.kind) {
    case ExprKind::IntLit:
    case ExprKind::FloatLit:
    case ExprKind::Null:
    case ExprKind::Sizeof:
    case ExprKind::AddrOf:
    case ExprKind::Declassify:
      return Label::Public;
    case ExprKind::Var:
      return env.lookup(e.name).type.label;
    case ExprKind::Index:
      return join(env.lookup(e.name).type.label, label_of(*e.args[0], env));
    case ExprKind::Deref: {
      Type p = type_of(*e.args[0], env);
      return join(label_of(*e.args[0], env), p.label);
    }
    case ExprKind::PreInc:
      return label_of(*e.args[0], env);
    case ExprKind::Call: {
      const auto& f = env.lookup(e.name);
      Label l = f.type.is_function() ? f.type.sig->ret.label : Label::Public;
      if (f.type.is_function() && f.type.sig->ret.base == BaseType::Void) l = Label::Public;
      for (const auto& a : e.args) l = join(l, label_of(*a, env));
      return l;
    }
    default: {
      Label l = Label::Public;
      for (const auto& a : e.args) l = join(l, label_of(*a, env));
      return l;
    }
  }
}

Label target_label(const Expr& target, const TypeEnv& env) {
  switch (target.kind) {
    case ExprKind::Var:
    case ExprKind::Index:
      return env.lookup(target.name).type.label;
    case ExprKind::Deref:
      return type_of(*target.args[0], env).label;
    default:
      fail(ErrorKind::TypeError, "not an assignable target");
  }
}

bool has_public_side_effects(const Expr& e, const TypeEnv& env) {
  switch (e.kind) {
    case ExprKind::Malloc:
    case ExprKind::PMalloc:
    case ExprKind::Free:
    case ExprKind::PFree:
    case ExprKind::Input:
    case ExprKind::Output:
      return true;
    case ExprKind::PreInc:
      if (target_label(*e.args[0], env) == Label::Public) return true;
      break;
    case ExprKind::Call: {
      const auto& f = env.lookup(e.name);
      if (f.side_effects) return true;
      break;
    }
    default:
      break;
  }
  for (const auto& a : e.args)
    if (has_public_side_effects(*a, env)) return true;
  return false;
}

void declare_statement(const Stmt& s, TypeEnv& env) {
  if (s.kind == StmtKind::Decl) env.declare(s.name, s.type);
}

bool has_public_side_effects(const Stmt& s, TypeEnv& env) {
  auto expr = [&](const ExprPtr& e) { return e && has_public_side_effects(*e, env); };
  switch (s.kind) {
    case StmtKind::Decl: {
      bool effects = expr(s.array_size) || expr(s.init);
      for (const auto& e : s.init_list) effects = effects || expr(e);
      bool public_write = s.type.label == Label::Public && (s.init || s.has_init_list);
      env.declare(s.name, s.type);
      return effects || public_write;
    }
    case StmtKind::Assign:
      return target_label(*s.target, env) == Label::Public || expr(s.target) || expr(s.value);
    case StmtKind::ExprStmt:
      return expr(s.expr);
    case StmtKind::If: {
      if (expr(s.cond)) return true;
      bool r;
      {
        ScopeGuard g(env);
        r = has_public_side_effects(*s.then_branch, env);
      }
      if (r) return true;
      ScopeGuard g(env);
      return has_public_side_effects(*s.else_branch, env);
    }
    case StmtKind::While: {
      if (expr(s.cond)) return true;
      ScopeGuard g(env);
      return has_public_side_effects(*s.body, env);
    }
    case StmtKind::Block: {
      ScopeGuard g(env);
      for (const auto& c : s.stmts)
        if (has_public_side_effects(*c, env)) return true;
      return false;
    }
    case StmtKind::FunDef:
    case StmtKind::FunDecl: {
      bool flag = false;
      env.declare_function(s.name, s.type, false);
      if (s.kind == StmtKind::FunDef) {
        ScopeGuard g(env);
        for (const auto& p : s.params) env.declare(p.name, p.type);
        flag = has_public_side_effects(*s.body, env);
      }
      env.set_side_effects(s.name, flag);
      return false;
    }
  }
  return false;
}

}  // namespace smc2
