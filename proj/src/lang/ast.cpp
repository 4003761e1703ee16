#include "smc2/ast.hpp"

#include "smc2/error.hpp"

namespace smc2 {

Type Type::function(std::shared_ptr<const FunctionSig> sig) {
  Type t;
  t.kind = Kind::Function;
  t.label = Label::Public;
  t.base = BaseType::Void;
  t.sig = std::move(sig);
  return t;
}

Type Type::element() const {
  switch (kind) {
    case Kind::Array:
      return scalar(label, base);
    case Kind::Pointer:
      return depth > 1 ? pointer(label, base, depth - 1) : scalar(label, base);
    default:
      fail(ErrorKind::TypeError, to_string(*this) + " has no element type");
  }
}

Type Type::with_label(Label l) const {
  Type t = *this;
  if (t.kind != Kind::Function) t.label = l;
  return t;
}

bool operator==(const Type& a, const Type& b) {
  if (a.kind != b.kind || a.label != b.label || a.base != b.base || a.depth != b.depth) return false;
  if (a.kind != Type::Kind::Function) return true;
  if (!a.sig || !b.sig) return a.sig == b.sig;
  return a.sig->params == b.sig->params && a.sig->ret == b.sig->ret;
}

std::string to_string(const Type& t) {
  auto base = [&] {
    switch (t.base) {
      case BaseType::Int: return std::string("int");
      case BaseType::Float: return std::string("float");
      case BaseType::Void: return std::string("void");
    }
    return std::string("?");
  };
  std::string label = t.label == Label::Private ? "private " : "public ";
  switch (t.kind) {
    case Type::Kind::Base:
      return label + base();
    case Type::Kind::Pointer:
      return label + base() + std::string(static_cast<std::size_t>(t.depth), '*');
    case Type::Kind::Array:
      return label + "const " + base() + "*";
    case Type::Kind::Function: {
      std::string s = "(";
      if (t.sig) {
        for (std::size_t i = 0; i < t.sig->params.size(); ++i) {
          if (i) s += ", ";
          s += to_string(t.sig->params[i]);
        }
        s += ") -> " + to_string(t.sig->ret);
      } else {
        s += ")";
      }
      return s;
    }
  }
  return "?";
}

bool is_comparison(BinOp op) { return op == BinOp::Eq || op == BinOp::Ne || op == BinOp::Lt; }

std::string_view to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
  }
  return "?";
}

namespace {

bool same_ptr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  return same_expr(*a, *b);
}

bool same_ptr(const StmtPtr& a, const StmtPtr& b) {
  if (!a || !b) return a == b;
  return same_stmt(*a, *b);
}

template <typename P>
bool same_list(const std::vector<P>& a, const std::vector<P>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_ptr(a[i], b[i])) return false;
  return true;
}

}  // namespace

bool same_expr(const Expr& a, const Expr& b) {
  return a.kind == b.kind && a.int_value == b.int_value && a.float_value == b.float_value &&
         a.name == b.name && a.op == b.op && a.type == b.type && same_list(a.args, b.args);
}

bool same_stmt(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || !(a.type == b.type) || a.name != b.name ||
      a.has_init_list != b.has_init_list || a.params.size() != b.params.size())
    return false;
  for (std::size_t i = 0; i < a.params.size(); ++i)
    if (!(a.params[i].type == b.params[i].type) || a.params[i].name != b.params[i].name)
      return false;
  return same_ptr(a.array_size, b.array_size) && same_ptr(a.init, b.init) &&
         same_list(a.init_list, b.init_list) && same_ptr(a.target, b.target) &&
         same_ptr(a.value, b.value) && same_ptr(a.expr, b.expr) && same_ptr(a.cond, b.cond) &&
         same_ptr(a.then_branch, b.then_branch) && same_ptr(a.else_branch, b.else_branch) &&
         same_ptr(a.body, b.body) && same_list(a.stmts, b.stmts);
}

bool same_program(const Program& a, const Program& b) {
  return a.dialect == b.dialect && same_list(a.stmts, b.stmts);
}

ExprPtr make_expr(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
StmtPtr make_stmt(Stmt s) { return std::make_shared<const Stmt>(std::move(s)); }

}  // namespace smc2
