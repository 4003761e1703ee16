#include <sstream>

#include "smc2/parser.hpp"

namespace smc2 {
namespace {

std::string type_text(const Type& t, Dialect d) {
  std::string s;
  if (d == Dialect::Smc2 && t.base != BaseType::Void)
    s += t.label == Label::Private ? "private " : "public ";
  switch (t.base) {
    case BaseType::Int: s += "int"; break;
    case BaseType::Float: s += "float"; break;
    case BaseType::Void: s += "void"; break;
  }
  if (t.is_pointer()) s += std::string(static_cast<std::size_t>(t.depth), '*');
  return s;
}

int precedence(const Expr& e) {
  if (e.kind != ExprKind::Binary) return 10;
  switch (e.op) {
    case BinOp::Eq:
    case BinOp::Ne: return 1;
    case BinOp::Lt: return 2;
    case BinOp::Add:
    case BinOp::Sub: return 3;
    case BinOp::Mul:
    case BinOp::Div: return 4;
  }
  return 10;
}

std::string float_text(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  std::string s = os.str();
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void print_expr(std::ostream& os, const Expr& e, Dialect d);

void print_operand(std::ostream& os, const Expr& e, Dialect d, bool paren) {
  if (paren) os << '(';
  print_expr(os, e, d);
  if (paren) os << ')';
}

void print_unary_operand(std::ostream& os, const Expr& e, Dialect d) {
  bool simple = e.kind != ExprKind::Binary && e.kind != ExprKind::Cast &&
                !(e.kind == ExprKind::IntLit && e.int_value < 0) &&
                !(e.kind == ExprKind::FloatLit && e.float_value < 0);
  print_operand(os, e, d, !simple);
}

void print_expr(std::ostream& os, const Expr& e, Dialect d) {
  switch (e.kind) {
    case ExprKind::IntLit:
      os << e.int_value;
      return;
    case ExprKind::FloatLit:
      os << float_text(e.float_value);
      return;
    case ExprKind::Null:
      os << "NULL";
      return;
    case ExprKind::Var:
      os << e.name;
      return;
    case ExprKind::Index:
      os << e.name << '[';
      print_expr(os, *e.args[0], d);
      os << ']';
      return;
    case ExprKind::AddrOf:
      os << '&' << e.name;
      return;
    case ExprKind::Deref:
      os << '*';
      print_unary_operand(os, *e.args[0], d);
      return;
    case ExprKind::PreInc:
      os << "++";
      print_unary_operand(os, *e.args[0], d);
      return;
    case ExprKind::Binary: {
      int p = precedence(e);
      const Expr& l = *e.args[0];
      const Expr& r = *e.args[1];
      print_operand(os, l, d, precedence(l) < p);
      os << ' ' << to_string(e.op) << ' ';
      bool rneg = (r.kind == ExprKind::IntLit && r.int_value < 0) ||
                  (r.kind == ExprKind::FloatLit && r.float_value < 0);
      print_operand(os, r, d, precedence(r) <= p || rneg);
      return;
    }
    case ExprKind::Cast:
      os << '(' << type_text(e.type, d) << ") ";
      print_unary_operand(os, *e.args[0], d);
      return;
    case ExprKind::Call:
      os << e.name << '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        print_expr(os, *e.args[i], d);
      }
      os << ')';
      return;
    case ExprKind::Malloc:
      os << "malloc(";
      print_expr(os, *e.args[0], d);
      os << ')';
      return;
    case ExprKind::PMalloc:
      os << "pmalloc(";
      print_expr(os, *e.args[0], d);
      os << ", " << type_text(e.type, d) << ')';
      return;
    case ExprKind::Sizeof:
      os << "sizeof(" << type_text(e.type, d) << ')';
      return;
    case ExprKind::Free:
    case ExprKind::PFree:
    case ExprKind::Declassify:
      os << (e.kind == ExprKind::Free ? "free(" : e.kind == ExprKind::PFree ? "pfree(" : "declassify(");
      print_expr(os, *e.args[0], d);
      os << ')';
      return;
    case ExprKind::Input:
    case ExprKind::Output: {
      bool in = e.kind == ExprKind::Input;
      os << (d == Dialect::Smc2 ? (in ? "smcinput(" : "smcoutput(") : (in ? "mcinput(" : "mcoutput("));
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        print_expr(os, *e.args[i], d);
      }
      os << ')';
      return;
    }
  }
}

void print_stmt(std::ostream& os, const Stmt& s, Dialect d, int indent);

void pad(std::ostream& os, int indent) { os << std::string(static_cast<std::size_t>(indent) * 2, ' '); }

// Prints a branch or loop body right after its header. Returns true when the
// output already ends with a newline.
bool print_body(std::ostream& os, const Stmt& s, Dialect d, int indent) {
  if (s.kind == StmtKind::Block) {
    if (s.stmts.empty()) {
      os << " {}";
      return false;
    }
    os << " {\n";
    for (const auto& c : s.stmts) print_stmt(os, *c, d, indent + 1);
    pad(os, indent);
    os << '}';
    return false;
  }
  os << '\n';
  print_stmt(os, s, d, indent + 1);
  return true;
}

void print_stmt(std::ostream& os, const Stmt& s, Dialect d, int indent) {
  pad(os, indent);
  switch (s.kind) {
    case StmtKind::Decl:
      if (s.type.is_array()) {
        os << type_text(Type::scalar(s.type.label, s.type.base), d) << ' ' << s.name << '[';
        print_expr(os, *s.array_size, d);
        os << ']';
      } else {
        os << type_text(s.type, d) << ' ' << s.name;
      }
      if (s.has_init_list) {
        os << " = {";
        for (std::size_t i = 0; i < s.init_list.size(); ++i) {
          if (i) os << ", ";
          print_expr(os, *s.init_list[i], d);
        }
        os << '}';
      } else if (s.init) {
        os << " = ";
        print_expr(os, *s.init, d);
      }
      os << ";\n";
      return;
    case StmtKind::Assign:
      print_expr(os, *s.target, d);
      os << " = ";
      print_expr(os, *s.value, d);
      os << ";\n";
      return;
    case StmtKind::ExprStmt:
      print_expr(os, *s.expr, d);
      os << ";\n";
      return;
    case StmtKind::If:
      os << "if (";
      print_expr(os, *s.cond, d);
      os << ')';
      if (print_body(os, *s.then_branch, d, indent)) {
        pad(os, indent);
        os << "else";
      } else {
        os << " else";
      }
      if (!print_body(os, *s.else_branch, d, indent)) os << '\n';
      return;
    case StmtKind::While:
      os << "while (";
      print_expr(os, *s.cond, d);
      os << ')';
      if (!print_body(os, *s.body, d, indent)) os << '\n';
      return;
    case StmtKind::Block:
      if (s.stmts.empty()) {
        os << "{}\n";
        return;
      }
      os << "{\n";
      for (const auto& c : s.stmts) print_stmt(os, *c, d, indent + 1);
      pad(os, indent);
      os << "}\n";
      return;
    case StmtKind::FunDef:
    case StmtKind::FunDecl: {
      os << type_text(s.type.sig->ret, d) << ' ' << s.name << '(';
      if (s.params.empty()) os << "void";
      for (std::size_t i = 0; i < s.params.size(); ++i) {
        if (i) os << ", ";
        os << type_text(s.params[i].type, d) << ' ' << s.params[i].name;
      }
      os << ')';
      if (s.kind == StmtKind::FunDecl) {
        os << ";\n";
      } else {
        print_body(os, *s.body, d, indent);
        os << '\n';
      }
      return;
    }
  }
}

}  // namespace

std::string print(const Expr& expr, Dialect dialect) {
  std::ostringstream os;
  print_expr(os, expr, dialect);
  return os.str();
}

std::string print(const Stmt& stmt, Dialect dialect, int indent) {
  std::ostringstream os;
  print_stmt(os, stmt, dialect, indent);
  return os.str();
}

std::string print(const Program& program) {
  std::ostringstream os;
  for (const auto& s : program.stmts) print_stmt(os, *s, program.dialect, 0);
  return os.str();
}

}  // namespace smc2
