#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace smc2 {

enum class Label : std::uint8_t { Public, Private };

// Label join: private dominates.
inline Label join(Label a, Label b) {
  return (a == Label::Private || b == Label::Private) ? Label::Private : Label::Public;
}

enum class BaseType : std::uint8_t { Int, Float, Void };

struct FunctionSig;

struct Type {
  enum class Kind : std::uint8_t { Base, Pointer, Array, Function };

  Kind kind = Kind::Base;
  Label label = Label::Public;
  BaseType base = BaseType::Int;
  int depth = 0;  // pointer indirection level; 0 for non-pointers
  std::shared_ptr<const FunctionSig> sig;

  static Type scalar(Label l, BaseType b) { return {Kind::Base, l, b, 0, nullptr}; }
  static Type pointer(Label l, BaseType b, int depth) { return {Kind::Pointer, l, b, depth, nullptr}; }
  static Type array(Label l, BaseType b) { return {Kind::Array, l, b, 0, nullptr}; }
  static Type function(std::shared_ptr<const FunctionSig> sig);

  bool is_scalar() const { return kind == Kind::Base; }
  bool is_pointer() const { return kind == Kind::Pointer; }
  bool is_array() const { return kind == Kind::Array; }
  bool is_function() const { return kind == Kind::Function; }
  bool is_private() const { return label == Label::Private; }

  // Element type of an array or the pointee of a pointer.
  Type element() const;
  Type with_label(Label l) const;

  friend bool operator==(const Type& a, const Type& b);
};

struct FunctionSig {
  std::vector<Type> params;
  Type ret;
};

std::string to_string(const Type& t);

struct SourcePos {
  int line = 0;
  int col = 0;
};

enum class BinOp : std::uint8_t { Add, Sub, Mul, Div, Eq, Ne, Lt };

bool is_comparison(BinOp op);
std::string_view to_string(BinOp op);

struct Expr;
struct Stmt;
using ExprPtr = std::shared_ptr<const Expr>;
using StmtPtr = std::shared_ptr<const Stmt>;

enum class ExprKind : std::uint8_t {
  IntLit,
  FloatLit,
  Null,
  Var,      // x
  Index,    // x[args0]
  AddrOf,   // &x
  Deref,    // *args0
  PreInc,   // ++args0, args0 is Var or Deref
  Binary,   // args0 op args1
  Cast,     // (type) args0
  Call,     // name(args...)
  Malloc,   // malloc(args0)
  PMalloc,  // pmalloc(args0, type)
  Sizeof,   // sizeof(type)
  Free,     // free(args0)
  PFree,    // pfree(args0)
  Input,    // smcinput/mcinput(args0 lvalue, args1 party [, args2 length])
  Output,   // smcoutput/mcoutput(args0 lvalue, args1 party [, args2 length])
  Declassify,  // test-only backdoor: declassify(args0)
};

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  SourcePos pos;
  std::int64_t int_value = 0;
  double float_value = 0.0;
  std::string name;
  BinOp op = BinOp::Add;
  Type type;
  std::vector<ExprPtr> args;
  // Set by erasure: the source operation ran as a multiparty protocol.
  bool multiparty = false;
};

struct Param {
  Type type;
  std::string name;
};

enum class StmtKind : std::uint8_t { Decl, Assign, ExprStmt, If, While, Block, FunDef, FunDecl };

struct Stmt {
  StmtKind kind = StmtKind::ExprStmt;
  SourcePos pos;

  // Decl / FunDef / FunDecl
  Type type;
  std::string name;
  ExprPtr array_size;
  ExprPtr init;
  std::vector<ExprPtr> init_list;
  bool has_init_list = false;
  std::vector<Param> params;

  // Assign: target is Var, Index or Deref.
  ExprPtr target;
  ExprPtr value;

  // ExprStmt
  ExprPtr expr;

  // If / While
  ExprPtr cond;
  StmtPtr then_branch;
  StmtPtr else_branch;  // always present for If (an empty block when omitted)
  StmtPtr body;         // While body / FunDef body

  // Block
  std::vector<StmtPtr> stmts;

  bool multiparty = false;  // set by erasure on If
};

enum class Dialect : std::uint8_t { Smc2, Vanilla };

struct Program {
  Dialect dialect = Dialect::Smc2;
  std::vector<StmtPtr> stmts;
};

// Structural equality ignoring source positions and erasure hints.
bool same_expr(const Expr& a, const Expr& b);
bool same_stmt(const Stmt& a, const Stmt& b);
bool same_program(const Program& a, const Program& b);

// Node constructors used by the parser and by erasure.
ExprPtr make_expr(Expr e);
StmtPtr make_stmt(Stmt s);

}  // namespace smc2
