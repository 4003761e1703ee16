#include "smc2/parser.hpp"

#include <cctype>
#include <charconv>
#include <string>
#include <unordered_set>
#include <vector>

#include "smc2/error.hpp"

namespace smc2 {
namespace {

enum class Tok {
  Ident,
  IntNum,
  FloatNum,
  Punct,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

const std::unordered_set<std::string> kUnsupportedWords = {
    "struct", "union", "for",   "return", "do",      "switch", "case", "break",
    "continue", "goto", "enum", "typedef", "char", "double", "long", "short",
    "unsigned", "signed", "static", "extern", "const",
};

// Punctuation the grammar does not cover; reported as unsupported rather than a syntax error.
const std::unordered_set<std::string> kUnsupportedPunct = {
    ">", "<=", ">=", "&&", "||", "!", "%", "+=", "-=", "*=", "/=",
    "--", "->", ".", "?", ":", "|", "^", "~", "<<", ">>", "%=",
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space_and_comments();
      Token t;
      t.pos = {line_, col_};
      if (at_end()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
          t.text += advance();
        t.kind = Tok::Ident;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) t.text += advance();
        t.kind = Tok::IntNum;
        if (!at_end() && peek() == '.') {
          t.text += advance();
          while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) t.text += advance();
          t.kind = Tok::FloatNum;
        }
        if (!at_end() && (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
          throw SyntaxError(t.pos.line, t.pos.col, "malformed number literal");
      } else {
        t.kind = Tok::Punct;
        static const char* two[] = {"==", "!=", "++", "<=", ">=", "&&", "||", "+=", "-=",
                                    "*=", "/=", "--", "->", "<<", ">>", "%="};
        std::string pair = src_.substr(pos_, 2).size() == 2 ? std::string(src_.substr(pos_, 2)) : "";
        bool matched = false;
        for (const char* p : two) {
          if (pair == p) {
            t.text = pair;
            advance();
            advance();
            matched = true;
            break;
          }
        }
        if (!matched) {
          static const std::string singles = "(){}[];,=<+-*/&>!%.?:|^~";
          if (singles.find(c) == std::string::npos)
            throw SyntaxError(t.pos.line, t.pos.col, std::string("unexpected character '") + c + "'");
          t.text = std::string(1, advance());
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (!at_end()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        int line = line_, col = col_;
        advance();
        advance();
        while (!at_end() && !(peek() == '*' && peek(1) == '/')) advance();
        if (at_end()) throw SyntaxError(line, col, "unterminated comment");
        advance();
        advance();
      } else if (c == '#') {
        throw Error(ErrorKind::UnsupportedConstruct,
                    std::to_string(line_) + ":" + std::to_string(col_) + ": preprocessor directive");
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, const ParseOptions& opts) : toks_(std::move(toks)), opts_(opts) {}

  Program program() {
    Program p;
    p.dialect = opts_.dialect;
    while (cur().kind != Tok::End) {
      auto stmts = statement();
      for (auto& s : stmts) p.stmts.push_back(std::move(s));
    }
    return p;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  const Token& ahead(std::size_t n) const {
    return toks_[std::min(i_ + n, toks_.size() - 1)];
  }
  bool is(std::string_view text) const {
    return (cur().kind == Tok::Punct || cur().kind == Tok::Ident) && cur().text == text;
  }
  Token take() { return toks_[i_++]; }

  [[noreturn]] void syntax(const Token& t, const std::string& msg) const {
    throw SyntaxError(t.pos.line, t.pos.col, msg);
  }
  [[noreturn]] void unsupported(const Token& t, const std::string& what) const {
    throw Error(ErrorKind::UnsupportedConstruct,
                std::to_string(t.pos.line) + ":" + std::to_string(t.pos.col) + ": " + what);
  }

  void check_supported(const Token& t) const {
    if (t.kind == Tok::Punct && kUnsupportedPunct.count(t.text)) unsupported(t, "operator '" + t.text + "'");
    if (t.kind == Tok::Ident && kUnsupportedWords.count(t.text)) unsupported(t, "'" + t.text + "'");
  }

  void expect(std::string_view text) {
    if (!is(text)) {
      check_supported(cur());
      syntax(cur(), "expected '" + std::string(text) + "' but found '" + describe(cur()) + "'");
    }
    ++i_;
  }

  static std::string describe(const Token& t) { return t.kind == Tok::End ? "end of input" : t.text; }

  std::string identifier() {
    if (cur().kind != Tok::Ident || is_reserved(cur().text)) {
      check_supported(cur());
      syntax(cur(), "expected identifier but found '" + describe(cur()) + "'");
    }
    return take().text;
  }

  bool is_reserved(const std::string& w) const {
    static const std::unordered_set<std::string> reserved = {
        "private", "public", "int",  "float",   "void",      "if",        "else",
        "while",   "sizeof", "malloc", "pmalloc", "free",    "pfree",     "smcinput",
        "smcoutput", "mcinput", "mcoutput", "NULL"};
    return reserved.count(w) || kUnsupportedWords.count(w);
  }

  bool at_type_start() const {
    if (cur().kind != Tok::Ident) return false;
    const auto& w = cur().text;
    return w == "private" || w == "public" || w == "int" || w == "float" || w == "void";
  }

  // Parses "[label] bty" and returns the scalar type plus whether a label was given.
  std::pair<Type, bool> type_spec() {
    std::optional<Label> label;
    if (is("private") || is("public")) {
      if (opts_.dialect == Dialect::Vanilla) unsupported(cur(), "privacy label in Vanilla C");
      label = take().text == "private" ? Label::Private : Label::Public;
    }
    BaseType base;
    if (is("int")) base = BaseType::Int;
    else if (is("float")) base = BaseType::Float;
    else if (is("void")) base = BaseType::Void;
    else {
      check_supported(cur());
      syntax(cur(), "expected a base type");
    }
    Token bt = take();
    if (base == BaseType::Void && label == Label::Private)
      syntax(bt, "void cannot carry a private label");
    Label l;
    if (opts_.dialect == Dialect::Vanilla || base == BaseType::Void) l = Label::Public;
    else l = label.value_or(Label::Private);
    return {Type::scalar(l, base), label.has_value()};
  }

  int stars() {
    int n = 0;
    while (is("*")) {
      ++i_;
      ++n;
    }
    return n;
  }

  static Type apply_stars(Type base, int n) {
    if (n == 0) return base;
    return Type::pointer(base.label, base.base, n);
  }

  Type full_type() {
    Type t = type_spec().first;
    return apply_stars(t, stars());
  }

  std::vector<StmtPtr> statement() {
    check_supported(cur());
    if (is("{")) return {block()};
    if (is(";")) {
      Stmt s;
      s.kind = StmtKind::Block;
      s.pos = take().pos;
      return {make_stmt(std::move(s))};
    }
    if (is("if")) return {if_stmt()};
    if (is("while")) return {while_stmt()};
    if (at_type_start()) return declaration();
    return {simple_statement()};
  }

  StmtPtr block() {
    Stmt s;
    s.kind = StmtKind::Block;
    s.pos = cur().pos;
    expect("{");
    while (!is("}")) {
      if (cur().kind == Tok::End) syntax(cur(), "unterminated block");
      for (auto& st : statement()) s.stmts.push_back(std::move(st));
    }
    expect("}");
    return make_stmt(std::move(s));
  }

  StmtPtr as_single(std::vector<StmtPtr> stmts, SourcePos pos) {
    if (stmts.size() == 1) return stmts.front();
    // A multi-declarator declaration used as a branch body: wrap it.
    Stmt b;
    b.kind = StmtKind::Block;
    b.pos = pos;
    b.stmts = std::move(stmts);
    return make_stmt(std::move(b));
  }

  StmtPtr if_stmt() {
    Stmt s;
    s.kind = StmtKind::If;
    s.pos = take().pos;
    expect("(");
    s.cond = expression();
    expect(")");
    SourcePos tp = cur().pos;
    s.then_branch = as_single(statement(), tp);
    if (is("else")) {
      ++i_;
      SourcePos ep = cur().pos;
      s.else_branch = as_single(statement(), ep);
    } else {
      Stmt empty;
      empty.kind = StmtKind::Block;
      empty.pos = s.pos;
      s.else_branch = make_stmt(std::move(empty));
    }
    return make_stmt(std::move(s));
  }

  StmtPtr while_stmt() {
    Stmt s;
    s.kind = StmtKind::While;
    s.pos = take().pos;
    expect("(");
    s.cond = expression();
    expect(")");
    SourcePos bp = cur().pos;
    s.body = as_single(statement(), bp);
    return make_stmt(std::move(s));
  }

  std::vector<StmtPtr> declaration() {
    SourcePos pos = cur().pos;
    Type base = type_spec().first;
    std::vector<StmtPtr> out;
    // Function definition or prototype: "ty [*] name ( ... )".
    {
      std::size_t save = i_;
      int n = stars();
      if (cur().kind == Tok::Ident && !is_reserved(cur().text) && ahead(1).kind == Tok::Punct &&
          ahead(1).text == "(") {
        return {function(apply_stars(base, n), pos)};
      }
      i_ = save;
    }
    while (true) {
      Stmt d;
      d.kind = StmtKind::Decl;
      d.pos = cur().pos;
      int n = stars();
      d.type = apply_stars(base, n);
      d.name = identifier();
      if (is("[")) {
        Token lb = take();
        if (n != 0) unsupported(lb, "arrays of pointers");
        if (base.base == BaseType::Void) syntax(lb, "array of void");
        d.array_size = expression();
        expect("]");
        if (is("[")) unsupported(cur(), "multi-dimensional arrays");
        d.type = Type::array(base.label, base.base);
      } else if (d.type.is_scalar() && d.type.base == BaseType::Void) {
        syntax(cur(), "variable of type void");
      }
      if (is("=")) {
        ++i_;
        if (is("{")) {
          ++i_;
          d.has_init_list = true;
          if (!is("}")) {
            d.init_list.push_back(expression());
            while (is(",")) {
              ++i_;
              d.init_list.push_back(expression());
            }
          }
          expect("}");
        } else {
          d.init = expression();
        }
      }
      out.push_back(make_stmt(std::move(d)));
      if (is(",")) {
        ++i_;
        continue;
      }
      expect(";");
      return out;
    }
  }

  StmtPtr function(Type ret, SourcePos pos) {
    Stmt f;
    f.pos = pos;
    f.name = identifier();
    expect("(");
    if (is("void") && ahead(1).kind == Tok::Punct && ahead(1).text == ")") {
      ++i_;
    } else if (!is(")")) {
      while (true) {
        Param p;
        p.type = full_type();
        p.name = identifier();
        if (is("[")) unsupported(cur(), "array parameters");
        f.params.push_back(std::move(p));
        if (!is(",")) break;
        ++i_;
      }
    }
    expect(")");
    auto sig = std::make_shared<FunctionSig>();
    for (const auto& p : f.params) sig->params.push_back(p.type);
    sig->ret = ret;
    f.type = Type::function(std::move(sig));
    if (is(";")) {
      ++i_;
      f.kind = StmtKind::FunDecl;
    } else {
      f.kind = StmtKind::FunDef;
      f.body = block();
    }
    return make_stmt(std::move(f));
  }

  StmtPtr simple_statement() {
    Stmt s;
    s.pos = cur().pos;
    ExprPtr e = expression();
    if (is("=")) {
      Token eq = take();
      if (e->kind != ExprKind::Var && e->kind != ExprKind::Index && e->kind != ExprKind::Deref)
        syntax(eq, "left side of assignment is not assignable");
      s.kind = StmtKind::Assign;
      s.target = e;
      s.value = expression();
    } else {
      s.kind = StmtKind::ExprStmt;
      s.expr = e;
    }
    expect(";");
    return make_stmt(std::move(s));
  }

  ExprPtr expression() { return equality(); }

  ExprPtr binary(ExprPtr l, BinOp op, ExprPtr r, SourcePos pos) {
    Expr e;
    e.kind = ExprKind::Binary;
    e.pos = pos;
    e.op = op;
    e.args = {std::move(l), std::move(r)};
    return make_expr(std::move(e));
  }

  ExprPtr equality() {
    ExprPtr l = relational();
    while (is("==") || is("!=")) {
      Token t = take();
      l = binary(l, t.text == "==" ? BinOp::Eq : BinOp::Ne, relational(), t.pos);
    }
    return l;
  }

  ExprPtr relational() {
    ExprPtr l = additive();
    while (is("<")) {
      Token t = take();
      l = binary(l, BinOp::Lt, additive(), t.pos);
    }
    check_supported(cur());
    return l;
  }

  ExprPtr additive() {
    ExprPtr l = multiplicative();
    while (is("+") || is("-")) {
      Token t = take();
      l = binary(l, t.text == "+" ? BinOp::Add : BinOp::Sub, multiplicative(), t.pos);
    }
    return l;
  }

  ExprPtr multiplicative() {
    ExprPtr l = unary();
    while (is("*") || is("/")) {
      Token t = take();
      l = binary(l, t.text == "*" ? BinOp::Mul : BinOp::Div, unary(), t.pos);
    }
    return l;
  }

  ExprPtr var_expr(SourcePos pos, std::string name) {
    Expr v;
    v.kind = ExprKind::Var;
    v.pos = pos;
    v.name = std::move(name);
    return make_expr(std::move(v));
  }

  ExprPtr unary() {
    check_supported(cur());
    SourcePos pos = cur().pos;
    if (is("&")) {
      ++i_;
      Expr e;
      e.kind = ExprKind::AddrOf;
      e.pos = pos;
      e.name = identifier();
      if (is("[")) unsupported(cur(), "address of an array element");
      return make_expr(std::move(e));
    }
    if (is("*")) {
      ++i_;
      Expr e;
      e.kind = ExprKind::Deref;
      e.pos = pos;
      e.args = {unary()};
      return make_expr(std::move(e));
    }
    if (is("++")) {
      ++i_;
      Expr e;
      e.kind = ExprKind::PreInc;
      e.pos = pos;
      if (is("*")) {
        Token star = cur();
        ++i_;
        Expr d;
        d.kind = ExprKind::Deref;
        d.pos = star.pos;
        Token nt = cur();
        d.args = {var_expr(nt.pos, identifier())};
        e.args = {make_expr(std::move(d))};
        return make_expr(std::move(e));
      }
      Token nt = cur();
      e.args = {var_expr(nt.pos, identifier())};
      if (is("[")) unsupported(cur(), "pre-increment of an array element");
      return make_expr(std::move(e));
    }
    if (is("-")) {
      ++i_;
      if (cur().kind == Tok::IntNum || cur().kind == Tok::FloatNum) {
        ExprPtr lit = primary();
        Expr neg = *lit;
        neg.pos = pos;
        neg.int_value = -neg.int_value;
        neg.float_value = -neg.float_value;
        return make_expr(std::move(neg));
      }
      Expr zero;
      zero.kind = ExprKind::IntLit;
      zero.pos = pos;
      return binary(make_expr(std::move(zero)), BinOp::Sub, unary(), pos);
    }
    if (is("(") && ahead(1).kind == Tok::Ident &&
        (ahead(1).text == "private" || ahead(1).text == "public" || ahead(1).text == "int" ||
         ahead(1).text == "float" || ahead(1).text == "void")) {
      ++i_;
      Expr e;
      e.kind = ExprKind::Cast;
      e.pos = pos;
      e.type = full_type();
      expect(")");
      e.args = {unary()};
      return make_expr(std::move(e));
    }
    return primary();
  }

  ExprPtr prim_call(ExprKind kind, SourcePos pos) {
    Expr e;
    e.kind = kind;
    e.pos = pos;
    expect("(");
    e.args = {expression()};
    expect(")");
    return make_expr(std::move(e));
  }

  ExprPtr io_call(ExprKind kind, SourcePos pos) {
    Expr e;
    e.kind = kind;
    e.pos = pos;
    expect("(");
    Token nt = cur();
    std::string name = identifier();
    ExprPtr target;
    if (is("[")) {
      ++i_;
      Expr idx;
      idx.kind = ExprKind::Index;
      idx.pos = nt.pos;
      idx.name = name;
      idx.args = {expression()};
      expect("]");
      target = make_expr(std::move(idx));
    } else {
      target = var_expr(nt.pos, name);
    }
    e.args.push_back(target);
    expect(",");
    e.args.push_back(expression());
    if (is(",")) {
      ++i_;
      e.args.push_back(expression());
    }
    expect(")");
    return make_expr(std::move(e));
  }

  ExprPtr primary() {
    check_supported(cur());
    Token t = cur();
    if (t.kind == Tok::IntNum) {
      ++i_;
      Expr e;
      e.kind = ExprKind::IntLit;
      e.pos = t.pos;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), e.int_value);
      if (ec != std::errc()) syntax(t, "integer literal out of range");
      return make_expr(std::move(e));
    }
    if (t.kind == Tok::FloatNum) {
      ++i_;
      Expr e;
      e.kind = ExprKind::FloatLit;
      e.pos = t.pos;
      e.float_value = std::stod(t.text);
      return make_expr(std::move(e));
    }
    if (t.kind == Tok::Punct && t.text == "(") {
      ++i_;
      ExprPtr e = expression();
      expect(")");
      return e;
    }
    if (t.kind != Tok::Ident) syntax(t, "expected an expression but found '" + describe(t) + "'");
    const std::string& w = t.text;
    bool smc = opts_.dialect == Dialect::Smc2;
    if (w == "NULL") {
      ++i_;
      Expr e;
      e.kind = ExprKind::Null;
      e.pos = t.pos;
      return make_expr(std::move(e));
    }
    if (w == "sizeof") {
      ++i_;
      Expr e;
      e.kind = ExprKind::Sizeof;
      e.pos = t.pos;
      expect("(");
      e.type = full_type();
      expect(")");
      return make_expr(std::move(e));
    }
    if (w == "malloc") {
      ++i_;
      return prim_call(ExprKind::Malloc, t.pos);
    }
    if (w == "free") {
      ++i_;
      return prim_call(ExprKind::Free, t.pos);
    }
    if (smc && w == "pmalloc") {
      ++i_;
      Expr e;
      e.kind = ExprKind::PMalloc;
      e.pos = t.pos;
      expect("(");
      e.args = {expression()};
      expect(",");
      e.type = full_type();
      expect(")");
      return make_expr(std::move(e));
    }
    if (smc && w == "pfree") {
      ++i_;
      return prim_call(ExprKind::PFree, t.pos);
    }
    if ((smc && w == "smcinput") || (!smc && w == "mcinput")) {
      ++i_;
      return io_call(ExprKind::Input, t.pos);
    }
    if ((smc && w == "smcoutput") || (!smc && w == "mcoutput")) {
      ++i_;
      return io_call(ExprKind::Output, t.pos);
    }
    if (opts_.allow_declassify && w == "declassify") {
      ++i_;
      return prim_call(ExprKind::Declassify, t.pos);
    }
    if (w == "pmalloc" || w == "pfree" || w == "smcinput" || w == "smcoutput")
      unsupported(t, "'" + w + "' in Vanilla C");
    if (w == "mcinput" || w == "mcoutput") unsupported(t, "'" + w + "' in SMC2 source");
    std::string name = identifier();
    if (is("(")) {
      ++i_;
      Expr e;
      e.kind = ExprKind::Call;
      e.pos = t.pos;
      e.name = name;
      if (!is(")")) {
        e.args.push_back(expression());
        while (is(",")) {
          ++i_;
          e.args.push_back(expression());
        }
      }
      expect(")");
      return make_expr(std::move(e));
    }
    if (is("[")) {
      ++i_;
      Expr e;
      e.kind = ExprKind::Index;
      e.pos = t.pos;
      e.name = name;
      e.args = {expression()};
      expect("]");
      if (is("[")) unsupported(cur(), "multi-dimensional arrays");
      return make_expr(std::move(e));
    }
    return var_expr(t.pos, name);
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  ParseOptions opts_;
};

}  // namespace

Program parse(std::string_view source, const ParseOptions& options) {
  Lexer lexer(source);
  Parser parser(lexer.run(), options);
  return parser.program();
}

}  // namespace smc2
