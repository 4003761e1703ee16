#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smc2/ast.hpp"

namespace smc2 {

// Block-structured static environment: variable types plus, for functions,
// the declaration-time public-side-effect flag.
class TypeEnv {
 public:
  struct Entry {
    std::string name;
    Type type;
    bool side_effects = false;  // functions only
  };

  void declare(std::string name, Type type);
  void declare_function(std::string name, Type type, bool side_effects);
  void set_side_effects(const std::string& name, bool side_effects);

  const Entry* find(const std::string& name) const;
  // Throws UnboundVariable.
  const Entry& lookup(const std::string& name) const;

  std::size_t mark() const { return entries_.size(); }
  void restore(std::size_t mark) { entries_.resize(mark); }

 private:
  std::vector<Entry> entries_;
};

class ScopeGuard {
 public:
  explicit ScopeGuard(TypeEnv& env) : env_(env), mark_(env.mark()) {}
  ~ScopeGuard() { env_.restore(mark_); }
  ScopeGuard(const ScopeGuard&) = delete;
  ScopeGuard& operator=(const ScopeGuard&) = delete;

 private:
  TypeEnv& env_;
  std::size_t mark_;
};

// Static type of an expression. Throws UnboundVariable or TypeError.
Type type_of(const Expr& e, const TypeEnv& env);

// Private iff some subexpression reads a private variable or dereferences a private pointer.
Label label_of(const Expr& e, const TypeEnv& env);

// Label of the storage an assignment target writes to.
Label target_label(const Expr& target, const TypeEnv& env);

// True iff s writes public data, allocates, frees, or performs I/O, directly or via calls.
bool has_public_side_effects(const Stmt& s, TypeEnv& env);
bool has_public_side_effects(const Expr& e, const TypeEnv& env);

// Declares the statement's binding (declarations and functions) into env.
void declare_statement(const Stmt& s, TypeEnv& env);

}  // namespace smc2
