#pragma once

#include <memory>
#include <string>
#include <vector>

#include "smc2/ast.hpp"
#include "smc2/value.hpp"

namespace smc2 {

// Variable environment: name -> (location, type). Persistent, so saving the
// environment before a scope and restoring it afterwards is a plain copy.
class Env {
 public:
  struct Binding {
    std::string name;
    Location loc;
    Type type;
  };

  Env bind(std::string name, Location loc, Type type) const;
  const Binding* find(const std::string& name) const;
  // Throws UnboundVariable.
  const Binding& lookup(const std::string& name) const;

  // Visible bindings, innermost last, shadowed names omitted.
  std::vector<Binding> visible() const;
  bool empty() const { return !head_; }

  friend bool operator==(const Env& a, const Env& b) { return a.visible_equal(b); }

 private:
  struct Node {
    Binding binding;
    std::shared_ptr<const Node> next;
  };
  bool visible_equal(const Env& other) const;

  std::shared_ptr<const Node> head_;
};

}  // namespace smc2
