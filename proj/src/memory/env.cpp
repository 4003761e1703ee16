#include "smc2/env.hpp"

#include <algorithm>
#include <set>

#include "smc2/error.hpp"

namespace smc2 {

Env Env::bind(std::string name, Location loc, Type type) const {
  Env e;
  e.head_ = std::make_shared<const Node>(Node{{std::move(name), loc, std::move(type)}, head_});
  return e;
}

const Env::Binding* Env::find(const std::string& name) const {
  for (const Node* n = head_.get(); n; n = n->next.get())
    if (n->binding.name == name) return &n->binding;
  return nullptr;
}

const Env::Binding& Env::lookup(const std::string& name) const {
  const Binding* b = find(name);
  if (!b) fail(ErrorKind::UnboundVariable, name);
  return *b;
}

std::vector<Env::Binding> Env::visible() const {
  std::vector<Binding> out;
  std::set<std::string> seen;
  for (const Node* n = head_.get(); n; n = n->next.get())
    if (seen.insert(n->binding.name).second) out.push_back(n->binding);
  std::reverse(out.begin(), out.end());
  return out;
}

bool Env::visible_equal(const Env& other) const {
  auto a = visible();
  auto b = other.visible();
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k].name != b[k].name || a[k].loc != b[k].loc || !(a[k].type == b[k].type)) return false;
  return true;
}

}  // namespace smc2
