#include "smc2/value.hpp"

#include <sstream>

namespace smc2 {

std::string to_string(const Location& l) {
  return "(" + std::to_string(l.block) + "," + std::to_string(l.offset) + ")";
}

Value Value::of_int(std::int32_t v) {
  Value r;
  r.kind = Kind::Int;
  r.i = v;
  return r;
}

Value Value::of_float(float v) {
  Value r;
  r.kind = Kind::Float;
  r.f = v;
  r.base = BaseType::Float;
  return r;
}

Value Value::of_share(std::uint64_t s, BaseType base) {
  Value r;
  r.kind = Kind::Share;
  r.share = s;
  r.base = base;
  return r;
}

Value Value::of_loc(Location l) {
  Value r;
  r.kind = Kind::Loc;
  r.loc = l;
  return r;
}

Value Value::of_ptr(PointerData p) {
  Value r;
  r.kind = Kind::Ptr;
  r.ptr = std::move(p);
  return r;
}

Value Value::of_array(std::vector<Value> elems) {
  Value r;
  r.kind = Kind::Array;
  r.elems = std::move(elems);
  return r;
}

std::string to_string(const Value& v) {
  std::ostringstream os;
  switch (v.kind) {
    case Value::Kind::Void:
      os << "skip";
      break;
    case Value::Kind::Int:
      os << v.i;
      break;
    case Value::Kind::Float:
      os << v.f;
      break;
    case Value::Kind::Share:
      os << "share(" << v.share << ")";
      break;
    case Value::Kind::Loc:
      os << to_string(v.loc);
      break;
    case Value::Kind::Ptr: {
      os << "[" << v.ptr.alpha() << ", [";
      for (std::size_t k = 0; k < v.ptr.locs.size(); ++k) os << (k ? ", " : "") << to_string(v.ptr.locs[k]);
      os << "], [";
      for (std::size_t k = 0; k < v.ptr.tags.size(); ++k) os << (k ? ", " : "") << v.ptr.tags[k];
      os << "], " << v.ptr.depth << "]";
      break;
    }
    case Value::Kind::Array:
      os << "{";
      for (std::size_t k = 0; k < v.elems.size(); ++k) os << (k ? ", " : "") << to_string(v.elems[k]);
      os << "}";
      break;
  }
  return os.str();
}

}  // namespace smc2
