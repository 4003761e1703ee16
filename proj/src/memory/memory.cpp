#include "smc2/memory.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <sstream>

#include "smc2/error.hpp"

namespace smc2 {
namespace {

void put_u64(Bytes& out, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

void put_u32(Bytes& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

std::uint64_t get_u64(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[at + k]) << (8 * k);
  return v;
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(b[at + k]) << (8 * k);
  return v;
}

std::size_t entry_size(Label label) { return SizeModel::kLocationBytes + tag_size(label); }

bool is_location_type(const Type& t) { return t.is_pointer() || t.is_array(); }

const char* perm_code(Perm p) { return p == Perm::Freeable ? "F" : "N"; }

}  // namespace

std::size_t tag_size(Label label) {
  return label == Label::Private ? SizeModel::kPrivateScalar : SizeModel::kPublicScalar;
}

std::size_t size_of(const Type& ty) {
  switch (ty.kind) {
    case Type::Kind::Base:
      if (ty.base == BaseType::Void) return 1;
      return ty.is_private() ? SizeModel::kPrivateScalar : SizeModel::kPublicScalar;
    case Type::Kind::Pointer:
    case Type::Kind::Array:
      return entry_size(ty.label);
    case Type::Kind::Function:
      return SizeModel::kFunctionBytes;
  }
  return 1;
}

bool MemoryBlock::live() const {
  for (const auto& m : meta)
    if (m.perm == Perm::Freeable) return true;
  return meta.empty();
}

std::size_t MemoryBlock::element_size() const {
  if (type.is_scalar() && type.base == BaseType::Void) return 1;
  return size_of(type);
}

Bytes encode_val(const Type& ty, const Value& v) {
  Bytes out;
  switch (ty.kind) {
    case Type::Kind::Base:
      if (ty.base == BaseType::Void) return Bytes(1, 0);
      if (ty.is_private()) {
        if (!v.is(Value::Kind::Share)) fail(ErrorKind::TypeError, "private storage needs a share, got " + to_string(v));
        put_u64(out, v.share);
        out.resize(SizeModel::kPrivateScalar, 0);
        return out;
      }
      if (ty.base == BaseType::Int) {
        if (!v.is(Value::Kind::Int)) fail(ErrorKind::TypeError, "public int storage got " + to_string(v));
        put_u32(out, static_cast<std::uint32_t>(v.i));
      } else {
        if (!v.is(Value::Kind::Float)) fail(ErrorKind::TypeError, "public float storage got " + to_string(v));
        put_u32(out, std::bit_cast<std::uint32_t>(v.f));
      }
      return out;
    case Type::Kind::Pointer:
    case Type::Kind::Array:
      if (v.is(Value::Kind::Loc)) return encode_ptr(ty, PointerData{{v.loc}, {1}, std::max(ty.depth, 1)});
      if (!v.is(Value::Kind::Ptr)) fail(ErrorKind::TypeError, "pointer storage got " + to_string(v));
      return encode_ptr(ty, v.ptr);
    case Type::Kind::Function:
      put_u64(out, static_cast<std::uint64_t>(v.i));
      return out;
  }
  return out;
}

Value decode_val(const Type& ty, std::span<const std::uint8_t> bytes) {
  if (bytes.size() != size_of(ty))
    fail(ErrorKind::SizeMismatch, "decode of " + to_string(ty) + " from " + std::to_string(bytes.size()) + " bytes");
  switch (ty.kind) {
    case Type::Kind::Base:
      if (ty.base == BaseType::Void) return Value::none();
      if (ty.is_private()) return Value::of_share(get_u64(bytes, 0), ty.base);
      if (ty.base == BaseType::Int) return Value::of_int(static_cast<std::int32_t>(get_u32(bytes, 0)));
      return Value::of_float(std::bit_cast<float>(get_u32(bytes, 0)));
    case Type::Kind::Pointer:
    case Type::Kind::Array:
      return Value::of_ptr(decode_ptr(ty, 1, bytes));
    case Type::Kind::Function:
      return Value::of_int(static_cast<std::int32_t>(get_u64(bytes, 0)));
  }
  return Value::none();
}

Bytes encode_ptr(const Type& ty, const PointerData& p) {
  if (p.locs.size() != p.tags.size() || p.locs.empty())
    fail(ErrorKind::MalformedPointer, "pointer needs matching non-empty location and tag lists");
  Bytes out;
  out.reserve(p.alpha() * entry_size(ty.label));
  for (std::size_t k = 0; k < p.alpha(); ++k) {
    put_u64(out, p.locs[k].block);
    put_u64(out, static_cast<std::uint64_t>(p.locs[k].offset));
    if (ty.is_private()) {
      put_u64(out, p.tags[k]);
      put_u64(out, 0);
    } else {
      put_u32(out, static_cast<std::uint32_t>(p.tags[k]));
    }
  }
  return out;
}

PointerData decode_ptr(const Type& ty, std::size_t alpha, std::span<const std::uint8_t> bytes) {
  std::size_t es = entry_size(ty.label);
  if (alpha == 0 || bytes.size() != alpha * es)
    fail(ErrorKind::MalformedPointer,
         std::to_string(bytes.size()) + " bytes do not hold " + std::to_string(alpha) + " pointer entries");
  PointerData p;
  p.depth = std::max(ty.depth, 1);
  for (std::size_t k = 0; k < alpha; ++k) {
    std::size_t at = k * es;
    p.locs.push_back({get_u64(bytes, at), static_cast<std::int64_t>(get_u64(bytes, at + 8))});
    p.tags.push_back(ty.is_private() ? get_u64(bytes, at + 16) : get_u32(bytes, at + 16));
  }
  return p;
}

Bytes encode_arr(const Type& ty, std::span<const Value> elems) {
  Bytes out;
  for (const auto& v : elems) {
    Bytes b = encode_val(ty, v);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

Value decode_arr(const Type& ty, std::size_t i, std::span<const std::uint8_t> bytes) {
  std::size_t n = size_of(ty);
  if ((i + 1) * n > bytes.size())
    fail(ErrorKind::SizeMismatch, "array element " + std::to_string(i) + " lies outside " +
                                      std::to_string(bytes.size()) + " bytes");
  return decode_val(ty, bytes.subspan(i * n, n));
}

MemoryBlock make_block(const Type& ty, std::size_t count, Bytes bytes, Origin origin) {
  MemoryBlock b;
  Label label = ty.is_function() ? Label::Public : ty.label;
  b.meta.assign(bytes.size(), ByteMeta{label, Perm::Freeable});
  b.bytes = std::move(bytes);
  b.type = ty;
  b.count = count;
  b.origin = origin;
  return b;
}

Location Memory::phi() { return {next_++, 0}; }

void Memory::insert(BlockId id, MemoryBlock block) {
  if (block.meta.size() != block.bytes.size())
    fail(ErrorKind::SizeMismatch, "block metadata length differs from its byte length");
  blocks_[id] = std::move(block);
  if (id >= next_) next_ = id + 1;
}

Location Memory::allocate(MemoryBlock block) {
  Location l = phi();
  insert(l.block, std::move(block));
  return l;
}

const MemoryBlock& Memory::block(BlockId id) const {
  auto it = blocks_.find(id);
  if (it == blocks_.end()) fail(ErrorKind::AddressBeyondMemory, "no block " + std::to_string(id));
  return it->second;
}

MemoryBlock& Memory::mutable_block(BlockId id) {
  auto it = blocks_.find(id);
  if (it == blocks_.end()) fail(ErrorKind::AddressBeyondMemory, "no block " + std::to_string(id));
  return it->second;
}

Bytes Memory::read_bytes(Location at, std::size_t n) const {
  const MemoryBlock& b = block(at.block);
  if (at.offset < 0 || static_cast<std::size_t>(at.offset) + n > b.bytes.size())
    fail(ErrorKind::AddressBeyondMemory, "read of " + std::to_string(n) + " bytes at " + to_string(at));
  auto off = static_cast<std::size_t>(at.offset);
  for (std::size_t k = off; k < off + n; ++k)
    if (b.meta[k].perm == Perm::None) fail(ErrorKind::UseAfterFree, "read of freed block " + std::to_string(at.block));
  return Bytes(b.bytes.begin() + static_cast<std::ptrdiff_t>(off), b.bytes.begin() + static_cast<std::ptrdiff_t>(off + n));
}

void Memory::write_bytes(Location at, std::span<const std::uint8_t> bytes) {
  MemoryBlock& b = mutable_block(at.block);
  if (at.offset < 0 || static_cast<std::size_t>(at.offset) + bytes.size() > b.bytes.size())
    fail(ErrorKind::AddressBeyondMemory, "write of " + std::to_string(bytes.size()) + " bytes at " + to_string(at));
  auto off = static_cast<std::size_t>(at.offset);
  for (std::size_t k = 0; k < bytes.size(); ++k)
    if (b.meta[off + k].perm == Perm::None)
      fail(ErrorKind::UseAfterFree, "write to freed block " + std::to_string(at.block));
  std::copy(bytes.begin(), bytes.end(), b.bytes.begin() + static_cast<std::ptrdiff_t>(off));
}

Value Memory::read_val(BlockId id, const Type& ty) const {
  if (is_location_type(ty)) return Value::of_ptr(read_ptr(id, ty));
  return decode_val(ty, read_bytes({id, 0}, size_of(ty)));
}

void Memory::update_val(BlockId id, const Value& v, const Type& ty) {
  if (is_location_type(ty) && v.is(Value::Kind::Ptr)) {
    update_ptr(id, v.ptr, ty);
    return;
  }
  write_bytes({id, 0}, encode_val(ty, v));
}

Value Memory::read_arr(BlockId id, std::size_t i, const Type& elem) const {
  std::size_t n = size_of(elem);
  return decode_val(elem, read_bytes({id, static_cast<std::int64_t>(i * n)}, n));
}

void Memory::update_arr(BlockId id, std::size_t i, const Value& v, const Type& elem) {
  write_bytes({id, static_cast<std::int64_t>(i * size_of(elem))}, encode_val(elem, v));
}

PointerData Memory::read_ptr(BlockId id, const Type& ty) const {
  const MemoryBlock& b = block(id);
  Bytes bytes = read_bytes({id, 0}, b.bytes.size());
  std::size_t es = entry_size(ty.label);
  return decode_ptr(ty, bytes.size() / es, bytes);
}

void Memory::update_ptr(BlockId id, const PointerData& p, const Type& ty) {
  MemoryBlock& b = mutable_block(id);
  for (const auto& m : b.meta)
    if (m.perm == Perm::None) fail(ErrorKind::UseAfterFree, "pointer write to freed block " + std::to_string(id));
  b.bytes = encode_ptr(ty, p);
  b.count = p.alpha();
  b.meta.assign(b.bytes.size(), ByteMeta{ty.label, Perm::Freeable});
}

bool Memory::normalize(Location at, Location& out) const {
  auto it = blocks_.find(at.block);
  if (it == blocks_.end()) return false;
  std::int64_t off = at.offset;
  while (off >= static_cast<std::int64_t>(it->second.bytes.size())) {
    off -= static_cast<std::int64_t>(it->second.bytes.size());
    ++it;
    if (it == blocks_.end()) return false;
  }
  while (off < 0) {
    if (it == blocks_.begin()) return false;
    --it;
    off += static_cast<std::int64_t>(it->second.bytes.size());
  }
  out = {it->first, off};
  return true;
}

Bytes Memory::read_flat(Location start, std::size_t n) const {
  Location at;
  if (!normalize(start, at)) fail(ErrorKind::AddressBeyondMemory, "address " + to_string(start) + " outside memory");
  Bytes out;
  out.reserve(n);
  auto it = blocks_.find(at.block);
  auto off = static_cast<std::size_t>(at.offset);
  while (out.size() < n) {
    if (it == blocks_.end())
      fail(ErrorKind::AddressBeyondMemory, "read of " + std::to_string(n) + " bytes at " + to_string(start));
    const Bytes& b = it->second.bytes;
    for (; off < b.size() && out.size() < n; ++off) out.push_back(b[off]);
    ++it;
    off = 0;
  }
  return out;
}

void Memory::write_flat(Location start, std::span<const std::uint8_t> bytes) {
  Location at;
  if (!normalize(start, at)) fail(ErrorKind::AddressBeyondMemory, "address " + to_string(start) + " outside memory");
  // Check the whole span first so a failing write leaves memory untouched.
  std::size_t need = bytes.size() + static_cast<std::size_t>(at.offset);
  std::size_t avail = 0;
  for (auto it = blocks_.find(at.block); it != blocks_.end() && avail < need; ++it) avail += it->second.bytes.size();
  if (avail < need)
    fail(ErrorKind::AddressBeyondMemory, "write of " + std::to_string(bytes.size()) + " bytes at " + to_string(start));
  auto it = blocks_.find(at.block);
  auto off = static_cast<std::size_t>(at.offset);
  std::size_t k = 0;
  while (k < bytes.size()) {
    Bytes& b = it->second.bytes;
    for (; off < b.size() && k < bytes.size(); ++off) b[off] = bytes[k++];
    ++it;
    off = 0;
  }
}

Value Memory::read_oob(Location start, const Type& ty) const { return decode_val(ty, read_flat(start, size_of(ty))); }

void Memory::write_oob(Location start, const Value& v, const Type& ty) { write_flat(start, encode_val(ty, v)); }

bool Memory::well_aligned(Location start, const Type& ty) const {
  Location at;
  if (!normalize(start, at)) return false;
  const MemoryBlock& b = block(at.block);
  std::size_t n = size_of(ty);
  auto off = static_cast<std::size_t>(at.offset);
  if (off + n > b.bytes.size()) return false;
  if (b.type.is_scalar() && b.type.base == BaseType::Void) return ty.is_scalar() && off % n == 0;
  if (b.type.is_function() || ty.is_function()) return false;
  bool same_kind = (b.type.is_scalar() && ty.is_scalar() && b.type.base == ty.base) ||
                   (is_location_type(b.type) && is_location_type(ty));
  return same_kind && b.type.label == ty.label && b.element_size() == n && off % n == 0;
}

void Memory::free_block(BlockId id) {
  MemoryBlock& b = mutable_block(id);
  if (!b.live()) fail(ErrorKind::DoubleFree, "block " + std::to_string(id) + " already freed");
  for (auto& m : b.meta) m.perm = Perm::None;
}

void Memory::set_perm(BlockId id, Perm perm) {
  for (auto& m : mutable_block(id).meta) m.perm = perm;
}

bool Memory::check_freeable(std::span<const Location> locs) const {
  for (const auto& l : locs) {
    auto it = blocks_.find(l.block);
    if (it == blocks_.end() || l.offset != 0 || it->second.origin != Origin::Heap) return false;
  }
  return true;
}

std::pair<Location, bool> Memory::get_location(Location at, std::int64_t stride) const {
  Location out;
  Location raw{at.block, at.offset + stride};
  // An address past all of memory stays as is; dereferencing it fails later.
  if (!normalize(raw, out)) return {raw, false};
  return {out, out.block == at.block};
}

std::pair<Value, bool> Memory::deref_ptr(const Type& ty, Location at) const {
  const MemoryBlock& b = block(at.block);
  std::size_t n = size_of(ty);
  if (at.offset == 0 && is_location_type(ty) && is_location_type(b.type) && b.type.label == ty.label)
    return {Value::of_ptr(read_ptr(at.block, ty)), true};
  if (at.offset >= 0 && static_cast<std::size_t>(at.offset) + n <= b.bytes.size())
    return {decode_val(ty, read_bytes(at, n)), true};
  return {read_oob(at, ty), false};
}

std::string Memory::dump() const {
  std::ostringstream os;
  static const char* hex = "0123456789abcdef";
  for (const auto& [id, b] : blocks_) {
    os << '#' << id << ' ' << to_string(b.type) << ' ' << b.count << " [";
    std::size_t k = 0;
    bool first = true;
    while (k < b.meta.size()) {
      std::size_t r = k;
      while (r < b.meta.size() && b.meta[r] == b.meta[k]) ++r;
      os << (first ? "" : ",") << (b.meta[k].label == Label::Private ? "prv" : "pub") << perm_code(b.meta[k].perm)
         << 'x' << (r - k);
      first = false;
      k = r;
    }
    os << "] ";
    for (auto byte : b.bytes) os << hex[byte >> 4] << hex[byte & 15];
    os << '\n';
  }
  return os.str();
}

}  // namespace smc2
