#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smc2/ast.hpp"
#include "smc2/value.hpp"

namespace smc2 {

enum class Perm : std::uint8_t { Freeable, None };

struct ByteMeta {
  Label label = Label::Public;
  Perm perm = Perm::Freeable;
  friend bool operator==(const ByteMeta&, const ByteMeta&) = default;
};

// Who allocated a block; only Heap blocks may be freed.
enum class Origin : std::uint8_t { Default, Declaration, Heap, Function };

struct MemoryBlock {
  std::vector<std::uint8_t> bytes;
  Type type;
  std::size_t count = 0;
  std::vector<ByteMeta> meta;  // one entry per byte
  Origin origin = Origin::Declaration;

  bool live() const;
  // Size of one element of this block, i.e. tau(type), or 1 for void blocks.
  std::size_t element_size() const;
};

// Byte widths. A private scalar holds one 8-byte field element followed by
// 8 reserved bytes.
struct SizeModel {
  static constexpr std::size_t kPublicScalar = 4;
  static constexpr std::size_t kPrivateScalar = 16;
  static constexpr std::size_t kShareBytes = 8;
  static constexpr std::size_t kLocationBytes = 16;  // block id + offset
  static constexpr std::size_t kFunctionBytes = 8;
  static constexpr std::size_t kDefaultBlockBytes = 32;
};

// tau(ty): bytes per element. Pointers and array headers count one location entry.
std::size_t size_of(const Type& ty);
std::size_t tag_size(Label label);

using Bytes = std::vector<std::uint8_t>;

Bytes encode_val(const Type& ty, const Value& v);
Value decode_val(const Type& ty, std::span<const std::uint8_t> bytes);
Bytes encode_ptr(const Type& ty, const PointerData& p);
PointerData decode_ptr(const Type& ty, std::size_t alpha, std::span<const std::uint8_t> bytes);
// ty is the element type.
Bytes encode_arr(const Type& ty, std::span<const Value> elems);
Value decode_arr(const Type& ty, std::size_t i, std::span<const std::uint8_t> bytes);

class Memory {
 public:
  // Fresh location (id, 0); ids increase monotonically and are never reused.
  Location phi();
  void insert(BlockId id, MemoryBlock block);
  Location allocate(MemoryBlock block);

  bool contains(BlockId id) const { return blocks_.count(id) != 0; }
  const MemoryBlock& block(BlockId id) const;
  const std::map<BlockId, MemoryBlock>& blocks() const { return blocks_; }
  BlockId next_id() const { return next_; }

  // Legal-path byte access inside a single block; raises UseAfterFree on a
  // None byte and AddressBeyondMemory when the span leaves the block.
  Bytes read_bytes(Location at, std::size_t n) const;
  void write_bytes(Location at, std::span<const std::uint8_t> bytes);

  Value read_val(BlockId id, const Type& ty) const;
  void update_val(BlockId id, const Value& v, const Type& ty);
  Value read_arr(BlockId id, std::size_t i, const Type& elem) const;
  void update_arr(BlockId id, std::size_t i, const Value& v, const Type& elem);
  PointerData read_ptr(BlockId id, const Type& ty) const;
  // Rewrites the whole pointer block; its count becomes alpha.
  void update_ptr(BlockId id, const PointerData& p, const Type& ty);

  // Raw access in flat block-id order across block boundaries. Metadata and
  // permissions are neither checked nor modified.
  Value read_oob(Location start, const Type& ty) const;
  void write_oob(Location start, const Value& v, const Type& ty);

  // Rolls an offset that leaves its block into the neighbouring blocks.
  // Returns false if the address is outside all of memory.
  bool normalize(Location at, Location& out) const;
  // The access lands on one whole element of a block of matching type and size.
  bool well_aligned(Location start, const Type& ty) const;

  void free_block(BlockId id);
  void set_perm(BlockId id, Perm perm);
  // True iff every location heads a live malloc/pmalloc block.
  bool check_freeable(std::span<const Location> locs) const;

  // Pointer arithmetic. The flag is true when the result stays in the same block.
  std::pair<Location, bool> get_location(Location at, std::int64_t stride) const;
  // The flag is true for an in-block read; false when read_oob was needed.
  std::pair<Value, bool> deref_ptr(const Type& ty, Location at) const;

  // One line per block: "#id ty n [perm-summary] hexbytes".
  std::string dump() const;

  // Direct block replacement used by erasure and pfree.
  MemoryBlock& mutable_block(BlockId id);

  // Test hook: skip ids so this memory's allocations diverge.
  void skip_ids(BlockId n) { next_ += n; }

 private:
  Bytes read_flat(Location start, std::size_t n) const;
  void write_flat(Location start, std::span<const std::uint8_t> bytes);

  std::map<BlockId, MemoryBlock> blocks_;
  BlockId next_ = 0;
};

MemoryBlock make_block(const Type& ty, std::size_t count, Bytes bytes, Origin origin);

}  // namespace smc2
