#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpp {

inline constexpr int kMaxDim = 4;

struct lattice_range_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct resource_limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lattice vertex with runtime dimension d in [2, kMaxDim].
// Coordinates beyond dim are kept at zero so packing and comparison can
// always run over the full array.
struct Vertex {
  std::array<int32_t, kMaxDim> c{};
  int32_t dim = 2;

  Vertex() = default;
  Vertex(int32_t x, int32_t y) : c{x, y, 0, 0}, dim(2) {}
  Vertex(int32_t x, int32_t y, int32_t z) : c{x, y, z, 0}, dim(3) {}
  static Vertex zero(int d) {
    Vertex v;
    v.dim = d;
    return v;
  }
  static Vertex unit(int d, int axis, int32_t sign = 1) {
    Vertex v = zero(d);
    v.c[axis] = sign;
    return v;
  }

  int32_t operator[](int i) const { return c[i]; }
  int32_t& operator[](int i) { return c[i]; }

  Vertex shifted(int axis, int32_t delta) const {
    Vertex v = *this;
    v.c[axis] += delta;
    return v;
  }
  Vertex operator+(const Vertex& o) const {
    Vertex v = *this;
    for (int i = 0; i < dim; ++i) v.c[i] += o.c[i];
    return v;
  }
  Vertex operator-(const Vertex& o) const {
    Vertex v = *this;
    for (int i = 0; i < dim; ++i) v.c[i] -= o.c[i];
    return v;
  }

  bool operator==(const Vertex& o) const { return c == o.c; }
  bool operator!=(const Vertex& o) const { return c != o.c; }
  // lexicographic order on coordinates
  bool operator<(const Vertex& o) const { return c < o.c; }

  int64_t l1() const {
    int64_t s = 0;
    for (int i = 0; i < dim; ++i) s += std::abs(int64_t(c[i]));
    return s;
  }
  int64_t l1_dist(const Vertex& o) const {
    int64_t s = 0;
    for (int i = 0; i < dim; ++i) s += std::abs(int64_t(c[i]) - o.c[i]);
    return s;
  }
  int64_t linf_dist(const Vertex& o) const {
    int64_t m = 0;
    for (int i = 0; i < dim; ++i) {
      int64_t a = std::abs(int64_t(c[i]) - o.c[i]);
      if (a > m) m = a;
    }
    return m;
  }
  double l2() const {
    double s = 0;
    for (int i = 0; i < dim; ++i) s += double(c[i]) * double(c[i]);
    return std::sqrt(s);
  }
  std::string str() const {
    std::string s = "(";
    for (int i = 0; i < dim; ++i) {
      if (i) s += ",";
      s += std::to_string(c[i]);
    }
    return s + ")";
  }
};

// Canonical undirected nearest-neighbor edge: joins base and base+e_axis.
struct Edge {
  Vertex base;
  int32_t axis = 0;

  Edge() = default;
  Edge(Vertex b, int32_t a) : base(b), axis(a) {}
  // Canonical edge for an unordered endpoint pair.
  static Edge between(const Vertex& u, const Vertex& v) {
    for (int i = 0; i < u.dim; ++i) {
      int64_t d = int64_t(v.c[i]) - u.c[i];
      if (d == 0) continue;
      if (d == 1) return Edge(u, i);
      if (d == -1) return Edge(v, i);
      break;
    }
    throw std::invalid_argument("Edge::between: vertices are not adjacent");
  }
  Vertex other() const { return base.shifted(axis, 1); }
  bool operator==(const Edge& e) const { return base == e.base && axis == e.axis; }
  bool operator<(const Edge& e) const {
    if (base != e.base) return base < e.base;
    return axis < e.axis;
  }
};

// --- bit packing ---------------------------------------------------------
//
// Vertices and edges pack into a single uint64 key: zig-zag each signed
// coordinate, then place the lanes side by side (edge keys append the axis
// in the low 2 bits). Lane widths are chosen per dimension so the top bit
// of the key is always zero, keeping ~0ull free as a hash-slot sentinel.
//
//   d=2: 31 bits per coord (|c| < 2^30)        d=3: 20 bits (|c| < 2^19)
//   d=4: 15 bits per coord (|c| < 2^14)
//
// Out-of-range coordinates throw lattice_range_error; the growth caps keep
// realistic runs far inside these bounds.

inline uint32_t zigzag32(int32_t v) { return (uint32_t(v) << 1) ^ uint32_t(v >> 31); }
inline int32_t unzigzag32(uint32_t z) { return int32_t(z >> 1) ^ -int32_t(z & 1); }

namespace detail {
inline constexpr int kVertexBits[kMaxDim + 1] = {0, 0, 32, 21, 16};
inline constexpr int kEdgeBits[kMaxDim + 1] = {0, 0, 31, 20, 15};

inline void check_range(const Vertex& v, int bits) {
  const int64_t lim = int64_t(1) << (bits - 1);
  for (int i = 0; i < v.dim; ++i)
    if (v.c[i] >= lim || v.c[i] < -lim)
      throw lattice_range_error("lattice coordinate out of packable range: " + v.str());
}
}  // namespace detail

inline uint64_t pack_vertex(const Vertex& v) {
  const int bits = detail::kVertexBits[v.dim];
  detail::check_range(v, bits - 1);
  uint64_t k = 0;
  for (int i = 0; i < v.dim; ++i) k = (k << bits) | uint64_t(zigzag32(v.c[i]));
  return k;
}

inline Vertex unpack_vertex(uint64_t k, int dim) {
  const int bits = detail::kVertexBits[dim];
  const uint64_t mask = (bits == 64) ? ~0ull : ((uint64_t(1) << bits) - 1);
  Vertex v = Vertex::zero(dim);
  for (int i = dim - 1; i >= 0; --i) {
    v.c[i] = unzigzag32(uint32_t(k & mask));
    k >>= bits;
  }
  return v;
}

inline uint64_t pack_edge(const Edge& e) {
  const int bits = detail::kEdgeBits[e.base.dim];
  detail::check_range(e.base, bits - 1);
  uint64_t k = 0;
  for (int i = 0; i < e.base.dim; ++i) k = (k << bits) | uint64_t(zigzag32(e.base.c[i]));
  return (k << 2) | uint64_t(e.axis);
}

// --- mixing / stateless randomness ---------------------------------------

inline uint64_t mix64(uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

// uniform in (0,1), 53-bit resolution, never exactly 0 or 1
inline double unit_real(uint64_t h) { return double(h >> 11) * 0x1p-53 + 0x1p-54; }

// --- open-addressing hash map, uint64 key -> V ----------------------------
//
// Linear probing, power-of-two capacity, no deletion. Keys must never be
// kEmpty; the packing above guarantees bit 63 is clear.

template <typename V>
class FlatMap {
 public:
  static constexpr uint64_t kEmpty = ~0ull;

  explicit FlatMap(size_t cap_hint = 16) { rehash(normalize(cap_hint)); }

  void reserve(size_t n) {
    size_t want = normalize(n * 2);
    if (want > keys_.size()) rehash_to(want);
  }

  V* find(uint64_t k) {
    size_t i = slot(k);
    while (true) {
      if (keys_[i] == k) return &vals_[i];
      if (keys_[i] == kEmpty) return nullptr;
      i = (i + 1) & mask_;
    }
  }
  const V* find(uint64_t k) const { return const_cast<FlatMap*>(this)->find(k); }
  bool contains(uint64_t k) const { return find(k) != nullptr; }

  // returns reference to the slot value (inserted default-constructed if new)
  V& operator[](uint64_t k) {
    if ((count_ + 1) * 4 > keys_.size() * 3) rehash_to(keys_.size() * 2);
    size_t i = slot(k);
    while (true) {
      if (keys_[i] == k) return vals_[i];
      if (keys_[i] == kEmpty) {
        keys_[i] = k;
        vals_[i] = V{};
        ++count_;
        return vals_[i];
      }
      i = (i + 1) & mask_;
    }
  }
  void insert_or_assign(uint64_t k, const V& v) { (*this)[k] = v; }

  size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  void clear() {
    std::fill(keys_.begin(), keys_.end(), kEmpty);
    count_ = 0;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (size_t i = 0; i < keys_.size(); ++i)
      if (keys_[i] != kEmpty) f(keys_[i], vals_[i]);
  }

 private:
  static size_t normalize(size_t n) {
    size_t c = 16;
    while (c < n) c <<= 1;
    return c;
  }
  size_t slot(uint64_t k) const { return size_t(mix64(k)) & mask_; }
  void rehash(size_t cap) {
    keys_.assign(cap, kEmpty);
    vals_.assign(cap, V{});
    mask_ = cap - 1;
    count_ = 0;
  }
  void rehash_to(size_t cap) {
    std::vector<uint64_t> ok = std::move(keys_);
    std::vector<V> ov = std::move(vals_);
    rehash(cap);
    for (size_t i = 0; i < ok.size(); ++i)
      if (ok[i] != kEmpty) insert_raw(ok[i], ov[i]);
  }
  void insert_raw(uint64_t k, const V& v) {
    size_t i = slot(k);
    while (keys_[i] != kEmpty) i = (i + 1) & mask_;
    keys_[i] = k;
    vals_[i] = v;
    ++count_;
  }

  std::vector<uint64_t> keys_;
  std::vector<V> vals_;
  size_t mask_ = 0;
  size_t count_ = 0;
};

// Integer axis-aligned box, used for bounding regions.
struct Box {
  std::array<int32_t, kMaxDim> lo{};
  std::array<int32_t, kMaxDim> hi{};
  int32_t dim = 2;

  static Box of(const Vertex& v) {
    Box b;
    b.dim = v.dim;
    for (int i = 0; i < v.dim; ++i) b.lo[i] = b.hi[i] = v.c[i];
    return b;
  }
  void include(const Vertex& v) {
    for (int i = 0; i < dim; ++i) {
      if (v.c[i] < lo[i]) lo[i] = v.c[i];
      if (v.c[i] > hi[i]) hi[i] = v.c[i];
    }
  }
  void inflate(int32_t r) {
    for (int i = 0; i < dim; ++i) {
      lo[i] -= r;
      hi[i] += r;
    }
  }
  bool contains(const Vertex& v) const {
    for (int i = 0; i < dim; ++i)
      if (v.c[i] < lo[i] || v.c[i] > hi[i]) return false;
    return true;
  }
  bool overlaps(const Box& o) const {
    for (int i = 0; i < dim; ++i)
      if (hi[i] < o.lo[i] || o.hi[i] < lo[i]) return false;
    return true;
  }
  uint64_t volume() const {
    uint64_t v = 1;
    for (int i = 0; i < dim; ++i) v *= uint64_t(hi[i] - lo[i] + 1);
    return v;
  }
};

}  // namespace fpp
