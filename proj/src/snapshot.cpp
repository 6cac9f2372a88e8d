#include <cstring>
#include <fstream>

#include "fpp/harness.hpp"

namespace fpp {

namespace {

constexpr char kMagic[4] = {'F', 'P', 'P', 'B'};
constexpr uint32_t kSnapshotVersion = 1;

struct Writer {
  std::string buf;

  void bytes(const void* p, size_t n) { buf.append(static_cast<const char*>(p), n); }
  void u8(uint8_t v) { bytes(&v, 1); }
  void u32(uint32_t v) {
    uint8_t b[4];
    for (int i = 0; i < 4; ++i) b[i] = uint8_t(v >> (8 * i));
    bytes(b, 4);
  }
  void u64(uint64_t v) {
    uint8_t b[8];
    for (int i = 0; i < 8; ++i) b[i] = uint8_t(v >> (8 * i));
    bytes(b, 8);
  }
  void f64(double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
  }
  void varint(uint64_t v) {
    while (v >= 0x80) {
      u8(uint8_t(v) | 0x80);
      v >>= 7;
    }
    u8(uint8_t(v));
  }
  void svarint(int64_t v) { varint((uint64_t(v) << 1) ^ uint64_t(v >> 63)); }
  void vertex(const Vertex& v) {
    for (int i = 0; i < v.dim; ++i) svarint(v.c[i]);
  }
};

struct Reader {
  const std::string& buf;
  size_t pos = 0;

  explicit Reader(const std::string& b) : buf(b) {}
  void need(size_t n) const {
    if (pos + n > buf.size()) throw snapshot_corruption_error("snapshot truncated");
  }
  void bytes(void* p, size_t n) {
    need(n);
    std::memcpy(p, buf.data() + pos, n);
    pos += n;
  }
  uint8_t u8() {
    uint8_t v;
    bytes(&v, 1);
    return v;
  }
  uint32_t u32() {
    uint8_t b[4];
    bytes(b, 4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(b[i]) << (8 * i);
    return v;
  }
  uint64_t u64() {
    uint8_t b[8];
    bytes(b, 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(b[i]) << (8 * i);
    return v;
  }
  double f64() {
    uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  uint64_t varint() {
    uint64_t v = 0;
    int shift = 0;
    while (true) {
      uint8_t b = u8();
      v |= uint64_t(b & 0x7F) << shift;
      if (!(b & 0x80)) return v;
      shift += 7;
      if (shift > 63) throw snapshot_corruption_error("varint overflow");
    }
  }
  int64_t svarint() {
    uint64_t z = varint();
    return int64_t(z >> 1) ^ -int64_t(z & 1);
  }
  Vertex vertex(int dim) {
    Vertex v = Vertex::zero(dim);
    for (int i = 0; i < dim; ++i) v.c[i] = int32_t(svarint());
    return v;
  }
};

uint64_t fnv1a(const std::string& data) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

void snapshot_save(const Ball& ball, const std::string& path) {
  Writer w;
  w.bytes(kMagic, 4);
  w.u32(kSnapshotVersion);

  const WeightField& field = ball.field();
  w.u8(uint8_t(field.dim()));
  w.u8(uint8_t(field.distribution().kind()));
  for (int i = 0; i < 3; ++i) w.f64(field.distribution().param(i));
  w.u64(field.seed());
  w.u64(ball.limits().max_vertices);
  w.vertex(ball.source());
  w.f64(ball.horizon());

  const auto overrides = field.override_list();
  w.varint(overrides.size());
  for (const auto& [e, wt] : overrides) {
    w.vertex(e.base);
    w.u8(uint8_t(e.axis));
    w.f64(wt);
  }
  const auto settled = ball.settled_table();
  w.varint(settled.size());
  for (const auto& [v, t] : settled) {
    w.vertex(v);
    w.f64(t);
  }
  const auto frontier = ball.frontier_table();
  w.varint(frontier.size());
  for (const auto& [v, t] : frontier) {
    w.vertex(v);
    w.f64(t);
  }
  w.u64(fnv1a(w.buf));

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("snapshot_save: cannot open " + path);
  os.write(w.buf.data(), std::streamsize(w.buf.size()));
  if (!os) throw std::runtime_error("snapshot_save: write failed for " + path);
}

Ball snapshot_load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("snapshot_load: cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());

  if (data.size() < 16) throw snapshot_corruption_error("snapshot too short");
  const std::string body = data.substr(0, data.size() - 8);
  Reader footer(data);
  footer.pos = data.size() - 8;
  if (footer.u64() != fnv1a(body)) throw snapshot_corruption_error("snapshot checksum mismatch");

  Reader r(body);
  char magic[4];
  r.bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw snapshot_corruption_error("bad snapshot magic");
  const uint32_t version = r.u32();
  if (version != kSnapshotVersion)
    throw snapshot_version_error("unsupported snapshot version " + std::to_string(version));

  const int dim = r.u8();
  if (dim < 2 || dim > kMaxDim) throw snapshot_corruption_error("bad dimension");
  const DistKind kind = DistKind(r.u8());
  double p0 = r.f64(), p1 = r.f64(), p2 = r.f64();
  WeightDistribution dist = WeightDistribution::from_params(kind, p0, p1, p2);
  const uint64_t seed = r.u64();
  GrowthLimits limits{r.u64()};
  const Vertex source = r.vertex(dim);
  const double horizon = r.f64();

  const uint64_t n_over = r.varint();
  std::vector<std::pair<Edge, double>> overrides;
  overrides.reserve(n_over);
  for (uint64_t i = 0; i < n_over; ++i) {
    Vertex base = r.vertex(dim);
    int axis = r.u8();
    if (axis >= dim) throw snapshot_corruption_error("bad edge axis");
    overrides.emplace_back(Edge(base, axis), r.f64());
  }
  WeightField field = WeightField(dim, dist, seed).with_overrides(overrides);

  const uint64_t n_settled = r.varint();
  std::vector<std::pair<Vertex, double>> settled;
  settled.reserve(n_settled);
  for (uint64_t i = 0; i < n_settled; ++i) {
    Vertex v = r.vertex(dim);
    settled.emplace_back(v, r.f64());
  }
  const uint64_t n_frontier = r.varint();
  std::vector<std::pair<Vertex, double>> frontier;
  frontier.reserve(n_frontier);
  for (uint64_t i = 0; i < n_frontier; ++i) {
    Vertex v = r.vertex(dim);
    frontier.emplace_back(v, r.f64());
  }
  if (r.pos != body.size()) throw snapshot_corruption_error("trailing bytes in snapshot");

  return Ball::restore(std::move(field), source, limits, horizon, settled, frontier);
}

}  // namespace fpp
