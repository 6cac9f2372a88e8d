#include "fpp/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fpp {

double bond_percolation_pc(int dim) {
  switch (dim) {
    case 2: return 0.5;  // exact
    case 3: return 0.2488126;
    case 4: return 0.1601314;
    case 5: return 0.1181718;
    case 6: return 0.0942;
    default:
      // rigorous lower bound 1/(2d-1); conservative for the rejection gate
      return 1.0 / (2.0 * dim - 1.0);
  }
}

WeightDistribution::WeightDistribution(DistKind k, double p0, double p1, double p2)
    : kind_(k), p_{quantize_weight(p0), quantize_weight(p1), p2} {
  // parameters live on the weight grid so support bounds are exact;
  // p2 is a probability for two_point and stays un-quantized
  for (double p : p_)
    if (!std::isfinite(p) || p < 0) throw std::invalid_argument("distribution parameter must be finite and >= 0");
}

WeightDistribution WeightDistribution::constant(double c) {
  return WeightDistribution(DistKind::constant, c, 0, 0);
}
WeightDistribution WeightDistribution::two_point(double a, double b, double p_a) {
  if (!(a < b)) throw std::invalid_argument("two_point requires a < b");
  if (!(p_a > 0 && p_a < 1)) throw std::invalid_argument("two_point requires 0 < p_a < 1");
  return WeightDistribution(DistKind::two_point, a, b, p_a);
}
WeightDistribution WeightDistribution::uniform(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("uniform requires lo < hi");
  return WeightDistribution(DistKind::uniform, lo, hi, 0);
}
WeightDistribution WeightDistribution::exponential(double rate) {
  if (!(rate > 0)) throw std::invalid_argument("exponential requires rate > 0");
  return WeightDistribution(DistKind::exponential, rate, 0, 0);
}
WeightDistribution WeightDistribution::shifted_exponential(double shift, double rate) {
  if (!(rate > 0)) throw std::invalid_argument("shifted_exponential requires rate > 0");
  return WeightDistribution(DistKind::shifted_exponential, shift, rate, 0);
}
WeightDistribution WeightDistribution::from_params(DistKind kind, double p0, double p1, double p2) {
  switch (kind) {
    case DistKind::constant: return constant(p0);
    case DistKind::two_point: return two_point(p0, p1, p2);
    case DistKind::uniform: return uniform(p0, p1);
    case DistKind::exponential: return exponential(p0);
    case DistKind::shifted_exponential: return shifted_exponential(p0, p1);
  }
  throw std::invalid_argument("unknown distribution kind");
}

double WeightDistribution::icdf(double u) const {
  double w = 0;
  switch (kind_) {
    case DistKind::constant: w = p_[0]; break;
    case DistKind::two_point: w = (u < p_[2]) ? p_[0] : p_[1]; break;
    case DistKind::uniform: w = p_[0] + u * (p_[1] - p_[0]); break;
    case DistKind::exponential: w = -std::log1p(-u) / p_[0]; break;
    case DistKind::shifted_exponential: w = p_[0] - std::log1p(-u) / p_[1]; break;
  }
  return quantize_weight(w);
}

double WeightDistribution::cdf(double x) const {
  switch (kind_) {
    case DistKind::constant: return x >= p_[0] ? 1.0 : 0.0;
    case DistKind::two_point:
      if (x < p_[0]) return 0.0;
      if (x < p_[1]) return p_[2];
      return 1.0;
    case DistKind::uniform:
      if (x <= p_[0]) return 0.0;
      if (x >= p_[1]) return 1.0;
      return (x - p_[0]) / (p_[1] - p_[0]);
    case DistKind::exponential: return x <= 0 ? 0.0 : -std::expm1(-p_[0] * x);
    case DistKind::shifted_exponential:
      return x <= p_[0] ? 0.0 : -std::expm1(-p_[1] * (x - p_[0]));
  }
  return 0.0;
}

double WeightDistribution::atom_at_zero() const {
  switch (kind_) {
    case DistKind::constant: return p_[0] == 0 ? 1.0 : 0.0;
    case DistKind::two_point: return p_[0] == 0 ? p_[2] : 0.0;
    default: return 0.0;  // continuous laws
  }
}

double WeightDistribution::mean() const {
  switch (kind_) {
    case DistKind::constant: return p_[0];
    case DistKind::two_point: return p_[2] * p_[0] + (1 - p_[2]) * p_[1];
    case DistKind::uniform: return 0.5 * (p_[0] + p_[1]);
    case DistKind::exponential: return 1.0 / p_[0];
    case DistKind::shifted_exponential: return p_[0] + 1.0 / p_[1];
  }
  return 0.0;
}

std::string WeightDistribution::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case DistKind::constant: os << "constant(" << p_[0] << ")"; break;
    case DistKind::two_point: os << "two_point(" << p_[0] << "," << p_[1] << "," << p_[2] << ")"; break;
    case DistKind::uniform: os << "uniform(" << p_[0] << "," << p_[1] << ")"; break;
    case DistKind::exponential: os << "exponential(" << p_[0] << ")"; break;
    case DistKind::shifted_exponential: os << "shifted_exponential(" << p_[0] << "," << p_[1] << ")"; break;
  }
  return os.str();
}

WeightField::WeightField(int dim, WeightDistribution dist, uint64_t seed)
    : dim_(dim), dist_(dist), seed_(seed) {
  if (dim < 2 || dim > kMaxDim) throw std::invalid_argument("dimension must be in [2,4]");
  double f0 = dist.atom_at_zero();
  if (f0 >= bond_percolation_pc(dim))
    throw std::invalid_argument("P(tau_e = 0) >= p_c(d): supercritical zero-weight cluster rejected");
}

double WeightField::weight(const Edge& e) const {
  const uint64_t key = pack_edge(e);
  if (const double* ov = overrides_.find(key)) return *ov;
  const uint64_t h = mix64(key ^ mix64(seed_ ^ 0x9e3779b97f4a7c15ull));
  return dist_.icdf(unit_real(h));
}

WeightField WeightField::with_overrides(const std::vector<std::pair<Edge, double>>& patch) const {
  WeightField f = *this;
  f.overrides_.reserve(overrides_.size() + patch.size());
  for (const auto& [e, w] : patch) {
    if (!std::isfinite(w) || w < 0)
      throw std::invalid_argument("override weight must be finite and >= 0");
    f.overrides_.insert_or_assign(pack_edge(e), w);
  }
  return f;
}

std::vector<std::pair<Edge, double>> WeightField::override_list() const {
  std::vector<std::pair<uint64_t, double>> raw;
  raw.reserve(overrides_.size());
  overrides_.for_each([&](uint64_t k, double w) { raw.emplace_back(k, w); });
  std::sort(raw.begin(), raw.end());
  std::vector<std::pair<Edge, double>> out;
  out.reserve(raw.size());
  const int bits = detail::kEdgeBits[dim_];
  const uint64_t mask = (uint64_t(1) << bits) - 1;
  for (auto& [k, w] : raw) {
    Edge e;
    e.axis = int32_t(k & 3);
    uint64_t vk = k >> 2;
    e.base = Vertex::zero(dim_);
    for (int i = dim_ - 1; i >= 0; --i) {
      e.base.c[i] = unzigzag32(uint32_t(vk & mask));
      vk >>= bits;
    }
    out.emplace_back(e, w);
  }
  return out;
}

}  // namespace fpp
