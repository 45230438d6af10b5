#include "cubeadv/geometry.hpp"

#include <string>

#include "cubeadv/errors.hpp"

namespace cubeadv {

Interval::Interval(Rat lo_, Rat hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (!(lo < hi)) {
    throw InvalidArgument("degenerate interval (" + lo.to_string() + ", " + hi.to_string() + ")");
  }
}

AxisBox::AxisBox(std::vector<Interval> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InvalidArgument("box needs at least one dimension");
}

namespace {

void require_slot_args(int k, int v, const Rat& eps, bool allow_boundary) {
  if (k < 2) throw InvalidArgument("class k must be >= 2, got " + std::to_string(k));
  if (v < 1 || v > k) {
    throw InvalidArgument("letter " + std::to_string(v) + " outside [1," + std::to_string(k) + "]");
  }
  const Rat limit(BigInt(1), BigInt(k - 1));
  const bool too_big = allow_boundary ? eps > limit : eps >= limit;
  if (eps.sign() <= 0 || too_big) {
    throw InvalidArgument("eps " + eps.to_string() + " outside (0, 1/" + std::to_string(k - 1) +
                          (allow_boundary ? "]" : ")"));
  }
}

}  // namespace

Rat side_length(int k, const Rat& eps) { return (Rat(1) + eps) / Rat(k); }

Rat base_coord(int k, int v, const Rat& eps) {
  require_slot_args(k, v, eps, false);
  if (v < k) return side_length(k, eps) * Rat(v - 1);
  return Rat(1) - side_length(k, eps);
}

Interval interval_of(int k, int v, const Rat& eps) {
  Rat lo = base_coord(k, v, eps);
  Rat hi = lo + side_length(k, eps);
  return Interval(std::move(lo), std::move(hi));
}

Interval grid_interval(int k, int v, const Rat& eps) {
  if (v >= k) throw InvalidArgument("grid slots use letters below k");
  require_slot_args(k, v, eps, true);
  const Rat side = side_length(k, eps);
  Rat lo = side * Rat(v - 1);
  Rat hi = lo + side;
  return Interval(std::move(lo), std::move(hi));
}

bool intervals_overlap(const Interval& a, const Interval& b) {
  const Rat& lo = a.lo < b.lo ? b.lo : a.lo;
  const Rat& hi = a.hi < b.hi ? a.hi : b.hi;
  return lo < hi;
}

bool boxes_overlap(const AxisBox& a, const AxisBox& b) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch("boxes of dimension " + std::to_string(a.dim()) + " and " +
                            std::to_string(b.dim()));
  }
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (!intervals_overlap(a[i], b[i])) return false;
  }
  return true;
}

bool box_in_unit(const AxisBox& a) {
  for (const auto& iv : a.intervals()) {
    if (iv.lo.sign() < 0 || iv.hi > Rat(1)) return false;
  }
  return true;
}

bool check_gap_fact(int k, int k2, int S, const Rat& eps) {
  if (!(2 <= k && k < k2 && k2 <= S)) {
    throw InvalidArgument("need 2 <= k < k2 <= S");
  }
  // Slots of both classes must exist; eps <= 1/S^2 is what makes the result true.
  if (eps.sign() <= 0 || eps >= Rat(BigInt(1), BigInt(k2 - 1))) {
    throw InvalidArgument("eps must lie in (0, 1/(k2-1))");
  }
  const Rat upper = interval_of(k, k - 1, eps).hi;
  const Rat lower = base_coord(k2, k2, eps);
  return upper < lower;
}

}  // namespace cubeadv
