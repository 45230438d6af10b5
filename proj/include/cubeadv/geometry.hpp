#pragma once

#include <cstddef>
#include <vector>

#include "cubeadv/rational.hpp"

namespace cubeadv {

/// Open interval (lo, hi) with lo < hi.
struct Interval {
  Rat lo;
  Rat hi;

  Interval(Rat lo_, Rat hi_);
  Rat length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Open axis-aligned box: the product of its intervals.
class AxisBox {
public:
  explicit AxisBox(std::vector<Interval> dims);

  std::size_t dim() const { return dims_.size(); }
  const Interval& operator[](std::size_t i) const { return dims_[i]; }
  const std::vector<Interval>& intervals() const { return dims_; }

  friend bool operator==(const AxisBox&, const AxisBox&) = default;

private:
  std::vector<Interval> dims_;
};

/// Lower coordinate of the slot for letter `v` of a k-word:
/// (1+eps)(v-1)/k for v < k, and 1 - (1+eps)/k for v = k.
/// Requires 0 < eps < 1/(k-1) and 1 <= v <= k.
Rat base_coord(int k, int v, const Rat& eps);

/// Slot interval (base_coord, base_coord + (1+eps)/k); always ends at or below 1.
Interval interval_of(int k, int v, const Rat& eps);

/// Grid slot for v < k; unlike interval_of this also admits the boundary
/// eps = 1/(k-1), where the top slot ends exactly at 1.
Interval grid_interval(int k, int v, const Rat& eps);

/// Side length (1+eps)/k of the class-k cube.
Rat side_length(int k, const Rat& eps);

bool intervals_overlap(const Interval& a, const Interval& b);

/// Overlap of open boxes: every coordinate must overlap. Throws DimensionMismatch.
bool boxes_overlap(const AxisBox& a, const AxisBox& b);

bool box_in_unit(const AxisBox& a);

/// Exact evaluation of y^(k)(k-1) < x^(k2)(k2), the cross-class gap that
/// separates slot k2 of class k2 from every slot below k of class k.
/// Requires 2 <= k < k2 <= S and 0 < eps < 1/(k2-1); the inequality is
/// guaranteed to hold once eps <= 1/S^2.
bool check_gap_fact(int k, int k2, int S, const Rat& eps);

}  // namespace cubeadv
