#pragma once

#include <vector>

#include "wishmom/errors.hpp"

namespace wishmom {

/// Integer partition: weakly decreasing positive parts. The empty vector is
/// the unique partition of 0.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);

  int weight() const { return weight_; }
  int length() const { return static_cast<int>(parts_.size()); }
  const std::vector<int>& parts() const { return parts_; }
  int part(int i) const {  // zero beyond the last part
    return i < length() ? parts_[i] : 0;
  }

  bool operator==(const Partition& o) const { return parts_ == o.parts_; }

 private:
  std::vector<int> parts_;
  int weight_ = 0;
};

/// All partitions of k with at most max_parts parts, in reverse-lexicographic
/// order: (k) first, then (k-1,1), ... Count equals the restricted partition
/// number.
std::vector<Partition> partitions_of(int k, int max_parts);

/// Visit each partition in the same order without materializing the list.
template <typename Fn>
void for_each_partition(int k, int max_parts, Fn&& fn) {
  if (k < 0) throw DomainError("partitions: negative weight");
  std::vector<int> parts;
  auto rec = [&](auto&& self, int rest, int max_first, int slots) -> void {
    if (rest == 0) {
      fn(const_cast<const std::vector<int>&>(parts));
      return;
    }
    if (slots == 0) return;
    int hi = rest < max_first ? rest : max_first;
    // Smallest admissible first part: ceil(rest / slots).
    int lo = (rest + slots - 1) / slots;
    for (int v = hi; v >= lo; --v) {
      parts.push_back(v);
      self(self, rest - v, v, slots - 1);
      parts.pop_back();
    }
  };
  rec(rec, k, k, max_parts);
}

}  // namespace wishmom
