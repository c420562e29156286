#include "wishmom/partition.hpp"

namespace wishmom {

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] < 1) throw DomainError("Partition: parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1])
      throw DomainError("Partition: parts must be weakly decreasing");
    weight_ += parts_[i];
  }
}

std::vector<Partition> partitions_of(int k, int max_parts) {
  std::vector<Partition> out;
  for_each_partition(k, max_parts,
                     [&](const std::vector<int>& p) { out.emplace_back(p); });
  return out;
}

}  // namespace wishmom
