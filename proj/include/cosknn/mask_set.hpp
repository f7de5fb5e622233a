#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace cosknn {

/// Subset of the item indices {0, ..., d-1}.
///
/// Indices are 0-based in code. Text formats (fixtures, CSV, CLI output)
/// print them 1-based.
class MaskSet {
 public:
  MaskSet() = default;
  explicit MaskSet(std::size_t d);
  MaskSet(std::size_t d, std::initializer_list<std::size_t> items);
  MaskSet(std::size_t d, const std::vector<std::size_t>& items);

  static MaskSet full(std::size_t d);

  std::size_t dimension() const { return d_; }
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  bool is_full() const { return size() == d_; }

  bool contains(std::size_t item) const;
  void insert(std::size_t item);

  bool subset_of(const MaskSet& other) const;
  MaskSet intersect(const MaskSet& other) const;
  std::size_t intersection_size(const MaskSet& other) const;

  /// Items in ascending order.
  std::vector<std::size_t> items() const;

  bool operator==(const MaskSet& other) const = default;

 private:
  std::size_t d_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace cosknn
