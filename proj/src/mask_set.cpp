#include "cosknn/mask_set.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace cosknn {

namespace {
constexpr std::size_t kWordBits = 64;

std::size_t words_for(std::size_t d) { return (d + kWordBits - 1) / kWordBits; }
}  // namespace

MaskSet::MaskSet(std::size_t d) : d_(d), words_(words_for(d), 0) {}

MaskSet::MaskSet(std::size_t d, std::initializer_list<std::size_t> items) : MaskSet(d) {
  for (auto j : items) insert(j);
}

MaskSet::MaskSet(std::size_t d, const std::vector<std::size_t>& items) : MaskSet(d) {
  for (auto j : items) insert(j);
}

MaskSet MaskSet::full(std::size_t d) {
  MaskSet m(d);
  for (std::size_t j = 0; j < d; ++j) m.insert(j);
  return m;
}

std::size_t MaskSet::size() const {
  std::size_t count = 0;
  for (auto w : words_) count += static_cast<std::size_t>(std::popcount(w));
  return count;
}

bool MaskSet::contains(std::size_t item) const {
  if (item >= d_) return false;
  return (words_[item / kWordBits] >> (item % kWordBits)) & 1U;
}

void MaskSet::insert(std::size_t item) {
  if (item >= d_) {
    throw std::out_of_range("item index " + std::to_string(item) + " outside mask of dimension " +
                            std::to_string(d_));
  }
  words_[item / kWordBits] |= std::uint64_t{1} << (item % kWordBits);
}

bool MaskSet::subset_of(const MaskSet& other) const {
  if (other.d_ != d_) throw std::invalid_argument("mask dimension mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if ((words_[w] & ~other.words_[w]) != 0) return false;
  }
  return true;
}

MaskSet MaskSet::intersect(const MaskSet& other) const {
  if (other.d_ != d_) throw std::invalid_argument("mask dimension mismatch");
  MaskSet out(d_);
  for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] = words_[w] & other.words_[w];
  return out;
}

std::size_t MaskSet::intersection_size(const MaskSet& other) const {
  if (other.d_ != d_) throw std::invalid_argument("mask dimension mismatch");
  std::size_t count = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    count += static_cast<std::size_t>(std::popcount(words_[w] & other.words_[w]));
  }
  return count;
}

std::vector<std::size_t> MaskSet::items() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < d_; ++j) {
    if (contains(j)) out.push_back(j);
  }
  return out;
}

}  // namespace cosknn
