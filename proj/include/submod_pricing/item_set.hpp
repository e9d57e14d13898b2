// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "submod_pricing/errors.hpp"

namespace submod_pricing {

// The universe of sellable items. Item identity is its string id; item order
// (and hence every deterministic tie-break in the library) is the position in
// the constructing sequence.
class GroundSet {
 public:
  explicit GroundSet(std::vector<std::string> ids) : ids_(std::move(ids)) {
    index_.reserve(ids_.size());
    for (int i = 0; i < static_cast<int>(ids_.size()); ++i) {
      if (ids_[i].empty()) throw InputError("ground set: empty item id");
      if (!index_.emplace(ids_[i], i).second) {
        throw InputError("ground set: duplicate item id '" + ids_[i] + "'");
      }
    }
  }

  int size() const { return static_cast<int>(ids_.size()); }
  const std::string& id(int i) const { return ids_.at(i); }
  const std::vector<std::string>& ids() const { return ids_; }

  int index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) {
      throw InputError("unknown item '" + std::string(id) + "'");
    }
    return it->second;
  }

  bool contains(std::string_view id) const {
    return index_.find(std::string(id)) != index_.end();
  }

  friend bool operator==(const GroundSet& a, const GroundSet& b) {
    return a.ids_ == b.ids_;
  }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
};

// A subset of a ground set, held as a dynamic bitset over item indices.
// The universe size is part of the value: sets over different universes never
// compare equal and may not be mixed in one operation.
class ItemSet {
 public:
  ItemSet() = default;

  explicit ItemSet(int universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {
    if (universe < 0) throw InputError("item set: negative universe");
  }

  // Low 64 bits of `mask` select items; requires universe <= 64.
  static ItemSet from_mask(int universe, std::uint64_t mask) {
    ItemSet s(universe);
    if (universe > 64) throw InputError("item set: mask form needs <= 64 items");
    if (universe < 64 && (mask >> universe) != 0) {
      throw InputError("item set: mask has bits outside the universe");
    }
    if (!s.words_.empty()) s.words_[0] = mask;
    return s;
  }

  static ItemSet full(int universe) {
    ItemSet s(universe);
    for (int i = 0; i < universe; ++i) s.insert(i);
    return s;
  }

  int universe() const { return universe_; }
  bool empty() const {
    for (std::uint64_t w : words_) {
      if (w != 0) return false;
    }
    return true;
  }

  int size() const {
    int n = 0;
    for (std::uint64_t w : words_) n += std::popcount(w);
    return n;
  }

  bool contains(int i) const {
    check_index(i);
    return (words_[i / 64] >> (i % 64)) & 1u;
  }

  void insert(int i) {
    check_index(i);
    words_[i / 64] |= std::uint64_t{1} << (i % 64);
  }

  void erase(int i) {
    check_index(i);
    words_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
  }

  ItemSet with(int i) const {
    ItemSet s = *this;
    s.insert(i);
    return s;
  }

  ItemSet without(int i) const {
    ItemSet s = *this;
    s.erase(i);
    return s;
  }

  bool subset_of(const ItemSet& o) const {
    check_same_universe(o);
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if (words_[k] & ~o.words_[k]) return false;
    }
    return true;
  }

  bool intersects(const ItemSet& o) const {
    check_same_universe(o);
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if (words_[k] & o.words_[k]) return true;
    }
    return false;
  }

  ItemSet union_with(const ItemSet& o) const {
    check_same_universe(o);
    ItemSet s = *this;
    for (std::size_t k = 0; k < words_.size(); ++k) s.words_[k] |= o.words_[k];
    return s;
  }

  // Items in ascending index order.
  std::vector<int> items() const {
    std::vector<int> out;
    out.reserve(size());
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w != 0) {
        int bit = std::countr_zero(w);
        fn(static_cast<int>(k) * 64 + bit);
        w &= w - 1;
      }
    }
  }

  // Requires universe <= 64.
  std::uint64_t mask64() const {
    if (universe_ > 64) throw InputError("item set: universe exceeds 64 bits");
    return words_.empty() ? 0 : words_[0];
  }

  friend bool operator==(const ItemSet& a, const ItemSet& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

 private:
  void check_index(int i) const {
    if (i < 0 || i >= universe_) {
      throw InputError("item index " + std::to_string(i) +
                       " outside universe of size " + std::to_string(universe_));
    }
  }

  void check_same_universe(const ItemSet& o) const {
    if (universe_ != o.universe_) {
      throw InputError("item sets over different universes");
    }
  }

  int universe_ = 0;
  std::vector<std::uint64_t> words_;
};

inline ItemSet make_set(const GroundSet& ground,
                        std::initializer_list<std::string_view> ids) {
  ItemSet s(ground.size());
  for (std::string_view id : ids) s.insert(ground.index_of(id));
  return s;
}

inline std::vector<std::string> item_names(const GroundSet& ground,
                                           const ItemSet& set) {
  std::vector<std::string> out;
  out.reserve(set.size());
  set.for_each([&](int i) { out.push_back(ground.id(i)); });
  return out;
}

}  // namespace submod_pricing
