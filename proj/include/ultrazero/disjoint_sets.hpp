/*
 * Copyright 2026 The ultrazero Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace ultrazero {

// Union-find with path halving and union by size.
class DisjointSets {
public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns the surviving root, or the common root if already joined.
  std::size_t unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return a;
  }

  std::size_t set_size(std::size_t x) { return size_[find(x)]; }

  // Classes ordered by their smallest member; members ascending.
  std::vector<std::vector<std::size_t>> classes() {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> slot(parent_.size(), parent_.size());
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      const std::size_t r = find(i);
      if (slot[r] == parent_.size()) {
        slot[r] = out.size();
        out.emplace_back();
      }
      out[slot[r]].push_back(i);
    }
    return out;
  }

private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace ultrazero
