#include "qcc/subset.hpp"

#include "qcc/errors.hpp"

#include <algorithm>
#include <iterator>
#include <numeric>
#include <string>

namespace qcc {

Subset make_subset(std::vector<int> elements, int n) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  if (!elements.empty() && (elements.front() < 0 || elements.back() >= n)) {
    throw Error(ErrorCode::OutOfRange, "subset element outside [0, " + std::to_string(n) + ")");
  }
  return elements;
}

Subset random_subset(int n, int k, RandomStream& rng) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

Subset complement(const Subset& s, int n) {
  Subset out;
  out.reserve(n - s.size());
  auto it = s.begin();
  for (int i = 0; i < n; ++i) {
    if (it != s.end() && *it == i) {
      ++it;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

Subset set_intersection(const Subset& a, const Subset& b) {
  Subset out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Subset set_difference(const Subset& a, const Subset& b) {
  Subset out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool contains(const Subset& s, int x) { return std::binary_search(s.begin(), s.end(), x); }

std::vector<Subset> all_subsets(int n, int k) {
  std::vector<Subset> out;
  if (k < 0 || k > n) return out;
  Subset current(k);
  std::iota(current.begin(), current.end(), 0);
  while (true) {
    out.push_back(current);
    int i = k - 1;
    while (i >= 0 && current[i] == n - k + i) --i;
    if (i < 0) break;
    ++current[i];
    for (int j = i + 1; j < k; ++j) current[j] = current[j - 1] + 1;
  }
  return out;
}

std::vector<char> to_mask(const Subset& s, int n) {
  std::vector<char> mask(n, 0);
  for (int x : s) mask[x] = 1;
  return mask;
}

}  // namespace qcc
