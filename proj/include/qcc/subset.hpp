#pragma once

#include "qcc/random.hpp"

#include <vector>

namespace qcc {

/// Sorted, duplicate-free set of elements of {0, ..., n-1}.
using Subset = std::vector<int>;

/// Sorts, removes duplicates and range-checks against n. Throws OutOfRange.
Subset make_subset(std::vector<int> elements, int n);

/// Uniformly random size-k subset of {0, ..., n-1} (partial Fisher-Yates).
Subset random_subset(int n, int k, RandomStream& rng);

Subset complement(const Subset& s, int n);
Subset set_intersection(const Subset& a, const Subset& b);
Subset set_difference(const Subset& a, const Subset& b);
bool contains(const Subset& s, int x);

/// All size-k subsets of {0, ..., n-1} in lexicographic order.
std::vector<Subset> all_subsets(int n, int k);

/// Membership mask of length n.
std::vector<char> to_mask(const Subset& s, int n);

}  // namespace qcc
