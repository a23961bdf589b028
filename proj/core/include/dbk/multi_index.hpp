#pragma once

#include <string>
#include <vector>

namespace dbk {

/// Strictly increasing tuple drawn from {1, ..., dim}, stored as a bitmask
/// (bit i-1 set when i is present).
class MultiIndex {
public:
  MultiIndex() = default;
  MultiIndex(unsigned bits, int dim);
  /// From 1-based entries; throws unless strictly increasing and in range.
  static MultiIndex from_entries(const std::vector<int>& entries, int dim);

  unsigned bits() const { return bits_; }
  int dim() const { return dim_; }
  int size() const;
  std::vector<int> entries() const;
  bool contains(int i) const { return (bits_ >> (i - 1)) & 1u; }

  /// Dash-joined entries, "" for the empty index.
  std::string str() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

private:
  unsigned bits_ = 0;
  int dim_ = 0;
};

int popcount(unsigned bits);

/// All subsets of {1..dim} of the given size, ordered lexicographically by
/// their sorted entry tuples.
const std::vector<unsigned>& subsets(int dim, int size);

/// Position of `bits` within subsets(dim, popcount(bits)).
int subset_rank(unsigned bits, int dim);

/// (-1)^{#{i in set : i < j}}: the sign of moving index j to the front of
/// an ascending tuple, i.e. of e_j ^ e_set = sign * e_{set + j}.
int insertion_sign(int j, unsigned set);

/// Sign of the permutation sorting the concatenation (a, b) of two ascending
/// tuples; 0 if they share an index.
int shuffle_sign(unsigned a, unsigned b);

/// Binomial coefficient for small arguments.
int binomial(int n, int k);

}  // namespace dbk
