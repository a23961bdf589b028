#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "dbk/error.hpp"
#include "dbk/multi_index.hpp"

using namespace dbk;

namespace {

std::vector<int> entries(unsigned bits) {
  std::vector<int> out;
  for (int i = 1; i <= 8; ++i)
    if ((bits >> (i - 1)) & 1u) out.push_back(i);
  return out;
}

// Sign of the permutation that sorts a sequence, by counting inversions.
int inversion_sign(const std::vector<int>& seq) {
  int inv = 0;
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j) inv += seq[i] > seq[j] ? 1 : 0;
  return inv % 2 ? -1 : 1;
}

}  // namespace

TEST(MultiIndex, ShuffleSignMatchesInversionCount) {
  for (unsigned a = 0; a < 32; ++a) {
    for (unsigned b = 0; b < 32; ++b) {
      if (a & b) {
        EXPECT_EQ(shuffle_sign(a, b), 0);
        continue;
      }
      auto seq = entries(a);
      const auto tail = entries(b);
      seq.insert(seq.end(), tail.begin(), tail.end());
      EXPECT_EQ(shuffle_sign(a, b), inversion_sign(seq)) << a << " " << b;
    }
  }
}

TEST(MultiIndex, InsertionSignIsShuffleOfSingleton) {
  for (unsigned set = 0; set < 16; ++set) {
    for (int j = 1; j <= 4; ++j) {
      if (set & (1u << (j - 1))) continue;
      EXPECT_EQ(insertion_sign(j, set), shuffle_sign(1u << (j - 1), set));
    }
  }
}

TEST(MultiIndex, SubsetsAreOrderedAndRanked) {
  for (int dim = 1; dim <= 5; ++dim) {
    for (int size = 0; size <= dim; ++size) {
      const auto& s = subsets(dim, size);
      ASSERT_EQ(static_cast<int>(s.size()), binomial(dim, size));
      for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_EQ(popcount(s[i]), size);
        EXPECT_EQ(subset_rank(s[i], dim), static_cast<int>(i));
        if (i > 0) EXPECT_TRUE(entries(s[i - 1]) < entries(s[i]));
      }
    }
  }
}

TEST(MultiIndex, EntriesAndText) {
  const auto I = MultiIndex::from_entries({1, 3, 4}, 4);
  EXPECT_EQ(I.bits(), 0b1101u);
  EXPECT_EQ(I.size(), 3);
  EXPECT_TRUE(I.contains(3));
  EXPECT_FALSE(I.contains(2));
  EXPECT_EQ(I.str(), "1-3-4");
  EXPECT_EQ(MultiIndex(0, 3).str(), "");
  EXPECT_THROW(MultiIndex::from_entries({2, 1}, 3), Error);
  EXPECT_THROW(MultiIndex::from_entries({1, 4}, 3), Error);
}

TEST(MultiIndex, Binomial) {
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(binomial(3, 0), 1);
  EXPECT_EQ(binomial(3, 4), 0);
}
