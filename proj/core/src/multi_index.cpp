#include "dbk/multi_index.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

#include "dbk/error.hpp"

namespace dbk {

int popcount(unsigned bits) { return std::popcount(bits); }

MultiIndex::MultiIndex(unsigned bits, int dim) : bits_(bits), dim_(dim) {
  if (dim < 0 || dim > 16 || (dim < 16 && (bits >> dim) != 0)) {
    throw Error("multi-index entry out of range");
  }
}

MultiIndex MultiIndex::from_entries(const std::vector<int>& entries, int dim) {
  unsigned bits = 0;
  int last = 0;
  for (int e : entries) {
    if (e <= last || e > dim) throw Error("multi-index must be strictly increasing within 1..dim");
    bits |= 1u << (e - 1);
    last = e;
  }
  return MultiIndex(bits, dim);
}

int MultiIndex::size() const { return popcount(bits_); }

std::vector<int> MultiIndex::entries() const {
  std::vector<int> out;
  for (int i = 1; i <= dim_; ++i) {
    if (contains(i)) out.push_back(i);
  }
  return out;
}

std::string MultiIndex::str() const {
  std::ostringstream os;
  bool first = true;
  for (int e : entries()) {
    if (!first) os << '-';
    os << e;
    first = false;
  }
  return os.str();
}

namespace {

bool lex_less(unsigned a, unsigned b) {
  // Compare sorted entry tuples of equal length: the lowest differing bit
  // decides, the set containing it is smaller.
  const unsigned diff = a ^ b;
  if (diff == 0) return false;
  const unsigned low = diff & (~diff + 1u);
  return (a & low) != 0;
}

}  // namespace

const std::vector<unsigned>& subsets(int dim, int size) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<unsigned>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, size);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<unsigned> out;
  if (size >= 0 && size <= dim) {
    for (unsigned b = 0; b < (1u << dim); ++b) {
      if (popcount(b) == size) out.push_back(b);
    }
    std::sort(out.begin(), out.end(), lex_less);
  }
  return cache.emplace(key, std::move(out)).first->second;
}

int subset_rank(unsigned bits, int dim) {
  const auto& list = subsets(dim, popcount(bits));
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i] == bits) return static_cast<int>(i);
  }
  throw Error("subset not found");
}

int insertion_sign(int j, unsigned set) {
  const unsigned below = set & ((1u << (j - 1)) - 1u);
  return (popcount(below) % 2 == 0) ? 1 : -1;
}

int shuffle_sign(unsigned a, unsigned b) {
  if (a & b) return 0;
  // Each element of b passes over the elements of a that are larger.
  int inversions = 0;
  for (unsigned rest = b; rest; rest &= rest - 1) {
    const unsigned low = rest & (~rest + 1u);
    inversions += popcount(a & ~(low | (low - 1u)));
  }
  return inversions % 2 == 0 ? 1 : -1;
}

int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace dbk
