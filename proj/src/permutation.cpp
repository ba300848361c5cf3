#include "mallows/permutation.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mallows {

Permutation::Permutation(std::vector<int> one_line) : map_(std::move(one_line)) {
  const auto n = map_.size();
  std::vector<bool> seen(n + 1, false);
  for (const int v : map_) {
    if (v < 1 || static_cast<std::size_t>(v) > n || seen[v]) {
      throw std::invalid_argument("not a permutation of [n]: bad or repeated entry " + std::to_string(v));
    }
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  return from_trusted(std::move(v));
}

Permutation Permutation::from_trusted(std::vector<int> one_line) noexcept {
  Permutation p;
  p.map_ = std::move(one_line);
  return p;
}

Permutation Permutation::from_array_form(const std::vector<int>& array_form) {
  return Permutation(array_form).inverse();
}

std::vector<int> Permutation::array_form() const {
  std::vector<int> inv(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i] - 1] = static_cast<int>(i + 1);
  return inv;
}

Permutation Permutation::inverse() const { return from_trusted(array_form()); }

std::string Permutation::to_string() const {
  std::string out;
  const bool spaced = map_.size() > 9;
  for (std::size_t i = 0; i < map_.size(); ++i) {
    if (spaced && i > 0) out += ' ';
    out += std::to_string(map_[i]);
  }
  return out;
}

namespace {

std::uint64_t merge_count(std::vector<int>& a, std::vector<int>& buf, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t count = merge_count(a, buf, lo, mid) + merge_count(a, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (a[i] <= a[j]) {
      buf[k++] = a[i++];
    } else {
      count += mid - i;
      buf[k++] = a[j++];
    }
  }
  while (i < mid) buf[k++] = a[i++];
  while (j < hi) buf[k++] = a[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, a.begin() + lo);
  return count;
}

}  // namespace

std::uint64_t inversions(const Permutation& p) {
  std::vector<int> a(p.one_line().begin(), p.one_line().end());
  std::vector<int> buf(a.size());
  return merge_count(a, buf, 0, a.size());
}

namespace {

// Pairs i < j in [lo, hi) with ref(i) < ref(j) and p(i) > p(j); divide and
// conquer on the index with a Fenwick tree over p-values, O(n log^2 n).
class DiscordanceCounter {
 public:
  DiscordanceCounter(std::span<const int> p, std::span<const int> ref)
      : p_(p), ref_(ref), tree_(p.size() + 1, 0), order_(p.size()) {
    std::iota(order_.begin(), order_.end(), std::size_t{0});
  }

  std::uint64_t count(std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t total = count(lo, mid) + count(mid, hi);
    // both halves are now sorted by ref inside order_
    std::size_t i = lo;
    std::uint64_t added = 0;
    for (std::size_t j = mid; j < hi; ++j) {
      const std::size_t right = order_[j];
      while (i < mid && ref_[order_[i]] < ref_[right]) {
        add(p_[order_[i]], 1);
        ++added;
        ++i;
      }
      total += added - prefix(p_[right]);
    }
    for (std::size_t k = lo; k < i; ++k) add(p_[order_[k]], -1);
    std::inplace_merge(order_.begin() + static_cast<std::ptrdiff_t>(lo),
                       order_.begin() + static_cast<std::ptrdiff_t>(mid),
                       order_.begin() + static_cast<std::ptrdiff_t>(hi),
                       [this](std::size_t a, std::size_t b) { return ref_[a] < ref_[b]; });
    return total;
  }

 private:
  void add(int v, int delta) {
    for (auto k = static_cast<std::size_t>(v); k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
  }
  std::uint64_t prefix(int v) const {
    std::int64_t s = 0;
    for (auto k = static_cast<std::size_t>(v); k > 0; k -= k & (~k + 1)) s += tree_[k];
    return static_cast<std::uint64_t>(s);
  }

  std::span<const int> p_;
  std::span<const int> ref_;
  std::vector<std::int64_t> tree_;
  std::vector<std::size_t> order_;
};

}  // namespace

std::uint64_t kendall_tau(const Permutation& p, const Permutation& ref) {
  if (p.size() != ref.size()) {
    throw std::invalid_argument("kendall_tau: length mismatch (" + std::to_string(p.size()) + " vs " +
                                std::to_string(ref.size()) + ")");
  }
  DiscordanceCounter counter(p.one_line(), ref.one_line());
  return counter.count(0, p.size());
}

Permutation reversal(const Permutation& p) {
  const int n1 = static_cast<int>(p.size()) + 1;
  std::vector<int> v(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) v[i] = n1 - p(i + 1);
  return Permutation::from_trusted(std::move(v));
}

std::uint64_t lex_rank(const Permutation& p) {
  const auto n = p.size();
  if (n > 20) throw std::invalid_argument("lex_rank: n > 20 overflows 64 bits");
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t smaller_after = 0;
    for (std::size_t j = i + 1; j < n; ++j) smaller_after += p(j + 1) < p(i + 1);
    rank = rank * (n - i) + smaller_after;
  }
  return rank;
}

Permutation lex_unrank(std::uint64_t rank, std::size_t n) {
  if (n > 20) throw std::invalid_argument("lex_unrank: n > 20 overflows 64 bits");
  std::vector<int> digits(n);
  for (std::size_t i = 1; i <= n; ++i) {
    digits[n - i] = static_cast<int>(rank % i);
    rank /= i;
  }
  if (rank != 0) throw std::invalid_argument("lex_unrank: rank >= n!");
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = pool[digits[i]];
    pool.erase(pool.begin() + digits[i]);
  }
  return Permutation::from_trusted(std::move(out));
}

double log_partition_function(std::size_t n, double q) {
  if (n < 1) throw std::invalid_argument("partition_function: n must be >= 1");
  if (!(q > 0.0) || !(q < 1.0)) throw std::invalid_argument("partition_function: q must lie in (0, 1)");
  const double log1mq = std::log1p(-q);
  double sum = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    // [i]_q = (1 - q^i) / (1 - q)
    sum += std::log1p(-std::pow(q, static_cast<double>(i))) - log1mq;
  }
  return sum;
}

double partition_function(std::size_t n, double q) {
  if (n > 300) return std::exp(log_partition_function(n, q));
  if (n < 1) throw std::invalid_argument("partition_function: n must be >= 1");
  if (!(q > 0.0) || !(q < 1.0)) throw std::invalid_argument("partition_function: q must lie in (0, 1)");
  double z = 1.0;
  double qi = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    qi *= q;
    z *= (1.0 - qi) / (1.0 - q);
  }
  return z;
}

double log_pmf(const Permutation& p, double q) {
  return static_cast<double>(inversions(p)) * std::log(q) - log_partition_function(p.size(), q);
}

}  // namespace mallows
