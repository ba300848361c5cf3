#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "mallows/exact.hpp"
#include "mallows/insertion.hpp"
#include "mallows/permutation.hpp"
#include "mallows/rng.hpp"
#include "test_support.hpp"

using namespace mallows;
using mallows::testing::all_permutations;

TEST_CASE("MallowsParams rejects q outside (0,1)") {
  CHECK_THROWS_AS(MallowsParams(0.0), std::invalid_argument);
  CHECK_THROWS_AS(MallowsParams(1.0), std::invalid_argument);
  CHECK_THROWS_AS(MallowsParams(1.5), std::invalid_argument);
  CHECK_THROWS_AS(MallowsParams(-0.2), std::invalid_argument);
  CHECK_THROWS_AS(MallowsParams(std::nan("")), std::invalid_argument);
  CHECK(MallowsParams(0.5).q() == 0.5);
}

TEST_CASE("Permutation validates its one-line form") {
  CHECK_NOTHROW(Permutation({3, 1, 4, 2}));
  CHECK_THROWS_AS(Permutation({1, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(Permutation({1, 3}), std::invalid_argument);
  const Permutation p({3, 1, 4, 2});
  CHECK(p.array_form() == std::vector<int>{2, 4, 1, 3});
  CHECK(Permutation::from_array_form(p.array_form()) == p);
  CHECK(p.to_string() == "3142");
}

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using B = CounterRng::Block;
  CHECK(CounterRng::philox({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(CounterRng::philox({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        B{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(CounterRng::philox({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        B{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("geometric_draw: support, determinism, mean") {
  const MallowsParams params(0.5);
  SUBCASE("replay") {
    GeometricStream a(params, 1, 0), b(params, 1, 0);
    for (int i = 0; i < 1000; ++i) REQUIRE(a.draw() == b.draw());
    CHECK(a.position() == 1000);
  }
  SUBCASE("distinct streams differ") {
    GeometricStream a(params, 1, 0), b(params, 1, 1);
    int same = 0;
    for (int i = 0; i < 1000; ++i) same += a.draw() == b.draw();
    CHECK(same < 700);  // P(equal) = 1/3 per draw at q = 0.5
  }
  SUBCASE("pmf at 1 and mean over 1e6 draws") {
    GeometricStream s(params, 7, 0);
    const int n = 1'000'000;
    double sum = 0, sum_sq = 0;
    int ones = 0;
    std::uint32_t min_draw = 1000;
    for (int i = 0; i < n; ++i) {
      const double z = s.draw();
      min_draw = std::min<std::uint32_t>(min_draw, static_cast<std::uint32_t>(z));
      ones += z == 1;
      sum += z;
      sum_sq += z * z;
    }
    CHECK(min_draw == 1);
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::abs(mean - 2.0) < 3 * se);
    const double p1 = static_cast<double>(ones) / n;
    CHECK(std::abs(p1 - 0.5) < 3 * std::sqrt(0.25 / n));
  }
}

TEST_CASE("uniform stays inside the open unit interval") {
  CounterRng rng(3, 9);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("assign_positions on the worked examples") {
  const std::vector<std::uint32_t> z1{4, 1, 6, 2, 3};
  CHECK(assign_positions(z1).positions == std::vector<std::int64_t>{4, 1, 8, 3, 6});

  const std::vector<std::uint32_t> z2{1, 2, 3, 1, 2, 3, 1, 1};
  const auto pre = assign_positions(z2);
  CHECK(pre.positions == std::vector<std::int64_t>{1, 3, 5, 2, 6, 8, 4, 7});
  // array picture: reading positions left to right gives the elements
  CHECK(induce_finite(pre).array_form() == std::vector<int>{1, 4, 2, 7, 3, 5, 8, 6});

  // array picture of the five-step example, restricted to occupied slots
  const auto p5 = assign_positions(z1);
  std::map<std::int64_t, int> row;
  for (std::size_t i = 0; i < p5.size(); ++i) row[p5.positions[i]] = static_cast<int>(i + 1);
  std::vector<int> read;
  for (const auto& [pos, elem] : row) read.push_back(elem);
  CHECK(read == std::vector<int>{2, 4, 1, 5, 3});

  const std::vector<std::uint32_t> ones(50, 1);
  const auto id = assign_positions(ones);
  for (std::size_t i = 0; i < ones.size(); ++i) CHECK(id.positions[i] == static_cast<std::int64_t>(i + 1));

  CHECK_THROWS_AS(assign_positions(std::vector<std::uint32_t>{1, 0}), std::invalid_argument);
}

TEST_CASE("assign_positions matches a linear-scan oracle and its invariants") {
  const MallowsParams params(0.7);
  for (std::uint64_t s = 0; s < 200; ++s) {
    GeometricStream stream(params, 11, s);
    std::vector<std::uint32_t> z(1 + s % 120);
    for (auto& zi : z) zi = stream.draw();
    // force window growth in some cases
    if (s % 7 == 0) z.back() += 500;
    const auto fast = assign_positions(z);
    REQUIRE(fast.positions == mallows::testing::naive_positions(z));
    std::set<std::int64_t> distinct;
    std::uint32_t max_z = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      max_z = std::max(max_z, z[i]);
      const auto pos = fast.positions[i];
      REQUIRE(distinct.insert(pos).second);
      std::size_t below = 0;
      for (std::size_t j = 0; j <= i; ++j) below += fast.positions[j] <= pos;
      REQUIRE(pos >= static_cast<std::int64_t>(below));
      REQUIRE(pos <= static_cast<std::int64_t>(i + 1 + max_z));
    }
  }
}

TEST_CASE("induce_finite ranks the prefix") {
  CHECK(induce_finite({{4, 1, 8, 3}}) == Permutation({3, 1, 4, 2}));
  CHECK(induce_finite({{1, 3, 5, 2, 6, 8, 4, 7}}) == Permutation({1, 3, 5, 2, 6, 8, 4, 7}));
  CHECK(induce_finite({{2, 1}}) == Permutation({2, 1}));
  // Pi_4 = 3142 in function form; its array form is the word 2413
  CHECK(induce_finite({{4, 1, 8, 3}}).inverse().to_string() == "2413");
  CHECK_THROWS_AS(induce_finite({}), std::invalid_argument);
}

TEST_CASE("inversions, kendall_tau and reversal") {
  CHECK(inversions(Permutation::identity(9)) == 0);
  CHECK(inversions(Permutation({3, 1, 4, 2})) == 3);
  for (std::size_t n : {1, 5, 50}) {
    std::vector<int> rev(n);
    for (std::size_t i = 0; i < n; ++i) rev[i] = static_cast<int>(n - i);
    CHECK(inversions(Permutation(rev)) == n * (n - 1) / 2);
  }
  CHECK(reversal(Permutation::identity(3)) == Permutation({3, 2, 1}));
  CHECK(reversal(Permutation({3, 1, 4, 2})) == Permutation({2, 4, 1, 3}));

  const Permutation p21({2, 1});
  CHECK(kendall_tau(p21, p21) == 0);
  CHECK_THROWS_AS(kendall_tau(p21, Permutation::identity(3)), std::invalid_argument);

  for (std::size_t n = 1; n <= 7; ++n) {
    const auto id = Permutation::identity(n);
    for (const auto& p : all_permutations(n)) {
      REQUIRE(inversions(p) == mallows::testing::naive_inversions(p));
      REQUIRE(kendall_tau(p, id) == inversions(p));
      REQUIRE(kendall_tau(p, p) == 0);
      REQUIRE(inversions(p) + inversions(reversal(p)) == n * (n - 1) / 2);
      REQUIRE(reversal(reversal(p)) == p);
    }
  }
  // brute-force definition against a non-identity reference
  const MallowsParams params(0.6);
  for (std::uint64_t s = 0; s < 50; ++s) {
    GeometricStream st(params, 5, s);
    const auto p = sample_mallows(12, params, st);
    const auto ref = sample_mallows(12, params, st);
    std::uint64_t brute = 0;
    for (std::size_t i = 1; i <= 12; ++i)
      for (std::size_t j = i + 1; j <= 12; ++j) brute += (ref(i) < ref(j)) && (p(i) > p(j));
    REQUIRE(kendall_tau(p, ref) == brute);
  }
}

TEST_CASE("inversions on a large sample agrees with the quadratic count") {
  const MallowsParams params(0.99);
  GeometricStream st(params, 1, 0);
  const auto p = sample_mallows(3000, params, st);
  CHECK(inversions(p) == mallows::testing::naive_inversions(p));
}

TEST_CASE("lex rank round trip") {
  std::uint64_t expected = 0;
  for (const auto& p : all_permutations(5)) {
    REQUIRE(lex_rank(p) == expected);
    REQUIRE(lex_unrank(expected, 5) == p);
    ++expected;
  }
}

TEST_CASE("partition_function") {
  CHECK(partition_function(1, 0.3) == doctest::Approx(1.0));
  CHECK(partition_function(3, 0.5) == doctest::Approx(2.625).epsilon(1e-15));
  for (const double q : {0.1, 0.3, 0.5, 0.9}) {
    for (std::size_t n = 1; n <= 8; ++n) {
      double brute = 0;
      for (const auto& p : all_permutations(n)) brute += std::pow(q, static_cast<double>(inversions(p)));
      REQUIRE(std::abs(partition_function(n, q) / brute - 1) < 1e-12);
    }
  }
  // log-space branch agrees with the direct product where both are finite
  CHECK(std::log(partition_function(301, 0.9)) == doctest::Approx(log_partition_function(301, 0.9)).epsilon(1e-12));
  CHECK(log_partition_function(300, 0.9) == doctest::Approx(std::log(partition_function(300, 0.9))).epsilon(1e-12));
  CHECK(std::isfinite(log_partition_function(1'000'000, 0.5)));
  CHECK_THROWS_AS(partition_function(0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(partition_function(3, 1.0), std::invalid_argument);
}

TEST_CASE("log_pmf") {
  CHECK(log_pmf(Permutation::identity(3), 0.5) == doctest::Approx(-0.965080896043587).epsilon(1e-12));
  CHECK(log_pmf(Permutation({2, 1}), 0.5) == doctest::Approx(-1.09861228866811).epsilon(1e-12));
  double total = 0;
  for (const auto& p : all_permutations(4)) total += std::exp(log_pmf(p, 0.3));
  CHECK(std::abs(total - 1) < 1e-12);
}

TEST_CASE("sample_mallows basics") {
  const MallowsParams params(0.5);
  GeometricStream s(params, 1, 0);
  for (int i = 0; i < 100; ++i) CHECK(sample_mallows(1, params, s) == Permutation::identity(1));
  GeometricStream a(params, 9, 3), b(params, 9, 3);
  CHECK(sample_mallows(500, params, a) == sample_mallows(500, params, b));
  CHECK_THROWS_AS(sample_mallows(0, params, a), std::invalid_argument);
  CHECK_THROWS_AS(sample_mallows(3, MallowsParams(0.4), a), std::invalid_argument);
  const auto detailed = sample_mallows_detailed(200, params, b);
  CHECK(detailed.permutation == induce_finite(assign_positions(detailed.z)));
}

TEST_CASE("identity frequency for n=3, q=0.5 is 1/Z_3") {
  const MallowsParams params(0.5);
  GeometricStream s(params, 21, 0);
  const int reps = 400'000;
  int hits = 0;
  const auto id = Permutation::identity(3);
  for (int i = 0; i < reps; ++i) hits += sample_mallows(3, params, s) == id;
  const double p = 1.0 / 2.625;
  CHECK(std::abs(static_cast<double>(hits) / reps - p) < 3 * std::sqrt(p * (1 - p) / reps));
}

TEST_CASE("sampler law and reversal law against exact enumeration") {
  for (const double q : {0.3, 0.5, 0.8}) {
    for (const std::size_t n : {3u, 4u, 5u}) {
      CAPTURE(q);
      CAPTURE(n);
      const MallowsParams params(q);
      GeometricStream s(params, 101, n);
      std::vector<Permutation> sample;
      std::vector<Permutation> reversed;
      const int reps = 1'000'000;
      sample.reserve(reps);
      for (int i = 0; i < reps; ++i) sample.push_back(sample_mallows(n, params, s));
      CHECK(tv_distance(empirical_permutation_pmf(sample), exact_permutation_pmf(n, q)) < 0.01);
      for (auto& p : sample) p = reversal(p);
      CHECK(tv_distance(empirical_permutation_pmf(sample), exact_inverse_q_pmf(n, q)) < 0.01);
    }
  }
}
