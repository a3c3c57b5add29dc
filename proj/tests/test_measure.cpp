#include "leafgrow/measure.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "leafgrow/combinatorics.hpp"
#include "leafgrow/stats.hpp"

using namespace leafgrow;

namespace {

// Exact leaf law of the token game, built only from the match-by-match
// enumeration of best-of-three outcomes (independent of the closed-form
// weights): the surviving label at an internal vertex comes from the left
// pile with the enumerated probability, so the law is the product of those
// probabilities along each leaf's ancestral path.
Rational b3_enum(std::int64_t a, std::int64_t b) {
  struct Rec {
    static Rational go(std::int64_t x, std::int64_t y, int wins_left,
                       int matches_left) {
      if (matches_left == 0) return wins_left >= 2 ? Rational(1) : Rational(0);
      const Rational p_left(x, x + y);
      return p_left * go(x + 1, y, wins_left + 1, matches_left - 1) +
             (Rational(1) - p_left) * go(x, y + 1, wins_left, matches_left - 1);
    }
  };
  return Rec::go(2 * a + 1, 2 * b + 1, 0, 3);
}

std::map<NodeId, Rational> token_game_law(const PlaneBinaryTree& t) {
  std::map<NodeId, Rational> law;
  struct Rec {
    static void go(const PlaneBinaryTree& t, NodeId v, const Rational& acc,
                   std::map<NodeId, Rational>& law) {
      if (t.is_leaf(v)) {
        law[v] = acc;
        return;
      }
      const NodeId l = t.left(v), r = t.right(v);
      const Rational pl = b3_enum(t.subtree_size(l), t.subtree_size(r));
      go(t, l, acc * pl, law);
      go(t, r, acc * (Rational(1) - pl), law);
    }
  };
  Rec::go(t, t.root(), Rational(1), law);
  return law;
}

const char* kSize2Word = "((()())())";  // size 2, profile (1,0)

}  // namespace

TEST_CASE("measure on tiny trees") {
  SUBCASE("size 0: single leaf of mass 1") {
    const auto m = compute_measure(PlaneBinaryTree{});
    REQUIRE(m.leaves.size() == 1);
    CHECK(m.leaf_log_mass[0] == 0.0);
    CHECK((*m.exact_mass)[0] == 1);
  }
  SUBCASE("size 1: masses (1/2, 1/2)") {
    const auto m = compute_measure(PlaneBinaryTree::decode("(()())"));
    REQUIRE(m.leaves.size() == 2);
    CHECK((*m.exact_mass)[0] == Rational(1, 2));
    CHECK((*m.exact_mass)[1] == Rational(1, 2));
  }
  SUBCASE("size 2, profile (1,0): masses (2/5, 2/5, 1/5) in preorder") {
    const auto m = compute_measure(PlaneBinaryTree::decode(kSize2Word));
    REQUIRE(m.leaves.size() == 3);
    CHECK((*m.exact_mass)[0] == Rational(2, 5));
    CHECK((*m.exact_mass)[1] == Rational(2, 5));
    CHECK((*m.exact_mass)[2] == Rational(1, 5));
  }
}

TEST_CASE("masses sum to one") {
  for (int n = 0; n <= 6; ++n) {
    for (const auto& t : enumerate_all(n)) {
      const auto m = compute_measure(t);
      Rational sum(0);
      for (const auto& q : *m.exact_mass) sum += q;
      CHECK(sum == 1);
      CHECK(m.total_mass() == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("log-domain masses agree with the exact ones up to n = 30") {
  RngStream rng(404);
  for (int rep = 0; rep < 10; ++rep) {
    const auto t = remy_sample(30, rng);
    const auto m = compute_measure(t);
    REQUIRE(m.exact_mass.has_value());
    for (std::size_t i = 0; i < m.leaves.size(); ++i) {
      const double exact = std::log(to_double((*m.exact_mass)[i]));
      CHECK(std::abs(m.leaf_log_mass[i] - exact) <=
            1e-10 * std::abs(exact) + 1e-12);
    }
  }
}

TEST_CASE("uniform measure and density") {
  const auto t = PlaneBinaryTree::decode(kSize2Word);
  const auto u = uniform_measure(t);
  REQUIRE(u.leaves.size() == 3);
  for (const auto& q : *u.exact_mass) CHECK(q == Rational(1, 3));

  const auto size1 = uniform_measure(PlaneBinaryTree::decode("(()())"));
  for (const auto& q : *size1.exact_mass) CHECK(q == Rational(1, 2));

  RngStream rng(7);
  const auto t4 = remy_sample(4, rng);
  const auto u4 = uniform_measure(t4);
  for (double lm : u4.leaf_log_mass)
    CHECK(std::exp(lm) == doctest::Approx(0.2).epsilon(1e-12));

  // density of the leaf-growth measure vs uniform on the size-2 tree
  const auto m = compute_measure(t);
  const std::vector<Rational> expected = {Rational(6, 5), Rational(6, 5),
                                          Rational(3, 5)};
  for (std::size_t i = 0; i < 3; ++i) {
    const double density = std::exp(m.leaf_log_mass[i]) * 3.0;
    CHECK(density == doctest::Approx(to_double(expected[i])).epsilon(1e-12));
  }
}

TEST_CASE("descent sampler matches the exact law") {
  SUBCASE("size 1: halves within 3 standard errors") {
    const auto t = PlaneBinaryTree::decode("(()())");
    RngStream rng(99);
    const int draws = 100000;
    int left = 0;
    for (int i = 0; i < draws; ++i) {
      double nlm;
      int depth;
      const NodeId leaf = sample_leaf_descent(t, rng, &nlm, &depth);
      CHECK(depth == 1);
      CHECK(nlm == doctest::Approx(std::log(2.0)).epsilon(1e-12));
      if (leaf == t.left(t.root())) ++left;
    }
    const double se = std::sqrt(0.25 / draws);
    CHECK(std::abs(left / static_cast<double>(draws) - 0.5) <= 3 * se);
  }

  SUBCASE("chi-square against the exact masses on fixed small trees") {
    RngStream seed_rng(5150);
    std::vector<PlaneBinaryTree> trees;
    trees.push_back(PlaneBinaryTree::decode(kSize2Word));
    trees.push_back(remy_sample(5, seed_rng));
    trees.push_back(remy_sample(6, seed_rng));
    const int draws = 100000;
    for (const auto& t : trees) {
      const auto m = compute_measure(t);
      std::vector<double> probs;
      for (const auto& q : *m.exact_mass) probs.push_back(to_double(q));
      std::vector<std::int64_t> counts(m.leaves.size(), 0);
      RngStream rng(31337, static_cast<std::uint64_t>(t.size()));
      for (int i = 0; i < draws; ++i)
        ++counts[m.index_of(sample_leaf_descent(t, rng))];
      CHECK(chi_square_gof(counts, probs).p_value > 1e-3);
    }
  }

  SUBCASE("returned log-mass equals the measure's value at the leaf") {
    RngStream rng(271828);
    const auto t = remy_sample(25, rng);
    const auto m = compute_measure(t);
    for (int i = 0; i < 50; ++i) {
      double nlm;
      const NodeId leaf = sample_leaf_descent(t, rng, &nlm);
      CHECK(-nlm == doctest::Approx(m.log_mass_of(leaf)).epsilon(1e-12));
    }
  }
}

TEST_CASE("token game has the leaf-growth law") {
  SUBCASE("exact oracle equivalence on every tree of size <= 6") {
    for (int n = 0; n <= 6; ++n) {
      for (const auto& t : enumerate_all(n)) {
        const auto law = token_game_law(t);
        const auto m = compute_measure(t);
        for (std::size_t i = 0; i < m.leaves.size(); ++i)
          CHECK(law.at(m.leaves[i]) == (*m.exact_mass)[i]);
      }
    }
  }

  SUBCASE("size 1: halves") {
    const auto t = PlaneBinaryTree::decode("(()())");
    RngStream rng(41);
    int left = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i)
      if (sample_leaf_token_game(t, rng) == t.left(t.root())) ++left;
    CHECK(std::abs(left / static_cast<double>(draws) - 0.5) <=
          3 * std::sqrt(0.25 / draws));
  }

  SUBCASE("size 2: frequencies near (0.4, 0.4, 0.2)") {
    const auto t = PlaneBinaryTree::decode(kSize2Word);
    const auto m = compute_measure(t);
    RngStream rng(42);
    const int draws = 100000;
    std::vector<std::int64_t> counts(3, 0);
    for (int i = 0; i < draws; ++i)
      ++counts[m.index_of(sample_leaf_token_game(t, rng))];
    const std::vector<double> probs = {0.4, 0.4, 0.2};
    CHECK(chi_square_gof(counts, probs).p_value > 1e-3);
  }

  SUBCASE("indistinguishable from the descent sampler on a size-8 tree") {
    RngStream seed_rng(99991);
    const auto t = remy_sample(8, seed_rng);
    const auto m = compute_measure(t);
    const int draws = 100000;
    std::vector<std::int64_t> c_descent(m.leaves.size(), 0);
    std::vector<std::int64_t> c_token(m.leaves.size(), 0);
    RngStream r1(1001), r2(1002);
    for (int i = 0; i < draws; ++i) {
      ++c_descent[m.index_of(sample_leaf_descent(t, r1))];
      ++c_token[m.index_of(sample_leaf_token_game(t, r2))];
    }
    CHECK(chi_square_two_sample(c_descent, c_token).p_value > 1e-3);
  }
}

TEST_CASE("mass extremes") {
  SUBCASE("global minimum over all size-n trees is C(0, n-1)") {
    for (int n = 2; n <= 6; ++n) {
      Rational global_min(1);
      for (const auto& t : enumerate_all(n)) {
        const auto m = compute_measure(t);
        for (const auto& q : *m.exact_mass)
          global_min = std::min(global_min, q);
      }
      CHECK(global_min == c_weight(0, n - 1));
    }
    CHECK(c_weight(0, 1) == Rational(1, 5));
    CHECK(c_weight(0, 4) == Rational(1, 22));
  }

  SUBCASE("argmin/argmax bookkeeping") {
    const auto t = PlaneBinaryTree::decode(kSize2Word);
    const auto m = compute_measure(t);
    const auto ex = m.mass_extremes();
    CHECK(std::exp(ex.min_log_mass) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(std::exp(ex.max_log_mass) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(ex.argmin == m.leaves[2]);
  }

  SUBCASE("n^2 C(0, n-1) approaches 3/2") {
    for (std::int64_t n : {1000, 10000}) {
      const double v = static_cast<double>(n) * static_cast<double>(n) *
                       c_weight_f(0, n - 1);
      CHECK(std::abs(v / 1.5 - 1.0) < 0.01);
    }
  }
}

TEST_CASE("csv export") {
  const auto t = PlaneBinaryTree::decode(kSize2Word);
  const auto m = compute_measure(t);
  std::ostringstream os;
  m.write_csv(os, {{"seed", "7"}, {"n", "2"}});
  const std::string out = os.str();
  CHECK(out.find("# seed=7\n") != std::string::npos);
  CHECK(out.find("leaf_index,mass,log_mass,density_vs_uniform\n") !=
        std::string::npos);
  CHECK(out.find("0,0.4") != std::string::npos);
  CHECK(out.find("2,0.2") != std::string::npos);
}

TEST_CASE("dot export carries leaf masses") {
  const auto t = PlaneBinaryTree::decode(kSize2Word);
  const auto m = compute_measure(t);
  const std::string dot = to_dot(t, m);
  CHECK(dot.rfind("digraph", 0) == 0);
  std::size_t masses = 0;
  for (std::size_t pos = 0;
       (pos = dot.find("mass=", pos)) != std::string::npos; ++pos)
    ++masses;
  CHECK(masses == 3);
}
