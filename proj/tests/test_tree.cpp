#include "leafgrow/tree.hpp"

#include <cmath>
#include <map>
#include <set>
#include <string>

#include "doctest.h"
#include "leafgrow/combinatorics.hpp"
#include "leafgrow/stats.hpp"

using namespace leafgrow;

namespace {

// left comb of size n: every internal vertex has a leaf as right child
std::string left_comb_word(int n) {
  std::string w = "()";
  for (int i = 0; i < n; ++i) w = "(" + w + "())";
  return w;
}

}  // namespace

TEST_CASE("size-0 tree") {
  PlaneBinaryTree t;
  CHECK(t.size() == 0);
  CHECK(t.leaf_count() == 1);
  CHECK(t.encode() == "()");
  CHECK(t.is_leaf(t.root()));
  CHECK_THROWS_WITH_AS(t.profile(), "no profile for leaf-only tree",
                       std::invalid_argument);
  t.validate();
}

TEST_CASE("profiles") {
  CHECK(PlaneBinaryTree::decode("(()())").profile() == Profile{0, 0});
  CHECK(PlaneBinaryTree::decode(left_comb_word(3)).profile() == Profile{2, 0});
  for (const auto& t : enumerate_all(3)) {
    const auto p = t.profile();
    CHECK(p.left + p.right == 2);
  }
}

TEST_CASE("grow") {
  PlaneBinaryTree t;
  t.grow(t.root());
  CHECK(t.size() == 1);
  CHECK(t.encode() == "(()())");
  t.validate();

  SUBCASE("left leaf of the size-1 tree gives profile (1,0)") {
    t.grow(t.left(t.root()));
    CHECK(t.size() == 2);
    CHECK(t.profile() == Profile{1, 0});
    t.validate();
  }

  SUBCASE("leaf count increments") {
    for (int i = 0; i < 20; ++i) {
      const auto before = t.leaf_count();
      t.grow(t.leaves_preorder().front());
      CHECK(t.leaf_count() == before + 1);
    }
    t.validate();
  }

  SUBCASE("errors") {
    CHECK_THROWS_AS(t.grow(t.root()), std::invalid_argument);  // internal now
    CHECK_THROWS_AS(t.grow(999), std::out_of_range);
  }
}

TEST_CASE("grow updates sizes only along the root-to-leaf path") {
  RngStream rng(17);
  PlaneBinaryTree t = remy_sample(40, rng);
  for (int rep = 0; rep < 25; ++rep) {
    const auto leaves = t.leaves_preorder();
    const NodeId leaf =
        leaves[rng.below(static_cast<std::uint64_t>(leaves.size()))];
    // ancestors of the grown leaf
    std::set<NodeId> path;
    for (NodeId v = leaf; v != kNoNode; v = t.parent(v)) path.insert(v);
    std::vector<std::int64_t> before(t.nodes().size());
    for (std::size_t i = 0; i < before.size(); ++i)
      before[i] = t.nodes()[i].subtree_size;
    t.grow(leaf);
    for (std::size_t i = 0; i < before.size(); ++i) {
      const auto now = t.nodes()[i].subtree_size;
      if (path.count(static_cast<NodeId>(i))) {
        CHECK(now == before[i] + 1);
      } else {
        CHECK(now == before[i]);
      }
    }
  }
  t.validate();
}

TEST_CASE("encode/decode round trip over all size-8 trees") {
  const auto trees = enumerate_all(8);
  CHECK(trees.size() == 1430);
  std::set<std::string> words;
  for (const auto& t : trees) {
    const std::string w = t.encode();
    words.insert(w);
    const auto back = PlaneBinaryTree::decode(w);
    CHECK(back.encode() == w);
    CHECK(back.size() == 8);
  }
  CHECK(words.size() == 1430);  // encode is injective
}

TEST_CASE("decode rejects malformed words") {
  CHECK_THROWS_AS(PlaneBinaryTree::decode("(()"), TreeParseError);
  CHECK_THROWS_AS(PlaneBinaryTree::decode(""), TreeParseError);
  CHECK_THROWS_AS(PlaneBinaryTree::decode("())"), TreeParseError);
  CHECK_THROWS_AS(PlaneBinaryTree::decode("()()"), TreeParseError);
  CHECK_THROWS_AS(PlaneBinaryTree::decode("(x)"), TreeParseError);
  CHECK_THROWS_AS(PlaneBinaryTree::decode("(()()())"), TreeParseError);
  CHECK_THROWS_AS(PlaneBinaryTree::decode("(())"), TreeParseError);
  try {
    PlaneBinaryTree::decode("(()");
  } catch (const TreeParseError& e) {
    CHECK(e.position == 3);
  }
}

TEST_CASE("enumeration counts match the Catalan numbers") {
  CHECK(enumerate_all(0).size() == 1);
  CHECK(enumerate_all(3).size() == 5);
  for (int n = 0; n <= 10; ++n)
    CHECK(enumerate_all(n).size() == catalan(n).convert_to<std::size_t>());
  CHECK_THROWS_AS(enumerate_all(13), std::invalid_argument);
  CHECK_NOTHROW(enumerate_all(13, 13));
}

TEST_CASE("uniform sampler: degenerate sizes") {
  RngStream rng(1);
  CHECK(remy_sample(0, rng).encode() == "()");
  for (int i = 0; i < 10; ++i)
    CHECK(remy_sample(1, rng).encode() == "(()())");
  auto t = remy_sample(500, rng);
  CHECK(t.size() == 500);
  t.validate();
}

TEST_CASE("uniform sampler: chi-square against the size-4 enumeration") {
  const auto trees = enumerate_all(4);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < trees.size(); ++i) index[trees[i].encode()] = i;
  std::vector<std::int64_t> counts(trees.size(), 0);
  RngStream rng(20240817);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i)
    ++counts[index.at(remy_sample(4, rng).encode())];
  const std::vector<double> probs(trees.size(), 1.0 / 14.0);
  const auto res = chi_square_gof(counts, probs);
  CHECK(res.p_value > 1e-3);
}

TEST_CASE("uniform sampler: size-100 profile law matches P(a, 99-a)") {
  const int n = 100;
  std::vector<double> probs(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    probs[static_cast<std::size_t>(a)] = to_double(split_prob(a, n - 1 - a));
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
  RngStream rng(7077);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto t = remy_sample(n, rng);
    ++counts[static_cast<std::size_t>(t.profile().left)];
  }
  const auto res = chi_square_gof(counts, probs);
  CHECK(res.p_value > 1e-3);

  // spot-check a few bins at 3 Monte-Carlo standard errors
  for (int a : {0, 10, 49}) {
    const double p = probs[static_cast<std::size_t>(a)];
    const double freq =
        static_cast<double>(counts[static_cast<std::size_t>(a)]) / draws;
    const double se = std::sqrt(p * (1 - p) / draws);
    CHECK(std::abs(freq - p) <= 3 * se + 1.0 / draws);
  }
}

TEST_CASE("depth and preorder leaves") {
  const auto t = PlaneBinaryTree::decode(left_comb_word(4));
  CHECK(t.depth(t.root()) == 0);
  const auto leaves = t.leaves_preorder();
  CHECK(leaves.size() == 5);
  CHECK(t.depth(leaves.front()) == 4);  // deepest leaf comes first in preorder
  CHECK(t.depth(leaves.back()) == 1);
}

TEST_CASE("dot export") {
  RngStream rng(3);
  const auto t = remy_sample(6, rng);
  const std::string dot = to_dot(t);
  CHECK(dot.rfind("digraph", 0) == 0);
  // one edge line per child
  std::size_t arrows = 0;
  for (std::size_t pos = 0; (pos = dot.find("->", pos)) != std::string::npos;
       ++pos)
    ++arrows;
  CHECK(arrows == 12);
}
