#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "collabkit/cluster.hpp"

using namespace collabkit;

namespace {

std::vector<std::string> make_ids(size_t n) {
  std::vector<std::string> ids;
  for (size_t i = 0; i < n; ++i) {
    std::string s = std::to_string(i);
    ids.push_back("p" + std::string(2 - std::min<size_t>(2, s.size()), '0') + s);
  }
  return ids;
}

// From-scratch Ward oracle: at every step recompute the criterion
// d(A,B) = sqrt(2|A||B|/(|A|+|B|)) * ||centroid(A) - centroid(B)|| for all
// active pairs, instead of updating incrementally.
struct OracleMerge {
  int a, b;
  double distance;
  int size;
};

std::vector<OracleMerge> ward_oracle(const std::vector<std::vector<double>>& points) {
  const size_t n = points.size();
  const size_t dim = points[0].size();
  struct Cl {
    int label;
    std::vector<size_t> members;
  };
  std::vector<Cl> active;
  for (size_t i = 0; i < n; ++i) active.push_back({static_cast<int>(i), {i}});

  auto centroid = [&](const Cl& c) {
    std::vector<double> m(dim, 0.0);
    for (size_t p : c.members) {
      for (size_t k = 0; k < dim; ++k) m[k] += points[p][k];
    }
    for (auto& v : m) v /= static_cast<double>(c.members.size());
    return m;
  };
  auto ward_dist = [&](const Cl& x, const Cl& y) {
    auto cx = centroid(x), cy = centroid(y);
    double d2 = 0.0;
    for (size_t k = 0; k < dim; ++k) {
      double diff = cx[k] - cy[k];
      d2 += diff * diff;
    }
    double nx = static_cast<double>(x.members.size());
    double ny = static_cast<double>(y.members.size());
    return std::sqrt(2.0 * nx * ny / (nx + ny) * d2);
  };

  std::vector<OracleMerge> merges;
  for (size_t step = 0; step + 1 < n; ++step) {
    size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    int best_a = 0, best_b = 0;
    for (size_t i = 0; i < active.size(); ++i) {
      for (size_t j = i + 1; j < active.size(); ++j) {
        double d = ward_dist(active[i], active[j]);
        int a = std::min(active[i].label, active[j].label);
        int b = std::max(active[i].label, active[j].label);
        if (d < best || (d == best && (a < best_a || (a == best_a && b < best_b)))) {
          best = d;
          bi = i;
          bj = j;
          best_a = a;
          best_b = b;
        }
      }
    }
    Cl merged;
    merged.label = static_cast<int>(n + step);
    merged.members = active[bi].members;
    merged.members.insert(merged.members.end(), active[bj].members.begin(),
                          active[bj].members.end());
    merges.push_back({best_a, best_b, best, static_cast<int>(merged.members.size())});
    active.erase(active.begin() + static_cast<long>(bj));
    active.erase(active.begin() + static_cast<long>(bi));
    active.push_back(std::move(merged));
  }
  return merges;
}

}  // namespace

TEST_CASE("ward_linkage: two points merge at their Euclidean distance") {
  Linkage lk = ward_linkage({{0.0, 0.0}, {3.0, 4.0}}, {"a", "b"});
  REQUIRE(lk.merges.size() == 1);
  CHECK(lk.merges[0].a == 0);
  CHECK(lk.merges[0].b == 1);
  CHECK(lk.merges[0].distance == Catch::Approx(5.0).margin(1e-12));
  CHECK(lk.merges[0].size == 2);
}

TEST_CASE("ward_linkage: collinear points follow the update formula") {
  Linkage lk = ward_linkage({{0.0}, {1.0}, {10.0}}, {"a", "b", "c"});
  REQUIRE(lk.merges.size() == 2);
  CHECK(lk.merges[0].a == 0);
  CHECK(lk.merges[0].b == 1);
  CHECK(lk.merges[0].distance == Catch::Approx(1.0).margin(1e-12));
  // d({0,1},{10})^2 = (2*10^2 + 2*9^2 - 1^2) / 3
  double want = std::sqrt((2.0 * 100.0 + 2.0 * 81.0 - 1.0) / 3.0);
  CHECK(lk.merges[1].distance == Catch::Approx(want).margin(1e-12));
  CHECK(lk.merges[1].a == 2);
  CHECK(lk.merges[1].b == 3);  // cluster created at step 0
}

TEST_CASE("ward_linkage: errors") {
  CHECK_THROWS_AS(ward_linkage({{1.0}}, {"a"}), ValidationError);
  CHECK_THROWS_AS(ward_linkage({{1.0}, {2.0, 3.0}}, {"a", "b"}), ValidationError);
  double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(ward_linkage({{1.0}, {inf}}, {"a", "b"}), ValidationError);
  CHECK_THROWS_AS(ward_linkage({{1.0}, {2.0}}, {"a", "a"}), ValidationError);
}

TEST_CASE("ward_linkage: 200 random instances match the from-scratch oracle") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 2 + rng() % 11;   // up to 12 points
    size_t dim = 1 + rng() % 5;  // up to 5 dims
    std::vector<std::vector<double>> points(n, std::vector<double>(dim));
    for (auto& p : points) {
      for (auto& v : p) {
        v = static_cast<double>(rng() % 1000000) / 100000.0;
      }
    }
    Linkage lk = ward_linkage(points, make_ids(n));
    auto oracle = ward_oracle(points);
    REQUIRE(lk.merges.size() == oracle.size());
    for (size_t k = 0; k < oracle.size(); ++k) {
      CHECK(lk.merges[k].a == oracle[k].a);
      CHECK(lk.merges[k].b == oracle[k].b);
      CHECK(lk.merges[k].size == oracle[k].size);
      CHECK(std::abs(lk.merges[k].distance - oracle[k].distance) <= 1e-9);
    }
  }
}

TEST_CASE("ward_linkage: sizes telescope and merge count is n-1") {
  std::mt19937_64 rng(23);
  std::vector<std::vector<double>> points(9, std::vector<double>(3));
  for (auto& p : points) {
    for (auto& v : p) v = static_cast<double>(rng() % 1000) / 10.0;
  }
  Linkage lk = ward_linkage(points, make_ids(9));
  CHECK(lk.merges.size() == 8);
  CHECK(lk.merges.back().size == 9);
}

TEST_CASE("leaf_order: two leaves in index order") {
  Linkage lk = ward_linkage({{0.0}, {1.0}}, {"beta", "alfa"});
  CHECK(leaf_order(lk) == std::vector<std::string>{"alfa", "beta"});
}

TEST_CASE("leaf_order: hand-traversed 4-leaf linkage") {
  // Points: 0 and 1 close, 10 and 11 close, the pairs far apart.
  Linkage lk = ward_linkage({{0.0}, {1.0}, {10.0}, {11.0}},
                            {"p00", "p01", "p02", "p03"});
  // Merges: (0,1) at step 0 -> node 4; (2,3) at step 1 -> node 5; (4,5) root.
  REQUIRE(lk.merges.size() == 3);
  CHECK(lk.merges[0].a == 0);
  CHECK(lk.merges[0].b == 1);
  CHECK(lk.merges[1].a == 2);
  CHECK(lk.merges[1].b == 3);
  CHECK(lk.merges[2].a == 4);
  CHECK(lk.merges[2].b == 5);
  // In-order with earlier-created child left: 4 before 5, leaves ascending.
  CHECK(leaf_order(lk) == std::vector<std::string>{"p00", "p01", "p02", "p03"});
  // The dendrogram in-order traversal reproduces leaf_order.
  Dendrogram dg = build_dendrogram(lk);
  CHECK(dg.leaves_in_order == leaf_order(lk));
}

TEST_CASE("leaf_order and partitions are invariant to input permutation") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    size_t n = 3 + rng() % 8;
    size_t dim = 1 + rng() % 4;
    std::vector<std::vector<double>> points(n, std::vector<double>(dim));
    for (auto& p : points) {
      for (auto& v : p) v = static_cast<double>(rng() % 100000) / 1000.0;
    }
    std::vector<std::string> ids = make_ids(n);

    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<double>> shuffled_points;
    std::vector<std::string> shuffled_ids;
    for (size_t i : perm) {
      shuffled_points.push_back(points[i]);
      shuffled_ids.push_back(ids[i]);
    }

    Linkage a = ward_linkage(points, ids);
    Linkage b = ward_linkage(shuffled_points, shuffled_ids);
    CHECK(leaf_order(a) == leaf_order(b));
    for (int k = 1; k <= static_cast<int>(n); ++k) {
      CHECK(cut(a, k) == cut(b, k));
    }
  }
}

TEST_CASE("cut: trivial and planted cases") {
  std::vector<std::vector<double>> points{{0.0}, {0.5}, {10.0}, {10.5}, {99.0}, {99.5}};
  std::vector<std::string> ids{"a1", "a2", "b1", "b2", "c1", "c2"};
  Linkage lk = ward_linkage(points, ids);

  auto singletons = cut(lk, 6);
  CHECK(singletons.size() == 6);
  auto one = cut(lk, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].size() == 6);

  auto three = cut(lk, 3);
  std::vector<std::vector<std::string>> want{{"a1", "a2"}, {"b1", "b2"}, {"c1", "c2"}};
  CHECK(three == want);

  CHECK_THROWS_AS(cut(lk, 0), ValidationError);
  CHECK_THROWS_AS(cut(lk, 7), ValidationError);
}
