#include <doctest.h>

#include <algorithm>
#include <deque>
#include <random>
#include <set>
#include <vector>

#include "rangegraph/builder.hpp"
#include "rangegraph/beam_search.hpp"
#include "rangegraph/graph.hpp"

using namespace rangegraph;

namespace {

PointMatrix<float> line_points(std::initializer_list<float> xs) {
  std::vector<float> data(xs);
  return PointMatrix<float>(data.size(), 1, std::move(data));
}

PointMatrix<float> random_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(0.0f, 1.0f);
  std::vector<float> data(n * d);
  for (auto& x : data) x = dist(rng);
  return PointMatrix<float>(n, d, std::move(data));
}

// oracle: direct evaluation of the occlusion rule over candidates in
// ascending distance order
std::vector<std::uint32_t> prune_by_rule(std::uint32_t p, std::vector<Neighbor> cands,
                                         double alpha, std::uint32_t R,
                                         const PointMatrix<float>& pts, DistanceKind kind) {
  std::sort(cands.begin(), cands.end());
  std::vector<std::uint32_t> kept;
  for (const auto& c : cands) {
    if (c.id == p) continue;
    bool ok = true;
    for (auto k : kept) {
      if (alpha * distance(pts[k], pts[c.id], kind) <= c.dist) ok = false;
    }
    if (ok && kept.size() < R) kept.push_back(c.id);
    if (kept.size() == R) break;
  }
  return kept;
}

std::set<std::uint32_t> bfs_reachable(const ProximityGraph& g) {
  std::set<std::uint32_t> seen(g.start_points().begin(), g.start_points().end());
  std::deque<std::uint32_t> queue(g.start_points().begin(), g.start_points().end());
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    for (auto v : g.neighbors(u)) {
      if (seen.insert(v).second) queue.push_back(v);
    }
  }
  return seen;
}

ProximityGraph complete_graph(std::size_t n) {
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = 0; v < n; ++v) {
      if (u != v) adj[u].push_back(v);
    }
  }
  return ProximityGraph(static_cast<std::uint32_t>(n), std::move(adj), {0});
}

}  // namespace

TEST_SUITE_BEGIN("graph");

TEST_CASE("robust_prune: trivial cases") {
  auto pts = line_points({0.0f, 1.0f, 2.0f, 10.0f});
  const auto kind = DistanceKind::squared_l2;

  CHECK(robust_prune<float>(0, {}, 1.0, 4, pts, kind).empty());

  std::vector<Neighbor> one = {{2, distance(pts[0], pts[2], kind)}};
  const auto kept = robust_prune(0, one, 1.0, 4, pts, kind);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0] == 2);
}

TEST_CASE("robust_prune: 1-D occlusion example") {
  // p = 0, candidates at 1, 2, 10; with squared distances and alpha = 1,
  // 1 occludes both 2 (d(1,2)=1 <= d(0,2)=4) and 10 (d(1,10)=81 <= d(0,10)=100)
  auto pts = line_points({0.0f, 1.0f, 2.0f, 10.0f});
  const auto kind = DistanceKind::squared_l2;
  std::vector<Neighbor> cands;
  for (std::uint32_t id : {1u, 2u, 3u}) cands.push_back({id, distance(pts[0], pts[id], kind)});

  const auto kept = robust_prune(0, cands, 1.0, 3, pts, kind);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0] == 1);
  CHECK(kept == prune_by_rule(0, cands, 1.0, 3, pts, kind));
}

TEST_CASE("robust_prune: agrees with direct rule evaluation on random instances") {
  auto pts = random_points(60, 3, 99);
  const auto kind = DistanceKind::squared_l2;
  std::mt19937_64 rng(100);
  std::uniform_int_distribution<std::uint32_t> pick(0, 59);

  for (int trial = 0; trial < 20; ++trial) {
    const std::uint32_t p = pick(rng);
    std::vector<Neighbor> cands;
    for (int i = 0; i < 25; ++i) {
      const std::uint32_t c = pick(rng);
      if (c == p) continue;
      cands.push_back({c, distance(pts[p], pts[c], kind)});
    }
    for (double alpha : {1.0, 1.2}) {
      CHECK(robust_prune(p, cands, alpha, 8, pts, kind) ==
            prune_by_rule(p, cands, alpha, 8, pts, kind));
    }
  }
}

TEST_CASE("build_index: single point") {
  PointMatrix<float> pts(1, 2, {0.5f, 0.5f});
  BuildParams params;
  params.max_degree = 4;
  params.build_beam = 4;
  const auto g = build_index(pts, DistanceKind::squared_l2, params);
  CHECK(g.size() == 1);
  CHECK(g.neighbors(0).empty());
  REQUIRE(g.start_points().size() == 1);
  CHECK(g.start_points()[0] == 0);
  CHECK_NOTHROW(g.validate());
}

TEST_CASE("build_index: empty set is rejected") {
  PointMatrix<float> pts(0, 2, {});
  CHECK_THROWS_AS(build_index(pts, DistanceKind::squared_l2, BuildParams{}),
                  std::invalid_argument);
}

TEST_CASE("build_index: degree bound on a small set with large R") {
  auto pts = random_points(5, 2, 7);
  BuildParams params;
  params.max_degree = 8;
  params.build_beam = 8;
  const auto g = build_index(pts, DistanceKind::squared_l2, params);
  CHECK_NOTHROW(g.validate());
  for (std::uint32_t u = 0; u < 5; ++u) {
    CHECK(g.neighbors(u).size() <= 4);  // only 4 other nodes exist
    for (auto v : g.neighbors(u)) CHECK(v != u);
  }
}

TEST_CASE("build_index: 2K random points, >=99% reachable with a full-size beam") {
  auto pts = random_points(2000, 16, 1234);
  BuildParams params;
  params.max_degree = 32;
  params.build_beam = 64;
  params.alpha = 1.15;
  params.seed = 1234;
  const auto g = build_index(pts, DistanceKind::squared_l2, params);
  CHECK_NOTHROW(g.validate());

  // oracle: BFS from the start points
  const auto reachable = bfs_reachable(g);
  CHECK(reachable.size() >= 1980);

  auto res = beam_search<float>(pts[0], g, pts, DistanceKind::squared_l2, g.start_points(),
                                2000);
  CHECK(res.beam.size() >= reachable.size() * 99 / 100);
  CHECK(res.visited.size() == reachable.size());
}

TEST_CASE("build_index: sequential build is deterministic for a fixed seed") {
  auto pts = random_points(300, 8, 5);
  BuildParams params;
  params.max_degree = 16;
  params.build_beam = 32;
  params.parallel = false;
  params.seed = 9;
  const auto a = build_index(pts, DistanceKind::squared_l2, params);
  const auto b = build_index(pts, DistanceKind::squared_l2, params);
  CHECK(a == b);
}

TEST_CASE("beam_search: single node graph") {
  PointMatrix<float> pts(1, 1, {2.0f});
  ProximityGraph g(2, {{}}, {0});
  const std::vector<float> q = {0.0f};
  const auto res = beam_search<float>(q, g, pts, DistanceKind::squared_l2, g.start_points(), 4);
  REQUIRE(res.beam.size() == 1);
  CHECK(res.beam[0].id == 0);
  CHECK(res.beam[0].dist == 4.0);
  REQUIRE(res.visited.size() == 1);
  CHECK(res.visited[0].id == 0);
  CHECK_FALSE(res.early_stopped);
}

TEST_CASE("beam_search: always-true stop leaves the start set unvisited") {
  auto pts = line_points({0.0f, 1.0f, 2.0f});
  auto g = complete_graph(3);
  const std::vector<float> q = {0.9f};
  const auto res = beam_search(std::span<const float>(q), g, pts, DistanceKind::squared_l2,
                               g.start_points(), 3,
                               [](const StopContext&) { return true; });
  CHECK(res.visited.empty());
  CHECK(res.early_stopped);
  REQUIRE(res.beam.size() == 1);  // start set had one element
  CHECK(res.beam[0].id == 0);
}

TEST_CASE("beam_search: complete graph beam equals brute-force top-3") {
  auto pts = line_points({0.0f, 1.0f, 2.0f, 3.0f, 4.0f});
  auto g = complete_graph(5);
  const std::vector<float> q = {2.2f};

  const auto res = beam_search<float>(q, g, pts, DistanceKind::squared_l2, g.start_points(), 3);

  // oracle: brute-force 3 nearest
  std::vector<Neighbor> all;
  for (std::uint32_t id = 0; id < 5; ++id) {
    all.push_back({id, distance(q, pts[id], DistanceKind::squared_l2)});
  }
  std::sort(all.begin(), all.end());
  all.resize(3);

  REQUIRE(res.beam.size() == 3);
  CHECK(res.beam == all);
}

TEST_CASE("beam_search: invalid start id and empty start set are rejected") {
  auto pts = line_points({0.0f, 1.0f});
  ProximityGraph g(2, {{1}, {0}}, {0});
  const std::vector<float> q = {0.0f};
  const std::vector<std::uint32_t> bad = {7};
  CHECK_THROWS_AS(
      beam_search(std::span<const float>(q), g, pts, DistanceKind::squared_l2, bad, 2),
      std::invalid_argument);
  CHECK_THROWS_AS(
      beam_search(std::span<const float>(q), g, pts, DistanceKind::squared_l2, {}, 2),
      std::invalid_argument);
}

TEST_CASE("beam_search: no duplicate ids; beams agree once b >= n") {
  auto pts = random_points(120, 4, 42);
  BuildParams params;
  params.max_degree = 12;
  params.build_beam = 24;
  const auto g = build_index(pts, DistanceKind::squared_l2, params);
  auto queries = random_points(6, 4, 43);

  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const auto a = beam_search<float>(queries[qi], g, pts, DistanceKind::squared_l2,
                                      g.start_points(), 120);
    const auto b = beam_search<float>(queries[qi], g, pts, DistanceKind::squared_l2,
                                      g.start_points(), 240);
    CHECK(a.beam == b.beam);
    CHECK(a.visited == b.visited);

    std::set<std::uint32_t> beam_ids;
    for (const auto& nb : a.beam) CHECK(beam_ids.insert(nb.id).second);
    std::set<std::uint32_t> visit_ids;
    for (const auto& nb : a.visited) CHECK(visit_ids.insert(nb.id).second);
  }
}

TEST_SUITE_END();
