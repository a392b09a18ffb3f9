#include "doctest.h"

#include <cmath>
#include <functional>
#include <random>

#include "herdgraph/error.hpp"
#include "herdgraph/socialnet.hpp"

using namespace herdgraph;

namespace {

InteractionEvent ev(const std::string& a, const std::string& b, Label l, std::int64_t s, std::int64_t e,
                    double conf = 0.8, const std::string& src = "s") {
  return make_event(src, a, b, l, {s, e}, conf);
}

// Betweenness by enumerating every simple path between each pair.
std::vector<double> brute_betweenness(const SocialGraph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::vector<double>> len(n, std::vector<double>(n, 0.0));
  auto idx = [&](const std::string& s) {
    return static_cast<std::size_t>(std::find(g.nodes.begin(), g.nodes.end(), s) - g.nodes.begin());
  };
  for (const auto& e : g.edges) len[idx(e.a)][idx(e.b)] = len[idx(e.b)][idx(e.a)] = 1.0 / e.weight;
  std::vector<double> bc(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      std::vector<std::pair<double, std::vector<std::size_t>>> paths;
      std::vector<std::size_t> path{s};
      std::vector<bool> used(n, false);
      used[s] = true;
      std::function<void(std::size_t, double)> walk = [&](std::size_t u, double d) {
        if (u == t) {
          paths.push_back({d, path});
          return;
        }
        for (std::size_t v = 0; v < n; ++v) {
          if (used[v] || len[u][v] == 0.0) continue;
          used[v] = true;
          path.push_back(v);
          walk(v, d + len[u][v]);
          path.pop_back();
          used[v] = false;
        }
      };
      walk(s, 0.0);
      if (paths.empty()) continue;
      double best = 1e300;
      for (const auto& p : paths) best = std::min(best, p.first);
      std::vector<double> through(n, 0.0);
      double count = 0.0;
      for (const auto& p : paths) {
        if (std::abs(p.first - best) > 1e-12 * best) continue;
        count += 1.0;
        for (std::size_t k = 1; k + 1 < p.second.size(); ++k) through[p.second[k]] += 1.0;
      }
      for (std::size_t v = 0; v < n; ++v) bc[v] += through[v] / count;
    }
  }
  return bc;
}

}  // namespace

TEST_CASE("events order their identity pair") {
  const auto e = ev("B", "A", Label::Headbutt, 0, 10);
  CHECK(e.identity_a == "A");
  CHECK(e.identity_b == "B");
}

TEST_CASE("empty event list gives isolated roster nodes") {
  const auto g = build_graph({}, Layer::Combined, {"C3", "C1", "C2"});
  CHECK(g.nodes == std::vector<std::string>{"C1", "C2", "C3"});
  CHECK(g.edges.empty());
  const auto m = compute_metrics(g);
  CHECK(m.density == 0.0);
  for (const auto& n : m.nodes) CHECK(n.degree == 0);
}

TEST_CASE("three grooming events make an affiliative edge of weight three") {
  const auto merged = merge_events({ev("A", "B", Label::LickGroom, 0, 30), ev("A", "B", Label::LickGroom, 200, 230),
                                    ev("B", "A", Label::LickGroom, 400, 430)},
                                   30.0);
  const auto g = build_graph(merged, Layer::Affiliative, {});
  CHECK(g.weight("A", "B") == 3.0);
  CHECK(g.weight("B", "A") == 3.0);
  CHECK(build_graph(merged, Layer::Agonistic, {}).edges.empty());
}

TEST_CASE("abutting windows merge into one event") {
  // Second window starts 15 frames (0.5 s) after the first ends.
  const auto merged =
      merge_events({ev("A", "B", Label::Headbutt, 0, 179, 0.6), ev("A", "B", Label::Headbutt, 195, 374, 0.9)}, 30.0);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].span == FrameInterval{0, 374});
  CHECK(merged[0].confidence == 0.9);
  CHECK(build_graph(merged, Layer::Agonistic, {}).weight("A", "B") == 1.0);
}

TEST_CASE("merge respects the gap limit, label and source") {
  // 31-frame gap exceeds round(1 s * 30 fps) = 30.
  CHECK(merge_events({ev("A", "B", Label::Headbutt, 0, 10), ev("A", "B", Label::Headbutt, 42, 50)}, 30.0).size() == 2);
  CHECK(merge_events({ev("A", "B", Label::Headbutt, 0, 10), ev("A", "B", Label::Headbutt, 41, 50)}, 30.0).size() == 1);
  CHECK(merge_events({ev("A", "B", Label::Headbutt, 0, 10), ev("A", "B", Label::Displacement, 11, 50)}, 30.0).size() ==
        2);
  CHECK(merge_events({ev("A", "B", Label::Headbutt, 0, 10, 0.5, "x"), ev("A", "B", Label::Headbutt, 11, 50, 0.5, "y")},
                     30.0)
            .size() == 2);
}

TEST_CASE("confidence-sum weighting and layers") {
  const std::vector<InteractionEvent> merged{ev("A", "B", Label::Headbutt, 0, 10, 0.7),
                                             ev("A", "B", Label::Displacement, 100, 110, 0.6),
                                             ev("A", "C", Label::LickGroom, 0, 10, 0.9)};
  const auto g = build_graph(merged, Layer::Agonistic, {}, WeightMode::ConfidenceSum);
  CHECK(g.weight("A", "B") == doctest::Approx(1.3));
  CHECK(g.nodes == std::vector<std::string>{"A", "B", "C"});
  const auto c = build_graph(merged, Layer::Combined, {});
  CHECK(c.total_weight() == 3.0);
  CHECK(parse_layer(layer_name(Layer::Agonistic)) == Layer::Agonistic);
  CHECK(parse_weight_mode(weight_mode_name(WeightMode::ConfidenceSum)) == WeightMode::ConfidenceSum);
  CHECK_THROWS_AS(parse_layer("hostile"), Error);
}

TEST_CASE("path graph betweenness and triangle clustering") {
  const auto path = build_graph({ev("A", "B", Label::LickGroom, 0, 1), ev("B", "C", Label::LickGroom, 0, 1)},
                                Layer::Combined, {});
  const auto pm = compute_metrics(path);
  CHECK(pm.nodes[0].betweenness == 0.0);
  CHECK(pm.nodes[1].betweenness == 1.0);
  CHECK(pm.nodes[2].betweenness == 0.0);
  CHECK(pm.density == doctest::Approx(2.0 / 3.0));

  const auto tri = build_graph({ev("A", "B", Label::LickGroom, 0, 1), ev("B", "C", Label::LickGroom, 0, 1),
                                ev("A", "C", Label::LickGroom, 0, 1)},
                               Layer::Combined, {});
  for (const auto& n : compute_metrics(tri).nodes) {
    CHECK(n.clustering == 1.0);
    CHECK(n.degree == 2);
    CHECK(n.weighted_degree == 2.0);
  }
}

TEST_CASE("betweenness matches path enumeration on random graphs") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 3 + rep % 5;
    std::vector<InteractionEvent> events;
    std::vector<std::string> roster;
    for (int i = 0; i < n; ++i) roster.push_back("N" + std::to_string(i));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (u(rng) < 0.5) continue;
        // Integer weights make equal-length alternatives common.
        const int w = count(rng);
        for (int k = 0; k < w; ++k) events.push_back(ev(roster[static_cast<std::size_t>(i)], roster[static_cast<std::size_t>(j)], Label::Headbutt, 1000 * k, 1000 * k + 1));
      }
    }
    const auto g = build_graph(merge_events(events, 30.0), Layer::Combined, roster);
    const auto m = compute_metrics(g);
    const auto brute = brute_betweenness(g);
    for (std::size_t v = 0; v < g.nodes.size(); ++v) CHECK(m.nodes[v].betweenness == doctest::Approx(brute[v]).epsilon(1e-12));
  }
}
