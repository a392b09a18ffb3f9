#include "herdgraph/socialnet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <tuple>

#include "herdgraph/error.hpp"

namespace herdgraph {

InteractionEvent make_event(std::string source_id, std::string a, std::string b, Label label,
                            FrameInterval span, double confidence) {
  if (b < a) std::swap(a, b);
  return InteractionEvent{std::move(source_id), std::move(a), std::move(b), label, span, confidence};
}

std::vector<InteractionEvent> merge_events(std::vector<InteractionEvent> events, double fps,
                                           double max_gap_s) {
  const auto gap = static_cast<std::int64_t>(std::llround(max_gap_s * fps));
  auto key = [](const InteractionEvent& e) {
    return std::tie(e.source_id, e.identity_a, e.identity_b, e.label, e.span.start, e.span.end);
  };
  std::sort(events.begin(), events.end(),
            [&](const InteractionEvent& x, const InteractionEvent& y) { return key(x) < key(y); });
  std::vector<InteractionEvent> out;
  for (auto& e : events) {
    if (!out.empty()) {
      InteractionEvent& last = out.back();
      const bool same = last.source_id == e.source_id && last.identity_a == e.identity_a &&
                        last.identity_b == e.identity_b && last.label == e.label;
      // Overlapping windows give a negative gap and always merge.
      if (same && e.span.start - last.span.end - 1 <= gap) {
        last.span.end = std::max(last.span.end, e.span.end);
        last.confidence = std::max(last.confidence, e.confidence);
        continue;
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

const char* layer_name(Layer l) {
  switch (l) {
    case Layer::Affiliative: return "affiliative";
    case Layer::Agonistic: return "agonistic";
    case Layer::Combined: return "combined";
  }
  return "combined";
}

Layer parse_layer(const std::string& s) {
  for (Layer l : {Layer::Affiliative, Layer::Agonistic, Layer::Combined}) {
    if (s == layer_name(l)) return l;
  }
  throw Error(ErrorKind::Config, "UnknownLayer", "unknown graph layer '" + s + "'");
}

const char* weight_mode_name(WeightMode m) {
  return m == WeightMode::Count ? "count" : "confidence_sum";
}

WeightMode parse_weight_mode(const std::string& s) {
  if (s == "count") return WeightMode::Count;
  if (s == "confidence_sum") return WeightMode::ConfidenceSum;
  throw Error(ErrorKind::Config, "UnknownWeightMode", "unknown edge weight mode '" + s + "'");
}

bool in_layer(Label label, Layer layer) {
  switch (layer) {
    case Layer::Affiliative: return is_affiliative(label);
    case Layer::Agonistic: return is_agonistic(label);
    case Layer::Combined: return is_affiliative(label) || is_agonistic(label);
  }
  return false;
}

double SocialGraph::weight(const std::string& a, const std::string& b) const {
  const auto& lo = std::min(a, b);
  const auto& hi = std::max(a, b);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::tie(lo, hi),
                             [](const Edge& e, const auto& k) { return std::tie(e.a, e.b) < k; });
  return it != edges.end() && it->a == lo && it->b == hi ? it->weight : 0.0;
}

double SocialGraph::total_weight() const {
  double s = 0.0;
  for (const auto& e : edges) s += e.weight;
  return s;
}

SocialGraph build_graph(const std::vector<InteractionEvent>& merged, Layer layer,
                        const std::vector<std::string>& roster, WeightMode mode) {
  SocialGraph g;
  g.layer = layer;
  g.mode = mode;
  std::set<std::string> nodes(roster.begin(), roster.end());
  std::map<std::pair<std::string, std::string>, Edge> edges;
  for (const auto& e : merged) {
    nodes.insert(e.identity_a);
    nodes.insert(e.identity_b);
    if (!in_layer(e.label, layer) || e.identity_a == e.identity_b) continue;
    Edge& edge = edges[{e.identity_a, e.identity_b}];
    edge.a = e.identity_a;
    edge.b = e.identity_b;
    edge.count += 1;
    edge.confidence_sum += e.confidence;
  }
  g.nodes.assign(nodes.begin(), nodes.end());
  for (auto& [k, e] : edges) {
    e.weight = mode == WeightMode::Count ? static_cast<double>(e.count) : e.confidence_sum;
    if (e.weight > 0.0) g.edges.push_back(e);
  }
  return g;
}

namespace {

// Brandes accumulation over Dijkstra shortest paths. Path lengths that agree
// to a relative 1e-12 count as ties.
std::vector<double> betweenness(std::size_t n, const std::vector<std::vector<std::pair<std::size_t, double>>>& adj) {
  std::vector<double> cb(n, 0.0);
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<double> dist(n, inf), sigma(n, 0.0), delta(n, 0.0);
    std::vector<std::vector<std::size_t>> pred(n);
    std::vector<std::size_t> order;
    std::vector<bool> done(n, false);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0.0;
    sigma[s] = 1.0;
    pq.emplace(0.0, s);
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (done[v]) continue;
      done[v] = true;
      order.push_back(v);
      for (auto [w, len] : adj[v]) {
        if (done[w]) continue;
        const double nd = d + len;
        const double tolerance = 1e-12 * std::max(nd, dist[w] == inf ? nd : dist[w]);
        if (nd < dist[w] - tolerance) {
          dist[w] = nd;
          sigma[w] = sigma[v];
          pred[w] = {v};
          pq.emplace(nd, w);
        } else if (std::abs(nd - dist[w]) <= tolerance) {
          sigma[w] += sigma[v];
          pred[w].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t w = *it;
      for (std::size_t v : pred[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) cb[w] += delta[w];
    }
  }
  for (double& c : cb) c /= 2.0;
  return cb;
}

}  // namespace

GraphMetrics compute_metrics(const SocialGraph& g) {
  const std::size_t n = g.nodes.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[g.nodes[i]] = i;
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
  std::vector<std::set<std::size_t>> nbr(n);
  GraphMetrics m;
  m.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.nodes[i].id = g.nodes[i];
  for (const auto& e : g.edges) {
    const std::size_t a = index.at(e.a), b = index.at(e.b);
    adj[a].emplace_back(b, 1.0 / e.weight);
    adj[b].emplace_back(a, 1.0 / e.weight);
    nbr[a].insert(b);
    nbr[b].insert(a);
    m.nodes[a].weighted_degree += e.weight;
    m.nodes[b].weighted_degree += e.weight;
  }
  m.edge_count = g.edges.size();
  m.density = n > 1 ? 2.0 * static_cast<double>(m.edge_count) / (static_cast<double>(n) * static_cast<double>(n - 1)) : 0.0;
  const auto cb = betweenness(n, adj);
  for (std::size_t i = 0; i < n; ++i) {
    NodeMetrics& nm = m.nodes[i];
    nm.degree = static_cast<int>(nbr[i].size());
    nm.betweenness = cb[i];
    const std::size_t k = nbr[i].size();
    if (k >= 2) {
      std::size_t links = 0;
      for (std::size_t u : nbr[i]) {
        for (std::size_t v : nbr[i]) {
          if (u < v && nbr[u].count(v)) ++links;
        }
      }
      nm.clustering = 2.0 * static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
    }
  }
  return m;
}

}  // namespace herdgraph
