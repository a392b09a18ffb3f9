#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "herdgraph/core.hpp"
#include "herdgraph/dyad.hpp"

namespace herdgraph {

struct InteractionEvent {
  std::string source_id;
  std::string identity_a;  // identity_a < identity_b
  std::string identity_b;
  Label label = Label::LickGroom;
  FrameInterval span;
  double confidence = 0.0;
};

/// Orders the identity pair canonically.
InteractionEvent make_event(std::string source_id, std::string a, std::string b, Label label,
                            FrameInterval span, double confidence);

/// Joins events of the same (source, pair, label) whose frame gap is at most
/// round(max_gap_s * fps). A merged event keeps the highest confidence.
std::vector<InteractionEvent> merge_events(std::vector<InteractionEvent> events, double fps,
                                           double max_gap_s = 1.0);

enum class Layer { Affiliative, Agonistic, Combined };
enum class WeightMode { Count, ConfidenceSum };

const char* layer_name(Layer l);
Layer parse_layer(const std::string& s);
const char* weight_mode_name(WeightMode m);
WeightMode parse_weight_mode(const std::string& s);

bool in_layer(Label label, Layer layer);

struct Edge {
  std::string a;
  std::string b;
  int count = 0;
  double confidence_sum = 0.0;
  double weight = 0.0;  // per the graph's weight mode
};

struct SocialGraph {
  Layer layer = Layer::Combined;
  WeightMode mode = WeightMode::Count;
  std::vector<std::string> nodes;  // sorted, unique
  std::vector<Edge> edges;         // sorted by (a, b); weight > 0 only

  /// Zero when the pair has no edge.
  double weight(const std::string& a, const std::string& b) const;
  double total_weight() const;
};

/// Builds one layer from already merged events. Every roster member becomes a
/// node even without edges; identities outside the roster are added as well.
SocialGraph build_graph(const std::vector<InteractionEvent>& merged, Layer layer,
                        const std::vector<std::string>& roster, WeightMode mode = WeightMode::Count);

struct NodeMetrics {
  std::string id;
  int degree = 0;
  double weighted_degree = 0.0;
  double betweenness = 0.0;  // unnormalized, each unordered pair counted once
  double clustering = 0.0;   // unweighted local clustering
};

struct GraphMetrics {
  std::vector<NodeMetrics> nodes;  // same order as SocialGraph::nodes
  double density = 0.0;
  std::size_t edge_count = 0;
};

/// Betweenness uses shortest paths with edge length 1 / weight.
GraphMetrics compute_metrics(const SocialGraph& g);

}  // namespace herdgraph
