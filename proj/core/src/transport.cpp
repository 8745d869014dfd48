#include <cmath>
#include <limits>
#include <vector>

#include "pacekit/bench.hpp"
#include "pacekit/errors.hpp"

namespace pacekit {

namespace {

// Residual arc in a tiny min-cost-flow network.
struct Arc {
  int to;
  double capacity;
  double cost;
  std::size_t reverse;  // index of the paired arc in graph[to]
};

// Successive shortest paths with node potentials. Dijkstra over reduced
// costs settles every node once, so predecessor chains cannot cycle; tiny
// negative reduced costs from rounding are clamped to zero, which perturbs
// path costs by at most the accumulated noise.
class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes) : graph_(nodes), potential_(nodes, 0.0) {}

  void add_edge(int from, int to, double capacity, double cost) {
    graph_[from].push_back({to, capacity, cost, graph_[to].size()});
    graph_[to].push_back({from, 0.0, -cost, graph_[from].size() - 1});
  }

  double min_cost_flow(int source, int sink, double amount) {
    double total_cost = 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    const std::size_t nodes = graph_.size();
    const double floor = amount * 1e-14;
    while (amount > floor) {
      std::vector<double> dist(nodes, inf);
      std::vector<int> prev_node(nodes, -1);
      std::vector<std::size_t> prev_arc(nodes, 0);
      std::vector<bool> settled(nodes, false);
      dist[source] = 0.0;
      while (true) {
        int v = -1;
        for (std::size_t u = 0; u < nodes; ++u) {
          if (!settled[u] && dist[u] < inf && (v < 0 || dist[u] < dist[v])) {
            v = static_cast<int>(u);
          }
        }
        if (v < 0) break;
        settled[static_cast<std::size_t>(v)] = true;
        for (std::size_t k = 0; k < graph_[v].size(); ++k) {
          const Arc& arc = graph_[v][k];
          if (arc.capacity <= 0.0) continue;
          const double reduced =
              std::max(arc.cost + potential_[v] - potential_[arc.to], 0.0);
          if (dist[v] + reduced < dist[arc.to]) {
            dist[arc.to] = dist[v] + reduced;
            prev_node[arc.to] = v;
            prev_arc[arc.to] = k;
          }
        }
      }
      if (dist[sink] == inf) break;

      for (std::size_t v = 0; v < nodes; ++v) {
        if (dist[v] < inf) potential_[v] += dist[v];
      }

      double bottleneck = amount;
      for (int v = sink; v != source; v = prev_node[v]) {
        bottleneck = std::min(bottleneck, graph_[prev_node[v]][prev_arc[v]].capacity);
      }
      if (!(bottleneck > 0.0)) break;
      double path_cost = 0.0;
      for (int v = sink; v != source; v = prev_node[v]) {
        Arc& arc = graph_[prev_node[v]][prev_arc[v]];
        path_cost += arc.cost;
        arc.capacity -= bottleneck;
        graph_[arc.to][arc.reverse].capacity += bottleneck;
      }
      total_cost += bottleneck * path_cost;
      amount -= bottleneck;
    }
    return total_cost;
  }

 private:
  std::vector<std::vector<Arc>> graph_;
  std::vector<double> potential_;
};

}  // namespace

double exact_transport(std::span<const double> supply, std::span<const double> demand,
                       const std::vector<std::vector<double>>& cost) {
  const int m = static_cast<int>(supply.size());
  const int n = static_cast<int>(demand.size());
  double supply_total = 0.0, demand_total = 0.0;
  for (double s : supply) supply_total += s;
  for (double d : demand) demand_total += d;
  if (std::abs(supply_total - demand_total) > 1e-9) {
    throw Error("transport: supply and demand masses differ");
  }

  const int source = 0;
  const int sink = m + n + 1;
  FlowNetwork net(m + n + 2);
  for (int i = 0; i < m; ++i) net.add_edge(source, 1 + i, supply[i], 0.0);
  for (int j = 0; j < n; ++j) net.add_edge(1 + m + j, sink, demand[j], 0.0);
  const double inf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) net.add_edge(1 + i, 1 + m + j, inf, cost[i][j]);
  }
  return net.min_cost_flow(source, sink, std::min(supply_total, demand_total));
}

}  // namespace pacekit
