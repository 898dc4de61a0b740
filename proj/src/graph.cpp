#include "udnsync/graph.hpp"

#include <ostream>
#include <stdexcept>

namespace udnsync {

std::size_t InterferenceGraph::num_edges() const {
  std::size_t n = 0;
  for (const auto& in : in_neighbors) n += in.size();
  return n;
}

Matrix<std::uint8_t> InterferenceGraph::edge_mask() const {
  auto k = in_neighbors.size();
  auto mask = Matrix<std::uint8_t>::square(k);
  for (std::size_t i = 0; i < k; ++i)
    for (int j : in_neighbors[i]) mask(i, j) = 1;
  return mask;
}

InterferenceGraph build_graph_from_power(MatrixD power, double p0_watts) {
  if (power.rows() != power.cols()) throw std::invalid_argument("power matrix must be square");
  const auto k = power.rows();
  InterferenceGraph g;
  g.in_neighbors.resize(k);
  g.out_neighbors.resize(k);
  g.adjacency = MatrixD::square(k);
  for (std::size_t i = 0; i < k; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j || !(power(i, j) >= p0_watts)) continue;
      g.in_neighbors[i].push_back(static_cast<int>(j));
      g.out_neighbors[j].push_back(static_cast<int>(i));
      total += power(i, j);
    }
    if (total > 0.0)
      for (int j : g.in_neighbors[i]) g.adjacency(i, j) = power(i, j) / total;
  }
  g.power = std::move(power);
  return g;
}

InterferenceGraph build_graph(double p_t_watts, const Topology& topology, const MatrixD& interference_gains,
                              double path_loss_exp, double p0_watts) {
  const auto k = static_cast<std::size_t>(topology.num_nodes());
  if (interference_gains.rows() != k || interference_gains.cols() != k)
    throw std::invalid_argument("gain matrix does not match topology size");
  auto power = MatrixD::square(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j)
        power(i, j) = received_power(p_t_watts, interference_gains(i, j), topology.distances(i, j), path_loss_exp);
  return build_graph_from_power(std::move(power), p0_watts);
}

double connectivity_factor(const InterferenceGraph& graph) {
  const auto k = static_cast<double>(graph.num_nodes());
  if (k < 2) throw std::invalid_argument("connectivity factor needs at least 2 nodes");
  double degrees = 0.0;
  for (std::size_t i = 0; i < graph.in_neighbors.size(); ++i)
    degrees += static_cast<double>(graph.in_neighbors[i].size() + graph.out_neighbors[i].size());
  return degrees / (k * (k - 1.0));  // 2 * C(K, 2)
}

void write_edge_list(const InterferenceGraph& graph, std::ostream& os) {
  auto old = os.precision(17);
  for (std::size_t i = 0; i < graph.in_neighbors.size(); ++i)
    for (int j : graph.in_neighbors[i]) os << i << ' ' << j << ' ' << graph.adjacency(i, j) << '\n';
  os.precision(old);
}

}  // namespace udnsync
