#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "udnsync/channel.hpp"
#include "udnsync/matrix.hpp"
#include "udnsync/topology.hpp"

namespace udnsync {

/// Thresholded interference digraph of one iteration.
///
/// j is an incoming neighbor of i when the power i receives from j reaches
/// the threshold. Adjacency rows are the incoming powers normalized to sum to
/// one; rows without incoming neighbors are all zero.
struct InterferenceGraph {
  MatrixD power;  // power(i, j): watts received at i from j
  std::vector<std::vector<int>> in_neighbors;
  std::vector<std::vector<int>> out_neighbors;
  MatrixD adjacency;

  int num_nodes() const { return static_cast<int>(in_neighbors.size()); }
  std::size_t num_edges() const;
  /// edges(i, j) != 0 iff j is an incoming neighbor of i.
  Matrix<std::uint8_t> edge_mask() const;
};

/// Builds the graph from a received-power matrix (diagonal ignored).
InterferenceGraph build_graph_from_power(MatrixD power, double p0_watts);

/// power(i, j) = p_t * G(i, j) * d(i, j)^-alpha, then thresholded at p0.
InterferenceGraph build_graph(double p_t_watts, const Topology& topology, const MatrixD& interference_gains,
                              double path_loss_exp, double p0_watts);

/// Sum of in- and out-degrees over 2 * C(K, 2). Equals 2 on a complete
/// digraph since both edge directions are counted. Throws for K < 2.
double connectivity_factor(const InterferenceGraph& graph);

/// Writes one "i j weight" line per directed edge (j incoming to i).
void write_edge_list(const InterferenceGraph& graph, std::ostream& os);

}  // namespace udnsync
