#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace oge {

using NodeId = int;

// Hop distance reported for nodes a breadth-first sweep cannot reach.
inline constexpr int kUnreachable = -1;

// Undirected, unweighted simple graph over dense node ids 0..num_nodes-1.
// Adjacency lists are sorted ascending. Immutable after construction, so
// instances can be shared read-only across evaluation workers.
class Graph {
public:
    Graph() = default;

    // Builds from an edge list; drops self-loops, collapses duplicates and
    // symmetrizes directed input.
    static Graph from_edges(int num_nodes, std::span<const std::pair<int, int>> edges);

    int num_nodes() const { return static_cast<int>(adj_.size()); }
    std::int64_t num_edges() const { return num_edges_; }
    std::span<const NodeId> neighbors(NodeId v) const { return adj_[static_cast<std::size_t>(v)]; }
    int degree(NodeId v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }
    bool has_edge(NodeId u, NodeId v) const;
    const std::vector<std::vector<NodeId>>& adjacency() const { return adj_; }
    bool is_connected() const;
    std::vector<std::pair<NodeId, NodeId>> edge_list() const;  // u < v, sorted

private:
    std::vector<std::vector<NodeId>> adj_;
    std::int64_t num_edges_ = 0;
};

// Hop distances from src to every node; kUnreachable marks other components.
std::vector<int> distances_from(const Graph& g, NodeId src);

// Shared kernel over a raw adjacency structure (used by the environment's
// growing known graph as well).
std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int src);

// Minimum-hop path from src to dst, both endpoints included; nullopt when dst
// is unreachable. src == dst yields the single-node path {src}.
std::optional<std::vector<NodeId>> shortest_path(const Graph& g, NodeId src, NodeId dst);

struct NearestResult {
    NodeId node;
    int distance;
};

// Closest target by hop distance, smallest node id among equidistant targets.
// Single breadth-first sweep that stops at the first layer containing a
// target. Throws if targets is empty or none is reachable.
NearestResult nearest_of_set(const Graph& g, NodeId src, std::span<const NodeId> targets);

// Same sweep over a raw adjacency structure. is_target flags nodes by index;
// ties are broken by the smallest rank[] value (rank empty = node index).
NearestResult nearest_in_adjacency(const std::vector<std::vector<int>>& adj, int src,
                                   const std::vector<char>& is_target,
                                   std::span<const int> rank = {});

// Largest connected component, relabeled densely; kept[new_id] = old id,
// ascending (relative order preserved).
struct ComponentResult {
    Graph graph;
    std::vector<NodeId> kept;
};
ComponentResult largest_component(const Graph& g);

}  // namespace oge
