#pragma once

#include <limits>
#include <span>
#include <vector>

#include "oge/graph.hpp"

namespace oge {

inline constexpr int kNeverVisited = std::numeric_limits<int>::max();

struct StepOutcome {
    int reward = 0;  // negative hop count traveled
    std::vector<NodeId> revealed_nodes;
    std::vector<std::pair<NodeId, NodeId>> revealed_edges;
    bool done = false;
};

// Read-only snapshot of an exploration state in local (discovery-order) ids.
// Local id i < num_nodes; world_of maps back to the underlying graph's ids.
struct StateView {
    const std::vector<std::vector<int>>* adjacency;  // known graph, local ids
    std::span<const int> frontier;                   // ascending discovery order
    std::span<const char> visited;                   // indexed by local id
    std::span<const int> t_dis;
    std::span<const int> t_vis;
    std::span<const int> local_rank;                 // tie-break rank per local id
    std::span<const NodeId> world_of;                // empty for replayed states
    int current;  // local id
    int t;
    int total_length;
    int num_edges;

    int num_nodes() const { return static_cast<int>(adjacency->size()); }
};

// The agent's memory: observed subgraph, visit sequence, visited set, frontier.
// Nodes are indexed internally by discovery order; revelation order within a
// step follows ascending tie rank (rank(v) = v unless a custom rank is given,
// which keeps behavior invariant under node relabeling).
class ExplorationState {
public:
    ExplorationState(const Graph& world, NodeId source, std::span<const int> tie_rank = {});

    // target is a world node id currently on the frontier.
    StepOutcome step(NodeId target);

    bool done() const { return frontier_.empty(); }
    int t() const { return t_; }
    int total_length() const { return total_length_; }
    double exploration_rate() const;  // t / L, 0 when L == 0

    NodeId current() const { return world_of_[static_cast<std::size_t>(current_)]; }
    int num_known_nodes() const { return static_cast<int>(world_of_.size()); }
    int num_known_edges() const { return num_edges_; }

    // Frontier in discovery order, as world ids.
    std::vector<NodeId> frontier() const;
    bool in_frontier(NodeId world) const;
    // Visit sequence P_t as world ids.
    const std::vector<NodeId>& path() const { return path_; }

    int t_dis(NodeId world) const { return t_dis_[local_of(world)]; }
    int t_vis(NodeId world) const { return t_vis_[local_of(world)]; }

    StateView view() const;
    NodeId world_of(int local) const { return world_of_[static_cast<std::size_t>(local)]; }
    int local_of(NodeId world) const;

    // Hop distance from the current node within the known graph.
    int known_distance_to(NodeId world) const;

private:
    void reveal_neighbors_of(NodeId world, StepOutcome* out);

    const Graph* world_;
    std::span<const int> rank_;

    std::vector<std::vector<int>> adj_;  // known graph over local ids
    std::vector<NodeId> world_of_;       // local -> world, discovery order
    std::vector<int> local_of_;          // world -> local, -1 if unseen
    std::vector<char> visited_;          // by local id
    std::vector<int> frontier_;          // local ids, ascending
    std::vector<int> t_dis_, t_vis_;     // by local id
    std::vector<int> local_rank_;        // by local id
    std::vector<NodeId> path_;           // world ids
    int current_ = 0;                    // local id
    int t_ = 0;
    int total_length_ = 0;
    int num_edges_ = 0;
};

}  // namespace oge
