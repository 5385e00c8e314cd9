#include "oge/env.hpp"

#include <algorithm>
#include <stdexcept>

namespace oge {

ExplorationState::ExplorationState(const Graph& world, NodeId source,
                                   std::span<const int> tie_rank)
    : world_(&world), rank_(tie_rank) {
    if (source < 0 || source >= world.num_nodes())
        throw std::invalid_argument("reset: source out of range");
    if (!rank_.empty() && static_cast<int>(rank_.size()) != world.num_nodes())
        throw std::invalid_argument("reset: tie rank size mismatch");
    if (world.num_nodes() > 1 && !world.is_connected())
        throw std::invalid_argument("reset: world graph must be connected");

    local_of_.assign(static_cast<std::size_t>(world.num_nodes()), -1);
    local_of_[static_cast<std::size_t>(source)] = 0;
    world_of_.push_back(source);
    adj_.emplace_back();
    visited_.push_back(1);
    t_dis_.push_back(0);
    t_vis_.push_back(0);
    local_rank_.push_back(rank_.empty() ? source : rank_[static_cast<std::size_t>(source)]);
    path_.push_back(source);
    current_ = 0;
    reveal_neighbors_of(source, nullptr);
}

int ExplorationState::local_of(NodeId world) const {
    int l = local_of_[static_cast<std::size_t>(world)];
    if (l == -1) throw std::invalid_argument("node not observed yet");
    return l;
}

void ExplorationState::reveal_neighbors_of(NodeId world, StepOutcome* out) {
    auto nbrs = world_->neighbors(world);
    // New nodes enter in ascending tie rank; local ids then encode the
    // (discovery step, rank) order every selection rule relies on.
    std::vector<NodeId> fresh(nbrs.begin(), nbrs.end());
    std::erase_if(fresh, [this](NodeId v) { return local_of_[static_cast<std::size_t>(v)] != -1; });
    if (!rank_.empty())
        std::sort(fresh.begin(), fresh.end(), [this](NodeId a, NodeId b) {
            return rank_[static_cast<std::size_t>(a)] < rank_[static_cast<std::size_t>(b)];
        });
    for (NodeId v : fresh) {
        local_of_[static_cast<std::size_t>(v)] = static_cast<int>(world_of_.size());
        world_of_.push_back(v);
        adj_.emplace_back();
        visited_.push_back(0);
        t_dis_.push_back(t_);
        t_vis_.push_back(kNeverVisited);
        local_rank_.push_back(rank_.empty() ? v : rank_[static_cast<std::size_t>(v)]);
        frontier_.push_back(local_of_[static_cast<std::size_t>(v)]);
        if (out) out->revealed_nodes.push_back(v);
    }
    int lu = local_of_[static_cast<std::size_t>(world)];
    for (NodeId v : nbrs) {
        int lv = local_of_[static_cast<std::size_t>(v)];
        auto& row = adj_[static_cast<std::size_t>(lu)];
        if (std::find(row.begin(), row.end(), lv) != row.end()) continue;
        row.push_back(lv);
        adj_[static_cast<std::size_t>(lv)].push_back(lu);
        ++num_edges_;
        if (out) out->revealed_edges.emplace_back(world, v);
    }
}

StepOutcome ExplorationState::step(NodeId target) {
    if (target < 0 || target >= static_cast<int>(local_of_.size()) ||
        local_of_[static_cast<std::size_t>(target)] == -1)
        throw std::invalid_argument("step: target not observed");
    int lt = local_of_[static_cast<std::size_t>(target)];
    if (visited_[static_cast<std::size_t>(lt)])
        throw std::invalid_argument("step: target already visited");
    auto pos = std::find(frontier_.begin(), frontier_.end(), lt);
    if (pos == frontier_.end()) throw std::invalid_argument("step: target not in frontier");

    StepOutcome out;
    // Transit cost is the hop distance in the currently known graph; newly
    // revealed shortcuts only help future transits.
    std::vector<int> dist = bfs_distances(adj_, current_);
    int cost = dist[static_cast<std::size_t>(lt)];
    if (cost == kUnreachable) throw std::logic_error("step: frontier node unreachable");
    out.reward = -cost;

    frontier_.erase(pos);
    visited_[static_cast<std::size_t>(lt)] = 1;
    ++t_;
    t_vis_[static_cast<std::size_t>(lt)] = t_;
    total_length_ += cost;
    current_ = lt;
    path_.push_back(target);
    reveal_neighbors_of(target, &out);
    out.done = frontier_.empty();
    return out;
}

double ExplorationState::exploration_rate() const {
    if (total_length_ == 0) return 0.0;
    return static_cast<double>(t_) / static_cast<double>(total_length_);
}

std::vector<NodeId> ExplorationState::frontier() const {
    std::vector<NodeId> out;
    out.reserve(frontier_.size());
    for (int l : frontier_) out.push_back(world_of_[static_cast<std::size_t>(l)]);
    return out;
}

bool ExplorationState::in_frontier(NodeId world) const {
    if (world < 0 || world >= static_cast<int>(local_of_.size())) return false;
    int l = local_of_[static_cast<std::size_t>(world)];
    if (l == -1) return false;
    return !visited_[static_cast<std::size_t>(l)];
}

StateView ExplorationState::view() const {
    StateView v;
    v.adjacency = &adj_;
    v.frontier = frontier_;
    v.visited = visited_;
    v.t_dis = t_dis_;
    v.t_vis = t_vis_;
    v.local_rank = local_rank_;
    v.world_of = world_of_;
    v.current = current_;
    v.t = t_;
    v.total_length = total_length_;
    v.num_edges = num_edges_;
    return v;
}

int ExplorationState::known_distance_to(NodeId world) const {
    int l = local_of(world);
    int d = bfs_distances(adj_, current_)[static_cast<std::size_t>(l)];
    if (d == kUnreachable) throw std::logic_error("known graph disconnected");
    return d;
}

}  // namespace oge
