#include "oge/replay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oge/dfp.hpp"

namespace oge {

std::vector<int> default_offsets() { return {1, 2, 4, 8, 16, 32, 64, 128}; }

void EpisodeRecorder::snapshot(const ExplorationState& state) {
    StateView v = state.view();
    rec_.num_nodes = v.num_nodes();
    rec_.node_counts.push_back(v.num_nodes());
    rec_.edge_counts.push_back(v.num_edges);
    rec_.measurements.push_back(state.exploration_rate());
    rec_.t_dis.assign(v.t_dis.begin(), v.t_dis.end());
    rec_.t_vis.assign(v.t_vis.begin(), v.t_vis.end());
    rec_.local_rank.assign(v.local_rank.begin(), v.local_rank.end());
    rec_.path.push_back(v.current);
    // Extend the discovery-ordered edge list with this step's reveals. An
    // edge becomes known exactly when its first endpoint is visited, so the
    // new edges are the current node's unvisited neighbors, in row order.
    const auto& adj = *v.adjacency;
    for (int x : adj[static_cast<std::size_t>(v.current)])
        if (!v.visited[static_cast<std::size_t>(x)])
            rec_.edges.push_back(std::minmax(v.current, x));
    if (rec_.edges.size() != static_cast<std::size_t>(v.num_edges))
        throw std::logic_error("episode recorder: edge bookkeeping out of sync");
}

void EpisodeRecorder::on_reset(const ExplorationState& state) {
    rec_ = EpisodeRecord{};
    snapshot(state);
}

void EpisodeRecorder::on_step(const ExplorationState& state) { snapshot(state); }

EpisodeRecord EpisodeRecorder::finish() && { return std::move(rec_); }

StateView ReconstructedState::view() const {
    StateView v;
    v.adjacency = &adjacency;
    v.frontier = frontier;
    v.visited = visited;
    v.t_dis = t_dis;
    v.t_vis = t_vis;
    v.local_rank = local_rank;
    v.world_of = {};
    v.current = current;
    v.t = t;
    v.total_length = total_length;
    v.num_edges = num_edges;
    return v;
}

ReconstructedState reconstruct(const EpisodeRecord& rec, int t) {
    if (t < 0 || t >= static_cast<int>(rec.path.size()))
        throw std::invalid_argument("reconstruct: step out of range");
    ReconstructedState s;
    s.t = t;
    int n = rec.node_counts[static_cast<std::size_t>(t)];
    int e = rec.edge_counts[static_cast<std::size_t>(t)];
    s.adjacency.assign(static_cast<std::size_t>(n), {});
    for (int i = 0; i < e; ++i) {
        auto [u, v] = rec.edges[static_cast<std::size_t>(i)];
        s.adjacency[static_cast<std::size_t>(u)].push_back(v);
        s.adjacency[static_cast<std::size_t>(v)].push_back(u);
    }
    s.num_edges = e;
    s.visited.assign(static_cast<std::size_t>(n), 0);
    s.t_dis.assign(rec.t_dis.begin(), rec.t_dis.begin() + n);
    s.t_vis.assign(rec.t_vis.begin(), rec.t_vis.begin() + n);
    s.local_rank.assign(rec.local_rank.begin(), rec.local_rank.begin() + n);
    for (int v = 0; v < n; ++v) {
        if (rec.t_vis[static_cast<std::size_t>(v)] <= t) {
            s.visited[static_cast<std::size_t>(v)] = 1;
        } else {
            // rec.t_vis holds the final visit times; at step t this node has
            // not been visited yet.
            s.t_vis[static_cast<std::size_t>(v)] = kNeverVisited;
            if (rec.t_dis[static_cast<std::size_t>(v)] <= t)
                s.frontier.push_back(v);  // local ids ascending = discovery order
        }
    }
    s.current = rec.path[static_cast<std::size_t>(t)];
    s.m = rec.measurements[static_cast<std::size_t>(t)];
    // m = t / L recovers the hop count; exact because L fits a double.
    s.total_length = t == 0 ? 0 : static_cast<int>(std::llround(t / s.m));
    return s;
}

Eigen::Matrix<float, 1, Eigen::Dynamic> make_target(const EpisodeRecord& rec, int t,
                                                    const std::vector<int>& offsets) {
    if (t < 0 || t >= rec.length()) throw std::invalid_argument("make_target: step out of range");
    int last = rec.length();
    Eigen::Matrix<float, 1, Eigen::Dynamic> y(1, offsets.size());
    for (std::size_t j = 0; j < offsets.size(); ++j) {
        int future = std::min(t + offsets[j], last);  // rate frozen once exploration stops
        y(0, static_cast<Eigen::Index>(j)) = static_cast<float>(
            rec.measurements[static_cast<std::size_t>(future)] -
            rec.measurements[static_cast<std::size_t>(t)]);
    }
    return y;
}

ReplayBuffer::ReplayBuffer(int capacity_transitions) : capacity_(capacity_transitions) {
    if (capacity_ < 1) throw std::invalid_argument("replay: capacity must be positive");
}

void ReplayBuffer::store_episode(EpisodeRecord record) {
    int len = record.length();
    if (len < 1) throw std::invalid_argument("replay: empty episode");
    if (record.node_counts.size() != record.path.size() ||
        record.edge_counts.size() != record.path.size() ||
        record.measurements.size() != record.path.size())
        throw std::invalid_argument("replay: inconsistent episode record");
    episodes_.push_back(std::move(record));
    transitions_ += len;
    while (transitions_ > capacity_ && episodes_.size() > 1) {
        transitions_ -= episodes_.front().length();
        episodes_.pop_front();
    }
}

std::vector<TrainingTuple> ReplayBuffer::sample_minibatch(int batch, std::mt19937_64& rng,
                                                          const TargetNormalizer* normalizer,
                                                          const std::vector<int>& offsets) const {
    if (empty()) throw std::invalid_argument("replay: sample from empty buffer");
    // Cumulative transition counts let one uniform draw land on (episode, t).
    std::vector<int> cum(episodes_.size() + 1, 0);
    for (std::size_t i = 0; i < episodes_.size(); ++i)
        cum[i + 1] = cum[i] + episodes_[i].length();
    std::uniform_int_distribution<int> pick(0, transitions_ - 1);
    std::vector<TrainingTuple> out;
    out.reserve(static_cast<std::size_t>(batch));
    for (int b = 0; b < batch; ++b) {
        int flat = pick(rng);
        auto it = std::upper_bound(cum.begin(), cum.end(), flat);
        std::size_t ep = static_cast<std::size_t>(it - cum.begin()) - 1;
        int t = flat - cum[ep];
        TrainingTuple tup;
        tup.episode = &episodes_[ep];
        tup.t = t;
        tup.state = reconstruct(episodes_[ep], t);
        tup.action = episodes_[ep].path[static_cast<std::size_t>(t) + 1];
        tup.target = make_target(episodes_[ep], t, offsets);
        out.push_back(std::move(tup));
    }
    // Normalization happens after assembly so raw targets stay testable.
    if (normalizer)
        for (auto& tup : out) tup.target = normalizer->normalize(tup.target);
    return out;
}

}  // namespace oge
