#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "oge/env.hpp"
#include "oge/graph.hpp"

namespace oge {

inline constexpr int kTargetDim = 8;
// Lookahead offsets 2^j for the 8 predicted exploration-rate deltas.
std::vector<int> default_offsets();

// Compressed episode in local (discovery-order) ids: the final observed graph
// plus per-step node/edge prefix counts reconstruct any G_t; t_dis/t_vis
// reconstruct frontier and visited sets.
struct EpisodeRecord {
    int num_nodes = 0;                               // |V_T|
    std::vector<std::pair<int, int>> edges;          // discovery order, local ids
    std::vector<int> node_counts;                    // length T+1, |V_t|
    std::vector<int> edge_counts;                    // length T+1, |E_t|
    std::vector<int> t_dis, t_vis;                   // per local node; kNeverVisited if unvisited
    std::vector<int> path;                           // local ids, length T+1
    std::vector<double> measurements;                // length T+1, u_t
    std::vector<int> local_rank;                     // per local node, tie-break rank

    int length() const { return static_cast<int>(path.size()) - 1; }
    int transitions() const { return length(); }
};

// Record an episode while it runs; call on_reset after ExplorationState
// construction and on_step after every step.
class EpisodeRecorder {
public:
    void on_reset(const ExplorationState& state);
    void on_step(const ExplorationState& state);
    EpisodeRecord finish() &&;

private:
    void snapshot(const ExplorationState& state);
    EpisodeRecord rec_;
};

// State at one step rebuilt from a record; mirrors ExplorationState's view.
struct ReconstructedState {
    std::vector<std::vector<int>> adjacency;  // local ids
    std::vector<int> frontier;                // ascending local ids
    std::vector<char> visited;
    std::vector<int> t_dis, t_vis;
    std::vector<int> local_rank;
    int current = 0;
    int t = 0;
    int total_length = 0;
    int num_edges = 0;
    double m = 0.0;

    StateView view() const;
};

ReconstructedState reconstruct(const EpisodeRecord& rec, int t);

// y_t[j] = m_{min(t + offsets[j], T)} - m_t.
Eigen::Matrix<float, 1, Eigen::Dynamic> make_target(const EpisodeRecord& rec, int t,
                                                    const std::vector<int>& offsets);

class TargetNormalizer;  // dfp.hpp

// episode points into the buffer; consume tuples before the next store_episode.
struct TrainingTuple {
    ReconstructedState state;
    const EpisodeRecord* episode = nullptr;
    int t = 0;
    int action = 0;  // local id, in state.frontier
    Eigen::Matrix<float, 1, Eigen::Dynamic> target;  // normalized
};

// FIFO ring; capacity counted in transitions, whole episodes evicted.
class ReplayBuffer {
public:
    explicit ReplayBuffer(int capacity_transitions = 20000);

    void store_episode(EpisodeRecord record);
    int num_transitions() const { return transitions_; }
    int num_episodes() const { return static_cast<int>(episodes_.size()); }
    bool empty() const { return transitions_ == 0; }
    const std::deque<EpisodeRecord>& episodes() const { return episodes_; }

    // Uniform with replacement over stored (episode, t) transitions.
    std::vector<TrainingTuple> sample_minibatch(int batch, std::mt19937_64& rng,
                                                const TargetNormalizer* normalizer,
                                                const std::vector<int>& offsets) const;

private:
    std::deque<EpisodeRecord> episodes_;
    int capacity_;
    int transitions_ = 0;
};

}  // namespace oge
