#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oge/env.hpp"

namespace oge {

enum class PolicyKind { RANDOM, BFS, DFS, NN };

const char* policy_name(PolicyKind k);
PolicyKind policy_from_name(const std::string& name);

NodeId select_random(const ExplorationState& state, std::mt19937_64& rng);
NodeId select_bfs(const ExplorationState& state);   // earliest-discovered frontier node
NodeId select_dfs(const ExplorationState& state);   // most recently discovered
NodeId select_nn(const ExplorationState& state);    // closest in the known graph

// Closest frontier node from the current node over a state view (local id);
// distance ties go to the lowest tie rank. Shared by select_nn and the
// nearest-neighbor feature channel.
int nn_pick_local(const StateView& view);

// Frontier chooser; world node id out.
using PolicyFn = std::function<NodeId(const ExplorationState&)>;

PolicyFn make_policy(PolicyKind kind, std::mt19937_64& rng);

struct Trajectory {
    std::vector<NodeId> path;      // v_0 .. v_T
    std::vector<int> rewards;      // length T, all negative
    std::vector<double> rates;     // u_0 .. u_T
    int total_length = 0;
    double final_rate = 0.0;
    bool completed = false;        // frontier exhausted (vs. step cap)
};

Trajectory run_policy(const Graph& world, NodeId source, const PolicyFn& policy, int step_cap);

}  // namespace oge
