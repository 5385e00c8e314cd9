#include "oge/baselines.hpp"

#include <cctype>
#include <stdexcept>

#include "oge/error.hpp"

namespace oge {

const char* policy_name(PolicyKind k) {
    switch (k) {
        case PolicyKind::RANDOM: return "RANDOM";
        case PolicyKind::BFS: return "BFS";
        case PolicyKind::DFS: return "DFS";
        case PolicyKind::NN: return "NN";
    }
    return "?";
}

PolicyKind policy_from_name(const std::string& name) {
    std::string upper(name);
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (PolicyKind k : {PolicyKind::RANDOM, PolicyKind::BFS, PolicyKind::DFS, PolicyKind::NN})
        if (upper == policy_name(k)) return k;
    throw DataError("unknown policy: " + name);
}

namespace {

StateView checked_view(const ExplorationState& state) {
    StateView v = state.view();
    if (v.frontier.empty()) throw std::invalid_argument("select: empty frontier");
    return v;
}

}  // namespace

NodeId select_random(const ExplorationState& state, std::mt19937_64& rng) {
    StateView v = checked_view(state);
    std::size_t i = std::uniform_int_distribution<std::size_t>(0, v.frontier.size() - 1)(rng);
    return state.world_of(v.frontier[i]);
}

// Local ids encode (discovery step, tie rank) lexicographically, so the
// oldest frontier entry is the smallest local id and the newest the largest.
NodeId select_bfs(const ExplorationState& state) {
    return state.world_of(checked_view(state).frontier.front());
}

NodeId select_dfs(const ExplorationState& state) {
    return state.world_of(checked_view(state).frontier.back());
}

int nn_pick_local(const StateView& view) {
    if (view.frontier.empty()) throw std::invalid_argument("select: empty frontier");
    std::vector<char> is_target(view.adjacency->size(), 0);
    for (int f : view.frontier) is_target[static_cast<std::size_t>(f)] = 1;
    return nearest_in_adjacency(*view.adjacency, view.current, is_target, view.local_rank).node;
}

NodeId select_nn(const ExplorationState& state) {
    return state.world_of(nn_pick_local(checked_view(state)));
}

PolicyFn make_policy(PolicyKind kind, std::mt19937_64& rng) {
    switch (kind) {
        case PolicyKind::RANDOM:
            return [&rng](const ExplorationState& s) { return select_random(s, rng); };
        case PolicyKind::BFS:
            return [](const ExplorationState& s) { return select_bfs(s); };
        case PolicyKind::DFS:
            return [](const ExplorationState& s) { return select_dfs(s); };
        case PolicyKind::NN:
            return [](const ExplorationState& s) { return select_nn(s); };
    }
    throw std::invalid_argument("unknown policy kind");
}

Trajectory run_policy(const Graph& world, NodeId source, const PolicyFn& policy, int step_cap) {
    ExplorationState state(world, source);
    Trajectory traj;
    traj.path.push_back(source);
    traj.rates.push_back(state.exploration_rate());
    while (!state.done() && state.t() < step_cap) {
        NodeId pick = policy(state);
        StepOutcome out = state.step(pick);
        traj.path.push_back(pick);
        traj.rewards.push_back(out.reward);
        traj.rates.push_back(state.exploration_rate());
    }
    traj.total_length = state.total_length();
    traj.final_rate = state.exploration_rate();
    traj.completed = state.done();
    return traj;
}

}  // namespace oge
