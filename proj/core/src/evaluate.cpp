#include "oge/evaluate.hpp"

#include <cmath>
#include <stdexcept>

namespace oge {

EvalReport EvalReport::from_rates(std::vector<double> rates) {
    if (rates.empty()) throw std::invalid_argument("eval: no episodes");
    EvalReport r;
    double sum = 0;
    for (double x : rates) sum += x;
    r.mean = sum / static_cast<double>(rates.size());
    double ss = 0;
    for (double x : rates) ss += (x - r.mean) * (x - r.mean);
    r.stddev = rates.size() > 1 ? std::sqrt(ss / static_cast<double>(rates.size() - 1)) : 0.0;
    r.rates = std::move(rates);
    return r;
}

EvalReport evaluate_chooser(const Dataset& ds, const ChooserFactory& make, int step_cap) {
    std::vector<EvalPair> pairs = ds.eval_pairs();
    if (pairs.empty()) throw std::invalid_argument("eval: dataset has no evaluation pairs");
    std::vector<double> rates;
    rates.reserve(pairs.size());
    std::uint64_t episode = 0;
    for (const EvalPair& p : pairs) {
        const Graph& g = ds.test[static_cast<std::size_t>(p.graph_index)];
        PolicyFn fn = make(episode++);
        rates.push_back(run_policy(g, p.source, fn, step_cap).final_rate);
    }
    return EvalReport::from_rates(std::move(rates));
}

EvalReport evaluate_policy(const Dataset& ds, PolicyKind kind, int step_cap,
                           std::uint64_t episode_seed) {
    EvalReport r = evaluate_chooser(
        ds,
        [kind, episode_seed](std::uint64_t episode) -> PolicyFn {
            switch (kind) {
                case PolicyKind::RANDOM:
                    // Fresh stream per episode keeps episodes order-independent.
                    return [rng = std::mt19937_64(episode_seed ^ (0x9e3779b97f4a7c15ULL *
                                                                  (episode + 1)))](
                               const ExplorationState& s) mutable {
                        return select_random(s, rng);
                    };
                case PolicyKind::BFS:
                    return [](const ExplorationState& s) { return select_bfs(s); };
                case PolicyKind::DFS:
                    return [](const ExplorationState& s) { return select_dfs(s); };
                case PolicyKind::NN:
                    return [](const ExplorationState& s) { return select_nn(s); };
            }
            throw std::invalid_argument("unknown policy kind");
        },
        step_cap);
    r.policy = policy_name(kind);
    return r;
}

}  // namespace oge
