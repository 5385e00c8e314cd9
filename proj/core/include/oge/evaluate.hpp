#pragma once

#include <string>
#include <vector>

#include "oge/baselines.hpp"
#include "oge/generators.hpp"

namespace oge {

struct EvalReport {
    std::vector<double> rates;  // final u_T per evaluation pair
    double mean = 0.0;
    double stddev = 0.0;  // sample std over episodes
    std::string dataset;
    std::string policy;
    std::int64_t step = -1;  // gradient step for learned policies

    static EvalReport from_rates(std::vector<double> rates);
};

// Runs every fixed (graph, source) pair to completion or cap. episode_seed
// feeds stochastic policies (RANDOM, epsilon > 0) one rng per episode.
EvalReport evaluate_policy(const Dataset& ds, PolicyKind kind, int step_cap,
                           std::uint64_t episode_seed);

// Same protocol for an arbitrary chooser factory: make() returns a per-episode
// chooser. Used for the learned policy.
using ChooserFactory = std::function<PolicyFn(std::uint64_t episode_seed)>;
EvalReport evaluate_chooser(const Dataset& ds, const ChooserFactory& make, int step_cap);

}  // namespace oge
