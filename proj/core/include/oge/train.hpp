#pragma once

#include <functional>
#include <string>
#include <vector>

#include "oge/config.hpp"
#include "oge/dfp.hpp"
#include "oge/evaluate.hpp"
#include "oge/net.hpp"
#include "oge/report.hpp"

namespace oge {

struct TrainResult {
    NetworkConfig net_config;
    NetworkParams params;
    TargetNormalizer normalizer;
    std::vector<CurvePoint> curve;
    double final_eval_mean = 0.0;
    double final_eval_std = 0.0;
    std::int64_t gradient_steps = 0;
};

// Algorithm: sample a train graph and source uniformly, roll an eps-greedy
// episode into the buffer; one gradient step per env_steps_per_train_step
// collected env steps; evaluate on the fixed test pairs every
// train_steps_per_eval gradient steps. Deterministic per config.seed.
// progress, if set, is called after every evaluation with current parameters.
using TrainProgress = std::function<void(const CurvePoint&, const NetworkParams&)>;
TrainResult train(const TrainConfig& config, const Dataset& ds,
                  const TrainProgress& progress = {});

// Writes config snapshot, checkpoint, curve.csv and final_report.json into
// config.run_dir.
void save_train_artifacts(const TrainConfig& config, const TrainResult& result,
                          const std::string& dataset_name);

}  // namespace oge
