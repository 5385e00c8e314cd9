#pragma once

#include <Eigen/Dense>
#include <deque>

#include "oge/env.hpp"

namespace oge {

using FeatureMatrix = Eigen::MatrixXf;  // |V_t| x (base_channels * history)

struct FeatureOptions {
    bool with_nn_channel = false;  // 4th channel marking the nearest-neighbor pick
    int history = 2;               // stacked frames, oldest first
    bool shift = true;             // map {0,1} -> {-0.5,+0.5}

    int base_channels() const { return with_nn_channel ? 4 : 3; }
    int input_dim() const { return base_channels() * history; }
};

// Single unshifted frame: columns [visited, frontier, is_current (, nn_pick)].
FeatureMatrix base_features(const StateView& view, bool with_nn_channel);

// Channel-wise concat oldest -> newest; rows missing from older frames are zero.
FeatureMatrix stack_history(const std::deque<FeatureMatrix>& frames);

// x -> x - 0.5 on {0,1} entries.
FeatureMatrix shift_range(FeatureMatrix features);

double measurement(const ExplorationState& state);

// Rolling frame stack for one episode; push after reset and after every step.
class FeatureHistory {
public:
    explicit FeatureHistory(FeatureOptions opts) : opts_(opts) {}

    void reset() { frames_.clear(); }
    void push(const StateView& view);
    // Stacked (and optionally shifted) input for the current step.
    FeatureMatrix input() const;
    const FeatureOptions& options() const { return opts_; }

private:
    FeatureOptions opts_;
    std::deque<FeatureMatrix> frames_;
};

}  // namespace oge
