#pragma once

#include <Eigen/Dense>
#include <deque>
#include <random>
#include <vector>

#include "oge/env.hpp"
#include "oge/features.hpp"
#include "oge/net.hpp"
#include "oge/replay.hpp"

namespace oge {

using GoalVector = Eigen::Matrix<float, Eigen::Dynamic, 1>;

// (0, 0, 0, 1/4, 1/4, 1/2, 1/2, 1): weight on far-horizon rate gains.
GoalVector default_goal();

// score(v) = g . f(v), one score per prediction row.
Eigen::VectorXf q_values(const Eigen::MatrixXf& predictions, const GoalVector& g);

struct EpsilonSchedule {
    double eps_max = 1.0;
    double eps_min = 0.15;
    std::int64_t total_steps = 1;

    double at(std::int64_t step) const;  // linear, clamped past total_steps
};

// Per-component scale for regression targets, fitted on random-exploration
// episodes and then frozen; zero-variance components fall back to scale 1.
class TargetNormalizer {
public:
    TargetNormalizer() : scale_(Eigen::VectorXf::Ones(kTargetDim)) {}
    explicit TargetNormalizer(Eigen::VectorXf scale);

    static TargetNormalizer fit(const Eigen::MatrixXf& raw_targets);  // rows = samples

    Eigen::Matrix<float, 1, Eigen::Dynamic> normalize(
        const Eigen::Matrix<float, 1, Eigen::Dynamic>& y) const;
    Eigen::Matrix<float, 1, Eigen::Dynamic> denormalize(
        const Eigen::Matrix<float, 1, Eigen::Dynamic>& y) const;
    const Eigen::VectorXf& scale() const { return scale_; }

private:
    Eigen::VectorXf scale_;
};

// L = (1/B) sum_i ||pred_i - target_i||^2, d L / d pred = 2 (pred - target) / B.
struct LossResult {
    float value = 0;
    Eigen::MatrixXf grad;  // B x 8
};
LossResult mse_loss(const Eigen::MatrixXf& predictions, const Eigen::MatrixXf& targets);

// Assemble a network observation from a state view and stacked features.
Obs make_obs(const StateView& view, FeatureMatrix features, float m);

// Greedy/epsilon-greedy frontier chooser over network scores. Keeps the
// per-episode frame history; call begin_episode, then act after each state.
class DfpPolicy {
public:
    DfpPolicy(const NetworkConfig& config, const NetworkParams* params, FeatureOptions opts,
              GoalVector goal);

    void begin_episode();
    // Push the newest frame and pick a frontier node (world id). With
    // probability epsilon picks uniformly; ties in score by lowest rank.
    NodeId act(const ExplorationState& state, double epsilon, std::mt19937_64& rng);

    // Scores aligned with view.frontier, for inspection and tests.
    Eigen::VectorXf scores(const StateView& view);

private:
    NetworkConfig config_;
    const NetworkParams* params_;
    FeatureOptions opts_;
    GoalVector goal_;
    FeatureHistory history_;
};

// Network input for a replayed transition: rebuilds the frame stack from the
// episode record ending at step t.
Obs make_replay_obs(const EpisodeRecord& rec, int t, const FeatureOptions& opts);

}  // namespace oge
