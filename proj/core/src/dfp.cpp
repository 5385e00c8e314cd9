#include "oge/dfp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oge {

GoalVector default_goal() {
    GoalVector g(kTargetDim);
    g << 0, 0, 0, 0.25, 0.25, 0.5, 0.5, 1;
    return g;
}

Eigen::VectorXf q_values(const Eigen::MatrixXf& predictions, const GoalVector& g) {
    if (predictions.cols() != g.size())
        throw std::invalid_argument("q_values: goal length does not match prediction width");
    return predictions * g;
}

double EpsilonSchedule::at(std::int64_t step) const {
    if (step < 0) throw std::invalid_argument("epsilon: negative step");
    if (step >= total_steps) return eps_min;
    double frac = static_cast<double>(step) / static_cast<double>(total_steps);
    return eps_max + (eps_min - eps_max) * frac;
}

TargetNormalizer::TargetNormalizer(Eigen::VectorXf scale) : scale_(std::move(scale)) {
    if ((scale_.array() <= 0).any())
        throw std::invalid_argument("target normalizer: scales must be positive");
}

TargetNormalizer TargetNormalizer::fit(const Eigen::MatrixXf& raw_targets) {
    if (raw_targets.rows() < 2)
        throw std::invalid_argument("target normalizer: need at least 2 samples");
    Eigen::VectorXf mean = raw_targets.colwise().mean();
    Eigen::VectorXf var = (raw_targets.rowwise() - mean.transpose())
                              .array()
                              .square()
                              .colwise()
                              .mean();  // population variance
    Eigen::VectorXf scale = var.array().sqrt();
    for (Eigen::Index i = 0; i < scale.size(); ++i)
        if (scale(i) <= 0 || !std::isfinite(scale(i))) scale(i) = 1.0f;
    return TargetNormalizer(std::move(scale));
}

Eigen::Matrix<float, 1, Eigen::Dynamic> TargetNormalizer::normalize(
    const Eigen::Matrix<float, 1, Eigen::Dynamic>& y) const {
    if (y.cols() != scale_.size()) throw std::invalid_argument("normalize: width mismatch");
    return y.array() / scale_.transpose().array();
}

Eigen::Matrix<float, 1, Eigen::Dynamic> TargetNormalizer::denormalize(
    const Eigen::Matrix<float, 1, Eigen::Dynamic>& y) const {
    if (y.cols() != scale_.size()) throw std::invalid_argument("denormalize: width mismatch");
    return y.array() * scale_.transpose().array();
}

LossResult mse_loss(const Eigen::MatrixXf& predictions, const Eigen::MatrixXf& targets) {
    if (predictions.rows() != targets.rows() || predictions.cols() != targets.cols())
        throw std::invalid_argument("loss: shape mismatch");
    if (predictions.rows() == 0) throw std::invalid_argument("loss: empty batch");
    float b = static_cast<float>(predictions.rows());
    Eigen::MatrixXf diff = predictions - targets;
    LossResult r;
    r.value = diff.squaredNorm() / b;
    r.grad = (2.0f / b) * diff;
    return r;
}

Obs make_obs(const StateView& view, FeatureMatrix features, float m) {
    Obs obs;
    obs.a_norm = normalized_adjacency<float>(*view.adjacency);
    obs.x = std::move(features);
    obs.m = m;
    for (int v = 0; v < view.num_nodes(); ++v)
        if (view.visited[static_cast<std::size_t>(v)]) obs.visited.push_back(v);
    obs.current = view.current;
    obs.frontier.assign(view.frontier.begin(), view.frontier.end());
    return obs;
}

Obs make_replay_obs(const EpisodeRecord& rec, int t, const FeatureOptions& opts) {
    FeatureHistory hist(opts);
    for (int s = std::max(0, t - opts.history + 1); s <= t; ++s) {
        ReconstructedState st = reconstruct(rec, s);
        hist.push(st.view());
    }
    ReconstructedState now = reconstruct(rec, t);
    return make_obs(now.view(), hist.input(), static_cast<float>(now.m));
}

DfpPolicy::DfpPolicy(const NetworkConfig& config, const NetworkParams* params, FeatureOptions opts,
                     GoalVector goal)
    : config_(config), params_(params), opts_(opts), goal_(std::move(goal)), history_(opts) {
    if (!params_) throw std::invalid_argument("policy: null parameters");
    if (config.input_dim != opts.input_dim())
        throw std::invalid_argument("policy: feature width does not match network input");
}

void DfpPolicy::begin_episode() { history_.reset(); }

Eigen::VectorXf DfpPolicy::scores(const StateView& view) {
    double m = view.total_length == 0 ? 0.0
                                      : static_cast<double>(view.t) /
                                            static_cast<double>(view.total_length);
    Obs obs = make_obs(view, history_.input(), static_cast<float>(m));
    Eigen::MatrixXf pred = forward(obs, *params_);
    return q_values(pred, goal_);
}

NodeId DfpPolicy::act(const ExplorationState& state, double epsilon, std::mt19937_64& rng) {
    StateView view = state.view();
    if (view.frontier.empty()) throw std::invalid_argument("act: empty frontier");
    history_.push(view);

    // The epsilon draw happens every step regardless of branch, keeping the
    // rng stream aligned across greedy and exploratory paths.
    bool explore = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon;
    if (explore) {
        std::size_t i =
            std::uniform_int_distribution<std::size_t>(0, view.frontier.size() - 1)(rng);
        return state.world_of(view.frontier[i]);
    }
    Eigen::VectorXf s = scores(view);
    int best = 0;
    for (int i = 1; i < static_cast<int>(s.size()); ++i) {
        float cur = s(i), top = s(best);
        int cur_rank = view.local_rank[static_cast<std::size_t>(view.frontier[i])];
        int top_rank = view.local_rank[static_cast<std::size_t>(view.frontier[best])];
        if (cur > top || (cur == top && cur_rank < top_rank)) best = i;
    }
    return state.world_of(view.frontier[static_cast<std::size_t>(best)]);
}

}  // namespace oge
