#include "oge/train.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>

#include "oge/error.hpp"
#include "oge/replay.hpp"

namespace oge {

namespace {

GoalVector goal_from_config(const TrainConfig& c) {
    GoalVector g(static_cast<Eigen::Index>(c.goal.size()));
    for (std::size_t i = 0; i < c.goal.size(); ++i)
        g(static_cast<Eigen::Index>(i)) = static_cast<float>(c.goal[i]);
    return g;
}

struct Rollout {
    EpisodeRecord record;
    int steps = 0;
};

// One episode under the given action chooser; chooser sees the live state.
template <typename Chooser>
Rollout roll_episode(const Graph& world, NodeId source, int t_max, Chooser&& choose) {
    ExplorationState state(world, source);
    EpisodeRecorder rec;
    rec.on_reset(state);
    while (!state.done() && state.t() < t_max) {
        state.step(choose(state));
        rec.on_step(state);
    }
    Rollout r;
    r.steps = state.t();
    r.record = std::move(rec).finish();
    return r;
}

// Greedy evaluation on the dataset's fixed (graph, source) pairs.
EvalReport eval_greedy(const Dataset& ds, const NetworkConfig& nc, const NetworkParams& params,
                       const FeatureOptions& opts, const GoalVector& goal, int t_max) {
    return evaluate_chooser(
        ds,
        [&](std::uint64_t episode) -> PolicyFn {
            auto policy = std::make_shared<DfpPolicy>(nc, &params, opts, goal);
            auto rng = std::make_shared<std::mt19937_64>(episode);  // unused at eps = 0
            policy->begin_episode();
            return [policy, rng](const ExplorationState& s) { return policy->act(s, 0.0, *rng); };
        },
        t_max);
}

}  // namespace

TrainResult train(const TrainConfig& config, const Dataset& ds, const TrainProgress& progress) {
    config.validate();
    if (ds.train.empty()) throw DataError("train: empty training set");

    FeatureOptions opts;
    opts.with_nn_channel = config.nn_channel;
    opts.history = config.history;
    opts.shift = config.shift_features;
    NetworkConfig nc = config.preset == "road" ? road_config(opts.input_dim())
                                               : standard_config(opts.input_dim());
    GoalVector goal = goal_from_config(config);
    std::vector<int> offsets = default_offsets();

    TrainResult res;
    res.net_config = nc;
    res.params = init_params<float>(nc, config.seed);
    AdamState adam = make_adam<float>(nc, static_cast<float>(config.learning_rate));
    ReplayBuffer buffer(config.buffer_capacity);

    std::mt19937_64 env_rng(config.seed ^ 0x7f4a7c15c15ab3d1ULL);
    std::mt19937_64 batch_rng(config.seed ^ 0x2545f4914f6cdd1dULL);
    auto sample_world = [&]() -> std::pair<const Graph*, NodeId> {
        std::size_t gi =
            std::uniform_int_distribution<std::size_t>(0, ds.train.size() - 1)(env_rng);
        const Graph& g = ds.train[gi];
        NodeId src = std::uniform_int_distribution<NodeId>(0, g.num_nodes() - 1)(env_rng);
        return {&g, src};
    };

    // Pure random warm-up fills the buffer and fixes the target scales.
    std::vector<Eigen::Matrix<float, 1, Eigen::Dynamic>> warm_targets;
    for (int e = 0; e < config.warmup_episodes; ++e) {
        auto [world, src] = sample_world();
        Rollout ro = roll_episode(*world, src, config.t_max, [&](const ExplorationState& s) {
            return select_random(s, env_rng);
        });
        for (int t = 0; t < ro.record.length(); ++t)
            warm_targets.push_back(make_target(ro.record, t, offsets));
        buffer.store_episode(std::move(ro.record));
    }
    if (config.normalize_targets) {
        Eigen::MatrixXf raw(static_cast<Eigen::Index>(warm_targets.size()), kTargetDim);
        for (std::size_t i = 0; i < warm_targets.size(); ++i)
            raw.row(static_cast<Eigen::Index>(i)) = warm_targets[i];
        res.normalizer = TargetNormalizer::fit(raw);
    }

    EpsilonSchedule schedule{config.eps_max, config.eps_min, config.training_steps};
    std::int64_t env_budget = 0;
    std::int64_t g_step = 0;

    auto evaluate_now = [&]() {
        EvalReport er = eval_greedy(ds, nc, res.params, opts, goal, config.t_max);
        CurvePoint pt{g_step, er.mean, er.stddev};
        res.curve.push_back(pt);
        res.final_eval_mean = er.mean;
        res.final_eval_std = er.stddev;
        if (progress) progress(pt, res.params);
    };

    while (g_step < config.training_steps) {
        auto [world, src] = sample_world();
        DfpPolicy policy(nc, &res.params, opts, goal);
        policy.begin_episode();
        double eps = schedule.at(g_step);
        Rollout ro = roll_episode(*world, src, config.t_max, [&](const ExplorationState& s) {
            return policy.act(s, eps, env_rng);
        });
        env_budget += ro.steps;
        buffer.store_episode(std::move(ro.record));

        while (env_budget >= config.env_steps_per_train_step && g_step < config.training_steps) {
            env_budget -= config.env_steps_per_train_step;
            std::vector<TrainingTuple> batch = buffer.sample_minibatch(
                config.batch_size, batch_rng,
                config.normalize_targets ? &res.normalizer : nullptr, offsets);

            Eigen::MatrixXf preds(config.batch_size, kTargetDim);
            Eigen::MatrixXf targets(config.batch_size, kTargetDim);
            std::vector<ForwardTrace> traces(batch.size());
            std::vector<Eigen::MatrixXf> outs(batch.size());
            std::vector<int> action_rows(batch.size());
            for (std::size_t i = 0; i < batch.size(); ++i) {
                const TrainingTuple& tup = batch[i];
                Obs obs = make_replay_obs(*tup.episode, tup.t, opts);
                outs[i] = forward(obs, res.params, &traces[i]);
                auto it = std::find(obs.frontier.begin(), obs.frontier.end(), tup.action);
                if (it == obs.frontier.end())
                    throw std::logic_error("train: replayed action missing from frontier");
                action_rows[i] = static_cast<int>(it - obs.frontier.begin());
                preds.row(static_cast<Eigen::Index>(i)) = outs[i].row(action_rows[i]);
                targets.row(static_cast<Eigen::Index>(i)) = tup.target;
            }
            LossResult loss = mse_loss(preds, targets);
            if (!std::isfinite(loss.value)) throw NumericError("train: non-finite loss");

            // Only the taken action's row carries gradient.
            NetworkParams total = zero_params_like<float>(nc);
            for (std::size_t i = 0; i < batch.size(); ++i) {
                Eigen::MatrixXf dout = Eigen::MatrixXf::Zero(outs[i].rows(), outs[i].cols());
                dout.row(action_rows[i]) = loss.grad.row(static_cast<Eigen::Index>(i));
                NetworkParams g = backward(traces[i], res.params, dout);
                visit_params_pair(total, g, [](auto& a, const auto& b) { a += b; });
            }
            adam_step(res.params, total, adam);
            ++g_step;
            if (g_step % config.train_steps_per_eval == 0) evaluate_now();
        }
    }
    if (res.curve.empty() || res.curve.back().step != g_step) evaluate_now();
    res.gradient_steps = g_step;
    return res;
}

void save_train_artifacts(const TrainConfig& config, const TrainResult& result,
                          const std::string& dataset_name) {
    namespace fs = std::filesystem;
    fs::create_directories(config.run_dir);
    save_config((fs::path(config.run_dir) / "config.txt").string(), config);
    save_checkpoint((fs::path(config.run_dir) / "checkpoint.bin").string(), result.net_config,
                    result.params,
                    config.preset == "road" ? NetPreset::road : NetPreset::standard);
    write_curve_csv((fs::path(config.run_dir) / "curve.csv").string(), result.curve);
    RunResult rr;
    rr.dataset = dataset_name;
    rr.policy = "DFP";
    rr.seed = config.seed;
    rr.mean = result.final_eval_mean;
    rr.stddev = result.final_eval_std;
    save_run_result((fs::path(config.run_dir) / "final_report.json").string(), rr);
}

}  // namespace oge
