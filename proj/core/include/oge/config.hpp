#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace oge {

// Flat key = value run configuration; defaults are the generated-family setup.
struct TrainConfig {
    int t_max = 500;
    int history = 2;
    bool shift_features = true;
    bool normalize_targets = true;
    bool nn_channel = false;
    std::string preset = "standard";  // or "road"
    int training_steps = 25600;       // 40000 for road networks
    int eval_episodes = 50;
    int env_steps_per_train_step = 32;
    int train_steps_per_eval = 512;
    int buffer_capacity = 20000;
    double eps_max = 1.0;
    double eps_min = 0.15;
    std::vector<double> goal = {0, 0, 0, 0.25, 0.25, 0.5, 0.5, 1};
    int batch_size = 32;
    double learning_rate = 1e-4;
    int warmup_episodes = 20;  // random episodes that prefill the buffer / fit the normalizer
    std::uint64_t seed = 0;
    std::string dataset_dir;
    std::string run_dir = "run";

    void validate() const;  // throws DataError
};

TrainConfig parse_config_text(const std::string& text);
TrainConfig load_config(const std::string& path);
std::string config_to_text(const TrainConfig& c);
void save_config(const std::string& path, const TrainConfig& c);

// Single "key = value" override, same keys as the file.
void apply_override(TrainConfig& c, const std::string& key, const std::string& value);

}  // namespace oge
