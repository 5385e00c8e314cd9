#include "oge/config.hpp"

#include <fstream>
#include <sstream>

#include "oge/error.hpp"

namespace oge {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw DataError("config: expected boolean, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(trim(item)));
        } catch (const std::exception&) {
            throw DataError("config: bad number in list: '" + item + "'");
        }
    }
    return out;
}

template <typename T>
T parse_num(const std::string& v) {
    std::istringstream ss(v);
    T out;
    if (!(ss >> out) || !(ss >> std::ws).eof()) throw DataError("config: bad number: '" + v + "'");
    return out;
}

}  // namespace

void TrainConfig::validate() const {
    auto positive = [](long long v, const char* what) {
        if (v <= 0) throw DataError(std::string("config: ") + what + " must be positive");
    };
    positive(t_max, "t_max");
    positive(history, "history");
    positive(training_steps, "training_steps");
    positive(eval_episodes, "eval_episodes");
    positive(env_steps_per_train_step, "env_steps_per_train_step");
    positive(train_steps_per_eval, "train_steps_per_eval");
    positive(buffer_capacity, "buffer_capacity");
    positive(batch_size, "batch_size");
    positive(warmup_episodes, "warmup_episodes");
    if (learning_rate <= 0) throw DataError("config: learning_rate must be positive");
    if (eps_max < eps_min || eps_min < 0 || eps_max > 1)
        throw DataError("config: epsilon endpoints out of order");
    if (goal.size() != 8) throw DataError("config: goal must have 8 components");
    if (preset != "standard" && preset != "road")
        throw DataError("config: preset must be standard or road");
}

void apply_override(TrainConfig& c, const std::string& key, const std::string& value) {
    if (key == "t_max") c.t_max = parse_num<int>(value);
    else if (key == "history") c.history = parse_num<int>(value);
    else if (key == "shift_features") c.shift_features = parse_bool(value);
    else if (key == "normalize_targets") c.normalize_targets = parse_bool(value);
    else if (key == "nn_channel") c.nn_channel = parse_bool(value);
    else if (key == "preset") c.preset = value;
    else if (key == "training_steps") c.training_steps = parse_num<int>(value);
    else if (key == "eval_episodes") c.eval_episodes = parse_num<int>(value);
    else if (key == "env_steps_per_train_step") c.env_steps_per_train_step = parse_num<int>(value);
    else if (key == "train_steps_per_eval") c.train_steps_per_eval = parse_num<int>(value);
    else if (key == "buffer_capacity") c.buffer_capacity = parse_num<int>(value);
    else if (key == "eps_max") c.eps_max = parse_num<double>(value);
    else if (key == "eps_min") c.eps_min = parse_num<double>(value);
    else if (key == "goal") c.goal = parse_list(value);
    else if (key == "batch_size") c.batch_size = parse_num<int>(value);
    else if (key == "learning_rate") c.learning_rate = parse_num<double>(value);
    else if (key == "warmup_episodes") c.warmup_episodes = parse_num<int>(value);
    else if (key == "seed") c.seed = parse_num<std::uint64_t>(value);
    else if (key == "dataset_dir") c.dataset_dir = value;
    else if (key == "run_dir") c.run_dir = value;
    else throw DataError("config: unknown key: " + key);
}

TrainConfig parse_config_text(const std::string& text) {
    TrainConfig c;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw DataError("config line " + std::to_string(lineno) + ": expected key = value");
        apply_override(c, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return c;
}

TrainConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open config: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

std::string config_to_text(const TrainConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "t_max = " << c.t_max << '\n'
       << "history = " << c.history << '\n'
       << "shift_features = " << (c.shift_features ? "true" : "false") << '\n'
       << "normalize_targets = " << (c.normalize_targets ? "true" : "false") << '\n'
       << "nn_channel = " << (c.nn_channel ? "true" : "false") << '\n'
       << "preset = " << c.preset << '\n'
       << "training_steps = " << c.training_steps << '\n'
       << "eval_episodes = " << c.eval_episodes << '\n'
       << "env_steps_per_train_step = " << c.env_steps_per_train_step << '\n'
       << "train_steps_per_eval = " << c.train_steps_per_eval << '\n'
       << "buffer_capacity = " << c.buffer_capacity << '\n'
       << "eps_max = " << c.eps_max << '\n'
       << "eps_min = " << c.eps_min << '\n';
    os << "goal = ";
    for (std::size_t i = 0; i < c.goal.size(); ++i) os << (i ? ", " : "") << c.goal[i];
    os << '\n'
       << "batch_size = " << c.batch_size << '\n'
       << "learning_rate = " << c.learning_rate << '\n'
       << "warmup_episodes = " << c.warmup_episodes << '\n'
       << "seed = " << c.seed << '\n';
    if (!c.dataset_dir.empty()) os << "dataset_dir = " << c.dataset_dir << '\n';
    if (!c.run_dir.empty()) os << "run_dir = " << c.run_dir << '\n';
    return os.str();
}

void save_config(const std::string& path, const TrainConfig& c) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot write config: " + path);
    os << config_to_text(c);
    if (!os) throw DataError("config write failed: " + path);
}

}  // namespace oge
