#include "oge/features.hpp"

#include <stdexcept>

#include "oge/baselines.hpp"

namespace oge {

FeatureMatrix base_features(const StateView& view, bool with_nn_channel) {
    int n = view.num_nodes();
    FeatureMatrix x = FeatureMatrix::Zero(n, with_nn_channel ? 4 : 3);
    for (int v = 0; v < n; ++v) {
        if (view.visited[static_cast<std::size_t>(v)])
            x(v, 0) = 1.0f;
        else
            x(v, 1) = 1.0f;  // observed and not visited = frontier
    }
    x(view.current, 2) = 1.0f;
    if (with_nn_channel && !view.frontier.empty()) x(nn_pick_local(view), 3) = 1.0f;
    return x;
}

FeatureMatrix stack_history(const std::deque<FeatureMatrix>& frames) {
    if (frames.empty()) throw std::invalid_argument("stack_history: no frames");
    int n = static_cast<int>(frames.back().rows());
    int c = static_cast<int>(frames.back().cols());
    for (const auto& f : frames) {
        if (f.cols() != c) throw std::invalid_argument("stack_history: channel mismatch");
        if (f.rows() > n) throw std::invalid_argument("stack_history: frames must grow");
    }
    FeatureMatrix out = FeatureMatrix::Zero(n, c * static_cast<int>(frames.size()));
    int col = 0;
    for (const auto& f : frames) {
        out.block(0, col, f.rows(), c) = f;  // nodes unseen at that step stay zero
        col += c;
    }
    return out;
}

FeatureMatrix shift_range(FeatureMatrix features) {
    features.array() -= 0.5f;
    return features;
}

double measurement(const ExplorationState& state) { return state.exploration_rate(); }

void FeatureHistory::push(const StateView& view) {
    frames_.push_back(base_features(view, opts_.with_nn_channel));
    while (static_cast<int>(frames_.size()) > opts_.history) frames_.pop_front();
}

FeatureMatrix FeatureHistory::input() const {
    if (frames_.empty()) throw std::logic_error("feature history: push before input");
    // Pad the oldest slots with implicit all-zero frames by stacking into the
    // full width directly.
    int n = static_cast<int>(frames_.back().rows());
    int c = opts_.base_channels();
    FeatureMatrix out = FeatureMatrix::Zero(n, c * opts_.history);
    int col = c * (opts_.history - static_cast<int>(frames_.size()));
    for (const auto& f : frames_) {
        out.block(0, col, f.rows(), c) = f;
        col += c;
    }
    return opts_.shift ? shift_range(std::move(out)) : out;
}

}  // namespace oge
