#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "oge/error.hpp"

namespace oge {

// Widths of the GCN encoder, measurement MLP, and row-wise head.
// ctx = concat(mean visited embedding, current embedding, measurement embedding),
// so rff input = gcn_out + 3 * gcn_out.
struct NetworkConfig {
    int input_dim = 6;  // base feature channels * history
    int gcn_hidden = 32;
    int gcn_out = 64;
    int mlp_hidden = 64;
    int mlp_out = 64;
    int rff_hidden = 128;
    int out_dim = 8;

    int ctx_dim() const { return 3 * gcn_out; }
    int rff_in() const { return gcn_out + ctx_dim(); }
    bool operator==(const NetworkConfig&) const = default;
};

NetworkConfig standard_config(int input_dim);  // 32/64, 64/64, 128
NetworkConfig road_config(int input_dim);      // hidden widths doubled

template <typename S>
struct NetworkParamsT {
    using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

    Mat gcn_w1;  // input_dim x gcn_hidden
    Vec gcn_b1;
    Mat gcn_w2;  // gcn_hidden x gcn_out
    Vec gcn_b2;
    Mat mlp_w1;  // 1 x mlp_hidden
    Vec mlp_b1;
    Mat mlp_w2;  // mlp_hidden x mlp_out
    Vec mlp_b2;
    Mat rff_w1;  // rff_in x rff_hidden
    Vec rff_b1;
    Mat rff_w2;  // rff_hidden x out_dim
    Vec rff_b2;
};

using NetworkParams = NetworkParamsT<float>;

// Visits tensors in a fixed order shared by gradients, Adam, checkpoints, and
// flatten-based tests.
template <typename S, typename F>
void visit_params(NetworkParamsT<S>& p, F&& f) {
    f(p.gcn_w1); f(p.gcn_b1); f(p.gcn_w2); f(p.gcn_b2);
    f(p.mlp_w1); f(p.mlp_b1); f(p.mlp_w2); f(p.mlp_b2);
    f(p.rff_w1); f(p.rff_b1); f(p.rff_w2); f(p.rff_b2);
}
template <typename S, typename F>
void visit_params(const NetworkParamsT<S>& p, F&& f) {
    f(p.gcn_w1); f(p.gcn_b1); f(p.gcn_w2); f(p.gcn_b2);
    f(p.mlp_w1); f(p.mlp_b1); f(p.mlp_w2); f(p.mlp_b2);
    f(p.rff_w1); f(p.rff_b1); f(p.rff_w2); f(p.rff_b2);
}

template <typename S, typename F>
void visit_params_pair(NetworkParamsT<S>& a, const NetworkParamsT<S>& b, F&& f) {
    f(a.gcn_w1, b.gcn_w1); f(a.gcn_b1, b.gcn_b1); f(a.gcn_w2, b.gcn_w2); f(a.gcn_b2, b.gcn_b2);
    f(a.mlp_w1, b.mlp_w1); f(a.mlp_b1, b.mlp_b1); f(a.mlp_w2, b.mlp_w2); f(a.mlp_b2, b.mlp_b2);
    f(a.rff_w1, b.rff_w1); f(a.rff_b1, b.rff_b1); f(a.rff_w2, b.rff_w2); f(a.rff_b2, b.rff_b2);
}

template <typename S>
NetworkParamsT<S> zero_params_like(const NetworkConfig& c);

// Fan-in scaled uniform init, deterministic per seed.
template <typename S>
NetworkParamsT<S> init_params(const NetworkConfig& c, std::uint64_t seed);

template <typename S>
std::int64_t param_count(const NetworkParamsT<S>& p);

// D^{-1/2} (A + I) D^{-1/2} over local adjacency lists.
template <typename S>
Eigen::SparseMatrix<S> normalized_adjacency(const std::vector<std::vector<int>>& adj);

// One observation in local ids. frontier order fixes the output row order.
template <typename S>
struct ObsT {
    Eigen::SparseMatrix<S> a_norm;                       // n x n
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> x;  // n x input_dim
    S m = 0;
    std::vector<int> visited;  // ascending local ids, nonempty
    int current = 0;
    std::vector<int> frontier;  // nonempty
};

using Obs = ObsT<float>;

template <typename S>
struct ForwardTraceT {
    using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
    using Row = Eigen::Matrix<S, 1, Eigen::Dynamic>;

    ObsT<S> obs;
    Mat ax;      // A_norm * x
    Mat p1, h1;  // gcn layer 1 pre/post activation
    Mat ah1;     // A_norm * h1
    Mat p2, z;   // gcn layer 2 pre/post
    Row pm1, m1; // mlp layer 1
    Row pm2, zm; // mlp layer 2
    Row zbar;    // mean over visited rows of z
    Mat phi;     // |F| x rff_in
    Mat pr1, r1; // rff layer 1
    Mat out;     // |F| x out_dim

    // Smallest |pre-activation|; finite-difference checks stay away from kinks.
    S min_abs_preact = std::numeric_limits<S>::max();
};

using ForwardTrace = ForwardTraceT<float>;

// Prediction rows aligned with obs.frontier. trace receives all intermediates.
template <typename S>
Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> forward(const ObsT<S>& obs,
                                                         const NetworkParamsT<S>& params,
                                                         ForwardTraceT<S>* trace = nullptr);

// Gradients of a scalar loss given d loss / d out. params must be the ones the
// trace was produced with.
template <typename S>
NetworkParamsT<S> backward(const ForwardTraceT<S>& trace, const NetworkParamsT<S>& params,
                           const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>& dout);

template <typename S>
struct AdamStateT {
    NetworkParamsT<S> m, v;
    std::int64_t step = 0;
    S lr = static_cast<S>(1e-4);
    S beta1 = static_cast<S>(0.9);
    S beta2 = static_cast<S>(0.999);
    S eps = static_cast<S>(1e-8);
};

using AdamState = AdamStateT<float>;

template <typename S>
AdamStateT<S> make_adam(const NetworkConfig& c, S lr = static_cast<S>(1e-4));

// Bias-corrected Adam update in place. Throws NumericError on non-finite grads.
template <typename S>
void adam_step(NetworkParamsT<S>& params, const NetworkParamsT<S>& grads, AdamStateT<S>& state);

enum class NetPreset : std::uint8_t { custom = 0, standard = 1, road = 2 };

// Versioned binary container; float payload is bit-exact across round trips.
void save_checkpoint(const std::string& path, const NetworkConfig& config,
                     const NetworkParams& params, NetPreset preset = NetPreset::custom);

struct Checkpoint {
    NetworkConfig config;
    NetworkParams params;
    NetPreset preset = NetPreset::custom;
};

Checkpoint load_checkpoint(const std::string& path);

// Float/double conversion (finite-difference tests run at double precision).
template <typename To, typename From>
NetworkParamsT<To> cast_params(const NetworkParamsT<From>& p) {
    NetworkParamsT<To> out;
    out.gcn_w1 = p.gcn_w1.template cast<To>();
    out.gcn_b1 = p.gcn_b1.template cast<To>();
    out.gcn_w2 = p.gcn_w2.template cast<To>();
    out.gcn_b2 = p.gcn_b2.template cast<To>();
    out.mlp_w1 = p.mlp_w1.template cast<To>();
    out.mlp_b1 = p.mlp_b1.template cast<To>();
    out.mlp_w2 = p.mlp_w2.template cast<To>();
    out.mlp_b2 = p.mlp_b2.template cast<To>();
    out.rff_w1 = p.rff_w1.template cast<To>();
    out.rff_b1 = p.rff_b1.template cast<To>();
    out.rff_w2 = p.rff_w2.template cast<To>();
    out.rff_b2 = p.rff_b2.template cast<To>();
    return out;
}

}  // namespace oge
