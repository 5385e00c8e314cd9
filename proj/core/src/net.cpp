#include "oge/net.hpp"

#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

namespace oge {

NetworkConfig standard_config(int input_dim) {
    NetworkConfig c;
    c.input_dim = input_dim;
    return c;
}

NetworkConfig road_config(int input_dim) {
    NetworkConfig c;
    c.input_dim = input_dim;
    c.gcn_hidden = 64;
    c.gcn_out = 128;
    c.mlp_hidden = 128;
    c.mlp_out = 128;
    c.rff_hidden = 256;
    return c;
}

namespace {

template <typename S>
void shape_params(NetworkParamsT<S>& p, const NetworkConfig& c) {
    if (c.mlp_out != c.gcn_out)
        throw std::invalid_argument("network config: mlp output must match gcn output width");
    p.gcn_w1.resize(c.input_dim, c.gcn_hidden);
    p.gcn_b1.resize(c.gcn_hidden);
    p.gcn_w2.resize(c.gcn_hidden, c.gcn_out);
    p.gcn_b2.resize(c.gcn_out);
    p.mlp_w1.resize(1, c.mlp_hidden);
    p.mlp_b1.resize(c.mlp_hidden);
    p.mlp_w2.resize(c.mlp_hidden, c.mlp_out);
    p.mlp_b2.resize(c.mlp_out);
    p.rff_w1.resize(c.rff_in(), c.rff_hidden);
    p.rff_b1.resize(c.rff_hidden);
    p.rff_w2.resize(c.rff_hidden, c.out_dim);
    p.rff_b2.resize(c.out_dim);
}

template <typename S, typename F>
void visit_quad(NetworkParamsT<S>& a, const NetworkParamsT<S>& b, NetworkParamsT<S>& c,
                NetworkParamsT<S>& d, F&& f) {
    f(a.gcn_w1, b.gcn_w1, c.gcn_w1, d.gcn_w1);
    f(a.gcn_b1, b.gcn_b1, c.gcn_b1, d.gcn_b1);
    f(a.gcn_w2, b.gcn_w2, c.gcn_w2, d.gcn_w2);
    f(a.gcn_b2, b.gcn_b2, c.gcn_b2, d.gcn_b2);
    f(a.mlp_w1, b.mlp_w1, c.mlp_w1, d.mlp_w1);
    f(a.mlp_b1, b.mlp_b1, c.mlp_b1, d.mlp_b1);
    f(a.mlp_w2, b.mlp_w2, c.mlp_w2, d.mlp_w2);
    f(a.mlp_b2, b.mlp_b2, c.mlp_b2, d.mlp_b2);
    f(a.rff_w1, b.rff_w1, c.rff_w1, d.rff_w1);
    f(a.rff_b1, b.rff_b1, c.rff_b1, d.rff_b1);
    f(a.rff_w2, b.rff_w2, c.rff_w2, d.rff_w2);
    f(a.rff_b2, b.rff_b2, c.rff_b2, d.rff_b2);
}

}  // namespace

template <typename S>
NetworkParamsT<S> zero_params_like(const NetworkConfig& c) {
    NetworkParamsT<S> p;
    shape_params(p, c);
    visit_params(p, [](auto& t) { t.setZero(); });
    return p;
}

template <typename S>
NetworkParamsT<S> init_params(const NetworkConfig& c, std::uint64_t seed) {
    NetworkParamsT<S> p;
    shape_params(p, c);
    std::mt19937_64 rng(seed);
    auto fill = [&rng](auto& tensor, int fan_in) {
        std::uniform_real_distribution<double> u(-1.0 / std::sqrt(static_cast<double>(fan_in)),
                                                 1.0 / std::sqrt(static_cast<double>(fan_in)));
        for (Eigen::Index r = 0; r < tensor.rows(); ++r)
            for (Eigen::Index cc = 0; cc < tensor.cols(); ++cc)
                tensor(r, cc) = static_cast<S>(u(rng));
    };
    fill(p.gcn_w1, c.input_dim);
    fill(p.gcn_b1, c.input_dim);
    fill(p.gcn_w2, c.gcn_hidden);
    fill(p.gcn_b2, c.gcn_hidden);
    fill(p.mlp_w1, 1);
    fill(p.mlp_b1, 1);
    fill(p.mlp_w2, c.mlp_hidden);
    fill(p.mlp_b2, c.mlp_hidden);
    fill(p.rff_w1, c.rff_in());
    fill(p.rff_b1, c.rff_in());
    fill(p.rff_w2, c.rff_hidden);
    fill(p.rff_b2, c.rff_hidden);
    return p;
}

template <typename S>
std::int64_t param_count(const NetworkParamsT<S>& p) {
    std::int64_t n = 0;
    visit_params(p, [&n](const auto& t) { n += static_cast<std::int64_t>(t.size()); });
    return n;
}

template <typename S>
Eigen::SparseMatrix<S> normalized_adjacency(const std::vector<std::vector<int>>& adj) {
    int n = static_cast<int>(adj.size());
    std::vector<Eigen::Triplet<S>> trip;
    std::vector<double> inv_sqrt(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        inv_sqrt[static_cast<std::size_t>(v)] =
            1.0 / std::sqrt(static_cast<double>(adj[static_cast<std::size_t>(v)].size()) + 1.0);
    for (int u = 0; u < n; ++u) {
        trip.emplace_back(u, u,
                          static_cast<S>(inv_sqrt[static_cast<std::size_t>(u)] *
                                         inv_sqrt[static_cast<std::size_t>(u)]));
        for (int v : adj[static_cast<std::size_t>(u)])
            trip.emplace_back(u, v,
                              static_cast<S>(inv_sqrt[static_cast<std::size_t>(u)] *
                                             inv_sqrt[static_cast<std::size_t>(v)]));
    }
    Eigen::SparseMatrix<S> a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());
    return a;
}

namespace {

template <typename S>
void check_obs(const ObsT<S>& obs, const NetworkParamsT<S>& params) {
    int n = static_cast<int>(obs.a_norm.rows());
    if (obs.a_norm.cols() != n || obs.x.rows() != n)
        throw std::invalid_argument("forward: adjacency/feature row mismatch");
    if (obs.x.cols() != params.gcn_w1.rows())
        throw std::invalid_argument("forward: feature width does not match gcn input");
    if (obs.visited.empty()) throw std::invalid_argument("forward: no visited nodes");
    if (obs.frontier.empty()) throw std::invalid_argument("forward: empty frontier");
    if (obs.current < 0 || obs.current >= n)
        throw std::invalid_argument("forward: current node out of range");
    for (int v : obs.visited)
        if (v < 0 || v >= n) throw std::invalid_argument("forward: visited id out of range");
    for (int v : obs.frontier)
        if (v < 0 || v >= n) throw std::invalid_argument("forward: frontier id out of range");
}

template <typename S, typename M>
void track_min_abs(const M& pre, S& acc) {
    if (pre.size() > 0) acc = std::min(acc, pre.array().abs().minCoeff());
}

}  // namespace

template <typename S>
Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> forward(const ObsT<S>& obs,
                                                         const NetworkParamsT<S>& params,
                                                         ForwardTraceT<S>* trace) {
    check_obs(obs, params);
    ForwardTraceT<S> local;
    ForwardTraceT<S>& tr = trace ? *trace : local;
    tr = ForwardTraceT<S>{};
    tr.obs = obs;

    auto relu = [](const auto& v) { return v.cwiseMax(S(0)); };

    tr.ax = obs.a_norm * obs.x;
    tr.p1 = (tr.ax * params.gcn_w1).rowwise() + params.gcn_b1.transpose();
    tr.h1 = relu(tr.p1);
    tr.ah1 = obs.a_norm * tr.h1;
    tr.p2 = (tr.ah1 * params.gcn_w2).rowwise() + params.gcn_b2.transpose();
    tr.z = relu(tr.p2);

    tr.pm1 = obs.m * params.mlp_w1 + params.mlp_b1.transpose();
    tr.m1 = relu(tr.pm1);
    tr.pm2 = tr.m1 * params.mlp_w2 + params.mlp_b2.transpose();
    tr.zm = relu(tr.pm2);

    tr.zbar.setZero(1, tr.z.cols());
    for (int v : obs.visited) tr.zbar += tr.z.row(v);
    tr.zbar /= static_cast<S>(obs.visited.size());

    int nf = static_cast<int>(obs.frontier.size());
    int d = static_cast<int>(tr.z.cols());
    tr.phi.resize(nf, 4 * d);
    for (int i = 0; i < nf; ++i) {
        tr.phi.row(i).segment(0, d) = tr.z.row(obs.frontier[static_cast<std::size_t>(i)]);
        tr.phi.row(i).segment(d, d) = tr.zbar;
        tr.phi.row(i).segment(2 * d, d) = tr.z.row(obs.current);
        tr.phi.row(i).segment(3 * d, d) = tr.zm;
    }

    tr.pr1 = (tr.phi * params.rff_w1).rowwise() + params.rff_b1.transpose();
    tr.r1 = relu(tr.pr1);
    tr.out = (tr.r1 * params.rff_w2).rowwise() + params.rff_b2.transpose();

    track_min_abs(tr.p1, tr.min_abs_preact);
    track_min_abs(tr.p2, tr.min_abs_preact);
    track_min_abs(tr.pm1, tr.min_abs_preact);
    track_min_abs(tr.pm2, tr.min_abs_preact);
    track_min_abs(tr.pr1, tr.min_abs_preact);

    if (!tr.out.allFinite()) throw NumericError("forward produced non-finite predictions");
    return tr.out;
}

template <typename S>
NetworkParamsT<S> backward(const ForwardTraceT<S>& trace, const NetworkParamsT<S>& params,
                           const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>& dout) {
    using Mat = typename NetworkParamsT<S>::Mat;
    if (dout.rows() != trace.out.rows() || dout.cols() != trace.out.cols())
        throw std::invalid_argument("backward: loss gradient shape mismatch");
    if (trace.phi.cols() != params.rff_w1.rows() ||
        trace.obs.x.cols() != params.gcn_w1.rows() ||
        trace.h1.cols() != params.gcn_w2.rows() ||
        trace.m1.cols() != params.mlp_w2.rows() ||
        trace.r1.cols() != params.rff_w2.rows())
        throw std::invalid_argument("backward: trace does not match params");

    NetworkParamsT<S> g;
    auto mask = [](const Mat& pre) { return (pre.array() > S(0)).template cast<S>().matrix(); };

    // Row-wise head.
    g.rff_b2 = dout.colwise().sum().transpose();
    g.rff_w2 = trace.r1.transpose() * dout;
    Mat dr1 = (dout * params.rff_w2.transpose()).cwiseProduct(mask(trace.pr1));
    g.rff_b1 = dr1.colwise().sum().transpose();
    g.rff_w1 = trace.phi.transpose() * dr1;
    Mat dphi = dr1 * params.rff_w1.transpose();

    // Split the concatenated rows back into their tributaries.
    const auto& obs = trace.obs;
    int d = static_cast<int>(trace.z.cols());
    int n = static_cast<int>(trace.z.rows());
    Mat dz = Mat::Zero(n, d);
    Eigen::Matrix<S, 1, Eigen::Dynamic> dzbar = dphi.middleCols(d, d).colwise().sum();
    Eigen::Matrix<S, 1, Eigen::Dynamic> dzv = dphi.middleCols(2 * d, d).colwise().sum();
    Eigen::Matrix<S, 1, Eigen::Dynamic> dzm = dphi.middleCols(3 * d, d).colwise().sum();
    for (int i = 0; i < static_cast<int>(obs.frontier.size()); ++i)
        dz.row(obs.frontier[static_cast<std::size_t>(i)]) += dphi.row(i).segment(0, d);
    S inv_c = S(1) / static_cast<S>(obs.visited.size());
    for (int v : obs.visited) dz.row(v) += dzbar * inv_c;
    dz.row(obs.current) += dzv;

    // Measurement MLP.
    Eigen::Matrix<S, 1, Eigen::Dynamic> gm2 = dzm.cwiseProduct(mask(trace.pm2));
    g.mlp_w2 = trace.m1.transpose() * gm2;
    g.mlp_b2 = gm2.transpose();
    Eigen::Matrix<S, 1, Eigen::Dynamic> dm1 =
        (gm2 * params.mlp_w2.transpose()).cwiseProduct(mask(trace.pm1));
    g.mlp_w1 = obs.m * dm1;
    g.mlp_b1 = dm1.transpose();

    // Graph encoder; the normalized adjacency is symmetric.
    Mat g2 = dz.cwiseProduct(mask(trace.p2));
    g.gcn_w2 = trace.ah1.transpose() * g2;
    g.gcn_b2 = g2.colwise().sum().transpose();
    Mat dh1 = (obs.a_norm * g2) * params.gcn_w2.transpose();
    Mat g1 = dh1.cwiseProduct(mask(trace.p1));
    g.gcn_w1 = trace.ax.transpose() * g1;
    g.gcn_b1 = g1.colwise().sum().transpose();
    return g;
}

template <typename S>
AdamStateT<S> make_adam(const NetworkConfig& c, S lr) {
    AdamStateT<S> a;
    a.m = zero_params_like<S>(c);
    a.v = zero_params_like<S>(c);
    a.lr = lr;
    return a;
}

template <typename S>
void adam_step(NetworkParamsT<S>& params, const NetworkParamsT<S>& grads, AdamStateT<S>& state) {
    bool finite = true;
    visit_params(grads, [&finite](const auto& t) { finite = finite && t.allFinite(); });
    if (!finite) throw NumericError("adam: non-finite gradient");
    ++state.step;
    S c1 = S(1) - std::pow(state.beta1, static_cast<S>(state.step));
    S c2 = S(1) - std::pow(state.beta2, static_cast<S>(state.step));
    auto update = [&](auto& p, const auto& g, auto& m, auto& v) {
        if (p.rows() != g.rows() || p.cols() != g.cols())
            throw std::invalid_argument("adam: gradient shape mismatch");
        m = state.beta1 * m + (S(1) - state.beta1) * g;
        v.array() = state.beta2 * v.array() + (S(1) - state.beta2) * g.array().square();
        p.array() -= state.lr * (m.array() / c1) / ((v.array() / c2).sqrt() + state.eps);
    };
    visit_quad(params, grads, state.m, state.v, update);
}

namespace {

constexpr char kMagic[8] = {'O', 'G', 'E', 'N', 'E', 'T', '0', '1'};

void put_i32(std::ostream& os, std::int32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::int32_t get_i32(std::istream& is) {
    std::int32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const NetworkConfig& config,
                     const NetworkParams& params, NetPreset preset) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write checkpoint: " + path);
    os.write(kMagic, sizeof kMagic);
    os.put(static_cast<char>(preset));
    for (int v : {config.input_dim, config.gcn_hidden, config.gcn_out, config.mlp_hidden,
                  config.mlp_out, config.rff_hidden, config.out_dim})
        put_i32(os, v);
    visit_params(params, [&os](const auto& t) {
        put_i32(os, static_cast<std::int32_t>(t.rows()));
        put_i32(os, static_cast<std::int32_t>(t.cols()));
        // Row-major payload so the layout is independent of Eigen's default.
        for (Eigen::Index r = 0; r < t.rows(); ++r)
            for (Eigen::Index c = 0; c < t.cols(); ++c) {
                float x = t(r, c);
                os.write(reinterpret_cast<const char*>(&x), sizeof x);
            }
    });
    if (!os) throw DataError("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot read checkpoint: " + path);
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw DataError("not a checkpoint file: " + path);
    Checkpoint ck;
    ck.preset = static_cast<NetPreset>(is.get());
    ck.config.input_dim = get_i32(is);
    ck.config.gcn_hidden = get_i32(is);
    ck.config.gcn_out = get_i32(is);
    ck.config.mlp_hidden = get_i32(is);
    ck.config.mlp_out = get_i32(is);
    ck.config.rff_hidden = get_i32(is);
    ck.config.out_dim = get_i32(is);
    if (!is) throw DataError("truncated checkpoint: " + path);
    ck.params = zero_params_like<float>(ck.config);
    bool ok = true;
    visit_params(ck.params, [&is, &ok](auto& t) {
        std::int32_t rows = get_i32(is), cols = get_i32(is);
        if (rows != t.rows() || cols != t.cols()) {
            ok = false;
            return;
        }
        for (Eigen::Index r = 0; r < t.rows(); ++r)
            for (Eigen::Index c = 0; c < t.cols(); ++c) {
                float x;
                is.read(reinterpret_cast<char*>(&x), sizeof x);
                t(r, c) = x;
            }
    });
    if (!ok || !is) throw DataError("corrupt checkpoint: " + path);
    return ck;
}

template NetworkParamsT<float> zero_params_like<float>(const NetworkConfig&);
template NetworkParamsT<double> zero_params_like<double>(const NetworkConfig&);
template NetworkParamsT<float> init_params<float>(const NetworkConfig&, std::uint64_t);
template NetworkParamsT<double> init_params<double>(const NetworkConfig&, std::uint64_t);
template std::int64_t param_count<float>(const NetworkParamsT<float>&);
template std::int64_t param_count<double>(const NetworkParamsT<double>&);
template Eigen::SparseMatrix<float> normalized_adjacency<float>(
    const std::vector<std::vector<int>>&);
template Eigen::SparseMatrix<double> normalized_adjacency<double>(
    const std::vector<std::vector<int>>&);
template Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic> forward<float>(
    const ObsT<float>&, const NetworkParamsT<float>&, ForwardTraceT<float>*);
template Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic> forward<double>(
    const ObsT<double>&, const NetworkParamsT<double>&, ForwardTraceT<double>*);
template NetworkParamsT<float> backward<float>(
    const ForwardTraceT<float>&, const NetworkParamsT<float>&,
    const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic>&);
template NetworkParamsT<double> backward<double>(
    const ForwardTraceT<double>&, const NetworkParamsT<double>&,
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>&);
template AdamStateT<float> make_adam<float>(const NetworkConfig&, float);
template AdamStateT<double> make_adam<double>(const NetworkConfig&, double);
template void adam_step<float>(NetworkParamsT<float>&, const NetworkParamsT<float>&,
                               AdamStateT<float>&);
template void adam_step<double>(NetworkParamsT<double>&, const NetworkParamsT<double>&,
                                AdamStateT<double>&);

}  // namespace oge
