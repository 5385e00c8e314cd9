#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "oge/config.hpp"
#include "oge/dataset_io.hpp"
#include "oge/error.hpp"
#include "oge/evaluate.hpp"
#include "oge/report.hpp"
#include "oge/train.hpp"
#include "oracles.hpp"

using namespace oge;
namespace fs = std::filesystem;

namespace {

Graph path_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph::from_edges(n, e);
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    return std::string((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    os << text;
}

struct TempDir {
    fs::path p;
    explicit TempDir(const std::string& name) : p(name) {
        fs::remove_all(p);
        fs::create_directories(p);
    }
    ~TempDir() { fs::remove_all(p); }
    std::string file(const std::string& name) const { return (p / name).string(); }
};

}  // namespace

TEST_CASE("run configuration round trips through its text form") {
    TrainConfig c;
    c.t_max = 123;
    c.preset = "road";
    c.training_steps = 40000;
    c.goal = {0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
    c.learning_rate = 3e-5;
    c.seed = 987654321;
    c.dataset_dir = "data/grid";
    c.nn_channel = true;

    TrainConfig back = parse_config_text(config_to_text(c));
    CHECK(back.t_max == c.t_max);
    CHECK(back.preset == c.preset);
    CHECK(back.training_steps == c.training_steps);
    CHECK(back.goal == c.goal);
    CHECK(back.learning_rate == c.learning_rate);
    CHECK(back.seed == c.seed);
    CHECK(back.dataset_dir == c.dataset_dir);
    CHECK(back.nn_channel == c.nn_channel);
    CHECK(back.history == c.history);
    CHECK(back.eps_min == c.eps_min);
}

TEST_CASE("config files: comments, blanks, and precise failure lines") {
    TrainConfig c = parse_config_text("# comment\n\n t_max = 77 \nseed=5\n");
    CHECK(c.t_max == 77);
    CHECK(c.seed == 5);

    try {
        parse_config_text("t_max = 1\nbogus line\n");
        FAIL("expected a parse error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("no_such_key = 1\n"), DataError);
    CHECK_THROWS_AS(parse_config_text("t_max = banana\n"), DataError);
    CHECK_THROWS_AS(parse_config_text("shift_features = maybe\n"), DataError);
    CHECK_THROWS_AS(load_config("missing_config_file.cfg"), DataError);
}

TEST_CASE("config validation rejects out-of-domain values") {
    TrainConfig c;
    CHECK_NOTHROW(c.validate());
    TrainConfig bad = c;
    bad.preset = "huge";
    CHECK_THROWS_AS(bad.validate(), DataError);
    bad = c;
    bad.eps_min = 0.9;
    bad.eps_max = 0.1;
    CHECK_THROWS_AS(bad.validate(), DataError);
    bad = c;
    bad.goal = {1, 2, 3};
    CHECK_THROWS_AS(bad.validate(), DataError);
    bad = c;
    bad.batch_size = 0;
    CHECK_THROWS_AS(bad.validate(), DataError);
    bad = c;
    bad.learning_rate = -1;
    CHECK_THROWS_AS(bad.validate(), DataError);
}

TEST_CASE("graph files round trip and report malformed lines") {
    TempDir tmp("tmp_graph_io");
    Graph g = generate({GraphFamily::grid, 3});
    std::string path = tmp.file("g.graph");
    save_graph(path, g);
    Graph back = load_graph(path);
    CHECK(back.num_nodes() == g.num_nodes());
    CHECK(back.edge_list() == g.edge_list());

    spit(tmp.file("bad1.graph"), "E 0 1\nV 3\n");
    CHECK_THROWS_AS(load_graph(tmp.file("bad1.graph")), DataError);
    spit(tmp.file("bad2.graph"), "V 3\nE 0 9\n");
    try {
        load_graph(tmp.file("bad2.graph"));
        FAIL("expected a parse error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    spit(tmp.file("bad3.graph"), "V 3\nX 1 2\n");
    CHECK_THROWS_AS(load_graph(tmp.file("bad3.graph")), DataError);
    spit(tmp.file("bad4.graph"), "V 3\nV 4\n");
    CHECK_THROWS_AS(load_graph(tmp.file("bad4.graph")), DataError);
    spit(tmp.file("bad5.graph"), "# only a comment\n");
    CHECK_THROWS_AS(load_graph(tmp.file("bad5.graph")), DataError);
    CHECK_THROWS_AS(load_graph(tmp.file("nonexistent.graph")), DataError);
}

TEST_CASE("planar graph files: arbitrary ids, component reduction, errors") {
    TempDir tmp("tmp_geo_io");
    // Two components; the triangle 10-20-30 survives, node 99 is dropped.
    spit(tmp.file("geo.txt"),
         "N 10 0.0 0.0\nN 20 1.0 0.0\nN 30 0.5 1.0\nN 99 5.0 5.0\n"
         "E 10 20\nE 20 30\nE 30 10\n");
    GeoGraph geo = load_geo_graph(tmp.file("geo.txt"));
    CHECK(geo.graph.num_nodes() == 3);
    CHECK(geo.graph.num_edges() == 3);
    REQUIRE(geo.coords.size() == 3);
    CHECK(geo.coords[2] == std::pair<double, double>{0.5, 1.0});

    std::string out = tmp.file("geo_out.txt");
    save_geo_graph(out, geo);
    GeoGraph back = load_geo_graph(out);
    CHECK(back.graph.edge_list() == geo.graph.edge_list());
    CHECK(back.coords == geo.coords);

    spit(tmp.file("dup.txt"), "N 1 0 0\nN 1 1 1\n");
    CHECK_THROWS_AS(load_geo_graph(tmp.file("dup.txt")), DataError);
    spit(tmp.file("dangling.txt"), "N 1 0 0\nE 1 2\n");
    try {
        load_geo_graph(tmp.file("dangling.txt"));
        FAIL("expected a parse error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
        CHECK(std::string(e.what()).find("unknown node") != std::string::npos);
    }
    spit(tmp.file("garbled.txt"), "N 1 0 0\nN two 0\n");
    CHECK_THROWS_AS(load_geo_graph(tmp.file("garbled.txt")), DataError);
    spit(tmp.file("empty.txt"), "");
    CHECK_THROWS_AS(load_geo_graph(tmp.file("empty.txt")), DataError);
}

TEST_CASE("dataset directories round trip graphs and fixed sources") {
    TempDir tmp("tmp_dataset_io");
    std::vector<Graph> graphs;
    for (std::uint64_t s = 0; s < 8; ++s) graphs.push_back(generate({GraphFamily::maze, s}));
    Dataset ds = make_dataset(graphs, 0.25, 6, 11);
    save_dataset(tmp.file("ds"), ds);
    Dataset back = load_dataset(tmp.file("ds"));
    REQUIRE(back.train.size() == ds.train.size());
    REQUIRE(back.test.size() == ds.test.size());
    for (std::size_t i = 0; i < ds.train.size(); ++i)
        CHECK(back.train[i].edge_list() == ds.train[i].edge_list());
    for (std::size_t i = 0; i < ds.test.size(); ++i)
        CHECK(back.test[i].edge_list() == ds.test[i].edge_list());
    CHECK(back.test_sources == ds.test_sources);
    CHECK(back.eval_pairs().size() == 6);

    CHECK_THROWS_AS(load_dataset(tmp.file("missing")), DataError);
    fs::create_directories(tmp.file("noTest"));
    spit((fs::path(tmp.file("noTest")) / "manifest.txt").string(), "");
    CHECK_THROWS_AS(load_dataset(tmp.file("noTest")), DataError);
}

TEST_CASE("episode statistics: mean and sample spread") {
    EvalReport r = EvalReport::from_rates({0.2, 0.4, 0.6});
    CHECK(r.mean == doctest::Approx(0.4));
    CHECK(r.stddev == doctest::Approx(0.2));
    EvalReport one = EvalReport::from_rates({0.7});
    CHECK(one.mean == 0.7);
    CHECK(one.stddev == 0.0);
    CHECK_THROWS(EvalReport::from_rates({}));
}

TEST_CASE("every policy scores exactly 1.0 on end-started path graphs") {
    Dataset ds;
    ds.train.push_back(path_graph(6));
    for (int n : {5, 9, 14}) {
        ds.test.push_back(path_graph(n));
        ds.test_sources.push_back({0});
    }
    for (PolicyKind k : {PolicyKind::RANDOM, PolicyKind::BFS, PolicyKind::DFS, PolicyKind::NN}) {
        EvalReport r = evaluate_policy(ds, k, 500, 3);
        REQUIRE(r.rates.size() == 3);
        CHECK(r.mean == 1.0);  // exact: every transit is a single hop
        CHECK(r.stddev == 0.0);
        CHECK(r.policy == policy_name(k));
    }
}

TEST_CASE("stochastic evaluation is seed-deterministic, episode-independent") {
    std::vector<Graph> graphs;
    for (std::uint64_t s = 0; s < 10; ++s) graphs.push_back(generate({GraphFamily::grid, s}));
    Dataset ds = make_dataset(graphs, 0.3, 5, 2);
    EvalReport a = evaluate_policy(ds, PolicyKind::RANDOM, 500, 42);
    EvalReport b = evaluate_policy(ds, PolicyKind::RANDOM, 500, 42);
    CHECK(a.rates == b.rates);
    EvalReport c = evaluate_policy(ds, PolicyKind::RANDOM, 500, 43);
    CHECK(a.rates != c.rates);
    CHECK(a.rates.size() == ds.eval_pairs().size());
}

TEST_CASE("learning curve files round trip exactly") {
    TempDir tmp("tmp_curve");
    std::vector<CurvePoint> pts{{0, 0.1234567890123, 0.01}, {512, 1.0 / 3.0, 0.2}};
    std::string path = tmp.file("curve.csv");
    write_curve_csv(path, pts);
    auto back = read_curve_csv(path);
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back[i].step == pts[i].step);
        CHECK(back[i].mean_rate == pts[i].mean_rate);  // printed to full precision
        CHECK(back[i].std_rate == pts[i].std_rate);
    }
    CHECK(slurp(path).rfind("step,mean_rate,std_rate\n", 0) == 0);

    spit(tmp.file("badhdr.csv"), "a,b,c\n1,2,3\n");
    CHECK_THROWS_AS(read_curve_csv(tmp.file("badhdr.csv")), DataError);
    spit(tmp.file("badrow.csv"), "step,mean_rate,std_rate\n1;2;3\n");
    CHECK_THROWS_AS(read_curve_csv(tmp.file("badrow.csv")), DataError);
}

TEST_CASE("summary table bytes are fully determined by the rows") {
    TempDir tmp("tmp_report");
    std::vector<ReportRow> rows{{"grid", "BFS", 0.5, 0.25, 5}, {"maze", "DFS", 0.0625, 0.0, 3}};
    std::string path = tmp.file("report.csv");
    write_report_csv(path, rows);
    CHECK(slurp(path) ==
          "dataset,policy,mean,std,seeds\n"
          "grid,BFS,0.5,0.25,5\n"
          "maze,DFS,0.0625,0,3\n");
}

TEST_CASE("per-run results persist and aggregate across seeds") {
    TempDir tmp("tmp_runs");
    RunResult r1{"grid", "DFP", 1, 0.5, 0.05};
    std::string path = tmp.file("r1.json");
    save_run_result(path, r1);
    RunResult back = load_run_result(path);
    CHECK(back.dataset == "grid");
    CHECK(back.policy == "DFP");
    CHECK(back.seed == 1);
    CHECK(back.mean == 0.5);
    CHECK(back.stddev == 0.05);

    spit(tmp.file("junk.json"), "{ not json");
    CHECK_THROWS_AS(load_run_result(tmp.file("junk.json")), DataError);
    spit(tmp.file("partial.json"), "{\"dataset\": \"grid\"}");
    CHECK_THROWS_AS(load_run_result(tmp.file("partial.json")), DataError);
    CHECK_THROWS_AS(load_run_result(tmp.file("missing.json")), DataError);

    std::vector<RunResult> runs{{"grid", "DFP", 1, 0.5, 0.0},
                                {"grid", "DFP", 2, 0.7, 0.0},
                                {"grid", "BFS", 1, 0.4, 0.0},
                                {"maze", "DFP", 1, 0.1, 0.0}};
    auto rows = aggregate_runs(runs);
    REQUIRE(rows.size() == 3);
    // Grouped rows come out ordered by (dataset, policy).
    CHECK(rows[0].dataset == "grid");
    CHECK(rows[0].policy == "BFS");
    CHECK(rows[0].seeds == 1);
    CHECK(rows[0].stddev == 0.0);
    CHECK(rows[1].policy == "DFP");
    CHECK(rows[1].mean == doctest::Approx(0.6));
    CHECK(rows[1].stddev == doctest::Approx(std::sqrt(0.02)));
    CHECK(rows[1].seeds == 2);
    CHECK(rows[2].dataset == "maze");

    // Input order must not leak into the table.
    std::vector<RunResult> shuffled{runs[3], runs[1], runs[0], runs[2]};
    auto rows2 = aggregate_runs(shuffled);
    std::string a = tmp.file("a.csv"), b = tmp.file("b.csv");
    write_report_csv(a, rows);
    write_report_csv(b, rows2);
    CHECK(slurp(a) == slurp(b));
}

namespace {

Dataset tiny_dataset() {
    Dataset ds;
    std::mt19937_64 rng(71);
    for (int i = 0; i < 3; ++i) {
        auto adj = oracle::random_connected(10 + i, 0.5, rng);
        ds.train.push_back(Graph::from_edges(10 + i, oracle::edge_pairs(adj)));
    }
    ds.test.push_back(path_graph(7));
    ds.test_sources.push_back({0, 6});
    return ds;
}

TrainConfig tiny_config(std::uint64_t seed) {
    TrainConfig c;
    c.t_max = 60;
    c.training_steps = 4;
    c.env_steps_per_train_step = 4;
    c.train_steps_per_eval = 2;
    c.buffer_capacity = 500;
    c.batch_size = 4;
    c.warmup_episodes = 2;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("a tiny training run finishes, evaluates, and is reproducible") {
    Dataset ds = tiny_dataset();
    TrainResult a = train(tiny_config(5), ds);
    CHECK(a.gradient_steps == 4);
    REQUIRE(!a.curve.empty());
    CHECK(a.curve.back().step == 4);
    CHECK(a.curve.front().step == 2);
    CHECK(a.final_eval_mean > 0.0);
    CHECK(a.final_eval_mean <= 1.0);
    CHECK(a.net_config.input_dim == 6);
    // Normalizer was fitted: scales strictly positive.
    CHECK(a.normalizer.scale().minCoeff() > 0.0f);

    TrainResult b = train(tiny_config(5), ds);
    bool same = true;
    visit_params_pair(a.params, b.params, [&same](auto& x, const auto& y) {
        same = same && x == y;
    });
    CHECK(same);
    CHECK(a.final_eval_mean == b.final_eval_mean);

    TrainResult c = train(tiny_config(6), ds);
    bool diff = false;
    visit_params_pair(a.params, c.params, [&diff](auto& x, const auto& y) {
        diff = diff || x != y;
    });
    CHECK(diff);
}

TEST_CASE("training rejects an empty training pool") {
    Dataset ds;
    ds.test.push_back(path_graph(4));
    ds.test_sources.push_back({0});
    CHECK_THROWS_AS(train(tiny_config(1), ds), DataError);
}

TEST_CASE("repeated updates on one minibatch drive its loss down") {
    std::mt19937_64 rng(72);
    ReplayBuffer buf(500);
    for (int e = 0; e < 3; ++e) {
        auto adj = oracle::random_connected(12, 0.5, rng);
        Graph g = Graph::from_edges(12, oracle::edge_pairs(adj));
        ExplorationState s(g, 0);
        EpisodeRecorder rec;
        rec.on_reset(s);
        while (!s.done()) {
            auto f = s.frontier();
            s.step(f[std::uniform_int_distribution<std::size_t>(0, f.size() - 1)(rng)]);
            rec.on_step(s);
        }
        buf.store_episode(std::move(rec).finish());
    }

    FeatureOptions opts;
    NetworkConfig nc = standard_config(opts.input_dim());
    NetworkParams params = init_params<float>(nc, 73);
    AdamState adam = make_adam<float>(nc, 3e-3f);
    auto batch = buf.sample_minibatch(8, rng, nullptr, default_offsets());

    auto batch_loss = [&](bool update) {
        Eigen::MatrixXf preds(8, kTargetDim), targets(8, kTargetDim);
        std::vector<ForwardTrace> traces(batch.size());
        std::vector<int> rows(batch.size());
        std::vector<Eigen::MatrixXf> outs(batch.size());
        for (std::size_t i = 0; i < batch.size(); ++i) {
            Obs obs = make_replay_obs(*batch[i].episode, batch[i].t, opts);
            outs[i] = forward(obs, params, &traces[i]);
            auto it = std::find(obs.frontier.begin(), obs.frontier.end(), batch[i].action);
            REQUIRE(it != obs.frontier.end());
            rows[i] = static_cast<int>(it - obs.frontier.begin());
            preds.row(static_cast<Eigen::Index>(i)) = outs[i].row(rows[i]);
            targets.row(static_cast<Eigen::Index>(i)) = batch[i].target;
        }
        LossResult loss = mse_loss(preds, targets);
        if (update) {
            NetworkParams total = zero_params_like<float>(nc);
            for (std::size_t i = 0; i < batch.size(); ++i) {
                Eigen::MatrixXf dout = Eigen::MatrixXf::Zero(outs[i].rows(), outs[i].cols());
                dout.row(rows[i]) = loss.grad.row(static_cast<Eigen::Index>(i));
                NetworkParams g = backward(traces[i], params, dout);
                visit_params_pair(total, g, [](auto& x, const auto& y) { x += y; });
            }
            adam_step(params, total, adam);
        }
        return loss.value;
    };

    float before = batch_loss(false);
    for (int i = 0; i < 60; ++i) batch_loss(true);
    float after = batch_loss(false);
    CHECK(after < 0.2f * before);
}

TEST_CASE("training artifacts land in the run directory and reload") {
    TempDir tmp("tmp_run_artifacts");
    Dataset ds = tiny_dataset();
    TrainConfig cfg = tiny_config(8);
    cfg.run_dir = tmp.file("run");
    TrainResult res = train(cfg, ds);
    save_train_artifacts(cfg, res, "tiny");

    Checkpoint ck = load_checkpoint((fs::path(cfg.run_dir) / "checkpoint.bin").string());
    CHECK(ck.config == res.net_config);
    CHECK(ck.preset == NetPreset::standard);
    bool same = true;
    visit_params_pair(ck.params, res.params, [&same](auto& x, const auto& y) {
        same = same && x == y;
    });
    CHECK(same);

    auto curve = read_curve_csv((fs::path(cfg.run_dir) / "curve.csv").string());
    CHECK(curve.size() == res.curve.size());
    TrainConfig back = load_config((fs::path(cfg.run_dir) / "config.txt").string());
    CHECK(back.seed == cfg.seed);
    CHECK(back.training_steps == cfg.training_steps);
    RunResult rr = load_run_result((fs::path(cfg.run_dir) / "final_report.json").string());
    CHECK(rr.policy == "DFP");
    CHECK(rr.dataset == "tiny");
    CHECK(rr.mean == res.final_eval_mean);
}
