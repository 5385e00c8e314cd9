// Command-line front end: generate / explore / train / evaluate / report.
// Exit codes: 0 success, 1 usage, 2 malformed data, 3 numeric failure.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "oge/baselines.hpp"
#include "oge/config.hpp"
#include "oge/dataset_io.hpp"
#include "oge/dfp.hpp"
#include "oge/error.hpp"
#include "oge/evaluate.hpp"
#include "oge/generators.hpp"
#include "oge/net.hpp"
#include "oge/report.hpp"
#include "oge/train.hpp"

namespace fs = std::filesystem;
using namespace oge;

namespace {

struct GenerateArgs {
    std::string family;
    std::string road_file;
    std::string out_dir;
    int count = 500;
    double test_ratio = 0.2;
    int n_eval = 50;
    std::uint64_t seed = 0;
};

int run_generate(const GenerateArgs& a) {
    Dataset ds;
    if (!a.road_file.empty()) {
        GeoGraph geo = load_geo_graph(a.road_file);
        SplitResult split = diagonal_split(geo);
        ds = make_dataset_presplit({split.train}, {split.test}, a.n_eval, a.seed);
        std::cout << "road graph " << geo.graph.num_nodes() << " nodes -> train "
                  << split.train.num_nodes() << ", test " << split.test.num_nodes() << " nodes\n";
    } else {
        GraphFamily fam = family_from_name(a.family);
        std::vector<Graph> graphs;
        graphs.reserve(static_cast<std::size_t>(a.count));
        for (int i = 0; i < a.count; ++i)
            graphs.push_back(generate({fam, a.seed * 1000003ULL + static_cast<std::uint64_t>(i)}));
        ds = make_dataset(graphs, a.test_ratio, a.n_eval, a.seed);
    }
    save_dataset(a.out_dir, ds);
    std::cout << "wrote " << ds.train.size() << " train / " << ds.test.size() << " test graphs, "
              << ds.eval_pairs().size() << " eval pairs -> " << a.out_dir << "\n";
    return 0;
}

struct ExploreArgs {
    std::string graph_file;
    std::string policy = "dfs";
    std::string checkpoint;
    std::string out_file;
    NodeId source = 0;
    int step_cap = 500;
    std::uint64_t seed = 0;
};

int run_explore(const ExploreArgs& a) {
    Graph g = load_graph(a.graph_file);
    if (a.source < 0 || a.source >= g.num_nodes())
        throw DataError("source node out of range: " + std::to_string(a.source));

    std::mt19937_64 rng(a.seed);
    PolicyFn policy;
    std::shared_ptr<DfpPolicy> learned;  // keeps the chooser's state alive
    std::shared_ptr<Checkpoint> ck;
    if (a.policy == "dfp") {
        if (a.checkpoint.empty()) throw DataError("policy dfp needs --checkpoint");
        ck = std::make_shared<Checkpoint>(load_checkpoint(a.checkpoint));
        FeatureOptions opts;
        opts.history = ck->config.input_dim / 3;  // nn channel off in shipped configs
        learned = std::make_shared<DfpPolicy>(ck->config, &ck->params, opts, default_goal());
        learned->begin_episode();
        policy = [learned, &rng](const ExplorationState& s) { return learned->act(s, 0.0, rng); };
    } else {
        policy = make_policy(policy_from_name(a.policy), rng);
    }

    Trajectory tr = run_policy(g, a.source, policy, a.step_cap);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!a.out_file.empty()) {
        file.open(a.out_file);
        if (!file) throw DataError("cannot write " + a.out_file);
        os = &file;
    }
    *os << "t,node,reward,rate\n";
    for (std::size_t t = 0; t < tr.path.size(); ++t) {
        int reward = t == 0 ? 0 : tr.rewards[t - 1];
        *os << t << "," << tr.path[t] << "," << reward << "," << tr.rates[t] << "\n";
    }
    std::cerr << "final rate " << tr.final_rate << " over " << tr.total_length << " hops ("
              << (tr.completed ? "complete" : "capped") << ")\n";
    return 0;
}

struct TrainArgs {
    std::string config_file;
    std::string dataset_dir;
    std::string run_dir;
    std::vector<std::string> overrides;
    std::string dataset_name;
    bool has_seed = false;
    std::uint64_t seed = 0;
};

int run_train(const TrainArgs& a) {
    TrainConfig cfg;
    if (!a.config_file.empty()) cfg = load_config(a.config_file);
    for (const std::string& kv : a.overrides) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw DataError("override must be key=value: " + kv);
        apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!a.dataset_dir.empty()) cfg.dataset_dir = a.dataset_dir;
    if (!a.run_dir.empty()) cfg.run_dir = a.run_dir;
    if (a.has_seed) cfg.seed = a.seed;
    cfg.validate();
    if (cfg.dataset_dir.empty()) throw DataError("no dataset: pass --dataset or set dataset_dir");

    Dataset ds = load_dataset(cfg.dataset_dir);
    std::string name = a.dataset_name.empty() ? fs::path(cfg.dataset_dir).filename().string()
                                              : a.dataset_name;
    TrainProgress progress = [](const CurvePoint& p, const NetworkParams&) {
        std::cout << "step " << p.step << "  eval mean " << p.mean_rate << "  std " << p.std_rate
                  << std::endl;
    };
    TrainResult res = train(cfg, ds, progress);
    save_train_artifacts(cfg, res, name);
    std::cout << "final eval mean " << res.final_eval_mean << " std " << res.final_eval_std
              << " after " << res.gradient_steps << " gradient steps -> " << cfg.run_dir << "\n";
    return 0;
}

struct EvaluateArgs {
    std::string dataset_dir;
    std::string policy = "nn";
    std::string checkpoint;
    std::string out_file;
    std::string dataset_name;
    int step_cap = 500;
    std::uint64_t seed = 0;
};

int run_evaluate(const EvaluateArgs& a) {
    Dataset ds = load_dataset(a.dataset_dir);
    EvalReport rep;
    if (a.policy == "dfp") {
        if (a.checkpoint.empty()) throw DataError("policy dfp needs --checkpoint");
        auto ck = std::make_shared<Checkpoint>(load_checkpoint(a.checkpoint));
        FeatureOptions opts;
        opts.history = ck->config.input_dim / 3;
        auto factory = [ck, opts](std::uint64_t episode_seed) -> PolicyFn {
            auto pol = std::make_shared<DfpPolicy>(ck->config, &ck->params, opts, default_goal());
            pol->begin_episode();
            auto rng = std::make_shared<std::mt19937_64>(episode_seed);
            return [pol, rng](const ExplorationState& s) { return pol->act(s, 0.0, *rng); };
        };
        rep = evaluate_chooser(ds, factory, a.step_cap);
        rep.policy = "DFP";
    } else {
        rep = evaluate_policy(ds, policy_from_name(a.policy), a.step_cap, a.seed);
    }
    std::string name = a.dataset_name.empty() ? fs::path(a.dataset_dir).filename().string()
                                              : a.dataset_name;
    std::cout << name << " " << rep.policy << " mean " << rep.mean << " std " << rep.stddev
              << " over " << rep.rates.size() << " episodes\n";
    if (!a.out_file.empty()) save_run_result(a.out_file, {name, rep.policy, a.seed, rep.mean,
                                                          rep.stddev});
    return 0;
}

struct ReportArgs {
    std::vector<std::string> inputs;  // final_report.json files or run directories
    std::string out_report;
    std::string out_curve;
};

int run_report(const ReportArgs& a) {
    std::vector<RunResult> runs;
    std::vector<std::string> curve_files;
    for (const std::string& in : a.inputs) {
        fs::path p(in);
        if (fs::is_directory(p)) {
            runs.push_back(load_run_result((p / "final_report.json").string()));
            if (fs::exists(p / "curve.csv")) curve_files.push_back((p / "curve.csv").string());
        } else {
            runs.push_back(load_run_result(p.string()));
        }
    }
    if (runs.empty()) throw DataError("report: no inputs");
    auto rows = aggregate_runs(runs);
    write_report_csv(a.out_report, rows);
    std::cout << "wrote " << rows.size() << " rows over " << runs.size() << " runs -> "
              << a.out_report << "\n";

    if (!a.out_curve.empty()) {
        if (curve_files.empty()) throw DataError("report: --curve-out given but no curve.csv found");
        // Average per-seed curves pointwise; steps must line up.
        std::vector<std::vector<CurvePoint>> curves;
        for (const auto& f : curve_files) curves.push_back(read_curve_csv(f));
        for (const auto& c : curves)
            if (c.size() != curves[0].size())
                throw DataError("report: curves have different lengths");
        std::vector<CurvePoint> merged;
        for (std::size_t i = 0; i < curves[0].size(); ++i) {
            CurvePoint p{curves[0][i].step, 0.0, 0.0};
            std::vector<double> means;
            for (const auto& c : curves) {
                if (c[i].step != p.step) throw DataError("report: curve steps do not line up");
                means.push_back(c[i].mean_rate);
            }
            double sum = 0;
            for (double m : means) sum += m;
            p.mean_rate = sum / static_cast<double>(means.size());
            double acc = 0;
            for (double m : means) acc += (m - p.mean_rate) * (m - p.mean_rate);
            p.std_rate = means.size() > 1 ? std::sqrt(acc / static_cast<double>(means.size() - 1))
                                          : 0.0;
            merged.push_back(p);
        }
        write_curve_csv(a.out_curve, merged);
        std::cout << "wrote merged curve (" << merged.size() << " points) -> " << a.out_curve
                  << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"online graph exploration: datasets, policies, training, reports"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* c_gen = app.add_subcommand("generate", "build a dataset from a family or a road file");
    auto* fam_opt = c_gen->add_option("--family", gen.family,
                                      "graph family: barabasi|ladder|tree|grid|caveman|maze");
    auto* road_opt = c_gen->add_option("--road", gen.road_file,
                                       "planar node/edge file; split along the bbox diagonal");
    fam_opt->excludes(road_opt);
    road_opt->excludes(fam_opt);
    c_gen->add_option("--out", gen.out_dir, "output dataset directory")->required();
    c_gen->add_option("--count", gen.count, "graphs to generate")->check(CLI::PositiveNumber);
    c_gen->add_option("--test-ratio", gen.test_ratio, "held-out fraction")
        ->check(CLI::Range(0.0, 1.0));
    c_gen->add_option("--eval", gen.n_eval, "fixed evaluation (graph, source) pairs")
        ->check(CLI::PositiveNumber);
    c_gen->add_option("--seed", gen.seed, "generation seed");

    ExploreArgs ex;
    auto* c_ex = app.add_subcommand("explore", "run one policy on one graph, emit the trajectory");
    c_ex->add_option("--graph", ex.graph_file, "graph file (V/E lines)")->required();
    c_ex->add_option("--policy", ex.policy, "random|bfs|dfs|nn|dfp");
    c_ex->add_option("--checkpoint", ex.checkpoint, "checkpoint for --policy dfp");
    c_ex->add_option("--source", ex.source, "start node");
    c_ex->add_option("--cap", ex.step_cap, "step cap")->check(CLI::PositiveNumber);
    c_ex->add_option("--seed", ex.seed, "rng seed for stochastic policies");
    c_ex->add_option("--out", ex.out_file, "trajectory CSV (default stdout)");

    TrainArgs tr;
    auto* c_tr = app.add_subcommand("train", "train the future-prediction explorer");
    c_tr->add_option("--config", tr.config_file, "key = value config file");
    c_tr->add_option("--dataset", tr.dataset_dir, "dataset directory");
    c_tr->add_option("--run-dir", tr.run_dir, "artifact directory");
    c_tr->add_option("--name", tr.dataset_name, "dataset name in the final report");
    c_tr->add_option("--set", tr.overrides, "config override key=value (repeatable)");
    c_tr->add_option("--seed", tr.seed, "seed override")->each([&tr](const std::string&) {
        tr.has_seed = true;
    });

    EvaluateArgs ev;
    auto* c_ev = app.add_subcommand("evaluate", "run a policy over a dataset's eval pairs");
    c_ev->add_option("--dataset", ev.dataset_dir, "dataset directory")->required();
    c_ev->add_option("--policy", ev.policy, "random|bfs|dfs|nn|dfp");
    c_ev->add_option("--checkpoint", ev.checkpoint, "checkpoint for --policy dfp");
    c_ev->add_option("--cap", ev.step_cap, "step cap")->check(CLI::PositiveNumber);
    c_ev->add_option("--seed", ev.seed, "episode seed for stochastic policies");
    c_ev->add_option("--out", ev.out_file, "write a per-run JSON result");
    c_ev->add_option("--name", ev.dataset_name, "dataset name in the result");

    ReportArgs rp;
    auto* c_rp = app.add_subcommand("report", "aggregate per-run results into CSV tables");
    c_rp->add_option("runs", rp.inputs, "run directories or final_report.json files")->required();
    c_rp->add_option("--out", rp.out_report, "aggregated report CSV")->required();
    c_rp->add_option("--curve-out", rp.out_curve, "pointwise-averaged curve CSV");

    try {
        app.parse(argc, argv);
        if (*c_gen) {
            if (gen.family.empty() && gen.road_file.empty())
                throw CLI::RequiredError("--family or --road");
            return run_generate(gen);
        }
        if (*c_ex) return run_explore(ex);
        if (*c_tr) return run_train(tr);
        if (*c_ev) return run_evaluate(ev);
        if (*c_rp) return run_report(rp);
        return 1;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
