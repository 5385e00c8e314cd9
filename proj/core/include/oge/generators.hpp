#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "oge/graph.hpp"

namespace oge {

enum class GraphFamily { barabasi, ladder, tree, grid, caveman, maze };

const char* family_name(GraphFamily f);
GraphFamily family_from_name(const std::string& name);

// Family-specific size parameters; -1 means "draw from the documented range".
//   barabasi: a = node count [100,199], b = attachment arity (default 4)
//   ladder:   a = rung count [100,199]
//   tree:     a = branching factor, b = height; drawn jointly from the
//             balanced configurations whose sizes span [121,1365]
//   grid:     a = rows, b = cols, both [8,17]
//   caveman:  a = clique count [2,4], b = clique size [30,79]
//   maze:     a = rows, b = cols, both [10,15]; c = extra loop edges [16,32]
struct GraphSpec {
    GraphFamily family = GraphFamily::grid;
    std::uint64_t seed = 0;
    int param_a = -1;
    int param_b = -1;
    int param_c = -1;
};

Graph make_barabasi(int n, int m, std::mt19937_64& rng);
Graph make_ladder(int rungs);
Graph make_balanced_tree(int branching, int height);
Graph make_grid(int rows, int cols);
Graph make_connected_caveman(int cliques, int clique_size);
Graph make_maze(int rows, int cols, int loop_edges, std::mt19937_64& rng);

Graph generate(const GraphSpec& spec);

// Planar-embedded graph (road networks).
struct GeoGraph {
    Graph graph;
    std::vector<std::pair<double, double>> coords;  // length == num_nodes
};

// Partition nodes by the side of the bounding-box diagonal, drop cross edges,
// keep each side's largest connected component. Larger side is train.
struct SplitResult {
    Graph train, test;
};
SplitResult diagonal_split(const GeoGraph& geo);

struct EvalPair {
    int graph_index;  // into test graphs
    NodeId source;
};

struct Dataset {
    std::vector<Graph> train;
    std::vector<Graph> test;
    std::vector<std::vector<NodeId>> test_sources;  // per test graph, fixed eval sources

    std::vector<EvalPair> eval_pairs() const;
};

// Deterministic split; test gets ceil(ratio * n) graphs. n_eval fixed (graph, source)
// pairs: one source per sampled test graph when enough graphs exist, otherwise
// sources drawn uniformly over all test graphs.
Dataset make_dataset(const std::vector<Graph>& graphs, double test_ratio, int n_eval,
                     std::uint64_t seed);

// Dataset from two pre-split pools (road networks after diagonal_split).
Dataset make_dataset_presplit(std::vector<Graph> train, std::vector<Graph> test, int n_eval,
                              std::uint64_t seed);

}  // namespace oge
