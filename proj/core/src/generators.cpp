#include "oge/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "oge/error.hpp"

namespace oge {

const char* family_name(GraphFamily f) {
    switch (f) {
        case GraphFamily::barabasi: return "barabasi";
        case GraphFamily::ladder: return "ladder";
        case GraphFamily::tree: return "tree";
        case GraphFamily::grid: return "grid";
        case GraphFamily::caveman: return "caveman";
        case GraphFamily::maze: return "maze";
    }
    return "?";
}

GraphFamily family_from_name(const std::string& name) {
    for (GraphFamily f : {GraphFamily::barabasi, GraphFamily::ladder, GraphFamily::tree,
                          GraphFamily::grid, GraphFamily::caveman, GraphFamily::maze})
        if (name == family_name(f)) return f;
    throw DataError("unknown graph family: " + name);
}

namespace {

int draw(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

int resolve(int given, std::mt19937_64& rng, int lo, int hi, const char* what) {
    if (given == -1) return draw(rng, lo, hi);
    if (given < lo || given > hi)
        throw std::invalid_argument(std::string("generate: ") + what + " out of range");
    return given;
}

// The constructors above hand out ids that encode geometry (row-major grids,
// level-order trees, attachment-order hubs), and the deterministic rank
// tie-break would read that geometry straight out of the ids: on a row-major
// grid, nearest-with-lowest-id sweeps rows almost perfectly. Generated graphs
// get a seeded shuffle so ids carry no structural hint.
Graph scramble_labels(const Graph& g, std::mt19937_64& rng) {
    int n = g.num_nodes();
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(g.num_edges()));
    for (auto [u, v] : g.edge_list())
        edges.emplace_back(perm[static_cast<std::size_t>(u)],
                           perm[static_cast<std::size_t>(v)]);
    return Graph::from_edges(n, edges);
}

}  // namespace

Graph make_barabasi(int n, int m, std::mt19937_64& rng) {
    if (m < 1 || n <= m) throw std::invalid_argument("barabasi: need n > m >= 1");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(n - m));
    // Endpoint list of all edges so far; sampling an entry uniformly is
    // sampling a node proportionally to its degree.
    std::vector<int> repeated;
    std::vector<int> targets(static_cast<std::size_t>(m));
    std::iota(targets.begin(), targets.end(), 0);
    for (int src = m; src < n; ++src) {
        for (int tgt : targets) {
            edges.emplace_back(src, tgt);
            repeated.push_back(src);
            repeated.push_back(tgt);
        }
        std::set<int> next;
        while (static_cast<int>(next.size()) < m)
            next.insert(repeated[std::uniform_int_distribution<std::size_t>(
                0, repeated.size() - 1)(rng)]);
        targets.assign(next.begin(), next.end());
    }
    return Graph::from_edges(n, edges);
}

Graph make_ladder(int rungs) {
    if (rungs < 2) throw std::invalid_argument("ladder: need at least 2 rungs");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < rungs; ++i) {
        edges.emplace_back(i, i + 1);
        edges.emplace_back(rungs + i, rungs + i + 1);
    }
    for (int i = 0; i < rungs; ++i) edges.emplace_back(i, rungs + i);
    return Graph::from_edges(2 * rungs, edges);
}

Graph make_balanced_tree(int branching, int height) {
    if (branching < 2 || height < 1) throw std::invalid_argument("tree: bad shape");
    std::int64_t n = 1, layer = 1;
    for (int d = 0; d < height; ++d) {
        layer *= branching;
        n += layer;
    }
    if (n > 1'000'000) throw std::invalid_argument("tree: too large");
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < static_cast<int>(n); ++v) edges.emplace_back(v, (v - 1) / branching);
    return Graph::from_edges(static_cast<int>(n), edges);
}

Graph make_grid(int rows, int cols) {
    if (rows < 2 || cols < 2) throw std::invalid_argument("grid: need at least 2x2");
    auto id = [cols](int r, int c) { return r * cols + c; };
    std::vector<std::pair<int, int>> edges;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
        }
    return Graph::from_edges(rows * cols, edges);
}

Graph make_connected_caveman(int cliques, int clique_size) {
    if (cliques < 2 || clique_size < 3)
        throw std::invalid_argument("caveman: need >= 2 cliques of size >= 3");
    int n = cliques * clique_size;
    std::vector<std::pair<int, int>> edges;
    for (int c = 0; c < cliques; ++c) {
        int base = c * clique_size;
        for (int i = 0; i < clique_size; ++i)
            for (int j = i + 1; j < clique_size; ++j) {
                // One clique edge is rewired to the previous cave, chaining
                // the caves into a cycle.
                if (i == 0 && j == 1) continue;
                edges.emplace_back(base + i, base + j);
            }
        edges.emplace_back(base, (base - 1 + n) % n);
    }
    return Graph::from_edges(n, edges);
}

Graph make_maze(int rows, int cols, int loop_edges, std::mt19937_64& rng) {
    if (rows < 2 || cols < 2) throw std::invalid_argument("maze: need at least 2x2");
    if (loop_edges < 0) throw std::invalid_argument("maze: negative loop count");
    int n = rows * cols;
    auto id = [cols](int r, int c) { return r * cols + c; };

    // Depth-first carving over the lattice yields a long-corridor spanning tree.
    std::vector<std::pair<int, int>> edges;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{draw(rng, 0, n - 1)};
    seen[static_cast<std::size_t>(stack[0])] = 1;
    constexpr int dr[4] = {-1, 1, 0, 0};
    constexpr int dc[4] = {0, 0, -1, 1};
    while (!stack.empty()) {
        int cur = stack.back();
        int r = cur / cols, c = cur % cols;
        int nbrs[4];
        int count = 0;
        for (int k = 0; k < 4; ++k) {
            int rr = r + dr[k], cc = c + dc[k];
            if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
            if (!seen[static_cast<std::size_t>(id(rr, cc))]) nbrs[count++] = id(rr, cc);
        }
        if (count == 0) {
            stack.pop_back();
            continue;
        }
        int nxt = nbrs[draw(rng, 0, count - 1)];
        seen[static_cast<std::size_t>(nxt)] = 1;
        edges.emplace_back(cur, nxt);
        stack.push_back(nxt);
    }

    // Unused lattice edges become loop candidates.
    std::set<std::pair<int, int>> used;
    for (auto [u, v] : edges) used.insert(std::minmax(u, v));
    std::vector<std::pair<int, int>> candidates;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols && !used.count(std::minmax(id(r, c), id(r, c + 1))))
                candidates.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows && !used.count(std::minmax(id(r, c), id(r + 1, c))))
                candidates.emplace_back(id(r, c), id(r + 1, c));
        }
    std::shuffle(candidates.begin(), candidates.end(), rng);
    int add = std::min<int>(loop_edges, static_cast<int>(candidates.size()));
    edges.insert(edges.end(), candidates.begin(), candidates.begin() + add);
    return Graph::from_edges(n, edges);
}

Graph generate(const GraphSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    switch (spec.family) {
        case GraphFamily::barabasi: {
            int n = resolve(spec.param_a, rng, 100, 199, "barabasi n");
            int m = spec.param_b == -1 ? 4 : spec.param_b;
            return scramble_labels(make_barabasi(n, m, rng), rng);
        }
        case GraphFamily::ladder:
            return scramble_labels(
                make_ladder(resolve(spec.param_a, rng, 100, 199, "ladder rungs")), rng);
        case GraphFamily::tree: {
            // Balanced shapes spanning 121..1365 nodes.
            static constexpr std::pair<int, int> shapes[] = {
                {3, 4}, {2, 6}, {2, 7}, {4, 4}, {3, 5}, {2, 8}, {2, 9}, {3, 6}, {4, 5}};
            if (spec.param_a != -1 && spec.param_b != -1)
                return scramble_labels(make_balanced_tree(spec.param_a, spec.param_b), rng);
            auto [r, h] = shapes[draw(rng, 0, 8)];
            return scramble_labels(make_balanced_tree(r, h), rng);
        }
        case GraphFamily::grid: {
            int rows = resolve(spec.param_a, rng, 8, 17, "grid rows");
            int cols = resolve(spec.param_b, rng, 8, 17, "grid cols");
            return scramble_labels(make_grid(rows, cols), rng);
        }
        case GraphFamily::caveman: {
            int l = resolve(spec.param_a, rng, 2, 4, "caveman cliques");
            int k = resolve(spec.param_b, rng, 30, 79, "caveman clique size");
            return scramble_labels(make_connected_caveman(l, k), rng);
        }
        case GraphFamily::maze: {
            int rows = resolve(spec.param_a, rng, 10, 15, "maze rows");
            int cols = resolve(spec.param_b, rng, 10, 15, "maze cols");
            int loops = resolve(spec.param_c, rng, 16, 32, "maze loops");
            return scramble_labels(make_maze(rows, cols, loops, rng), rng);
        }
    }
    throw std::invalid_argument("generate: unknown family");
}

SplitResult diagonal_split(const GeoGraph& geo) {
    const auto& g = geo.graph;
    if (g.num_nodes() == 0) throw DataError("diagonal_split: empty graph");
    double min_x = geo.coords[0].first, max_x = min_x;
    double min_y = geo.coords[0].second, max_y = min_y;
    for (auto [x, y] : geo.coords) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    }
    if (max_x == min_x || max_y == min_y)
        throw DataError("diagonal_split: degenerate bounding box");

    // Side of the min-corner to max-corner diagonal. Points exactly on the
    // line alternate sides in index order, so symmetric inputs split evenly.
    std::vector<char> side(static_cast<std::size_t>(g.num_nodes()));
    double dx = max_x - min_x, dy = max_y - min_y;
    char next_tie = 1;
    for (int v = 0; v < g.num_nodes(); ++v) {
        auto [x, y] = geo.coords[static_cast<std::size_t>(v)];
        double cross = dx * (y - min_y) - dy * (x - min_x);
        if (cross > 0)
            side[static_cast<std::size_t>(v)] = 1;
        else if (cross < 0)
            side[static_cast<std::size_t>(v)] = 0;
        else
            side[static_cast<std::size_t>(v)] = next_tie ^= 1;
    }

    auto extract = [&](char want) {
        std::vector<int> local(static_cast<std::size_t>(g.num_nodes()), -1);
        std::vector<NodeId> members;
        for (int v = 0; v < g.num_nodes(); ++v)
            if (side[static_cast<std::size_t>(v)] == want) {
                local[static_cast<std::size_t>(v)] = static_cast<int>(members.size());
                members.push_back(v);
            }
        std::vector<std::pair<int, int>> edges;
        for (auto [u, v] : g.edge_list())
            if (side[static_cast<std::size_t>(u)] == want &&
                side[static_cast<std::size_t>(v)] == want)
                edges.emplace_back(local[static_cast<std::size_t>(u)],
                                   local[static_cast<std::size_t>(v)]);
        return largest_component(
                   Graph::from_edges(static_cast<int>(members.size()), edges))
            .graph;
    };

    Graph a = extract(0), b = extract(1);
    if (a.num_nodes() == 0 || b.num_nodes() == 0)
        throw DataError("diagonal_split: all nodes on one side of the diagonal");
    if (a.num_nodes() >= b.num_nodes()) return {std::move(a), std::move(b)};
    return {std::move(b), std::move(a)};
}

std::vector<EvalPair> Dataset::eval_pairs() const {
    std::vector<EvalPair> out;
    for (int gi = 0; gi < static_cast<int>(test.size()); ++gi)
        for (NodeId s : test_sources[static_cast<std::size_t>(gi)]) out.push_back({gi, s});
    return out;
}

namespace {

void fix_sources(Dataset& ds, int n_eval, std::mt19937_64& rng) {
    ds.test_sources.assign(ds.test.size(), {});
    int n_test = static_cast<int>(ds.test.size());
    if (n_test >= n_eval) {
        // One source per sampled graph.
        std::vector<int> idx(static_cast<std::size_t>(n_test));
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        for (int i = 0; i < n_eval; ++i) {
            int gi = idx[static_cast<std::size_t>(i)];
            int n = ds.test[static_cast<std::size_t>(gi)].num_nodes();
            ds.test_sources[static_cast<std::size_t>(gi)].push_back(draw(rng, 0, n - 1));
        }
    } else {
        for (int i = 0; i < n_eval; ++i) {
            int gi = draw(rng, 0, n_test - 1);
            int n = ds.test[static_cast<std::size_t>(gi)].num_nodes();
            ds.test_sources[static_cast<std::size_t>(gi)].push_back(draw(rng, 0, n - 1));
        }
    }
}

}  // namespace

Dataset make_dataset(const std::vector<Graph>& graphs, double test_ratio, int n_eval,
                     std::uint64_t seed) {
    if (graphs.empty()) throw std::invalid_argument("make_dataset: no graphs");
    if (!(test_ratio > 0.0 && test_ratio < 1.0))
        throw std::invalid_argument("make_dataset: test_ratio must be in (0,1)");
    if (n_eval < 1) throw std::invalid_argument("make_dataset: n_eval must be positive");
    int n = static_cast<int>(graphs.size());
    int n_test = static_cast<int>(std::ceil(test_ratio * n));
    if (n - n_test < 1)
        throw std::invalid_argument("make_dataset: not enough graphs to split");

    std::mt19937_64 rng(seed);
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);

    Dataset ds;
    for (int i = 0; i < n; ++i) {
        const Graph& g = graphs[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        (i < n - n_test ? ds.train : ds.test).push_back(g);
    }
    fix_sources(ds, n_eval, rng);
    return ds;
}

Dataset make_dataset_presplit(std::vector<Graph> train, std::vector<Graph> test, int n_eval,
                              std::uint64_t seed) {
    if (train.empty() || test.empty())
        throw std::invalid_argument("make_dataset_presplit: empty split");
    Dataset ds;
    ds.train = std::move(train);
    ds.test = std::move(test);
    std::mt19937_64 rng(seed);
    fix_sources(ds, n_eval, rng);
    return ds;
}

}  // namespace oge
