#include "oge/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace oge {

Graph Graph::from_edges(int num_nodes, std::span<const std::pair<int, int>> edges) {
    if (num_nodes < 0) throw std::invalid_argument("graph: negative node count");
    Graph g;
    g.adj_.assign(static_cast<std::size_t>(num_nodes), {});
    for (const auto& [u, v] : edges) {
        if (u < 0 || u >= num_nodes || v < 0 || v >= num_nodes)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (u == v) continue;
        g.adj_[static_cast<std::size_t>(u)].push_back(v);
        g.adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    std::int64_t total = 0;
    for (auto& nbrs : g.adj_) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
        total += static_cast<std::int64_t>(nbrs.size());
    }
    g.num_edges_ = total / 2;
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    const auto& nbrs = adj_[static_cast<std::size_t>(u)];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

bool Graph::is_connected() const {
    if (adj_.empty()) return true;
    auto d = bfs_distances(adj_, 0);
    return std::none_of(d.begin(), d.end(), [](int x) { return x == kUnreachable; });
}

std::vector<std::pair<NodeId, NodeId>> Graph::edge_list() const {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(static_cast<std::size_t>(num_edges_));
    for (NodeId u = 0; u < num_nodes(); ++u)
        for (NodeId v : adj_[static_cast<std::size_t>(u)])
            if (u < v) out.emplace_back(u, v);
    return out;
}

std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int src) {
    std::vector<int> dist(adj.size(), kUnreachable);
    if (src < 0 || src >= static_cast<int>(adj.size()))
        throw std::invalid_argument("bfs: source out of range");
    std::queue<int> q;
    dist[static_cast<std::size_t>(src)] = 0;
    q.push(src);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (dist[static_cast<std::size_t>(v)] == kUnreachable) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                q.push(v);
            }
        }
    }
    return dist;
}

std::vector<int> distances_from(const Graph& g, NodeId src) {
    return bfs_distances(g.adjacency(), src);
}

std::optional<std::vector<NodeId>> shortest_path(const Graph& g, NodeId src, NodeId dst) {
    if (src < 0 || src >= g.num_nodes() || dst < 0 || dst >= g.num_nodes())
        throw std::invalid_argument("shortest_path: node out of range");
    if (src == dst) return std::vector<NodeId>{src};
    std::vector<int> parent(static_cast<std::size_t>(g.num_nodes()), -2);
    std::queue<NodeId> q;
    parent[static_cast<std::size_t>(src)] = -1;
    q.push(src);
    while (!q.empty()) {
        NodeId u = q.front();
        q.pop();
        for (NodeId v : g.neighbors(u)) {
            if (parent[static_cast<std::size_t>(v)] != -2) continue;
            parent[static_cast<std::size_t>(v)] = u;
            if (v == dst) {
                std::vector<NodeId> path{dst};
                for (NodeId w = u; w != -1; w = parent[static_cast<std::size_t>(w)])
                    path.push_back(w);
                std::reverse(path.begin(), path.end());
                return path;
            }
            q.push(v);
        }
    }
    return std::nullopt;
}

NearestResult nearest_in_adjacency(const std::vector<std::vector<int>>& adj, int src,
                                   const std::vector<char>& is_target,
                                   std::span<const int> rank) {
    if (src < 0 || src >= static_cast<int>(adj.size()))
        throw std::invalid_argument("nearest: source out of range");
    auto rank_of = [&rank](int v) { return rank.empty() ? v : rank[static_cast<std::size_t>(v)]; };

    std::vector<char> seen(adj.size(), 0);
    std::vector<int> layer{src};
    seen[static_cast<std::size_t>(src)] = 1;
    int depth = 0;
    while (!layer.empty()) {
        int best = -1;
        for (int v : layer)
            if (is_target[static_cast<std::size_t>(v)] && (best == -1 || rank_of(v) < rank_of(best)))
                best = v;
        if (best != -1) return {best, depth};
        std::vector<int> next;
        for (int u : layer)
            for (int v : adj[static_cast<std::size_t>(u)])
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    next.push_back(v);
                }
        layer = std::move(next);
        ++depth;
    }
    throw std::runtime_error("nearest: no reachable target");
}

ComponentResult largest_component(const Graph& g) {
    std::vector<int> comp(static_cast<std::size_t>(g.num_nodes()), -1);
    int n_comp = 0;
    std::vector<std::int64_t> sizes;
    for (NodeId s = 0; s < g.num_nodes(); ++s) {
        if (comp[static_cast<std::size_t>(s)] != -1) continue;
        std::int64_t size = 0;
        std::vector<NodeId> stack{s};
        comp[static_cast<std::size_t>(s)] = n_comp;
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            ++size;
            for (NodeId v : g.neighbors(u))
                if (comp[static_cast<std::size_t>(v)] == -1) {
                    comp[static_cast<std::size_t>(v)] = n_comp;
                    stack.push_back(v);
                }
        }
        sizes.push_back(size);
        ++n_comp;
    }
    ComponentResult out;
    if (n_comp == 0) return out;
    int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::vector<int> local(static_cast<std::size_t>(g.num_nodes()), -1);
    for (NodeId v = 0; v < g.num_nodes(); ++v)
        if (comp[static_cast<std::size_t>(v)] == best) {
            local[static_cast<std::size_t>(v)] = static_cast<int>(out.kept.size());
            out.kept.push_back(v);
        }
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : g.edge_list())
        if (comp[static_cast<std::size_t>(u)] == best)
            edges.emplace_back(local[static_cast<std::size_t>(u)],
                               local[static_cast<std::size_t>(v)]);
    out.graph = Graph::from_edges(static_cast<int>(out.kept.size()), edges);
    return out;
}

NearestResult nearest_of_set(const Graph& g, NodeId src, std::span<const NodeId> targets) {
    if (targets.empty()) throw std::invalid_argument("nearest_of_set: empty target set");
    std::vector<char> is_target(static_cast<std::size_t>(g.num_nodes()), 0);
    for (NodeId t : targets) {
        if (t < 0 || t >= g.num_nodes())
            throw std::invalid_argument("nearest_of_set: target out of range");
        is_target[static_cast<std::size_t>(t)] = 1;
    }
    return nearest_in_adjacency(g.adjacency(), src, is_target);
}

}  // namespace oge
