#include "oge/dataset_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "oge/error.hpp"

namespace oge {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& why) {
    throw DataError(path + ":" + std::to_string(line) + ": " + why);
}

}  // namespace

GeoGraph load_geo_graph(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open: " + path);
    std::unordered_map<long long, int> dense;
    std::vector<std::pair<double, double>> coords;
    std::vector<std::pair<int, int>> edges;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        char tag;
        ss >> tag;
        if (tag == 'N') {
            long long id;
            double x, y;
            if (!(ss >> id >> x >> y)) parse_fail(path, lineno, "expected 'N id x y'");
            if (dense.count(id)) parse_fail(path, lineno, "duplicate node id");
            dense[id] = static_cast<int>(coords.size());
            coords.emplace_back(x, y);
        } else if (tag == 'E') {
            long long u, v;
            if (!(ss >> u >> v)) parse_fail(path, lineno, "expected 'E id_u id_v'");
            auto iu = dense.find(u), iv = dense.find(v);
            if (iu == dense.end() || iv == dense.end())
                parse_fail(path, lineno, "edge references unknown node");
            edges.emplace_back(iu->second, iv->second);
        } else {
            parse_fail(path, lineno, "unknown record type");
        }
    }
    if (coords.empty()) throw DataError("empty graph: " + path);
    Graph full = Graph::from_edges(static_cast<int>(coords.size()), edges);
    ComponentResult comp = largest_component(full);
    GeoGraph geo;
    geo.graph = std::move(comp.graph);
    geo.coords.reserve(comp.kept.size());
    for (NodeId old : comp.kept) geo.coords.push_back(coords[static_cast<std::size_t>(old)]);
    return geo;
}

void save_geo_graph(const std::string& path, const GeoGraph& geo) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot write: " + path);
    os.precision(17);
    for (int v = 0; v < geo.graph.num_nodes(); ++v)
        os << "N " << v << ' ' << geo.coords[static_cast<std::size_t>(v)].first << ' '
           << geo.coords[static_cast<std::size_t>(v)].second << '\n';
    for (auto [u, v] : geo.graph.edge_list()) os << "E " << u << ' ' << v << '\n';
    if (!os) throw DataError("write failed: " + path);
}

Graph load_graph(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open: " + path);
    std::string line;
    int lineno = 0, n = -1;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        char tag;
        ss >> tag;
        if (tag == 'V') {
            if (n != -1) parse_fail(path, lineno, "repeated header");
            if (!(ss >> n) || n < 0) parse_fail(path, lineno, "expected 'V count'");
        } else if (tag == 'E') {
            int u, v;
            if (!(ss >> u >> v)) parse_fail(path, lineno, "expected 'E u v'");
            if (n == -1) parse_fail(path, lineno, "edge before 'V' header");
            if (u < 0 || u >= n || v < 0 || v >= n)
                parse_fail(path, lineno, "edge endpoint out of range");
            edges.emplace_back(u, v);
        } else {
            parse_fail(path, lineno, "unknown record type");
        }
    }
    if (n == -1) throw DataError("missing 'V' header: " + path);
    return Graph::from_edges(n, edges);
}

void save_graph(const std::string& path, const Graph& g) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot write: " + path);
    os << "V " << g.num_nodes() << '\n';
    for (auto [u, v] : g.edge_list()) os << "E " << u << ' ' << v << '\n';
    if (!os) throw DataError("write failed: " + path);
}

void save_dataset(const std::string& dir, const Dataset& ds) {
    fs::create_directories(dir);
    std::ofstream os(fs::path(dir) / "manifest.txt");
    if (!os) throw DataError("cannot write manifest in: " + dir);
    auto file_of = [](const char* role, int i) {
        return std::string(role) + "_" + std::to_string(i) + ".graph";
    };
    for (int i = 0; i < static_cast<int>(ds.train.size()); ++i) {
        std::string name = file_of("train", i);
        save_graph((fs::path(dir) / name).string(), ds.train[static_cast<std::size_t>(i)]);
        os << "train " << name << '\n';
    }
    for (int i = 0; i < static_cast<int>(ds.test.size()); ++i) {
        std::string name = file_of("test", i);
        save_graph((fs::path(dir) / name).string(), ds.test[static_cast<std::size_t>(i)]);
        os << "test " << name;
        for (NodeId s : ds.test_sources[static_cast<std::size_t>(i)]) os << ' ' << s;
        os << '\n';
    }
    if (!os) throw DataError("manifest write failed in: " + dir);
}

Dataset load_dataset(const std::string& dir) {
    std::string manifest = (fs::path(dir) / "manifest.txt").string();
    std::ifstream is(manifest);
    if (!is) throw DataError("cannot open: " + manifest);
    Dataset ds;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string role, name;
        if (!(ss >> role >> name)) parse_fail(manifest, lineno, "expected 'role file ...'");
        Graph g = load_graph((fs::path(dir) / name).string());
        if (role == "train") {
            ds.train.push_back(std::move(g));
        } else if (role == "test") {
            std::vector<NodeId> sources;
            NodeId s;
            while (ss >> s) {
                if (s < 0 || s >= g.num_nodes())
                    parse_fail(manifest, lineno, "source out of range");
                sources.push_back(s);
            }
            ds.test.push_back(std::move(g));
            ds.test_sources.push_back(std::move(sources));
        } else {
            parse_fail(manifest, lineno, "unknown role: " + role);
        }
    }
    if (ds.test.empty()) throw DataError("dataset has no test graphs: " + dir);
    return ds;
}

}  // namespace oge
