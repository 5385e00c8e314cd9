#pragma once

#include <string>
#include <vector>

#include "oge/generators.hpp"
#include "oge/graph.hpp"

namespace oge {

// Text format: lines "N id x y" then "E id_u id_v". Arbitrary ids are
// relabeled densely; directed/duplicate edges collapse; the graph is reduced
// to its largest connected component. Throws DataError with a line number on
// malformed input.
GeoGraph load_geo_graph(const std::string& path);
void save_geo_graph(const std::string& path, const GeoGraph& geo);

// Plain graph files: "V n" header then "E u v" lines.
Graph load_graph(const std::string& path);
void save_graph(const std::string& path, const Graph& g);

// Dataset manifest: a directory of graph files plus a line-oriented index
//   train <file>
//   test <file> <source> <source> ...
void save_dataset(const std::string& dir, const Dataset& ds);
Dataset load_dataset(const std::string& dir);

}  // namespace oge
