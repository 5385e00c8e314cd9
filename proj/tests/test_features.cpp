#include "doctest.h"

#include <deque>

#include "oge/env.hpp"
#include "oge/features.hpp"
#include "oge/graph.hpp"

using namespace oge;

namespace {

Graph path_graph(int n) {
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph::from_edges(n, e);
}

}  // namespace

TEST_CASE("base frame marks visited, frontier and current exclusively") {
    Graph g = path_graph(4);
    ExplorationState s(g, 0);
    FeatureMatrix x = base_features(s.view(), false);
    REQUIRE(x.rows() == 2);
    REQUIRE(x.cols() == 3);
    // Source row: visited and current.
    CHECK(x(0, 0) == 1.0f);
    CHECK(x(0, 1) == 0.0f);
    CHECK(x(0, 2) == 1.0f);
    // Frontier row.
    CHECK(x(1, 0) == 0.0f);
    CHECK(x(1, 1) == 1.0f);
    CHECK(x(1, 2) == 0.0f);

    s.step(1);
    x = base_features(s.view(), false);
    REQUIRE(x.rows() == 3);
    CHECK(x(0, 2) == 0.0f);
    CHECK(x(1, 2) == 1.0f);
    // Exactly one current mark; visited+frontier partition all rows.
    CHECK(x.col(2).sum() == 1.0f);
    for (int r = 0; r < x.rows(); ++r) CHECK(x(r, 0) + x(r, 1) == 1.0f);
}

TEST_CASE("optional channel tags the nearest frontier node") {
    Graph g = path_graph(5);
    ExplorationState s(g, 2);
    s.step(3);
    FeatureMatrix x = base_features(s.view(), true);
    REQUIRE(x.cols() == 4);
    CHECK(x.col(3).sum() == 1.0f);
    // Frontier is {1 (2 hops), 4 (adjacent)}; the adjacent one is tagged.
    CHECK(x(s.local_of(4), 3) == 1.0f);
}

TEST_CASE("history stack pads missing rows of older frames with zeros") {
    Graph g = path_graph(4);
    ExplorationState s(g, 0);
    std::deque<FeatureMatrix> frames;
    frames.push_back(base_features(s.view(), false));
    s.step(1);
    frames.push_back(base_features(s.view(), false));
    FeatureMatrix x = stack_history(frames);
    REQUIRE(x.rows() == 3);
    REQUIRE(x.cols() == 6);
    // Node 2 did not exist in the old frame: all old channels zero.
    CHECK(x.row(2).head(3).cwiseAbs().sum() == 0.0f);
    CHECK(x(2, 4) == 1.0f);  // currently on the frontier
    // Old frame occupies the leading columns.
    CHECK(x(0, 0) == 1.0f);
    CHECK(x(0, 2) == 1.0f);
    CHECK(x(1, 1) == 1.0f);
    // New frame: node 1 visited and current.
    CHECK(x(1, 3) == 1.0f);
    CHECK(x(1, 5) == 1.0f);
}

TEST_CASE("stack_history rejects empty input and shrinking frames") {
    CHECK_THROWS(stack_history({}));
    std::deque<FeatureMatrix> bad;
    bad.push_back(FeatureMatrix::Zero(3, 3));
    bad.push_back(FeatureMatrix::Zero(2, 3));
    CHECK_THROWS(stack_history(bad));
}

TEST_CASE("range shift is a pure half-unit translation") {
    FeatureMatrix x(2, 2);
    x << 0, 1, 1, 0;
    FeatureMatrix y = shift_range(x);
    CHECK(y(0, 0) == -0.5f);
    CHECK(y(0, 1) == 0.5f);
    CHECK(y(1, 0) == 0.5f);
    CHECK(y(1, 1) == -0.5f);
}

TEST_CASE("measurement is the exploration rate") {
    Graph g = path_graph(3);
    ExplorationState s(g, 0);
    CHECK(measurement(s) == 0.0);
    s.step(1);
    CHECK(measurement(s) == 1.0);
}

TEST_CASE("feature history: first input zero-pads the missing oldest frame") {
    Graph g = path_graph(3);
    ExplorationState s(g, 0);
    FeatureHistory h({.with_nn_channel = false, .history = 2, .shift = false});
    h.push(s.view());
    FeatureMatrix x = h.input();
    REQUIRE(x.rows() == 2);
    REQUIRE(x.cols() == 6);
    CHECK(x.leftCols(3).cwiseAbs().sum() == 0.0f);  // padded slot
    CHECK(x(0, 3) == 1.0f);
    CHECK(x(0, 5) == 1.0f);
    CHECK(x(1, 4) == 1.0f);
}

TEST_CASE("feature history keeps only the newest frames and shifts on demand") {
    Graph g = path_graph(5);
    ExplorationState s(g, 0);
    FeatureHistory h({.with_nn_channel = false, .history = 2, .shift = true});
    h.push(s.view());
    s.step(1);
    h.push(s.view());
    s.step(2);
    h.push(s.view());
    FeatureMatrix x = h.input();
    REQUIRE(x.rows() == 4);
    REQUIRE(x.cols() == 6);
    // Leading columns hold the t=1 frame (node1 visited+current), not t=0.
    CHECK(x(1, 0) == 0.5f);
    CHECK(x(1, 2) == 0.5f);
    CHECK(x(0, 2) == -0.5f);
    // Newest frame: node2 current.
    CHECK(x(2, 5) == 0.5f);
    // Every entry is +-0.5 after the shift.
    CHECK((x.array().abs() == 0.5f).all());

    h.reset();
    CHECK_THROWS(h.input());
}

TEST_CASE("history frames decode losslessly back to the marker sets") {
    // The stacked input at longer history must still identify the state:
    // newest channels give current/visited/frontier exactly.
    Graph g = path_graph(6);
    ExplorationState s(g, 2);
    FeatureHistory h({.with_nn_channel = false, .history = 3, .shift = true});
    h.push(s.view());
    s.step(3);
    h.push(s.view());
    s.step(1);
    h.push(s.view());
    FeatureMatrix x = h.input();
    StateView v = s.view();
    int c = 3 * 2;  // newest frame offset with 3 channels
    for (int r = 0; r < x.rows(); ++r) {
        bool visited = x(r, c + 0) > 0.0f;
        bool frontier = x(r, c + 1) > 0.0f;
        bool current = x(r, c + 2) > 0.0f;
        CHECK(visited == (v.visited[static_cast<std::size_t>(r)] != 0));
        CHECK(frontier ==
              (std::find(v.frontier.begin(), v.frontier.end(), r) != v.frontier.end()));
        CHECK(current == (r == v.current));
    }
}
