#pragma once

// Brute-force d-separation: enumerate every simple path of the skeleton and
// apply the blocking rule to each one. Bidirected edges become explicit
// latent parents. Shares no code with the library.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

struct Graph {
    int n = 0;  // observed vertices 0..n-1
    std::vector<std::pair<int, int>> directed;
    std::vector<std::pair<int, int>> bidirected;
};

namespace detail {

struct Expanded {
    int size = 0;
    std::vector<std::vector<bool>> arrow;  // arrow[a][b]: a -> b

    bool adjacent(int a, int b) const { return arrow[a][b] || arrow[b][a]; }

    std::vector<bool> descendants_or_self(int v) const {
        std::vector<bool> seen(size, false);
        std::vector<int> stack{v};
        seen[v] = true;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int w = 0; w < size; ++w) {
                if (arrow[u][w] && !seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
            }
        }
        return seen;
    }
};

inline Expanded expand(const Graph& g) {
    Expanded e;
    e.size = g.n + static_cast<int>(g.bidirected.size());
    e.arrow.assign(e.size, std::vector<bool>(e.size, false));
    for (auto [a, b] : g.directed) e.arrow[a][b] = true;
    int latent = g.n;
    for (auto [a, b] : g.bidirected) {
        e.arrow[latent][a] = true;
        e.arrow[latent][b] = true;
        ++latent;
    }
    return e;
}

inline bool path_open(const Expanded& e, const std::vector<int>& path, const std::vector<bool>& given) {
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        int prev = path[i - 1], mid = path[i], next = path[i + 1];
        bool collider = e.arrow[prev][mid] && e.arrow[next][mid];
        if (collider) {
            auto desc = e.descendants_or_self(mid);
            bool activated = false;
            for (int v = 0; v < e.size; ++v) activated = activated || (desc[v] && given[v]);
            if (!activated) return false;
        } else if (given[mid]) {
            return false;
        }
    }
    return true;
}

inline bool search(const Expanded& e, std::vector<int>& path, std::vector<bool>& on_path, int target,
                   const std::vector<bool>& given) {
    int last = path.back();
    if (last == target) return path_open(e, path, given);
    for (int v = 0; v < e.size; ++v) {
        if (on_path[v] || !e.adjacent(last, v)) continue;
        path.push_back(v);
        on_path[v] = true;
        bool found = search(e, path, on_path, target, given);
        on_path[v] = false;
        path.pop_back();
        if (found) return true;
    }
    return false;
}

}  // namespace detail

/// True iff every path between a and b (single vertices) is blocked by `given`.
inline bool d_separated(const Graph& g, int a, int b, const std::vector<int>& given_list) {
    auto e = detail::expand(g);
    std::vector<bool> given(e.size, false);
    for (int v : given_list) given[v] = true;
    std::vector<int> path{a};
    std::vector<bool> on_path(e.size, false);
    on_path[a] = true;
    return !detail::search(e, path, on_path, b, given);
}

/// Random DAG on n vertices over a shuffled order, plus random bidirected edges.
inline Graph random_graph(int n, std::mt19937_64& rng, int edge_permille = 350, int bidirected_permille = 100) {
    Graph g;
    g.n = n;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng() % static_cast<std::uint64_t>(i + 1)]);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (static_cast<int>(rng() % 1000) < edge_permille) g.directed.emplace_back(order[i], order[j]);
            if (static_cast<int>(rng() % 1000) < bidirected_permille) g.bidirected.emplace_back(order[i], order[j]);
        }
    }
    return g;
}

inline std::string name(int v) { return "V" + std::to_string(v); }

}  // namespace oracle
