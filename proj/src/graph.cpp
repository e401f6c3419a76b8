#include "proxycause/graph.hpp"

#include "proxycause/errors.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace proxycause {

namespace {

void check_name(const std::string& v) {
    if (v.empty()) throw PreconditionError("vertex names must be non-empty");
    if (v.find(',') != std::string::npos) {
        throw PreconditionError("vertex name '" + v + "' contains a comma");
    }
}

std::string join(const VertexSet& s) {
    std::string out = "{";
    for (const auto& v : s) {
        if (out.size() > 1) out += ",";
        out += v;
    }
    return out + "}";
}

std::string render_path(const Path& p) {
    std::string out;
    for (const auto& v : p) {
        if (!out.empty()) out += " - ";
        out += v;
    }
    return out;
}

// Incidence view of a diagram with no bidirected edges.
struct Incidence {
    // (neighbour, true if the edge points from the vertex to the neighbour)
    std::vector<std::vector<std::pair<std::size_t, bool>>> adj;
    std::map<std::string, std::size_t> index;
    std::vector<std::string> names;
};

Incidence incidence_of(const CausalDiagram& g) {
    Incidence inc;
    inc.names = g.vertices();
    for (std::size_t i = 0; i < inc.names.size(); ++i) inc.index[inc.names[i]] = i;
    inc.adj.resize(inc.names.size());
    for (const auto& [t, h] : g.directed_edges()) {
        auto ti = inc.index.at(t);
        auto hi = inc.index.at(h);
        inc.adj[ti].emplace_back(hi, true);
        inc.adj[hi].emplace_back(ti, false);
    }
    return inc;
}

// C together with every ancestor of a vertex in C.
std::vector<bool> ancestral_closure(const CausalDiagram& g, const Incidence& inc,
                                    const VertexSet& c) {
    std::vector<bool> out(inc.names.size(), false);
    for (const auto& v : c) {
        out[inc.index.at(v)] = true;
        for (const auto& a : g.ancestors(v)) out[inc.index.at(a)] = true;
    }
    return out;
}

void check_vertices(const CausalDiagram& g, const VertexSet& s) {
    for (const auto& v : s) {
        if (!g.has_vertex(v)) throw UnknownVertexError("unknown vertex '" + v + "'");
    }
}

void check_disjoint(const VertexSet& a, const VertexSet& b, const char* what) {
    for (const auto& v : a) {
        if (b.count(v)) {
            throw PreconditionError(std::string("vertex sets must be disjoint (") + what +
                                    " share '" + v + "')");
        }
    }
}

// Reachability over (vertex, direction) states on a graph without bidirected
// edges. Returns the vertices outside C connected to A by an active trail.
std::vector<bool> reachable(const CausalDiagram& g, const VertexSet& a, const VertexSet& c) {
    const Incidence inc = incidence_of(g);
    const auto anc = ancestral_closure(g, inc, c);
    std::vector<bool> in_c(inc.names.size(), false);
    for (const auto& v : c) in_c[inc.index.at(v)] = true;

    // up: arrived from a child (or start); down: arrived from a parent.
    std::vector<std::array<bool, 2>> seen(inc.names.size(), {false, false});
    std::vector<bool> result(inc.names.size(), false);
    std::deque<std::pair<std::size_t, bool>> queue;  // (vertex, going_up)
    for (const auto& v : a) queue.emplace_back(inc.index.at(v), true);

    while (!queue.empty()) {
        auto [v, up] = queue.front();
        queue.pop_front();
        if (seen[v][up ? 0 : 1]) continue;
        seen[v][up ? 0 : 1] = true;
        if (!in_c[v]) result[v] = true;

        if (up && !in_c[v]) {
            for (auto [w, out] : inc.adj[v]) queue.emplace_back(w, !out);
        } else if (!up) {
            if (!in_c[v]) {
                for (auto [w, out] : inc.adj[v]) {
                    if (out) queue.emplace_back(w, false);
                }
            }
            if (anc[v]) {
                for (auto [w, out] : inc.adj[v]) {
                    if (!out) queue.emplace_back(w, true);
                }
            }
        }
    }
    return result;
}

// Depth-first search for one open simple path from any source to any target.
// With into_source set, only paths whose first edge points into the source
// are considered.
std::optional<Path> search_open_path(const CausalDiagram& expanded, const VertexSet& sources,
                                     const VertexSet& targets, const VertexSet& c,
                                     bool into_source) {
    const Incidence inc = incidence_of(expanded);
    const auto anc = ancestral_closure(expanded, inc, c);
    std::vector<bool> in_c(inc.names.size(), false);
    for (const auto& v : c) in_c[inc.index.at(v)] = true;
    std::vector<bool> is_target(inc.names.size(), false);
    for (const auto& v : targets) is_target[inc.index.at(v)] = true;

    std::vector<std::size_t> path;
    std::vector<bool> on_path(inc.names.size(), false);

    // arrow_in: the edge used to reach v points into v.
    std::function<bool(std::size_t, bool)> dfs = [&](std::size_t v, bool arrow_in) -> bool {
        if (path.size() > 1 && is_target[v]) return true;
        for (auto [w, out] : inc.adj[v]) {
            if (on_path[w]) continue;
            if (path.size() == 1) {
                if (into_source && out) continue;
            } else {
                const bool collider = arrow_in && !out;
                const bool blocked = collider ? !anc[v] : in_c[v];
                if (blocked) continue;
            }
            path.push_back(w);
            on_path[w] = true;
            if (dfs(w, out)) return true;
            on_path[w] = false;
            path.pop_back();
        }
        return false;
    };

    for (const auto& s : sources) {
        auto si = inc.index.at(s);
        path.assign(1, si);
        std::fill(on_path.begin(), on_path.end(), false);
        on_path[si] = true;
        if (dfs(si, false)) {
            Path out;
            for (auto i : path) out.push_back(inc.names[i]);
            return out;
        }
    }
    return std::nullopt;
}

// Directed path from x to y avoiding `avoid`, if one exists.
std::optional<Path> directed_path_avoiding(const CausalDiagram& g, const std::string& x,
                                           const std::string& y, const VertexSet& avoid) {
    std::map<std::string, std::string> parent;
    std::deque<std::string> queue{x};
    parent[x] = x;
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        if (v == y) {
            Path p{y};
            while (p.back() != x) p.push_back(parent[p.back()]);
            std::reverse(p.begin(), p.end());
            return p;
        }
        for (const auto& w : g.children(v)) {
            if (avoid.count(w) || parent.count(w)) continue;
            parent[w] = v;
            queue.push_back(w);
        }
    }
    return std::nullopt;
}

void check_criterion_args(const CausalDiagram& g, const std::string& x, const std::string& y,
                          const VertexSet& z) {
    check_vertices(g, {x, y});
    check_vertices(g, z);
    if (x == y) throw PreconditionError("exposure and outcome must differ");
    if (z.count(x) || z.count(y)) {
        throw PreconditionError("adjustment set must not contain '" + x + "' or '" + y + "'");
    }
    if (g.is_descendant(x, y)) {
        throw PreconditionError("'" + x + "' is a descendant of '" + y + "'");
    }
}

}  // namespace

CausalDiagram CausalDiagram::build(std::vector<std::string> vertices, std::vector<Edge> directed,
                                   std::vector<Edge> bidirected) {
    CausalDiagram g;
    std::map<std::string, std::size_t> index;
    for (const auto& v : vertices) {
        check_name(v);
        if (!index.emplace(v, index.size()).second) {
            throw PreconditionError("duplicate vertex '" + v + "'");
        }
    }
    auto lookup = [&](const std::string& v) {
        auto it = index.find(v);
        if (it == index.end()) throw UnknownVertexError("edge endpoint '" + v + "' is not a vertex");
        return it->second;
    };

    g.vertices_ = std::move(vertices);
    g.children_.resize(g.vertices_.size());
    g.parents_.resize(g.vertices_.size());

    std::set<Edge> seen_directed;
    for (const auto& [t, h] : directed) {
        auto ti = lookup(t);
        auto hi = lookup(h);
        if (ti == hi) throw CycleError("self-loop on '" + t + "'");
        if (!seen_directed.insert({t, h}).second) {
            throw PreconditionError("duplicate edge " + t + "->" + h);
        }
        g.children_[ti].push_back(hi);
        g.parents_[hi].push_back(ti);
    }
    std::set<Edge> seen_bidirected;
    for (const auto& [a, b] : bidirected) {
        lookup(a);
        lookup(b);
        if (a == b) throw PreconditionError("bidirected self-loop on '" + a + "'");
        Edge key = a < b ? Edge{a, b} : Edge{b, a};
        if (!seen_bidirected.insert(key).second) {
            throw PreconditionError("duplicate bidirected edge " + a + "<->" + b);
        }
    }
    g.directed_ = std::move(directed);
    g.bidirected_ = std::move(bidirected);

    // Kahn's algorithm; ties resolved by declaration order.
    std::vector<std::size_t> indegree(g.vertices_.size());
    for (std::size_t v = 0; v < g.vertices_.size(); ++v) indegree[v] = g.parents_[v].size();
    std::vector<bool> done(g.vertices_.size(), false);
    for (std::size_t round = 0; round < g.vertices_.size(); ++round) {
        std::size_t pick = g.vertices_.size();
        for (std::size_t v = 0; v < g.vertices_.size(); ++v) {
            if (!done[v] && indegree[v] == 0) { pick = v; break; }
        }
        if (pick == g.vertices_.size()) {
            std::string cyc;
            for (std::size_t v = 0; v < g.vertices_.size(); ++v) {
                if (!done[v]) cyc += (cyc.empty() ? "" : ",") + g.vertices_[v];
            }
            throw CycleError("directed cycle among {" + cyc + "}");
        }
        done[pick] = true;
        g.topo_.push_back(g.vertices_[pick]);
        for (auto c : g.children_[pick]) --indegree[c];
    }
    return g;
}

std::size_t CausalDiagram::index_of(const std::string& v) const {
    auto it = std::find(vertices_.begin(), vertices_.end(), v);
    if (it == vertices_.end()) throw UnknownVertexError("unknown vertex '" + v + "'");
    return static_cast<std::size_t>(it - vertices_.begin());
}

bool CausalDiagram::has_vertex(const std::string& v) const {
    return std::find(vertices_.begin(), vertices_.end(), v) != vertices_.end();
}

VertexSet CausalDiagram::parents(const std::string& v) const {
    VertexSet out;
    for (auto p : parents_[index_of(v)]) out.insert(vertices_[p]);
    return out;
}

VertexSet CausalDiagram::children(const std::string& v) const {
    VertexSet out;
    for (auto c : children_[index_of(v)]) out.insert(vertices_[c]);
    return out;
}

VertexSet CausalDiagram::descendants(const std::string& v) const {
    VertexSet out;
    std::vector<std::size_t> stack{index_of(v)};
    while (!stack.empty()) {
        auto u = stack.back();
        stack.pop_back();
        for (auto c : children_[u]) {
            if (out.insert(vertices_[c]).second) stack.push_back(c);
        }
    }
    return out;
}

VertexSet CausalDiagram::ancestors(const std::string& v) const {
    VertexSet out;
    std::vector<std::size_t> stack{index_of(v)};
    while (!stack.empty()) {
        auto u = stack.back();
        stack.pop_back();
        for (auto p : parents_[u]) {
            if (out.insert(vertices_[p]).second) stack.push_back(p);
        }
    }
    return out;
}

bool CausalDiagram::is_descendant(const std::string& v, const std::string& of) const {
    return descendants(of).count(v) > 0;
}

std::string CausalDiagram::latent_name(const std::string& a, const std::string& b) {
    return a < b ? "<" + a + "," + b + ">" : "<" + b + "," + a + ">";
}

CausalDiagram CausalDiagram::expand_bidirected() const {
    if (bidirected_.empty()) return *this;
    auto vertices = vertices_;
    auto directed = directed_;
    for (const auto& [a, b] : bidirected_) {
        auto latent = latent_name(a, b);
        vertices.push_back(latent);
        directed.emplace_back(latent, a);
        directed.emplace_back(latent, b);
    }
    CausalDiagram g;
    // Latent names contain a comma, so bypass the public name check.
    std::map<std::string, std::size_t> index;
    for (const auto& v : vertices) index.emplace(v, index.size());
    g.vertices_ = std::move(vertices);
    g.children_.resize(g.vertices_.size());
    g.parents_.resize(g.vertices_.size());
    for (const auto& [t, h] : directed) {
        g.children_[index.at(t)].push_back(index.at(h));
        g.parents_[index.at(h)].push_back(index.at(t));
    }
    g.directed_ = std::move(directed);
    g.topo_ = topo_;
    for (const auto& [a, b] : bidirected_) g.topo_.insert(g.topo_.begin(), latent_name(a, b));
    return g;
}

CausalDiagram CausalDiagram::without_outgoing(const std::string& v) const {
    CausalDiagram g = *this;
    auto vi = index_of(v);
    g.directed_.erase(std::remove_if(g.directed_.begin(), g.directed_.end(),
                                     [&](const Edge& e) { return e.first == v; }),
                      g.directed_.end());
    for (auto c : g.children_[vi]) {
        auto& ps = g.parents_[c];
        ps.erase(std::remove(ps.begin(), ps.end(), vi), ps.end());
    }
    g.children_[vi].clear();
    return g;
}

std::string to_string(Criterion c) {
    switch (c) {
        case Criterion::dseparation: return "dsep";
        case Criterion::backdoor: return "backdoor";
        case Criterion::frontdoor: return "frontdoor";
    }
    return "unknown";
}

Criterion criterion_from_string(const std::string& s) {
    if (s == "dsep" || s == "d-separation") return Criterion::dseparation;
    if (s == "backdoor" || s == "back-door") return Criterion::backdoor;
    if (s == "frontdoor" || s == "front-door") return Criterion::frontdoor;
    throw FormatError("unknown criterion '" + s + "'");
}

bool d_separated(const CausalDiagram& g, const VertexSet& a, const VertexSet& b,
                 const VertexSet& c) {
    check_vertices(g, a);
    check_vertices(g, b);
    check_vertices(g, c);
    check_disjoint(a, b, "A and B");
    check_disjoint(a, c, "A and C");
    check_disjoint(b, c, "B and C");
    if (a.empty() || b.empty()) return true;

    const auto expanded = g.expand_bidirected();
    const auto reach = reachable(expanded, a, c);
    const auto& names = expanded.vertices();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (reach[i] && b.count(names[i])) return false;
    }
    return true;
}

std::optional<Path> find_open_path(const CausalDiagram& g, const VertexSet& a,
                                   const VertexSet& b, const VertexSet& c) {
    check_vertices(g, a);
    check_vertices(g, b);
    check_vertices(g, c);
    return search_open_path(g.expand_bidirected(), a, b, c, false);
}

CriterionReport check_dseparation(const CausalDiagram& g, const VertexSet& a,
                                  const VertexSet& b, const VertexSet& c) {
    CriterionReport r;
    r.criterion = Criterion::dseparation;
    r.holds = d_separated(g, a, b, c);
    if (!r.holds) {
        r.failing_path = find_open_path(g, a, b, c);
        r.detail = join(c) + " leaves a path between " + join(a) + " and " + join(b) + " open";
    }
    return r;
}

CriterionReport satisfies_backdoor(const CausalDiagram& g, const std::string& x,
                                   const std::string& y, const VertexSet& z) {
    check_criterion_args(g, x, y, z);
    CriterionReport r;
    r.criterion = Criterion::backdoor;

    const auto desc = g.descendants(x);
    for (const auto& v : z) {
        if (desc.count(v)) {
            r.failed_clauses.push_back(1);
            r.failing_path = directed_path_avoiding(g, x, v, {});
            r.detail = "'" + v + "' is a descendant of '" + x + "'";
            break;
        }
    }

    const auto cut = g.expand_bidirected().without_outgoing(x);
    if (!d_separated(cut, {x}, {y}, z)) {
        r.failed_clauses.push_back(2);
        if (!r.failing_path) {
            r.failing_path = search_open_path(g.expand_bidirected(), {x}, {y}, z, true);
            r.detail = join(z) + " leaves a back-door path from '" + x + "' to '" + y + "' open";
        }
    }
    r.holds = r.failed_clauses.empty();
    return r;
}

CriterionReport satisfies_frontdoor(const CausalDiagram& g, const std::string& x,
                                    const std::string& y, const VertexSet& z) {
    check_criterion_args(g, x, y, z);
    CriterionReport r;
    r.criterion = Criterion::frontdoor;
    const auto expanded = g.expand_bidirected();

    if (auto p = directed_path_avoiding(g, x, y, z)) {
        r.failed_clauses.push_back(1);
        r.failing_path = p;
        r.detail = "directed path " + render_path(*p) + " avoids " + join(z);
    }

    if (!z.empty() && !d_separated(expanded.without_outgoing(x), {x}, z, {})) {
        r.failed_clauses.push_back(2);
        if (!r.failing_path) {
            r.failing_path = search_open_path(expanded, {x}, z, {}, true);
            r.detail = "unblocked back-door path from '" + x + "' into " + join(z);
        }
    }

    for (const auto& v : z) {
        if (!d_separated(expanded.without_outgoing(v), {v}, {y}, {x})) {
            r.failed_clauses.push_back(3);
            if (!r.failing_path) {
                r.failing_path = search_open_path(expanded, {v}, {y}, {x}, true);
                r.detail = "'" + x + "' does not block the back-door path from '" + v +
                           "' to '" + y + "'";
            }
            break;
        }
    }
    r.holds = r.failed_clauses.empty();
    return r;
}

std::optional<VertexSet> find_adjustment_set(const CausalDiagram& g, const std::string& x,
                                             const std::string& y,
                                             const VertexSet& candidates,
                                             Criterion criterion) {
    if (criterion == Criterion::dseparation) {
        throw PreconditionError("adjustment search needs the back-door or front-door criterion");
    }
    if (candidates.count(x) || candidates.count(y)) {
        throw PreconditionError("candidates must exclude '" + x + "' and '" + y + "'");
    }
    if (candidates.size() > 20) {
        throw SizeError("adjustment search is exhaustive and capped at 20 candidates");
    }
    check_vertices(g, candidates);
    const std::vector<std::string> pool(candidates.begin(), candidates.end());
    const std::size_t n = pool.size();

    auto test = [&](const VertexSet& z) {
        return criterion == Criterion::backdoor ? satisfies_backdoor(g, x, y, z).holds
                                                : satisfies_frontdoor(g, x, y, z).holds;
    };

    for (std::size_t size = 0; size <= n; ++size) {
        // Index combinations in lexicographic order.
        std::vector<std::size_t> pick(size);
        for (std::size_t i = 0; i < size; ++i) pick[i] = i;
        while (true) {
            VertexSet z;
            for (auto i : pick) z.insert(pool[i]);
            if (test(z)) return z;
            std::size_t i = size;
            while (i > 0 && pick[i - 1] == n - size + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    return std::nullopt;
}

CausalDiagram diagram_from_json(const nlohmann::json& j) {
    try {
        auto vertices = j.at("vertices").get<std::vector<std::string>>();
        std::vector<Edge> directed;
        std::vector<Edge> bidirected;
        auto read_edges = [](const nlohmann::json& arr, std::vector<Edge>& out) {
            for (const auto& e : arr) {
                if (!e.is_array() || e.size() != 2) throw FormatError("edges must be 2-element arrays");
                out.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
            }
        };
        if (j.contains("directed")) read_edges(j.at("directed"), directed);
        if (j.contains("bidirected")) read_edges(j.at("bidirected"), bidirected);
        return CausalDiagram::build(std::move(vertices), std::move(directed), std::move(bidirected));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("diagram JSON: ") + e.what());
    }
}

nlohmann::json diagram_to_json(const CausalDiagram& g) {
    nlohmann::json j;
    j["vertices"] = g.vertices();
    j["directed"] = nlohmann::json::array();
    for (const auto& [t, h] : g.directed_edges()) j["directed"].push_back({t, h});
    j["bidirected"] = nlohmann::json::array();
    for (const auto& [a, b] : g.bidirected_edges()) j["bidirected"].push_back({a, b});
    return j;
}

CausalDiagram load_diagram(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("'" + path + "' is not valid JSON: " + e.what());
    }
    return diagram_from_json(j);
}

nlohmann::json criterion_report_to_json(const CriterionReport& r) {
    nlohmann::json j;
    j["criterion"] = to_string(r.criterion);
    j["holds"] = r.holds;
    j["failed_clauses"] = r.failed_clauses;
    j["failing_path"] = r.failing_path ? nlohmann::json(*r.failing_path) : nlohmann::json(nullptr);
    if (!r.detail.empty()) j["detail"] = r.detail;
    return j;
}

namespace fixtures {

CausalDiagram confounded_exposure() {
    return CausalDiagram::build({"Z", "X", "Y", "S", "T"},
                                {{"Z", "X"}, {"Z", "Y"}, {"X", "Y"}, {"Y", "S"}, {"Y", "T"}});
}

CausalDiagram frontdoor_mediator() {
    return CausalDiagram::build({"X", "Z", "Y", "S", "T"},
                                {{"X", "Z"}, {"Z", "Y"}, {"Y", "S"}, {"Y", "T"}}, {{"X", "Y"}});
}

CausalDiagram proxy_submodel() {
    return CausalDiagram::build({"X", "Y", "S", "T"}, {{"X", "Y"}, {"Y", "S"}, {"Y", "T"}});
}

CausalDiagram proxy_submodel_confounded() {
    return CausalDiagram::build({"X", "Y", "S", "T"}, {{"X", "Y"}, {"Y", "S"}, {"Y", "T"}},
                                {{"Y", "S"}, {"Y", "T"}, {"S", "T"}});
}

}  // namespace fixtures

}  // namespace proxycause
