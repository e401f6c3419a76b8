#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace proxycause {

using VertexSet = std::set<std::string>;
using Edge = std::pair<std::string, std::string>;
using Path = std::vector<std::string>;

/// Directed acyclic graph with bidirected edges standing for unmeasured
/// common causes. Immutable once built.
class CausalDiagram {
public:
    /// Validates names and edges and checks acyclicity with a topological sort.
    /// Throws CycleError, UnknownVertexError, or PreconditionError (duplicates,
    /// bidirected self-loops, malformed names).
    static CausalDiagram build(std::vector<std::string> vertices,
                               std::vector<Edge> directed,
                               std::vector<Edge> bidirected = {});

    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<Edge>& directed_edges() const { return directed_; }
    const std::vector<Edge>& bidirected_edges() const { return bidirected_; }

    bool has_vertex(const std::string& v) const;
    VertexSet parents(const std::string& v) const;
    VertexSet children(const std::string& v) const;
    /// Strict descendants over directed edges only.
    VertexSet descendants(const std::string& v) const;
    /// Strict ancestors over directed edges only.
    VertexSet ancestors(const std::string& v) const;
    bool is_descendant(const std::string& v, const std::string& of) const;
    const std::vector<std::string>& topological_order() const { return topo_; }

    /// Replaces every bidirected edge {a,b} by a fresh latent vertex with
    /// edges to a and b. The latent is named "<a,b>", which cannot collide
    /// with user vertices because those never contain commas.
    CausalDiagram expand_bidirected() const;

    /// Copy with the directed edges leaving `v` removed.
    CausalDiagram without_outgoing(const std::string& v) const;

    static std::string latent_name(const std::string& a, const std::string& b);

private:
    CausalDiagram() = default;
    std::size_t index_of(const std::string& v) const;

    std::vector<std::string> vertices_;
    std::vector<Edge> directed_;
    std::vector<Edge> bidirected_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::vector<std::size_t>> parents_;
    std::vector<std::string> topo_;
};

enum class Criterion { dseparation, backdoor, frontdoor };

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& s);

struct CriterionReport {
    Criterion criterion = Criterion::dseparation;
    bool holds = false;
    /// Clause numbers (1-based, as in the criterion's definition) that failed.
    std::vector<int> failed_clauses;
    /// An unblocked path (or offending directed path) witnessing the failure.
    std::optional<Path> failing_path;
    std::string detail;
};

/// True iff every path between a and b is blocked by c. Bidirected edges are
/// expanded into explicit latent vertices first.
bool d_separated(const CausalDiagram& g, const VertexSet& a, const VertexSet& b,
                 const VertexSet& c);

/// One path between a and b that c leaves open, if any. Exhaustive over
/// simple paths of the latent-expanded graph, so meant for small diagrams.
std::optional<Path> find_open_path(const CausalDiagram& g, const VertexSet& a,
                                   const VertexSet& b, const VertexSet& c);

CriterionReport check_dseparation(const CausalDiagram& g, const VertexSet& a,
                                  const VertexSet& b, const VertexSet& c);
CriterionReport satisfies_backdoor(const CausalDiagram& g, const std::string& x,
                                   const std::string& y, const VertexSet& z);
CriterionReport satisfies_frontdoor(const CausalDiagram& g, const std::string& x,
                                    const std::string& y, const VertexSet& z);

/// Smallest subset of `candidates` meeting the criterion; ties go to the
/// lexicographically first sorted subset. At most 20 candidates.
std::optional<VertexSet> find_adjustment_set(const CausalDiagram& g, const std::string& x,
                                             const std::string& y,
                                             const VertexSet& candidates,
                                             Criterion criterion);

CausalDiagram diagram_from_json(const nlohmann::json& j);
nlohmann::json diagram_to_json(const CausalDiagram& g);
CausalDiagram load_diagram(const std::string& path);

nlohmann::json criterion_report_to_json(const CriterionReport& r);

namespace fixtures {
// Diagrams consistent with every graphical statement made about the worked
// scenarios: confounded exposure with proxies, front-door mediator, and the
// proxy submodel with and without confounding among Y, S, T.
CausalDiagram confounded_exposure();   // Z->X, Z->Y, X->Y, Y->S, Y->T
CausalDiagram frontdoor_mediator();    // X->Z, Z->Y, X<->Y, Y->S, Y->T
CausalDiagram proxy_submodel();        // X->Y, Y->S, Y->T
CausalDiagram proxy_submodel_confounded();  // plus Y<->S, Y<->T, S<->T
}  // namespace fixtures

}  // namespace proxycause
