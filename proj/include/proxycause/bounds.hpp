#pragma once

#include "proxycause/lp.hpp"
#include "proxycause/table.hpp"

#include <array>
#include <optional>

namespace proxycause {

/// How p_{ij.k} is read: P(t_i, s_j | x_k), or the joint P(t_i, s_j, x_k)
/// used by the worked example's arithmetic.
enum class Convention { conditional, joint_compat };

/// Which proxies constrain the program.
enum class ProxySet { both, t_only, s_only };

std::string to_string(Convention c);
Convention convention_from_string(const std::string& s);

/// p[t][s][x] for dichotomous T, S, X; index 0 is each variable's first category.
struct ProxyCells {
    std::array<std::array<std::array<Rational, 2>, 2>, 2> p{};
    Convention convention = Convention::conditional;

    Rational& operator()(int t, int s, int x) { return p[t][s][x]; }
    const Rational& operator()(int t, int s, int x) const { return p[t][s][x]; }

    /// Entries non-negative; each x-group sums to 1 (conditional) or all
    /// eight sum to 1 (joint). Throws FormatError.
    void validate() const;
};

/// Cells from a table containing X, T, S (other variables are summed out),
/// restricted to the stratum `z` when given.
ProxyCells proxy_cells(const ExactTable& table, const std::string& x, const std::string& t, const std::string& s,
                       Convention convention = Convention::conditional, const Assignment& z = {});

/// Joint-compat cells rescaled to conditionals.
ProxyCells to_conditional(const ProxyCells& joint);

/// Response type of T (i), S (j), Y (k): 0 constant low, 1 follows the parent,
/// 2 reverses it, 3 constant high.
struct ResponseIndex {
    int i = 0;
    int j = 0;
    int k = 0;
    bool operator==(const ResponseIndex&) const = default;
};

std::string column_name(const ResponseIndex& r);  // "q013"

/// Value of a response type at parent value `parent` (0 or 1).
inline int respond(int type, int parent) { return parent == 0 ? (type >> 1) : (type & 1); }

struct CounterfactualProgram {
    bool monotone = false;
    ProxySet proxies = ProxySet::both;
    int target = 1;  // bound f(y_1 | set(X = x_target))
    std::vector<ResponseIndex> columns;
    std::vector<std::string> row_labels;
    LinearProgram lp;  // objective = target, sense maximize
};

/// Normalization plus one row per observed (t, s, x) cell; a column enters
/// the row when its response types send Y_x to (t, s). Requires conditional cells.
CounterfactualProgram build_program(const ProxyCells& p, bool monotone, int target,
                                    ProxySet proxies = ProxySet::both);

struct BoundsResult {
    int target = 1;
    std::string method;  // "lp", "closed-form", "stratified"
    bool monotone = false;
    Convention convention = Convention::conditional;
    Rational lower{0};
    Rational upper{1};
    /// Closed forms: raw terms of the min (upper) or max (lower) before clamping.
    std::vector<Rational> lower_terms;
    std::vector<Rational> upper_terms;
    /// LP: columns and attaining points.
    std::vector<ResponseIndex> columns;
    std::vector<Rational> lower_witness;
    std::vector<Rational> upper_witness;
};

/// Exact min and max of the target. Throws InfeasibleError.
BoundsResult lp_bounds(const CounterfactualProgram& program);

/// Closed-form monotone bounds: the x0 target has upper = min of four terms,
/// the x1 target has lower = max of four terms. Returns {x0 result, x1 result}.
std::pair<BoundsResult, BoundsResult> closed_form_bounds(const ProxyCells& p);

enum class StratumMethod { automatic, closed_form, lp };

/// Per-stratum bounds weighted by P(z). `automatic` uses the closed forms
/// under monotonicity and the LP otherwise. Returns {x0 result, x1 result}.
std::pair<BoundsResult, BoundsResult> stratified_bounds(const std::vector<ProxyCells>& strata,
                                                        const std::vector<Rational>& pz, bool monotone,
                                                        StratumMethod method = StratumMethod::automatic);

struct TargetCertification {
    int target = 1;
    LPStatus lp_status = LPStatus::optimal;
    std::optional<BoundsResult> lp;
    BoundsResult closed;
    bool closed_applicable = true;
    std::optional<Rational> delta_lower;  // closed - lp
    std::optional<Rational> delta_upper;
    bool agree = false;
};

struct Certification {
    bool monotone = false;
    std::vector<TargetCertification> targets;  // x0, x1
};

/// Runs the LP and the closed forms on the same conditional cells.
Certification certify_against_lp(const ProxyCells& p, bool monotone);

nlohmann::json cells_to_json(const ProxyCells& p);
nlohmann::json bounds_to_json(const BoundsResult& r);
nlohmann::json certification_to_json(const Certification& c);

}  // namespace proxycause
