#pragma once

#include "proxycause/graph.hpp"
#include "proxycause/table.hpp"

#include <map>
#include <set>

namespace proxycause {

/// A single variable fixed to one of its categories.
struct Setting {
    std::string variable;
    std::string value;
};

namespace detail {

template <class Scalar>
void check_effect_args(const JointTable<Scalar>& table, const Setting& x, const std::string& y,
                       const std::vector<std::string>& z) {
    table.category_index(table.variable_index(x.variable), x.value);
    table.variable_index(y);
    if (x.variable == y) throw PreconditionError("exposure and outcome must differ");
    std::set<std::string> seen;
    for (const auto& v : z) {
        table.variable_index(v);
        if (v == x.variable || v == y) {
            throw PreconditionError("adjustment set must not contain '" + x.variable + "' or '" + y + "'");
        }
        if (!seen.insert(v).second) throw PreconditionError("variable '" + v + "' listed twice");
    }
}

template <class Scalar>
JointTable<Scalar> finish(const Variable& outcome, std::vector<Scalar> values) {
    if constexpr (ScalarTraits<Scalar>::exact) {
        return JointTable<Scalar>({outcome}, std::move(values));
    } else {
        return JointTable<Scalar>::normalized({outcome}, std::move(values));
    }
}

inline Assignment with(Assignment a, const std::string& var, const std::string& val) {
    a.emplace_back(var, val);
    return a;
}

}  // namespace detail

/// Truncated factorization: f(y | set(x)) = sum over the other variables of
/// f(x, y, rest) / f(x | pa(x)). The table must cover exactly the diagram's
/// vertices and the diagram must have no bidirected edges.
template <class Scalar>
JointTable<Scalar> intervene_truncated(const JointTable<Scalar>& table, const CausalDiagram& g,
                                       const Setting& x, const std::string& y) {
    detail::check_effect_args(table, x, y, {});
    if (!g.bidirected_edges().empty()) {
        throw SchemaMismatchError("truncated factorization needs a diagram without latent confounders");
    }
    {
        std::set<std::string> tv;
        for (const auto& v : table.schema()) tv.insert(v.name);
        std::set<std::string> gv(g.vertices().begin(), g.vertices().end());
        if (tv != gv) throw SchemaMismatchError("table variables differ from the diagram's vertices");
    }

    const auto xi = table.variable_index(x.variable);
    const auto xc = table.category_index(xi, x.value);
    const auto yi = table.variable_index(y);
    std::vector<std::size_t> pa;
    for (const auto& p : g.parents(x.variable)) pa.push_back(table.variable_index(p));

    // parent configuration -> (f(pa), f(x, pa))
    std::map<std::vector<std::size_t>, std::pair<Scalar, Scalar>> parent_mass;
    auto key_of = [&](const std::vector<std::size_t>& c) {
        std::vector<std::size_t> key;
        for (auto i : pa) key.push_back(c[i]);
        return key;
    };
    for (std::size_t f = 0; f < table.size(); ++f) {
        auto c = table.cell(f);
        auto& entry = parent_mass[key_of(c)];
        entry.first += table.probs()[f];
        if (c[xi] == xc) entry.second += table.probs()[f];
    }
    for (const auto& [key, m] : parent_mass) {
        if (m.first > 0 && m.second == 0) {
            throw ZeroConditionalError("f(" + x.variable + "=" + x.value +
                                       " | pa) is zero for a parent configuration with positive mass");
        }
    }

    const auto& outcome = table.schema()[yi];
    std::vector<Scalar> out(outcome.categories.size(), Scalar(0));
    for (std::size_t f = 0; f < table.size(); ++f) {
        const auto& p = table.probs()[f];
        if (p == 0) continue;
        auto c = table.cell(f);
        if (c[xi] != xc) continue;
        const auto& m = parent_mass.at(key_of(c));
        // p / f(x | pa) = p * f(pa) / f(x, pa)
        out[c[yi]] += p * m.first / m.second;
    }
    return detail::finish<Scalar>(outcome, std::move(out));
}

/// Back-door adjustment: sum_z f(y | x, z) f(z).
template <class Scalar>
JointTable<Scalar> backdoor_adjust(const JointTable<Scalar>& table, const Setting& x,
                                   const std::string& y, const std::vector<std::string>& z) {
    detail::check_effect_args(table, x, y, z);
    std::vector<std::string> keep = z;
    keep.push_back(x.variable);
    keep.push_back(y);
    const auto small = marginal(table, keep);
    const auto& outcome = table.variable(y);
    std::vector<Scalar> out(outcome.categories.size(), Scalar(0));

    for (const auto& za : enumerate_assignments(small, z)) {
        const Scalar fz = small.mass(za);
        if (fz == 0) continue;
        const Scalar fxz = small.mass(detail::with(za, x.variable, x.value));
        if (fxz == 0) throw PositivityError("f(x, z) = 0 in a stratum with f(z) > 0");
        for (std::size_t k = 0; k < outcome.categories.size(); ++k) {
            auto cell = detail::with(detail::with(za, x.variable, x.value), y, outcome.categories[k]);
            out[k] += small.mass(cell) / fxz * fz;
        }
    }
    return detail::finish<Scalar>(outcome, std::move(out));
}

/// Front-door adjustment: sum_{x', z} f(y | x', z) f(z | x) f(x').
template <class Scalar>
JointTable<Scalar> frontdoor_adjust(const JointTable<Scalar>& table, const Setting& x,
                                    const std::string& y, const std::vector<std::string>& z) {
    detail::check_effect_args(table, x, y, z);
    std::vector<std::string> keep = z;
    keep.push_back(x.variable);
    keep.push_back(y);
    const auto small = marginal(table, keep);
    const auto& outcome = table.variable(y);
    const auto& exposure = table.variable(x.variable);

    const Scalar fx = small.mass({{x.variable, x.value}});
    if (fx == 0) throw PositivityError("f(x) = 0 for the intervened value");

    std::vector<Scalar> out(outcome.categories.size(), Scalar(0));
    for (const auto& za : enumerate_assignments(small, z)) {
        const Scalar fz_given_x = small.mass(detail::with(za, x.variable, x.value)) / fx;
        if (fz_given_x == 0) continue;
        for (const auto& xp : exposure.categories) {
            const Scalar fxp = small.mass({{x.variable, xp}});
            if (fxp == 0) continue;
            const Scalar fxpz = small.mass(detail::with(za, x.variable, xp));
            if (fxpz == 0) throw PositivityError("f(x', z) = 0 where the front-door formula needs it");
            for (std::size_t k = 0; k < outcome.categories.size(); ++k) {
                auto cell = detail::with(detail::with(za, x.variable, xp), y, outcome.categories[k]);
                out[k] += small.mass(cell) / fxpz * fz_given_x * fxp;
            }
        }
    }
    return detail::finish<Scalar>(outcome, std::move(out));
}

}  // namespace proxycause
