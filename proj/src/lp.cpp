#include "proxycause/lp.hpp"

#include <set>
#include <stdexcept>

namespace proxycause {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Dense simplex tableau. Each row and the cost row carry the right-hand side
// in the last slot; cost.back() holds minus the current objective value.
struct Tableau {
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> cost;
    std::vector<std::size_t> basis;

    std::size_t rhs() const { return cost.size() - 1; }

    void pivot(std::size_t r, std::size_t c) {
        auto& pr = rows[r];
        const Rational inv = 1 / pr[c];
        for (auto& v : pr) v *= inv;
        auto eliminate = [&](std::vector<Rational>& row) {
            if (row[c] == 0) return;
            const Rational f = row[c];
            for (std::size_t j = 0; j < row.size(); ++j) {
                if (pr[j] != 0) row[j] -= f * pr[j];
            }
        };
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != r) eliminate(rows[i]);
        }
        eliminate(cost);
        basis[r] = c;
    }

    // Minimizes over the first `allowed` columns with Bland's rule.
    // Returns false when the objective is unbounded below.
    bool optimize(std::size_t allowed) {
        while (true) {
            std::size_t enter = npos;
            for (std::size_t j = 0; j < allowed; ++j) {
                if (cost[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == npos) return true;
            std::size_t leave = npos;
            Rational best;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                if (rows[r][enter] <= 0) continue;
                Rational ratio = rows[r][rhs()] / rows[r][enter];
                if (leave == npos || ratio < best || (ratio == best && basis[r] < basis[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == npos) return false;
            pivot(leave, enter);
        }
    }
};

// mpq_class(p, q) does not reduce; arithmetic and comparison assume reduced values.
std::vector<Equality> canonical(std::vector<Equality> eqs) {
    for (auto& e : eqs) {
        for (auto& v : e.a) v.canonicalize();
        e.b.canonicalize();
    }
    return eqs;
}

LinearProgram canonical(LinearProgram lp) {
    lp.equalities = canonical(std::move(lp.equalities));
    for (auto& v : lp.objective) v.canonicalize();
    return lp;
}

}  // namespace

void LinearProgram::validate() const {
    if (n == 0) throw FormatError("linear program has no variables");
    if (objective.size() != n) throw FormatError("objective length differs from the variable count");
    for (const auto& e : equalities) {
        if (e.a.size() != n) throw FormatError("constraint row length differs from the variable count");
    }
}

std::string to_string(LPStatus s) {
    switch (s) {
        case LPStatus::optimal: return "optimal";
        case LPStatus::infeasible: return "infeasible";
        case LPStatus::unbounded: return "unbounded";
    }
    return "?";
}

bool is_feasible(const std::vector<Equality>& input, const std::vector<Rational>& q) {
    for (const auto& v : q) {
        if (v < 0) return false;
    }
    for (const auto& e : canonical(input)) {
        if (e.a.size() != q.size() || evaluate(e.a, q) != e.b) return false;
    }
    return true;
}

Rational evaluate(const std::vector<Rational>& objective, const std::vector<Rational>& q) {
    Rational total = 0;
    for (std::size_t i = 0; i < objective.size() && i < q.size(); ++i) {
        if (objective[i] != 0) total += objective[i] * q[i];
    }
    return total;
}

LPResult solve(const LinearProgram& input) {
    input.validate();
    const LinearProgram lp = canonical(input);
    const std::size_t n = lp.n;
    const std::size_t m = lp.equalities.size();

    // Phase 1: one artificial per row, minimize their sum.
    Tableau t;
    t.cost.assign(n + m + 1, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        const auto& e = lp.equalities[i];
        const bool flip = e.b < 0;
        std::vector<Rational> row(n + m + 1, Rational(0));
        for (std::size_t j = 0; j < n; ++j) row[j] = flip ? Rational(-e.a[j]) : e.a[j];
        row[n + i] = 1;
        row[n + m] = flip ? Rational(-e.b) : e.b;
        for (std::size_t j = 0; j < n; ++j) t.cost[j] -= row[j];
        t.cost[n + m] -= row[n + m];
        t.rows.push_back(std::move(row));
        t.basis.push_back(n + i);
    }
    t.optimize(n + m);
    if (t.cost.back() != 0) return {LPStatus::infeasible, 0, {}};

    // Drive artificials out of the basis; rows where that is impossible are redundant.
    for (std::size_t r = 0; r < t.rows.size();) {
        if (t.basis[r] < n) {
            ++r;
            continue;
        }
        std::size_t col = npos;
        for (std::size_t j = 0; j < n; ++j) {
            if (t.rows[r][j] != 0) {
                col = j;
                break;
            }
        }
        if (col == npos) {
            t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(r));
            t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(r));
            continue;
        }
        t.pivot(r, col);
        ++r;
    }

    // Phase 2 on the original columns.
    for (auto& row : t.rows) {
        Rational b = row.back();
        row.resize(n + 1);
        row[n] = b;
    }
    std::vector<Rational> c(n);
    for (std::size_t j = 0; j < n; ++j) c[j] = lp.sense == Sense::maximize ? Rational(-lp.objective[j]) : lp.objective[j];
    t.cost.assign(n + 1, Rational(0));
    for (std::size_t j = 0; j < n; ++j) t.cost[j] = c[j];
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const Rational cb = c[t.basis[r]];
        if (cb == 0) continue;
        for (std::size_t j = 0; j <= n; ++j) t.cost[j] -= cb * t.rows[r][j];
    }
    if (!t.optimize(n)) return {LPStatus::unbounded, 0, {}};

    LPResult out;
    out.status = LPStatus::optimal;
    out.witness.assign(n, Rational(0));
    for (std::size_t r = 0; r < t.rows.size(); ++r) out.witness[t.basis[r]] = t.rows[r][n];
    out.value = evaluate(lp.objective, out.witness);
    if (!is_feasible(lp.equalities, out.witness)) {
        throw std::logic_error("simplex witness fails substitution");
    }
    return out;
}

namespace {

struct VertexSearch {
    std::size_t n = 0;
    std::size_t rank = 0;
    std::vector<std::vector<Rational>> a;  // rank x n, full row rank
    std::vector<Rational> b;
    std::set<std::vector<Rational>> found;
    std::vector<std::size_t> chosen;

    struct Reduced {
        std::size_t pivot;
        std::vector<Rational> v;
    };

    std::vector<Rational> column(std::size_t j) const {
        std::vector<Rational> c(rank);
        for (std::size_t i = 0; i < rank; ++i) c[i] = a[i][j];
        return c;
    }

    void leaf() {
        // Solve the rank x rank system on the chosen columns.
        std::vector<std::vector<Rational>> m(rank, std::vector<Rational>(rank + 1));
        for (std::size_t i = 0; i < rank; ++i) {
            for (std::size_t c = 0; c < rank; ++c) m[i][c] = a[i][chosen[c]];
            m[i][rank] = b[i];
        }
        for (std::size_t c = 0; c < rank; ++c) {
            std::size_t p = c;
            while (m[p][c] == 0) ++p;
            std::swap(m[p], m[c]);
            const Rational inv = 1 / m[c][c];
            for (auto& v : m[c]) v *= inv;
            for (std::size_t i = 0; i < rank; ++i) {
                if (i == c || m[i][c] == 0) continue;
                const Rational f = m[i][c];
                for (std::size_t k = c; k <= rank; ++k) m[i][k] -= f * m[c][k];
            }
        }
        std::vector<Rational> x(n, Rational(0));
        for (std::size_t c = 0; c < rank; ++c) {
            if (m[c][rank] < 0) return;
            x[chosen[c]] = m[c][rank];
        }
        found.insert(std::move(x));
    }

    void dfs(std::size_t start, const std::vector<Reduced>& basis) {
        if (chosen.size() == rank) {
            leaf();
            return;
        }
        for (std::size_t j = start; j + (rank - chosen.size()) <= n; ++j) {
            auto col = column(j);
            for (const auto& [p, v] : basis) {
                if (col[p] == 0) continue;
                const Rational f = col[p] / v[p];
                for (std::size_t i = 0; i < rank; ++i) col[i] -= f * v[i];
            }
            std::size_t p = 0;
            while (p < rank && col[p] == 0) ++p;
            if (p == rank) continue;
            auto next = basis;
            next.push_back({p, std::move(col)});
            chosen.push_back(j);
            dfs(j + 1, next);
            chosen.pop_back();
        }
    }
};

}  // namespace

std::vector<std::vector<Rational>> enumerate_vertices(const std::vector<Equality>& input, std::size_t n) {
    const auto equalities = canonical(input);
    if (n == 0 || n > 64) throw SizeError("vertex enumeration needs 1 <= n <= 64");
    if (equalities.size() > 12) throw SizeError("vertex enumeration is limited to 12 equalities");
    for (const auto& e : equalities) {
        if (e.a.size() != n) throw FormatError("constraint row length differs from the variable count");
    }

    // Exact row reduction to a full-rank system.
    std::vector<std::vector<Rational>> m;
    for (const auto& e : equalities) {
        auto row = e.a;
        row.push_back(e.b);
        m.push_back(std::move(row));
    }
    std::size_t rank = 0;
    for (std::size_t c = 0; c < n && rank < m.size(); ++c) {
        std::size_t p = rank;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[rank]);
        const Rational inv = 1 / m[rank][c];
        for (auto& v : m[rank]) v *= inv;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == rank || m[i][c] == 0) continue;
            const Rational f = m[i][c];
            for (std::size_t k = c; k <= n; ++k) m[i][k] -= f * m[rank][k];
        }
        ++rank;
    }
    for (std::size_t i = rank; i < m.size(); ++i) {
        if (m[i][n] != 0) return {};
    }

    VertexSearch s;
    s.n = n;
    s.rank = rank;
    for (std::size_t i = 0; i < rank; ++i) {
        s.b.push_back(m[i][n]);
        m[i].pop_back();
        s.a.push_back(std::move(m[i]));
    }
    s.dfs(0, {});
    return {s.found.begin(), s.found.end()};
}

namespace {

std::vector<Rational> parse_row(const nlohmann::json& j) {
    std::vector<Rational> out;
    for (const auto& v : j) {
        if (v.is_string()) {
            out.push_back(parse_rational(v.get<std::string>()));
        } else if (v.is_number_integer()) {
            out.emplace_back(v.get<long>());
        } else {
            throw FormatError("LP coefficients must be integers or rational strings");
        }
    }
    return out;
}

nlohmann::json row_json(const std::vector<Rational>& row) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : row) out.push_back(to_fraction_string(v));
    return out;
}

}  // namespace

nlohmann::json lp_to_json(const LinearProgram& lp) {
    nlohmann::json eq = nlohmann::json::array();
    for (const auto& e : lp.equalities) eq.push_back({{"a", row_json(e.a)}, {"b", to_fraction_string(e.b)}});
    return {{"n", lp.n}, {"eq", eq}, {"obj", row_json(lp.objective)},
            {"sense", lp.sense == Sense::maximize ? "max" : "min"}};
}

LinearProgram lp_from_json(const nlohmann::json& j) {
    try {
        LinearProgram lp;
        lp.n = j.at("n").get<std::size_t>();
        for (const auto& e : j.at("eq")) {
            const auto& b = e.at("b");
            lp.equalities.push_back(
                {parse_row(e.at("a")), b.is_string() ? parse_rational(b.get<std::string>()) : Rational(b.get<long>())});
        }
        lp.objective = parse_row(j.at("obj"));
        const auto sense = j.value("sense", std::string("max"));
        if (sense != "max" && sense != "min") throw FormatError("LP sense must be 'max' or 'min'");
        lp.sense = sense == "max" ? Sense::maximize : Sense::minimize;
        lp.validate();
        return lp;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("LP JSON: ") + e.what());
    }
}

nlohmann::json lp_result_to_json(const LPResult& r) {
    nlohmann::json out{{"status", to_string(r.status)}};
    if (r.status == LPStatus::optimal) {
        out["value"] = to_fraction_string(r.value);
        out["value_decimal"] = to_decimal_string(r.value);
        out["witness"] = row_json(r.witness);
    }
    return out;
}

}  // namespace proxycause
