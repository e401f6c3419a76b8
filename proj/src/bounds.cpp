#include "proxycause/bounds.hpp"

#include <algorithm>

namespace proxycause {

std::string to_string(Convention c) { return c == Convention::conditional ? "conditional" : "joint-compat"; }

Convention convention_from_string(const std::string& s) {
    if (s == "conditional") return Convention::conditional;
    if (s == "joint-compat") return Convention::joint_compat;
    throw FormatError("unknown convention '" + s + "' (expected conditional or joint-compat)");
}

void ProxyCells::validate() const {
    Rational total[2] = {0, 0};
    for (int t = 0; t < 2; ++t) {
        for (int s = 0; s < 2; ++s) {
            for (int x = 0; x < 2; ++x) {
                if (p[t][s][x] < 0) throw FormatError("negative proxy cell");
                total[x] += p[t][s][x];
            }
        }
    }
    if (convention == Convention::conditional) {
        if (total[0] != 1 || total[1] != 1) throw FormatError("P(t, s | x) must sum to 1 for each x");
    } else if (total[0] + total[1] != 1) {
        throw FormatError("P(t, s, x) must sum to 1");
    }
}

ProxyCells proxy_cells(const ExactTable& table, const std::string& x, const std::string& t, const std::string& s,
                       Convention convention, const Assignment& z) {
    for (const auto* name : {&x, &t, &s}) {
        if (table.variable(*name).categories.size() != 2) {
            throw PreconditionError("'" + *name + "' must be dichotomous");
        }
    }
    if (x == t || x == s || t == s) throw PreconditionError("exposure and proxies must be distinct");
    const Rational fz = table.mass(z);
    if (fz == 0) throw ZeroMassError("stratum has zero mass");
    const auto& xc = table.variable(x).categories;
    const auto& tc = table.variable(t).categories;
    const auto& sc = table.variable(s).categories;

    ProxyCells out;
    out.convention = convention;
    for (int xi = 0; xi < 2; ++xi) {
        Assignment base = z;
        base.emplace_back(x, xc[xi]);
        const Rational fx = table.mass(base);
        if (convention == Convention::conditional && fx == 0) {
            throw ZeroMassError("P(" + x + "=" + xc[xi] + ") is zero");
        }
        for (int ti = 0; ti < 2; ++ti) {
            for (int si = 0; si < 2; ++si) {
                Assignment cell = base;
                cell.emplace_back(t, tc[ti]);
                cell.emplace_back(s, sc[si]);
                const Rational m = table.mass(cell);
                out(ti, si, xi) = convention == Convention::conditional ? Rational(m / fx) : Rational(m / fz);
            }
        }
    }
    return out;
}

ProxyCells to_conditional(const ProxyCells& joint) {
    if (joint.convention == Convention::conditional) return joint;
    ProxyCells out;
    for (int x = 0; x < 2; ++x) {
        Rational fx = 0;
        for (int t = 0; t < 2; ++t) {
            for (int s = 0; s < 2; ++s) fx += joint(t, s, x);
        }
        if (fx == 0) throw ZeroMassError("an exposure level has zero mass");
        for (int t = 0; t < 2; ++t) {
            for (int s = 0; s < 2; ++s) out(t, s, x) = joint(t, s, x) / fx;
        }
    }
    return out;
}

std::string column_name(const ResponseIndex& r) {
    return "q" + std::to_string(r.i) + std::to_string(r.j) + std::to_string(r.k);
}

CounterfactualProgram build_program(const ProxyCells& p, bool monotone, int target, ProxySet proxies) {
    if (p.convention != Convention::conditional) {
        throw FormatError("the counterfactual program needs conditional cells P(t, s | x)");
    }
    p.validate();
    if (target != 0 && target != 1) throw PreconditionError("target must be x0 or x1");

    CounterfactualProgram prog;
    prog.monotone = monotone;
    prog.proxies = proxies;
    prog.target = target;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            for (int k = 0; k < 4; ++k) {
                if (monotone && (i == 2 || j == 2 || k == 2)) continue;
                prog.columns.push_back({i, j, k});
            }
        }
    }
    const std::size_t n = prog.columns.size();
    auto& lp = prog.lp;
    lp.n = n;
    lp.sense = Sense::maximize;

    lp.equalities.push_back({std::vector<Rational>(n, Rational(1)), Rational(1)});
    prog.row_labels.push_back("sum");

    auto add_row = [&](int a, int b, int c) {
        Equality e{std::vector<Rational>(n, Rational(0)), Rational(0)};
        for (std::size_t col = 0; col < n; ++col) {
            const auto& r = prog.columns[col];
            const int y = respond(r.k, c);
            const bool t_ok = a < 0 || respond(r.i, y) == a;
            const bool s_ok = b < 0 || respond(r.j, y) == b;
            if (t_ok && s_ok) e.a[col] = 1;
        }
        std::string label = "p";
        label += a < 0 ? "." : std::to_string(a);
        label += b < 0 ? "." : std::to_string(b);
        label += "." + std::to_string(c);
        for (int t = 0; t < 2; ++t) {
            for (int s = 0; s < 2; ++s) {
                if ((a < 0 || a == t) && (b < 0 || b == s)) e.b += p(t, s, c);
            }
        }
        lp.equalities.push_back(std::move(e));
        prog.row_labels.push_back(label);
    };
    for (int c : {1, 0}) {
        for (int a = 0; a < 2; ++a) {
            if (proxies == ProxySet::both) {
                for (int b = 0; b < 2; ++b) add_row(a, b, c);
            } else if (proxies == ProxySet::t_only) {
                add_row(a, -1, c);
            } else {
                add_row(-1, a, c);
            }
        }
    }

    lp.objective.assign(n, Rational(0));
    for (std::size_t col = 0; col < n; ++col) {
        if (respond(prog.columns[col].k, target) == 1) lp.objective[col] = 1;
    }
    return prog;
}

BoundsResult lp_bounds(const CounterfactualProgram& program) {
    auto lp = program.lp;
    lp.sense = Sense::minimize;
    const auto lo = solve(lp);
    if (lo.status == LPStatus::infeasible) {
        throw InfeasibleError("the observed proxy table is inconsistent with the response-type model" +
                              std::string(program.monotone ? " under monotonicity" : ""));
    }
    lp.sense = Sense::maximize;
    const auto hi = solve(lp);

    BoundsResult r;
    r.target = program.target;
    r.method = "lp";
    r.monotone = program.monotone;
    r.lower = lo.value;
    r.upper = hi.value;
    r.columns = program.columns;
    r.lower_witness = lo.witness;
    r.upper_witness = hi.witness;
    return r;
}

std::pair<BoundsResult, BoundsResult> closed_form_bounds(const ProxyCells& p) {
    p.validate();
    const auto q = [&](int t, int s, int x) -> const Rational& { return p(t, s, x); };

    BoundsResult x0;
    x0.target = 0;
    x0.method = "closed-form";
    x0.monotone = true;
    x0.convention = p.convention;
    x0.upper_terms = {
        q(0, 1, 0) + q(1, 0, 0) + q(1, 1, 0) + q(0, 0, 1),
        q(0, 1, 0) + q(1, 1, 0) + q(1, 0, 1) + q(0, 0, 1),
        q(1, 0, 0) + q(1, 1, 0) + q(0, 1, 1) + q(0, 0, 1),
        q(1, 1, 0) + q(0, 0, 1) + q(1, 0, 1) + q(0, 1, 1),
    };
    x0.lower = 0;
    x0.upper = std::clamp(*std::min_element(x0.upper_terms.begin(), x0.upper_terms.end()), Rational(0), Rational(1));

    BoundsResult x1;
    x1.target = 1;
    x1.method = "closed-form";
    x1.monotone = true;
    x1.convention = p.convention;
    x1.lower_terms = {
        q(0, 0, 0) - q(0, 0, 1),
        q(1, 1, 1) - q(1, 1, 0),
        q(0, 0, 0) + q(1, 0, 0) - q(0, 0, 1) - q(1, 0, 1),
        q(0, 0, 0) + q(0, 1, 0) - q(0, 0, 1) - q(0, 1, 1),
    };
    x1.lower = std::clamp(*std::max_element(x1.lower_terms.begin(), x1.lower_terms.end()), Rational(0), Rational(1));
    x1.upper = 1;
    return {x0, x1};
}

std::pair<BoundsResult, BoundsResult> stratified_bounds(const std::vector<ProxyCells>& strata,
                                                        const std::vector<Rational>& pz, bool monotone,
                                                        StratumMethod method) {
    const bool closed = method == StratumMethod::closed_form || (method == StratumMethod::automatic && monotone);
    if (strata.empty() || strata.size() != pz.size()) throw FormatError("need one P(z) per stratum");
    Rational total = 0;
    for (const auto& w : pz) {
        if (w < 0) throw FormatError("negative stratum weight");
        if (w == 0) throw ZeroMassError("a stratum has zero mass");
        total += w;
    }
    if (total != 1) throw FormatError("stratum weights must sum to 1");

    BoundsResult out[2];
    for (int target = 0; target < 2; ++target) {
        out[target].target = target;
        out[target].method = "stratified";
        out[target].monotone = monotone;
        out[target].convention = strata.front().convention;
        out[target].lower = 0;
        out[target].upper = 0;
    }
    for (std::size_t z = 0; z < strata.size(); ++z) {
        BoundsResult per[2];
        if (closed) {
            auto [b0, b1] = closed_form_bounds(strata[z]);
            per[0] = std::move(b0);
            per[1] = std::move(b1);
        } else {
            const auto cond = to_conditional(strata[z]);
            for (int target = 0; target < 2; ++target) per[target] = lp_bounds(build_program(cond, monotone, target));
        }
        for (int target = 0; target < 2; ++target) {
            out[target].lower += per[target].lower * pz[z];
            out[target].upper += per[target].upper * pz[z];
            if (closed) {
                // Per-stratum selected terms, for reporting.
                out[target].lower_terms.push_back(per[target].lower);
                out[target].upper_terms.push_back(per[target].upper);
            }
        }
    }
    for (auto& r : out) {
        r.lower = std::clamp(r.lower, Rational(0), Rational(1));
        r.upper = std::clamp(r.upper, Rational(0), Rational(1));
    }
    return {out[0], out[1]};
}

Certification certify_against_lp(const ProxyCells& p_in, bool monotone) {
    const ProxyCells p = to_conditional(p_in);
    Certification c;
    c.monotone = monotone;
    const auto closed = closed_form_bounds(p);
    for (int target = 0; target < 2; ++target) {
        TargetCertification tc;
        tc.target = target;
        tc.closed = target == 0 ? closed.first : closed.second;
        tc.closed_applicable = monotone;
        try {
            tc.lp = lp_bounds(build_program(p, monotone, target));
            tc.lp_status = LPStatus::optimal;
            tc.delta_lower = tc.closed.lower - tc.lp->lower;
            tc.delta_upper = tc.closed.upper - tc.lp->upper;
            tc.agree = *tc.delta_lower == 0 && *tc.delta_upper == 0;
        } catch (const InfeasibleError&) {
            tc.lp_status = LPStatus::infeasible;
        }
        c.targets.push_back(std::move(tc));
    }
    return c;
}

namespace {

nlohmann::json rational_json(const Rational& r) {
    return {{"exact", to_fraction_string(r)}, {"decimal", to_decimal_string(r)}};
}

nlohmann::json rationals_json(const std::vector<Rational>& v) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : v) out.push_back(rational_json(r));
    return out;
}

nlohmann::json witness_json(const std::vector<ResponseIndex>& cols, const std::vector<Rational>& w) {
    nlohmann::json out = nlohmann::json::object();
    for (std::size_t i = 0; i < cols.size() && i < w.size(); ++i) {
        if (w[i] != 0) out[column_name(cols[i])] = to_fraction_string(w[i]);
    }
    return out;
}

}  // namespace

nlohmann::json cells_to_json(const ProxyCells& p) {
    nlohmann::json out = nlohmann::json::object();
    for (int x = 0; x < 2; ++x) {
        for (int t = 0; t < 2; ++t) {
            for (int s = 0; s < 2; ++s) {
                out["p" + std::to_string(t) + std::to_string(s) + "." + std::to_string(x)] = to_fraction_string(p(t, s, x));
            }
        }
    }
    return {{"convention", to_string(p.convention)}, {"cells", out}};
}

nlohmann::json bounds_to_json(const BoundsResult& r) {
    nlohmann::json out{{"target", "f(y1|set(x" + std::to_string(r.target) + "))"},
                       {"method", r.method},
                       {"monotone", r.monotone},
                       {"convention", to_string(r.convention)},
                       {"lower", rational_json(r.lower)},
                       {"upper", rational_json(r.upper)}};
    if (!r.lower_terms.empty()) out["lower_terms"] = rationals_json(r.lower_terms);
    if (!r.upper_terms.empty()) out["upper_terms"] = rationals_json(r.upper_terms);
    if (!r.lower_witness.empty()) out["lower_witness"] = witness_json(r.columns, r.lower_witness);
    if (!r.upper_witness.empty()) out["upper_witness"] = witness_json(r.columns, r.upper_witness);
    return out;
}

nlohmann::json certification_to_json(const Certification& c) {
    nlohmann::json targets = nlohmann::json::array();
    for (const auto& t : c.targets) {
        nlohmann::json j{{"target", "f(y1|set(x" + std::to_string(t.target) + "))"},
                         {"lp_status", to_string(t.lp_status)},
                         {"closed_form", bounds_to_json(t.closed)},
                         {"closed_form_applicable", t.closed_applicable},
                         {"agree", t.agree}};
        if (t.lp) j["lp"] = bounds_to_json(*t.lp);
        if (t.delta_lower) j["delta_lower"] = rational_json(*t.delta_lower);
        if (t.delta_upper) j["delta_upper"] = rational_json(*t.delta_upper);
        targets.push_back(std::move(j));
    }
    return {{"monotone", c.monotone}, {"authoritative", "lp"}, {"targets", targets}};
}

}  // namespace proxycause
