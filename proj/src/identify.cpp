#include "proxycause/identify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace proxycause {

namespace {

constexpr std::size_t kMaxLatentCategories = 16;

Assignment zip(const std::vector<std::string>& vars, const std::vector<std::string>& values) {
    Assignment out;
    for (std::size_t i = 0; i < vars.size(); ++i) out.emplace_back(vars[i], values[i]);
    return out;
}

Assignment concat(Assignment a, const Assignment& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::vector<std::vector<std::string>> value_vectors(const FloatTable& table,
                                                    const std::vector<std::string>& vars) {
    std::vector<std::vector<std::string>> out;
    for (const auto& a : enumerate_assignments(table, vars)) {
        std::vector<std::string> v;
        for (const auto& [name, label] : a) v.push_back(label);
        out.push_back(std::move(v));
    }
    return out;
}

std::string describe(const Assignment& z) {
    if (z.empty()) return "";
    std::string out = "stratum ";
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (i) out += ",";
        out += z[i].first + "=" + z[i].second;
    }
    return out + ": ";
}

double inf_norm(const Matrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

// Unit vector spanning the (numerical) null space of m.
Vector null_vector(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    return svd.matrixV().col(m.cols() - 1);
}

// Range-checks a recovered probability and clamps it into [0, 1].
double checked_probability(double v, const Tolerances& tol, const std::string& what) {
    if (!std::isfinite(v) || v < -tol.prob || v > 1.0 + tol.prob) {
        std::ostringstream msg;
        msg << "recovered " << what << " = " << v << " lies outside [0, 1]; the model does not fit the data";
        throw RangeError(msg.str());
    }
    return std::clamp(v, 0.0, 1.0);
}

// Rows normalized by their first entry: P = diag(1 / inv(i,0)) inv.
Matrix normalize_rows(const Matrix& inv, const Tolerances& tol, Vector& normalizers) {
    const auto k = inv.rows();
    Matrix out(k, k);
    normalizers.resize(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double lead = inv(i, 0);
        const double scale = inv.row(i).cwiseAbs().maxCoeff();
        if (std::abs(lead) <= tol.pivot * std::max(scale, 1e-300)) {
            throw PivotError("first column of the inverse eigenvector matrix has a (near) zero entry; "
                             "the proxy conditionals cannot be normalized");
        }
        normalizers(i) = 1.0 / lead;
        out.row(i) = inv.row(i) / lead;
        out(i, 0) = 1.0;
    }
    return out;
}

Matrix invert(const Matrix& m, const char* what) {
    Eigen::FullPivLU<Matrix> lu(m);
    if (!lu.isInvertible()) throw PivotError(std::string(what) + " is not invertible");
    return lu.inverse();
}

Matrix build_matrix(const FloatTable& table, const ProxyDesign& d, const Assignment& z,
                    const Assignment& w) {
    const double fz = table.mass(z);
    if (fz <= 0) throw ZeroMassError(describe(z) + "stratum has zero mass");
    const auto k = static_cast<Eigen::Index>(d.k());
    Matrix out(k, k);
    const Assignment base = concat(z, w);
    for (Eigen::Index i = 0; i < k; ++i) {
        Assignment row = base;
        if (i > 0) row = concat(row, zip(d.s_vars, d.s_select[static_cast<std::size_t>(i - 1)]));
        for (Eigen::Index j = 0; j < k; ++j) {
            Assignment cell = row;
            if (j > 0) cell = concat(cell, zip(d.t_vars, d.t_select[static_cast<std::size_t>(j - 1)]));
            out(i, j) = table.mass(cell) / fz;
        }
    }
    return out;
}

}  // namespace

ProxyDesign ProxyDesign::with_defaults(const FloatTable& table) const {
    ProxyDesign d = *this;
    auto first = [&](const std::vector<std::string>& vars, std::size_t count) {
        auto all = value_vectors(table, vars);
        if (all.size() < count) {
            throw DesignError("domain of {" + (vars.empty() ? std::string{} : vars.front()) +
                              ",...} has fewer than " + std::to_string(count) + " value vectors");
        }
        all.resize(count);
        return all;
    };
    if (d.k() < 2) throw DesignError("latent variable needs at least two categories");
    if (d.s_select.empty() && !d.s_vars.empty()) d.s_select = first(d.s_vars, d.k() - 1);
    if (d.t_select.empty() && !d.t_vars.empty()) d.t_select = first(d.t_vars, d.k() - 1);
    if (d.w_select.empty() && !d.w_vars.empty()) d.w_select = first(d.w_vars, 1).front();
    return d;
}

void ProxyDesign::validate(const FloatTable& table) const {
    if (k() < 2) throw DesignError("latent variable needs at least two categories");
    if (k() > kMaxLatentCategories) throw SizeError("latent variable is limited to 16 categories");
    if (latent.name.empty()) throw DesignError("latent variable needs a name");
    if (table.has_variable(latent.name)) throw DesignError("latent '" + latent.name + "' appears in the data");
    if (s_vars.empty() || t_vars.empty()) throw DesignError("both proxy sets S and T must be non-empty");
    if (w_vars.empty()) throw DesignError("W must be non-empty; otherwise Q coincides with P");

    std::set<std::string> seen{latent.name};
    for (const auto* role : {&s_vars, &t_vars, &w_vars, &z_vars}) {
        for (const auto& v : *role) {
            table.variable_index(v);
            if (!seen.insert(v).second) throw DesignError("variable '" + v + "' has more than one role");
        }
    }

    auto check_vectors = [&](const std::vector<std::vector<std::string>>& sel,
                             const std::vector<std::string>& vars, const char* role, std::size_t count) {
        if (sel.size() != count) {
            throw DesignError(std::string("wrong number of selected ") + role + " vectors");
        }
        std::set<std::vector<std::string>> distinct;
        for (const auto& vec : sel) {
            if (vec.size() != vars.size()) {
                throw DesignError(std::string("selected ") + role + " vector has the wrong length");
            }
            for (std::size_t i = 0; i < vars.size(); ++i) {
                const auto& cats = table.variable(vars[i]).categories;
                if (std::find(cats.begin(), cats.end(), vec[i]) == cats.end()) {
                    throw DesignError("'" + vec[i] + "' is not a category of '" + vars[i] + "'");
                }
            }
            if (!distinct.insert(vec).second) {
                throw DesignError(std::string("selected ") + role + " vectors must be distinct");
            }
        }
    };
    check_vectors(s_select, s_vars, "S", k() - 1);
    check_vectors(t_select, t_vars, "T", k() - 1);
    check_vectors({w_select}, w_vars, "W", 1);
}

ProxyDesign design_from_json(const nlohmann::json& j) {
    try {
        ProxyDesign d;
        const auto& lat = j.at("latent");
        d.latent.name = lat.at("name").get<std::string>();
        d.latent.categories = lat.at("categories").get<std::vector<std::string>>();
        d.order_known = lat.value("order_known", true);
        const auto& roles = j.at("roles");
        auto role = [&](const char* key) {
            return roles.contains(key) ? roles.at(key).get<std::vector<std::string>>() : std::vector<std::string>{};
        };
        d.s_vars = role("S");
        d.t_vars = role("T");
        d.w_vars = role("W");
        d.z_vars = role("Z");
        if (j.contains("select")) {
            const auto& sel = j.at("select");
            if (sel.contains("s")) d.s_select = sel.at("s").get<std::vector<std::vector<std::string>>>();
            if (sel.contains("t")) d.t_select = sel.at("t").get<std::vector<std::vector<std::string>>>();
            if (sel.contains("w")) d.w_select = sel.at("w").get<std::vector<std::string>>();
        }
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("design JSON: ") + e.what());
    }
}

nlohmann::json design_to_json(const ProxyDesign& d) {
    return {{"latent", {{"name", d.latent.name}, {"categories", d.latent.categories}, {"order_known", d.order_known}}},
            {"roles", {{"S", d.s_vars}, {"T", d.t_vars}, {"W", d.w_vars}, {"Z", d.z_vars}}},
            {"select", {{"s", d.s_select}, {"t", d.t_select}, {"w", d.w_select}}}};
}

ProxyDesign design_for(const LatentModelSpec& spec) {
    ProxyDesign d;
    d.latent = spec.latent;
    d.order_known = spec.order_identifiable;
    d.s_vars = {spec.s.name};
    d.t_vars = {spec.t.name};
    d.w_vars = {spec.w.name};
    if (spec.z) d.z_vars = {spec.z->name};
    for (std::size_t i = 0; i + 1 < spec.k(); ++i) {
        d.s_select.push_back({spec.s.categories[i]});
        d.t_select.push_back({spec.t.categories[i]});
    }
    d.w_select = {spec.w.categories.front()};
    return d;
}

StratumMatrices build_PQ(const FloatTable& table, const ProxyDesign& design, const Assignment& z) {
    return {z, build_matrix(table, design, z, {}), build_matrix(table, design, z, zip(design.w_vars, design.w_select))};
}

Matrix build_Q(const FloatTable& table, const ProxyDesign& design, const Assignment& z,
               const std::vector<std::string>& w_values) {
    if (w_values.size() != design.w_vars.size()) throw DesignError("W value vector has the wrong length");
    return build_matrix(table, design, z, zip(design.w_vars, w_values));
}

EigenSystem generalized_eigs(const Matrix& P, const Matrix& Q, const Tolerances& tol) {
    const auto k = P.rows();
    if (P.cols() != k || Q.rows() != k || Q.cols() != k) throw PreconditionError("P and Q must be square and of equal size");
    if (k < 2) throw PreconditionError("need at least a 2x2 system");
    if (static_cast<std::size_t>(k) > kMaxLatentCategories) throw SizeError("eigen system limited to k <= 16");

    auto check_singular = [&](const Matrix& m, const char* name) {
        const double smallest = Eigen::JacobiSVD<Matrix>(m).singularValues()(k - 1);
        if (!(smallest > tol.singular * inf_norm(m))) {
            throw SingularMatrixError(std::string("condition (iii) fails: ") + name + " is singular");
        }
    };
    check_singular(P, "P");
    check_singular(Q, "Q");
    if ((P - Q).cwiseAbs().maxCoeff() <= tol.gap) {
        throw DegenerateSpectrumError("condition (iii) fails: P and Q coincide");
    }

    const Matrix R = P.fullPivLu().solve(Q);
    Eigen::EigenSolver<Matrix> es(R, false);
    if (es.info() != Eigen::Success) throw ComplexEigenvalueError("eigenvalue iteration did not converge");
    const auto& ev = es.eigenvalues();

    std::vector<double> lambdas;
    for (Eigen::Index i = 0; i < k; ++i) {
        if (std::abs(ev(i).imag()) > tol.gap) {
            std::ostringstream msg;
            msg << "condition (iii) fails: |Q - lambda P| = 0 has a complex root " << ev(i).real() << (ev(i).imag() < 0 ? "" : "+")
                << ev(i).imag() << "i";
            throw ComplexEigenvalueError(msg.str());
        }
        lambdas.push_back(ev(i).real());
    }
    std::sort(lambdas.begin(), lambdas.end());
    if (lambdas.front() <= 0) {
        std::ostringstream msg;
        msg << "condition (iii) fails: root " << lambdas.front() << " is not positive";
        throw NonPositiveEigenvalueError(msg.str());
    }
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (lambdas[i] - lambdas[i - 1] <= tol.gap) {
            std::ostringstream msg;
            msg << "condition (iii) fails: roots " << lambdas[i - 1] << " and " << lambdas[i] << " are not distinct";
            throw DegenerateSpectrumError(msg.str());
        }
    }

    EigenSystem sys;
    sys.lambdas = Eigen::Map<const Vector>(lambdas.data(), k);
    sys.A1.resize(k, k);
    sys.A2.resize(k, k);
    const double scale = std::max(1.0, inf_norm(P) + inf_norm(Q));
    for (Eigen::Index i = 0; i < k; ++i) {
        const Matrix right = Q - sys.lambdas(i) * P;
        const Matrix left = Q.transpose() - sys.lambdas(i) * P.transpose();
        sys.A1.col(i) = null_vector(right);
        sys.A2.col(i) = null_vector(left);
        const double r = std::max((right * sys.A1.col(i)).norm(), (left * sys.A2.col(i)).norm());
        sys.residual = std::max(sys.residual, r);
    }
    if (sys.residual > tol.residual * scale) {
        std::ostringstream msg;
        msg << "eigenvector residual " << sys.residual << " exceeds tolerance";
        throw DegenerateSpectrumError(msg.str());
    }
    return sys;
}

RecoveredFactors recover_factors(const EigenSystem& sys, const Matrix& P, const Matrix& Q,
                                 const Tolerances& tol) {
    const auto k = P.rows();
    RecoveredFactors f;
    f.lambdas = sys.lambdas;
    f.P1 = normalize_rows(invert(sys.A1, "A1"), tol, f.e1);
    f.P2 = normalize_rows(invert(sys.A2, "A2"), tol, f.e2);

    const Matrix P1inv = invert(f.P1, "P1");
    const Matrix Mfull = f.P2.transpose().fullPivLu().solve(P) * P1inv;
    f.m = Mfull.diagonal();
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            if (i != j) f.offdiag = std::max(f.offdiag, std::abs(Mfull(i, j)));
        }
    }
    if (f.offdiag > tol.diag) {
        std::ostringstream msg;
        msg << "P2'^-1 P P1^-1 is not diagonal (off-diagonal " << f.offdiag << ")";
        throw NonDiagonalError(msg.str());
    }

    for (Eigen::Index i = 0; i < k; ++i) {
        f.lambdas(i) = checked_probability(f.lambdas(i), tol, "f(w|u)");
        f.m(i) = checked_probability(f.m(i), tol, "f(u|z)");
        for (Eigen::Index j = 1; j < k; ++j) {
            f.P1(i, j) = checked_probability(f.P1(i, j), tol, "f(t|u)");
            f.P2(i, j) = checked_probability(f.P2(i, j), tol, "f(s|u)");
        }
    }
    if (f.m.sum() > 1.0 + tol.prob) throw RangeError("recovered f(u|z) sums to more than 1");

    const Matrix M = f.m.asDiagonal();
    const Matrix D = f.lambdas.asDiagonal();
    f.residual_P = (f.P2.transpose() * M * f.P1 - P).cwiseAbs().maxCoeff();
    f.residual_Q = (f.P2.transpose() * M * D * f.P1 - Q).cwiseAbs().maxCoeff();
    if (std::max(f.residual_P, f.residual_Q) > tol.recon) {
        std::ostringstream msg;
        msg << "recovered factors do not reproduce P and Q (residuals " << f.residual_P << ", " << f.residual_Q << ")";
        throw ReconstructionError(msg.str());
    }
    return f;
}

Vector recover_delta(const RecoveredFactors& f, const Matrix& P, const Matrix& Qw, const Tolerances& tol) {
    const Matrix D = f.P1 * P.fullPivLu().solve(Qw) * invert(f.P1, "P1");
    const auto k = D.rows();
    double off = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            if (i != j) off = std::max(off, std::abs(D(i, j)));
        }
    }
    if (off > tol.diag) {
        std::ostringstream msg;
        msg << "P1 P^-1 Q_w P1^-1 is not diagonal (off-diagonal " << off << ")";
        throw NonDiagonalError(msg.str());
    }
    Vector out(k);
    for (Eigen::Index i = 0; i < k; ++i) out(i) = checked_probability(D(i, i), tol, "f(w|u)");
    return out;
}

IdentificationResult identify_joint(const FloatTable& table, const ProxyDesign& design_in, const Tolerances& tol) {
    const ProxyDesign design = design_in.with_defaults(table);
    design.validate(table);
    if (!design.order_known) {
        throw OrderAmbiguityError("condition (ii) is not asserted for this design; the latent labeling is unknown "
                                  "(use order-free bounds instead)");
    }
    const auto k = static_cast<Eigen::Index>(design.k());
    const auto strata = enumerate_assignments(table, design.z_vars);
    const auto w_values = value_vectors(table, design.w_vars);

    std::vector<StratumIdentification> results;
    for (const auto& z : strata) {
        try {
            StratumIdentification s;
            s.z = z;
            s.fz = table.mass(z);
            if (s.fz <= 0) throw ZeroMassError("stratum has zero mass");
            s.matrices = build_PQ(table, design, z);
            const auto sys = generalized_eigs(s.matrices.P, s.matrices.Q, tol);
            const auto f = recover_factors(sys, s.matrices.P, s.matrices.Q, tol);

            // Label eigenvalue ranks so that f(u_1|z) < ... < f(u_k|z).
            std::vector<std::size_t> order(static_cast<std::size_t>(k));
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](auto a, auto b) {
                return f.m(static_cast<Eigen::Index>(a)) < f.m(static_cast<Eigen::Index>(b));
            });
            for (std::size_t c = 1; c < order.size(); ++c) {
                const double gap = f.m(static_cast<Eigen::Index>(order[c])) - f.m(static_cast<Eigen::Index>(order[c - 1]));
                if (gap <= tol.order) {
                    std::ostringstream msg;
                    msg << "condition (ii) cannot order the latent categories: two recovered f(u|z) differ by " << gap;
                    throw OrderAmbiguityError(msg.str());
                }
            }
            s.eigen_index = order;
            s.lambdas.resize(k);
            s.m.resize(k);
            s.P1.resize(k, k);
            s.P2.resize(k, k);
            for (Eigen::Index c = 0; c < k; ++c) {
                const auto e = static_cast<Eigen::Index>(order[static_cast<std::size_t>(c)]);
                s.lambdas(c) = f.lambdas(e);
                s.m(c) = f.m(e);
                s.P1.row(c) = f.P1.row(e);
                s.P2.row(c) = f.P2.row(e);
            }
            s.offdiag = f.offdiag;
            s.residual_P = f.residual_P;
            s.residual_Q = f.residual_Q;

            Vector total = Vector::Zero(k);
            for (const auto& w : w_values) {
                const Vector by_rank = recover_delta(f, s.matrices.P, build_Q(table, design, z, w), tol);
                Vector by_category(k);
                for (Eigen::Index c = 0; c < k; ++c) by_category(c) = by_rank(static_cast<Eigen::Index>(order[static_cast<std::size_t>(c)]));
                total += by_category;
                const double observed = table.mass(concat(z, zip(design.w_vars, w))) / s.fz;
                s.residual_w = std::max(s.residual_w, std::abs(by_category.dot(s.m) - observed));
                s.w_values.push_back(w);
                s.w_given_u.push_back(by_category);
            }
            const double row_drift = (total.array() - 1.0).abs().maxCoeff();
            if (s.residual_w > tol.recon || row_drift > tol.recon) {
                std::ostringstream msg;
                msg << "reconstructed f(w|u,z) does not reproduce f(w|z) (residual " << std::max(s.residual_w, row_drift)
                    << ")";
                throw ReconstructionError(msg.str());
            }
            results.push_back(std::move(s));
        } catch (Error& e) {
            e.prepend(describe(z));
            throw;
        }
    }

    Schema schema{design.latent};
    for (const auto& v : design.w_vars) schema.push_back(table.variable(v));
    for (const auto& v : design.z_vars) schema.push_back(table.variable(v));
    std::vector<double> probs;
    for (Eigen::Index u = 0; u < k; ++u) {
        for (std::size_t wi = 0; wi < w_values.size(); ++wi) {
            for (const auto& s : results) probs.push_back(s.w_given_u[wi](u) * s.m(u) * s.fz);
        }
    }
    auto joint = FloatTable::normalized(std::move(schema), std::move(probs));
    return {design, std::move(results), std::move(joint)};
}

EffectResult identify_causal_effect(const FloatTable& table, const CausalDiagram& g, const ProxyDesign& design,
                                    const Setting& x, const std::string& y, const Tolerances& tol) {
    return identify_causal_effect(identify_joint(table, design, tol), g, x, y);
}

EffectResult identify_causal_effect(const IdentificationResult& identified, const CausalDiagram& g,
                                    const Setting& x, const std::string& y) {
    const auto& d = identified.design;
    const std::string& u = d.latent.name;
    if ((x.variable == u) == (y == u)) {
        throw PreconditionError("exactly one of exposure and outcome must be the latent '" + u + "'");
    }
    const std::string& other = x.variable == u ? y : x.variable;
    const VertexSet observed_side = [&] {
        VertexSet s(d.w_vars.begin(), d.w_vars.end());
        s.insert(d.z_vars.begin(), d.z_vars.end());
        return s;
    }();
    if (!observed_side.count(other)) {
        throw PreconditionError("'" + other + "' must be one of the design's W or Z variables");
    }
    for (const auto* role : {&d.s_vars, &d.t_vars, &d.w_vars, &d.z_vars}) {
        for (const auto& v : *role) {
            if (!g.has_vertex(v)) throw SchemaMismatchError("diagram lacks design variable '" + v + "'");
        }
    }
    if (!g.has_vertex(u)) throw SchemaMismatchError("diagram lacks the latent '" + u + "'");

    VertexSet s_set(d.s_vars.begin(), d.s_vars.end());
    VertexSet t_set(d.t_vars.begin(), d.t_vars.end());
    VertexSet w_set(d.w_vars.begin(), d.w_vars.end());
    VertexSet given(d.z_vars.begin(), d.z_vars.end());
    given.insert(u);
    VertexSet st = s_set;
    st.insert(t_set.begin(), t_set.end());
    if (!d_separated(g, s_set, t_set, given) || !d_separated(g, w_set, st, given)) {
        throw IndependenceConditionError("condition (i) fails: Z and the latent do not d-separate S from T and W "
                                         "from S and T in the diagram");
    }

    VertexSet candidates = observed_side;
    candidates.erase(x.variable);
    candidates.erase(y);

    EffectResult r{Criterion::backdoor, {}, x, y, FloatTable({{y, {"_", "__"}}}, {0.5, 0.5})};
    if (auto adj = find_adjustment_set(g, x.variable, y, candidates, Criterion::backdoor)) {
        r.criterion = Criterion::backdoor;
        r.adjustment = *adj;
        r.distribution = backdoor_adjust(identified.joint, x, y, {adj->begin(), adj->end()});
    } else if (auto fd = find_adjustment_set(g, x.variable, y, candidates, Criterion::frontdoor)) {
        r.criterion = Criterion::frontdoor;
        r.adjustment = *fd;
        r.distribution = frontdoor_adjust(identified.joint, x, y, {fd->begin(), fd->end()});
    } else {
        throw NoCriterionError("no subset of the observed W and Z variables satisfies the back-door or front-door "
                               "criterion for (" + x.variable + ", " + y + ")");
    }
    return r;
}

OrderFreeBounds order_free_bounds(const FloatTable& table, const ProxyDesign& design_in, const Setting& x,
                                  const Tolerances& tol) {
    const ProxyDesign design = design_in.with_defaults(table);
    design.validate(table);
    if (design.w_vars.size() != 1 || design.w_vars.front() != x.variable) {
        throw PatternError("order-free bounds need W to be exactly the exposure '" + x.variable + "'");
    }
    table.category_index(table.variable_index(x.variable), x.value);

    OrderFreeBounds out;
    out.lower = 0;
    out.upper = 0;
    for (const auto& z : enumerate_assignments(table, design.z_vars)) {
        try {
            OrderFreeStratum s;
            s.z = z;
            s.fz = table.mass(z);
            if (s.fz <= 0) throw ZeroMassError("stratum has zero mass");
            s.fx_given_z = table.mass(concat(z, {{x.variable, x.value}})) / s.fz;
            if (s.fx_given_z <= 0) throw ZeroMassError("f(x|z) is zero");
            const auto pq = build_PQ(table, design, z);
            const auto f = recover_factors(generalized_eigs(pq.P, pq.Q, tol), pq.P, pq.Q, tol);
            const Vector fx_given_u = recover_delta(f, pq.P, build_Q(table, design, z, {x.value}), tol);
            for (Eigen::Index i = 0; i < f.m.size(); ++i) s.candidates.push_back(fx_given_u(i) * f.m(i) / s.fx_given_z);
            out.lower += *std::min_element(s.candidates.begin(), s.candidates.end()) * s.fz;
            out.upper += *std::max_element(s.candidates.begin(), s.candidates.end()) * s.fz;
            out.strata.push_back(std::move(s));
        } catch (Error& e) {
            e.prepend(describe(z));
            throw;
        }
    }
    out.lower = std::clamp(out.lower, 0.0, 1.0);
    out.upper = std::clamp(out.upper, 0.0, 1.0);
    return out;
}

ProxyDesign select_by_determinant(const FloatTable& table, const ProxyDesign& design, const Assignment& z) {
    const auto s_all = value_vectors(table, design.s_vars);
    const auto t_all = value_vectors(table, design.t_vars);
    const std::size_t need = design.k() - 1;
    if (s_all.size() < need || t_all.size() < need) throw DesignError("proxy domains are smaller than k-1");

    auto combos = [&](std::size_t n) {
        std::vector<std::vector<std::size_t>> out;
        std::vector<std::size_t> pick(need);
        std::iota(pick.begin(), pick.end(), 0);
        while (true) {
            out.push_back(pick);
            if (out.size() > 5000) throw SizeError("too many candidate selections");
            std::size_t i = need;
            while (i > 0 && pick[i - 1] == n - need + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < need; ++j) pick[j] = pick[j - 1] + 1;
        }
        return out;
    };
    const auto s_combos = combos(s_all.size());
    const auto t_combos = combos(t_all.size());

    ProxyDesign best = design.with_defaults(table);
    double best_det = -1;
    for (const auto& sc : s_combos) {
        for (const auto& tc : t_combos) {
            ProxyDesign d = best;
            d.s_select.clear();
            d.t_select.clear();
            for (auto i : sc) d.s_select.push_back(s_all[i]);
            for (auto i : tc) d.t_select.push_back(t_all[i]);
            const double det = std::abs(build_matrix(table, d, z, {}).determinant());
            if (det > best_det) {
                best_det = det;
                best.s_select = d.s_select;
                best.t_select = d.t_select;
            }
        }
    }
    return best;
}

nlohmann::json identification_to_json(const IdentificationResult& r) {
    auto matrix_json = [](const Matrix& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            std::vector<double> row(m.cols());
            for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
            rows.push_back(row);
        }
        return rows;
    };
    auto vector_json = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };

    nlohmann::json strata = nlohmann::json::array();
    for (const auto& s : r.strata) {
        nlohmann::json z = nlohmann::json::object();
        for (const auto& [var, val] : s.z) z[var] = val;
        nlohmann::json w = nlohmann::json::array();
        for (std::size_t i = 0; i < s.w_values.size(); ++i) {
            w.push_back({{"w", s.w_values[i]}, {"f_w_given_u", vector_json(s.w_given_u[i])}});
        }
        strata.push_back({{"z", z},
                          {"f_z", s.fz},
                          {"P", matrix_json(s.matrices.P)},
                          {"Q", matrix_json(s.matrices.Q)},
                          {"lambda", vector_json(s.lambdas)},
                          {"P1", matrix_json(s.P1)},
                          {"P2", matrix_json(s.P2)},
                          {"M", vector_json(s.m)},
                          {"eigen_rank", s.eigen_index},
                          {"w_given_u", w},
                          {"residuals",
                           {{"offdiag", s.offdiag}, {"P", s.residual_P}, {"Q", s.residual_Q}, {"w", s.residual_w}}}});
    }
    return {{"design", design_to_json(r.design)}, {"strata", strata}, {"joint", table_to_json(r.joint)}};
}

}  // namespace proxycause
