#include "proxycause/cli.hpp"

#include "proxycause/bounds.hpp"
#include "proxycause/identify.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace proxycause::cli {

namespace {

struct Diagnostic {
    std::string code;
    std::string message;
};

struct Report {
    std::string command;
    std::vector<std::string> inputs;
    nlohmann::json parameters = nlohmann::json::object();
    nlohmann::json outputs = nlohmann::json::object();
    std::vector<Diagnostic> diagnostics;
    int exit_status = ok;

    nlohmann::json to_json() const {
        nlohmann::json diags = nlohmann::json::array();
        for (const auto& d : diagnostics) diags.push_back({{"code", d.code}, {"message", d.message}});
        return {{"command", command},
                {"inputs_digest", inputs_digest(inputs)},
                {"parameters", parameters},
                {"outputs", outputs},
                {"diagnostics", diags},
                {"exit_status", exit_status}};
    }
};

struct Common {
    bool json = false;
    std::string out_path;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_flag("--json", c.json, "Print the JSON report instead of the summary");
    cmd->add_option("--out", c.out_path, "Also write the JSON report to this file");
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string join(const std::vector<std::string>& items, const char* sep = ", ") {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
    return out;
}

std::string join(const VertexSet& items) { return join(std::vector<std::string>(items.begin(), items.end())); }

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
    if (!out) throw InputError("failed writing '" + path + "'");
}

ExactTable load_data(const std::string& path, const std::string& schema_path, Report& report) {
    report.inputs.push_back(path);
    std::optional<Schema> schema;
    if (!schema_path.empty()) {
        report.inputs.push_back(schema_path);
        schema = schema_from_json(read_json(schema_path));
    }
    return load_table_csv_file(path, schema);
}

int exit_code_for(const Error& e) {
    if (dynamic_cast<const InputError*>(&e)) return input_error;
    return identification_failed;
}

int finish(Report& report, const Common& common, const std::string& summary, std::ostream& out,
           std::ostream& err) {
    for (const auto& d : report.diagnostics) err << report.command << ": [" << d.code << "] " << d.message << "\n";
    const auto text = report.to_json().dump(2) + "\n";
    if (common.json) {
        out << text;
    } else {
        out << summary;
    }
    if (!common.out_path.empty()) {
        try {
            write_text(common.out_path, text);
        } catch (const Error& e) {
            err << report.command << ": [" << e.code() << "] " << e.what() << "\n";
            return input_error;
        }
    }
    return report.exit_status;
}

// Runs `body`, turning library errors into a diagnostic and exit status.
template <class Body>
int guarded(Report& report, const Common& common, std::ostream& out, std::ostream& err, Body&& body) {
    std::string summary;
    try {
        summary = body();
    } catch (const Error& e) {
        report.diagnostics.push_back({e.code(), e.what()});
        report.exit_status = exit_code_for(e);
        summary.clear();
    }
    return finish(report, common, summary, out, err);
}

std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

std::string fmt(const Rational& v) {
    std::string exact = to_fraction_string(v);
    std::string dec = to_decimal_string(v);
    return exact == dec ? exact : dec + " (" + exact + ")";
}

// ---- check ----------------------------------------------------------------

struct CheckArgs {
    Common common;
    std::string model;
    std::string pair;
    std::string given;
    std::string criterion = "backdoor";
};

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
    Report report;
    report.command = "check";
    report.parameters = {{"model", a.model}, {"pair", a.pair}, {"set", split(a.given)}, {"criterion", a.criterion}};
    return guarded(report, a.common, out, err, [&] {
        report.inputs.push_back(a.model);
        const auto g = load_diagram(a.model);
        const auto pair = split(a.pair);
        if (pair.size() != 2) throw FormatError("--pair needs exactly two vertices, e.g. X,Y");
        const auto given_list = split(a.given);
        const VertexSet given(given_list.begin(), given_list.end());
        for (const auto& v : pair) {
            if (!g.has_vertex(v)) throw UnknownVertexError("unknown vertex '" + v + "'");
        }
        for (const auto& v : given) {
            if (!g.has_vertex(v)) throw UnknownVertexError("unknown vertex '" + v + "'");
        }
        const auto crit = criterion_from_string(a.criterion);
        CriterionReport r;
        switch (crit) {
            case Criterion::dseparation: r = check_dseparation(g, {pair[0]}, {pair[1]}, given); break;
            case Criterion::backdoor: r = satisfies_backdoor(g, pair[0], pair[1], given); break;
            case Criterion::frontdoor: r = satisfies_frontdoor(g, pair[0], pair[1], given); break;
        }
        report.outputs = criterion_report_to_json(r);
        report.exit_status = r.holds ? ok : criterion_not_held;

        std::string s = to_string(crit) + " for (" + pair[0] + ", " + pair[1] + ") given {" + join(given) + "}: ";
        if (r.holds) return s + "holds\n";
        s += "does not hold";
        if (!r.failed_clauses.empty()) {
            std::vector<std::string> c;
            for (int i : r.failed_clauses) c.push_back(std::to_string(i));
            s += " (clause " + join(c) + ")";
        }
        s += "\n";
        if (r.failing_path) s += "  path: " + join(*r.failing_path, " ~ ") + "\n";
        if (!r.detail.empty()) s += "  " + r.detail + "\n";
        return s;
    });
}

// ---- identify -------------------------------------------------------------

struct IdentifyArgs {
    Common common;
    std::string data;
    std::string design;
    std::string model;
    std::string schema;
    std::vector<std::string> exposures;
    std::string outcome;
    bool order_free = false;
};

struct EffectRequest {
    std::string exposure;
    std::vector<std::string> values;
    std::string outcome;
    bool explicit_request = false;
};

std::vector<EffectRequest> effect_requests(const IdentifyArgs& a, const ProxyDesign& d, const CausalDiagram& g,
                                           const FloatTable& joint) {
    std::vector<EffectRequest> out;
    const std::string& u = d.latent.name;
    if (!a.exposures.empty()) {
        for (const auto& e : a.exposures) {
            EffectRequest r;
            r.explicit_request = true;
            const auto eq = e.find('=');
            r.exposure = e.substr(0, eq);
            if (eq != std::string::npos) {
                r.values = {e.substr(eq + 1)};
            } else {
                r.values = joint.variable(r.exposure).categories;
            }
            r.outcome = !a.outcome.empty() ? a.outcome : u;
            if (r.outcome == r.exposure) throw PreconditionError("--outcome must differ from the exposure");
            out.push_back(std::move(r));
        }
        return out;
    }
    std::vector<std::string> observed = d.w_vars;
    observed.insert(observed.end(), d.z_vars.begin(), d.z_vars.end());
    for (const auto& v : observed) {
        if (!g.has_vertex(v) || !g.has_vertex(u)) continue;
        if (g.is_descendant(u, v)) {
            out.push_back({v, joint.variable(v).categories, u, false});
        } else if (g.is_descendant(v, u)) {
            out.push_back({u, d.latent.categories, v, false});
        }
    }
    return out;
}

int cmd_identify(const IdentifyArgs& a, std::ostream& out, std::ostream& err) {
    Report report;
    report.command = "identify";
    report.parameters = {{"data", a.data},         {"design", a.design},   {"model", a.model},
                         {"schema", a.schema},     {"exposure", a.exposures}, {"outcome", a.outcome},
                         {"order_free", a.order_free}};
    return guarded(report, a.common, out, err, [&] {
        const auto exact = load_data(a.data, a.schema, report);
        report.inputs.push_back(a.design);
        report.inputs.push_back(a.model);
        const auto design = design_from_json(read_json(a.design));
        const auto g = load_diagram(a.model);
        const auto table = to_float(exact);
        std::ostringstream s;

        if (a.order_free) {
            if (design.w_vars.size() != 1) throw PatternError("order-free bounds need W to be a single exposure");
            const auto& x = design.w_vars.front();
            nlohmann::json bounds = nlohmann::json::array();
            s << "order-free bounds on f(" << design.latent.name << " = u | set(" << x << "))"
              << " over every labeling of the latent categories:\n";
            for (const auto& value : table.variable(x).categories) {
                const auto b = order_free_bounds(table, design, {x, value});
                bounds.push_back({{"exposure", {{x, value}}}, {"lower", b.lower}, {"upper", b.upper}});
                s << "  " << x << "=" << value << ": [" << fmt(b.lower) << ", " << fmt(b.upper) << "]\n";
            }
            report.outputs["order_free_bounds"] = bounds;
            return s.str();
        }

        const auto result = identify_joint(table, design);
        report.outputs["identification"] = identification_to_json(result);

        const auto& d = result.design;
        s << "latent " << d.latent.name << " identified (" << d.k() << " categories, " << result.strata.size()
          << (result.strata.size() == 1 ? " stratum" : " strata") << ")\n";
        for (const auto& st : result.strata) {
            s << " ";
            for (const auto& [var, val] : st.z) s << " " << var << "=" << val;
            s << " f(" << d.latent.name << "):";
            for (Eigen::Index i = 0; i < st.m.size(); ++i) {
                s << " " << d.latent.categories[static_cast<std::size_t>(i)] << "=" << fmt(st.m(i));
            }
            s << "  roots:";
            for (Eigen::Index i = 0; i < st.lambdas.size(); ++i) s << " " << fmt(st.lambdas(i));
            s << "\n";
        }

        nlohmann::json effects = nlohmann::json::array();
        for (const auto& req : effect_requests(a, d, g, result.joint)) {
            for (const auto& value : req.values) {
                try {
                    const auto e = identify_causal_effect(result, g, {req.exposure, value}, req.outcome);
                    nlohmann::json dist = nlohmann::json::object();
                    const auto& cats = e.distribution.schema().front().categories;
                    s << "  f(" << req.outcome << " | set(" << req.exposure << "=" << value << ")) via "
                      << to_string(e.criterion) << " {" << join(e.adjustment) << "}:";
                    for (std::size_t i = 0; i < cats.size(); ++i) {
                        dist[cats[i]] = e.distribution.probs()[i];
                        s << " " << cats[i] << "=" << fmt(e.distribution.probs()[i]);
                    }
                    s << "\n";
                    effects.push_back({{"exposure", {{req.exposure, value}}},
                                       {"outcome", req.outcome},
                                       {"criterion", to_string(e.criterion)},
                                       {"adjustment", e.adjustment},
                                       {"distribution", dist}});
                } catch (const NoCriterionError& e) {
                    if (req.explicit_request) throw;
                    report.diagnostics.push_back({e.code(), e.what()});
                }
            }
        }
        report.outputs["effects"] = effects;
        return s.str();
    });
}

// ---- bounds ---------------------------------------------------------------

struct BoundsArgs {
    Common common;
    std::string data;
    std::string schema;
    std::string exposure;
    std::string proxies;
    std::string stratify;
    bool monotone = false;
    std::string convention = "conditional";
    std::string method = "lp";
    std::string emit_lp;
};

std::string bounds_line(const BoundsResult& r) {
    return "  " + r.method + " f(y1 | set(x" + std::to_string(r.target) + ")) in [" + fmt(r.lower) + ", " +
           fmt(r.upper) + "]\n";
}

int cmd_bounds(const BoundsArgs& a, std::ostream& out, std::ostream& err) {
    Report report;
    report.command = "bounds";
    report.parameters = {{"data", a.data},         {"schema", a.schema},     {"exposure", a.exposure},
                         {"proxies", a.proxies},   {"stratify", split(a.stratify)}, {"monotone", a.monotone},
                         {"convention", a.convention}, {"method", a.method}, {"emit_lp", a.emit_lp}};
    return guarded(report, a.common, out, err, [&] {
        const auto table = load_data(a.data, a.schema, report);
        const auto proxies = split(a.proxies);
        if (proxies.size() != 2) throw FormatError("--proxies needs exactly two variables, T first: T,S");
        const auto& t = proxies[0];
        const auto& s_var = proxies[1];
        const auto convention = convention_from_string(a.convention);
        const auto strat_vars = split(a.stratify);
        std::ostringstream s;

        const auto& xc = table.variable(a.exposure).categories;
        report.diagnostics.push_back(
            {"CATEGORY_ORDER", "index 0 of " + a.exposure + ", " + t + ", " + s_var + " is its first category (x0=" +
                                   xc.front() + ", x1=" + (xc.size() > 1 ? xc[1] : std::string("?")) + ")"});
        if (a.method != "closed" && convention == Convention::joint_compat) {
            report.diagnostics.push_back({"LP_USES_CONDITIONALS", "the LP always reads the cells as P(t, s | x)"});
        }
        if (a.method != "lp" && !a.monotone) {
            report.diagnostics.push_back(
                {"CLOSED_FORM_ASSUMES_MONOTONICITY", "closed-form bounds are only valid under monotonicity"});
        }
        s << "bounds on f(y1 | set(" << a.exposure << ")) with proxies T=" << t << ", S=" << s_var
          << (a.monotone ? ", monotone" : "") << "\n";

        auto emit_programs = [&](const ProxyCells& cond) {
            if (a.emit_lp.empty()) return;
            nlohmann::json j;
            for (int target = 0; target < 2; ++target) {
                j["x" + std::to_string(target)] = lp_to_json(build_program(cond, a.monotone, target).lp);
            }
            write_text(a.emit_lp, j.dump(2) + "\n");
        };

        if (strat_vars.empty()) {
            const auto cond = proxy_cells(table, a.exposure, t, s_var, Convention::conditional);
            const auto cells = proxy_cells(table, a.exposure, t, s_var, convention);
            report.outputs["cells"] = cells_to_json(cells);
            emit_programs(cond);
            if (a.method == "lp") {
                nlohmann::json results = nlohmann::json::array();
                for (int target = 0; target < 2; ++target) {
                    const auto r = lp_bounds(build_program(cond, a.monotone, target));
                    results.push_back(bounds_to_json(r));
                    s << bounds_line(r);
                }
                report.outputs["bounds"] = results;
            } else if (a.method == "closed") {
                const auto [b0, b1] = closed_form_bounds(cells);
                report.outputs["bounds"] = {bounds_to_json(b0), bounds_to_json(b1)};
                s << bounds_line(b0) << bounds_line(b1);
            } else {
                if (convention == Convention::joint_compat) {
                    const auto [b0, b1] = closed_form_bounds(cells);
                    report.outputs["closed_form_joint_compat"] = {bounds_to_json(b0), bounds_to_json(b1)};
                }
                const auto cert = certify_against_lp(cond, a.monotone);
                report.outputs["certification"] = certification_to_json(cert);
                for (const auto& tc : cert.targets) {
                    s << bounds_line(tc.closed);
                    if (tc.lp) {
                        s << bounds_line(*tc.lp) << "    delta (closed - lp): lower " << fmt(*tc.delta_lower)
                          << ", upper " << fmt(*tc.delta_upper) << "\n";
                    } else {
                        s << "  lp infeasible for f(y1 | set(x" << tc.target << "))\n";
                    }
                }
                if (cert.targets.front().lp_status == LPStatus::infeasible) {
                    report.diagnostics.push_back({"INFEASIBLE", "the observed proxy table is inconsistent with the "
                                                                "response-type model; closed forms are reported "
                                                                "but the LP has no feasible point"});
                    report.exit_status = identification_failed;
                }
            }
            return s.str();
        }

        std::vector<ProxyCells> strata;
        std::vector<Rational> pz;
        nlohmann::json per = nlohmann::json::array();
        for (const auto& z : enumerate_assignments(table, strat_vars)) {
            nlohmann::json zj = nlohmann::json::object();
            for (const auto& [var, val] : z) zj[var] = val;
            const Rational fz = table.mass(z);
            if (fz == 0) throw ZeroMassError("stratum " + zj.dump() + " has zero mass");
            strata.push_back(proxy_cells(table, a.exposure, t, s_var, convention, z));
            pz.push_back(fz);
            nlohmann::json entry{{"z", zj}, {"p_z", to_fraction_string(fz)}, {"cells", cells_to_json(strata.back())}};
            if (a.method == "both") {
                entry["certification"] =
                    certification_to_json(certify_against_lp(proxy_cells(table, a.exposure, t, s_var,
                                                                         Convention::conditional, z),
                                                             a.monotone));
            }
            per.push_back(std::move(entry));
        }
        report.outputs["strata"] = per;
        auto run = [&](StratumMethod m, const char* key) {
            const auto [b0, b1] = stratified_bounds(strata, pz, a.monotone, m);
            report.outputs[key] = {bounds_to_json(b0), bounds_to_json(b1)};
            s << bounds_line(b0) << bounds_line(b1);
        };
        if (a.method != "lp") run(StratumMethod::closed_form, "stratified_closed_form");
        if (a.method != "closed") run(StratumMethod::lp, "stratified_lp");
        return s.str();
    });
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
    Common common;
    std::size_t k = 2;
    std::uint64_t seed = 0;
    std::size_t strata = 1;
    std::string prefix;
};

CausalDiagram simulation_diagram(const LatentModelSpec& spec) {
    const auto& u = spec.latent.name;
    const auto& w = spec.w.name;
    std::vector<std::string> vertices;
    std::vector<Edge> edges;
    if (spec.z) {
        vertices.push_back(spec.z->name);
        edges.push_back({spec.z->name, u});
        edges.push_back({spec.z->name, w});
    }
    vertices.insert(vertices.end(), {w, u, spec.s.name, spec.t.name});
    edges.push_back({w, u});
    edges.push_back({u, spec.s.name});
    edges.push_back({u, spec.t.name});
    return CausalDiagram::build(vertices, edges);
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    Report report;
    report.command = "simulate";
    report.parameters = {{"k", a.k}, {"seed", a.seed}, {"strata", a.strata}, {"out_prefix", a.prefix}};
    return guarded(report, a.common, out, err, [&] {
        if (a.k < 2 || a.k > 8) throw PreconditionError("--k must lie in [2, 8]");
        if (a.strata < 1 || a.strata > 16) throw PreconditionError("--strata must lie in [1, 16]");
        const auto spec = sample_latent_spec(a.k, a.strata, a.seed);
        const auto model = generate_latent_model<Rational>(spec);

        std::ostringstream csv;
        write_table_csv(csv, model.observable);
        const nlohmann::json truth{{"spec", spec_to_json(spec)}, {"truth", table_to_json(model.truth)}};
        const std::vector<std::pair<std::string, std::string>> files{
            {a.prefix + ".csv", csv.str()},
            {a.prefix + ".truth.json", truth.dump(2) + "\n"},
            {a.prefix + ".design.json", design_to_json(design_for(spec)).dump(2) + "\n"},
            {a.prefix + ".model.json", diagram_to_json(simulation_diagram(spec)).dump(2) + "\n"},
        };
        nlohmann::json written = nlohmann::json::array();
        std::string s = "simulated k=" + std::to_string(a.k) + ", seed=" + std::to_string(a.seed) +
                        ", strata=" + std::to_string(a.strata) + "\n";
        for (const auto& [path, text] : files) {
            write_text(path, text);
            written.push_back(path);
            s += "  wrote " + path + "\n";
        }
        report.outputs["files"] = written;
        return s;
    });
}

}  // namespace

std::string inputs_digest(const std::vector<std::string>& paths) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    for (const auto& path : paths) {
        std::ifstream in(path, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        const std::string prefix = std::to_string(bytes.size()) + ":";
        EVP_DigestUpdate(ctx.get(), prefix.data(), prefix.size());
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size());
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md, &len);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return "sha256:" + hex.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Causal effects with proxies of an unobserved exposure or outcome", "proxycause"};
    app.require_subcommand(1);

    CheckArgs check;
    auto* c = app.add_subcommand("check", "Test d-separation or an adjustment criterion on a diagram");
    c->add_option("model", check.model, "Diagram JSON")->required();
    c->add_option("--pair", check.pair, "Two vertices, e.g. X,Y")->required();
    c->add_option("--set", check.given, "Conditioning or adjustment set, comma separated");
    c->add_option("--criterion", check.criterion, "dsep, backdoor or frontdoor")
        ->check(CLI::IsMember({"dsep", "backdoor", "frontdoor"}));
    add_common(c, check.common);

    IdentifyArgs ident;
    auto* i = app.add_subcommand("identify", "Recover the latent joint and causal effects");
    i->add_option("data", ident.data, "Observed table CSV")->required();
    i->add_option("design", ident.design, "Design JSON")->required();
    i->add_option("model", ident.model, "Diagram JSON")->required();
    i->add_option("--schema", ident.schema, "Schema JSON fixing category order");
    i->add_option("--exposure", ident.exposures, "Exposure variable, optionally VAR=value (repeatable)");
    i->add_option("--outcome", ident.outcome, "Outcome variable (default: the latent)");
    i->add_flag("--order-free", ident.order_free, "Report bounds valid under every latent labeling");
    add_common(i, ident.common);

    BoundsArgs bnd;
    auto* b = app.add_subcommand("bounds", "Bounds on f(y1 | set(x)) from two dichotomous proxies");
    b->add_option("data", bnd.data, "Observed table CSV")->required();
    b->add_option("--schema", bnd.schema, "Schema JSON fixing category order");
    b->add_option("--exposure", bnd.exposure, "Exposure X")->required();
    b->add_option("--proxies", bnd.proxies, "T,S")->required();
    b->add_option("--stratify", bnd.stratify, "Covariates Z, comma separated");
    b->add_flag("--monotone", bnd.monotone, "Exclude reversing response types");
    b->add_option("--convention", bnd.convention, "conditional or joint-compat")
        ->check(CLI::IsMember({"conditional", "joint-compat"}));
    b->add_option("--method", bnd.method, "lp, closed or both")->check(CLI::IsMember({"lp", "closed", "both"}));
    b->add_option("--emit-lp", bnd.emit_lp, "Write the linear programs as JSON");
    add_common(b, bnd.common);

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Write a random latent-class model and its observables");
    s->add_option("--k", sim.k, "Latent categories")->required();
    s->add_option("--seed", sim.seed, "Seed")->required();
    s->add_option("--strata", sim.strata, "Number of strata");
    s->add_option("--out-prefix", sim.prefix, "Output path prefix")->required();
    add_common(s, sim.common);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? ok : input_error;
    }

    try {
        if (*c) return cmd_check(check, out, err);
        if (*i) return cmd_identify(ident, out, err);
        if (*b) return cmd_bounds(bnd, out, err);
        return cmd_simulate(sim, out, err);
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace proxycause::cli
