#include "proxycause/latent_model.hpp"

#include <Eigen/Dense>

#include <random>
#include <set>

namespace proxycause {

namespace {

template <class Scalar>
Scalar convert(const Rational& r) {
    if constexpr (std::is_same_v<Scalar, Rational>) {
        return r;
    } else {
        return to_double(r);
    }
}

void check_distribution(const std::vector<Rational>& row, std::size_t size, const std::string& what) {
    if (row.size() != size) {
        throw SpecError(what + " has " + std::to_string(row.size()) + " entries, expected " + std::to_string(size));
    }
    Rational total = 0;
    for (const auto& v : row) {
        if (v < 0) throw SpecError(what + " has a negative entry");
        total += v;
    }
    if (total != 1) throw SpecError(what + " sums to " + to_fraction_string(total) + ", not 1");
}

void check_emission(const std::vector<std::vector<Rational>>& rows, std::size_t k, const Variable& v) {
    if (rows.size() != k) throw SpecError("f(" + v.name + "|u) needs one row per latent category");
    for (std::size_t u = 0; u < k; ++u) {
        check_distribution(rows[u], v.categories.size(), "f(" + v.name + "|u" + std::to_string(u + 1) + ")");
    }
}

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    // n positive integers, each >= min_units, summing to total.
    std::vector<long> composition(std::size_t n, long total, long min_units) {
        const long spare = total - min_units * static_cast<long>(n);
        if (spare < 0) throw SpecError("sampling margins leave no room for a distribution");
        std::vector<long> weights(n);
        long weight_sum = 0;
        for (auto& w : weights) {
            w = 1 + static_cast<long>(below(1000));
            weight_sum += w;
        }
        std::vector<long> parts(n);
        long used = 0;
        for (std::size_t i = 0; i < n; ++i) {
            parts[i] = min_units + weights[i] * spare / weight_sum;
            used += parts[i];
        }
        for (long left = total - used; left > 0; --left) ++parts[below(n)];
        return parts;
    }

private:
    std::mt19937_64 engine_;
};

std::vector<Rational> on_grid(const std::vector<long>& parts, long grid) {
    std::vector<Rational> out;
    for (auto p : parts) out.emplace_back(p, grid);
    for (auto& r : out) r.canonicalize();
    return out;
}

// Smallest singular value of [1, f(v_1|u), ..., f(v_{k-1}|u)].
double factor_min_singular(const std::vector<std::vector<Rational>>& rows) {
    const auto k = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        m(i, 0) = 1.0;
        for (Eigen::Index j = 1; j < k; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)].get_d();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(k - 1);
}

std::vector<std::string> labels(const std::string& prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

nlohmann::json rationals_to_json(const std::vector<Rational>& v) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : v) out.push_back(to_fraction_string(r));
    return out;
}

nlohmann::json rows_to_json(const std::vector<std::vector<Rational>>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) out.push_back(rationals_to_json(r));
    return out;
}

std::vector<Rational> rationals_from_json(const nlohmann::json& j) {
    std::vector<Rational> out;
    for (const auto& v : j) out.push_back(parse_rational(v.is_string() ? v.get<std::string>() : v.dump()));
    return out;
}

std::vector<std::vector<Rational>> rows_from_json(const nlohmann::json& j) {
    std::vector<std::vector<Rational>> out;
    for (const auto& r : j) out.push_back(rationals_from_json(r));
    return out;
}

nlohmann::json variable_to_json(const Variable& v) {
    return {{"name", v.name}, {"categories", v.categories}};
}

Variable variable_from_json(const nlohmann::json& j) {
    return {j.at("name").get<std::string>(), j.at("categories").get<std::vector<std::string>>()};
}

}  // namespace

void LatentModelSpec::validate() const {
    const auto kk = k();
    if (kk < 2) throw SpecError("latent variable needs at least two categories");
    std::set<std::string> names{latent.name, s.name, t.name, w.name};
    if (z) names.insert(z->name);
    if (names.size() != (z ? 5u : 4u)) throw SpecError("model variables need distinct names");
    for (const Variable* v : {&latent, &s, &t, &w}) {
        if (v->categories.size() < 2) throw SpecError("variable '" + v->name + "' needs at least two categories");
    }
    const std::size_t nz = z ? z->categories.size() : 1;
    if (z && nz < 2) throw SpecError("stratifier needs at least two categories");
    check_distribution(pz, nz, "f(z)");
    if (strata.size() != nz) throw SpecError("need one parameter block per stratum");
    for (std::size_t i = 0; i < nz; ++i) {
        const auto& st = strata[i];
        check_distribution(st.prior, kk, "f(u|z" + std::to_string(i + 1) + ")");
        check_emission(st.s_given_u, kk, s);
        check_emission(st.t_given_u, kk, t);
        check_emission(st.w_given_u, kk, w);
        if (order_identifiable) {
            for (std::size_t u = 1; u < kk; ++u) {
                if (!(st.prior[u - 1] < st.prior[u])) {
                    throw SpecError("prior is marked order-identifiable but is not strictly increasing");
                }
            }
        }
    }
}

template <class Scalar>
GeneratedModel<Scalar> generate_latent_model(const LatentModelSpec& spec) {
    spec.validate();
    const auto kk = spec.k();
    const auto ns = spec.s.categories.size();
    const auto nt = spec.t.categories.size();
    const auto nw = spec.w.categories.size();
    const std::size_t nz = spec.z ? spec.z->categories.size() : 1;

    Schema schema{spec.latent, spec.s, spec.t, spec.w};
    if (spec.z) schema.push_back(*spec.z);

    std::vector<Scalar> probs;
    probs.reserve(kk * ns * nt * nw * nz);
    for (std::size_t u = 0; u < kk; ++u) {
        for (std::size_t si = 0; si < ns; ++si) {
            for (std::size_t ti = 0; ti < nt; ++ti) {
                for (std::size_t wi = 0; wi < nw; ++wi) {
                    for (std::size_t zi = 0; zi < nz; ++zi) {
                        const auto& st = spec.strata[zi];
                        Scalar p = convert<Scalar>(spec.pz[zi]);
                        p *= convert<Scalar>(st.prior[u]);
                        p *= convert<Scalar>(st.s_given_u[u][si]);
                        p *= convert<Scalar>(st.t_given_u[u][ti]);
                        p *= convert<Scalar>(st.w_given_u[u][wi]);
                        probs.push_back(p);
                    }
                }
            }
        }
    }

    auto truth = [&] {
        if constexpr (ScalarTraits<Scalar>::exact) {
            return JointTable<Scalar>(schema, std::move(probs));
        } else {
            return JointTable<Scalar>::normalized(schema, std::move(probs));
        }
    }();
    std::vector<std::string> observed{spec.s.name, spec.t.name, spec.w.name};
    if (spec.z) observed.push_back(spec.z->name);
    auto observable = marginal(truth, observed);
    return {std::move(truth), std::move(observable)};
}

template GeneratedModel<Rational> generate_latent_model<Rational>(const LatentModelSpec&);
template GeneratedModel<double> generate_latent_model<double>(const LatentModelSpec&);

LatentModelSpec sample_latent_spec(std::size_t k, std::size_t strata, std::uint64_t seed,
                                   const SamplingMargins& margins) {
    if (k < 2) throw SpecError("k must be at least 2");
    if (strata < 1) throw SpecError("need at least one stratum");
    const long grid = margins.grid;
    auto units = [&](const Rational& r) {
        Rational scaled = r * grid;
        mpz_class c = scaled.get_num() / scaled.get_den();
        if (c * scaled.get_den() != scaled.get_num()) c += 1;
        return c.get_si();
    };
    const long min_units = units(margins.min_cell);
    const long prior_gap = units(margins.prior_gap);
    const std::size_t nproxy = margins.proxy_categories == 0 ? k : margins.proxy_categories;
    if (nproxy < k) throw SpecError("proxies need at least k categories");

    LatentModelSpec spec;
    spec.latent = {"U", labels("u", k)};
    spec.s = {"S", labels("s", nproxy)};
    spec.t = {"T", labels("t", nproxy)};
    spec.w = {"W", labels("w", margins.w_categories)};
    if (strata > 1) spec.z = Variable{"Z", labels("z", strata)};

    Sampler rng(seed);
    constexpr int max_tries = 200000;
    auto emission = [&](std::size_t ncat, bool check_factor) {
        for (int tries = 0; tries < max_tries; ++tries) {
            std::vector<std::vector<Rational>> rows;
            for (std::size_t u = 0; u < k; ++u) rows.push_back(on_grid(rng.composition(ncat, grid, min_units), grid));
            if (!check_factor || factor_min_singular(rows) >= margins.min_singular) return rows;
        }
        throw SpecError("could not sample a well-conditioned proxy distribution");
    };

    spec.pz = strata == 1 ? std::vector<Rational>{Rational(1)}
                          : on_grid(rng.composition(strata, grid, grid / static_cast<long>(4 * strata)), grid);
    for (std::size_t zi = 0; zi < strata; ++zi) {
        LatentModelSpec::Stratum st;
        for (int tries = 0;; ++tries) {
            if (tries == max_tries) throw SpecError("could not sample a prior with the requested gaps");
            auto parts = rng.composition(k, grid, min_units);
            std::sort(parts.begin(), parts.end());
            bool ok = true;
            for (std::size_t u = 1; u < k; ++u) ok = ok && parts[u] - parts[u - 1] >= prior_gap;
            if (ok) {
                st.prior = on_grid(parts, grid);
                break;
            }
        }
        st.s_given_u = emission(nproxy, true);
        st.t_given_u = emission(nproxy, true);
        for (int tries = 0;; ++tries) {
            if (tries == max_tries) throw SpecError("could not sample W rows with the requested eigengap");
            auto rows = emission(margins.w_categories, false);
            std::vector<Rational> first;
            for (const auto& r : rows) first.push_back(r[0]);
            std::sort(first.begin(), first.end());
            bool ok = true;
            for (std::size_t u = 1; u < k; ++u) ok = ok && first[u] - first[u - 1] >= margins.eigengap;
            if (ok) {
                st.w_given_u = std::move(rows);
                break;
            }
        }
        spec.strata.push_back(std::move(st));
    }
    spec.validate();
    return spec;
}

nlohmann::json spec_to_json(const LatentModelSpec& spec) {
    nlohmann::json j;
    j["k"] = spec.k();
    j["latent"] = variable_to_json(spec.latent);
    j["s"] = variable_to_json(spec.s);
    j["t"] = variable_to_json(spec.t);
    j["w"] = variable_to_json(spec.w);
    j["z"] = spec.z ? variable_to_json(*spec.z) : nlohmann::json(nullptr);
    j["pz"] = rationals_to_json(spec.pz);
    j["order_identifiable"] = spec.order_identifiable;
    nlohmann::json strata = nlohmann::json::array();
    for (const auto& st : spec.strata) {
        strata.push_back({{"prior", rationals_to_json(st.prior)},
                          {"s_given_u", rows_to_json(st.s_given_u)},
                          {"t_given_u", rows_to_json(st.t_given_u)},
                          {"w_given_u", rows_to_json(st.w_given_u)}});
    }
    j["strata"] = std::move(strata);
    return j;
}

LatentModelSpec spec_from_json(const nlohmann::json& j) {
    try {
        LatentModelSpec spec;
        spec.latent = variable_from_json(j.at("latent"));
        spec.s = variable_from_json(j.at("s"));
        spec.t = variable_from_json(j.at("t"));
        spec.w = variable_from_json(j.at("w"));
        if (j.contains("z") && !j.at("z").is_null()) spec.z = variable_from_json(j.at("z"));
        spec.pz = j.contains("pz") ? rationals_from_json(j.at("pz")) : std::vector<Rational>{Rational(1)};
        spec.order_identifiable = j.value("order_identifiable", true);
        for (const auto& st : j.at("strata")) {
            spec.strata.push_back({rationals_from_json(st.at("prior")), rows_from_json(st.at("s_given_u")),
                                   rows_from_json(st.at("t_given_u")), rows_from_json(st.at("w_given_u"))});
        }
        spec.validate();
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("model spec JSON: ") + e.what());
    }
}

}  // namespace proxycause
