#pragma once

#include "proxycause/table.hpp"

#include <cstdint>
#include <optional>

namespace proxycause {

/// Parameters of a discrete latent-class model: U with k categories, two
/// proxies S and T, an auxiliary W, and an optional stratifier Z. Within
/// each stratum S, T, W are independent given U.
struct LatentModelSpec {
    struct Stratum {
        std::vector<Rational> prior;                   // f(u | z)
        std::vector<std::vector<Rational>> s_given_u;  // [u][s]
        std::vector<std::vector<Rational>> t_given_u;  // [u][t]
        std::vector<std::vector<Rational>> w_given_u;  // [u][w]
    };

    Variable latent{"U", {}};
    Variable s{"S", {}};
    Variable t{"T", {}};
    Variable w{"W", {}};
    std::optional<Variable> z;
    std::vector<Rational> pz{Rational(1)};
    std::vector<Stratum> strata;
    /// Declares f(u_1|z) < ... < f(u_k|z) in every stratum.
    bool order_identifiable = true;

    std::size_t k() const { return latent.categories.size(); }

    /// Throws SpecError on any inconsistency.
    void validate() const;
};

template <class Scalar>
struct GeneratedModel {
    JointTable<Scalar> truth;       // over U, S, T, W[, Z]
    JointTable<Scalar> observable;  // over S, T, W[, Z]
};

/// Realizes f(z) f(u|z) f(s|u,z) f(t|u,z) f(w|u,z) as a dense table.
template <class Scalar>
GeneratedModel<Scalar> generate_latent_model(const LatentModelSpec& spec);

extern template GeneratedModel<Rational> generate_latent_model<Rational>(const LatentModelSpec&);
extern template GeneratedModel<double> generate_latent_model<double>(const LatentModelSpec&);

/// Rejection-sampling margins for random specs. Parameters live on a 1/grid
/// lattice so the generated tables are exact decimals.
struct SamplingMargins {
    long grid = 1000;
    Rational prior_gap{1, 50};   // consecutive f(u_i|z) differ by at least this
    Rational eigengap{1, 20};    // consecutive f(w_1|u_i,z) differ by at least this
    Rational min_cell{1, 100};   // every emission and prior entry at least this
    double min_singular = 0.05;  // smallest singular value of the proxy factor matrices
    std::size_t proxy_categories = 0;  // 0 means k
    std::size_t w_categories = 2;
};

/// Seed-deterministic random spec with k latent categories and `strata`
/// strata (no Z variable when strata == 1). Uses only raw engine output so the
/// stream is identical across standard libraries.
LatentModelSpec sample_latent_spec(std::size_t k, std::size_t strata, std::uint64_t seed,
                                   const SamplingMargins& margins = {});

nlohmann::json spec_to_json(const LatentModelSpec& spec);
LatentModelSpec spec_from_json(const nlohmann::json& j);

}  // namespace proxycause
