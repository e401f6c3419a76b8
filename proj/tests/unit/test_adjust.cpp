#include "proxycause/adjust.hpp"
#include "proxycause/errors.hpp"

#include <doctest.h>

#include <random>

using namespace proxycause;

namespace {

// Binary structural model over V0..V{n-1} in topological order. cpt[v][pa]
// is the probability that v takes category 1 given the parents' bits.
struct Model {
    int n = 0;
    std::vector<std::vector<int>> parents;
    std::vector<std::vector<double>> cpt;

    double joint(unsigned bits, int forced = -1, int forced_value = 0) const {
        double p = 1;
        for (int v = 0; v < n; ++v) {
            const int val = (bits >> v) & 1;
            if (v == forced) {
                if (val != forced_value) return 0;
                continue;
            }
            unsigned key = 0;
            for (std::size_t i = 0; i < parents[v].size(); ++i) key |= ((bits >> parents[v][i]) & 1u) << i;
            const double q = cpt[v][key];
            p *= val ? q : 1 - q;
        }
        return p;
    }
};

std::string vname(int v) { return "V" + std::to_string(v); }

Model random_model(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.1, 0.9);
    Model m;
    m.n = n;
    m.parents.resize(n);
    m.cpt.resize(n);
    for (int v = 0; v < n; ++v) {
        for (int u = 0; u < v; ++u)
            if (rng() % 2) m.parents[v].push_back(u);
        m.cpt[v].resize(std::size_t{1} << m.parents[v].size());
        for (auto& q : m.cpt[v]) q = unit(rng);
    }
    return m;
}

FloatTable observed(const Model& m, const std::vector<int>& keep) {
    Schema schema;
    for (int v : keep) schema.push_back({vname(v), {"0", "1"}});
    std::vector<double> probs(std::size_t{1} << keep.size(), 0.0);
    for (unsigned bits = 0; bits < (1u << m.n); ++bits) {
        std::size_t f = 0;
        for (int v : keep) f = f * 2 + ((bits >> v) & 1);
        probs[f] += m.joint(bits);
    }
    return FloatTable::normalized(schema, probs);
}

double interventional(const Model& m, int x, int xv, int y) {
    double p = 0;
    for (unsigned bits = 0; bits < (1u << m.n); ++bits)
        if ((bits >> y) & 1) p += m.joint(bits, x, xv);
    return p;
}

CausalDiagram diagram(const Model& m) {
    std::vector<std::string> vs;
    std::vector<Edge> es;
    for (int v = 0; v < m.n; ++v) {
        vs.push_back(vname(v));
        for (int p : m.parents[v]) es.emplace_back(vname(p), vname(v));
    }
    return CausalDiagram::build(vs, es);
}

}  // namespace

TEST_CASE("truncated factorization and back-door match the structural model") {
    std::mt19937_64 rng(5);
    std::vector<int> all{0, 1, 2, 3, 4, 5};
    for (int trial = 0; trial < 60; ++trial) {
        auto m = random_model(6, rng);
        auto table = observed(m, all);
        auto g = diagram(m);
        const int x = static_cast<int>(rng() % 5);
        const int y = x + 1 + static_cast<int>(rng() % (5 - x));
        const int xv = static_cast<int>(rng() % 2);
        const double truth = interventional(m, x, xv, y);
        CAPTURE(trial);
        const Setting s{vname(x), std::to_string(xv)};
        auto t = intervene_truncated(table, g, s, vname(y));
        CHECK(t.probs()[1] == doctest::Approx(truth).epsilon(1e-10));
        std::vector<std::string> pa;
        for (int p : m.parents[x]) pa.push_back(vname(p));
        auto b = backdoor_adjust(table, s, vname(y), pa);
        CHECK(b.probs()[1] == doctest::Approx(truth).epsilon(1e-10));
        CHECK(satisfies_backdoor(g, vname(x), vname(y), VertexSet(pa.begin(), pa.end())).holds);
    }
}

TEST_CASE("front-door recovers the effect under latent confounding") {
    // V0 latent, V1 exposure, V2 mediator, V3 outcome: V0->V1, V0->V3, V1->V2->V3.
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.1, 0.9);
    for (int trial = 0; trial < 40; ++trial) {
        Model m;
        m.n = 4;
        m.parents = {{}, {0}, {1}, {0, 2}};
        m.cpt = {{unit(rng)}, {unit(rng), unit(rng)}, {unit(rng), unit(rng)},
                 {unit(rng), unit(rng), unit(rng), unit(rng)}};
        auto table = observed(m, {1, 2, 3});
        for (int xv = 0; xv < 2; ++xv) {
            auto f = frontdoor_adjust(table, {"V1", std::to_string(xv)}, "V3", {"V2"});
            CHECK(f.probs()[1] == doctest::Approx(interventional(m, 1, xv, 3)).epsilon(1e-10));
        }
    }
}

TEST_CASE("exact arithmetic and argument errors") {
    ExactTable t({{"X", {"0", "1"}}, {"Y", {"0", "1"}}},
                 {Rational(1, 4), Rational(1, 4), Rational(0), Rational(1, 2)});
    auto r = backdoor_adjust(t, {"X", "1"}, "Y", {});
    CHECK(r.probs()[1] == Rational(1));
    CHECK_THROWS_AS(backdoor_adjust(t, {"X", "1"}, "X", {}), PreconditionError);
    CHECK_THROWS_AS(backdoor_adjust(t, {"X", "2"}, "Y", {}), UnknownVariableError);
    CHECK_THROWS_AS(backdoor_adjust(t, {"X", "1"}, "Y", {"Y"}), PreconditionError);

    ExactTable z({{"Z", {"0", "1"}}, {"X", {"0", "1"}}, {"Y", {"0", "1"}}},
                 {Rational(1, 4), Rational(1, 4), Rational(0), Rational(0), Rational(1, 8), Rational(1, 8),
                  Rational(1, 8), Rational(1, 8)});
    CHECK_THROWS_AS(backdoor_adjust(z, {"X", "1"}, "Y", {"Z"}), PositivityError);

    auto g = CausalDiagram::build({"X", "Y"}, {{"X", "Y"}}, {{"X", "Y"}});
    CHECK_THROWS_AS(intervene_truncated(t, g, {"X", "1"}, "Y"), SchemaMismatchError);
}
