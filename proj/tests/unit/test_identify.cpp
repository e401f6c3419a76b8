#include "proxycause/errors.hpp"
#include "proxycause/identify.hpp"

#include <doctest.h>

#include <algorithm>
#include <fstream>

using namespace proxycause;

namespace {

const std::string kData = PROXYCAUSE_DATA_DIR;

FloatTable table1() { return to_float(load_table_csv_file(kData + "/table1.csv")); }

ProxyDesign table1_design() {
    std::ifstream in(kData + "/table1_design.json");
    return design_from_json(nlohmann::json::parse(in));
}

// Compares recovered factors with the spec that generated the table.
void check_against_spec(const IdentificationResult& r, const LatentModelSpec& spec, double tol) {
    auto index = [](const Variable& v, const std::vector<std::string>& label) {
        return static_cast<std::size_t>(std::find(v.categories.begin(), v.categories.end(), label[0]) - v.categories.begin());
    };
    REQUIRE(r.strata.size() == spec.strata.size());
    for (std::size_t zi = 0; zi < spec.strata.size(); ++zi) {
        const auto& s = r.strata[zi];
        const auto& truth = spec.strata[zi];
        for (std::size_t u = 0; u < spec.k(); ++u) {
            const auto i = static_cast<Eigen::Index>(u);
            CHECK(s.m(i) == doctest::Approx(to_double(truth.prior[u])).epsilon(tol));
            for (std::size_t j = 1; j < spec.k(); ++j) {
                const auto jj = static_cast<Eigen::Index>(j);
                const auto tj = index(spec.t, r.design.t_select[j - 1]);
                const auto sj = index(spec.s, r.design.s_select[j - 1]);
                CHECK(s.P1(i, jj) == doctest::Approx(to_double(truth.t_given_u[u][tj])).epsilon(tol));
                CHECK(s.P2(i, jj) == doctest::Approx(to_double(truth.s_given_u[u][sj])).epsilon(tol));
            }
            for (std::size_t w = 0; w < s.w_values.size(); ++w)
                CHECK(s.w_given_u[w](i) == doctest::Approx(to_double(truth.w_given_u[u][w])).epsilon(tol));
        }
    }
}

}  // namespace

TEST_CASE("worked table") {
    auto r = identify_joint(table1(), table1_design());
    REQUIRE(r.strata.size() == 1);
    const auto& s = r.strata[0];
    CHECK(s.m(0) == doctest::Approx(0.45).epsilon(1e-9));
    CHECK(s.m(1) == doctest::Approx(0.55).epsilon(1e-9));
    CHECK(s.residual_P < 1e-9);
    CHECK(s.residual_Q < 1e-9);
    auto g = fixtures::proxy_submodel();
    CHECK(identify_causal_effect(r, g, {"X", "x1"}, "Y").distribution.probs()[0] == doctest::Approx(0.8));
    CHECK(identify_causal_effect(r, g, {"X", "x0"}, "Y").distribution.probs()[0] == doctest::Approx(0.3));
    auto j = identification_to_json(r);
    CHECK(j.contains("strata"));
}

TEST_CASE("generated models are recovered") {
    for (std::size_t k : {2u, 3u, 4u}) {
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            auto spec = sample_latent_spec(k, 1 + seed % 3, seed);
            auto gen = generate_latent_model<double>(spec);
            CAPTURE(k);
            CAPTURE(seed);
            auto r = identify_joint(gen.observable, design_for(spec));
            check_against_spec(r, spec, 1e-7);
            // The recovered joint equals the true margin over U, W, Z.
            std::vector<std::string> vars{"U", "W"};
            if (spec.z) vars.push_back(spec.z->name);
            auto truth = marginal(gen.truth, vars);
            auto got = marginal(r.joint, vars);
            for (std::size_t i = 0; i < truth.size(); ++i)
                CHECK(got.probs()[i] == doctest::Approx(truth.probs()[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("swapping the roles of the two proxies leaves the prior unchanged") {
    auto spec = sample_latent_spec(3, 1, 19);
    auto gen = generate_latent_model<double>(spec);
    auto d = design_for(spec);
    auto swapped = d;
    std::swap(swapped.s_vars, swapped.t_vars);
    std::swap(swapped.s_select, swapped.t_select);
    auto a = identify_joint(gen.observable, d);
    auto b = identify_joint(gen.observable, swapped);
    for (Eigen::Index i = 0; i < 3; ++i) {
        CHECK(a.strata[0].m(i) == doctest::Approx(b.strata[0].m(i)).epsilon(1e-9));
        CHECK(a.strata[0].P1(i, 1) == doctest::Approx(b.strata[0].P2(i, 1)).epsilon(1e-9));
    }
}

TEST_CASE("generalized eigenvalues of a known pencil") {
    Matrix P(2, 2), Q(2, 2);
    P << 2, 1, 1, 3;
    Matrix D = Matrix::Zero(2, 2);
    D(0, 0) = 0.25;
    D(1, 1) = 0.75;
    Q = P * D;  // Q - lambda P = P (D - lambda)
    auto sys = generalized_eigs(P, Q);
    CHECK(sys.lambdas(0) == doctest::Approx(0.25));
    CHECK(sys.lambdas(1) == doctest::Approx(0.75));
    CHECK(sys.residual < 1e-12);

    CHECK_THROWS_AS(generalized_eigs(P, P), DegenerateSpectrumError);
    Matrix S(2, 2);
    S << 1, 2, 2, 4;
    CHECK_THROWS_AS(generalized_eigs(S, Q), SingularMatrixError);
    Matrix R(2, 2);
    R << 0, -1, 1, 0;  // rotation: eigenvalues +-i
    CHECK_THROWS_AS(generalized_eigs(Matrix::Identity(2, 2), R), ComplexEigenvalueError);
    Matrix N = Matrix::Identity(2, 2);
    N(0, 0) = -0.5;
    CHECK_THROWS_AS(generalized_eigs(Matrix::Identity(2, 2), N), NonPositiveEigenvalueError);
}

TEST_CASE("failure modes") {
    SUBCASE("proxy independent of the latent") {
        // S carries no information about U, so P is rank one.
        ExactTable t({{"S", {"s0", "s1"}}, {"T", {"t0", "t1"}}, {"W", {"w0", "w1"}}},
                     std::vector<Rational>(8, Rational(1, 8)));
        ProxyDesign d;
        d.latent = {"U", {"u1", "u2"}};
        d.s_vars = {"S"};
        d.t_vars = {"T"};
        d.w_vars = {"W"};
        CHECK_THROWS_AS(identify_joint(to_float(t), d), IdentificationError);
    }
    SUBCASE("unknown order") {
        auto d = table1_design();
        d.order_known = false;
        CHECK_THROWS_AS(identify_joint(table1(), d), OrderAmbiguityError);
    }
    SUBCASE("bad design") {
        auto d = table1_design();
        d.s_vars = {"Q"};
        CHECK_THROWS_AS(identify_joint(table1(), d), InputError);
        d = table1_design();
        d.t_vars = {"S"};
        CHECK_THROWS_AS(identify_joint(table1(), d), DesignError);
    }
}

TEST_CASE("order-free bounds") {
    auto b = order_free_bounds(table1(), table1_design(), {"X", "x1"});
    CHECK(b.lower == doctest::Approx(0.2));
    CHECK(b.upper == doctest::Approx(0.8));
    CHECK(b.lower <= b.upper);

    // With one latent category pinned by the data, the interval has zero width
    // when both candidates coincide; here X is independent of U.
    auto spec = sample_latent_spec(2, 1, 4);
    for (auto& row : spec.strata[0].w_given_u) row = {Rational(3, 10), Rational(7, 10)};
    auto gen = generate_latent_model<double>(spec);
    auto d = design_for(spec);
    CHECK_THROWS_AS(order_free_bounds(gen.observable, d, {"W", "w1"}), IdentificationError);

    auto wrong = table1_design();
    wrong.w_vars = {"T"};
    wrong.w_select = {"t0"};
    wrong.t_vars = {"X"};
    wrong.t_select = {{"x1"}};
    CHECK_THROWS_AS(order_free_bounds(table1(), wrong, {"X", "x1"}), PatternError);
}

TEST_CASE("selection by determinant") {
    SamplingMargins margins;
    margins.proxy_categories = 4;
    auto spec = sample_latent_spec(3, 1, 3, margins);
    auto gen = generate_latent_model<double>(spec);
    auto d = design_for(spec);
    auto best = select_by_determinant(gen.observable, d);
    const double det_best = std::abs(build_PQ(gen.observable, best, {}).P.determinant());
    const double det_default = std::abs(build_PQ(gen.observable, d.with_defaults(gen.observable), {}).P.determinant());
    CHECK(det_best >= det_default);
    REQUIRE(best.s_select.size() == 2);
    check_against_spec(identify_joint(gen.observable, best), spec, 1e-6);
}
