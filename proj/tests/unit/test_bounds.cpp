#include "response_oracle.hpp"

#include "proxycause/bounds.hpp"

#include <doctest.h>

#include <set>
#include <tuple>

using namespace proxycause;

namespace {

const std::string kData = PROXYCAUSE_DATA_DIR;

ProxyCells cells_of(const oracle::ResponseModel& m) {
    ProxyCells p;
    for (int t = 0; t < 2; ++t)
        for (int s = 0; s < 2; ++s)
            for (int x = 0; x < 2; ++x) p(t, s, x) = m.observed(t, s, x);
    return p;
}

std::size_t row_of(const CounterfactualProgram& prog, const std::string& label) {
    for (std::size_t r = 0; r < prog.row_labels.size(); ++r)
        if (prog.row_labels[r] == label) return r;
    FAIL("no row " << label);
    return 0;
}

std::set<std::tuple<int, int, int>> support(const CounterfactualProgram& prog, std::size_t r) {
    std::set<std::tuple<int, int, int>> out;
    for (std::size_t c = 0; c < prog.columns.size(); ++c)
        if (prog.lp.equalities[r].a[c] != 0) out.emplace(prog.columns[c].i, prog.columns[c].j, prog.columns[c].k);
    return out;
}

}  // namespace

TEST_CASE("program layout") {
    std::mt19937_64 rng(1);
    auto prog = build_program(cells_of(oracle::random_monotone_model(rng)), false, 1);
    CHECK(prog.columns.size() == 64);
    CHECK(prog.row_labels.front() == "sum");
    CHECK(prog.row_labels.size() == 9);
    CHECK(column_name({0, 1, 3}) == "q013");

    // Units landing in (t0, s0) under x1.
    std::set<std::tuple<int, int, int>> expected;
    for (int i : {0, 1})
        for (int j : {0, 1})
            for (int k : {0, 2}) expected.emplace(i, j, k);
    for (int i : {0, 2})
        for (int j : {0, 2})
            for (int k : {1, 3}) expected.emplace(i, j, k);
    CHECK(support(prog, row_of(prog, "p00.1")) == expected);

    auto mono = build_program(cells_of(oracle::random_monotone_model(rng)), true, 0);
    CHECK(mono.columns.size() == 27);
    for (const auto& c : mono.columns) CHECK((c.i != 2 && c.j != 2 && c.k != 2));
}

TEST_CASE("each x partitions the response types") {
    oracle::ResponseModel flat;
    for (auto& a : flat.weight)
        for (auto& b : a)
            for (auto& c : b) c = mpq_class(1, 64);
    auto prog = build_program(cells_of(flat), false, 1);
    for (int x = 0; x < 2; ++x) {
        std::vector<int> hits(prog.columns.size(), 0);
        for (int t = 0; t < 2; ++t)
            for (int s = 0; s < 2; ++s)
                for (auto [i, j, k] : support(prog, row_of(prog, "p" + std::to_string(t) + std::to_string(s) + "." + std::to_string(x)))) {
                    for (std::size_t c = 0; c < prog.columns.size(); ++c)
                        if (prog.columns[c] == ResponseIndex{i, j, k}) ++hits[c];
                }
        for (int h : hits) CHECK(h == 1);
    }
}

TEST_CASE("a point mass on any response type is feasible for its own cells") {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) {
                oracle::ResponseModel m;
                m.weight[i][j][k] = 1;
                auto prog = build_program(cells_of(m), false, 1);
                std::vector<Rational> q(prog.columns.size(), Rational(0));
                for (std::size_t c = 0; c < q.size(); ++c)
                    if (prog.columns[c] == ResponseIndex{i, j, k}) q[c] = 1;
                CHECK(is_feasible(prog.lp.equalities, q));
                CHECK(evaluate(prog.lp.objective, q) == m.effect(1));
            }
}

TEST_CASE("worked table closed forms") {
    auto table = load_table_csv_file(kData + "/table1.csv");
    auto joint = proxy_cells(table, "X", "T", "S", Convention::joint_compat);
    auto [x0, x1] = closed_form_bounds(joint);
    CHECK(x1.lower == Rational(169, 500));
    CHECK(x0.upper == Rational(861, 2500));
    CHECK(x1.lower_terms.size() == 4);
    CHECK(x0.upper_terms.size() == 4);

    auto cond = proxy_cells(table, "X", "T", "S");
    CHECK(to_conditional(joint).p == cond.p);
    auto [c0, c1] = closed_form_bounds(cond);
    CHECK(c1.lower == Rational(3, 10));
    CHECK(c0.upper == Rational(7, 10));
    CHECK_THROWS_AS(build_program(joint, false, 1), FormatError);
    CHECK_THROWS_AS(lp_bounds(build_program(cond, true, 1)), InfeasibleError);
}

TEST_CASE("closed forms equal the monotone LP and contain the truth") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        auto m = oracle::random_monotone_model(rng);
        auto cells = cells_of(m);
        auto [c0, c1] = closed_form_bounds(cells);
        auto l0 = lp_bounds(build_program(cells, true, 0));
        auto l1 = lp_bounds(build_program(cells, true, 1));
        CAPTURE(trial);
        CHECK(c0.upper == l0.upper);
        CHECK(c1.lower == l1.lower);
        CHECK(c1.lower <= m.effect(1));
        CHECK(m.effect(0) <= c0.upper);

        // Dropping monotonicity only widens the interval.
        auto u1 = lp_bounds(build_program(cells, false, 1));
        CHECK(u1.lower <= l1.lower);
        CHECK(l1.upper <= u1.upper);

        auto cert = certify_against_lp(cells, true);
        for (const auto& t : cert.targets) CHECK(t.agree);
    }
}

TEST_CASE("independent proxies give a zero lower bound") {
    oracle::ResponseModel m;
    // Y ignores X; T and S follow Y.
    m.weight[1][1][0] = mpq_class(1, 2);
    m.weight[1][1][3] = mpq_class(1, 2);
    auto [x0, x1] = closed_form_bounds(cells_of(m));
    CHECK(x1.lower == 0);
}

TEST_CASE("one proxy pins one side at the observed shift") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 40; ++trial) {
        auto m = oracle::random_monotone_model(rng);
        auto cells = cells_of(m);
        const mpq_class d = m.observed_t(1, 1) - m.observed_t(1, 0);
        const Rational shift = d > 0 ? Rational(d) : Rational(0);
        auto r1 = lp_bounds(build_program(cells, true, 1, ProxySet::t_only));
        auto r0 = lp_bounds(build_program(cells, true, 0, ProxySet::t_only));
        CAPTURE(trial);
        CHECK(r1.lower == shift);
        CHECK(r1.upper == 1);
        CHECK(r0.lower == 0);
        CHECK(r0.upper == 1 - shift);
    }
}

TEST_CASE("stratified bounds") {
    std::mt19937_64 rng(41);
    auto a = cells_of(oracle::random_monotone_model(rng));
    auto b = cells_of(oracle::random_monotone_model(rng));
    auto [a0, a1] = closed_form_bounds(a);
    auto [b0, b1] = closed_form_bounds(b);

    auto [s0, s1] = stratified_bounds({a}, {Rational(1)}, true);
    CHECK(s1.lower == a1.lower);
    CHECK(s0.upper == a0.upper);

    auto [t0, t1] = stratified_bounds({a, a}, {Rational(1, 3), Rational(2, 3)}, true);
    CHECK(t1.lower == a1.lower);

    const Rational w(1, 4);
    auto [w0, w1] = stratified_bounds({a, b}, {w, 1 - w}, true, StratumMethod::closed_form);
    CHECK(w1.lower == w * a1.lower + (1 - w) * b1.lower);
    CHECK(w0.upper == w * a0.upper + (1 - w) * b0.upper);

    auto [v0, v1] = stratified_bounds({a, b}, {w, 1 - w}, true, StratumMethod::lp);
    CHECK(v1.lower == w1.lower);
    CHECK_THROWS_AS(stratified_bounds({a, b}, {Rational(1, 2)}, true), FormatError);
}

TEST_CASE("JSON carries exact and decimal renderings") {
    auto table = load_table_csv_file(kData + "/table1.csv");
    auto [x0, x1] = closed_form_bounds(proxy_cells(table, "X", "T", "S", Convention::joint_compat));
    auto j = bounds_to_json(x1);
    CHECK(j["lower"]["exact"] == "169/500");
    CHECK(j["lower"]["decimal"] == "0.338");
    CHECK(convention_from_string("joint-compat") == Convention::joint_compat);
    CHECK_THROWS(convention_from_string("marginal"));
}
