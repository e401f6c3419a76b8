#include "proxycause/lp.hpp"

#include <doctest.h>

#include <random>

using namespace proxycause;

namespace {

std::vector<Rational> row(std::initializer_list<long> v) {
    std::vector<Rational> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

LinearProgram program(std::size_t n, std::vector<Equality> eqs, std::vector<Rational> obj, Sense sense) {
    LinearProgram lp;
    lp.n = n;
    lp.equalities = std::move(eqs);
    lp.objective = std::move(obj);
    lp.sense = sense;
    return lp;
}

}  // namespace

TEST_CASE("small programs") {
    // max x + y with x + y + s1 = 4, x + s2 = 3
    auto lp = program(4, {{row({1, 1, 1, 0}), 4}, {row({1, 0, 0, 1}), 3}}, row({1, 1, 0, 0}), Sense::maximize);
    auto r = solve(lp);
    REQUIRE(r.status == LPStatus::optimal);
    CHECK(r.value == 4);
    CHECK(is_feasible(lp.equalities, r.witness));
    CHECK(evaluate(lp.objective, r.witness) == 4);

    lp.sense = Sense::minimize;
    CHECK(solve(lp).value == 0);

    // fractional optimum: max x with 3x + y = 2, x, y >= 0
    auto frac = program(2, {{row({3, 1}), 2}}, row({1, 0}), Sense::maximize);
    CHECK(solve(frac).value == Rational(2, 3));
}

TEST_CASE("infeasible, unbounded, redundant") {
    auto inf = program(2, {{row({1, 1}), -1}}, row({1, 0}), Sense::maximize);
    CHECK(solve(inf).status == LPStatus::infeasible);
    auto clash = program(2, {{row({1, 1}), 1}, {row({1, 1}), 2}}, row({1, 0}), Sense::maximize);
    CHECK(solve(clash).status == LPStatus::infeasible);

    auto unb = program(2, {{row({1, -1}), 0}}, row({1, 0}), Sense::maximize);
    CHECK(solve(unb).status == LPStatus::unbounded);
    unb.sense = Sense::minimize;
    CHECK(solve(unb).value == 0);

    auto dup = program(3, {{row({1, 1, 1}), 1}, {row({2, 2, 2}), 2}, {row({1, 0, 0}), Rational(1, 2)}}, row({0, 1, 0}),
                       Sense::maximize);
    auto r = solve(dup);
    REQUIRE(r.status == LPStatus::optimal);
    CHECK(r.value == Rational(1, 2));

    LinearProgram ragged = program(2, {{row({1}), 1}}, row({1, 0}), Sense::maximize);
    CHECK_THROWS_AS(ragged.validate(), FormatError);
}

TEST_CASE("vertex enumeration") {
    auto simplex = enumerate_vertices({{row({1, 1, 1}), 1}}, 3);
    REQUIRE(simplex.size() == 3);
    CHECK(simplex[0] == row({0, 0, 1}));
    CHECK(simplex[2] == row({1, 0, 0}));

    // unit square with slacks
    auto square = enumerate_vertices({{row({1, 0, 1, 0}), 1}, {row({0, 1, 0, 1}), 1}}, 4);
    CHECK(square.size() == 4);
    for (const auto& v : square) CHECK(is_feasible({{row({1, 0, 1, 0}), 1}, {row({0, 1, 0, 1}), 1}}, v));

    CHECK(enumerate_vertices({{row({1, 1}), -1}}, 2).empty());
    CHECK_THROWS_AS(enumerate_vertices({}, 65), SizeError);
}

TEST_CASE("bounded random programs attain their optimum at a vertex") {
    std::mt19937_64 rng(3);
    int optimal = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 3 + rng() % 5;
        std::vector<Equality> eqs{{std::vector<Rational>(n, Rational(1)), Rational(1)}};
        for (std::size_t m = rng() % 3; m > 0; --m) {
            Equality e;
            for (std::size_t j = 0; j < n; ++j) e.a.emplace_back(static_cast<long>(rng() % 5) - 2);
            e.b = Rational(static_cast<long>(rng() % 5) - 2, 3);
            e.b.canonicalize();
            eqs.push_back(e);
        }
        std::vector<Rational> obj;
        for (std::size_t j = 0; j < n; ++j) obj.emplace_back(static_cast<long>(rng() % 9) - 4);
        auto lp = program(n, eqs, obj, trial % 2 ? Sense::maximize : Sense::minimize);
        auto r = solve(lp);
        auto vertices = enumerate_vertices(eqs, n);
        CAPTURE(trial);
        CHECK(r.status != LPStatus::unbounded);
        if (vertices.empty()) {
            CHECK(r.status == LPStatus::infeasible);
            continue;
        }
        REQUIRE(r.status == LPStatus::optimal);
        ++optimal;
        for (const auto& v : vertices) {
            if (lp.sense == Sense::maximize) CHECK(evaluate(obj, v) <= r.value);
            else CHECK(evaluate(obj, v) >= r.value);
        }
    }
    CHECK(optimal > 100);
}

TEST_CASE("JSON") {
    auto lp = program(3, {{row({1, 1, 1}), 1}}, {Rational(1, 3), Rational(0), Rational(-2)}, Sense::minimize);
    auto back = lp_from_json(lp_to_json(lp));
    CHECK(back.n == 3);
    CHECK(back.objective == lp.objective);
    CHECK(back.sense == Sense::minimize);
    CHECK(back.equalities[0].a == lp.equalities[0].a);
    auto r = lp_result_to_json(solve(lp));
    CHECK(r["status"] == "optimal");
    CHECK_THROWS_AS(lp_from_json(nlohmann::json::parse(R"({"n": 2})")), FormatError);
}
