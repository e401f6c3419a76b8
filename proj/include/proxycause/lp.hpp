#pragma once

#include "proxycause/errors.hpp"
#include "proxycause/rational.hpp"

#include <nlohmann/json.hpp>

#include <vector>

namespace proxycause {

enum class Sense { minimize, maximize };

struct Equality {
    std::vector<Rational> a;
    Rational b;
};

/// optimize objective . q  subject to  a . q = b for each equality, q >= 0.
struct LinearProgram {
    std::size_t n = 0;
    std::vector<Equality> equalities;
    std::vector<Rational> objective;
    Sense sense = Sense::maximize;

    /// Throws FormatError on ragged rows.
    void validate() const;
};

enum class LPStatus { optimal, infeasible, unbounded };

std::string to_string(LPStatus s);

struct LPResult {
    LPStatus status = LPStatus::infeasible;
    Rational value;
    std::vector<Rational> witness;  // empty unless optimal
};

/// Two-phase simplex over exact rationals with Bland's rule. The witness is
/// substituted back into the program before returning.
LPResult solve(const LinearProgram& lp);

/// True when q >= 0 satisfies every equality exactly.
bool is_feasible(const std::vector<Equality>& equalities, const std::vector<Rational>& q);

Rational evaluate(const std::vector<Rational>& objective, const std::vector<Rational>& q);

/// Every basic feasible solution of {a . q = b, q >= 0}, deduplicated and in
/// lexicographic order. n <= 64 and at most 12 equalities.
std::vector<std::vector<Rational>> enumerate_vertices(const std::vector<Equality>& equalities, std::size_t n);

nlohmann::json lp_to_json(const LinearProgram& lp);
LinearProgram lp_from_json(const nlohmann::json& j);
nlohmann::json lp_result_to_json(const LPResult& r);

}  // namespace proxycause
