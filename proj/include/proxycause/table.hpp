#pragma once

#include "proxycause/errors.hpp"
#include "proxycause/rational.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace proxycause {

struct Variable {
    std::string name;
    std::vector<std::string> categories;

    bool operator==(const Variable&) const = default;
};

using Schema = std::vector<Variable>;

/// (variable, category) pairs; a partial or full cell of a table.
using Assignment = std::vector<std::pair<std::string, std::string>>;

template <class Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* mode = "exact";
    static double to_double(const Rational& v) { return proxycause::to_double(v); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr const char* mode = "float";
    static constexpr double mass_tol = 1e-12;
    static double to_double(double v) { return v; }
};

/// Dense probability table over named discrete variables, row-major with the
/// last variable varying fastest. Exact tables hold rationals; float tables
/// hold doubles. Values are immutable after construction.
template <class Scalar>
class JointTable {
public:
    JointTable(Schema schema, std::vector<Scalar> probs)
        : schema_(std::move(schema)), probs_(std::move(probs)) {
        validate_schema();
        if (probs_.size() != cell_count()) {
            throw FormatError("table has " + std::to_string(probs_.size()) + " entries, schema needs " +
                              std::to_string(cell_count()));
        }
        Scalar total = 0;
        for (const auto& p : probs_) {
            if (p < 0) throw FormatError("negative probability in table");
            total += p;
        }
        if constexpr (ScalarTraits<Scalar>::exact) {
            if (total != 1) throw FormatError("table mass is " + to_fraction_string(total) + ", not 1");
        } else {
            if (!(std::abs(total - 1.0) <= ScalarTraits<double>::mass_tol)) {
                throw FormatError("table mass is " + to_decimal_string(total) + ", not 1");
            }
        }
    }

    /// Rescales non-negative weights to unit mass.
    static JointTable normalized(Schema schema, std::vector<Scalar> weights) {
        Scalar total = 0;
        for (const auto& w : weights) {
            if (w < 0) throw FormatError("negative weight in table");
            total += w;
        }
        if (total == 0) throw ZeroMassError("cannot normalize a table with zero mass");
        for (auto& w : weights) w /= total;
        if constexpr (!ScalarTraits<Scalar>::exact) {
            // One more pass absorbs the rounding of the first division.
            double again = 0;
            for (auto w : weights) again += w;
            for (auto& w : weights) w /= again;
        }
        return JointTable(std::move(schema), std::move(weights));
    }

    static constexpr bool exact() { return ScalarTraits<Scalar>::exact; }

    const Schema& schema() const { return schema_; }
    const std::vector<Scalar>& probs() const { return probs_; }
    std::size_t size() const { return probs_.size(); }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& v : schema_) out.push_back(v.name);
        return out;
    }

    bool has_variable(const std::string& name) const {
        return std::any_of(schema_.begin(), schema_.end(),
                           [&](const Variable& v) { return v.name == name; });
    }

    std::size_t variable_index(const std::string& name) const {
        for (std::size_t i = 0; i < schema_.size(); ++i) {
            if (schema_[i].name == name) return i;
        }
        throw UnknownVariableError("unknown variable '" + name + "'");
    }

    const Variable& variable(const std::string& name) const { return schema_[variable_index(name)]; }

    std::size_t category_index(std::size_t var, const std::string& label) const {
        const auto& cats = schema_.at(var).categories;
        auto it = std::find(cats.begin(), cats.end(), label);
        if (it == cats.end()) {
            throw UnknownVariableError("variable '" + schema_[var].name + "' has no category '" + label + "'");
        }
        return static_cast<std::size_t>(it - cats.begin());
    }

    /// Category indices of a flat cell index.
    std::vector<std::size_t> cell(std::size_t flat) const {
        std::vector<std::size_t> out(schema_.size());
        for (std::size_t i = schema_.size(); i-- > 0;) {
            const auto n = schema_[i].categories.size();
            out[i] = flat % n;
            flat /= n;
        }
        return out;
    }

    std::size_t flat(std::span<const std::size_t> cell) const {
        std::size_t out = 0;
        for (std::size_t i = 0; i < schema_.size(); ++i) {
            out = out * schema_[i].categories.size() + cell[i];
        }
        return out;
    }

    /// Mass of the event described by a (possibly partial) assignment.
    Scalar mass(const Assignment& event) const {
        std::vector<std::pair<std::size_t, std::size_t>> fixed;
        for (const auto& [name, label] : event) {
            auto v = variable_index(name);
            auto c = category_index(v, label);
            for (const auto& [fv, fc] : fixed) {
                if (fv == v && fc != c) return Scalar(0);
            }
            fixed.emplace_back(v, c);
        }
        Scalar total = 0;
        for (std::size_t f = 0; f < probs_.size(); ++f) {
            if (probs_[f] == 0) continue;
            auto c = cell(f);
            bool match = std::all_of(fixed.begin(), fixed.end(),
                                     [&](const auto& fx) { return c[fx.first] == fx.second; });
            if (match) total += probs_[f];
        }
        return total;
    }

    /// f(event | given). Throws ZeroMassError when f(given) = 0.
    Scalar conditional(const Assignment& event, const Assignment& given) const {
        const Scalar denom = mass(given);
        if (denom == 0) throw ZeroMassError("conditioning event has zero mass");
        Assignment both = given;
        both.insert(both.end(), event.begin(), event.end());
        return Scalar(mass(both) / denom);
    }

private:
    std::size_t cell_count() const {
        std::size_t n = 1;
        for (const auto& v : schema_) n *= v.categories.size();
        return n;
    }

    void validate_schema() const {
        for (std::size_t i = 0; i < schema_.size(); ++i) {
            const auto& v = schema_[i];
            if (v.name.empty()) throw FormatError("variable names must be non-empty");
            for (std::size_t j = 0; j < i; ++j) {
                if (schema_[j].name == v.name) throw FormatError("duplicate variable '" + v.name + "'");
            }
            if (v.categories.size() < 2) {
                throw FormatError("variable '" + v.name + "' needs at least two categories");
            }
            for (std::size_t a = 0; a < v.categories.size(); ++a) {
                for (std::size_t b = 0; b < a; ++b) {
                    if (v.categories[a] == v.categories[b]) {
                        throw FormatError("variable '" + v.name + "' repeats category '" + v.categories[a] + "'");
                    }
                }
            }
        }
    }

    Schema schema_;
    std::vector<Scalar> probs_;
};

using ExactTable = JointTable<Rational>;
using FloatTable = JointTable<double>;

/// Sums out every variable not in `vars`; the result follows the order of `vars`.
template <class Scalar>
JointTable<Scalar> marginal(const JointTable<Scalar>& table, const std::vector<std::string>& vars) {
    if (vars.empty()) throw PreconditionError("marginal needs at least one variable");
    Schema schema;
    std::vector<std::size_t> src;
    for (const auto& name : vars) {
        auto i = table.variable_index(name);
        if (std::find(src.begin(), src.end(), i) != src.end()) {
            throw PreconditionError("variable '" + name + "' listed twice");
        }
        src.push_back(i);
        schema.push_back(table.schema()[i]);
    }
    std::size_t n = 1;
    for (const auto& v : schema) n *= v.categories.size();
    std::vector<Scalar> out(n, Scalar(0));
    std::vector<std::size_t> sub(src.size());
    for (std::size_t f = 0; f < table.size(); ++f) {
        const auto& p = table.probs()[f];
        if (p == 0) continue;
        auto c = table.cell(f);
        std::size_t g = 0;
        for (std::size_t k = 0; k < src.size(); ++k) g = g * schema[k].categories.size() + c[src[k]];
        out[g] += p;
    }
    return JointTable<Scalar>(std::move(schema), std::move(out));
}

/// Renormalized table over the unassigned variables.
template <class Scalar>
JointTable<Scalar> condition(const JointTable<Scalar>& table, const Assignment& assignment) {
    std::vector<std::pair<std::size_t, std::size_t>> fixed;
    std::vector<bool> assigned(table.schema().size(), false);
    for (const auto& [name, label] : assignment) {
        auto v = table.variable_index(name);
        auto c = table.category_index(v, label);
        if (assigned[v]) {
            for (const auto& [fv, fc] : fixed) {
                if (fv == v && fc != c) throw ZeroMassError("contradictory assignment for '" + name + "'");
            }
            continue;
        }
        assigned[v] = true;
        fixed.emplace_back(v, c);
    }
    Schema schema;
    for (std::size_t i = 0; i < table.schema().size(); ++i) {
        if (!assigned[i]) schema.push_back(table.schema()[i]);
    }
    std::size_t n = 1;
    for (const auto& v : schema) n *= v.categories.size();
    std::vector<Scalar> out(n, Scalar(0));
    Scalar total = 0;
    for (std::size_t f = 0; f < table.size(); ++f) {
        const auto& p = table.probs()[f];
        if (p == 0) continue;
        auto c = table.cell(f);
        bool match = std::all_of(fixed.begin(), fixed.end(),
                                 [&](const auto& fx) { return c[fx.first] == fx.second; });
        if (!match) continue;
        std::size_t g = 0;
        std::size_t k = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (assigned[i]) continue;
            g = g * schema[k++].categories.size() + c[i];
        }
        out[g] += p;
        total += p;
    }
    if (total == 0) throw ZeroMassError("conditioning event has zero mass");
    if constexpr (ScalarTraits<Scalar>::exact) {
        for (auto& p : out) p /= total;
        return JointTable<Scalar>(std::move(schema), std::move(out));
    } else {
        return JointTable<Scalar>::normalized(std::move(schema), std::move(out));
    }
}

inline FloatTable to_float(const ExactTable& table) {
    std::vector<double> probs;
    probs.reserve(table.size());
    for (const auto& p : table.probs()) probs.push_back(to_double(p));
    return FloatTable::normalized(table.schema(), std::move(probs));
}

inline FloatTable to_float(const FloatTable& table) { return table; }

/// Every assignment of the given variables in row-major order.
template <class Scalar>
std::vector<Assignment> enumerate_assignments(const JointTable<Scalar>& table,
                                              const std::vector<std::string>& vars) {
    std::vector<Assignment> out{Assignment{}};
    for (const auto& name : vars) {
        const auto& cats = table.variable(name).categories;
        std::vector<Assignment> next;
        for (const auto& partial : out) {
            for (const auto& c : cats) {
                auto a = partial;
                a.emplace_back(name, c);
                next.push_back(std::move(a));
            }
        }
        out = std::move(next);
    }
    return out;
}

enum class CsvValueKind { count, prob };

/// Reads a CSV whose header names the variables and ends with `count` or
/// `prob`. Category order comes from `declared` when given, otherwise from
/// first appearance in the file. Missing cells are zero.
ExactTable load_table_csv(std::istream& in, const std::optional<Schema>& declared = std::nullopt);
ExactTable load_table_csv_file(const std::string& path,
                               const std::optional<Schema>& declared = std::nullopt);

/// Writes one row per cell with an exact decimal `prob` column (falls back to
/// p/q for non-decimal values).
void write_table_csv(std::ostream& out, const ExactTable& table, bool skip_zero = true);

Schema schema_from_json(const nlohmann::json& j);
nlohmann::json schema_to_json(const Schema& schema);

nlohmann::json table_to_json(const ExactTable& table);
nlohmann::json table_to_json(const FloatTable& table);
ExactTable exact_table_from_json(const nlohmann::json& j);

}  // namespace proxycause
