#include "proxycause/table.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace proxycause {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        auto b = field.find_first_not_of(" \t");
        auto e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

ExactTable load_table_csv(std::istream& in, const std::optional<Schema>& declared) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("CSV is empty");
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    auto header = split_csv_line(line);
    if (header.size() < 2) throw FormatError("CSV header needs at least one variable and a value column");

    CsvValueKind kind;
    if (header.back() == "count") kind = CsvValueKind::count;
    else if (header.back() == "prob") kind = CsvValueKind::prob;
    else throw FormatError("CSV header must end with a 'count' or 'prob' column");
    header.pop_back();

    Schema schema;
    for (const auto& name : header) {
        if (name.empty()) throw FormatError("empty variable name in CSV header");
        Variable v{name, {}};
        if (declared) {
            auto it = std::find_if(declared->begin(), declared->end(),
                                   [&](const Variable& d) { return d.name == name; });
            if (it == declared->end()) throw FormatError("CSV variable '" + name + "' is not declared in the schema");
            v.categories = it->categories;
        }
        schema.push_back(std::move(v));
    }

    std::vector<std::pair<std::vector<std::string>, Rational>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size() + 1) {
            throw FormatError("CSV line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                              " fields, expected " + std::to_string(header.size() + 1));
        }
        Rational value;
        try {
            value = parse_rational(fields.back());
        } catch (const FormatError& e) {
            throw FormatError("CSV line " + std::to_string(line_no) + ": " + e.what());
        }
        if (value < 0) throw FormatError("CSV line " + std::to_string(line_no) + ": negative value");
        if (kind == CsvValueKind::count && value.get_den() != 1) {
            throw FormatError("CSV line " + std::to_string(line_no) + ": counts must be integers");
        }
        fields.pop_back();
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (fields[i].empty()) {
                throw FormatError("CSV line " + std::to_string(line_no) + ": empty category");
            }
            auto& cats = schema[i].categories;
            if (std::find(cats.begin(), cats.end(), fields[i]) == cats.end()) {
                if (declared) {
                    throw FormatError("CSV line " + std::to_string(line_no) + ": category '" + fields[i] +
                                      "' is not declared for '" + schema[i].name + "'");
                }
                cats.push_back(fields[i]);
            }
        }
        rows.emplace_back(std::move(fields), value);
    }
    if (rows.empty()) throw EmptyDataError("CSV has no data rows");

    for (const auto& v : schema) {
        if (v.categories.size() < 2) {
            throw FormatError("variable '" + v.name + "' has fewer than two categories; declare a schema");
        }
    }

    std::size_t n = 1;
    for (const auto& v : schema) n *= v.categories.size();
    std::vector<Rational> weights(n, Rational(0));
    std::vector<bool> filled(n, false);
    Rational total = 0;
    for (const auto& [labels, value] : rows) {
        std::size_t f = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const auto& cats = schema[i].categories;
            f = f * cats.size() + static_cast<std::size_t>(std::find(cats.begin(), cats.end(), labels[i]) - cats.begin());
        }
        if (filled[f]) throw FormatError("CSV lists the same cell twice");
        filled[f] = true;
        weights[f] = value;
        total += value;
    }
    if (total == 0) throw EmptyDataError("all CSV values are zero");
    if (kind == CsvValueKind::prob) {
        Rational drift = total - 1;
        if (abs(drift) > Rational(1, 1000000)) {
            throw FormatError("probabilities sum to " + to_decimal_string(total) + ", not 1");
        }
    }
    for (auto& w : weights) w /= total;
    return ExactTable(std::move(schema), std::move(weights));
}

ExactTable load_table_csv_file(const std::string& path, const std::optional<Schema>& declared) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return load_table_csv(in, declared);
}

void write_table_csv(std::ostream& out, const ExactTable& table, bool skip_zero) {
    for (const auto& v : table.schema()) out << v.name << ',';
    out << "prob\n";
    for (std::size_t f = 0; f < table.size(); ++f) {
        const auto& p = table.probs()[f];
        if (skip_zero && p == 0) continue;
        auto c = table.cell(f);
        for (std::size_t i = 0; i < c.size(); ++i) out << table.schema()[i].categories[c[i]] << ',';
        auto dec = to_exact_decimal(p);
        out << (dec.empty() ? to_fraction_string(p) : dec) << '\n';
    }
}

Schema schema_from_json(const nlohmann::json& j) {
    try {
        Schema schema;
        for (const auto& v : j.at("variables")) {
            schema.push_back({v.at("name").get<std::string>(), v.at("categories").get<std::vector<std::string>>()});
        }
        return schema;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("schema JSON: ") + e.what());
    }
}

nlohmann::json schema_to_json(const Schema& schema) {
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& v : schema) vars.push_back({{"name", v.name}, {"categories", v.categories}});
    return {{"variables", vars}};
}

nlohmann::json table_to_json(const ExactTable& table) {
    auto j = schema_to_json(table.schema());
    j["mode"] = "exact";
    nlohmann::json probs = nlohmann::json::array();
    for (const auto& p : table.probs()) probs.push_back(to_fraction_string(p));
    j["probs"] = std::move(probs);
    return j;
}

nlohmann::json table_to_json(const FloatTable& table) {
    auto j = schema_to_json(table.schema());
    j["mode"] = "float";
    j["probs"] = table.probs();
    return j;
}

ExactTable exact_table_from_json(const nlohmann::json& j) {
    auto schema = schema_from_json(j);
    std::vector<Rational> probs;
    try {
        for (const auto& p : j.at("probs")) {
            probs.push_back(p.is_string() ? parse_rational(p.get<std::string>())
                                          : parse_rational(nlohmann::json(p).dump()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("table JSON: ") + e.what());
    }
    return ExactTable(std::move(schema), std::move(probs));
}

}  // namespace proxycause
