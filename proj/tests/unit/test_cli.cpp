#include "proxycause/cli.hpp"

#include <nlohmann/json.hpp>

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using proxycause::cli::run;
using nlohmann::json;

namespace {

const std::string kData = PROXYCAUSE_DATA_DIR;
const std::string kGolden = PROXYCAUSE_GOLDEN_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

// Works in a scratch directory holding copies of the data files so that
// reports mention relative paths only.
struct Scratch {
    fs::path dir;
    fs::path previous;
    Scratch() {
        dir = fs::temp_directory_path() / ("proxycause_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
        for (const auto& e : fs::directory_iterator(kData)) fs::copy_file(e.path(), dir / e.path().filename(), fs::copy_options::overwrite_existing);
        previous = fs::current_path();
        fs::current_path(dir);
    }
    ~Scratch() {
        fs::current_path(previous);
        fs::remove_all(dir);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Structural equality with numbers compared to 1e-9.
bool same(const json& a, const json& b, std::string& where, const std::string& path = "$") {
    if (a.is_number() && b.is_number()) {
        if (std::abs(a.get<double>() - b.get<double>()) <= 1e-9) return true;
        where = path;
        return false;
    }
    if (a.type() != b.type()) {
        where = path;
        return false;
    }
    if (a.is_object()) {
        if (a.size() != b.size()) {
            where = path;
            return false;
        }
        for (auto it = a.begin(); it != a.end(); ++it) {
            if (!b.contains(it.key()) || !same(it.value(), b[it.key()], where, path + "." + it.key())) {
                if (where.empty()) where = path + "." + it.key();
                return false;
            }
        }
        return true;
    }
    if (a.is_array()) {
        if (a.size() != b.size()) {
            where = path;
            return false;
        }
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!same(a[i], b[i], where, path + "[" + std::to_string(i) + "]")) return false;
        return true;
    }
    if (a != b) where = path;
    return a == b;
}

void check_golden(const std::string& name, const std::vector<std::string>& args, int expected_code) {
    auto r = invoke(args);
    CHECK(r.code == expected_code);
    auto got = json::parse(r.out);
    const fs::path file = fs::path(kGolden) / (name + ".json");
    if (std::getenv("UPDATE_GOLDEN")) {
        std::ofstream(file) << got.dump(2) << "\n";
        return;
    }
    REQUIRE_MESSAGE(fs::exists(file), "missing golden " << file);
    std::string where;
    CHECK_MESSAGE(same(got, json::parse(slurp(file)), where), name << " differs at " << where);
}

}  // namespace

TEST_CASE("golden reports") {
    Scratch scratch;
    check_golden("check_backdoor", {"check", "fig1.json", "--pair", "X,Y", "--set", "Z", "--criterion", "backdoor", "--json"}, 0);
    check_golden("check_backdoor_open", {"check", "fig2.json", "--pair", "X,Y", "--criterion", "backdoor", "--json"}, 2);
    check_golden("identify_table1", {"identify", "table1.csv", "table1_design.json", "fig3.json", "--json"}, 0);
    check_golden("bounds_lp", {"bounds", "table1.csv", "--exposure", "X", "--proxies", "T,S", "--method", "lp", "--json"}, 0);
    check_golden("bounds_closed", {"bounds", "table1.csv", "--exposure", "X", "--proxies", "T,S", "--monotone", "--method",
                                   "closed", "--convention", "joint-compat", "--json"}, 0);
    check_golden("bounds_both", {"bounds", "table1.csv", "--exposure", "X", "--proxies", "T,S", "--monotone", "--method",
                                 "both", "--json"}, 3);
}

TEST_CASE("exit codes and streams") {
    Scratch scratch;
    auto r = invoke({"check", "fig1.json", "--pair", "X,Y", "--set", "Z", "--criterion", "backdoor"});
    CHECK(r.code == 0);
    CHECK_FALSE(r.out.empty());
    CHECK(r.err.empty());

    std::ofstream("broken.json") << "{ not json";
    r = invoke({"check", "broken.json", "--pair", "X,Y", "--criterion", "dsep"});
    CHECK(r.code == 4);
    CHECK(r.out.empty());
    CHECK(r.err.find("check: [") != std::string::npos);

    CHECK(invoke({"check", "fig1.json", "--pair", "X,Q", "--criterion", "dsep"}).code == 4);
    CHECK(invoke({"check", "fig1.json", "--pair", "X,Y", "--criterion", "sideways"}).code == 4);
    CHECK(invoke({"frobnicate"}).code == 4);
    CHECK(invoke({"--help"}).code == 0);
    CHECK(invoke({"simulate", "--k", "9", "--seed", "1", "--out-prefix", "x"}).code == 4);

    // Unknown labeling: identification refuses, order-free bounds still work.
    auto design = json::parse(slurp("table1_design.json"));
    design["latent"]["order_known"] = false;
    std::ofstream("unordered.json") << design.dump();
    r = invoke({"identify", "table1.csv", "unordered.json", "fig3.json", "--json"});
    CHECK(r.code == 3);
    CHECK(json::parse(r.out)["diagnostics"][0]["code"] == "ORDER_AMBIGUITY");
    r = invoke({"identify", "table1.csv", "unordered.json", "fig3.json", "--order-free", "--exposure", "X=x1", "--json"});
    CHECK(r.code == 0);

    r = invoke({"bounds", "table1.csv", "--exposure", "X", "--proxies", "T,S", "--json", "--out", "report.json"});
    CHECK(r.code == 0);
    CHECK(json::parse(slurp("report.json")) == json::parse(r.out));
}

TEST_CASE("simulate is deterministic and round-trips through identify") {
    Scratch scratch;
    REQUIRE(invoke({"simulate", "--k", "3", "--seed", "42", "--strata", "2", "--out-prefix", "a"}).code == 0);
    REQUIRE(invoke({"simulate", "--k", "3", "--seed", "42", "--strata", "2", "--out-prefix", "b"}).code == 0);
    for (const char* ext : {".csv", ".truth.json", ".design.json", ".model.json"})
        CHECK(slurp(std::string("a") + ext) == slurp(std::string("b") + ext));

    auto r = invoke({"identify", "a.csv", "a.design.json", "a.model.json", "--json"});
    REQUIRE(r.code == 0);
    auto report = json::parse(r.out);
    auto truth = json::parse(slurp("a.truth.json"));
    CHECK(report["exit_status"] == 0);
    CHECK(truth.contains("truth"));
    CHECK(report["inputs_digest"].get<std::string>().rfind("sha256:", 0) == 0);
    CHECK(report["inputs_digest"] ==
          proxycause::cli::inputs_digest({"a.csv", "a.design.json", "a.model.json"}));
}
