#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "lpdiscrim/serialize.hpp"
#include "support.hpp"

using namespace lpdiscrim;

namespace {

Ensemble make(Family f, std::map<std::string, double> params = {}) {
    FamilySpec spec;
    spec.family = f;
    spec.params = std::move(params);
    return build_family(spec);
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_SUITE("serialize") {

TEST_CASE("round15 keeps fifteen significant digits") {
    CHECK(round15(0.1234567890123456789) == 0.123456789012346);
    CHECK(round15(1.0) == 1.0);
}

TEST_CASE("ensembles round-trip") {
    const auto e = make(Family::Eq8, {{"a", std::sqrt(0.8)}, {"c", std::sqrt(0.9)}});
    const auto back = ensemble_from_json(to_json(e));
    CHECK(back.labels() == e.labels());
    CHECK(back.priors() == e.priors());
    for (std::size_t i = 0; i < e.size(); ++i) CHECK(back.states()[i].amps() == e.states()[i].amps());
}

TEST_CASE("ensemble files are validated on load") {
    const auto good = temp_file("lpdiscrim_good.json",
                                R"({"dims": [2, 2], "ownership": ["A", "B"], "states": [[1,0,0,0],[0,1,0,0]]})");
    CHECK(load_ensemble(good).size() == 2);
    const auto unnormalized = temp_file("lpdiscrim_bad.json", R"({"dims": [2, 2], "states": [[1,1,0,0]]})");
    CHECK_THROWS_AS(load_ensemble(unnormalized), std::invalid_argument);
    const auto overlapping = temp_file("lpdiscrim_overlap.json",
                                       R"({"dims": [2], "states": [[1,0],[0.6,0.8]]})");
    CHECK_THROWS_AS(load_ensemble(overlapping), std::invalid_argument);
    const auto broken = temp_file("lpdiscrim_broken.json", R"({"dims": [2, )");
    CHECK_THROWS_AS(load_ensemble(broken), std::invalid_argument);
    const auto missing = temp_file("lpdiscrim_missing.json", R"({"states": [[1, 0]]})");
    CHECK_THROWS_AS(load_ensemble(missing), std::invalid_argument);
    CHECK_THROWS(load_ensemble("/nonexistent/ensemble.json"));
}

TEST_CASE("protocols round-trip and evaluate identically") {
    const auto e = make(Family::Eq1);
    for (const auto& p : {build_groisman_protocol(ResourceSpec::nmes(std::sqrt(0.8))),
                          build_alpha_prime_protocol(0.7, 0.2), build_parity_then_bell(ResourceSpec::from_ab(0.3))}) {
        const auto doc = to_json(p);
        const auto back = protocol_from_json(Json::parse(doc.dump()));
        CHECK(evaluate(e, back).success == doctest::Approx(evaluate(e, p).success).epsilon(1e-12));
    }
}

TEST_CASE("a found one-bit protocol survives serialization") {
    const auto full = make(Family::Eq8, {{"a", std::sqrt(0.8)}, {"c", std::sqrt(0.9)}});
    const auto triple = subset(full, {0, 2, 3});
    SearchConfig config;
    const auto found = find_ictp_protocol(triple, config);
    const auto doc = to_json(found, config);
    const auto back = protocol_from_json(Json::parse(doc.dump())["protocol"]);
    CHECK(back.comm.kind == CommPlan::Kind::OneCbit);
    CHECK(std::abs(evaluate(triple, back).success - found.success) <= 1e-12);
}

TEST_CASE("success reports are sparse") {
    const auto e = make(Family::Eq1);
    const auto doc = to_json(evaluate(e, build_groisman_protocol()));
    CHECK(doc["success"] == 1.0);
    CHECK(doc["perfect"] == true);
    for (const auto& row : doc["transcripts"]) {
        for (const auto& [label, p] : row["probabilities"].items()) CHECK(p.get<double>() >= 1e-12);
    }
}

TEST_CASE("malformed protocols are rejected") {
    auto doc = to_json(build_groisman_protocol());
    doc["resource"]["kind"] = "ghz";
    CHECK_THROWS_AS(protocol_from_json(doc), std::invalid_argument);
    auto incomplete = to_json(build_groisman_protocol());
    incomplete["steps"][0][0]["outcomes"].erase(0);
    CHECK_THROWS(protocol_from_json(incomplete));
}

}
