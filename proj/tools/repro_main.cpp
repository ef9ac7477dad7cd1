#include <chrono>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lpdiscrim/repro.hpp"

namespace {

std::vector<int> parse_triple(const std::string& text) {
    std::vector<int> out;
    std::stringstream in(text);
    for (std::string item; std::getline(in, item, ',');) out.push_back(std::stoi(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace lpdiscrim;

    CLI::App app{"Reproduce discrimination results and check them against their stated values."};
    std::string positional, case_flag, format = "json", out_path, triple;
    ReproOptions o;
    double a2 = 0, ab = 0, c2 = 0, alpha = 0, alpha_prime = 0, resolution = 0;
    int copies = 0;
    std::string basis, protocol;

    std::string ids = "all, evaluate";
    for (const auto& id : case_ids()) ids += ", " + id;
    app.add_option("case_id", positional, "case id (" + ids + ")");
    app.add_option("--case", case_flag, "case id, alternative to the positional form");
    auto* a2_opt = app.add_option("--a2", a2, "squared leading coefficient a^2");
    auto* ab_opt = app.add_option("--ab", ab, "resource product ab")->excludes(a2_opt);
    auto* c2_opt = app.add_option("--c2", c2, "squared coefficient c^2 for the four-state family");
    auto* alpha_opt = app.add_option("--alpha", alpha, "basis angle alpha in [0, pi/2]");
    auto* alpha_prime_opt = app.add_option("--alphaprime", alpha_prime, "measurement angle alpha'");
    auto* copies_opt = app.add_option("--copies", copies, "number of copies")->check(CLI::PositiveNumber);
    auto* resolution_opt = app.add_option("--resolution", resolution, "grid step in radians")->check(CLI::PositiveNumber);
    auto* triple_opt = app.add_option("--triple", triple, "three zero-based state indices, e.g. 0,1,2");
    auto* basis_opt = app.add_option("--basis", basis, "ensemble file");
    auto* protocol_opt = app.add_option("--protocol", protocol, "protocol file (evaluate case)");
    app.add_flag("--allow-coincident", o.allow_coincident, "allow a, c, d to coincide in the four-state family");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", out_path, "write the report here instead of stdout");
    app.add_option("--seed", o.seed, "exploration-order seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (!positional.empty() && !case_flag.empty() && positional != case_flag) {
        std::cerr << "error: conflicting case ids\n";
        return 1;
    }
    o.case_id = !case_flag.empty() ? case_flag : positional;
    if (o.case_id.empty()) {
        std::cerr << "error: no case given (" << ids << ")\n";
        return 1;
    }
    if (*a2_opt) o.a2 = a2;
    if (*ab_opt) o.ab = ab;
    if (*c2_opt) o.c2 = c2;
    if (*alpha_opt) o.alpha = alpha;
    if (*alpha_prime_opt) o.alpha_prime = alpha_prime;
    if (*copies_opt) o.copies = copies;
    if (*resolution_opt) o.resolution = resolution;
    if (*basis_opt) o.basis = basis;
    if (*protocol_opt) o.protocol = protocol;

    const auto start = std::chrono::steady_clock::now();
    CaseReport report;
    try {
        if (*triple_opt) o.triple = parse_triple(triple);
        report = run_case(o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const SearchFailure& e) {
        std::cerr << "search failed: " << e.what() << "\n";
        for (const auto& line : e.frontier()) std::cerr << "  " << line << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string text = format == "csv" ? render_csv(report) : render_json(report, seconds);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text(out_path, text);
    }
    return report.passed() ? 0 : 2;
}
