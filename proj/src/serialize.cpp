#include "lpdiscrim/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lpdiscrim {

namespace {

std::vector<double> real_parts(const Vector& v) {
    std::vector<double> out;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (std::abs(v[k].imag()) > 1e-12) throw std::invalid_argument("complex amplitudes are not serializable");
        out.push_back(v[k].real());
    }
    return out;
}

Vector vector_from(const Json& doc) {
    if (!doc.is_array()) throw std::invalid_argument("expected an amplitude list");
    Vector v(static_cast<Eigen::Index>(doc.size()));
    for (std::size_t k = 0; k < doc.size(); ++k) v[static_cast<Eigen::Index>(k)] = doc[k].get<double>();
    return v;
}

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument("malformed document " + path.string() + ": " + e.what());
    }
}

const char* kind_name(ResourceSpec::Kind kind) {
    switch (kind) {
        case ResourceSpec::Kind::None: return "none";
        case ResourceSpec::Kind::Nmes: return "nmes";
        case ResourceSpec::Kind::Mes: return "mes";
    }
    return "none";
}

}  // namespace

double round15(double x) {
    if (!std::isfinite(x)) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return std::strtod(buf, nullptr);
}

// ---------------------------------------------------------------- ensembles

Json to_json(const Ensemble& ensemble) {
    Json states = Json::array();
    for (const auto& s : ensemble.states()) states.push_back(real_parts(s.amps()));
    return {{"dims", ensemble.dims()},
            {"ownership", ensemble.ownership()},
            {"states", states},
            {"priors", ensemble.priors()},
            {"labels", ensemble.labels()}};
}

Ensemble ensemble_from_json(const Json& doc) {
    try {
        const auto dims = doc.at("dims").get<Dims>();
        Ownership owners;
        if (doc.contains("ownership")) {
            owners = doc.at("ownership").get<Ownership>();
        } else {
            for (std::size_t k = 0; k < dims.size(); ++k) owners.push_back(std::string(1, static_cast<char>('A' + k)));
        }
        std::vector<PureState> states;
        for (const auto& s : doc.at("states")) states.emplace_back(dims, vector_from(s), owners);
        std::vector<double> priors;
        if (doc.contains("priors")) priors = doc.at("priors").get<std::vector<double>>();
        std::vector<std::string> labels;
        if (doc.contains("labels")) labels = doc.at("labels").get<std::vector<std::string>>();
        return Ensemble(std::move(states), std::move(priors), std::move(labels));
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("malformed ensemble document: ") + e.what());
    }
}

Ensemble load_ensemble(const std::filesystem::path& path) { return ensemble_from_json(read_json(path)); }

// ---------------------------------------------------------------- protocols

Json to_json(const LocalMeasurement& m) {
    Json outcomes = Json::array();
    for (const auto& p : m.outcomes) {
        Json vectors = Json::array();
        for (const auto& v : p.basis()) vectors.push_back(real_parts(v));
        outcomes.push_back(vectors);
    }
    return {{"party", m.party},
            {"subsystems", m.subsystems},
            {"dims", m.outcomes.front().dims()},
            {"outcomes", outcomes}};
}

LocalMeasurement measurement_from_json(const Json& doc) {
    LocalMeasurement m;
    m.party = doc.at("party").get<std::string>();
    m.subsystems = doc.at("subsystems").get<std::vector<int>>();
    const auto dims = doc.at("dims").get<Dims>();
    for (const auto& outcome : doc.at("outcomes")) {
        m.outcomes.push_back(Projector::from_real_vectors(dims, outcome.get<std::vector<std::vector<double>>>()));
    }
    m.validate();
    return m;
}

Json to_json(const Protocol& protocol) {
    const auto& r = protocol.resource;
    Json steps = Json::array();
    for (const auto& copy : protocol.schedule.steps) {
        Json row = Json::array();
        for (const auto& m : copy) row.push_back(to_json(m));
        steps.push_back(row);
    }
    Json comm = {{"kind", "none"}};
    if (protocol.comm.kind == CommPlan::Kind::OneCbit) {
        Json conditional = Json::array();
        for (const auto& m : protocol.comm.conditional) conditional.push_back(to_json(m));
        comm = {{"kind", "one-cbit"},
                {"sender", protocol.comm.sender},
                {"sender_step", protocol.comm.sender_step},
                {"message", protocol.comm.message},
                {"conditional", conditional}};
    }
    return {{"resource", {{"kind", kind_name(r.kind)}, {"a", r.a}, {"b", r.b},
                          {"parties", {r.first_party, r.second_party}}}},
            {"copies", protocol.schedule.copies},
            {"steps", steps},
            {"comm", comm}};
}

Protocol protocol_from_json(const Json& doc) {
    try {
        Protocol p;
        const auto& r = doc.at("resource");
        const auto kind = r.at("kind").get<std::string>();
        if (kind == "none") {
            p.resource = ResourceSpec::none();
        } else if (kind == "mes") {
            p.resource = ResourceSpec::mes();
        } else if (kind == "nmes") {
            p.resource = ResourceSpec::nmes(r.at("a").get<double>());
            if (r.contains("b") && std::abs(r.at("b").get<double>() - p.resource.b) > 1e-9) {
                throw std::invalid_argument("resource b inconsistent with a");
            }
        } else {
            throw std::invalid_argument("unknown resource kind " + kind);
        }
        if (r.contains("parties")) {
            const auto parties = r.at("parties").get<std::vector<std::string>>();
            if (parties.size() != 2) throw std::invalid_argument("resource needs two party labels");
            p.resource.first_party = parties[0];
            p.resource.second_party = parties[1];
        }
        p.schedule.copies = doc.at("copies").get<int>();
        for (const auto& copy : doc.at("steps")) {
            std::vector<LocalMeasurement> row;
            for (const auto& m : copy) row.push_back(measurement_from_json(m));
            p.schedule.steps.push_back(std::move(row));
        }
        if (doc.contains("comm") && doc.at("comm").at("kind").get<std::string>() == "one-cbit") {
            const auto& c = doc.at("comm");
            p.comm.kind = CommPlan::Kind::OneCbit;
            p.comm.sender = c.at("sender").get<std::string>();
            p.comm.sender_step = c.at("sender_step").get<int>();
            p.comm.message = c.at("message").get<std::vector<int>>();
            for (const auto& m : c.at("conditional")) p.comm.conditional.push_back(measurement_from_json(m));
        }
        p.validate();
        return p;
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("malformed protocol document: ") + e.what());
    }
}

Protocol load_protocol(const std::filesystem::path& path) { return protocol_from_json(read_json(path)); }

// ---------------------------------------------------------------- reports

Json to_json(const SuccessReport& report) {
    Json rows = Json::array();
    for (std::size_t t = 0; t < report.transcripts.size(); ++t) {
        Json probs = Json::object();
        for (std::size_t i = 0; i < report.labels.size(); ++i) {
            if (report.table[t][i] >= kZeroProb) probs[report.labels[i]] = round15(report.table[t][i]);
        }
        rows.push_back({{"transcript", report.transcripts[t].to_string()},
                        {"probabilities", probs},
                        {"decoded", report.labels[static_cast<std::size_t>(report.decoding[t])]}});
    }
    Json per_state = Json::object();
    for (std::size_t i = 0; i < report.labels.size(); ++i) {
        per_state[report.labels[i]] = round15(report.per_state_success[i]);
    }
    return {{"success", round15(report.success)},
            {"perfect", report.perfect},
            {"per_state_success", per_state},
            {"transcripts", rows}};
}

Json to_json(const SearchConfig& config) {
    return {{"resolution", config.resolution},
            {"probe_resolution", config.probe_resolution},
            {"max_copies", config.max_copies},
            {"seed", config.seed},
            {"budget_seconds", config.budget_seconds},
            {"random_probes", config.random_probes},
            {"extra_candidates", config.extra_candidates.size()}};
}

Json to_json(const GridSearchResult& result, const SearchConfig& config) {
    return {{"protocol", to_json(result.protocol)},
            {"success", round15(result.success)},
            {"angles", result.angles},
            {"grid_size", result.grid_size},
            {"points", result.points},
            {"complete", result.complete},
            {"config", to_json(config)},
            {"metadata", {{"seconds", result.seconds}}}};
}

Json to_json(const IctpSearchResult& result, const SearchConfig& config) {
    return {{"protocol", to_json(result.protocol)},
            {"success", round15(result.success)},
            {"perfect", result.perfect},
            {"partition", result.partition},
            {"candidates", result.candidates},
            {"frontier", result.frontier},
            {"config", to_json(config)}};
}

Json to_json(const ScheduleResult& result) {
    Protocol p;
    p.schedule = result.schedule;
    return {{"protocol", to_json(p)},
            {"copies", result.copies},
            {"bound", result.bound},
            {"success", round15(result.report.success)},
            {"perfect", result.report.perfect}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace lpdiscrim
