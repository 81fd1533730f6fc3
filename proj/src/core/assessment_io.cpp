#include "assessment_io.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "error.hpp"

namespace odum {

namespace fs = std::filesystem;
using nlohmann::json;

json observation_to_json(const Observation& obs) {
    json doc;
    switch (obs.kind) {
    case Observation::Kind::boolean:
        doc["kind"] = "bool";
        doc["value"] = obs.value;
        break;
    case Observation::Kind::sample:
        doc["kind"] = "sample";
        doc["satisfied"] = obs.satisfied;
        doc["total"] = obs.total;
        break;
    case Observation::Kind::accuracy:
        doc["kind"] = "accuracy";
        doc["accurate"] = obs.accurate;
        doc["frequency_specified"] = obs.frequency_specified;
        break;
    case Observation::Kind::measured:
        doc["kind"] = "measured";
        doc["value"] = obs.measured;
        if (!obs.unit.empty()) doc["unit"] = obs.unit;
        break;
    case Observation::Kind::unobserved:
        doc["kind"] = "unobserved";
        break;
    }
    return doc;
}

Observation observation_from_json(const json& doc) {
    const std::string kind = doc.value("kind", "");
    if (kind == "bool") return Observation::boolean(doc.at("value").get<bool>());
    if (kind == "sample")
        return Observation::sample(doc.at("satisfied").get<int>(), doc.at("total").get<int>());
    if (kind == "accuracy")
        return Observation::accuracy(doc.at("accurate").get<int>(),
                                     doc.at("frequency_specified").get<int>());
    if (kind == "measured")
        return Observation::measure(doc.at("value").get<double>(), doc.value("unit", ""));
    if (kind == "unobserved") return Observation::unobserved();
    throw_parse("unknown observation kind '" + kind + "'");
}

PortalAssessment parse_assessment(const json& doc, const std::string& source) {
    PortalAssessment assessment;
    try {
        auto& profile = assessment.profile;
        profile.portal = doc.value("portal", "");
        if (profile.portal.empty()) throw_parse(source + ": missing portal id");
        profile.country = doc.value("country", profile.portal);
        const std::string region = doc.value("region", "Other");
        const auto parsed_region = parse_region(region);
        if (!parsed_region)
            throw_parse(source + ": region '" + region + "' is not EU/GCC/Other");
        profile.region = *parsed_region;
        profile.url = doc.value("url", "");
        if (profile.url.empty()) throw_parse(source + ": missing url");

        auto& record = assessment.record;
        record.portal = profile.portal;
        record.assessed_on = doc.value("assessed_on", "");
        if (!record.assessed_on.empty()) parse_date(record.assessed_on); // format check

        const json observations = doc.value("observations", json::object());
        for (const auto& [id, obs_doc] : observations.items()) {
            try {
                record.observations[id] = observation_from_json(obs_doc);
            } catch (const Error& e) {
                throw_parse(source + ": observation '" + id + "': " + e.what());
            } catch (const json::exception& e) {
                throw_parse(source + ": observation '" + id + "': " + e.what());
            }
        }
        const json provenance = doc.value("provenance", json::object());
        for (const auto& [id, prov_doc] : provenance.items()) {
            const std::string name = prov_doc.get<std::string>();
            const auto parsed = parse_provenance(name);
            if (!parsed)
                throw_parse(source + ": provenance '" + name + "' for '" + id +
                            "' is not manual/probe/override");
            record.provenance[id] = *parsed;
        }
        for (const auto& [id, obs] : record.observations) {
            if (!record.provenance.count(id)) record.provenance[id] = Provenance::manual;
        }

        if (doc.contains("probe_targets")) {
            const auto& targets = doc.at("probe_targets");
            if (targets.contains("catalog")) {
                const auto& catalog = targets.at("catalog");
                CatalogEndpoint endpoint;
                endpoint.base_url = catalog.value("base_url", "");
                const std::string flavor = catalog.value("flavor", "generic");
                const auto parsed_flavor = parse_catalog_flavor(flavor);
                if (!parsed_flavor)
                    throw_parse(source + ": unknown catalog flavor '" + flavor + "'");
                endpoint.flavor = *parsed_flavor;
                endpoint.auth_token = catalog.value("auth_token", "");
                if (!endpoint.base_url.empty()) assessment.probe_targets.catalog = endpoint;
            }
            assessment.probe_targets.api_url = targets.value("api_url", "");
            assessment.probe_targets.sparql_url = targets.value("sparql_url", "");
        }
    } catch (const json::exception& e) {
        throw_parse(source + ": " + e.what());
    }
    return assessment;
}

json assessment_to_json(const PortalAssessment& assessment) {
    json doc;
    doc["portal"] = assessment.profile.portal;
    doc["country"] = assessment.profile.country;
    doc["region"] = region_name(assessment.profile.region);
    doc["url"] = assessment.profile.url;
    doc["assessed_on"] = assessment.record.assessed_on;
    json observations = json::object();
    for (const auto& [id, obs] : assessment.record.observations)
        observations[id] = observation_to_json(obs);
    doc["observations"] = std::move(observations);
    json provenance = json::object();
    for (const auto& [id, prov] : assessment.record.provenance)
        provenance[id] = provenance_name(prov);
    doc["provenance"] = std::move(provenance);
    if (assessment.probe_targets.catalog || !assessment.probe_targets.api_url.empty() ||
        !assessment.probe_targets.sparql_url.empty()) {
        json targets = json::object();
        if (assessment.probe_targets.catalog) {
            json catalog;
            catalog["base_url"] = assessment.probe_targets.catalog->base_url;
            catalog["flavor"] = catalog_flavor_name(assessment.probe_targets.catalog->flavor);
            if (!assessment.probe_targets.catalog->auth_token.empty())
                catalog["auth_token"] = assessment.probe_targets.catalog->auth_token;
            targets["catalog"] = std::move(catalog);
        }
        if (!assessment.probe_targets.api_url.empty())
            targets["api_url"] = assessment.probe_targets.api_url;
        if (!assessment.probe_targets.sparql_url.empty())
            targets["sparql_url"] = assessment.probe_targets.sparql_url;
        doc["probe_targets"] = std::move(targets);
    }
    return doc;
}

PortalAssessment load_assessment_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_io("cannot open assessment file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw_parse("assessment file '" + path + "': " + e.what());
    }
    return parse_assessment(doc, path);
}

std::vector<PortalAssessment> load_assessments(const std::string& dir,
                                               const FrameworkSchema& schema) {
    if (!fs::is_directory(dir)) throw_io("assessment directory '" + dir + "' does not exist");

    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());

    std::set<std::string> known_ids;
    for (const auto& id : schema.sub_dimension_ids()) known_ids.insert(id);

    std::vector<PortalAssessment> assessments;
    std::set<std::string> portals;
    for (const auto& path : paths) {
        PortalAssessment assessment = load_assessment_file(path);
        for (const auto& [id, obs] : assessment.record.observations) {
            if (!known_ids.count(id))
                throw_invalid(path + ": unknown sub-dimension id '" + id + "'");
        }
        if (!portals.insert(assessment.profile.portal).second)
            throw_invalid(path + ": duplicate portal '" + assessment.profile.portal + "'");
        assessments.push_back(std::move(assessment));
    }
    std::sort(assessments.begin(), assessments.end(),
              [](const PortalAssessment& a, const PortalAssessment& b) {
                  return a.profile.portal < b.profile.portal;
              });
    return assessments;
}

json scorecard_to_json(const PortalScorecard& card) {
    json doc;
    doc["portal"] = card.portal;
    doc["total"] = card.total;
    json dimensions = json::object();
    for (const auto& [letter, score] : card.dimension_scores)
        dimensions[std::string(1, letter)] = score;
    doc["dimension_scores"] = std::move(dimensions);
    json binary = json::object();
    for (const auto& [id, bit] : card.binary) binary[id] = bit;
    doc["binary"] = std::move(binary);
    doc["flags"] = card.flags;
    json provenance = json::object();
    for (const auto& [id, prov] : card.provenance) provenance[id] = provenance_name(prov);
    doc["provenance"] = std::move(provenance);
    return doc;
}

void write_text_file(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw_io("cannot create directory '" + target.parent_path().string() + "'");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw_io("cannot write '" + path + "'");
    out << content;
    if (!out) throw_io("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string sanitize_filename(const std::string& name) {
    std::string safe;
    safe.reserve(name.size());
    for (char c : name) {
        const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' ||
                          c == '-';
        safe.push_back(keep ? c : '_');
    }
    return safe.empty() ? "_" : safe;
}

} // namespace odum
