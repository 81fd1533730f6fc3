#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "framework.hpp"
#include "probes.hpp"
#include "scoring.hpp"

namespace odum {

// One assessment file: who the portal is, what was observed, and where the
// automated checks should point.
struct PortalAssessment {
    PortalProfile profile;
    AssessmentRecord record;
    PortalProbeTargets probe_targets;
};

nlohmann::json observation_to_json(const Observation& obs);
Observation observation_from_json(const nlohmann::json& doc);

PortalAssessment parse_assessment(const nlohmann::json& doc, const std::string& source);
nlohmann::json assessment_to_json(const PortalAssessment& assessment);

PortalAssessment load_assessment_file(const std::string& path);

// Every *.json in the directory, validated against the schema's id set,
// sorted by portal id. Duplicate portals and unknown ids are errors.
std::vector<PortalAssessment> load_assessments(const std::string& dir,
                                               const FrameworkSchema& schema);

nlohmann::json scorecard_to_json(const PortalScorecard& card);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Portal names become file names; anything outside [A-Za-z0-9._-] turns into '_'.
std::string sanitize_filename(const std::string& name);

} // namespace odum
