#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "framework.hpp"

namespace odum {

// One raw observation for a sub-dimension, before binarization.
struct Observation {
    enum class Kind { boolean, sample, accuracy, measured, unobserved };

    Kind kind = Kind::unobserved;
    bool value = false;              // boolean
    int satisfied = 0;               // sample
    int total = 0;                   // sample
    int accurate = 0;                // accuracy
    int frequency_specified = 0;     // accuracy
    double measured = 0.0;           // measured
    std::string unit;                // measured

    static Observation boolean(bool v);
    static Observation sample(int satisfied, int total);
    static Observation accuracy(int accurate, int frequency_specified);
    static Observation measure(double value, std::string unit = "");
    static Observation unobserved();

    bool operator==(const Observation&) const = default;
};

enum class Region { eu, gcc, other };

const char* region_name(Region region);
std::optional<Region> parse_region(const std::string& name);

struct PortalProfile {
    std::string portal;
    std::string country;
    Region region = Region::other;
    std::string url;

    bool operator==(const PortalProfile&) const = default;
};

enum class Provenance { manual, probe, override_manual };

const char* provenance_name(Provenance p);
std::optional<Provenance> parse_provenance(const std::string& name);

struct AssessmentRecord {
    std::string portal;
    std::string assessed_on; // YYYY-MM-DD
    std::map<std::string, Observation> observations;
    std::map<std::string, Provenance> provenance;

    bool operator==(const AssessmentRecord&) const = default;
};

struct PortalScorecard {
    std::string portal;
    std::map<std::string, int> binary;       // sub-dimension id -> 0/1
    std::map<char, int> dimension_scores;    // dimension letter -> weighted score
    int total = 0;
    std::vector<std::string> flags;
    std::map<std::string, Provenance> provenance; // carried through for reporting

    bool operator==(const PortalScorecard&) const = default;
};

struct ScoreMatrix {
    std::vector<std::string> portals;
    std::vector<std::string> columns; // sub-dimension ids in schema order
    std::vector<std::vector<int>> cells;
};

// Applies the sub-dimension's criterion to one raw observation. The record is
// consulted for dependency inputs (e4 needs the e3 observation). Unobserved
// scores 0 and appends a note to flags when given. The schema, when supplied,
// resolves the criterion of dependency gates; without it the gate rule is
// inferred from the gate observation's kind.
int binarize(const SubDimension& spec, const Observation& obs, const AssessmentRecord& record,
             std::vector<std::string>* flags = nullptr, const FrameworkSchema* schema = nullptr);

PortalScorecard score_portal(const FrameworkSchema& schema, const AssessmentRecord& record);

struct RankedPortal {
    int rank = 0;
    std::string portal;
    std::string country;
    int total = 0;
};

// Descending by total, competition ranking; ties ordered by country name.
std::vector<RankedPortal> rank_portals(const std::vector<PortalScorecard>& scorecards,
                                       const std::map<std::string, PortalProfile>& profiles);

struct RegionalAggregates {
    double overall_mean = 0.0;
    std::map<Region, double> region_means;
    std::map<Region, int> region_counts;
    double above_threshold = 100.0;
    double below_threshold = 50.0;
    int count_above = 0; // totals strictly above the upper cut point
    int count_below = 0; // totals strictly below the lower cut point
};

RegionalAggregates regional_aggregates(const std::vector<PortalScorecard>& scorecards,
                                       const std::map<std::string, PortalProfile>& profiles,
                                       double above_threshold = 100.0,
                                       double below_threshold = 50.0);

ScoreMatrix build_score_matrix(const FrameworkSchema& schema,
                               const std::vector<PortalScorecard>& scorecards);

} // namespace odum
