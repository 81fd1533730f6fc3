#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace odum {

enum class WeightTier { low, medium, high };

// Importance tiers multiply a sub-dimension's binary score.
int weight_value(WeightTier tier);

const char* weight_tier_name(WeightTier tier);
std::optional<WeightTier> parse_weight_tier(const std::string& name);

enum class CriterionType {
    manual,             // plain yes/no judgment
    sampled,            // pass threshold over a dataset sample
    dependent_accuracy, // accuracy ratio, gated on another sub-dimension
    external_score,     // numeric score from an external checker
    timed_load,         // wall-clock load time bound
};

const char* criterion_type_name(CriterionType type);

struct Criterion {
    CriterionType type = CriterionType::manual;
    // sampled: pass_numerator out of pass_denominator at the nominal sample
    // size; smaller samples use ceil(ratio * size) instead.
    int pass_numerator = 0;
    int pass_denominator = 0;
    // dependent_accuracy gate target; ratio is shared with sampled
    std::string depends_on;
    double ratio = 0.0;
    // external_score
    double min_pass = 0.0;
    // timed_load
    double max_seconds = 0.0;

    bool operator==(const Criterion&) const = default;
};

struct SubDimension {
    std::string id;    // dimension letter + 1-based index, e.g. "d7"
    std::string title;
    std::string description;
    WeightTier weight = WeightTier::low;
    Criterion criterion;

    char letter() const { return id.empty() ? '\0' : id[0]; }

    bool operator==(const SubDimension&) const = default;
};

struct Dimension {
    char letter = '\0';
    std::string name;
    std::vector<SubDimension> sub_dimensions;

    bool operator==(const Dimension&) const = default;
};

// Reference figures as published; used only for discrepancy reporting,
// never as computation inputs.
struct PublishedConstants {
    int claimed_total_max = 0;
    std::map<char, int> claimed_dimension_maxima;
    std::map<std::string, double> reported_averages;
    std::map<std::string, int> reported_top_scores;

    bool operator==(const PublishedConstants&) const = default;
};

struct FrameworkSchema {
    std::string profile_name;
    std::vector<Dimension> dimensions;
    PublishedConstants published_reference;

    bool operator==(const FrameworkSchema&) const = default;

    const SubDimension* find(const std::string& id) const;
    const Dimension* find_dimension(char letter) const;

    // Sub-dimension ids in schema order (the score-matrix column order).
    std::vector<std::string> sub_dimension_ids() const;
    std::size_t sub_dimension_count() const;

    // Weighted maximum of one dimension / of the whole schema.
    int dimension_max(char letter) const;
    int total_max() const;
};

// The rubric transcribed into code; also shipped as framework/default.json.
FrameworkSchema builtin_schema();

FrameworkSchema parse_schema(const nlohmann::json& doc);
FrameworkSchema load_schema_file(const std::string& path);
nlohmann::json schema_to_json(const FrameworkSchema& schema);

struct ValidationIssue {
    enum class Severity { error, warning };
    Severity severity = Severity::warning;
    std::string message;
};

struct ValidationReport {
    int dimension_count = 0;
    int sub_dimension_count = 0;
    std::map<char, int> weight_sums;            // computed weighted maxima per dimension
    std::map<CriterionType, int> criterion_census;
    std::vector<ValidationIssue> issues;

    bool ok() const; // true when no error-severity issues
    int error_count() const;
    int warning_count() const;
    std::string to_text() const;
};

// Structural checks are errors; mismatches against PublishedConstants are warnings.
ValidationReport validate_schema(const FrameworkSchema& schema);

} // namespace odum
