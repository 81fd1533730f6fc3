#include "framework.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "error.hpp"

namespace odum {

using nlohmann::json;

int weight_value(WeightTier tier) {
    switch (tier) {
    case WeightTier::low: return 1;
    case WeightTier::medium: return 2;
    case WeightTier::high: return 3;
    }
    return 0;
}

const char* weight_tier_name(WeightTier tier) {
    switch (tier) {
    case WeightTier::low: return "low";
    case WeightTier::medium: return "medium";
    case WeightTier::high: return "high";
    }
    return "?";
}

std::optional<WeightTier> parse_weight_tier(const std::string& name) {
    if (name == "low") return WeightTier::low;
    if (name == "medium") return WeightTier::medium;
    if (name == "high") return WeightTier::high;
    return std::nullopt;
}

const char* criterion_type_name(CriterionType type) {
    switch (type) {
    case CriterionType::manual: return "manual";
    case CriterionType::sampled: return "sampled";
    case CriterionType::dependent_accuracy: return "dependent_accuracy";
    case CriterionType::external_score: return "external_score";
    case CriterionType::timed_load: return "timed_load";
    }
    return "?";
}

const SubDimension* FrameworkSchema::find(const std::string& id) const {
    for (const auto& dim : dimensions) {
        for (const auto& sub : dim.sub_dimensions) {
            if (sub.id == id) return &sub;
        }
    }
    return nullptr;
}

const Dimension* FrameworkSchema::find_dimension(char letter) const {
    for (const auto& dim : dimensions) {
        if (dim.letter == letter) return &dim;
    }
    return nullptr;
}

std::vector<std::string> FrameworkSchema::sub_dimension_ids() const {
    std::vector<std::string> ids;
    for (const auto& dim : dimensions) {
        for (const auto& sub : dim.sub_dimensions) ids.push_back(sub.id);
    }
    return ids;
}

std::size_t FrameworkSchema::sub_dimension_count() const {
    std::size_t n = 0;
    for (const auto& dim : dimensions) n += dim.sub_dimensions.size();
    return n;
}

int FrameworkSchema::dimension_max(char letter) const {
    const Dimension* dim = find_dimension(letter);
    if (!dim) return 0;
    int sum = 0;
    for (const auto& sub : dim->sub_dimensions) sum += weight_value(sub.weight);
    return sum;
}

int FrameworkSchema::total_max() const {
    int sum = 0;
    for (const auto& dim : dimensions) sum += dimension_max(dim.letter);
    return sum;
}

namespace {

Criterion criterion_from_json(const json& doc, const std::string& id) {
    Criterion c;
    const std::string kind = doc.value("kind", "manual");
    if (kind == "manual") {
        c.type = CriterionType::manual;
    } else if (kind == "sampled") {
        c.type = CriterionType::sampled;
        c.pass_numerator = doc.value("pass_numerator", 10);
        c.pass_denominator = doc.value("pass_denominator", 14);
        if (c.pass_denominator <= 0 || c.pass_numerator < 0 || c.pass_numerator > c.pass_denominator)
            throw_parse("schema: sampled criterion for '" + id + "' has invalid pass fraction");
        c.ratio = doc.value("ratio", static_cast<double>(c.pass_numerator) /
                                         static_cast<double>(c.pass_denominator));
        if (!(c.ratio > 0.0 && c.ratio <= 1.0))
            throw_parse("schema: sampled criterion for '" + id + "' has ratio outside (0,1]");
    } else if (kind == "dependent_accuracy") {
        c.type = CriterionType::dependent_accuracy;
        c.depends_on = doc.value("depends_on", "");
        c.ratio = doc.value("ratio", 0.7);
        if (c.depends_on.empty())
            throw_parse("schema: dependent_accuracy criterion for '" + id + "' lacks depends_on");
        if (!(c.ratio > 0.0 && c.ratio <= 1.0))
            throw_parse("schema: dependent_accuracy criterion for '" + id + "' has ratio outside (0,1]");
    } else if (kind == "external_score") {
        c.type = CriterionType::external_score;
        if (!doc.contains("min_pass"))
            throw_parse("schema: external_score criterion for '" + id + "' lacks min_pass");
        c.min_pass = doc.at("min_pass").get<double>();
    } else if (kind == "timed_load") {
        c.type = CriterionType::timed_load;
        if (!doc.contains("max_seconds"))
            throw_parse("schema: timed_load criterion for '" + id + "' lacks max_seconds");
        c.max_seconds = doc.at("max_seconds").get<double>();
        if (c.max_seconds <= 0.0)
            throw_parse("schema: timed_load criterion for '" + id + "' needs max_seconds > 0");
    } else {
        throw_parse("schema: unknown criterion kind '" + kind + "' for '" + id + "'");
    }
    return c;
}

json criterion_to_json(const Criterion& c) {
    json doc;
    doc["kind"] = criterion_type_name(c.type);
    switch (c.type) {
    case CriterionType::manual:
        break;
    case CriterionType::sampled:
        doc["pass_numerator"] = c.pass_numerator;
        doc["pass_denominator"] = c.pass_denominator;
        doc["ratio"] = c.ratio;
        break;
    case CriterionType::dependent_accuracy:
        doc["depends_on"] = c.depends_on;
        doc["ratio"] = c.ratio;
        break;
    case CriterionType::external_score:
        doc["min_pass"] = c.min_pass;
        break;
    case CriterionType::timed_load:
        doc["max_seconds"] = c.max_seconds;
        break;
    }
    return doc;
}

// Structural requirements every loaded schema must satisfy; cardinalities
// beyond these stay configurable so revised rubrics load without code changes.
void check_structure(const FrameworkSchema& schema) {
    for (char letter = 'a'; letter <= 'i'; ++letter) {
        if (!schema.find_dimension(letter))
            throw_parse(std::string("schema: missing dimension '") + letter + "'");
    }
    std::map<std::string, int> seen;
    for (const auto& dim : schema.dimensions) {
        if (dim.letter < 'a' || dim.letter > 'i')
            throw_parse(std::string("schema: dimension letter '") + dim.letter + "' outside a..i");
        if (dim.sub_dimensions.empty())
            throw_parse(std::string("schema: dimension '") + dim.letter + "' has no sub-dimensions");
        int expected_index = 1;
        for (const auto& sub : dim.sub_dimensions) {
            if (sub.id.size() < 2 || sub.id[0] != dim.letter)
                throw_parse("schema: sub-dimension id '" + sub.id + "' does not match dimension '" +
                            std::string(1, dim.letter) + "'");
            for (std::size_t i = 1; i < sub.id.size(); ++i) {
                if (!std::isdigit(static_cast<unsigned char>(sub.id[i])))
                    throw_parse("schema: malformed sub-dimension id '" + sub.id + "'");
            }
            const int index = std::stoi(sub.id.substr(1));
            if (index != expected_index)
                throw_parse("schema: sub-dimension ids of '" + std::string(1, dim.letter) +
                            "' are not contiguous at '" + sub.id + "'");
            ++expected_index;
            if (++seen[sub.id] > 1) throw_parse("schema: duplicate sub-dimension id '" + sub.id + "'");
        }
    }
    for (const auto& dim : schema.dimensions) {
        for (const auto& sub : dim.sub_dimensions) {
            if (sub.criterion.type == CriterionType::dependent_accuracy &&
                schema.find(sub.criterion.depends_on) == nullptr)
                throw_parse("schema: '" + sub.id + "' depends on unknown sub-dimension '" +
                            sub.criterion.depends_on + "'");
        }
    }
}

} // namespace

FrameworkSchema parse_schema(const json& doc) {
    FrameworkSchema schema;
    try {
        schema.profile_name = doc.value("profile_name", "");
        if (!doc.contains("dimensions") || !doc.at("dimensions").is_array())
            throw_parse("schema: missing 'dimensions' array");
        for (const auto& dim_doc : doc.at("dimensions")) {
            Dimension dim;
            const std::string letter = dim_doc.value("letter", "");
            if (letter.size() != 1) throw_parse("schema: dimension letter must be one character");
            dim.letter = letter[0];
            dim.name = dim_doc.value("name", "");
            for (const auto& sub_doc : dim_doc.value("sub_dimensions", json::array())) {
                SubDimension sub;
                sub.id = sub_doc.value("id", "");
                if (sub.id.empty()) throw_parse("schema: sub-dimension without id");
                sub.title = sub_doc.value("title", "");
                sub.description = sub_doc.value("description", "");
                const std::string tier = sub_doc.value("weight", "");
                const auto parsed = parse_weight_tier(tier);
                if (!parsed)
                    throw_parse("schema: weight '" + tier + "' of '" + sub.id +
                                "' is not one of low/medium/high");
                sub.weight = *parsed;
                sub.criterion = criterion_from_json(sub_doc.value("criterion", json{{"kind", "manual"}}),
                                                    sub.id);
                dim.sub_dimensions.push_back(std::move(sub));
            }
            schema.dimensions.push_back(std::move(dim));
        }
        if (doc.contains("published_reference")) {
            const auto& pub = doc.at("published_reference");
            auto& out = schema.published_reference;
            out.claimed_total_max = pub.value("claimed_total_max", 0);
            const json maxima = pub.value("claimed_dimension_maxima", json::object());
            for (const auto& [key, value] : maxima.items()) {
                if (key.size() == 1) out.claimed_dimension_maxima[key[0]] = value.get<int>();
            }
            const json averages = pub.value("reported_averages", json::object());
            for (const auto& [key, value] : averages.items())
                out.reported_averages[key] = value.get<double>();
            const json top_scores = pub.value("reported_top_scores", json::object());
            for (const auto& [key, value] : top_scores.items())
                out.reported_top_scores[key] = value.get<int>();
        }
    } catch (const json::exception& e) {
        throw_parse(std::string("schema: malformed document: ") + e.what());
    }
    check_structure(schema);
    return schema;
}

FrameworkSchema load_schema_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_io("cannot open schema file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw_parse("schema file '" + path + "': " + e.what());
    }
    return parse_schema(doc);
}

json schema_to_json(const FrameworkSchema& schema) {
    json doc;
    doc["profile_name"] = schema.profile_name;
    json dims = json::array();
    for (const auto& dim : schema.dimensions) {
        json dim_doc;
        dim_doc["letter"] = std::string(1, dim.letter);
        dim_doc["name"] = dim.name;
        json subs = json::array();
        for (const auto& sub : dim.sub_dimensions) {
            json sub_doc;
            sub_doc["id"] = sub.id;
            sub_doc["title"] = sub.title;
            sub_doc["description"] = sub.description;
            sub_doc["weight"] = weight_tier_name(sub.weight);
            sub_doc["criterion"] = criterion_to_json(sub.criterion);
            subs.push_back(std::move(sub_doc));
        }
        dim_doc["sub_dimensions"] = std::move(subs);
        dims.push_back(std::move(dim_doc));
    }
    doc["dimensions"] = std::move(dims);
    const auto& pub = schema.published_reference;
    json pub_doc;
    pub_doc["claimed_total_max"] = pub.claimed_total_max;
    json maxima = json::object();
    for (const auto& [letter, value] : pub.claimed_dimension_maxima)
        maxima[std::string(1, letter)] = value;
    pub_doc["claimed_dimension_maxima"] = std::move(maxima);
    pub_doc["reported_averages"] = pub.reported_averages;
    pub_doc["reported_top_scores"] = pub.reported_top_scores;
    doc["published_reference"] = std::move(pub_doc);
    return doc;
}

bool ValidationReport::ok() const { return error_count() == 0; }

int ValidationReport::error_count() const {
    int n = 0;
    for (const auto& issue : issues)
        if (issue.severity == ValidationIssue::Severity::error) ++n;
    return n;
}

int ValidationReport::warning_count() const {
    int n = 0;
    for (const auto& issue : issues)
        if (issue.severity == ValidationIssue::Severity::warning) ++n;
    return n;
}

std::string ValidationReport::to_text() const {
    std::ostringstream out;
    out << "dimensions: " << dimension_count << "\n";
    out << "sub-dimensions: " << sub_dimension_count << "\n";
    out << "weighted maxima:";
    int total = 0;
    for (const auto& [letter, sum] : weight_sums) {
        out << " " << letter << "=" << sum;
        total += sum;
    }
    out << " total=" << total << "\n";
    out << "criterion census:";
    for (const auto& [type, count] : criterion_census)
        out << " " << criterion_type_name(type) << "=" << count;
    out << "\n";
    for (const auto& issue : issues) {
        out << (issue.severity == ValidationIssue::Severity::error ? "error: " : "warning: ")
            << issue.message << "\n";
    }
    if (issues.empty()) out << "no findings\n";
    return out.str();
}

ValidationReport validate_schema(const FrameworkSchema& schema) {
    ValidationReport report;
    report.dimension_count = static_cast<int>(schema.dimensions.size());
    report.sub_dimension_count = static_cast<int>(schema.sub_dimension_count());

    std::map<std::string, int> id_seen;
    for (const auto& dim : schema.dimensions) {
        int weight_sum = 0;
        for (const auto& sub : dim.sub_dimensions) {
            weight_sum += weight_value(sub.weight);
            report.criterion_census[sub.criterion.type] += 1;
            if (++id_seen[sub.id] == 2)
                report.issues.push_back({ValidationIssue::Severity::error,
                                         "duplicate sub-dimension id '" + sub.id + "'"});
            if (sub.letter() != dim.letter)
                report.issues.push_back({ValidationIssue::Severity::error,
                                         "sub-dimension '" + sub.id + "' filed under dimension '" +
                                             std::string(1, dim.letter) + "'"});
            if (sub.criterion.type == CriterionType::dependent_accuracy &&
                schema.find(sub.criterion.depends_on) == nullptr)
                report.issues.push_back({ValidationIssue::Severity::error,
                                         "'" + sub.id + "' depends on unknown '" +
                                             sub.criterion.depends_on + "'"});
        }
        report.weight_sums[dim.letter] = weight_sum;
    }

    const auto& pub = schema.published_reference;
    for (const auto& [letter, claimed] : pub.claimed_dimension_maxima) {
        const int computed = schema.dimension_max(letter);
        if (computed != claimed) {
            std::ostringstream msg;
            msg << "dimension " << letter << " computed max " << computed
                << " vs published " << claimed;
            report.issues.push_back({ValidationIssue::Severity::warning, msg.str()});
        }
    }
    if (pub.claimed_total_max != 0 && schema.total_max() != pub.claimed_total_max) {
        std::ostringstream msg;
        msg << "total computed max " << schema.total_max() << " vs published "
            << pub.claimed_total_max;
        report.issues.push_back({ValidationIssue::Severity::warning, msg.str()});
    }
    return report;
}

} // namespace odum
