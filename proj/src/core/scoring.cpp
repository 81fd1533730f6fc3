#include "scoring.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "error.hpp"

namespace odum {

Observation Observation::boolean(bool v) {
    Observation obs;
    obs.kind = Kind::boolean;
    obs.value = v;
    return obs;
}

Observation Observation::sample(int satisfied, int total) {
    if (satisfied < 0 || total < 0 || satisfied > total)
        throw_invalid("sample observation requires 0 <= satisfied <= total");
    Observation obs;
    obs.kind = Kind::sample;
    obs.satisfied = satisfied;
    obs.total = total;
    return obs;
}

Observation Observation::accuracy(int accurate, int frequency_specified) {
    if (accurate < 0 || frequency_specified < 0 || accurate > frequency_specified)
        throw_invalid("accuracy observation requires 0 <= accurate <= frequency_specified");
    Observation obs;
    obs.kind = Kind::accuracy;
    obs.accurate = accurate;
    obs.frequency_specified = frequency_specified;
    return obs;
}

Observation Observation::measure(double value, std::string unit) {
    Observation obs;
    obs.kind = Kind::measured;
    obs.measured = value;
    obs.unit = std::move(unit);
    return obs;
}

Observation Observation::unobserved() { return Observation{}; }

const char* region_name(Region region) {
    switch (region) {
    case Region::eu: return "EU";
    case Region::gcc: return "GCC";
    case Region::other: return "Other";
    }
    return "?";
}

std::optional<Region> parse_region(const std::string& name) {
    if (name == "EU") return Region::eu;
    if (name == "GCC") return Region::gcc;
    if (name == "Other") return Region::other;
    return std::nullopt;
}

const char* provenance_name(Provenance p) {
    switch (p) {
    case Provenance::manual: return "manual";
    case Provenance::probe: return "probe";
    case Provenance::override_manual: return "override";
    }
    return "?";
}

std::optional<Provenance> parse_provenance(const std::string& name) {
    if (name == "manual") return Provenance::manual;
    if (name == "probe") return Provenance::probe;
    if (name == "override") return Provenance::override_manual;
    return std::nullopt;
}

namespace {

int ceil_ratio_threshold(double ratio, int total) {
    return static_cast<int>(std::ceil(ratio * static_cast<double>(total)));
}

[[noreturn]] void mismatch(const SubDimension& spec, const Observation& obs) {
    const char* kind = "?";
    switch (obs.kind) {
    case Observation::Kind::boolean: kind = "bool"; break;
    case Observation::Kind::sample: kind = "sample"; break;
    case Observation::Kind::accuracy: kind = "accuracy"; break;
    case Observation::Kind::measured: kind = "measured"; break;
    case Observation::Kind::unobserved: kind = "unobserved"; break;
    }
    throw_invalid("observation kind '" + std::string(kind) + "' does not fit criterion '" +
                  criterion_type_name(spec.criterion.type) + "' of '" + spec.id + "'");
}

} // namespace

int binarize(const SubDimension& spec, const Observation& obs, const AssessmentRecord& record,
             std::vector<std::string>* flags, const FrameworkSchema* schema) {
    if (obs.kind == Observation::Kind::unobserved) {
        if (flags) flags->push_back(spec.id + ": unobserved, scored 0");
        return 0;
    }

    const Criterion& criterion = spec.criterion;
    switch (criterion.type) {
    case CriterionType::manual:
        if (obs.kind != Observation::Kind::boolean) mismatch(spec, obs);
        return obs.value ? 1 : 0;

    case CriterionType::sampled: {
        if (obs.kind != Observation::Kind::sample) mismatch(spec, obs);
        if (obs.total == 0) {
            if (flags) flags->push_back(spec.id + ": empty sample, scored 0");
            return 0;
        }
        // Catalogs smaller than the nominal sample keep the ratio rule.
        const int threshold = obs.total < criterion.pass_denominator
                                  ? ceil_ratio_threshold(criterion.ratio, obs.total)
                                  : criterion.pass_numerator;
        return obs.satisfied >= threshold ? 1 : 0;
    }

    case CriterionType::dependent_accuracy: {
        if (obs.kind != Observation::Kind::accuracy) mismatch(spec, obs);
        const auto it = record.observations.find(criterion.depends_on);
        if (it == record.observations.end())
            throw_invalid("'" + spec.id + "' requires an observation for '" +
                          criterion.depends_on + "'");
        // The gate observation is binarized under its own criterion.
        SubDimension gate_spec;
        if (const SubDimension* gate = schema ? schema->find(criterion.depends_on) : nullptr) {
            gate_spec = *gate;
        } else {
            gate_spec.id = criterion.depends_on;
            switch (it->second.kind) {
            case Observation::Kind::boolean:
                gate_spec.criterion.type = CriterionType::manual;
                break;
            case Observation::Kind::sample:
                gate_spec.criterion.type = CriterionType::sampled;
                gate_spec.criterion.pass_numerator = 10;
                gate_spec.criterion.pass_denominator = 14;
                gate_spec.criterion.ratio = 0.7;
                break;
            default:
                throw_invalid("cannot infer the criterion of '" + criterion.depends_on +
                              "' gating '" + spec.id + "'; pass the schema");
            }
        }
        const int gate_score = binarize(gate_spec, it->second, record, nullptr, schema);
        if (gate_score != 1) return 0;
        if (obs.frequency_specified <= 0) {
            if (flags) flags->push_back(spec.id + ": no verifiable frequencies, scored 0");
            return 0;
        }
        const int threshold = ceil_ratio_threshold(criterion.ratio, obs.frequency_specified);
        return obs.accurate >= threshold ? 1 : 0;
    }

    case CriterionType::external_score:
        if (obs.kind != Observation::Kind::measured) mismatch(spec, obs);
        return obs.measured >= criterion.min_pass ? 1 : 0;

    case CriterionType::timed_load:
        if (obs.kind != Observation::Kind::measured) mismatch(spec, obs);
        return obs.measured < criterion.max_seconds ? 1 : 0;
    }
    throw_invalid("unhandled criterion type for '" + spec.id + "'");
}

PortalScorecard score_portal(const FrameworkSchema& schema, const AssessmentRecord& record) {
    PortalScorecard card;
    card.portal = record.portal;
    card.provenance = record.provenance;
    for (const auto& dim : schema.dimensions) {
        int dim_score = 0;
        for (const auto& sub : dim.sub_dimensions) {
            const auto it = record.observations.find(sub.id);
            const Observation obs =
                it == record.observations.end() ? Observation::unobserved() : it->second;
            const int bit = binarize(sub, obs, record, &card.flags, &schema);
            card.binary[sub.id] = bit;
            dim_score += bit * weight_value(sub.weight);
        }
        card.dimension_scores[dim.letter] = dim_score;
        card.total += dim_score;
    }
    return card;
}

std::vector<RankedPortal> rank_portals(const std::vector<PortalScorecard>& scorecards,
                                       const std::map<std::string, PortalProfile>& profiles) {
    std::set<std::string> seen;
    std::vector<RankedPortal> ranked;
    ranked.reserve(scorecards.size());
    for (const auto& card : scorecards) {
        if (!seen.insert(card.portal).second)
            throw_invalid("duplicate portal '" + card.portal + "' in ranking input");
        RankedPortal entry;
        entry.portal = card.portal;
        entry.total = card.total;
        const auto it = profiles.find(card.portal);
        entry.country = it != profiles.end() ? it->second.country : card.portal;
        ranked.push_back(std::move(entry));
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedPortal& a, const RankedPortal& b) {
        if (a.total != b.total) return a.total > b.total;
        if (a.country != b.country) return a.country < b.country;
        return a.portal < b.portal;
    });
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        // Competition ranking: equal totals share the higher rank.
        if (i > 0 && ranked[i].total == ranked[i - 1].total)
            ranked[i].rank = ranked[i - 1].rank;
        else
            ranked[i].rank = static_cast<int>(i) + 1;
    }
    return ranked;
}

RegionalAggregates regional_aggregates(const std::vector<PortalScorecard>& scorecards,
                                       const std::map<std::string, PortalProfile>& profiles,
                                       double above_threshold, double below_threshold) {
    RegionalAggregates agg;
    agg.above_threshold = above_threshold;
    agg.below_threshold = below_threshold;
    std::map<Region, double> sums;
    double overall_sum = 0.0;
    for (const auto& card : scorecards) {
        const auto it = profiles.find(card.portal);
        if (it == profiles.end())
            throw_invalid("no profile for portal '" + card.portal + "'");
        const Region region = it->second.region;
        sums[region] += card.total;
        agg.region_counts[region] += 1;
        overall_sum += card.total;
        if (card.total > above_threshold) ++agg.count_above;
        if (card.total < below_threshold) ++agg.count_below;
    }
    if (!scorecards.empty()) overall_sum /= static_cast<double>(scorecards.size());
    agg.overall_mean = scorecards.empty() ? 0.0 : overall_sum;
    for (const auto& [region, sum] : sums)
        agg.region_means[region] = sum / static_cast<double>(agg.region_counts[region]);
    return agg;
}

ScoreMatrix build_score_matrix(const FrameworkSchema& schema,
                               const std::vector<PortalScorecard>& scorecards) {
    ScoreMatrix matrix;
    matrix.columns = schema.sub_dimension_ids();
    for (const auto& card : scorecards) {
        if (card.binary.size() != matrix.columns.size())
            throw_invalid("scorecard for '" + card.portal +
                          "' was not produced under this schema");
        std::vector<int> row;
        row.reserve(matrix.columns.size());
        for (const auto& id : matrix.columns) {
            const auto it = card.binary.find(id);
            if (it == card.binary.end())
                throw_invalid("scorecard for '" + card.portal + "' lacks sub-dimension '" + id +
                              "'");
            row.push_back(it->second);
        }
        matrix.portals.push_back(card.portal);
        matrix.cells.push_back(std::move(row));
    }
    return matrix;
}

} // namespace odum
