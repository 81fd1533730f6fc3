#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "error.hpp"

namespace odum {

namespace fs = std::filesystem;
using nlohmann::json;

ClusterAnalysis run_cluster_analysis(const FrameworkSchema& schema, const ScoreMatrix& matrix,
                                     const std::vector<PortalScorecard>& scorecards, int k,
                                     FeatureMatrix::Mode mode, std::uint64_t seed) {
    const std::size_t n = matrix.portals.size();
    if (n < 2) throw_invalid("cluster analysis needs at least 2 portals");

    ClusterAnalysis analysis;
    analysis.mode = mode;
    analysis.seed = seed;
    const FeatureMatrix features = to_feature_matrix(matrix, schema, mode);

    const int k_max = static_cast<int>(std::min<std::size_t>(n, 8));
    if (k_max >= 3) analysis.elbow = elbow_curve(features, k_max, seed);

    if (k <= 0) {
        analysis.k_was_auto = true;
        analysis.k = analysis.elbow.k_values.empty() ? 1 : analysis.elbow.suggested_k;
    } else {
        analysis.k = k;
    }
    if (static_cast<std::size_t>(analysis.k) > n)
        throw_invalid("k exceeds the number of portals");

    analysis.kmeans_result = kmeans(features, analysis.k, seed);
    analysis.linkage = ward_linkage(features);
    // The dendrogram is cut to the K-means cluster count so both methods
    // produce the same number of clusters.
    analysis.hier_partition = cut_dendrogram(analysis.linkage, features.rows, analysis.k);
    analysis.merged = merge_partitions(analysis.kmeans_result.partition, analysis.hier_partition);
    label_clusters_by_score(analysis.merged, scorecards);
    analysis.profiles = cluster_dimension_profile(analysis.merged, scorecards);
    return analysis;
}

ReportBundle build_report_bundle(const FrameworkSchema& schema,
                                 const std::vector<PortalAssessment>& assessments) {
    ReportBundle bundle;
    bundle.validation = validate_schema(schema);
    for (const auto& assessment : assessments) {
        bundle.profiles[assessment.profile.portal] = assessment.profile;
        bundle.scorecards.push_back(score_portal(schema, assessment.record));
    }
    bundle.ranking = rank_portals(bundle.scorecards, bundle.profiles);
    bundle.regional = regional_aggregates(bundle.scorecards, bundle.profiles);
    bundle.matrix = build_score_matrix(schema, bundle.scorecards);
    return bundle;
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

namespace {

std::string csv_escape(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string escaped = "\"";
    for (char c : value) {
        if (c == '"') escaped += "\"\"";
        else escaped.push_back(c);
    }
    escaped += "\"";
    return escaped;
}

std::string md_escape(const std::string& value) {
    std::string escaped;
    escaped.reserve(value.size());
    for (char c : value) {
        if (c == '|') escaped += "\\|";
        else if (c != '\r' && c != '\n') escaped.push_back(c);
    }
    return escaped;
}

bool has_probe_sourced(const PortalScorecard& card) {
    for (const auto& [id, prov] : card.provenance)
        if (prov == Provenance::probe) return true;
    return false;
}

const PortalScorecard* find_card(const std::vector<PortalScorecard>& scorecards,
                                 const std::string& portal) {
    for (const auto& card : scorecards)
        if (card.portal == portal) return &card;
    return nullptr;
}

std::string join(const std::vector<std::string>& items, const std::string& separator) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += separator;
        out += items[i];
    }
    return out;
}

} // namespace

std::string matrix_to_csv(const ScoreMatrix& matrix) {
    std::ostringstream out;
    out << "portal";
    for (const auto& column : matrix.columns) out << "," << column;
    out << "\n";
    for (std::size_t i = 0; i < matrix.portals.size(); ++i) {
        out << csv_escape(matrix.portals[i]);
        for (int cell : matrix.cells[i]) out << "," << cell;
        out << "\n";
    }
    return out.str();
}

std::string ranking_to_csv(const std::vector<RankedPortal>& ranking) {
    std::ostringstream out;
    out << "rank,portal,country,total\n";
    for (const auto& entry : ranking)
        out << entry.rank << "," << csv_escape(entry.portal) << "," << csv_escape(entry.country)
            << "," << entry.total << "\n";
    return out.str();
}

std::string ranking_to_markdown(const std::vector<RankedPortal>& ranking,
                                const std::vector<PortalScorecard>& scorecards) {
    std::ostringstream out;
    out << "| Rank | Portal | Country | Total |\n";
    out << "| ---: | --- | --- | ---: |\n";
    for (const auto& entry : ranking) {
        const PortalScorecard* card = find_card(scorecards, entry.portal);
        const bool probed = card && has_probe_sourced(*card);
        out << "| " << entry.rank << " | " << md_escape(entry.portal)
            << (probed ? " (probe)" : "") << " | " << md_escape(entry.country) << " | "
            << entry.total << " |\n";
    }
    return out.str();
}

std::string linkage_to_csv(const LinkageMatrix& linkage) {
    std::ostringstream out;
    out << "left,right,height,size\n";
    for (const auto& merge : linkage) {
        char height[32];
        std::snprintf(height, sizeof(height), "%.9g", merge.height);
        out << merge.left << "," << merge.right << "," << height << "," << merge.size << "\n";
    }
    return out.str();
}

std::string partition_to_csv(const Partition& kmeans_p, const Partition& hier_p,
                             const MergedClusters& merged) {
    std::map<std::string, std::string> labels;
    for (const auto& cluster : merged.clusters)
        for (const auto& portal : cluster.members()) labels[portal] = cluster.label;

    std::ostringstream out;
    out << "portal,kmeans_cluster,hier_cluster,merged_label\n";
    for (const auto& [portal, kmeans_cluster] : kmeans_p.assignment) {
        out << csv_escape(portal) << "," << kmeans_cluster << ","
            << hier_p.assignment.at(portal) << "," << labels[portal] << "\n";
    }
    return out.str();
}

std::string elbow_to_csv(const ElbowResult& elbow) {
    std::ostringstream out;
    out << "k,wcss\n";
    for (std::size_t i = 0; i < elbow.k_values.size(); ++i) {
        char wcss[32];
        std::snprintf(wcss, sizeof(wcss), "%.9g", elbow.wcss[i]);
        out << elbow.k_values[i] << "," << wcss << "\n";
    }
    return out.str();
}

std::string profiles_to_csv(const std::map<std::string, std::map<char, double>>& profiles,
                            const FrameworkSchema& schema) {
    std::ostringstream out;
    out << "label";
    for (const auto& dim : schema.dimensions) out << "," << dim.letter;
    out << "\n";
    for (const auto& [label, means] : profiles) {
        out << csv_escape(label);
        for (const auto& dim : schema.dimensions) {
            const auto it = means.find(dim.letter);
            out << "," << format_fixed(it == means.end() ? 0.0 : it->second, 2);
        }
        out << "\n";
    }
    return out.str();
}

namespace {

json dendrogram_node(const LinkageMatrix& linkage, const std::vector<std::string>& rows,
                     int node) {
    const int n = static_cast<int>(rows.size());
    if (node < n) return json{{"portal", rows[static_cast<std::size_t>(node)]}};
    const auto& merge = linkage[static_cast<std::size_t>(node - n)];
    json doc;
    doc["left"] = dendrogram_node(linkage, rows, merge.left);
    doc["right"] = dendrogram_node(linkage, rows, merge.right);
    doc["height"] = merge.height;
    return doc;
}

} // namespace

std::string dendrogram_to_json(const LinkageMatrix& linkage, const std::vector<std::string>& rows) {
    if (linkage.empty()) return "{}\n";
    const int root = static_cast<int>(rows.size() + linkage.size()) - 1;
    return dendrogram_node(linkage, rows, root).dump(2) + "\n";
}

std::string report_to_markdown(const FrameworkSchema& schema, const ReportBundle& bundle) {
    std::ostringstream out;
    out << "# OGD portal usability report\n\n";
    out << "Profile: " << schema.profile_name << "\n\n";

    out << "## Validation\n\n";
    out << "- dimensions: " << bundle.validation.dimension_count << "\n";
    out << "- sub-dimensions: " << bundle.validation.sub_dimension_count << "\n";
    int total_max = 0;
    std::vector<std::string> sums;
    for (const auto& [letter, sum] : bundle.validation.weight_sums) {
        sums.push_back(std::string(1, letter) + "=" + std::to_string(sum));
        total_max += sum;
    }
    out << "- weighted maxima: " << join(sums, ", ") << " (total " << total_max << ")\n";
    std::vector<std::string> census;
    for (const auto& [type, count] : bundle.validation.criterion_census)
        census.push_back(std::string(criterion_type_name(type)) + "=" + std::to_string(count));
    out << "- criterion census: " << join(census, ", ") << "\n";
    for (const auto& issue : bundle.validation.issues) {
        out << "- "
            << (issue.severity == ValidationIssue::Severity::error ? "error: " : "warning: ")
            << issue.message << "\n";
    }
    out << "\n";

    out << "## Ranking\n\n";
    out << ranking_to_markdown(bundle.ranking, bundle.scorecards) << "\n";

    out << "## Regional\n\n";
    out << "- overall mean: " << format_fixed(bundle.regional.overall_mean, 1) << "\n";
    for (const auto& [region, mean] : bundle.regional.region_means) {
        out << "- " << region_name(region) << " mean (n=" << bundle.regional.region_counts.at(region)
            << "): " << format_fixed(mean, 1) << "\n";
    }
    out << "- portals above " << format_fixed(bundle.regional.above_threshold, 0) << ": "
        << bundle.regional.count_above << "\n";
    out << "- portals below " << format_fixed(bundle.regional.below_threshold, 0) << ": "
        << bundle.regional.count_below << "\n\n";

    out << "## Dimensions\n\n";
    out << "| Dimension | Max | Best portals | Best score | Mean |\n";
    out << "| --- | ---: | --- | ---: | ---: |\n";
    for (const auto& dim : schema.dimensions) {
        int best = 0;
        double sum = 0.0;
        for (const auto& card : bundle.scorecards) {
            const auto it = card.dimension_scores.find(dim.letter);
            const int score = it == card.dimension_scores.end() ? 0 : it->second;
            best = std::max(best, score);
            sum += score;
        }
        std::vector<std::string> best_portals;
        for (const auto& card : bundle.scorecards) {
            const auto it = card.dimension_scores.find(dim.letter);
            if (it != card.dimension_scores.end() && it->second == best && !bundle.scorecards.empty())
                best_portals.push_back(card.portal);
        }
        const double mean =
            bundle.scorecards.empty() ? 0.0 : sum / static_cast<double>(bundle.scorecards.size());
        out << "| " << dim.letter << " " << md_escape(dim.name) << " | "
            << schema.dimension_max(dim.letter) << " | " << md_escape(join(best_portals, ", "))
            << " | " << best << " | " << format_fixed(mean, 1) << " |\n";
    }
    out << "\n";

    out << "## Clusters\n\n";
    if (!bundle.clusters) {
        out << "not computed\n";
        return out.str();
    }
    const ClusterAnalysis& analysis = *bundle.clusters;
    out << "- method: K-means (k=" << analysis.k
        << (analysis.k_was_auto ? ", elbow-suggested" : "") << ", seed " << analysis.seed
        << ") and Ward hierarchical, dendrogram cut to the same k\n";
    out << "- features: "
        << (analysis.mode == FeatureMatrix::Mode::binary ? "binary" : "weighted") << "\n";
    if (!analysis.elbow.k_values.empty()) {
        std::vector<std::string> curve;
        for (std::size_t i = 0; i < analysis.elbow.k_values.size(); ++i)
            curve.push_back("k" + std::to_string(analysis.elbow.k_values[i]) + "=" +
                            format_fixed(analysis.elbow.wcss[i], 2));
        out << "- elbow wcss: " << join(curve, ", ") << " (suggested k "
            << analysis.elbow.suggested_k << ")\n";
    }
    out << "\n";
    for (const auto& cluster : analysis.merged.clusters) {
        double mean_total = 0.0;
        const auto members = cluster.members();
        for (const auto& portal : members) {
            const PortalScorecard* card = find_card(bundle.scorecards, portal);
            if (card) mean_total += card->total;
        }
        if (!members.empty()) mean_total /= static_cast<double>(members.size());
        out << "### Cluster " << cluster.label << " (mean total "
            << format_fixed(mean_total, 1) << ")\n\n";
        out << "| Cluster appearance | Portals |\n";
        out << "| --- | --- |\n";
        out << "| Both in K-means and hierarchical clusters | " << md_escape(join(cluster.core, ", "))
            << " |\n";
        if (!cluster.kmeans_only.empty())
            out << "| Only in K-means | " << md_escape(join(cluster.kmeans_only, ", ")) << " |\n";
        if (!cluster.hier_only.empty())
            out << "| Only in hierarchical | " << md_escape(join(cluster.hier_only, ", "))
                << " |\n";
        out << "\n";
        const auto profile_it = analysis.profiles.find(cluster.label);
        if (profile_it != analysis.profiles.end()) {
            out << "| Dimension |";
            for (const auto& dim : schema.dimensions) out << " " << dim.letter << " |";
            out << "\n|---|";
            for (std::size_t i = 0; i < schema.dimensions.size(); ++i) out << "---:|";
            out << "\n| mean |";
            for (const auto& dim : schema.dimensions) {
                const auto it = profile_it->second.find(dim.letter);
                out << " " << format_fixed(it == profile_it->second.end() ? 0.0 : it->second, 2)
                    << " |";
            }
            out << "\n\n";
        }
    }
    return out.str();
}

void write_scorecards(const std::string& out_dir, const std::vector<PortalScorecard>& scorecards) {
    for (const auto& card : scorecards) {
        const fs::path path =
            fs::path(out_dir) / "scorecards" / (sanitize_filename(card.portal) + ".json");
        write_text_file(path.string(), scorecard_to_json(card).dump(2) + "\n");
    }
}

void write_matrix(const std::string& out_dir, const ScoreMatrix& matrix) {
    write_text_file((fs::path(out_dir) / "matrix.csv").string(), matrix_to_csv(matrix));
}

void write_ranking(const std::string& out_dir, const ReportBundle& bundle,
                   const std::string& format) {
    if (format == "csv" || format.empty())
        write_text_file((fs::path(out_dir) / "ranking.csv").string(),
                        ranking_to_csv(bundle.ranking));
    if (format == "md" || format.empty())
        write_text_file((fs::path(out_dir) / "ranking.md").string(),
                        ranking_to_markdown(bundle.ranking, bundle.scorecards));
}

void write_cluster_outputs(const std::string& out_dir, const ClusterAnalysis& analysis,
                           const ScoreMatrix& matrix, const FrameworkSchema& schema) {
    const fs::path clusters = fs::path(out_dir) / "clusters";
    write_text_file((clusters / "partition.csv").string(),
                    partition_to_csv(analysis.kmeans_result.partition, analysis.hier_partition,
                                     analysis.merged));
    write_text_file((clusters / "linkage.csv").string(), linkage_to_csv(analysis.linkage));
    write_text_file((clusters / "dendrogram.json").string(),
                    dendrogram_to_json(analysis.linkage, matrix.portals));
    write_text_file((clusters / "profiles.csv").string(),
                    profiles_to_csv(analysis.profiles, schema));
    if (!analysis.elbow.k_values.empty())
        write_text_file((clusters / "elbow.csv").string(), elbow_to_csv(analysis.elbow));
}

void write_report(const std::string& out_dir, const FrameworkSchema& schema,
                  const ReportBundle& bundle) {
    write_text_file((fs::path(out_dir) / "report.md").string(),
                    report_to_markdown(schema, bundle));
}

} // namespace odum
