#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "assessment_io.hpp"
#include "cluster.hpp"
#include "framework.hpp"
#include "scoring.hpp"

namespace odum {

// Everything the cluster subcommand computes off one score matrix.
struct ClusterAnalysis {
    FeatureMatrix::Mode mode = FeatureMatrix::Mode::binary;
    std::uint64_t seed = 0;
    int k = 0;
    bool k_was_auto = false;
    ElbowResult elbow;
    KMeansResult kmeans_result;
    LinkageMatrix linkage;
    Partition hier_partition;
    MergedClusters merged;
    std::map<std::string, std::map<char, double>> profiles;
};

// k = 0 requests the elbow suggestion; an explicit k overrides it.
ClusterAnalysis run_cluster_analysis(const FrameworkSchema& schema, const ScoreMatrix& matrix,
                                     const std::vector<PortalScorecard>& scorecards, int k,
                                     FeatureMatrix::Mode mode, std::uint64_t seed);

struct ReportBundle {
    ValidationReport validation;
    std::vector<PortalScorecard> scorecards;
    std::map<std::string, PortalProfile> profiles;
    std::vector<RankedPortal> ranking;
    RegionalAggregates regional;
    ScoreMatrix matrix;
    std::optional<ClusterAnalysis> clusters;
};

ReportBundle build_report_bundle(const FrameworkSchema& schema,
                                 const std::vector<PortalAssessment>& assessments);

std::string format_fixed(double value, int decimals);

std::string matrix_to_csv(const ScoreMatrix& matrix);
std::string ranking_to_csv(const std::vector<RankedPortal>& ranking);
std::string ranking_to_markdown(const std::vector<RankedPortal>& ranking,
                                const std::vector<PortalScorecard>& scorecards);
std::string linkage_to_csv(const LinkageMatrix& linkage);
std::string partition_to_csv(const Partition& kmeans_p, const Partition& hier_p,
                             const MergedClusters& merged);
std::string elbow_to_csv(const ElbowResult& elbow);
std::string profiles_to_csv(const std::map<std::string, std::map<char, double>>& profiles,
                            const FrameworkSchema& schema);
std::string dendrogram_to_json(const LinkageMatrix& linkage, const std::vector<std::string>& rows);

std::string report_to_markdown(const FrameworkSchema& schema, const ReportBundle& bundle);

// Writers for the documented output layout under an output directory.
void write_scorecards(const std::string& out_dir, const std::vector<PortalScorecard>& scorecards);
void write_matrix(const std::string& out_dir, const ScoreMatrix& matrix);
void write_ranking(const std::string& out_dir, const ReportBundle& bundle,
                   const std::string& format);
void write_cluster_outputs(const std::string& out_dir, const ClusterAnalysis& analysis,
                           const ScoreMatrix& matrix, const FrameworkSchema& schema);
void write_report(const std::string& out_dir, const FrameworkSchema& schema,
                  const ReportBundle& bundle);

} // namespace odum
