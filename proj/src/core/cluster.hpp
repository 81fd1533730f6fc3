#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "framework.hpp"
#include "scoring.hpp"

namespace odum {

struct FeatureMatrix {
    enum class Mode { binary, weighted };

    std::vector<std::string> rows;    // portal ids
    std::vector<std::string> columns; // feature labels
    std::vector<std::vector<double>> cells;
    Mode mode = Mode::binary;

    std::size_t row_count() const { return rows.size(); }
    std::size_t column_count() const { return columns.size(); }
};

// Binary mode copies the score matrix; weighted multiplies each column by
// its sub-dimension weight.
FeatureMatrix to_feature_matrix(const ScoreMatrix& matrix, const FrameworkSchema& schema,
                                FeatureMatrix::Mode mode);

struct Partition {
    enum class Method { kmeans, hierarchical };

    Method method = Method::kmeans;
    std::map<std::string, int> assignment; // portal -> cluster index in [0, k)
    int k = 0;
};

struct KMeansResult {
    Partition partition;
    std::vector<std::vector<double>> centroids;
    double wcss = 0.0;
    std::vector<double> run_wcss; // per-restart objective, for diagnostics
};

// Lloyd's algorithm, k-means++ seeding, best of `restarts` runs by lowest
// within-cluster sum of squares. Deterministic for a fixed seed.
KMeansResult kmeans(const FeatureMatrix& matrix, int k, std::uint64_t seed, int restarts = 10);

struct ElbowResult {
    std::vector<int> k_values;
    std::vector<double> wcss;
    int suggested_k = 1;
    bool degenerate = false; // flat curve (e.g. all rows identical)
};

// WCSS for k = 1..k_max with a warm-start run per k, which keeps the curve
// non-increasing; suggests the k with the largest second difference.
ElbowResult elbow_curve(const FeatureMatrix& matrix, int k_max, std::uint64_t seed);

struct LinkageMerge {
    int left = 0;   // node index: 0..n-1 originals, n+step for merged clusters
    int right = 0;
    double height = 0.0; // incremental Ward objective (increase in total SSE)
    int size = 0;        // members in the merged cluster
};

using LinkageMatrix = std::vector<LinkageMerge>;

// Agglomerative Ward clustering via the Lance-Williams recurrence on squared
// Euclidean distances; ties broken by smallest (left, right) node pair.
LinkageMatrix ward_linkage(const FeatureMatrix& matrix);

Partition cut_dendrogram(const LinkageMatrix& linkage, const std::vector<std::string>& rows,
                         int k);
Partition cut_dendrogram_at_height(const LinkageMatrix& linkage,
                                   const std::vector<std::string>& rows, double height);

struct MergedCluster {
    std::string label;
    std::vector<std::string> core;        // portals in both methods' matched clusters
    std::vector<std::string> kmeans_only;
    std::vector<std::string> hier_only;

    std::vector<std::string> members() const; // union of the three lists
};

struct MergedClusters {
    std::vector<MergedCluster> clusters;
};

// Matches each hierarchical cluster to the K-means cluster sharing the most
// portals (greedy, one-to-one, descending overlap).
MergedClusters merge_partitions(const Partition& kmeans_p, const Partition& hier_p);

// Relabels clusters with color names ordered by descending mean total score
// (green is the strongest) and reorders the cluster list accordingly.
void label_clusters_by_score(MergedClusters& merged,
                             const std::vector<PortalScorecard>& scorecards);

// Mean dimension score over each cluster's full membership.
std::map<std::string, std::map<char, double>>
cluster_dimension_profile(const MergedClusters& merged,
                          const std::vector<PortalScorecard>& scorecards);

} // namespace odum
