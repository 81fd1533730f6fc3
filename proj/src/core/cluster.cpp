#include "cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "error.hpp"

namespace odum {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform in [0,1) from the raw engine output; pinned so results do not
// depend on the standard library's distribution implementation.
double next_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t next_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(next_double(rng) * static_cast<double>(n)) % n;
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

std::vector<std::vector<double>> kmeanspp_init(const FeatureMatrix& matrix, int k,
                                               std::mt19937_64& rng) {
    const auto& points = matrix.cells;
    const std::size_t n = points.size();
    std::vector<std::vector<double>> centroids;
    centroids.reserve(static_cast<std::size_t>(k));
    std::vector<bool> chosen(n, false);

    const std::size_t first = next_index(rng, n);
    centroids.push_back(points[first]);
    chosen[first] = true;

    std::vector<double> best_dist(n);
    for (std::size_t i = 0; i < n; ++i) best_dist[i] = squared_distance(points[i], centroids[0]);

    while (centroids.size() < static_cast<std::size_t>(k)) {
        const double total = std::accumulate(best_dist.begin(), best_dist.end(), 0.0);
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = next_double(rng) * total;
            double cumulative = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cumulative += best_dist[i];
                if (cumulative >= target && best_dist[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) { // numeric edge: fall back to the last positive weight
                for (std::size_t i = n; i-- > 0;) {
                    if (best_dist[i] > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        }
        if (pick == n) { // all remaining points coincide with centroids
            for (std::size_t i = 0; i < n; ++i) {
                if (!chosen[i]) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) pick = next_index(rng, n);
        }
        chosen[pick] = true;
        centroids.push_back(points[pick]);
        for (std::size_t i = 0; i < n; ++i)
            best_dist[i] = std::min(best_dist[i], squared_distance(points[i], centroids.back()));
    }
    return centroids;
}

struct LloydOutcome {
    std::vector<int> assignment;
    std::vector<std::vector<double>> centroids;
    double wcss = 0.0;
};

LloydOutcome lloyd(const FeatureMatrix& matrix, std::vector<std::vector<double>> centroids,
                   int max_iterations = 300) {
    const auto& points = matrix.cells;
    const std::size_t n = points.size();
    const std::size_t k = centroids.size();
    std::vector<int> assignment(n, -1);

    for (int iteration = 0; iteration < max_iterations; ++iteration) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_dist = squared_distance(points[i], centroids[0]);
            for (std::size_t c = 1; c < k; ++c) {
                const double dist = squared_distance(points[i], centroids[c]);
                if (dist < best_dist) {
                    best_dist = dist;
                    best = static_cast<int>(c);
                }
            }
            if (assignment[i] != best) {
                assignment[i] = best;
                changed = true;
            }
        }

        std::vector<std::size_t> sizes(k, 0);
        for (int a : assignment) ++sizes[static_cast<std::size_t>(a)];

        // Empty clusters steal the point farthest from its centroid.
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] != 0) continue;
            double farthest = -1.0;
            std::size_t candidate = n;
            for (std::size_t i = 0; i < n; ++i) {
                const auto home = static_cast<std::size_t>(assignment[i]);
                if (sizes[home] < 2) continue;
                const double dist = squared_distance(points[i], centroids[home]);
                if (dist > farthest) {
                    farthest = dist;
                    candidate = i;
                }
            }
            if (candidate == n) continue;
            --sizes[static_cast<std::size_t>(assignment[candidate])];
            assignment[candidate] = static_cast<int>(c);
            ++sizes[c];
            changed = true;
        }

        for (std::size_t c = 0; c < k; ++c)
            std::fill(centroids[c].begin(), centroids[c].end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto& centroid = centroids[static_cast<std::size_t>(assignment[i])];
            for (std::size_t j = 0; j < points[i].size(); ++j) centroid[j] += points[i][j];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (sizes[c] == 0) continue;
            for (double& v : centroids[c]) v /= static_cast<double>(sizes[c]);
        }
        if (!changed) break;
    }

    double wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        wcss += squared_distance(points[i], centroids[static_cast<std::size_t>(assignment[i])]);
    return {std::move(assignment), std::move(centroids), wcss};
}

LloydOutcome run_kmeans_once(const FeatureMatrix& matrix, int k, std::uint64_t run_seed) {
    std::mt19937_64 rng(run_seed);
    auto centroids = kmeanspp_init(matrix, k, rng);
    return lloyd(matrix, std::move(centroids));
}

Partition partition_from_assignment(const FeatureMatrix& matrix, const std::vector<int>& assignment,
                                    int k, Partition::Method method) {
    Partition partition;
    partition.method = method;
    partition.k = k;
    // Cluster indices are renumbered by first appearance in row order so the
    // labeling is canonical regardless of the seeding.
    std::map<int, int> renumber;
    for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
        const int raw = assignment[i];
        const auto it = renumber.emplace(raw, static_cast<int>(renumber.size())).first;
        partition.assignment[matrix.rows[i]] = it->second;
    }
    return partition;
}

} // namespace

FeatureMatrix to_feature_matrix(const ScoreMatrix& matrix, const FrameworkSchema& schema,
                                FeatureMatrix::Mode mode) {
    FeatureMatrix features;
    features.rows = matrix.portals;
    features.columns = matrix.columns;
    features.mode = mode;
    std::vector<double> weights(matrix.columns.size(), 1.0);
    if (mode == FeatureMatrix::Mode::weighted) {
        for (std::size_t j = 0; j < matrix.columns.size(); ++j) {
            const SubDimension* sub = schema.find(matrix.columns[j]);
            if (!sub) throw_invalid("score matrix column '" + matrix.columns[j] +
                                    "' is not in the schema");
            weights[j] = static_cast<double>(weight_value(sub->weight));
        }
    }
    features.cells.reserve(matrix.cells.size());
    for (const auto& row : matrix.cells) {
        std::vector<double> cells(row.size());
        for (std::size_t j = 0; j < row.size(); ++j)
            cells[j] = static_cast<double>(row[j]) * weights[j];
        features.cells.push_back(std::move(cells));
    }
    return features;
}

KMeansResult kmeans(const FeatureMatrix& matrix, int k, std::uint64_t seed, int restarts) {
    const std::size_t n = matrix.row_count();
    if (k <= 0) throw_invalid("k-means requires k >= 1");
    if (static_cast<std::size_t>(k) > n)
        throw_invalid("k-means requires k <= number of rows");
    if (restarts < 1) restarts = 1;

    LloydOutcome best;
    best.wcss = std::numeric_limits<double>::infinity();
    KMeansResult result;
    for (int run = 0; run < restarts; ++run) {
        const std::uint64_t run_seed = splitmix64(seed + 0x9e3779b9ULL * static_cast<std::uint64_t>(run));
        LloydOutcome outcome = run_kmeans_once(matrix, k, run_seed);
        result.run_wcss.push_back(outcome.wcss);
        if (outcome.wcss < best.wcss) best = std::move(outcome);
    }
    result.partition = partition_from_assignment(matrix, best.assignment, k, Partition::Method::kmeans);
    result.centroids = std::move(best.centroids);
    result.wcss = best.wcss;
    return result;
}

ElbowResult elbow_curve(const FeatureMatrix& matrix, int k_max, std::uint64_t seed) {
    const std::size_t n = matrix.row_count();
    if (k_max < 3) throw_invalid("elbow needs k_max >= 3 to have an interior point");
    if (static_cast<std::size_t>(k_max) > n) throw_invalid("elbow requires k_max <= number of rows");

    ElbowResult result;
    std::vector<std::vector<double>> previous_centroids;
    for (int k = 1; k <= k_max; ++k) {
        KMeansResult run = kmeans(matrix, k, seed);
        LloydOutcome best{{}, std::move(run.centroids), run.wcss};
        std::map<std::string, int> assignment_lookup = run.partition.assignment;

        if (k > 1 && !previous_centroids.empty()) {
            // Warm start from the k-1 solution plus the worst-fit point; its
            // objective cannot exceed wcss(k-1), keeping the curve monotone.
            auto seeded = previous_centroids;
            double farthest = -1.0;
            std::size_t candidate = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double nearest = std::numeric_limits<double>::infinity();
                for (const auto& centroid : seeded)
                    nearest = std::min(nearest, squared_distance(matrix.cells[i], centroid));
                if (nearest > farthest) {
                    farthest = nearest;
                    candidate = i;
                }
            }
            seeded.push_back(matrix.cells[candidate]);
            LloydOutcome warm = lloyd(matrix, std::move(seeded));
            if (warm.wcss < best.wcss) best = std::move(warm);
        }

        result.k_values.push_back(k);
        result.wcss.push_back(best.wcss);
        previous_centroids = best.centroids;
    }

    if (result.wcss.front() <= 0.0) {
        result.degenerate = true;
        result.suggested_k = 1;
        return result;
    }
    double best_bend = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < result.wcss.size(); ++i) {
        const double bend = result.wcss[i - 1] - 2.0 * result.wcss[i] + result.wcss[i + 1];
        if (bend > best_bend) {
            best_bend = bend;
            result.suggested_k = result.k_values[i];
        }
    }
    return result;
}

LinkageMatrix ward_linkage(const FeatureMatrix& matrix) {
    const std::size_t n = matrix.row_count();
    if (n < 2) throw_invalid("ward linkage needs at least 2 rows");

    struct Cluster {
        int node;
        int size;
    };
    std::vector<Cluster> active;
    active.reserve(n);
    for (std::size_t i = 0; i < n; ++i) active.push_back({static_cast<int>(i), 1});

    // dist[{a,b}] maintains 2 * (Ward merge cost) between active clusters.
    std::map<std::pair<int, int>, double> dist;
    auto key = [](int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            dist[key(static_cast<int>(i), static_cast<int>(j))] =
                squared_distance(matrix.cells[i], matrix.cells[j]);

    LinkageMatrix linkage;
    linkage.reserve(n - 1);
    int next_node = static_cast<int>(n);

    while (active.size() > 1) {
        std::size_t best_i = 0, best_j = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                const double d = dist.at(key(active[i].node, active[j].node));
                const auto candidate = key(active[i].node, active[j].node);
                const auto incumbent = key(active[best_i].node, active[best_j].node);
                if (d < best || (d == best && candidate < incumbent)) {
                    best = d;
                    best_i = i;
                    best_j = j;
                }
            }
        }

        const Cluster a = active[best_i];
        const Cluster b = active[best_j];
        const auto [left, right] = key(a.node, b.node);
        linkage.push_back({left, right, best / 2.0, a.size + b.size});

        // Lance-Williams update for Ward's objective.
        const double nab = a.size + b.size;
        for (const auto& other : active) {
            if (other.node == a.node || other.node == b.node) continue;
            const double nc = other.size;
            const double d_ac = dist.at(key(a.node, other.node));
            const double d_bc = dist.at(key(b.node, other.node));
            const double d_ab = dist.at(key(a.node, b.node));
            const double updated =
                ((a.size + nc) * d_ac + (b.size + nc) * d_bc - nc * d_ab) / (nab + nc);
            dist[key(next_node, other.node)] = updated;
        }

        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_j));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_i));
        active.push_back({next_node, static_cast<int>(nab)});
        ++next_node;
    }
    return linkage;
}

namespace {

Partition cut_after_merges(const LinkageMatrix& linkage, const std::vector<std::string>& rows,
                           std::size_t merges_applied) {
    const std::size_t n = rows.size();
    // Node n+s is the cluster formed by merge s; route both children to it.
    std::vector<int> owner(n + linkage.size());
    std::iota(owner.begin(), owner.end(), 0);
    for (std::size_t s = 0; s < merges_applied; ++s) {
        const auto& merge = linkage[s];
        owner[static_cast<std::size_t>(merge.left)] = static_cast<int>(n + s);
        owner[static_cast<std::size_t>(merge.right)] = static_cast<int>(n + s);
    }
    auto resolve = [&](int node) {
        while (owner[static_cast<std::size_t>(node)] != node)
            node = owner[static_cast<std::size_t>(node)];
        return node;
    };

    Partition partition;
    partition.method = Partition::Method::hierarchical;
    std::map<int, int> cluster_index; // root node -> index by first appearance
    for (std::size_t i = 0; i < n; ++i) {
        const int root = resolve(static_cast<int>(i));
        const auto it = cluster_index.emplace(root, static_cast<int>(cluster_index.size())).first;
        partition.assignment[rows[i]] = it->second;
    }
    partition.k = static_cast<int>(cluster_index.size());
    return partition;
}

} // namespace

Partition cut_dendrogram(const LinkageMatrix& linkage, const std::vector<std::string>& rows,
                         int k) {
    const std::size_t n = rows.size();
    if (linkage.size() + 1 != n)
        throw_invalid("linkage does not correspond to the given rows");
    if (k <= 0) throw_invalid("dendrogram cut requires k >= 1");
    if (static_cast<std::size_t>(k) > n) throw_invalid("dendrogram cut requires k <= number of rows");
    return cut_after_merges(linkage, rows, n - static_cast<std::size_t>(k));
}

Partition cut_dendrogram_at_height(const LinkageMatrix& linkage,
                                   const std::vector<std::string>& rows, double height) {
    if (linkage.size() + 1 != rows.size())
        throw_invalid("linkage does not correspond to the given rows");
    std::size_t applied = 0;
    while (applied < linkage.size() && linkage[applied].height <= height) ++applied;
    return cut_after_merges(linkage, rows, applied);
}

std::vector<std::string> MergedCluster::members() const {
    std::vector<std::string> all;
    all.insert(all.end(), core.begin(), core.end());
    all.insert(all.end(), kmeans_only.begin(), kmeans_only.end());
    all.insert(all.end(), hier_only.begin(), hier_only.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return all;
}

MergedClusters merge_partitions(const Partition& kmeans_p, const Partition& hier_p) {
    if (kmeans_p.k != hier_p.k)
        throw_invalid("partitions disagree on the number of clusters");
    if (kmeans_p.assignment.size() != hier_p.assignment.size())
        throw_invalid("partitions cover different portal sets");
    for (const auto& [portal, cluster] : kmeans_p.assignment) {
        if (hier_p.assignment.find(portal) == hier_p.assignment.end())
            throw_invalid("portal '" + portal + "' missing from the hierarchical partition");
    }

    const int k = kmeans_p.k;
    std::vector<std::set<std::string>> kmeans_members(static_cast<std::size_t>(k));
    std::vector<std::set<std::string>> hier_members(static_cast<std::size_t>(k));
    for (const auto& [portal, cluster] : kmeans_p.assignment)
        kmeans_members[static_cast<std::size_t>(cluster)].insert(portal);
    for (const auto& [portal, cluster] : hier_p.assignment)
        hier_members[static_cast<std::size_t>(cluster)].insert(portal);

    auto overlap = [&](int h, int m) {
        int count = 0;
        for (const auto& portal : hier_members[static_cast<std::size_t>(h)])
            if (kmeans_members[static_cast<std::size_t>(m)].count(portal)) ++count;
        return count;
    };

    // Greedy one-to-one matching by descending overlap; ties prefer the
    // larger K-means cluster, then the lowest (hier, kmeans) indices.
    std::vector<int> matched_kmeans(static_cast<std::size_t>(k), -1);
    std::vector<bool> hier_used(static_cast<std::size_t>(k), false);
    std::vector<bool> kmeans_used(static_cast<std::size_t>(k), false);
    for (int round = 0; round < k; ++round) {
        int best_h = -1, best_m = -1, best_overlap = -1;
        std::size_t best_size = 0;
        for (int h = 0; h < k; ++h) {
            if (hier_used[static_cast<std::size_t>(h)]) continue;
            for (int m = 0; m < k; ++m) {
                if (kmeans_used[static_cast<std::size_t>(m)]) continue;
                const int common = overlap(h, m);
                const std::size_t size = kmeans_members[static_cast<std::size_t>(m)].size();
                if (common > best_overlap ||
                    (common == best_overlap && size > best_size)) {
                    best_overlap = common;
                    best_size = size;
                    best_h = h;
                    best_m = m;
                }
            }
        }
        hier_used[static_cast<std::size_t>(best_h)] = true;
        kmeans_used[static_cast<std::size_t>(best_m)] = true;
        matched_kmeans[static_cast<std::size_t>(best_h)] = best_m;
    }

    MergedClusters merged;
    for (int h = 0; h < k; ++h) {
        const int m = matched_kmeans[static_cast<std::size_t>(h)];
        MergedCluster cluster;
        cluster.label = "cluster-" + std::to_string(h + 1);
        const auto& hier_set = hier_members[static_cast<std::size_t>(h)];
        const auto& kmeans_set = kmeans_members[static_cast<std::size_t>(m)];
        for (const auto& portal : hier_set) {
            if (kmeans_set.count(portal))
                cluster.core.push_back(portal);
            else
                cluster.hier_only.push_back(portal);
        }
        for (const auto& portal : kmeans_set) {
            if (!hier_set.count(portal)) cluster.kmeans_only.push_back(portal);
        }
        merged.clusters.push_back(std::move(cluster));
    }
    return merged;
}

namespace {

const PortalScorecard& scorecard_for(const std::vector<PortalScorecard>& scorecards,
                                     const std::string& portal) {
    for (const auto& card : scorecards)
        if (card.portal == portal) return card;
    throw_invalid("no scorecard for clustered portal '" + portal + "'");
}

} // namespace

void label_clusters_by_score(MergedClusters& merged,
                             const std::vector<PortalScorecard>& scorecards) {
    static const char* kPalette[] = {"green", "blue", "yellow", "red",
                                     "purple", "orange", "brown", "pink"};
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = 0; i < merged.clusters.size(); ++i) {
        const auto members = merged.clusters[i].members();
        double sum = 0.0;
        for (const auto& portal : members) sum += scorecard_for(scorecards, portal).total;
        const double mean = members.empty() ? 0.0 : sum / static_cast<double>(members.size());
        order.emplace_back(mean, i);
    }
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        return a.first > b.first;
    });
    std::vector<MergedCluster> relabeled;
    relabeled.reserve(merged.clusters.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        MergedCluster cluster = std::move(merged.clusters[order[rank].second]);
        cluster.label = rank < std::size(kPalette) ? kPalette[rank]
                                                   : "rank-" + std::to_string(rank + 1);
        relabeled.push_back(std::move(cluster));
    }
    merged.clusters = std::move(relabeled);
}

std::map<std::string, std::map<char, double>>
cluster_dimension_profile(const MergedClusters& merged,
                          const std::vector<PortalScorecard>& scorecards) {
    std::map<std::string, std::map<char, double>> profiles;
    for (const auto& cluster : merged.clusters) {
        const auto members = cluster.members();
        std::map<char, double> sums;
        for (const auto& portal : members) {
            const auto& card = scorecard_for(scorecards, portal);
            for (const auto& [letter, score] : card.dimension_scores) sums[letter] += score;
        }
        for (auto& [letter, sum] : sums)
            sum /= members.empty() ? 1.0 : static_cast<double>(members.size());
        profiles[cluster.label] = std::move(sums);
    }
    return profiles;
}

} // namespace odum
