#pragma once

// Test-side oracles, kept independent of the implementation paths they
// check: brute-force scoring over the flat sub-dimension list, agglomerative
// Ward merging recomputed from raw points at every step, the adjusted Rand
// index, and deterministic data generators.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "core/cluster.hpp"
#include "core/framework.hpp"
#include "core/scoring.hpp"

namespace odum::testing {

// Flat weighted sum, no dimension grouping.
inline int brute_force_total(const FrameworkSchema& schema,
                             const std::map<std::string, int>& binary) {
    int total = 0;
    for (const auto& dim : schema.dimensions) {
        for (const auto& sub : dim.sub_dimensions) {
            const auto it = binary.find(sub.id);
            const int bit = it == binary.end() ? 0 : it->second;
            total += bit * weight_value(sub.weight);
        }
    }
    return total;
}

// Ward agglomeration recomputed from raw points: at every step the merge
// cost of two clusters is evaluated directly as the increase in total
// within-cluster sum of squares.
inline LinkageMatrix ward_oracle(const std::vector<std::vector<double>>& points) {
    struct Cluster {
        int node;
        std::vector<int> members;
    };
    const int n = static_cast<int>(points.size());
    std::vector<Cluster> active;
    for (int i = 0; i < n; ++i) active.push_back({i, {i}});

    const auto sse = [&points](const std::vector<int>& members) {
        const std::size_t dims = points.front().size();
        std::vector<double> mean(dims, 0.0);
        for (int m : members)
            for (std::size_t j = 0; j < dims; ++j) mean[j] += points[static_cast<std::size_t>(m)][j];
        for (double& v : mean) v /= static_cast<double>(members.size());
        double sum = 0.0;
        for (int m : members) {
            for (std::size_t j = 0; j < dims; ++j) {
                const double d = points[static_cast<std::size_t>(m)][j] - mean[j];
                sum += d * d;
            }
        }
        return sum;
    };

    LinkageMatrix linkage;
    int next_node = n;
    while (active.size() > 1) {
        double best_cost = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0, best_j = 1;
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                std::vector<int> joined = active[i].members;
                joined.insert(joined.end(), active[j].members.begin(), active[j].members.end());
                const double cost = sse(joined) - sse(active[i].members) - sse(active[j].members);
                const auto candidate = std::make_pair(std::min(active[i].node, active[j].node),
                                                      std::max(active[i].node, active[j].node));
                const auto incumbent =
                    std::make_pair(std::min(active[best_i].node, active[best_j].node),
                                   std::max(active[best_i].node, active[best_j].node));
                if (cost < best_cost || (cost == best_cost && candidate < incumbent)) {
                    best_cost = cost;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        Cluster merged;
        merged.node = next_node++;
        merged.members = active[best_i].members;
        merged.members.insert(merged.members.end(), active[best_j].members.begin(),
                              active[best_j].members.end());
        const int lo = std::min(active[best_i].node, active[best_j].node);
        const int hi = std::max(active[best_i].node, active[best_j].node);
        linkage.push_back({lo, hi, best_cost, static_cast<int>(merged.members.size())});
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_j));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_i));
        active.push_back(std::move(merged));
    }
    return linkage;
}

inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    const auto comb2 = [](long x) { return static_cast<double>(x) * (x - 1) / 2.0; };
    std::map<std::pair<int, int>, long> contingency;
    std::map<int, long> row_sums, col_sums;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++contingency[{a[i], b[i]}];
        ++row_sums[a[i]];
        ++col_sums[b[i]];
    }
    double index = 0.0;
    for (const auto& [cell, count] : contingency) index += comb2(count);
    double sum_rows = 0.0, sum_cols = 0.0;
    for (const auto& [label, count] : row_sums) sum_rows += comb2(count);
    for (const auto& [label, count] : col_sums) sum_cols += comb2(count);
    const double total = comb2(static_cast<long>(a.size()));
    const double expected = sum_rows * sum_cols / total;
    const double max_index = (sum_rows + sum_cols) / 2.0;
    if (max_index == expected) return 1.0; // degenerate (both trivial partitions)
    return (index - expected) / (max_index - expected);
}

struct PlantedMatrix {
    FeatureMatrix features;
    std::vector<int> labels;
};

// 4 prototype bit rows, portals assigned round-robin, bits flipped with the
// given probability.
inline PlantedMatrix planted_binary_matrix(int rows, int columns, int clusters, double flip_prob,
                                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto coin = [&rng](double p) {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
    };

    std::vector<std::vector<int>> prototypes(static_cast<std::size_t>(clusters));
    for (auto& proto : prototypes) {
        proto.resize(static_cast<std::size_t>(columns));
        for (int& bit : proto) bit = coin(0.5) ? 1 : 0;
    }

    PlantedMatrix planted;
    planted.features.mode = FeatureMatrix::Mode::binary;
    for (int j = 0; j < columns; ++j) planted.features.columns.push_back("c" + std::to_string(j));
    for (int i = 0; i < rows; ++i) {
        const int label = i % clusters;
        planted.labels.push_back(label);
        planted.features.rows.push_back("portal-" + std::to_string(i));
        std::vector<double> row(static_cast<std::size_t>(columns));
        for (int j = 0; j < columns; ++j) {
            int bit = prototypes[static_cast<std::size_t>(label)][static_cast<std::size_t>(j)];
            if (coin(flip_prob)) bit = 1 - bit;
            row[static_cast<std::size_t>(j)] = bit;
        }
        planted.features.cells.push_back(std::move(row));
    }
    return planted;
}

inline std::vector<int> assignment_vector(const Partition& partition,
                                          const std::vector<std::string>& rows) {
    std::vector<int> labels;
    labels.reserve(rows.size());
    for (const auto& row : rows) labels.push_back(partition.assignment.at(row));
    return labels;
}

// Randomized assessment record covering a random subset of the schema with
// kind-compatible observations; e3 always accompanies e4.
inline AssessmentRecord random_record(const FrameworkSchema& schema, std::mt19937_64& rng) {
    const auto chance = [&rng](double p) {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
    };
    const auto uniform_int = [&rng](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };

    AssessmentRecord record;
    record.portal = "random";
    record.assessed_on = "2025-01-01";
    for (const auto& dim : schema.dimensions) {
        for (const auto& sub : dim.sub_dimensions) {
            if (chance(0.15)) continue; // leave some sub-dimensions unobserved
            switch (sub.criterion.type) {
            case CriterionType::manual:
                record.observations[sub.id] = Observation::boolean(chance(0.5));
                break;
            case CriterionType::sampled: {
                const int total = uniform_int(1, 20);
                record.observations[sub.id] = Observation::sample(uniform_int(0, total), total);
                break;
            }
            case CriterionType::dependent_accuracy: {
                const int specified = uniform_int(0, 14);
                record.observations[sub.id] =
                    Observation::accuracy(specified == 0 ? 0 : uniform_int(0, specified),
                                          specified);
                if (!record.observations.count(sub.criterion.depends_on))
                    record.observations[sub.criterion.depends_on] =
                        Observation::sample(uniform_int(0, 14), 14);
                break;
            }
            case CriterionType::external_score:
                record.observations[sub.id] = Observation::measure(uniform_int(0, 100));
                break;
            case CriterionType::timed_load:
                record.observations[sub.id] =
                    Observation::measure(static_cast<double>(uniform_int(0, 80)) / 10.0, "s");
                break;
            }
        }
    }
    return record;
}

} // namespace odum::testing
