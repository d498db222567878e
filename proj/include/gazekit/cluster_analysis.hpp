/**
 * cluster_analysis.hpp — Spatial clustering of raw gaze points and
 * looking-time ranking of the resulting clusters.
 */

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gazekit/types.hpp"

namespace gazekit {

struct TooFewSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ClusterModel {
    int k = 0;
    std::vector<std::pair<double, double>> centroids;
    // Cluster index per clustered (valid) sample, in sample order.
    std::vector<int> assignments;
    std::vector<std::size_t> counts;
    // Cluster indices by descending member count, ties by ascending index.
    std::vector<int> rank_order;
    double inertia = 0.0;
    int iterations = 0;
};

/// Lloyd iteration over the session's valid samples. Seeding is
/// farthest-point: the seed picks the first centroid, each further one
/// is the point farthest from its nearest chosen centroid. Deterministic
/// for fixed (input, k, seed); stops when assignments are stable or
/// after 100 iterations. Empty clusters are reseeded at the point
/// farthest from its assigned centroid.
ClusterModel cluster_gaze(const std::vector<GazeSample>& samples, int k, std::uint64_t seed);

std::vector<int> rank_clusters(const ClusterModel& model);

/// "looked most in cluster a, then b, then c" ranking sentence.
std::string describe_ranking(const ClusterModel& model);

/// CSV of (timestamp_ms,x,y,cluster) for the valid samples.
std::string export_cluster_csv(const std::vector<GazeSample>& samples, const ClusterModel& model);

/// JSON summary {k, centroids, counts, rank_order, inertia}.
std::string export_cluster_json(const ClusterModel& model);

}  // namespace gazekit
