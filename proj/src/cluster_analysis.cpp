#include "gazekit/cluster_analysis.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

namespace gazekit {

namespace {

struct Point {
    double x, y;
    double timestamp_ms;
};

double sq_dist(const Point& p, const std::pair<double, double>& c) {
    double dx = p.x - c.first;
    double dy = p.y - c.second;
    return dx * dx + dy * dy;
}

}  // namespace

ClusterModel cluster_gaze(const std::vector<GazeSample>& samples, int k, std::uint64_t seed) {
    std::vector<Point> points;
    points.reserve(samples.size());
    for (const auto& s : samples)
        if (s.valid) points.push_back({s.x, s.y, s.timestamp_ms});
    std::size_t n = points.size();
    if (k < 1 || n < static_cast<std::size_t>(k))
        throw TooFewSamples("need at least k valid samples (k=" + std::to_string(k) +
                            ", valid=" + std::to_string(n) + ")");

    ClusterModel model;
    model.k = k;

    // Farthest-point seeding; only the first pick consumes randomness,
    // so the seed path is identical under coordinate translation.
    std::mt19937_64 rng(seed);
    std::vector<double> nearest(n, std::numeric_limits<double>::max());
    std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    model.centroids.push_back({points[first].x, points[first].y});
    for (int c = 1; c < k; ++c) {
        std::size_t far_idx = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], sq_dist(points[i], model.centroids.back()));
            if (nearest[i] > far_d) {
                far_d = nearest[i];
                far_idx = i;
            }
        }
        model.centroids.push_back({points[far_idx].x, points[far_idx].y});
    }

    model.assignments.assign(n, -1);
    double prev_inertia = std::numeric_limits<double>::max();
    for (int iter = 0; iter < 100; ++iter) {
        // Assignment step; ties go to the lowest cluster index.
        bool changed = false;
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = sq_dist(points[i], model.centroids[0]);
            for (int c = 1; c < k; ++c) {
                double d = sq_dist(points[i], model.centroids[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (model.assignments[i] != best) {
                model.assignments[i] = best;
                changed = true;
            }
            inertia += best_d;
        }
        assert(inertia <= prev_inertia * (1 + 1e-12) && "Lloyd inertia must not increase");
        prev_inertia = inertia;
        model.inertia = inertia;
        model.iterations = iter + 1;
        if (!changed && iter > 0) break;

        // Update step: centroids move to member means, accumulated in
        // fixed sample order.
        std::vector<double> sx(k, 0.0), sy(k, 0.0);
        std::vector<std::size_t> cnt(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            int c = model.assignments[i];
            sx[c] += points[i].x;
            sy[c] += points[i].y;
            ++cnt[c];
        }
        for (int c = 0; c < k; ++c) {
            if (cnt[c] > 0) {
                model.centroids[c] = {sx[c] / cnt[c], sy[c] / cnt[c]};
            } else {
                // Reseed an empty cluster at the point farthest from its
                // assigned centroid, keeping k stable.
                std::size_t far_idx = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double d = sq_dist(points[i], model.centroids[model.assignments[i]]);
                    if (d > far_d) {
                        far_d = d;
                        far_idx = i;
                    }
                }
                model.centroids[c] = {points[far_idx].x, points[far_idx].y};
                prev_inertia = std::numeric_limits<double>::max();
            }
        }
    }

    model.counts.assign(k, 0);
    for (int a : model.assignments) ++model.counts[a];
    model.rank_order = rank_clusters(model);
    return model;
}

std::vector<int> rank_clusters(const ClusterModel& model) {
    std::vector<int> order(model.k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return model.counts[a] > model.counts[b];
    });
    return order;
}

std::string describe_ranking(const ClusterModel& model) {
    std::ostringstream out;
    out << "looked most in cluster " << model.rank_order[0];
    for (std::size_t i = 1; i < model.rank_order.size(); ++i)
        out << (i + 1 == model.rank_order.size() ? " and then " : ", then ")
            << model.rank_order[i];
    return out.str();
}

std::string export_cluster_csv(const std::vector<GazeSample>& samples,
                               const ClusterModel& model) {
    std::ostringstream out;
    out.precision(15);
    out << "timestamp_ms,x,y,cluster\n";
    std::size_t idx = 0;
    for (const auto& s : samples) {
        if (!s.valid) continue;
        out << s.timestamp_ms << "," << s.x << "," << s.y << "," << model.assignments[idx++]
            << "\n";
    }
    return out.str();
}

std::string export_cluster_json(const ClusterModel& model) {
    nlohmann::json doc;
    doc["k"] = model.k;
    auto centroids = nlohmann::json::array();
    for (const auto& c : model.centroids) centroids.push_back({c.first, c.second});
    doc["centroids"] = centroids;
    doc["counts"] = model.counts;
    doc["rank_order"] = model.rank_order;
    doc["inertia"] = model.inertia;
    doc["ranking"] = describe_ranking(model);
    return doc.dump(2);
}

}  // namespace gazekit
