#include "evoforge/seeder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "evoforge/errors.hpp"
#include "evoforge/sections.hpp"
#include "evoforge/templates.hpp"

namespace evoforge {
namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

// k-means++ seeding: first center uniform, then proportional to squared
// distance from the nearest chosen center. Ties and zero-mass corner cases
// resolve to the lowest index.
std::vector<std::vector<double>> seed_centers(const std::vector<std::vector<double>>& points,
                                              int k, Rng& rng) {
    std::vector<std::vector<double>> centers;
    centers.reserve(static_cast<std::size_t>(k));
    std::uniform_int_distribution<std::size_t> uniform_point(0, points.size() - 1);
    centers.push_back(points[uniform_point(rng)]);

    std::vector<double> dist_sq(points.size());
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double best = std::numeric_limits<double>::max();
            for (const auto& c : centers) best = std::min(best, squared_distance(points[i], c));
            dist_sq[i] = best;
            total += best;
        }
        std::size_t chosen = 0;
        if (total > 0.0) {
            std::uniform_real_distribution<double> uniform(0.0, 1.0);
            double threshold = uniform(rng) * total;
            double cumulative = 0.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                cumulative += dist_sq[i];
                if (threshold < cumulative) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = uniform_point(rng);  // all points coincide with a center
        }
        centers.push_back(points[chosen]);
    }
    return centers;
}

std::pair<std::vector<int>, double> lloyd(const std::vector<std::vector<double>>& points, int k,
                                          Rng& rng, const KMeansOptions& options) {
    const std::size_t dim = points.front().size();
    auto centers = seed_centers(points, k, rng);
    std::vector<int> assignment(points.size(), -1);

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            int best = 0;
            double best_d = squared_distance(points[i], centers[0]);
            for (int c = 1; c < k; ++c) {
                double d = squared_distance(points[i], centers[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assignment[i] != best) {
                assignment[i] = best;
                changed = true;
            }
        }

        std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                              std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < points.size(); ++i) {
            auto c = static_cast<std::size_t>(assignment[i]);
            counts[c] += 1;
            for (std::size_t d = 0; d < dim; ++d) sums[c][d] += points[i][d];
        }
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (counts[c] == 0) {
                // Empty cluster: recenter on the point farthest from its center.
                std::size_t farthest = 0;
                double worst = -1.0;
                for (std::size_t i = 0; i < points.size(); ++i) {
                    double d = squared_distance(
                        points[i], centers[static_cast<std::size_t>(assignment[i])]);
                    if (d > worst) {
                        worst = d;
                        farthest = i;
                    }
                }
                centers[c] = points[farthest];
                changed = true;
                continue;
            }
            for (std::size_t d = 0; d < dim; ++d) {
                centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
            }
        }
        if (!changed) break;
    }

    double inertia = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        inertia += squared_distance(points[i], centers[static_cast<std::size_t>(assignment[i])]);
    }
    return {std::move(assignment), inertia};
}

}  // namespace

void KRange::validate() const {
    if (min_k < 1) throw ValidationError("k range must start at >= 1");
    if (max_k < min_k) throw ValidationError("k range must be non-empty");
}

std::vector<int> KRange::values() const {
    validate();
    std::vector<int> out(static_cast<std::size_t>(max_k - min_k + 1));
    std::iota(out.begin(), out.end(), min_k);
    return out;
}

std::pair<std::vector<int>, double> kmeans(const std::vector<std::vector<double>>& points, int k,
                                           Rng& rng, const KMeansOptions& options) {
    if (k < 1) throw ValidationError("k must be >= 1");
    if (points.size() < static_cast<std::size_t>(k)) {
        throw ValidationError("k-means needs at least k points");
    }
    for (const auto& p : points) {
        if (p.size() != points.front().size()) {
            throw ValidationError("k-means points must share one dimension");
        }
    }

    std::pair<std::vector<int>, double> best{{}, std::numeric_limits<double>::max()};
    int restarts = std::max(1, options.restarts);
    for (int r = 0; r < restarts; ++r) {
        auto run = lloyd(points, k, rng, options);
        if (run.second < best.second) best = std::move(run);
    }
    return best;
}

ClusteringReport cluster_source(const std::string& source_name,
                                const std::vector<std::vector<double>>& embeddings, KRange range,
                                Rng& rng, const KMeansOptions& options) {
    range.validate();
    if (embeddings.size() < static_cast<std::size_t>(range.max_k)) {
        throw ValidationError("source " + source_name + ": " +
                              std::to_string(embeddings.size()) + " texts but k range up to " +
                              std::to_string(range.max_k));
    }

    ClusteringReport report;
    report.source = source_name;
    report.k_values = range.values();

    std::vector<std::vector<int>> assignments;
    for (int k : report.k_values) {
        auto [assignment, inertia] = kmeans(embeddings, k, rng, options);
        report.inertia.push_back(inertia);
        assignments.push_back(std::move(assignment));
    }

    // Elbow: maximal discrete second difference (largest curvature).
    std::size_t chosen_index = 0;
    if (report.k_values.size() >= 3) {
        double best_curvature = -std::numeric_limits<double>::max();
        for (std::size_t i = 1; i + 1 < report.inertia.size(); ++i) {
            double curvature = report.inertia[i - 1] - 2.0 * report.inertia[i] +
                               report.inertia[i + 1];
            if (curvature > best_curvature) {
                best_curvature = curvature;
                chosen_index = i;
            }
        }
    }
    report.chosen_k = report.k_values[chosen_index];
    report.assignment = assignments[chosen_index];
    return report;
}

ClusteringReport cluster_source(const std::string& source_name,
                                const std::vector<std::string>& texts, KRange range,
                                Gateway& gateway, Rng& rng, const KMeansOptions& options,
                                const std::string& backend_id) {
    EmbeddingRequest request;
    request.backend_id = backend_id;
    request.texts = texts;
    EmbeddingResult embedded = gateway.embed(request);
    return cluster_source(source_name, embedded.vectors, range, rng, options);
}

std::vector<std::size_t> sample_cluster_representatives(const ClusteringReport& report, Rng& rng) {
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(report.chosen_k));
    for (std::size_t i = 0; i < report.assignment.size(); ++i) {
        members[static_cast<std::size_t>(report.assignment[i])].push_back(i);
    }
    std::vector<std::size_t> out;
    out.reserve(members.size());
    for (auto& cluster : members) {
        if (cluster.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, cluster.size() - 1);
        out.push_back(cluster[pick(rng)]);
    }
    return out;
}

std::string build_diversification_prompt(const InstructionRecord& seed) {
    if (!seed.elements) throw ValidationError("record " + seed.id + " is not decomposed");
    return render_template(diversification_template(),
                           {{"prompt", seed.text},
                            {"extracted", render_extracted(*seed.elements)}});
}

std::vector<std::string> parse_new_prompts(std::string_view reply) {
    std::vector<std::string> prompts;
    for (const auto& section : split_bold_sections(reply)) {
        if (section.header.rfind("new prompt", 0) != 0) continue;
        std::string body = trim(section.body);
        if (!body.empty()) prompts.push_back(std::move(body));
    }
    return prompts;
}

DiversifyResult diversify(const InstructionRecord& seed, int variant_count, Gateway& gateway,
                          IdGenerator& ids, const std::string& backend_id) {
    if (variant_count < 0) throw ValidationError("variant_count must be >= 0");

    DiversifyResult result;
    result.requested = variant_count;
    if (variant_count == 0) return result;

    ChatRequest request;
    request.backend_id = backend_id;
    request.prompt = build_diversification_prompt(seed);
    std::string reply = gateway.chat(request);

    auto prompts = parse_new_prompts(reply);
    result.parsed = static_cast<int>(std::min<std::size_t>(prompts.size(),
                                                           static_cast<std::size_t>(variant_count)));
    for (int i = 0; i < result.parsed; ++i) {
        InstructionRecord variant;
        variant.id = ids.next();
        variant.text = prompts[static_cast<std::size_t>(i)];
        variant.root_domain = seed.root_domain;
        variant.source = Source::DiversifiedVariant;
        variant.round_created = 0;
        variant.status = RecordStatus::Pending;
        result.variants.push_back(std::move(variant));
    }
    return result;
}

}  // namespace evoforge
