#include "evoforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "evoforge/errors.hpp"

namespace evoforge {
namespace {

using ordered_json = nlohmann::ordered_json;

void check_embeddings(const std::vector<std::vector<double>>& embeddings, std::size_t minimum) {
    if (embeddings.size() < minimum) {
        throw ValidationError("need at least " + std::to_string(minimum) + " embeddings");
    }
    for (const auto& e : embeddings) {
        if (e.size() != embeddings.front().size() || e.empty()) {
            throw ValidationError("embeddings must share one non-zero dimension");
        }
    }
}

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(12);
    out << v;
    return out.str();
}

}  // namespace

DiversityStats diversity_variance(const std::vector<std::vector<double>>& embeddings) {
    check_embeddings(embeddings, 2);
    const std::size_t n = embeddings.size();

    std::vector<double> nearest(n, std::numeric_limits<double>::max());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d_sq = 0.0;
            for (std::size_t k = 0; k < embeddings[i].size(); ++k) {
                double diff = embeddings[i][k] - embeddings[j][k];
                d_sq += diff * diff;
            }
            nearest[i] = std::min(nearest[i], d_sq);
            nearest[j] = std::min(nearest[j], d_sq);
        }
    }

    double mu = 0.0;
    for (double& d : nearest) {
        d = std::sqrt(d);
        mu += d;
    }
    mu /= static_cast<double>(n);

    double variance = 0.0;
    for (double d : nearest) variance += (d - mu) * (d - mu);
    variance /= static_cast<double>(n);
    return {variance, mu};
}

std::vector<UncertaintyRow> uncertainty_summary(const SeedPool& pool) {
    std::map<std::string, std::vector<double>> groups;
    for (const auto& rec : pool.records()) {
        if (!rec.viable() || !rec.uncertainty) continue;
        groups[std::string(to_string(rec.source))].push_back(*rec.uncertainty);
    }

    std::vector<UncertaintyRow> rows;
    for (auto& [group, values] : groups) {
        std::sort(values.begin(), values.end());
        UncertaintyRow row;
        row.group = group;
        row.n = values.size();
        double sum = 0.0;
        for (double v : values) sum += v;
        row.mean = sum / static_cast<double>(values.size());
        std::size_t mid = values.size() / 2;
        row.median = values.size() % 2 == 1 ? values[mid]
                                            : 0.5 * (values[mid - 1] + values[mid]);
        double ss = 0.0;
        for (double v : values) ss += (v - row.mean) * (v - row.mean);
        row.stddev = std::sqrt(ss / static_cast<double>(values.size()));
        rows.push_back(row);
    }
    return rows;  // std::map iteration is already ordered by group name
}

std::vector<DomainRow> domain_distribution(const SeedPool& pool) {
    std::map<std::string, std::size_t> counts;
    for (const auto& rec : pool.records()) {
        if (!rec.viable()) continue;
        if (rec.source == Source::Fused) {
            for (const auto& parent_id : rec.parents) {
                counts[std::string(to_string(pool.at(parent_id).root_domain))] += 1;
            }
        } else {
            counts[std::string(to_string(rec.root_domain))] += 1;
        }
    }
    std::vector<DomainRow> rows;
    for (const auto& [domain, count] : counts) rows.push_back({domain, count});
    return rows;
}

std::vector<RoundRow> round_distribution(const SeedPool& pool) {
    std::map<std::pair<int, std::string>, std::size_t> counts;
    for (const auto& rec : pool.records()) {
        if (!rec.viable()) continue;
        counts[{rec.round_created, std::string(to_string(rec.source))}] += 1;
    }
    std::vector<RoundRow> rows;
    for (const auto& [key, count] : counts) rows.push_back({key.first, key.second, count});
    return rows;
}

double success_rate(const std::vector<RoundReport>& reports) {
    if (reports.empty()) throw ValidationError("run log holds no round reports");
    long long attempted = 0;
    long long viable = 0;
    for (const auto& r : reports) {
        attempted += r.attempted;
        viable += r.viable;
    }
    if (attempted == 0) throw ValidationError("run log reports zero attempts");
    return static_cast<double>(viable) / static_cast<double>(attempted);
}

std::vector<std::array<double, 2>> pca_2d(const std::vector<std::vector<double>>& embeddings) {
    check_embeddings(embeddings, 2);
    const auto n = static_cast<Eigen::Index>(embeddings.size());
    const auto dim = static_cast<Eigen::Index>(embeddings.front().size());

    Eigen::MatrixXd data(n, dim);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            data(i, j) = embeddings[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    Eigen::RowVectorXd mean = data.colwise().mean();
    data.rowwise() -= mean;

    Eigen::MatrixXd cov = (data.adjoint() * data) / std::max<double>(1.0, double(n - 1));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    // Eigenvalues ascend; take the top two components.
    Eigen::MatrixXd basis(dim, 2);
    basis.col(0) = solver.eigenvectors().col(dim - 1);
    basis.col(1) = dim >= 2 ? solver.eigenvectors().col(dim - 2) : solver.eigenvectors().col(0);

    Eigen::MatrixXd projected = data * basis;
    std::vector<std::array<double, 2>> out(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = {projected(i, 0), projected(i, 1)};
    }
    return out;
}

std::string to_csv(const std::vector<DomainRow>& rows) {
    std::string out = "domain,count\n";
    for (const auto& r : rows) out += r.domain + "," + std::to_string(r.count) + "\n";
    return out;
}

std::string to_csv(const std::vector<RoundRow>& rows) {
    std::string out = "round,source,count\n";
    for (const auto& r : rows) {
        out += std::to_string(r.round) + "," + r.source + "," + std::to_string(r.count) + "\n";
    }
    return out;
}

std::string to_csv(const std::vector<UncertaintyRow>& rows) {
    std::string out = "group,mean,median,stddev,n\n";
    for (const auto& r : rows) {
        out += r.group + "," + format_double(r.mean) + "," + format_double(r.median) + "," +
               format_double(r.stddev) + "," + std::to_string(r.n) + "\n";
    }
    return out;
}

std::string to_json(const std::vector<DomainRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) arr.push_back({{"domain", r.domain}, {"count", r.count}});
    return arr.dump(2);
}

std::string to_json(const std::vector<RoundRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
        arr.push_back({{"round", r.round}, {"source", r.source}, {"count", r.count}});
    }
    return arr.dump(2);
}

std::string to_json(const std::vector<UncertaintyRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
        arr.push_back({{"group", r.group},
                       {"mean", r.mean},
                       {"median", r.median},
                       {"stddev", r.stddev},
                       {"n", r.n}});
    }
    return arr.dump(2);
}

}  // namespace evoforge
