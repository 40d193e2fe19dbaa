#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "evoforge/evolver.hpp"
#include "evoforge/pool.hpp"

namespace evoforge {

struct DiversityStats {
    double variance = 0.0;       // U: variance of nearest-neighbor distances
    double mean_distance = 0.0;  // mu
};

// Exact nearest-neighbor distance variance over embeddings (lower U means a
// more uniform pool). Needs >= 2 equal-dimension vectors.
DiversityStats diversity_variance(const std::vector<std::vector<double>>& embeddings);

struct UncertaintyRow {
    std::string group;  // source kind
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0;  // population
    std::size_t n = 0;
};

// Per-source-kind uncertainty summary over scored viable records, rows
// ordered by group name; empty groups omitted.
std::vector<UncertaintyRow> uncertainty_summary(const SeedPool& pool);

struct DomainRow {
    std::string domain;
    std::size_t count = 0;
};

// Viable counts per domain. A fused record contributes one count to each
// parent's root domain (its sampling domain stays the first parent's).
std::vector<DomainRow> domain_distribution(const SeedPool& pool);

struct RoundRow {
    int round = 0;
    std::string source;
    std::size_t count = 0;
};

// Viable counts per (round_created, source).
std::vector<RoundRow> round_distribution(const SeedPool& pool);

// Total viable / total attempted across the run log. Throws on empty input.
double success_rate(const std::vector<RoundReport>& reports);

// Top-2 principal-component coordinates, for external plotting.
std::vector<std::array<double, 2>> pca_2d(const std::vector<std::vector<double>>& embeddings);

// Tables in the export schema: "domain,count", "round,source,count",
// "group,mean,median,stddev,n".
std::string to_csv(const std::vector<DomainRow>& rows);
std::string to_csv(const std::vector<RoundRow>& rows);
std::string to_csv(const std::vector<UncertaintyRow>& rows);
std::string to_json(const std::vector<DomainRow>& rows);
std::string to_json(const std::vector<RoundRow>& rows);
std::string to_json(const std::vector<UncertaintyRow>& rows);

}  // namespace evoforge
