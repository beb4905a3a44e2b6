#pragma once

#include "adoptrace/dtmc.hpp"
#include "adoptrace/ingest.hpp"
#include "adoptrace/sequences.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace adoptrace {

struct DomainMetrics {
    std::string domain;
    std::size_t r = 0;
    std::size_t state_count = 0;
    double delta = 0.0;  // prevalence
    std::size_t downgrades = 0;
    double phi = 0.0;  // downgrade rate
    std::size_t communicating_pairs = 0;
    double gamma = 0.0;  // communicating-pair rate

    friend bool operator==(const DomainMetrics&, const DomainMetrics&) = default;
};

/// Mean of (1 - p_ii) over the state space. 0 for a domain that never changed.
double prevalence(const TransitionModel& model);

struct DowngradeRate {
    std::size_t downgrades = 0;
    double phi = 0.0;
};

/// Downgrading adjacent pairs and their share of the r - 1 steps.
/// Throws ContractViolation when fewer than two versions are given.
DowngradeRate downgrade_rate(std::span<const Version> versions);
DowngradeRate downgrade_rate(const VersionSequence& seq);

struct CommunicatingRate {
    std::size_t pairs = 0;
    double gamma = 0.0;
};

/// Unordered pairs of distinct states with transitions both ways, scaled by
/// r - 1. Self-loops never count as a pair.
CommunicatingRate communicating_rate(const TransitionModel& model, std::size_t r);

DomainMetrics domain_metrics(const VersionSequence& seq);

/// Per-domain metrics in input order; the result does not depend on `threads`.
std::vector<DomainMetrics> compute_metrics(const std::vector<VersionSequence>& sequences, std::size_t threads = 1);

struct UniformitySubset {
    std::size_t domains = 0;
    std::size_t unique_sequences = 0;
    double share_percent = 0.0;  // unique_sequences / m * 100

    friend bool operator==(const UniformitySubset&, const UniformitySubset&) = default;
};

struct UniformityReport {
    std::size_t m = 0;
    UniformitySubset single_state;  // |S| = 1
    UniformitySubset multi_state;   // |S| > 1

    friend bool operator==(const UniformityReport&, const UniformityReport&) = default;
};

/// Distinct version lists (run lengths included) per state-space subset.
/// Throws ContractViolation for an empty corpus.
UniformityReport uniformity(const std::vector<VersionSequence>& sequences);

struct VersionCount {
    Version version;
    std::uint64_t count = 0;

    friend bool operator==(const VersionCount&, const VersionCount&) = default;
};

struct BranchShare {
    std::uint32_t major = 0;
    std::uint64_t domains = 0;
    double share_percent = 0.0;

    friend bool operator==(const BranchShare&, const BranchShare&) = default;
};

struct FrequencyReport {
    std::uint64_t total_observations = 0;
    std::vector<VersionCount> versions;      // ascending version order
    std::vector<BranchShare> final_major;    // ascending major; share of domains by last version

    friend bool operator==(const FrequencyReport&, const FrequencyReport&) = default;
};

FrequencyReport frequencies(const std::vector<Observation>& observations,
                            const std::vector<VersionSequence>& sequences);

/// The `n` most frequent versions, ties broken by ascending version.
std::vector<VersionCount> top_versions(const FrequencyReport& report, std::size_t n);

/// `domain,r,state_count,delta,d,phi,gamma`, reals with 6 decimals.
void write_metrics_csv(std::ostream& out, const std::vector<DomainMetrics>& metrics);

}  // namespace adoptrace
