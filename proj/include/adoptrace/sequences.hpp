#pragma once

#include "adoptrace/ingest.hpp"
#include "adoptrace/version.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace adoptrace {

/// One domain's versions in snapshot order. Retained sequences have at
/// least two elements and strictly increasing snapshot indices.
struct VersionSequence {
    std::string domain;
    std::vector<Version> versions;
    std::vector<std::size_t> snapshot_indices;

    [[nodiscard]] std::size_t length() const noexcept { return versions.size(); }
    /// Number of distinct versions.
    [[nodiscard]] std::size_t state_count() const;

    friend bool operator==(const VersionSequence&, const VersionSequence&) = default;
};

struct CorpusSummary {
    std::size_t domain_count = 0;
    double length_mean = 0.0;
    double length_std = 0.0;
    double states_mean = 0.0;
    double states_std = 0.0;

    friend bool operator==(const CorpusSummary&, const CorpusSummary&) = default;
};

/// Groups observations by domain, orders each group by snapshot index and
/// keeps domains seen in at least two snapshots. Missing snapshots leave no
/// placeholder. Output is sorted by domain.
///
/// Throws ContractViolation if two observations share (snapshot, domain).
std::vector<VersionSequence> pool(std::vector<Observation> observations);

/// Population mean/std of sequence length and state-space size.
/// Throws ContractViolation for an empty corpus.
CorpusSummary summarize(const std::vector<VersionSequence>& sequences);

/// `domain,snapshot_index,version`, sorted by (domain, snapshot_index).
void write_sequences_csv(std::ostream& out, const std::vector<VersionSequence>& sequences);

}  // namespace adoptrace
