#pragma once

#include "adoptrace/ingest.hpp"
#include "adoptrace/metrics.hpp"
#include "adoptrace/sequences.hpp"
#include "adoptrace/version.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace adoptrace {

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::uint64_t count = 0;

    friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

/// Equal-width bins over [0, 1]; 1.0 lands in the last bin and values
/// outside the range are clamped to the end bins. Throws
/// ContractViolation when `bins` is zero.
std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t bins);

struct SnapshotRecord {
    std::size_t index = 0;
    std::string label;
    bool skipped = false;
    std::string note;  // why it was skipped
    IngestStats stats;

    friend bool operator==(const SnapshotRecord&, const SnapshotRecord&) = default;
};

struct RunMetadata {
    std::string pattern;
    bool ignore_case = false;
    std::string manifest_sha256;
    std::size_t bins = 20;
    std::vector<SnapshotRecord> snapshots;
    std::size_t skipped_snapshots = 0;

    friend bool operator==(const RunMetadata&, const RunMetadata&) = default;
};

struct MetricHistograms {
    std::vector<HistogramBin> delta;
    std::vector<HistogramBin> phi;
    std::vector<HistogramBin> gamma;

    friend bool operator==(const MetricHistograms&, const MetricHistograms&) = default;
};

struct AnalysisReport {
    RunMetadata metadata;
    CorpusSummary summary;
    UniformityReport uniformity;
    FrequencyReport frequencies;
    std::vector<VersionCount> top_versions;
    MetricHistograms histograms;

    friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

struct AnalysisOptions {
    std::string pattern{kDefaultPattern};
    bool ignore_case = false;
    std::size_t bins = 20;
    std::size_t threads = 1;
    std::size_t top_n = 10;
    std::size_t block_bytes = std::size_t{32} << 20;
};

/// Everything a run produced; `report` is what gets serialized.
struct Analysis {
    AnalysisReport report;
    std::vector<VersionSequence> sequences;
    std::vector<DomainMetrics> metrics;  // same order as `sequences`
};

/// Manifest -> ingest -> pool -> estimate -> metrics -> report.
///
/// Throws PreconditionError for fewer than two (non-empty) snapshots,
/// ConfigError for bad manifest/pattern, IoError for unreadable files and
/// Error when no domain appears in two snapshots. Empty snapshots are
/// skipped and recorded in the metadata.
Analysis run_analysis(const std::filesystem::path& manifest, const AnalysisOptions& options);

/// Hex SHA-256 of a file's bytes.
std::string file_sha256(const std::filesystem::path& path);

std::string report_to_json(const AnalysisReport& report);
/// Throws ConfigError if the document does not describe a report.
AnalysisReport report_from_json(const std::string& text);

/// Aligned human-readable summary.
std::string report_to_text(const AnalysisReport& report);

/// Summary block for a bare sequence corpus (used by `summarize`).
std::string corpus_to_text(const CorpusSummary& summary, const UniformityReport& uniformity);

}  // namespace adoptrace
