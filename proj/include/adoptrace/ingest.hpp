#pragma once

#include "adoptrace/version.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace adoptrace {

/// Which CSV columns carry the URL and the text scanned for versions.
struct Layout {
    std::string url_column = "url";
    std::string header_column;
    /// True when `header_column` holds a whole raw header blob rather than
    /// one extracted header value. Both are scanned the same way.
    bool raw_headers = false;

    friend bool operator==(const Layout&, const Layout&) = default;
};

/// Parses `url=<col>,header=<col>` or `url=<col>,raw=<col>`.
Layout parse_layout_spec(std::string_view spec);

struct SnapshotDescriptor {
    std::size_t index = 0;
    std::string label;
    std::filesystem::path path;
    Layout layout;
};

/// Reads a JSON manifest: an array of
/// `{label, path, layout: {url_column, header_column | raw_headers_column}}`
/// in chronological order. Relative paths resolve against the manifest's
/// directory. Throws ConfigError or IoError.
std::vector<SnapshotDescriptor> load_manifest(const std::filesystem::path& manifest);

struct Observation {
    std::size_t snapshot_index = 0;
    std::string domain;
    Version version;

    friend bool operator==(const Observation&, const Observation&) = default;
};

struct IngestStats {
    std::uint64_t rows_read = 0;
    std::uint64_t rows_malformed = 0;
    std::uint64_t domains_matched = 0;
    std::uint64_t duplicates_skipped = 0;
    std::uint64_t rows_unmatched = 0;

    friend bool operator==(const IngestStats&, const IngestStats&) = default;
};

struct IngestOptions {
    std::size_t threads = 1;
    std::size_t block_bytes = std::size_t{32} << 20;
};

struct SnapshotResult {
    std::vector<Observation> observations;  // in file order of each domain's first matching row
    IngestStats stats;
};

/// One Observation per domain whose URL parses and whose header text
/// matches, taken from the first such row in file order. Rows for a domain
/// that already matched are counted as duplicates without being scanned.
///
/// Throws IoError for a missing file, EmptySnapshot when there are no data
/// rows and ConfigError when the layout names a column the header lacks.
SnapshotResult ingest_snapshot(const SnapshotDescriptor& desc, const VersionPattern& pattern,
                               const IngestOptions& options = {});

/// `snapshot_index,domain,version` with a header row.
void write_observations_csv(std::ostream& out, const std::vector<Observation>& observations);
std::vector<Observation> read_observations_csv(const std::filesystem::path& path);

}  // namespace adoptrace
