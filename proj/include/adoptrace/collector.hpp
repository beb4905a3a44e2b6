#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace adoptrace {

struct FetchOptions {
    std::chrono::milliseconds timeout{10'000};
    std::size_t max_parallel = 8;
    std::string user_agent = "adoptrace/1.0";
    int max_redirects = 5;
    /// Pause before each redirect hop to the same host.
    std::chrono::milliseconds politeness_delay{0};
};

struct FetchResult {
    std::string domain;
    int status = 0;     // HTTP status of the final response; 0 on transport failure
    std::string error;  // transport-error tag, empty on success
    std::vector<std::pair<std::string, std::string>> headers;
    std::string fetched_at;  // UTC, ISO-8601

    [[nodiscard]] bool ok() const noexcept { return error.empty(); }
    /// `Name: value` lines joined with LF.
    [[nodiscard]] std::string header_blob() const;
};

/// One plain-HTTP GET of `http://<domain>/`, following same-scheme
/// redirects. Transport failures are reported in the result, never thrown.
FetchResult fetch_domain(const std::string& domain, const FetchOptions& options);

/// Fetches every distinct domain with at most `max_parallel` requests in
/// flight. Results are sorted by domain.
std::vector<FetchResult> collect(std::vector<std::string> domains, const FetchOptions& options);

/// Snapshot CSV readable with layout `url=url,raw=headers`:
/// `url,domain,status,headers,fetched_at`.
void write_snapshot_csv(std::ostream& out, const std::vector<FetchResult>& results);

/// Collects and writes the snapshot. Throws IoError if `out_path` cannot be
/// written (checked before any request is made).
std::vector<FetchResult> collect_to_file(std::vector<std::string> domains, const FetchOptions& options,
                                         const std::filesystem::path& out_path);

/// One domain per line; blank lines and `#` comments ignored.
std::vector<std::string> read_domain_list(const std::filesystem::path& path);

}  // namespace adoptrace
