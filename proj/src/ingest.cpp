#include "adoptrace/ingest.hpp"

#include "adoptrace/csv.hpp"
#include "adoptrace/error.hpp"
#include "adoptrace/parallel.hpp"
#include "adoptrace/url.hpp"
#include "adoptrace/utf8.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <span>
#include <unordered_map>

namespace adoptrace {

namespace fs = std::filesystem;

Layout parse_layout_spec(std::string_view spec) {
    Layout layout;
    bool have_text = false;
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t comma = std::min(spec.find(',', start), spec.size());
        const auto item = spec.substr(start, comma - start);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size()) {
            throw ConfigError("bad layout item '" + std::string(item) + "' (want key=column)");
        }
        const auto key = item.substr(0, eq);
        std::string value(item.substr(eq + 1));
        if (key == "url") {
            layout.url_column = std::move(value);
        } else if (key == "header" || key == "raw") {
            if (have_text) throw ConfigError("layout names more than one header column");
            layout.header_column = std::move(value);
            layout.raw_headers = key == "raw";
            have_text = true;
        } else {
            throw ConfigError("unknown layout key '" + std::string(key) + "'");
        }
        start = comma + 1;
    }
    if (!have_text) throw ConfigError("layout needs header=<col> or raw=<col>");
    return layout;
}

namespace {

Layout layout_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("layout must be an object");
    Layout layout;
    layout.url_column = j.value("url_column", std::string("url"));
    const bool has_header = j.contains("header_column");
    const bool has_raw = j.contains("raw_headers_column");
    if (has_header == has_raw) {
        throw ConfigError("layout needs exactly one of header_column or raw_headers_column");
    }
    layout.header_column = (has_header ? j["header_column"] : j["raw_headers_column"]).get<std::string>();
    layout.raw_headers = has_raw;
    return layout;
}

}  // namespace

std::vector<SnapshotDescriptor> load_manifest(const fs::path& manifest) {
    std::ifstream in(manifest, std::ios::binary);
    if (!in) throw IoError("cannot open manifest " + manifest.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("manifest " + manifest.string() + " is not valid JSON: " + e.what());
    }
    if (!doc.is_array()) throw ConfigError("manifest must be a JSON array");

    std::vector<SnapshotDescriptor> out;
    const fs::path base = manifest.parent_path();
    try {
        for (const auto& entry : doc) {
            SnapshotDescriptor d;
            d.index = out.size();
            d.label = entry.at("label").get<std::string>();
            fs::path p = entry.at("path").get<std::string>();
            d.path = p.is_absolute() ? p : base / p;
            d.layout = layout_from_json(entry.at("layout"));
            out.push_back(std::move(d));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad manifest entry: " + std::string(e.what()));
    }
    return out;
}

namespace {

// What one contiguous run of rows saw for a single domain.
struct DomainTally {
    std::uint64_t unmatched_before = 0;  // non-matching rows before the local first hit
    std::optional<std::uint64_t> hit_row;
    Version version;
    std::uint64_t after = 0;  // rows following the local first hit
};

struct ChunkTally {
    std::unordered_map<std::string, DomainTally> domains;
    std::uint64_t rows = 0;
    std::uint64_t malformed = 0;
};

struct Columns {
    std::size_t count = 0;
    std::size_t url = 0;
    std::size_t text = 0;
};

Columns resolve_columns(const std::vector<std::string_view>& header, const Layout& layout, const fs::path& path) {
    auto find = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw ConfigError(path.string() + ": no column named '" + name + "'");
    };
    return Columns{header.size(), find(layout.url_column), find(layout.header_column)};
}

void scan_rows(std::span<const csv::RecordView> records, std::uint64_t first_row, const Columns& cols,
               const VersionPattern& pattern, ChunkTally& tally) {
    std::vector<std::string_view> fields;
    std::deque<std::string> storage;
    std::uint64_t row = first_row;
    for (const auto& rec : records) {
        if (csv::is_blank(rec)) continue;
        const std::uint64_t this_row = row++;
        ++tally.rows;
        if (!csv::split_fields(rec, fields, storage) || fields.size() != cols.count) {
            ++tally.malformed;
            continue;
        }
        const std::string_view url = fields[cols.url];
        auto domain = is_valid_utf8(url) ? extract_domain(url) : extract_domain(sanitize_utf8(url));
        if (!domain) {
            ++tally.malformed;
            continue;
        }
        auto& t = tally.domains[std::move(*domain)];
        if (t.hit_row) {
            ++t.after;
            continue;
        }
        auto version = pattern.extract(fields[cols.text]);
        if (!version) {
            ++t.unmatched_before;
            continue;
        }
        if (!is_valid_utf8(version->raw)) version->raw = sanitize_utf8(version->raw);
        t.hit_row = this_row;
        t.version = std::move(*version);
    }
}

}  // namespace

SnapshotResult ingest_snapshot(const SnapshotDescriptor& desc, const VersionPattern& pattern,
                               const IngestOptions& options) {
    if (!fs::exists(desc.path)) throw IoError("snapshot file not found: " + desc.path.string());
    csv::BlockReader reader(desc.path.string(), options.block_bytes);
    const std::size_t threads = resolve_threads(options.threads);

    SnapshotResult result;
    IngestStats& stats = result.stats;
    struct Hit {
        std::uint64_t row;
        Observation obs;
    };
    std::vector<Hit> hits;
    std::unordered_map<std::string, bool> matched;

    std::optional<Columns> cols;
    std::uint64_t next_row = 0;
    std::vector<csv::RecordView> records;
    while (reader.next(records)) {
        std::span<const csv::RecordView> body(records);
        if (!cols) {
            auto it = std::find_if(body.begin(), body.end(), [](const auto& r) { return !csv::is_blank(r); });
            if (it == body.end()) continue;
            std::vector<std::string_view> header;
            std::deque<std::string> storage;
            if (!csv::split_fields(*it, header, storage)) {
                throw ConfigError(desc.path.string() + ": unreadable header row");
            }
            cols = resolve_columns(header, desc.layout, desc.path);
            body = body.subspan(static_cast<std::size_t>(it - body.begin()) + 1);
        }
        if (body.empty()) continue;

        // Chunks are contiguous so that merging them in order preserves file order.
        const std::size_t chunk_count = std::min(threads, body.size());
        std::vector<ChunkTally> tallies(chunk_count);
        std::vector<std::uint64_t> first_rows(chunk_count);
        std::vector<std::pair<std::size_t, std::size_t>> ranges(chunk_count);
        {
            const std::size_t per = (body.size() + chunk_count - 1) / chunk_count;
            std::uint64_t row = next_row;
            for (std::size_t c = 0; c < chunk_count; ++c) {
                const std::size_t lo = std::min(body.size(), c * per);
                const std::size_t hi = std::min(body.size(), lo + per);
                ranges[c] = {lo, hi};
                first_rows[c] = row;
                for (std::size_t r = lo; r < hi; ++r) row += csv::is_blank(body[r]) ? 0 : 1;
            }
            next_row = row;
        }
        parallel_for(chunk_count, threads, [&](std::size_t c) {
            scan_rows(body.subspan(ranges[c].first, ranges[c].second - ranges[c].first), first_rows[c], *cols,
                      pattern, tallies[c]);
        });

        for (auto& tally : tallies) {
            stats.rows_read += tally.rows;
            stats.rows_malformed += tally.malformed;
            for (auto& [domain, t] : tally.domains) {
                const std::uint64_t hit = t.hit_row ? 1 : 0;
                if (matched.contains(domain)) {
                    stats.duplicates_skipped += t.unmatched_before + hit + t.after;
                    continue;
                }
                stats.rows_unmatched += t.unmatched_before;
                if (t.hit_row) {
                    stats.duplicates_skipped += t.after;
                    matched.emplace(domain, true);
                    hits.push_back({*t.hit_row, Observation{desc.index, domain, std::move(t.version)}});
                }
            }
        }
    }

    if (stats.rows_read == 0) {
        throw EmptySnapshot("snapshot '" + desc.label + "' (" + desc.path.string() + ") has no data rows");
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.row < b.row; });
    result.observations.reserve(hits.size());
    for (auto& h : hits) result.observations.push_back(std::move(h.obs));
    stats.domains_matched = result.observations.size();
    return result;
}

void write_observations_csv(std::ostream& out, const std::vector<Observation>& observations) {
    out << "snapshot_index,domain,version\n";
    for (const auto& o : observations) {
        csv::write_row(out, {std::to_string(o.snapshot_index), o.domain, o.version.str()});
    }
}

std::vector<Observation> read_observations_csv(const fs::path& path) {
    if (!fs::exists(path)) throw IoError("file not found: " + path.string());
    auto rows = csv::read_all(path.string());
    if (rows.empty()) throw ConfigError(path.string() + ": missing header row");
    const auto& header = rows.front();
    auto col = [&](std::string_view name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ConfigError(path.string() + ": no column named '" + std::string(name) + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t ci = col("snapshot_index");
    const std::size_t cd = col("domain");
    const std::size_t cv = col("version");

    std::vector<Observation> out;
    out.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size()) throw ConfigError(path.string() + ": wrong column count on row " + std::to_string(r));
        Observation o;
        const auto& idx = row[ci];
        auto [p, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), o.snapshot_index);
        if (ec != std::errc{} || p != idx.data() + idx.size()) {
            throw ConfigError(path.string() + ": bad snapshot_index '" + idx + "'");
        }
        o.domain = row[cd];
        auto v = parse_version(row[cv]);
        if (!v) throw ConfigError(path.string() + ": bad version '" + row[cv] + "'");
        o.version = std::move(*v);
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace adoptrace
