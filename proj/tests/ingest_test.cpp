#include "adoptrace/csv.hpp"
#include "adoptrace/error.hpp"
#include "adoptrace/ingest.hpp"
#include "adoptrace/simd/scan.hpp"
#include "adoptrace/url.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace adoptrace;
using adoptrace::test::TempDir;

namespace {

SnapshotDescriptor header_layout(const std::filesystem::path& p, std::size_t index = 0) {
    return SnapshotDescriptor{index, "s" + std::to_string(index), p, Layout{"url", "xpb", false}};
}

// Sequential first-hit ingestion over fully materialized rows.
SnapshotResult naive_ingest(const std::filesystem::path& p, std::size_t index, const VersionPattern& pattern) {
    auto rows = csv::read_all(p.string());
    SnapshotResult out;
    const auto& header = rows.front();
    const auto url_col = std::find(header.begin(), header.end(), "url") - header.begin();
    const auto text_col = std::find(header.begin(), header.end(), "xpb") - header.begin();
    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        ++out.stats.rows_read;
        const auto& row = rows[r];
        if (row.size() != header.size()) {
            ++out.stats.rows_malformed;
            continue;
        }
        auto d = extract_domain(row[url_col]);
        if (!d) {
            ++out.stats.rows_malformed;
            continue;
        }
        if (seen.contains(*d)) {
            ++out.stats.duplicates_skipped;
            continue;
        }
        auto ver = pattern.extract(row[text_col]);
        if (!ver) {
            ++out.stats.rows_unmatched;
            continue;
        }
        seen.insert(*d);
        out.observations.push_back({index, *d, *ver});
    }
    out.stats.domains_matched = out.observations.size();
    return out;
}

std::string random_snapshot(std::mt19937_64& rng, int rows) {
    std::ostringstream s;
    s << "url,xpb,server\n";
    for (int i = 0; i < rows; ++i) {
        const auto pick = rng() % 100;
        const std::string host = (rng() % 2 ? "WWW.D" : "d") + std::to_string(rng() % 120) + ".example";
        std::string text;
        if (pick < 60) {
            text = "PHP/" + std::to_string(5 + rng() % 3) + "." + std::to_string(rng() % 7) + "." + std::to_string(rng() % 40);
        } else if (pick < 75) {
            text = "ASP.NET";
        } else if (pick < 80) {
            text = "PHP/3.100";
        }
        if (pick >= 97) {
            s << "http://" << host << "/only-two-columns," << text << "\n";
        } else if (pick >= 95) {
            csv::write_row(s, {"garbage url", text, "nginx"});
        } else {
            csv::write_row(s, {"http://" + host + "/p" + std::to_string(i), "x\n" + text, "Apache, \"2.4\""});
        }
    }
    return s.str();
}

}  // namespace

TEST(LayoutSpec, Parses) {
    EXPECT_EQ(parse_layout_spec("url=u,header=h"), (Layout{"u", "h", false}));
    EXPECT_EQ(parse_layout_spec("raw=headers"), (Layout{"url", "headers", true}));
    EXPECT_THROW(parse_layout_spec("url=u"), ConfigError);
    EXPECT_THROW(parse_layout_spec("url=u,header=a,raw=b"), ConfigError);
    EXPECT_THROW(parse_layout_spec("url=u,bogus=x"), ConfigError);
    EXPECT_THROW(parse_layout_spec("url=,header=h"), ConfigError);
}

TEST(Ingest, FirstMatchingRowWinsAndLaterRowsAreDuplicates) {
    TempDir dir;
    const auto p = dir.write("s.csv",
                             "url,xpb\n"
                             "http://d.example/a,PHP/5.6.20\n"
                             "http://d.example/b,PHP/7.0.1\n");
    const auto r = ingest_snapshot(header_layout(p, 3), VersionPattern());
    ASSERT_EQ(r.observations.size(), 1u);
    EXPECT_EQ(r.observations[0], (Observation{3, "d.example", Version(5, 6, 20)}));
    EXPECT_EQ(r.stats.duplicates_skipped, 1u);
    EXPECT_EQ(r.stats.domains_matched, 1u);
    EXPECT_EQ(r.stats.rows_read, 2u);
}

TEST(Ingest, HeaderOnlyFileIsEmptySnapshot) {
    TempDir dir;
    EXPECT_THROW(ingest_snapshot(header_layout(dir.write("h.csv", "url,xpb\n")), VersionPattern()), EmptySnapshot);
    EXPECT_THROW(ingest_snapshot(header_layout(dir.write("e.csv", "")), VersionPattern()), EmptySnapshot);
}

TEST(Ingest, MissingFileIsIoError) {
    TempDir dir;
    EXPECT_THROW(ingest_snapshot(header_layout(dir.file("absent.csv")), VersionPattern()), IoError);
}

TEST(Ingest, MissingColumnIsConfigError) {
    TempDir dir;
    const auto p = dir.write("s.csv", "address,xpb\nhttp://a.example/,PHP/5.6.1\n");
    EXPECT_THROW(ingest_snapshot(header_layout(p), VersionPattern()), ConfigError);
}

TEST(Ingest, NonMatchingAndMalformedRows) {
    TempDir dir;
    const auto p = dir.write("s.csv",
                             "url,xpb\n"
                             "http://a.example/,Server: nginx\n"
                             "http://b.example/,PHP/5.6.1,extra\n"
                             "not a url,PHP/5.6.1\n"
                             "\n"
                             "http://a.example/x,PHP/5.4.45\n"
                             "http://c.example/,\"X-Powered-By: PHP/7.1.1\r\nServer: Apache\"\r\n");
    const auto r = ingest_snapshot(header_layout(p), VersionPattern());
    ASSERT_EQ(r.observations.size(), 2u);
    EXPECT_EQ(r.observations[0], (Observation{0, "a.example", Version(5, 4, 45)}));
    EXPECT_EQ(r.observations[1], (Observation{0, "c.example", Version(7, 1, 1)}));
    EXPECT_EQ(r.stats.rows_read, 5u);
    EXPECT_EQ(r.stats.rows_malformed, 2u);
    EXPECT_EQ(r.stats.rows_unmatched, 1u);
    EXPECT_EQ(r.stats.duplicates_skipped, 0u);
}

TEST(Ingest, DomainsCaseFoldedAndSchemeIgnored) {
    TempDir dir;
    const auto p = dir.write("s.csv",
                             "url,xpb\n"
                             "http://Shop.Example/,PHP/5.6.1\n"
                             "https://shop.example/,PHP/7.0.0\n");
    const auto r = ingest_snapshot(header_layout(p), VersionPattern());
    ASSERT_EQ(r.observations.size(), 1u);
    EXPECT_EQ(r.observations[0].domain, "shop.example");
    EXPECT_EQ(r.stats.duplicates_skipped, 1u);
}

TEST(Ingest, InvalidUtf8InUrlIsReplaced) {
    TempDir dir;
    const auto p = dir.write("s.csv", "url,xpb\nhttp://caf\xe9.example/,PHP/5.6.1\n");
    const auto r = ingest_snapshot(header_layout(p), VersionPattern());
    ASSERT_EQ(r.observations.size(), 1u);
    EXPECT_EQ(r.observations[0].domain, "caf\xEF\xBF\xBD.example");
}

// Output and stats must equal a sequential reference regardless of
// threading, block size or scan kernel.
TEST(Ingest, MatchesSequentialReferenceForAnyParallelism) {
    TempDir dir;
    std::mt19937_64 rng(2024);
    const VersionPattern pattern;
    const simd::Isa before = simd::active().isa;
    for (int round = 0; round < 4; ++round) {
        const auto p = dir.write("r" + std::to_string(round) + ".csv", random_snapshot(rng, 1500));
        const auto expected = naive_ingest(p, 1, pattern);
        const auto& s = expected.stats;
        ASSERT_EQ(s.rows_read, s.domains_matched + s.duplicates_skipped + s.rows_unmatched + s.rows_malformed);
        for (simd::Isa isa : simd::supported_isas()) {
            simd::set_active_isa(isa);
            for (std::size_t threads : {1u, 2u, 3u, 8u}) {
                for (std::size_t block : {97u, 4096u, 1u << 20}) {
                    const auto got = ingest_snapshot(header_layout(p, 1), pattern, IngestOptions{threads, block});
                    ASSERT_EQ(got.stats, expected.stats) << "threads " << threads << " block " << block;
                    ASSERT_EQ(got.observations, expected.observations);
                }
            }
        }
    }
    simd::set_active_isa(before);
}

TEST(Ingest, NoTwoObservationsShareADomain) {
    TempDir dir;
    std::mt19937_64 rng(8);
    const auto p = dir.write("r.csv", random_snapshot(rng, 800));
    const auto r = ingest_snapshot(header_layout(p), VersionPattern(), IngestOptions{4, 512});
    std::set<std::string> domains;
    for (const auto& o : r.observations) EXPECT_TRUE(domains.insert(o.domain).second);
}

TEST(Manifest, LoadsAndResolvesRelativePaths) {
    TempDir dir;
    const auto m = dir.write("m.json", R"([
      {"label": "2016-01-01", "path": "a.csv", "layout": {"url_column": "u", "raw_headers_column": "h"}},
      {"label": "2016-02-01", "path": "/abs/b.csv", "layout": {"url_column": "url", "header_column": "xpb"}}
    ])");
    const auto snaps = load_manifest(m);
    ASSERT_EQ(snaps.size(), 2u);
    EXPECT_EQ(snaps[0].index, 0u);
    EXPECT_EQ(snaps[0].path, dir.path() / "a.csv");
    EXPECT_EQ(snaps[0].layout, (Layout{"u", "h", true}));
    EXPECT_EQ(snaps[1].index, 1u);
    EXPECT_EQ(snaps[1].path, "/abs/b.csv");
    EXPECT_EQ(snaps[1].layout, (Layout{"url", "xpb", false}));
}

TEST(Manifest, RejectsBadDocuments) {
    TempDir dir;
    EXPECT_THROW(load_manifest(dir.write("a.json", "{}")), ConfigError);
    EXPECT_THROW(load_manifest(dir.write("b.json", "[{\"label\":\"x\"}]")), ConfigError);
    EXPECT_THROW(load_manifest(dir.write("c.json", R"([{"label":"x","path":"p","layout":{"url_column":"u"}}])")),
                 ConfigError);
    EXPECT_THROW(load_manifest(dir.write("d.json", "[not json")), ConfigError);
    EXPECT_THROW(load_manifest(dir.file("missing.json")), IoError);
}

TEST(ObservationsCsv, WriteThenRead) {
    TempDir dir;
    std::vector<Observation> obs{{0, "a.example", Version(5, 6, 20)}, {2, "b,c.example", Version(7, 0, 1)}};
    std::ostringstream out;
    write_observations_csv(out, obs);
    EXPECT_EQ(out.str(), "snapshot_index,domain,version\n0,a.example,5.6.20\n2,\"b,c.example\",7.0.1\n");
    EXPECT_EQ(read_observations_csv(dir.write("o.csv", out.str())), obs);
    EXPECT_THROW(read_observations_csv(dir.write("bad.csv", "snapshot_index,domain,version\nx,a,5.6.1\n")),
                 ConfigError);
}
