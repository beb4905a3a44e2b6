#include "adoptrace/report.hpp"

#include "adoptrace/error.hpp"
#include "adoptrace/parallel.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <memory>

namespace adoptrace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<HistogramBin> histogram(std::span<const double> values, std::size_t bins) {
    if (bins == 0) throw ContractViolation("histogram needs at least one bin");
    const auto width = static_cast<double>(bins);
    std::vector<HistogramBin> out(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        out[i].lower = static_cast<double>(i) / width;
        out[i].upper = static_cast<double>(i + 1) / width;
    }
    for (double v : values) {
        std::size_t idx = 0;
        if (v > 0.0) {
            const double scaled = std::floor(v * width);
            idx = scaled >= width ? bins - 1 : static_cast<std::size_t>(scaled);
            // v * bins can round across an edge; settle against the stored edges.
            if (idx + 1 < bins && v >= out[idx + 1].lower) ++idx;
            if (idx > 0 && v < out[idx].lower) --idx;
        }
        ++out[idx].count;
    }
    return out;
}

std::string file_sha256(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 init failed");
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

Analysis run_analysis(const fs::path& manifest, const AnalysisOptions& options) {
    if (options.bins == 0) throw PreconditionError("--bins must be at least 1");
    const auto snapshots = load_manifest(manifest);
    if (snapshots.size() < 2) {
        throw PreconditionError("manifest lists " + std::to_string(snapshots.size()) +
                                " snapshot(s); at least two are needed to observe a state change");
    }
    const VersionPattern pattern(options.pattern, options.ignore_case);

    Analysis analysis;
    AnalysisReport& report = analysis.report;
    RunMetadata& meta = report.metadata;
    meta.pattern = options.pattern;
    meta.ignore_case = options.ignore_case;
    meta.manifest_sha256 = file_sha256(manifest);
    meta.bins = options.bins;

    IngestOptions ingest_options{options.threads, options.block_bytes};
    std::vector<Observation> observations;
    for (const auto& desc : snapshots) {
        SnapshotRecord rec{desc.index, desc.label, false, {}, {}};
        try {
            auto result = ingest_snapshot(desc, pattern, ingest_options);
            rec.stats = result.stats;
            std::move(result.observations.begin(), result.observations.end(), std::back_inserter(observations));
        } catch (const EmptySnapshot&) {
            rec.skipped = true;
            rec.note = "empty snapshot";
            ++meta.skipped_snapshots;
        }
        meta.snapshots.push_back(std::move(rec));
    }
    if (snapshots.size() - meta.skipped_snapshots < 2) {
        throw PreconditionError("fewer than two non-empty snapshots remain after skipping empty ones");
    }

    analysis.sequences = pool(std::move(observations));
    if (analysis.sequences.empty()) throw Error("no domain was observed in at least two snapshots");

    analysis.metrics = compute_metrics(analysis.sequences, resolve_threads(options.threads));
    report.summary = summarize(analysis.sequences);
    report.uniformity = uniformity(analysis.sequences);

    std::vector<Observation> pooled;
    for (const auto& s : analysis.sequences) {
        for (std::size_t k = 0; k < s.length(); ++k) pooled.push_back({s.snapshot_indices[k], s.domain, s.versions[k]});
    }
    report.frequencies = frequencies(pooled, analysis.sequences);
    report.top_versions = top_versions(report.frequencies, options.top_n);

    std::vector<double> delta, phi, gamma;
    for (const auto& m : analysis.metrics) {
        delta.push_back(m.delta);
        phi.push_back(m.phi);
        gamma.push_back(m.gamma);
    }
    report.histograms.delta = histogram(delta, options.bins);
    report.histograms.phi = histogram(phi, options.bins);
    report.histograms.gamma = histogram(gamma, options.bins);
    return analysis;
}

// JSON mapping ---------------------------------------------------------------

namespace {

json bins_json(const std::vector<HistogramBin>& bins) {
    json a = json::array();
    for (const auto& b : bins) a.push_back({{"lower", b.lower}, {"upper", b.upper}, {"count", b.count}});
    return a;
}

std::vector<HistogramBin> bins_from(const json& a) {
    std::vector<HistogramBin> out;
    for (const auto& b : a) out.push_back({b.at("lower").get<double>(), b.at("upper").get<double>(), b.at("count").get<std::uint64_t>()});
    return out;
}

json counts_json(const std::vector<VersionCount>& counts) {
    json a = json::array();
    for (const auto& c : counts) a.push_back({{"version", c.version.str()}, {"count", c.count}});
    return a;
}

std::vector<VersionCount> counts_from(const json& a) {
    std::vector<VersionCount> out;
    for (const auto& c : a) {
        auto v = parse_version(c.at("version").get<std::string>());
        if (!v) throw ConfigError("bad version in report");
        out.push_back({std::move(*v), c.at("count").get<std::uint64_t>()});
    }
    return out;
}

json subset_json(const UniformitySubset& s) {
    return {{"domains", s.domains}, {"unique_sequences", s.unique_sequences}, {"share_percent", s.share_percent}};
}

UniformitySubset subset_from(const json& j) {
    return {j.at("domains").get<std::size_t>(), j.at("unique_sequences").get<std::size_t>(),
            j.at("share_percent").get<double>()};
}

json stats_json(const IngestStats& s) {
    return {{"rows_read", s.rows_read},
            {"rows_malformed", s.rows_malformed},
            {"rows_unmatched", s.rows_unmatched},
            {"domains_matched", s.domains_matched},
            {"duplicates_skipped", s.duplicates_skipped}};
}

IngestStats stats_from(const json& j) {
    IngestStats s;
    s.rows_read = j.at("rows_read").get<std::uint64_t>();
    s.rows_malformed = j.at("rows_malformed").get<std::uint64_t>();
    s.rows_unmatched = j.at("rows_unmatched").get<std::uint64_t>();
    s.domains_matched = j.at("domains_matched").get<std::uint64_t>();
    s.duplicates_skipped = j.at("duplicates_skipped").get<std::uint64_t>();
    return s;
}

}  // namespace

std::string report_to_json(const AnalysisReport& r) {
    json j;
    const auto& m = r.metadata;
    json snaps = json::array();
    for (const auto& s : m.snapshots) {
        json e = {{"index", s.index}, {"label", s.label}, {"skipped", s.skipped}, {"stats", stats_json(s.stats)}};
        if (s.skipped) e["note"] = s.note;
        snaps.push_back(std::move(e));
    }
    j["metadata"] = {{"pattern", m.pattern},
                     {"ignore_case", m.ignore_case},
                     {"manifest_sha256", m.manifest_sha256},
                     {"bins", m.bins},
                     {"skipped_snapshots", m.skipped_snapshots},
                     {"snapshots", std::move(snaps)}};
    j["summary"] = {{"domains", r.summary.domain_count},
                    {"length_mean", r.summary.length_mean},
                    {"length_std", r.summary.length_std},
                    {"states_mean", r.summary.states_mean},
                    {"states_std", r.summary.states_std}};
    j["uniformity"] = {{"m", r.uniformity.m},
                       {"single_state", subset_json(r.uniformity.single_state)},
                       {"multi_state", subset_json(r.uniformity.multi_state)}};
    json finals = json::array();
    for (const auto& b : r.frequencies.final_major) {
        finals.push_back({{"major", b.major}, {"domains", b.domains}, {"share_percent", b.share_percent}});
    }
    j["frequencies"] = {{"total_observations", r.frequencies.total_observations},
                        {"versions", counts_json(r.frequencies.versions)},
                        {"final_major", std::move(finals)}};
    j["top_versions"] = counts_json(r.top_versions);
    j["histograms"] = {{"delta", bins_json(r.histograms.delta)},
                       {"phi", bins_json(r.histograms.phi)},
                       {"gamma", bins_json(r.histograms.gamma)}};
    return j.dump(2) + "\n";
}

AnalysisReport report_from_json(const std::string& text) {
    AnalysisReport r;
    try {
        const json j = json::parse(text);
        const auto& m = j.at("metadata");
        r.metadata.pattern = m.at("pattern").get<std::string>();
        r.metadata.ignore_case = m.at("ignore_case").get<bool>();
        r.metadata.manifest_sha256 = m.at("manifest_sha256").get<std::string>();
        r.metadata.bins = m.at("bins").get<std::size_t>();
        r.metadata.skipped_snapshots = m.at("skipped_snapshots").get<std::size_t>();
        for (const auto& s : m.at("snapshots")) {
            SnapshotRecord rec;
            rec.index = s.at("index").get<std::size_t>();
            rec.label = s.at("label").get<std::string>();
            rec.skipped = s.at("skipped").get<bool>();
            rec.note = s.value("note", std::string{});
            rec.stats = stats_from(s.at("stats"));
            r.metadata.snapshots.push_back(std::move(rec));
        }
        const auto& s = j.at("summary");
        r.summary = {s.at("domains").get<std::size_t>(), s.at("length_mean").get<double>(),
                     s.at("length_std").get<double>(), s.at("states_mean").get<double>(),
                     s.at("states_std").get<double>()};
        const auto& u = j.at("uniformity");
        r.uniformity = {u.at("m").get<std::size_t>(), subset_from(u.at("single_state")),
                        subset_from(u.at("multi_state"))};
        const auto& f = j.at("frequencies");
        r.frequencies.total_observations = f.at("total_observations").get<std::uint64_t>();
        r.frequencies.versions = counts_from(f.at("versions"));
        for (const auto& b : f.at("final_major")) {
            r.frequencies.final_major.push_back({b.at("major").get<std::uint32_t>(), b.at("domains").get<std::uint64_t>(),
                                                 b.at("share_percent").get<double>()});
        }
        r.top_versions = counts_from(j.at("top_versions"));
        const auto& h = j.at("histograms");
        r.histograms = {bins_from(h.at("delta")), bins_from(h.at("phi")), bins_from(h.at("gamma"))};
    } catch (const json::exception& e) {
        throw ConfigError(std::string("not an analysis report: ") + e.what());
    }
    return r;
}

// Text rendering ---------------------------------------------------------------

std::string corpus_to_text(const CorpusSummary& s, const UniformityReport& u) {
    std::string out;
    out += "Corpus\n";
    out += fmt::format("  {:<22}{}\n", "domains (m)", s.domain_count);
    out += fmt::format("  {:<22}mean {:.2f}  std {:.2f}\n", "versions (r)", s.length_mean, s.length_std);
    out += fmt::format("  {:<22}mean {:.2f}  std {:.2f}\n", "state space |S|", s.states_mean, s.states_std);
    out += "\nUniformity\n";
    out += fmt::format("  {:<10}{:>10}{:>10}{:>10}\n", "subset", "domains", "unique", "share%");
    out += fmt::format("  {:<10}{:>10}{:>10}{:>10.2f}\n", "|S|=1", u.single_state.domains,
                       u.single_state.unique_sequences, u.single_state.share_percent);
    out += fmt::format("  {:<10}{:>10}{:>10}{:>10.2f}\n", "|S|>1", u.multi_state.domains,
                       u.multi_state.unique_sequences, u.multi_state.share_percent);
    return out;
}

std::string report_to_text(const AnalysisReport& r) {
    const auto& m = r.metadata;
    std::string out;
    out += "Run\n";
    out += fmt::format("  {:<22}{}\n", "pattern", m.pattern);
    out += fmt::format("  {:<22}{}\n", "manifest sha256", m.manifest_sha256);
    out += fmt::format("  {:<22}{} ({} skipped)\n", "snapshots", m.snapshots.size(), m.skipped_snapshots);
    for (const auto& s : m.snapshots) {
        if (s.skipped) {
            out += fmt::format("    [{}] {:<16} skipped: {}\n", s.index, s.label, s.note);
        } else {
            out += fmt::format("    [{}] {:<16} rows {:>8}  matched {:>8}  dup {:>8}  malformed {:>6}\n", s.index,
                               s.label, s.stats.rows_read, s.stats.domains_matched, s.stats.duplicates_skipped,
                               s.stats.rows_malformed);
        }
    }
    out += "\n" + corpus_to_text(r.summary, r.uniformity);

    out += "\nFinal-state major branch\n";
    for (const auto& b : r.frequencies.final_major) {
        out += fmt::format("  {:<10}{:>10}{:>9.2f}%\n", fmt::format("{}.x", b.major), b.domains, b.share_percent);
    }
    out += fmt::format("\nTop versions ({} observations)\n", r.frequencies.total_observations);
    for (const auto& v : r.top_versions) out += fmt::format("  {:<12}{:>10}\n", v.version.str(), v.count);

    auto hist = [&out](std::string_view name, const std::vector<HistogramBin>& bins) {
        out += fmt::format("\nHistogram {}\n", name);
        for (const auto& b : bins) out += fmt::format("  [{:.2f}, {:.2f}{} {:>8}\n", b.lower, b.upper, b.upper >= 1.0 ? ']' : ')', b.count);
    };
    hist("delta (prevalence)", r.histograms.delta);
    hist("phi (downgrade rate)", r.histograms.phi);
    hist("gamma (communicating pairs)", r.histograms.gamma);
    return out;
}

}  // namespace adoptrace
