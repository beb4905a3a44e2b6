// adoptrace command-line front end.
//
// Exit codes: 0 success, 1 runtime error, 2 usage or precondition error.

#include "adoptrace/collector.hpp"
#include "adoptrace/dtmc.hpp"
#include "adoptrace/error.hpp"
#include "adoptrace/ingest.hpp"
#include "adoptrace/metrics.hpp"
#include "adoptrace/report.hpp"
#include "adoptrace/sequences.hpp"
#include "adoptrace/simd/scan.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace adoptrace;

constexpr int kRuntimeError = 1;
constexpr int kUsageError = 2;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    return out;
}

struct AnalyzeArgs {
    std::string manifest;
    std::string format = "text";
    std::string report_path;
    std::string per_domain_csv;
    std::string sequences_csv;
    std::string models_json;
    std::size_t block_mib = 32;
    AnalysisOptions options;
};

int run_analyze(const AnalyzeArgs& a) {
    auto opts = a.options;
    opts.block_bytes = a.block_mib << 20;
    const auto analysis = run_analysis(a.manifest, opts);
    const auto& report = analysis.report;
    for (const auto& s : report.metadata.snapshots) {
        if (s.skipped) std::cerr << "warning: snapshot '" << s.label << "' skipped (" << s.note << ")\n";
    }
    const std::string json = report_to_json(report);
    if (!a.report_path.empty()) open_out(a.report_path) << json;
    if (!a.per_domain_csv.empty()) {
        auto out = open_out(a.per_domain_csv);
        write_metrics_csv(out, analysis.metrics);
    }
    if (!a.sequences_csv.empty()) {
        auto out = open_out(a.sequences_csv);
        write_sequences_csv(out, analysis.sequences);
    }
    if (!a.models_json.empty()) {
        auto out = open_out(a.models_json);
        out << "[\n";
        for (std::size_t i = 0; i < analysis.sequences.size(); ++i) {
            const auto& s = analysis.sequences[i];
            out << model_json(s.domain, estimate(s)) << (i + 1 < analysis.sequences.size() ? ",\n" : "\n");
        }
        out << "]\n";
    }
    std::cout << (a.format == "json" ? json : report_to_text(report));
    return 0;
}

struct ExtractArgs {
    std::string snapshot;
    std::string layout;
    std::string out;
    std::string pattern{kDefaultPattern};
    bool ignore_case = false;
    std::size_t index = 0;
    std::size_t threads = 1;
};

int run_extract(const ExtractArgs& a) {
    const VersionPattern pattern(a.pattern, a.ignore_case);
    SnapshotDescriptor desc;
    desc.index = a.index;
    desc.label = a.snapshot;
    desc.path = a.snapshot;
    desc.layout = parse_layout_spec(a.layout);
    const auto result = ingest_snapshot(desc, pattern, IngestOptions{a.threads});
    auto out = open_out(a.out);
    write_observations_csv(out, result.observations);
    const auto& s = result.stats;
    std::cerr << "rows " << s.rows_read << ", matched " << s.domains_matched << ", duplicates "
              << s.duplicates_skipped << ", unmatched " << s.rows_unmatched << ", malformed " << s.rows_malformed
              << '\n';
    return 0;
}

int run_summarize(const std::string& path, const std::string& format) {
    const auto sequences = pool(read_observations_csv(path));
    const auto summary = summarize(sequences);
    const auto uni = uniformity(sequences);
    if (format == "json") {
        AnalysisReport r;
        r.summary = summary;
        r.uniformity = uni;
        std::cout << report_to_json(r);
    } else {
        std::cout << corpus_to_text(summary, uni);
    }
    return 0;
}

struct FetchArgs {
    std::string domains;
    std::string out;
    double timeout_s = 10.0;
    std::size_t max_parallel = 8;
    std::string user_agent = "adoptrace/1.0";
    std::size_t delay_ms = 0;
};

int run_fetch(const FetchArgs& a) {
    FetchOptions opts;
    opts.timeout = std::chrono::milliseconds(static_cast<long long>(a.timeout_s * 1000.0));
    opts.max_parallel = a.max_parallel;
    opts.user_agent = a.user_agent;
    opts.politeness_delay = std::chrono::milliseconds(a.delay_ms);
    auto domains = read_domain_list(a.domains);
    if (domains.empty()) throw PreconditionError("domain list " + a.domains + " is empty");
    const auto results = collect_to_file(std::move(domains), opts, a.out);
    std::size_t failed = 0;
    for (const auto& r : results) failed += r.ok() ? 0 : 1;
    std::cerr << "fetched " << results.size() << " domain(s), " << failed << " transport failure(s)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trace software release adoption across web domains"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Optional TOML/INI config file; command-line flags take precedence");
    std::string isa_name = "auto";
    app.add_option("--isa", isa_name, "Scan kernels: auto|scalar|sse2|avx2")
        ->check(CLI::IsMember({"auto", "scalar", "sse2", "avx2"}));

    AnalyzeArgs analyze;
    auto* an = app.add_subcommand("analyze", "Run the full pipeline over a snapshot manifest");
    an->add_option("--manifest", analyze.manifest, "JSON manifest of snapshots")->required();
    an->add_option("--pattern", analyze.options.pattern, "Version expression")->envname("ADOPTRACE_PATTERN");
    an->add_flag("--ignore-case", analyze.options.ignore_case, "Case-insensitive matching");
    an->add_option("--bins", analyze.options.bins, "Histogram bins over [0,1]")->check(CLI::PositiveNumber);
    an->add_option("--format", analyze.format, "stdout format")->check(CLI::IsMember({"json", "text"}));
    an->add_option("--report", analyze.report_path, "Also write the JSON report here");
    an->add_option("--per-domain-csv", analyze.per_domain_csv, "Write per-domain metrics CSV");
    an->add_option("--sequences-csv", analyze.sequences_csv, "Write pooled sequences CSV");
    an->add_option("--models-json", analyze.models_json, "Write per-domain transition models (debug)");
    an->add_option("--threads", analyze.options.threads, "Worker threads (0 = all cores)");
    an->add_option("--top", analyze.options.top_n, "Rows in the top-version table");
    an->add_option("--block-mib", analyze.block_mib, "Ingest block size in MiB")->check(CLI::PositiveNumber);

    ExtractArgs extract;
    auto* ex = app.add_subcommand("extract", "Extract (snapshot_index, domain, version) rows from one snapshot");
    ex->add_option("--snapshot", extract.snapshot, "Snapshot CSV")->required();
    ex->add_option("--layout", extract.layout, "url=<col>,header=<col> or url=<col>,raw=<col>")->required();
    ex->add_option("--out", extract.out, "Output CSV")->required();
    ex->add_option("--pattern", extract.pattern, "Version expression")->envname("ADOPTRACE_PATTERN");
    ex->add_flag("--ignore-case", extract.ignore_case, "Case-insensitive matching");
    ex->add_option("--index", extract.index, "Snapshot index written to every row");
    ex->add_option("--threads", extract.threads, "Worker threads (0 = all cores)");

    std::string seq_path, seq_format = "text";
    auto* su = app.add_subcommand("summarize", "Corpus summary and uniformity for a sequences CSV");
    su->add_option("--sequences", seq_path, "CSV with domain,snapshot_index,version columns")->required();
    su->add_option("--format", seq_format, "stdout format")->check(CLI::IsMember({"json", "text"}));

    FetchArgs fetch;
    auto* fe = app.add_subcommand("fetch", "Request http://<domain>/ for a domain list and record response headers");
    fe->add_option("--domains", fetch.domains, "One domain per line, # comments allowed")->required();
    fe->add_option("--out", fetch.out, "Snapshot CSV to write")->required();
    fe->add_option("--timeout", fetch.timeout_s, "Per-request timeout in seconds")->check(CLI::PositiveNumber);
    fe->add_option("--max-parallel", fetch.max_parallel, "Concurrent requests")->check(CLI::PositiveNumber);
    fe->add_option("--user-agent", fetch.user_agent, "User-Agent header");
    fe->add_option("--delay-ms", fetch.delay_ms, "Pause before redirect hops to the same host");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        if (isa_name != "auto") simd::set_active_isa(*simd::parse_isa(isa_name));
        if (an->parsed()) return run_analyze(analyze);
        if (ex->parsed()) return run_extract(extract);
        if (su->parsed()) return run_summarize(seq_path, seq_format);
        if (fe->parsed()) return run_fetch(fetch);
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kUsageError;
}
