#include "adoptrace/collector.hpp"

#include "adoptrace/csv.hpp"
#include "adoptrace/error.hpp"
#include "adoptrace/parallel.hpp"

#include <httplib.h>
#include <fmt/format.h>

#include <algorithm>
#include <ctime>
#include <fstream>
#include <thread>

namespace adoptrace {

namespace {

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                       tm.tm_hour, tm.tm_min, tm.tm_sec);
}

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

void set_timeouts(httplib::Client& cli, std::chrono::milliseconds timeout) {
    const auto sec = static_cast<time_t>(timeout.count() / 1000);
    const auto usec = static_cast<time_t>((timeout.count() % 1000) * 1000);
    cli.set_connection_timeout(sec, usec);
    cli.set_read_timeout(sec, usec);
    cli.set_write_timeout(sec, usec);
}

std::string error_tag(httplib::Error e) {
    using E = httplib::Error;
    switch (e) {
    case E::Connection: return "connection";
    case E::ConnectionTimeout: return "connection-timeout";
    case E::Read: return "read";
    case E::Write: return "write";
    case E::Canceled: return "canceled";
    case E::ExceedRedirectCount: return "redirects";
    case E::Compression: return "compression";
    case E::ProxyConnection: return "proxy";
    case E::BindIPAddress: return "bind";
    default: return "unknown";
    }
}

}  // namespace

std::string FetchResult::header_blob() const {
    std::string out;
    for (const auto& [name, value] : headers) {
        if (!out.empty()) out += '\n';
        out += name;
        out += ": ";
        out += value;
    }
    return out;
}

FetchResult fetch_domain(const std::string& domain, const FetchOptions& options) {
    FetchResult result;
    result.domain = domain;

    std::string host = "http://" + domain;
    std::string path = "/";
    for (int hop = 0;; ++hop) {
        httplib::Client cli(host);
        if (!cli.is_valid()) {
            result.error = "invalid-domain";
            break;
        }
        set_timeouts(cli, options.timeout);
        cli.set_follow_location(false);
        result.fetched_at = utc_now();
        auto res = cli.Get(path, httplib::Headers{{"User-Agent", options.user_agent}});
        if (!res) {
            result.error = error_tag(res.error());
            result.status = 0;
            result.headers.clear();
            break;
        }
        result.status = res->status;
        result.headers.assign(res->headers.begin(), res->headers.end());

        const bool redirect = res->status >= 300 && res->status < 400 && res->has_header("Location");
        if (!redirect || hop >= options.max_redirects) break;
        const std::string location = res->get_header_value("Location");
        if (location.starts_with("http://")) {
            const auto slash = location.find('/', 7);
            const std::string next_host = location.substr(0, slash);
            if (next_host == host && options.politeness_delay.count() > 0) {
                std::this_thread::sleep_for(options.politeness_delay);
            }
            host = next_host;
            path = slash == std::string::npos ? "/" : location.substr(slash);
        } else if (location.starts_with("/") && !location.starts_with("//")) {
            if (options.politeness_delay.count() > 0) std::this_thread::sleep_for(options.politeness_delay);
            path = location;
        } else {
            break;  // other scheme or scheme-relative target: keep the redirect response
        }
    }
    if (result.fetched_at.empty()) result.fetched_at = utc_now();
    return result;
}

std::vector<FetchResult> collect(std::vector<std::string> domains, const FetchOptions& options) {
    std::sort(domains.begin(), domains.end());
    domains.erase(std::unique(domains.begin(), domains.end()), domains.end());
    std::vector<FetchResult> results(domains.size());
    parallel_for(domains.size(), std::max<std::size_t>(1, options.max_parallel),
                 [&](std::size_t i) { results[i] = fetch_domain(domains[i], options); });
    return results;
}

void write_snapshot_csv(std::ostream& out, const std::vector<FetchResult>& results) {
    out << "url,domain,status,headers,fetched_at\n";
    for (const auto& r : results) {
        const std::string status = r.ok() ? std::to_string(r.status) : "error:" + r.error;
        csv::write_row(out, {"http://" + r.domain + "/", r.domain, status, r.header_blob(), r.fetched_at});
    }
}

std::vector<FetchResult> collect_to_file(std::vector<std::string> domains, const FetchOptions& options,
                                         const std::filesystem::path& out_path) {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + out_path.string());
    auto results = collect(std::move(domains), options);
    write_snapshot_csv(out, results);
    out.flush();
    if (!out) throw IoError("write failed for " + out_path.string());
    return results;
}

std::vector<std::string> read_domain_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto d = trim(line);
        if (!d.empty()) out.push_back(std::move(d));
    }
    return out;
}

}  // namespace adoptrace
