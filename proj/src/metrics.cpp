#include "adoptrace/metrics.hpp"

#include "adoptrace/csv.hpp"
#include "adoptrace/error.hpp"
#include "adoptrace/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

namespace adoptrace {

double prevalence(const TransitionModel& model) {
    const auto complement = self_loop_complement(model);
    if (complement.empty()) return 0.0;
    double sum = 0.0;
    for (double c : complement) sum += c;
    return sum / static_cast<double>(complement.size());
}

DowngradeRate downgrade_rate(std::span<const Version> versions) {
    if (versions.size() < 2) throw ContractViolation("downgrade rate needs at least two observations");
    DowngradeRate out;
    for (std::size_t t = 0; t + 1 < versions.size(); ++t) {
        if (classify_transition(versions[t], versions[t + 1]) != DowngradeKind::None) ++out.downgrades;
    }
    out.phi = static_cast<double>(out.downgrades) / static_cast<double>(versions.size() - 1);
    return out;
}

DowngradeRate downgrade_rate(const VersionSequence& seq) { return downgrade_rate(std::span<const Version>(seq.versions)); }

CommunicatingRate communicating_rate(const TransitionModel& model, std::size_t r) {
    if (r < 2) throw ContractViolation("communicating rate needs r >= 2");
    CommunicatingRate out;
    for (std::size_t i = 0; i < model.state_count(); ++i) {
        for (const auto& [j, c] : model.row(i)) {
            if (j > i && model.count(j, i) > 0) ++out.pairs;
        }
    }
    out.gamma = static_cast<double>(out.pairs) / static_cast<double>(r - 1);
    return out;
}

DomainMetrics domain_metrics(const VersionSequence& seq) {
    const auto model = estimate(seq);
    const auto down = downgrade_rate(seq);
    const auto comm = communicating_rate(model, seq.length());
    DomainMetrics m;
    m.domain = seq.domain;
    m.r = seq.length();
    m.state_count = model.state_count();
    m.delta = prevalence(model);
    m.downgrades = down.downgrades;
    m.phi = down.phi;
    m.communicating_pairs = comm.pairs;
    m.gamma = comm.gamma;
    return m;
}

std::vector<DomainMetrics> compute_metrics(const std::vector<VersionSequence>& sequences, std::size_t threads) {
    std::vector<DomainMetrics> out(sequences.size());
    constexpr std::size_t kBatch = 4096;
    const std::size_t batches = (sequences.size() + kBatch - 1) / kBatch;
    parallel_for(batches, threads, [&](std::size_t b) {
        const std::size_t hi = std::min(sequences.size(), (b + 1) * kBatch);
        for (std::size_t k = b * kBatch; k < hi; ++k) out[k] = domain_metrics(sequences[k]);
    });
    return out;
}

namespace {

struct VersionListLess {
    bool operator()(const std::vector<Version>* a, const std::vector<Version>* b) const {
        return std::lexicographical_compare(a->begin(), a->end(), b->begin(), b->end());
    }
};

}  // namespace

UniformityReport uniformity(const std::vector<VersionSequence>& sequences) {
    if (sequences.empty()) throw ContractViolation("uniformity needs a non-empty corpus");
    std::set<const std::vector<Version>*, VersionListLess> single, multi;
    UniformityReport out;
    out.m = sequences.size();
    for (const auto& s : sequences) {
        if (s.state_count() == 1) {
            ++out.single_state.domains;
            single.insert(&s.versions);
        } else {
            ++out.multi_state.domains;
            multi.insert(&s.versions);
        }
    }
    const auto m = static_cast<double>(out.m);
    out.single_state.unique_sequences = single.size();
    out.multi_state.unique_sequences = multi.size();
    out.single_state.share_percent = static_cast<double>(single.size()) / m * 100.0;
    out.multi_state.share_percent = static_cast<double>(multi.size()) / m * 100.0;
    return out;
}

FrequencyReport frequencies(const std::vector<Observation>& observations,
                            const std::vector<VersionSequence>& sequences) {
    FrequencyReport out;
    std::map<Version, std::uint64_t> counts;
    for (const auto& o : observations) ++counts[o.version];
    out.total_observations = observations.size();
    for (auto& [v, c] : counts) out.versions.push_back({Version{v.major, v.minor, v.maintenance}, c});

    std::map<std::uint32_t, std::uint64_t> finals;
    std::uint64_t domains = 0;
    for (const auto& s : sequences) {
        if (s.versions.empty()) continue;
        ++finals[s.versions.back().major];
        ++domains;
    }
    for (auto& [major, n] : finals) {
        out.final_major.push_back({major, n, static_cast<double>(n) / static_cast<double>(domains) * 100.0});
    }
    return out;
}

std::vector<VersionCount> top_versions(const FrequencyReport& report, std::size_t n) {
    auto sorted = report.versions;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const VersionCount& a, const VersionCount& b) { return a.count > b.count; });
    if (sorted.size() > n) sorted.resize(n);
    return sorted;
}

void write_metrics_csv(std::ostream& out, const std::vector<DomainMetrics>& metrics) {
    out << "domain,r,state_count,delta,d,phi,gamma\n";
    for (const auto& m : metrics) {
        out << csv::escape(m.domain)
            << fmt::format(",{},{},{:.6f},{},{:.6f},{:.6f}\n", m.r, m.state_count, m.delta, m.downgrades, m.phi,
                           m.gamma);
    }
}

}  // namespace adoptrace
