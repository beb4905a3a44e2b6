#include "adoptrace/sequences.hpp"

#include "adoptrace/csv.hpp"
#include "adoptrace/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <tuple>
#include <unordered_set>

namespace adoptrace {

std::size_t VersionSequence::state_count() const {
    std::unordered_set<Version, VersionHash> seen(versions.begin(), versions.end());
    return seen.size();
}

std::vector<VersionSequence> pool(std::vector<Observation> observations) {
    std::sort(observations.begin(), observations.end(), [](const Observation& a, const Observation& b) {
        if (a.domain != b.domain) return a.domain < b.domain;
        return a.snapshot_index < b.snapshot_index;
    });

    std::vector<VersionSequence> out;
    std::size_t i = 0;
    while (i < observations.size()) {
        std::size_t j = i + 1;
        while (j < observations.size() && observations[j].domain == observations[i].domain) {
            if (observations[j].snapshot_index == observations[j - 1].snapshot_index) {
                throw ContractViolation("duplicate observation for domain '" + observations[j].domain +
                                        "' in snapshot " + std::to_string(observations[j].snapshot_index));
            }
            ++j;
        }
        if (j - i >= 2) {
            VersionSequence seq;
            seq.domain = observations[i].domain;
            seq.versions.reserve(j - i);
            seq.snapshot_indices.reserve(j - i);
            for (std::size_t k = i; k < j; ++k) {
                seq.versions.push_back(std::move(observations[k].version));
                seq.snapshot_indices.push_back(observations[k].snapshot_index);
            }
            out.push_back(std::move(seq));
        }
        i = j;
    }
    return out;
}

CorpusSummary summarize(const std::vector<VersionSequence>& sequences) {
    if (sequences.empty()) throw ContractViolation("cannot summarize an empty corpus");
    const auto m = static_cast<double>(sequences.size());
    std::vector<double> lengths, states;
    lengths.reserve(sequences.size());
    states.reserve(sequences.size());
    for (const auto& s : sequences) {
        lengths.push_back(static_cast<double>(s.length()));
        states.push_back(static_cast<double>(s.state_count()));
    }
    auto mean_std = [m](const std::vector<double>& xs) {
        double sum = 0;
        for (double x : xs) sum += x;
        const double mean = sum / m;
        double ss = 0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        return std::pair{mean, std::sqrt(ss / m)};
    };
    CorpusSummary out;
    out.domain_count = sequences.size();
    std::tie(out.length_mean, out.length_std) = mean_std(lengths);
    std::tie(out.states_mean, out.states_std) = mean_std(states);
    return out;
}

void write_sequences_csv(std::ostream& out, const std::vector<VersionSequence>& sequences) {
    std::vector<const VersionSequence*> order;
    order.reserve(sequences.size());
    for (const auto& s : sequences) order.push_back(&s);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->domain < b->domain; });

    out << "domain,snapshot_index,version\n";
    for (const auto* s : order) {
        for (std::size_t k = 0; k < s->length(); ++k) {
            csv::write_row(out, {s->domain, std::to_string(s->snapshot_indices[k]), s->versions[k].str()});
        }
    }
}

}  // namespace adoptrace
