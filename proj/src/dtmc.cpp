#include "adoptrace/dtmc.hpp"

#include "adoptrace/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <unordered_map>

namespace adoptrace {

TransitionModel estimate(std::span<const Version> versions) {
    if (versions.size() < 2) {
        throw ContractViolation("transition estimate needs at least two observations, got " +
                                std::to_string(versions.size()));
    }
    TransitionModel model;
    std::unordered_map<Version, std::size_t, VersionHash> index;
    std::vector<std::size_t> seq;
    seq.reserve(versions.size());
    for (const auto& v : versions) {
        auto [it, inserted] = index.try_emplace(v, model.states_.size());
        if (inserted) model.states_.push_back(v);
        seq.push_back(it->second);
    }
    const std::size_t n = model.states_.size();
    model.rows_.assign(n, {});
    model.row_totals_.assign(n, 0);
    for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
        auto& row = model.rows_[seq[t]];
        const std::size_t to = seq[t + 1];
        auto it = std::find_if(row.begin(), row.end(), [to](const auto& c) { return c.first == to; });
        if (it == row.end()) {
            row.emplace_back(to, 1);
        } else {
            ++it->second;
        }
        ++model.row_totals_[seq[t]];
    }
    for (auto& row : model.rows_) std::sort(row.begin(), row.end());
    return model;
}

TransitionModel estimate(const VersionSequence& seq) { return estimate(std::span<const Version>(seq.versions)); }

std::uint64_t TransitionModel::count(std::size_t i, std::size_t j) const {
    const auto& r = rows_.at(i);
    auto it = std::lower_bound(r.begin(), r.end(), j, [](const Cell& c, std::size_t key) { return c.first < key; });
    return (it != r.end() && it->first == j) ? it->second : 0;
}

double TransitionModel::prob(std::size_t i, std::size_t j) const {
    const std::uint64_t total = row_totals_.at(i);
    if (total == 0) return 0.0;
    return static_cast<double>(count(i, j)) / static_cast<double>(total);
}

std::uint64_t TransitionModel::transitions() const noexcept {
    std::uint64_t sum = 0;
    for (auto t : row_totals_) sum += t;
    return sum;
}

std::vector<std::vector<std::uint64_t>> TransitionModel::dense_counts() const {
    std::vector<std::vector<std::uint64_t>> out(state_count(), std::vector<std::uint64_t>(state_count(), 0));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        for (const auto& [j, c] : rows_[i]) out[i][j] = c;
    }
    return out;
}

std::vector<std::vector<double>> TransitionModel::dense_probs() const {
    std::vector<std::vector<double>> out(state_count(), std::vector<double>(state_count(), 0.0));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        for (const auto& [j, c] : rows_[i]) out[i][j] = prob(i, j);
    }
    return out;
}

std::vector<double> self_loop_complement(const TransitionModel& model) {
    std::vector<double> out(model.state_count());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = 1.0 - model.prob(i, i);
    return out;
}

std::string model_json(const std::string& domain, const TransitionModel& model) {
    nlohmann::json j;
    j["domain"] = domain;
    auto& states = j["states"] = nlohmann::json::array();
    for (const auto& v : model.states()) states.push_back(v.str());
    j["counts"] = model.dense_counts();
    j["probs"] = model.dense_probs();
    return j.dump();
}

}  // namespace adoptrace
