#pragma once

#include "adoptrace/sequences.hpp"
#include "adoptrace/version.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace adoptrace {

/// Maximum-likelihood transition estimate for a single version sequence.
///
/// States are indexed by first appearance in the sequence. Counts are kept
/// sparsely, one sorted `(to, count)` list per source state. A state with no
/// outgoing transitions (only possible for the final element) has an
/// all-zero probability row.
class TransitionModel {
public:
    using Cell = std::pair<std::size_t, std::uint64_t>;

    [[nodiscard]] std::size_t state_count() const noexcept { return states_.size(); }
    [[nodiscard]] const std::vector<Version>& states() const noexcept { return states_; }
    [[nodiscard]] std::span<const Cell> row(std::size_t i) const { return rows_.at(i); }
    [[nodiscard]] std::uint64_t row_total(std::size_t i) const { return row_totals_.at(i); }
    [[nodiscard]] const std::vector<std::uint64_t>& row_totals() const noexcept { return row_totals_; }

    /// f_ij
    [[nodiscard]] std::uint64_t count(std::size_t i, std::size_t j) const;
    /// f_ij / f_i. or 0 when the row has no data.
    [[nodiscard]] double prob(std::size_t i, std::size_t j) const;
    /// Sum of all counts; equals sequence length - 1.
    [[nodiscard]] std::uint64_t transitions() const noexcept;

    [[nodiscard]] std::vector<std::vector<std::uint64_t>> dense_counts() const;
    [[nodiscard]] std::vector<std::vector<double>> dense_probs() const;

private:
    friend TransitionModel estimate(std::span<const Version> versions);

    std::vector<Version> states_;
    std::vector<std::vector<Cell>> rows_;
    std::vector<std::uint64_t> row_totals_;
};

/// Throws ContractViolation when fewer than two versions are given.
TransitionModel estimate(std::span<const Version> versions);
TransitionModel estimate(const VersionSequence& seq);

/// 1 - p_ii for every state, in state order.
std::vector<double> self_loop_complement(const TransitionModel& model);

/// `{domain, states, counts, probs}` as a JSON document (dense matrices).
std::string model_json(const std::string& domain, const TransitionModel& model);

}  // namespace adoptrace
