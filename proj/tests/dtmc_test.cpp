#include "adoptrace/dtmc.hpp"
#include "adoptrace/error.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <map>
#include <random>

using namespace adoptrace;
using adoptrace::test::v;
using adoptrace::test::vs;

namespace {

const auto kSteadyUpgrade = vs({"5.4.39", "5.4.39", "5.4.39", "5.4.39", "5.6.20", "5.6.20", "5.6.20", "5.6.20", "5.6.20",
                       "5.6.20", "5.6.20", "5.6.28", "5.6.28", "5.6.28"});

std::map<std::pair<std::string, std::string>, std::uint64_t> keyed_counts(const TransitionModel& m) {
    std::map<std::pair<std::string, std::string>, std::uint64_t> out;
    for (std::size_t i = 0; i < m.state_count(); ++i) {
        for (const auto& [j, c] : m.row(i)) out[{m.states()[i].str(), m.states()[j].str()}] = c;
    }
    return out;
}

}  // namespace

TEST(Estimate, ThreeStateUpgradeMatrix) {
    const auto m = estimate(std::span<const Version>(kSteadyUpgrade));
    ASSERT_EQ(m.state_count(), 3u);
    EXPECT_EQ(m.states()[0], v("5.4.39"));
    EXPECT_EQ(m.states()[1], v("5.6.20"));
    EXPECT_EQ(m.states()[2], v("5.6.28"));
    const double expected[3][3] = {{0.75, 0.25, 0.0}, {0.0, 6.0 / 7.0, 1.0 / 7.0}, {0.0, 0.0, 1.0}};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(m.prob(i, j), expected[i][j], 1e-12);
    }
    // Printed two-decimal values.
    EXPECT_NEAR(m.prob(1, 1), 0.86, 0.005);
    EXPECT_NEAR(m.prob(1, 2), 0.14, 0.005);
    EXPECT_EQ(m.count(0, 0), 3u);
    EXPECT_EQ(m.count(1, 1), 6u);
    EXPECT_EQ(m.transitions(), 13u);
}

TEST(Estimate, TerminalUnseenStateHasZeroRow) {
    const auto seq = vs({"5.6.20", "7.0.1"});
    const auto m = estimate(std::span<const Version>(seq));
    EXPECT_DOUBLE_EQ(m.prob(0, 1), 1.0);
    EXPECT_EQ(m.row_total(1), 0u);
    EXPECT_DOUBLE_EQ(m.prob(1, 0), 0.0);
    EXPECT_DOUBLE_EQ(m.prob(1, 1), 0.0);
}

TEST(Estimate, ConstantSequence) {
    const auto seq = vs({"5.6.20", "5.6.20", "5.6.20"});
    const auto m = estimate(std::span<const Version>(seq));
    ASSERT_EQ(m.state_count(), 1u);
    EXPECT_DOUBLE_EQ(m.prob(0, 0), 1.0);
}

TEST(Estimate, ShortSequenceViolatesContract) {
    const auto one = vs({"5.6.20"});
    EXPECT_THROW(estimate(std::span<const Version>(one)), ContractViolation);
    EXPECT_THROW(estimate(std::span<const Version>()), ContractViolation);
}

TEST(SelfLoopComplement, Examples) {
    const auto complement = self_loop_complement(estimate(std::span<const Version>(kSteadyUpgrade)));
    ASSERT_EQ(complement.size(), 3u);
    EXPECT_NEAR(complement[0], 0.25, 1e-12);
    EXPECT_NEAR(complement[1], 1.0 / 7.0, 1e-12);
    EXPECT_NEAR(complement[2], 0.0, 1e-12);
    const auto c = vs({"5.6.1", "5.6.1"});
    EXPECT_EQ(self_loop_complement(estimate(std::span<const Version>(c))), (std::vector<double>{0.0}));
    const auto ab = vs({"5.6.1", "5.6.2"});
    EXPECT_EQ(self_loop_complement(estimate(std::span<const Version>(ab))), (std::vector<double>{1.0, 1.0}));
}

TEST(Estimate, AgreesWithBruteForceTally) {
    std::mt19937_64 rng(42);
    for (int iter = 0; iter < 1000; ++iter) {
        const auto seq = test::random_sequence(rng, 50, 1 + iter % 10);
        const auto m = estimate(std::span<const Version>(seq));
        const auto ref = oracle::tally(seq);
        ASSERT_EQ(m.states(), ref.states);
        ASSERT_EQ(m.dense_counts(), ref.counts);
        EXPECT_EQ(m.transitions(), seq.size() - 1);
        for (std::size_t i = 0; i < m.state_count(); ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < m.state_count(); ++j) sum += m.prob(i, j);
            if (m.row_total(i) > 0) {
                EXPECT_NEAR(sum, 1.0, 1e-12);
            } else {
                EXPECT_EQ(sum, 0.0);
                EXPECT_EQ(m.states()[i], seq.back());  // only the final state can lack data
            }
        }
    }
}

TEST(Estimate, RelabelingPermutesNothingInIndexSpace) {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 200; ++iter) {
        auto seq = test::random_sequence(rng, 30, 6);
        auto relabeled = seq;
        for (auto& x : relabeled) x = Version{x.maintenance + 100, x.major, x.minor};  // bijective
        const auto a = estimate(std::span<const Version>(seq));
        const auto b = estimate(std::span<const Version>(relabeled));
        EXPECT_EQ(a.dense_counts(), b.dense_counts());
        EXPECT_EQ(a.dense_probs(), b.dense_probs());
    }
}

TEST(Estimate, DependsOnlyOnAdjacentPairs) {
    // Same first element and same multiset of adjacent pairs.
    const auto x = vs({"5.4.0", "5.5.0", "5.4.0", "5.6.0", "5.4.0"});
    const auto y = vs({"5.4.0", "5.6.0", "5.4.0", "5.5.0", "5.4.0"});
    EXPECT_EQ(keyed_counts(estimate(std::span<const Version>(x))), keyed_counts(estimate(std::span<const Version>(y))));
}

TEST(ModelJson, DenseExport) {
    const auto m = estimate(std::span<const Version>(kSteadyUpgrade));
    const auto j = nlohmann::json::parse(model_json("www.vraymaterials.co.uk", m));
    EXPECT_EQ(j["domain"], "www.vraymaterials.co.uk");
    EXPECT_EQ(j["states"], nlohmann::json({"5.4.39", "5.6.20", "5.6.28"}));
    EXPECT_EQ(j["counts"], nlohmann::json({{3, 1, 0}, {0, 6, 1}, {0, 0, 2}}));
    EXPECT_DOUBLE_EQ(j["probs"][0][1].get<double>(), 0.25);
}
