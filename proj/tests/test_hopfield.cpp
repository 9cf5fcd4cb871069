#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sqw/hopfield.hpp"

using namespace sqw;

namespace {

WeightMatrix single_coupling(std::size_t n, std::size_t i, std::size_t j, double w) {
    WeightMatrix m(n);
    m.set(i, j, w);
    return m;
}

Pattern random_pattern(std::size_t n, std::mt19937_64& rng) {
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
    return Pattern(bits);
}

} // namespace

TEST(Pattern, ParsesAndPrintsMostSignificantFirst) {
    const auto p = Pattern::parse("101");
    EXPECT_EQ(p.size(), 3u);
    EXPECT_EQ(p[0], 1);
    EXPECT_EQ(p[1], 0);
    EXPECT_EQ(p.str(), "101");
}

TEST(Pattern, RejectsBadStrings) {
    EXPECT_THROW(Pattern::parse(""), ConfigError);
    EXPECT_THROW(Pattern::parse("10a"), ConfigError);
    EXPECT_THROW(Pattern::parse("2"), ConfigError);
}

TEST(WeightMatrix, EnforcesInvariants) {
    EXPECT_THROW(WeightMatrix::from_rows({{0, 0.5}, {0.4, 0}}), ConfigError);
    EXPECT_THROW(WeightMatrix::from_rows({{0.1, 0}, {0, 0}}), ConfigError);
    EXPECT_THROW(WeightMatrix::from_rows({{0, 1.5}, {1.5, 0}}), ConfigError);
    EXPECT_NO_THROW(WeightMatrix::from_rows({{0, -1}, {-1, 0}}));
}

TEST(UpdateNeuron, ZeroWeightsFire) {
    const WeightMatrix w(4);
    const auto theta = Thresholds::zeros(4);
    for (const char* s : {"0000", "1010", "1111"}) {
        for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(update_neuron(Pattern::parse(s), w, theta, i), 1);
    }
}

TEST(UpdateNeuron, ExcitatoryAndInhibitoryCoupling) {
    // neurons 1 and 2 of the text are indices 0 and 1
    const auto theta = Thresholds::zeros(3);
    const auto state = Pattern::parse("010");
    EXPECT_EQ(update_neuron(state, single_coupling(3, 0, 1, 1.0), theta, 0), 1);
    EXPECT_EQ(update_neuron(state, single_coupling(3, 0, 1, -1.0), theta, 0), 0);
}

TEST(UpdateNeuron, AsPrintedSenseInvertsStrictCases) {
    const auto theta = Thresholds::zeros(3);
    const auto state = Pattern::parse("010");
    EXPECT_EQ(update_neuron(state, single_coupling(3, 0, 1, 1.0), theta, 0, ThresholdSense::as_printed), 0);
    EXPECT_EQ(update_neuron(state, single_coupling(3, 0, 1, -1.0), theta, 0, ThresholdSense::as_printed), 1);
    // a tie fires under both senses
    EXPECT_EQ(update_neuron(state, WeightMatrix(3), theta, 0, ThresholdSense::as_printed), 1);
}

TEST(UpdateNeuron, IndexOutOfRange) {
    EXPECT_THROW(update_neuron(Pattern::parse("01"), WeightMatrix(2), Thresholds::zeros(2), 2), ContractViolation);
}

TEST(Energy, HandValues) {
    EXPECT_EQ(energy(Pattern::parse("000"), single_coupling(3, 0, 1, 1.0), Thresholds(std::vector<double>{1, 1, 1})), 0.0);
    EXPECT_DOUBLE_EQ(energy(Pattern::parse("11"), single_coupling(2, 0, 1, 1.0), Thresholds::zeros(2)), -1.0);
    EXPECT_DOUBLE_EQ(energy(Pattern::parse("11"), WeightMatrix(2), Thresholds(std::vector<double>{1, 1})), 2.0);
}

TEST(Hebbian, TwoNeuronCases) {
    EXPECT_DOUBLE_EQ(hebbian_store({Pattern::parse("11")})(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(hebbian_store({Pattern::parse("10")})(0, 1), -1.0);
    EXPECT_DOUBLE_EQ(hebbian_store({Pattern::parse("10"), Pattern::parse("01")})(0, 1), -1.0);
}

TEST(Hebbian, Errors) {
    EXPECT_THROW(hebbian_store({}), ConfigError);
    EXPECT_THROW(hebbian_store({Pattern::parse("10"), Pattern::parse("101")}), ConfigError);
}

TEST(Hebbian, OutputAlwaysSatisfiesWeightInvariants) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 7;
        std::vector<Pattern> ps;
        for (std::size_t k = 0, p = 1 + rng() % 5; k < p; ++k) ps.push_back(random_pattern(n, rng));
        const auto w = hebbian_store(ps);
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_EQ(w(i, i), 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                EXPECT_EQ(w(i, j), w(j, i));
                EXPECT_LE(std::abs(w(i, j)), 1.0);
            }
        }
    }
}

TEST(Hamming, Values) {
    EXPECT_EQ(hamming(Pattern::parse("0110"), Pattern::parse("0110")), 0u);
    EXPECT_EQ(hamming(Pattern::parse("000"), Pattern::parse("101")), 2u);
    EXPECT_EQ(hamming(Pattern::parse("0000"), Pattern::parse("1111")), 4u);
    EXPECT_THROW(hamming(Pattern::parse("00"), Pattern::parse("000")), ContractViolation);
}

TEST(Hamming, IsAMetric) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng() % 8;
        const auto a = random_pattern(n, rng), b = random_pattern(n, rng), c = random_pattern(n, rng);
        EXPECT_EQ(hamming(a, b), hamming(b, a));
        EXPECT_EQ(hamming(a, b) == 0, a == b);
        EXPECT_LE(hamming(a, c), hamming(a, b) + hamming(b, c));
    }
}

TEST(RunAsync, StoredPatternIsFixedImmediately) {
    const auto p = Pattern::parse("1010");
    const auto run = run_async(p, hebbian_store({p}), Thresholds::zeros(4));
    EXPECT_TRUE(run.converged);
    EXPECT_EQ(run.trajectory.size(), 1u);
    EXPECT_EQ(run.flips, 0u);
    EXPECT_EQ(run.final_state(), p);
}

TEST(RunAsync, CorruptedInputMatchesExhaustiveOracle) {
    const auto stored = Pattern::parse("1010");
    const auto w = hebbian_store({stored});
    const auto ow = oracle::hebb_weights({1, 0, 1, 0});
    // all 16 inputs against the independent simulation
    for (unsigned v = 0; v < 16; ++v) {
        const auto bits = oracle::bits_of(v, 4);
        const auto run = run_async(Pattern::parse(bits), w, Thresholds::zeros(4));
        std::vector<int> x;
        for (char c : bits) x.push_back(c - '0');
        const auto expect = oracle::hopfield_fixed_point(x, ow);
        std::string es;
        for (int b : expect) es += static_cast<char>('0' + b);
        EXPECT_EQ(run.final_state().str(), es) << "input " << bits;
    }
    EXPECT_EQ(run_async(Pattern::parse("1011"), w, Thresholds::zeros(4)).final_state().str(), "1010");
}

TEST(RunAsync, ZeroWeightsFireEverythingInOneSweep) {
    const auto run = run_async(Pattern::parse("0000"), WeightMatrix(4), Thresholds::zeros(4));
    EXPECT_EQ(run.final_state().str(), "1111");
    EXPECT_TRUE(run.converged);
    EXPECT_EQ(run.sweeps, 2u); // one sweep that flips, one that confirms
}

TEST(RunAsync, EnergyNonIncreasingAndFixedPointsAreStable) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + rng() % 6;
        std::vector<double> flat(n * n, 0.0);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) flat[i * n + j] = flat[j * n + i] = u(rng);
        const WeightMatrix w(n, flat);
        const auto theta = Thresholds::zeros(n);
        const AsyncOptions opts{trial % 2 ? UpdateOrder::random : UpdateOrder::cyclic, 1000, rng(), ThresholdSense::standard};
        const auto run = run_async(random_pattern(n, rng), w, theta, opts);
        for (std::size_t k = 1; k < run.energies.size(); ++k) EXPECT_LE(run.energies[k], run.energies[k - 1] + 1e-12);
        ASSERT_TRUE(run.converged);
        for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(update_neuron(run.final_state(), w, theta, i), run.final_state()[i]);
    }
}

TEST(RunAsync, RandomOrderIsSeedDeterministic) {
    const auto p = Pattern::parse("10110");
    const auto w = hebbian_store({p, Pattern::parse("01100")});
    const AsyncOptions opts{UpdateOrder::random, 50, 1234, ThresholdSense::standard};
    const auto a = run_async(Pattern::parse("00000"), w, Thresholds::zeros(5), opts);
    const auto b = run_async(Pattern::parse("00000"), w, Thresholds::zeros(5), opts);
    EXPECT_EQ(a.trajectory, b.trajectory);
}
