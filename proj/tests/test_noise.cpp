#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "chemowall/error.hpp"
#include "chemowall/noise.hpp"
#include "chemowall/rng.hpp"
#include "oracles/gaussian_oracle.hpp"

using namespace chemowall;

namespace {

double sample_variance(const std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return acc / (v.size() - 1);
}

std::vector<double> increments(const NoisePath& p) {
    std::vector<double> d;
    for (std::size_t k = 1; k < p.values.size(); ++k) d.push_back(p.values[k] - p.values[k - 1]);
    return d;
}

}  // namespace

TEST_CASE("philox known-answer vectors") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("gaussian stream is order independent and roughly standard normal") {
    GaussianStream g(123, 7);
    std::vector<double> forward(1001), shifted(500);
    g.fill(forward);
    g.fill(shifted, 501);
    for (std::size_t i = 0; i < shifted.size(); ++i) CHECK(shifted[i] == forward[501 + i]);
    CHECK(g(999) == forward[999]);

    std::vector<double> big(200000);
    GaussianStream(9, 1).fill(big);
    const double mean = std::accumulate(big.begin(), big.end(), 0.0) / big.size();
    CHECK(std::abs(mean) < 5.0 / std::sqrt(big.size()));
    CHECK(sample_variance(big) == doctest::Approx(1.0).epsilon(0.02));

    CHECK(GaussianStream(1, 7)(0) != GaussianStream(2, 7)(0));
    CHECK(GaussianStream(1, 7)(0) != GaussianStream(1, 8)(0));
}

TEST_CASE("derived ensemble seeds are distinct and fixed") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_seed(42, i));
    CHECK(seen.size() == 10000);
    CHECK(derive_seed(42, 0) == splitmix64(42 + 0x9E3779B97F4A7C15ull));
}

TEST_CASE("time grid validation") {
    CHECK_THROWS_AS(TimeGrid({0.0, 0.0, 10}).validate(), InvalidInput);
    CHECK_THROWS_AS(TimeGrid({0.0, -1e-3, 10}).validate(), InvalidInput);
    CHECK_THROWS_AS(TimeGrid({0.0, 1e-3, 0}).validate(), InvalidInput);
    const auto g = TimeGrid::span(0.0, 20.0, 1e-3);
    CHECK(g.n_steps == 20000);
    CHECK(g.t_end() == doctest::Approx(20.0));
    CHECK_THROWS_AS(sample_wiener_path(1, {0.0, 0.0, 10}), InvalidInput);
}

TEST_CASE("wiener path") {
    const TimeGrid grid{0.0, 0.01, 1000};
    const auto w = sample_wiener_path(42, grid);
    REQUIRE(w.values.size() == 1001);
    CHECK(w.values[0] == 0.0);
    CHECK(w.kind == NoiseKind::Wiener);
    CHECK(sample_variance(increments(w)) == doctest::Approx(0.01).epsilon(0.2));

    CHECK(sample_wiener_path(42, grid).values == w.values);
    const auto a = sample_wiener_path(1, grid);
    const auto b = sample_wiener_path(2, grid);
    CHECK(a.values != b.values);
}

TEST_CASE("ou path parameters are validated") {
    const TimeGrid grid{0.0, 1e-2, 10};
    CHECK_THROWS_AS(sample_ou_path({0.0, 0.2}, 1, grid), InvalidInput);
    CHECK_THROWS_AS(sample_ou_path({1.0, -0.2}, 1, grid), InvalidInput);
    CHECK_THROWS_AS(sample_ou_path({-1.0, 0.2}, 1, grid), InvalidInput);
}

TEST_CASE("ou path follows the exact AR(1) recursion") {
    const OUParams ou{1.5, 0.3};
    const TimeGrid grid{0.0, 0.01, 200};
    const auto z = sample_ou_path(ou, 5, grid);
    const GaussianStream n(5, kOUStream);
    const double sd = 0.3 / std::sqrt(3.0);
    const double decay = std::exp(-1.5 * 0.01);
    const double innov = 0.3 * std::sqrt((1.0 - std::exp(-2 * 1.5 * 0.01)) / 3.0);
    CHECK(z.values[0] == doctest::Approx(sd * n(0)).epsilon(1e-14));
    double expected = z.values[0];
    for (std::size_t k = 0; k + 1 < z.values.size(); ++k) {
        expected = expected * decay + innov * n(k + 1);
        CHECK(z.values[k + 1] == doctest::Approx(expected).epsilon(1e-12));
        expected = z.values[k + 1];
    }
}

TEST_CASE("ou amplitude ordering in gamma and beta") {
    const auto grid = TimeGrid::span(0.0, 10.0, 1e-3);
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto small = ergodic_stats(sample_ou_path({1.0, 0.1}, seed, grid));
        const auto large = ergodic_stats(sample_ou_path({1.0, 0.5}, seed, grid));
        CHECK(small.sup_abs < large.sup_abs);
        const auto slow = ergodic_stats(sample_ou_path({1.0, 0.1}, seed, grid));
        const auto fast = ergodic_stats(sample_ou_path({10.0, 0.1}, seed, grid));
        CHECK(fast.sup_abs < slow.sup_abs);
    }
}

TEST_CASE("vanishing volatility") {
    const auto z = sample_ou_path({1.0, 1e-12}, 3, TimeGrid::span(0.0, 10.0, 1e-3));
    for (double v : z.values) REQUIRE(std::abs(v) < 1e-6);
}

TEST_CASE("ergodic stats on constant and sample paths") {
    NoisePath c;
    c.grid = {0.0, 0.1, 50};
    c.values.assign(51, -0.7);
    const auto s = ergodic_stats(c);
    CHECK(s.time_avg == doctest::Approx(-0.7));
    CHECK(s.time_avg_abs == doctest::Approx(0.7));
    CHECK(s.sup_abs == doctest::Approx(0.7));
    CHECK(s.final_over_t == doctest::Approx(0.7 / 5.0));

    NoisePath empty;
    CHECK_THROWS_AS(ergodic_stats(empty), InvalidInput);

    const auto z = sample_ou_path({1.0, 0.2}, 11, TimeGrid::span(0.0, 300.0, 1e-2));
    const auto st = ergodic_stats(z);
    CHECK(st.time_avg_abs >= std::abs(st.time_avg));
    CHECK(st.sup_abs >= st.time_avg_abs);
}

TEST_CASE("long-run ergodic limits") {
    const auto z = sample_ou_path({1.0, 0.2}, 2024, TimeGrid::span(0.0, 5000.0, 1e-3));
    const auto st = ergodic_stats(z);
    CHECK(std::abs(st.time_avg) < 0.02);
    // Reference E|z| from a plain Monte-Carlo of the stationary law.
    const double mc = oracle::mean_abs_normal(0.2 / std::sqrt(2.0), 400000, 77);
    CHECK(mc == doctest::Approx(0.2 * std::sqrt(1.0 / M_PI)).epsilon(0.01));
    CHECK(std::abs(st.time_avg_abs - mc) / mc < 0.1);
}

TEST_CASE("stationary variance and lag-1 autocorrelation") {
    const double beta = 2.0, gamma = 0.5, dt = 0.05;
    const auto z = sample_ou_path({beta, gamma}, 8, TimeGrid::span(0.0, 1000.0, dt));
    CHECK(sample_variance(z.values) == doctest::Approx(gamma * gamma / (2 * beta)).epsilon(0.1));
    const double rho = std::exp(-beta * dt);
    const double se = std::sqrt((1.0 - rho * rho) / z.values.size());
    CHECK(std::abs(lag1_autocorrelation(z) - rho) < 3.0 * se);
}

TEST_CASE("ergodic averages shrink with the horizon") {
    double previous_avg = INFINITY, previous_final = INFINITY;
    for (double horizon : {100.0, 1000.0, 10000.0}) {
        // mean over several seeds to keep the trend check stable
        double avg = 0.0, fin = 0.0;
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const auto st = ergodic_stats(sample_ou_path({1.0, 0.2}, seed, TimeGrid::span(0.0, horizon, 1e-2)));
            avg += std::abs(st.time_avg);
            fin += st.final_over_t;
        }
        CHECK(avg < previous_avg);
        CHECK(fin < previous_final);
        previous_avg = avg;
        previous_final = fin;
    }
}

TEST_CASE("sup decreases with mean reversion on average") {
    double previous = INFINITY;
    for (double beta : {1.0, 10.0, 100.0}) {
        double mean = 0.0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            mean += ergodic_stats(sample_ou_path({beta, 0.2}, seed, TimeGrid::span(0.0, 10.0, 1e-3))).sup_abs;
        }
        CHECK(mean < previous);
        previous = mean;
    }
}

TEST_CASE("perturbed dilution") {
    const auto z = sample_ou_path({1.0, 0.2}, 4, TimeGrid::span(0.0, 10.0, 1e-3));
    const auto flat = perturbed_dilution(z, 2.0, 0.0);
    for (double v : flat.values) REQUIRE(v == 2.0);
    CHECK(flat.kind == NoiseKind::OrnsteinUhlenbeck);
    CHECK_THROWS_AS(perturbed_dilution(z, 2.0, -0.1), InvalidInput);

    const auto d = perturbed_dilution(z, 2.0, 0.5);
    for (std::size_t k = 0; k < d.values.size(); ++k) REQUIRE(d.values[k] == 2.0 + 0.5 * z.values[k]);
    CHECK(*std::min_element(d.values.begin(), d.values.end()) > 0.0);

    const auto grid = TimeGrid::span(0.0, 10.0, 1e-3);
    const auto mild = perturbed_dilution(sample_ou_path({1.0, 0.2}, 9, grid), 2.0, 0.5);
    const auto wild = perturbed_dilution(sample_ou_path({1.0, 0.7}, 9, grid), 2.0, 2.0);
    auto spread = [](const NoisePath& p) {
        auto [lo, hi] = std::minmax_element(p.values.begin(), p.values.end());
        return *hi - *lo;
    };
    CHECK(spread(wild) > spread(mild));
}

TEST_CASE("dilution band report") {
    NoisePath c;
    c.grid = {0.0, 0.1, 10};
    c.values.assign(11, 2.0);
    auto r = check_dilution_band(c, 1.0, 3.0);
    CHECK(r.inside_fraction() == 1.0);
    CHECK(r.certified());
    CHECK_FALSE(r.first_violation_time.has_value());
    CHECK_THROWS_AS(check_dilution_band(c, 3.0, 1.0), InvalidInput);
    CHECK_THROWS_AS(check_dilution_band(c, 2.0, 2.0), InvalidInput);
    CHECK_THROWS_AS(check_dilution_band(c, 0.0, 2.0), InvalidInput);

    c.values[4] = 3.5;
    c.values[7] = 0.5;
    r = check_dilution_band(c, 1.0, 3.0);
    CHECK(r.violations == 2);
    CHECK(r.first_violation_time.value() == doctest::Approx(0.4));

    const auto grid = TimeGrid::span(0.0, 200.0, 1e-3);
    const auto w = sample_wiener_path(5, grid);
    CHECK(check_dilution_band(perturbed_dilution(w, 3.0, 1.5), 1.0, 5.0).violations > 0);

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto g = TimeGrid::span(0.0, 20.0, 1e-3);
        const auto slow = check_dilution_band(perturbed_dilution(sample_ou_path({1.0, 0.7}, seed, g), 2.0, 0.5), 1.0, 3.0);
        const auto fast = check_dilution_band(perturbed_dilution(sample_ou_path({4.0, 0.7}, seed, g), 2.0, 0.5), 1.0, 3.0);
        CHECK(fast.violations <= slow.violations);
    }
}

TEST_CASE("interpolation and coverage") {
    NoisePath p;
    p.grid = {1.0, 0.5, 2};
    p.values = {0.0, 1.0, 3.0};
    CHECK(p.at(1.25) == doctest::Approx(0.5));
    CHECK(p.at(1.75) == doctest::Approx(2.0));
    CHECK(p.at(2.0) == 3.0);
    CHECK(p.covers(1.0, 2.0));
    CHECK_FALSE(p.covers(0.5, 2.0));
    CHECK_THROWS_AS(p.at(2.5), InvalidInput);
    const auto integral = cumulative_integral(p);
    CHECK(integral.back() == doctest::Approx(0.25 + 1.0));
}
