#include <doctest.h>

#include <cmath>

#include "facepipe/cadence.hpp"
#include "facepipe/error.hpp"

using namespace facepipe;

TEST_CASE("cycle 0 runs every task") {
    const auto s = tasks_for(CadencePolicy{}, 0);
    CHECK(s.age);
    CHECK(s.gender);
    CHECK(s.expression);
    CHECK(s.count() == 3);
}

TEST_CASE("cycle 1 under defaults runs expression only") {
    const auto s = tasks_for(CadencePolicy{}, 1);
    CHECK(!s.age);
    CHECK(!s.gender);
    CHECK(s.expression);
}

TEST_CASE("cycle 4 under defaults runs everything again") {
    const auto s = tasks_for(CadencePolicy{}, 4);
    CHECK(s.age);
    CHECK(s.gender);
    CHECK(s.expression);
}

TEST_CASE("tasks_for validates inputs") {
    CHECK_THROWS_AS(tasks_for(CadencePolicy{}, -1), InvalidInput);
    CHECK_THROWS_AS(tasks_for(CadencePolicy{0, 4, 4}, 0), InvalidInput);
}

TEST_CASE("expected cost: all tasks every cycle is the full 600 ms") {
    CHECK(expected_cost_ms(CadencePolicy{1, 1, 1}, 200, 200, 200) == doctest::Approx(600.0));
}

TEST_CASE("expected cost: age/gender every 4th cycle halves the mean to 300 ms") {
    CHECK(expected_cost_ms(CadencePolicy{1, 4, 4}, 200, 200, 200) == doctest::Approx(300.0));
}

TEST_CASE("expected cost: rare age/gender approaches the expression cost") {
    CHECK(expected_cost_ms(CadencePolicy{1, 100, 100}, 200, 200, 200) ==
          doctest::Approx(204.0));
}

TEST_CASE("simulated mean cost converges to expected_cost") {
    const CadencePolicy policies[] = {{1, 1, 1}, {1, 4, 4}, {1, 100, 100}, {2, 3, 5}};
    for (const auto& policy : policies) {
        auto simulated_mean = [&](int cycles) {
            double total = 0.0;
            for (int c = 0; c < cycles; ++c) {
                const auto s = tasks_for(policy, c);
                total += (s.age ? 200.0 : 0.0) + (s.gender ? 200.0 : 0.0) +
                         (s.expression ? 200.0 : 0.0);
            }
            return total / cycles;
        };
        const double expected = expected_cost_ms(policy, 200, 200, 200);
        // Exact when the horizon is a multiple of every period (9900 is a
        // multiple of lcm(4), lcm(100) and lcm(2,3,5)).
        CHECK(simulated_mean(9900) == doctest::Approx(expected).epsilon(1e-12));
        // Otherwise off by at most (sum of latencies) / M.
        CHECK(std::abs(simulated_mean(10'000) - expected) <= 600.0 / 10'000 + 1e-12);
    }
}

TEST_CASE("tasks_for is periodic with the lcm of the cadences") {
    const CadencePolicy policy{2, 3, 4};
    const int lcm = 12;
    for (int c = 0; c < 100; ++c) {
        const auto a = tasks_for(policy, c);
        const auto b = tasks_for(policy, c + lcm);
        CHECK(a.age == b.age);
        CHECK(a.gender == b.gender);
        CHECK(a.expression == b.expression);
    }
}

TEST_CASE("expression runs at least as often as age and gender by default") {
    const CadencePolicy policy{};
    int age_runs = 0, gender_runs = 0, expr_runs = 0;
    for (int c = 0; c < 1000; ++c) {
        const auto s = tasks_for(policy, c);
        age_runs += s.age;
        gender_runs += s.gender;
        expr_runs += s.expression;
        if (s.age || s.gender)
            CHECK(s.expression); // never age/gender without expression
    }
    CHECK(expr_runs >= age_runs);
    CHECK(expr_runs >= gender_runs);
}
