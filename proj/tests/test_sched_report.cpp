#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "gaurast/pipeline_sched.hpp"
#include "gaurast/report.hpp"
#include "test_util.hpp"

using namespace gaurast;
using namespace gaurast::testutil;

TEST_CASE("steady-state FPS is set by the slower stage") {
    // Stage 3 dominates: 25 ms -> 40 FPS.
    CHECK(steady_state_fps({0.010, 0.025}) == doctest::Approx(40.0).epsilon(1e-12));
    // Stages 1-2 dominate: 20 ms -> 50 FPS.
    CHECK(steady_state_fps({0.020, 0.004}) == doctest::Approx(50.0).epsilon(1e-12));
    // Balanced stages.
    CHECK(steady_state_fps({0.0125, 0.0125}) == doctest::Approx(80.0).epsilon(1e-12));
    CHECK_THROWS_AS(steady_state_fps({0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("pipeline makespan hand cases") {
    // t12=10ms, t3=25ms, 100 frames: 10 + 100*25 = 2510 ms.
    CHECK(makespan({0.010, 0.025}, 100) == doctest::Approx(2.510).epsilon(1e-12));
    // Slow front end: 100*20 + 4 = 2004 ms.
    CHECK(makespan({0.020, 0.004}, 100) == doctest::Approx(2.004).epsilon(1e-12));
    // Single frame is just the sum.
    CHECK(makespan({0.010, 0.025}, 1) == doctest::Approx(0.035).epsilon(1e-12));
    CHECK_THROWS_AS(makespan({0.010, 0.025}, 0), std::invalid_argument);
}

TEST_CASE("makespan matches a discrete-event pipeline for random stage times") {
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> t(1e-4, 5e-2);
    for (int i = 0; i < 50; ++i) {
        double t12 = t(rng), t3 = t(rng);
        uint64_t n = 1 + uint64_t(i) * 7 % 200;
        CAPTURE(t12);
        CAPTURE(t3);
        CAPTURE(n);
        CHECK(makespan({t12, t3}, n) ==
              doctest::Approx(des_pipeline_oracle(t12, t3, n)).epsilon(1e-12));
    }
}

TEST_CASE("amortized frame time converges to the steady-state period") {
    StageTimes st{0.010, 0.025};
    double period = 1.0 / steady_state_fps(st);
    for (uint64_t n : {10u, 100u, 1000u}) {
        double avg = makespan(st, n) / double(n);
        // Startup transient shrinks as 1/n; at n=1000 it is within 1%.
        CHECK(avg >= period);
        if (n >= 1000) CHECK((avg - period) / period < 0.01);
    }
    // DES agrees at the convergence point too.
    double des_avg = des_pipeline_oracle(st.t12_seconds, st.t3_seconds, 1000) / 1000.0;
    CHECK((des_avg - 1.0 / steady_state_fps(st)) / (1.0 / steady_state_fps(st)) < 0.01);
}

TEST_CASE("stage-3 speedup saturates at the sequential bound") {
    // With t12 fixed, an infinitely fast stage 3 cannot beat 1/t12.
    double t12 = 0.010, base_t3 = 0.090;
    double seq = t12 + base_t3;
    double prev_speedup = 0.0;
    for (double t3 : {0.090, 0.045, 0.010, 0.001, 1e-6}) {
        double speedup = seq / (t12 + t3);
        CHECK(speedup >= prev_speedup);  // faster stage 3 never hurts
        CHECK(speedup <= seq / t12);
        prev_speedup = speedup;
    }
    auto rows = end_to_end_report({{"x", 1e-6, base_t3}}, t12);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].end_to_end_speedup <= seq / t12);
    CHECK(rows[0].end_to_end_speedup == doctest::Approx(seq / (t12 + 1e-6)).epsilon(1e-9));
}

TEST_CASE("end_to_end_report fields") {
    auto rows = end_to_end_report({{"garden", 0.0096, 0.232}}, 0.0104);
    REQUIRE(rows.size() == 1);
    const auto& r = rows[0];
    CHECK(r.scene == "garden");
    CHECK(r.fps == doctest::Approx(1.0 / 0.0104).epsilon(1e-9));  // stage 1-2 bound
    CHECK(r.t12_pct + r.t3_pct == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(r.stage3_speedup == doctest::Approx(0.232 / 0.0096).epsilon(1e-9));
    CHECK(r.end_to_end_speedup ==
          doctest::Approx((0.0104 + 0.232) / (0.0104 + 0.0096)).epsilon(1e-9));
    CHECK(end_to_end_report({}, 0.01).empty());

    auto cells = end_to_end_csv_row(r);
    REQUIRE(cells.size() == kEndToEndCsvHeader.size());
    CHECK(cells[0] == "garden");
}

TEST_CASE("embedded runtime table reproduces the published speedups") {
    auto report = speedup_table(reference_runtime_table());
    REQUIRE(report.rows.size() == 7);

    struct Expect {
        const char* scene;
        double speedup;
    };
    const Expect expected[] = {{"Bicycle", 21.4}, {"Stump", 24.8}, {"Garden", 24.2},
                               {"Room", 22.5},    {"Counter", 22.0}, {"Kitchen", 22.0},
                               {"Bonsai", 26.7}};
    for (size_t i = 0; i < 7; ++i) {
        CHECK(report.rows[i].scene == expected[i].scene);
        CHECK(std::round(report.rows[i].speedup * 10.0) / 10.0 ==
              doctest::Approx(expected[i].speedup));
    }
    CHECK(std::round(report.arithmetic_mean * 10.0) / 10.0 == doctest::Approx(23.4));
    CHECK(report.geometric_mean > 0.0);
    CHECK(report.geometric_mean <= report.arithmetic_mean);
}

TEST_CASE("speedup_table error handling and text rendering") {
    CHECK_THROWS_AS(speedup_table({}), std::invalid_argument);
    CHECK_THROWS_AS(speedup_table({{"bad", 100.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(speedup_table({{"bad", -1.0, 5.0}}), std::invalid_argument);

    auto report = speedup_table({{"toy", 100.0, 4.0}});
    std::string text = render_speedup_text(report);
    CHECK(text.find("toy") != std::string::npos);
    CHECK(text.find("25.0x") != std::string::npos);

    auto rows = speedup_csv_rows(report);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][0] == "toy");
    CHECK(std::stod(rows[0][3]) == doctest::Approx(25.0));
    CHECK(kSpeedupCsvHeader ==
          std::vector<std::string>{"scene", "baseline_ms", "gaurast_ms", "speedup"});
}

TEST_CASE("compare_runs joins on scene and flags missing keys") {
    CsvTable run;
    run.header = {"scene", "mode", "cycles", "runtime_ms", "energy_mj", "utilization"};
    run.rows = {{"garden", "dense", "1000", "10", "17", "0.9"},
                {"extra", "dense", "1000", "5", "8.5", "0.9"}};
    CsvTable baseline;
    baseline.header = {"scene", "mode", "cycles", "runtime_ms", "energy_mj", "utilization"};
    baseline.rows = {{"garden", "dense", "240000", "240", "510", "0.9"},
                     {"bonsai", "dense", "150000", "150", "300", "0.9"}};

    auto rows = compare_runs(run, baseline);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].scene == "garden");
    CHECK(rows[0].speedup == doctest::Approx(24.0));
    CHECK(rows[0].energy_ratio == doctest::Approx(30.0));
    CHECK(rows[0].fps == doctest::Approx(100.0));
    CHECK(!rows[0].missing_in_run);
    CHECK(!rows[0].missing_in_baseline);

    CHECK(rows[1].scene == "extra");
    CHECK(rows[1].missing_in_baseline);
    CHECK(rows[2].scene == "bonsai");
    CHECK(rows[2].missing_in_run);

    // A schema mismatch names the missing column.
    CsvTable bad;
    bad.header = {"scene", "runtime_ms"};
    bad.rows = {{"garden", "10"}};
    CHECK_THROWS_WITH_AS(compare_runs(bad, baseline),
                         doctest::Contains("energy_mj"), std::invalid_argument);
}
