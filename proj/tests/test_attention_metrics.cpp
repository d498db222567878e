#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "gazekit/attention_metrics.hpp"
#include "gazekit/session_ingest.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace gazekit;
using namespace gazekit::testgen;

namespace {

AoiConfig single_aoi(double x, double y, double w, double h,
                     AoiRole role = AoiRole::Target) {
    AoiConfig config;
    config.aois.push_back({"a", x, y, w, h, role});
    return config;
}

struct Analyzed {
    SessionLog session;
    std::vector<SampleLabel> labels;
    std::vector<Fixation> fixations;
    std::vector<StimulusEpisode> episodes;
};

Analyzed analyze(SessionLog session, const AoiConfig& aois, double timeout_ms = 3000) {
    Analyzed a;
    session.events = derive_disappearances(session.events, timeout_ms, session.end_ms());
    a.labels = label_samples(session, aois);
    a.fixations = detect_fixations(session.samples);
    a.episodes = build_episodes(session.events, aois, session.end_ms());
    a.session = std::move(session);
    return a;
}

}  // namespace

TEST_CASE("dwell conservation: all samples inside one AoI") {
    auto aois = single_aoi(0, 0, 400, 400);
    std::vector<GazeSample> samples;
    for (int i = 0; i < 100; ++i) samples.push_back(sample(i * 10.0, 200, 200));
    auto a = analyze(make_session(samples), aois);
    auto report = dwell_analysis(a.session, a.labels);
    CHECK(report.aoi_dwell_ms["a"] == report.total_ms);
    CHECK(report.non_aoi_dwell_ms == 0);
    CHECK(report.invalid_ms == 0);
}

TEST_CASE("dwell: half the session in the left half") {
    std::vector<GazeSample> samples;
    for (int i = 0; i < 100; ++i) samples.push_back(sample(i * 10.0, 100, 500));
    for (int i = 100; i < 200; ++i) samples.push_back(sample(i * 10.0, 1500, 500));
    auto a = analyze(make_session(samples), {});
    auto report = dwell_analysis(a.session, a.labels);
    CHECK(report.left_fraction == doctest::Approx(0.5).epsilon(0.01));
    CHECK(report.right_fraction == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("dwell: left dominance is marked") {
    std::vector<GazeSample> samples;
    for (int i = 0; i < 150; ++i) samples.push_back(sample(i * 10.0, 100, 500));
    for (int i = 150; i < 200; ++i) samples.push_back(sample(i * 10.0, 1500, 500));
    auto a = analyze(make_session(samples), {});
    auto report = dwell_analysis(a.session, a.labels);
    CHECK(report.left_dominant);
    CHECK(report.left_fraction > report.right_fraction);
}

TEST_CASE("dwell conservation holds on fuzzed sessions") {
    std::mt19937_64 rng(11);
    auto aois = single_aoi(200, 200, 500, 400);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = analyze(make_session(random_gaze_trace(rng, 1 + trial % 300)), aois);
        auto report = dwell_analysis(a.session, a.labels);
        double aoi_sum = 0;
        for (const auto& [id, ms] : report.aoi_dwell_ms) aoi_sum += ms;
        CHECK(aoi_sum + report.non_aoi_dwell_ms + report.invalid_ms ==
              doctest::Approx(report.total_ms).epsilon(1e-12));
        double q_sum = 0;
        for (const auto& [q, ms] : report.quadrant_dwell_ms) q_sum += ms;
        CHECK(q_sum == doctest::Approx(report.total_ms - report.invalid_ms).epsilon(1e-12));
    }
}

TEST_CASE("sustained attention: gaze moving into the AoI right after appearance") {
    auto aois = single_aoi(600, 200, 300, 300);
    std::vector<GazeSample> samples;
    for (int i = 0; i < 100; ++i) samples.push_back(sample(i * 10.0, 100, 800));
    for (int i = 100; i < 200; ++i) samples.push_back(sample(i * 10.0, 700, 300));
    auto a = analyze(make_session(samples, {appear(1003, "m", 750, 350)}), aois);
    auto result = sustained_attention(a.episodes, a.fixations);
    REQUIRE(result.score.has_value());
    CHECK(*result.score == 1.0);
    REQUIRE(result.episodes.size() == 1);
    CHECK(result.episodes[0].attended);
    REQUIRE(result.episodes[0].time_to_first_fixation_ms.has_value());
    CHECK(*result.episodes[0].time_to_first_fixation_ms < 200);
    CHECK(result.episodes[0].dwell_on_target_ms > 0);
}

TEST_CASE("sustained attention: zero appearance events gives absent score") {
    auto a = analyze(make_session({sample(0, 100, 100), sample(500, 100, 100)}), {});
    auto result = sustained_attention(a.episodes, a.fixations);
    CHECK_FALSE(result.score.has_value());
    CHECK(result.episodes.empty());
}

TEST_CASE("sustained attention: 2 of 3 events attended gives 2/3") {
    std::vector<GazeSample> samples;
    // three stimulus slots; gaze parks on the first two objects, never the third
    for (int i = 0; i < 100; ++i) samples.push_back(sample(i * 10.0, 300, 300));
    for (int i = 100; i < 200; ++i) samples.push_back(sample(i * 10.0, 900, 300));
    for (int i = 200; i < 300; ++i) samples.push_back(sample(i * 10.0, 100, 900));
    auto events = {appear(103, "o1", 300, 300), appear(1103, "o2", 900, 300),
                   appear(2103, "o3", 1500, 300)};
    auto a = analyze(make_session(samples, events), {}, 800);
    REQUIRE(a.episodes.size() == 3);
    auto result = sustained_attention(a.episodes, a.fixations);
    REQUIRE(result.score.has_value());
    CHECK(*result.score == doctest::Approx(2.0 / 3.0));
    CHECK(*result.score == oracle::sustained_attention(a.episodes, a.fixations));
}

TEST_CASE("stimuli expectancy: saturation, floor and 1-of-4") {
    std::vector<GazeSample> samples;
    for (int i = 0; i < 400; ++i) samples.push_back(sample(i * 10.0, 300, 300));
    SUBCASE("gaze parked in the AoI before every appearance") {
        auto a = analyze(make_session(samples, {appear(1003, "m", 300, 300),
                                                appear(2003, "m2", 310, 310)}),
                         {}, 500);
        CHECK(*stimuli_expectancy(a.episodes, a.session.samples) == 1.0);
    }
    SUBCASE("gaze never near the AoIs") {
        auto a = analyze(make_session(samples, {appear(1003, "m", 1500, 900)}), {}, 500);
        CHECK(*stimuli_expectancy(a.episodes, a.session.samples) == 0.0);
    }
    SUBCASE("1 of 4 anticipated") {
        auto events = {appear(503, "o1", 300, 300), appear(1003, "o2", 1500, 900),
                       appear(2003, "o3", 1500, 100), appear(3003, "o4", 900, 900)};
        auto a = analyze(make_session(samples, events), {}, 400);
        auto rate = stimuli_expectancy(a.episodes, a.session.samples);
        CHECK(*rate == 0.25);
        CHECK(*rate == *oracle::expectancy(a.episodes, a.session.samples, 500));
    }
}

TEST_CASE("expectancy: zero events gives absent rate") {
    auto a = analyze(make_session({sample(0, 1, 1)}), {});
    CHECK_FALSE(stimuli_expectancy(a.episodes, a.session.samples).has_value());
}

TEST_CASE("loss of focus: continuous in-AoI gaze gives zero episodes") {
    auto aois = single_aoi(0, 0, 400, 400);
    std::vector<GazeSample> samples;
    for (int i = 0; i < 500; ++i) samples.push_back(sample(i * 10.0, 200, 200));
    auto a = analyze(make_session(samples, {appear(3, "m", 100, 100)}), aois, 100000);
    CHECK(loss_of_focus(a.session, a.labels, a.episodes).empty());
}

TEST_CASE("loss of focus: 5 s off-AoI mid-stimulus gives one 5000 ms episode") {
    auto aois = single_aoi(0, 0, 400, 400);
    std::vector<GazeSample> samples;
    for (int i = 0; i < 200; ++i) samples.push_back(sample(i * 10.0, 200, 200));
    for (int i = 200; i < 700; ++i) samples.push_back(sample(i * 10.0, 1500, 900));
    for (int i = 700; i < 800; ++i) samples.push_back(sample(i * 10.0, 200, 200));
    auto a = analyze(make_session(samples, {appear(3, "m", 100, 100)}), aois, 100000);
    auto episodes = loss_of_focus(a.session, a.labels, a.episodes);
    REQUIRE(episodes.size() == 1);
    CHECK(episodes[0].start_ms == 2000);
    CHECK(episodes[0].duration_ms == 5000);
}

TEST_CASE("loss of focus: sub-threshold gap is not an episode") {
    auto aois = single_aoi(0, 0, 400, 400);
    std::vector<GazeSample> samples;
    for (int i = 0; i < 200; ++i) samples.push_back(sample(i * 10.0, 200, 200));
    for (int i = 200; i < 350; ++i) samples.push_back(sample(i * 10.0, 1500, 900));
    for (int i = 350; i < 500; ++i) samples.push_back(sample(i * 10.0, 200, 200));
    auto a = analyze(make_session(samples, {appear(3, "m", 100, 100)}), aois, 100000);
    CHECK(loss_of_focus(a.session, a.labels, a.episodes, 2000).empty());
}

TEST_CASE("inhibitory control: absent, ceiling and 3-of-5") {
    AoiConfig aois;
    for (int i = 0; i < 5; ++i)
        aois.aois.push_back({"d" + std::to_string(i), 100.0 + i * 350, 100, 150, 150,
                             AoiRole::Distractor});
    std::vector<StimulusEvent> events;
    for (int i = 0; i < 5; ++i)
        events.push_back(appear(1003 + i * 2000, "d" + std::to_string(i), 150.0 + i * 350, 150));

    SUBCASE("no distractor events -> absent") {
        auto a = analyze(make_session({sample(0, 1, 1), sample(1000, 1, 1)}), aois);
        CHECK_FALSE(inhibitory_control(a.episodes, a.fixations).has_value());
    }
    SUBCASE("never looks -> 1.0") {
        std::vector<GazeSample> samples;
        for (int i = 0; i < 1200; ++i) samples.push_back(sample(i * 10.0, 1800, 1000));
        auto a = analyze(make_session(samples, events), aois, 1500);
        CHECK(*inhibitory_control(a.episodes, a.fixations) == 1.0);
    }
    SUBCASE("looks at 2 of 5 within the window -> 0.6") {
        std::vector<GazeSample> samples;
        for (int i = 0; i < 1200; ++i) {
            double t = i * 10.0;
            double x = 1800, y = 1000;
            if (t >= 1100 && t <= 1500) { x = 175; y = 175; }    // distractor 0, inside window
            if (t >= 3200 && t <= 3600) { x = 525; y = 175; }    // distractor 1, inside window
            if (t >= 7000 && t <= 7400) { x = 875; y = 175; }    // distractor 2, after window
            samples.push_back(sample(t, x, y));
        }
        auto a = analyze(make_session(samples, events), aois, 1500);
        auto score = inhibitory_control(a.episodes, a.fixations, 1000);
        REQUIRE(score.has_value());
        CHECK(*score == doctest::Approx(0.6));
        CHECK(*score == *oracle::inhibitory_control(a.episodes, a.fixations, 1000));
    }
}

TEST_CASE("metric oracle equivalence and window monotonicity on fuzzed sessions") {
    std::mt19937_64 rng(13);
    auto aois = single_aoi(400, 300, 600, 400);
    std::uniform_int_distribution<int> len(50, 300), n_events(0, 6);
    for (int trial = 0; trial < 60; ++trial) {
        auto samples = random_gaze_trace(rng, len(rng));
        auto events = random_events(rng, n_events(rng), samples.back().timestamp_ms);
        auto a = analyze(make_session(samples, events), aois, 2000);

        auto sustained = sustained_attention(a.episodes, a.fixations);
        CHECK(sustained.score == oracle::sustained_attention(a.episodes, a.fixations));

        auto rate = stimuli_expectancy(a.episodes, a.session.samples, 500);
        CHECK(rate == oracle::expectancy(a.episodes, a.session.samples, 500));

        auto inhib = inhibitory_control(a.episodes, a.fixations, 1000);
        CHECK(inhib == oracle::inhibitory_control(a.episodes, a.fixations, 1000));

        auto losses = loss_of_focus(a.session, a.labels, a.episodes, 500);
        auto want = oracle::loss_of_focus(a.session, aois, a.episodes, 500);
        REQUIRE(losses.size() == want.size());
        for (std::size_t i = 0; i < losses.size(); ++i) {
            CHECK(losses[i].start_ms == want[i].start_ms);
            CHECK(losses[i].duration_ms == want[i].duration_ms);
        }

        // monotonicity: a wider expectancy window can only raise the rate,
        // a wider response window can only lower the inhibition score
        auto wide_rate = stimuli_expectancy(a.episodes, a.session.samples, 1500);
        if (rate) CHECK(*wide_rate >= *rate);
        auto wide_inhib = inhibitory_control(a.episodes, a.fixations, 3000);
        if (inhib) CHECK(*wide_inhib <= *inhib);

        // all defined rates stay in [0,1]
        for (auto v : {sustained.score, rate, inhib})
            if (v) {
                CHECK(*v >= 0.0);
                CHECK(*v <= 1.0);
            }
    }
}

TEST_CASE("episode building: visibility pairing and fallback region") {
    auto aois = single_aoi(0, 0, 200, 200, AoiRole::Distractor);
    std::vector<StimulusEvent> events = {appear(103, "in-aoi", 100, 100),
                                         appear(503, "free", 900, 700)};
    auto completed = derive_disappearances(events, 1000, 5000);
    auto episodes = build_episodes(completed, aois, 5000);
    REQUIRE(episodes.size() == 2);
    CHECK(episodes[0].region.aoi_id == "a");
    CHECK(episodes[0].role == StimulusRole::Distractor);
    CHECK(episodes[0].disappear_ms == 1103);
    CHECK(episodes[1].region.aoi_id.empty());
    CHECK(episodes[1].role == StimulusRole::Target);
    CHECK(episodes[1].region.width == 160);
    CHECK(episodes[1].region.contains(900, 700));
}
