// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "daywatch/error.hpp"
#include "daywatch/synthetic.hpp"
#include "daywatch/trajectory_predict.hpp"

namespace dw = daywatch;

namespace {

const dw::Track kRep{"rep", {{0, 0, 0}, {1, 100, 0}}};

// Two points at height sqrt(d) above the representative: distance d.
dw::Track member_at(double d, const std::string& id = "m") {
    const double s = std::sqrt(d);
    return {id, {{0, 0, s}, {1, 100, s}}};
}

dw::ClusterStat fitted(std::initializer_list<double> distances) {
    std::vector<dw::Track> members;
    for (double d : distances) members.push_back(member_at(d));
    return dw::fit_cluster_stats(kRep, members);
}

double oracle_distance(const dw::Track& p, const dw::Track& q) {
    double sum = 0.0;
    for (const auto& a : p.points) {
        double best = INFINITY;
        for (const auto& b : q.points) best = std::min(best, std::pow(a.x - b.x, 2) + std::pow(a.y - b.y, 2));
        sum += best;
    }
    return sum / static_cast<double>(p.points.size());
}

dw::Dataset consecutive_days(int n) {
    dw::Dataset ds;
    ds.scene = dw::SceneConfig::make(320, 240);
    for (int i = 0; i < n; ++i) {
        dw::DayRecord d;
        d.date = dw::Date::from_ymd(2012, 1, 2).plus_days(i);
        ds.days.push_back(d);
    }
    return ds;
}

}  // namespace

TEST(TrackDistance, HandExample) {
    const dw::Track p{"p", {{0, 0, 1}, {1, 1, 1}}};
    const dw::Track q{"q", {{0, 0, 0}}};
    EXPECT_DOUBLE_EQ(dw::track_distance(p, q), 1.5);
    EXPECT_DOUBLE_EQ(dw::track_distance(q, p), 1.0);
    EXPECT_EQ(dw::track_distance(p, p), 0.0);
    EXPECT_THROW(dw::track_distance(p, dw::Track{"e", {}}), dw::InvalidInput);
}

TEST(TrackDistance, MatchesDoubleLoopProperty) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0, 300);
    for (int i = 0; i < 100; ++i) {
        dw::Track p{"p", {}}, q{"q", {}};
        for (std::uint64_t k = 0; k < 1 + rng() % 25; ++k) p.points.push_back({k, u(rng), u(rng)});
        for (std::uint64_t k = 0; k < 1 + rng() % 25; ++k) q.points.push_back({k, u(rng), u(rng)});
        const double want = oracle_distance(p, q);
        EXPECT_NEAR(dw::track_distance(p, q), want, 1e-12 * std::max(1.0, want));
    }
}

TEST(Likelihood, HandExamples) {
    dw::ClusterStat c;
    c.representative = kRep;
    c.eta = 1e-3;
    EXPECT_DOUBLE_EQ(dw::likelihood(member_at(1000), c), std::exp(-1.0));
    EXPECT_DOUBLE_EQ(dw::likelihood(kRep, c), 1.0);
}

TEST(FitClusterStats, EqualDistances) {
    const auto c = fitted({1000, 1000, 1000});
    EXPECT_NEAR(c.eta, 1e-3, 1e-15);
    EXPECT_NEAR(c.gamma_threshold, std::exp(-1.0), 1e-12);
    EXPECT_EQ(c.training_count, 3u);
}

TEST(FitClusterStats, SpreadDistances) {
    const auto c = fitted({500, 1500});
    EXPECT_NEAR(c.eta, 1e-3, 1e-15);
    EXPECT_NEAR(c.gamma_threshold, std::exp(-1.5), 1e-12);
}

TEST(FitClusterStats, CoincidentMembersHitTheCap) {
    const auto c = fitted({0, 0});
    EXPECT_EQ(c.eta, dw::kEtaCap);
    EXPECT_EQ(c.gamma_threshold, 1.0);
    EXPECT_THROW(dw::fit_cluster_stats(kRep, std::span<const dw::Track>()), dw::InvalidInput);
}

TEST(FitClusterStats, MeanDistanceIsReciprocalRateProperty) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(1, 2500);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<dw::Track> members;
        double sum = 0.0;
        for (std::size_t i = 0; i < 1 + rng() % 12; ++i) {
            const double d = u(rng);
            sum += d;
            members.push_back(member_at(d));
        }
        const auto c = dw::fit_cluster_stats(kRep, members);
        EXPECT_NEAR(c.eta * sum / static_cast<double>(members.size()), 1.0, 1e-9);
        for (const auto& m : members) EXPECT_GE(dw::likelihood(m, c), c.gamma_threshold * (1 - 1e-12));
    }
}

TEST(ClassifyTrack, BothConditionsAreRequired) {
    const std::vector<dw::ClusterStat> model{fitted({100, 100})};
    EXPECT_FALSE(dw::classify_track(member_at(50), model).anomalous);
    // Unlikely but within the distance guard.
    const auto guarded = dw::classify_track(member_at(900), model);
    EXPECT_LT(guarded.likelihood, model[0].gamma_threshold);
    EXPECT_FALSE(guarded.anomalous);
    EXPECT_TRUE(dw::classify_track(member_at(1100), model).anomalous);
    EXPECT_FALSE(dw::classify_track(member_at(1100), model, 2000.0).anomalous);
}

TEST(ClassifyTrack, PicksTheMostLikelyCluster) {
    auto far = fitted({100});
    for (auto& p : far.representative.points) p.y += 500;
    const std::vector<dw::ClusterStat> model{far, fitted({100})};
    const auto v = dw::classify_track(member_at(10), model);
    EXPECT_EQ(v.best_cluster, 1u);
    EXPECT_NEAR(v.distance, 10.0, 1e-9);
}

TEST(PredictDay, RatioReachesThresholdInclusively) {
    const std::vector<dw::ClusterStat> model{fitted({100, 100})};
    dw::DayRecord day;
    for (int i = 0; i < 99; ++i) day.tracks.push_back(member_at(10, "n" + std::to_string(i)));
    day.tracks.push_back(member_at(5000, "odd"));
    std::vector<dw::TrackVerdict> verdicts;
    const auto p = dw::predict_day(day, model, 1000.0, 0.01, &verdicts);
    EXPECT_EQ(p.total_tracks, 100u);
    EXPECT_EQ(p.anomalous_tracks, 1u);
    EXPECT_DOUBLE_EQ(p.psi, 0.01);
    EXPECT_EQ(p.predicted, 1);
    EXPECT_EQ(verdicts.size(), 100u);
    EXPECT_EQ(dw::predict_day(day, model, 1000.0, 0.02).predicted, 0);
}

TEST(PredictDay, EmptyDayAndEmptyModel) {
    const std::vector<dw::ClusterStat> model{fitted({100})};
    EXPECT_THROW(dw::predict_day(dw::DayRecord{}, model), dw::UndecidableError);
    dw::DayRecord day;
    day.tracks.push_back(kRep);
    EXPECT_THROW(dw::predict_day(day, {}), dw::InvalidInput);
}

TEST(DayDecision, MonotoneInLambdaProperty) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 1000; ++i) {
        const double psi = u(rng), a = u(rng), b = u(rng);
        const double lo = std::min(a, b), hi = std::max(a, b);
        if (dw::day_decision(psi, hi)) EXPECT_TRUE(dw::day_decision(psi, lo));
    }
    EXPECT_TRUE(dw::day_decision(0.01, 0.01));
}

TEST(ClassifyTrack, MonotoneInDeltaProperty) {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0, 4000);
    const std::vector<dw::ClusterStat> model{fitted({100, 300})};
    dw::DayRecord day;
    for (int i = 0; i < 200; ++i) day.tracks.push_back(member_at(u(rng), std::to_string(i)));
    std::size_t prev = day.tracks.size() + 1;
    for (double delta = 0; delta <= 5000; delta += 250) {
        const auto n = dw::predict_day(day, model, delta).anomalous_tracks;
        EXPECT_LE(n, prev);
        prev = n;
    }
}

TEST(Windows, SameWeekdayHistory) {
    auto ds = consecutive_days(35);
    auto w = dw::schedule_windows(ds);
    ASSERT_EQ(w.size(), 14u);
    EXPECT_EQ(w[0].test_date, ds.days[21].date);
    EXPECT_EQ(w[0].training_dates,
              (std::vector<dw::Date>{ds.days[0].date, ds.days[7].date, ds.days[14].date}));
    EXPECT_EQ(w.back().test_date, ds.days[34].date);

    // Four Mondays give one window, five give two.
    dw::Dataset mondays;
    mondays.scene = ds.scene;
    for (int i = 0; i < 5; ++i) mondays.days.push_back(ds.days[static_cast<std::size_t>(7 * i)]);
    EXPECT_EQ(dw::schedule_windows(mondays).size(), 2u);
    mondays.days.pop_back();
    EXPECT_EQ(dw::schedule_windows(mondays).size(), 1u);
}

TEST(Windows, GapSuppressesInsteadOfReachingBack) {
    auto ds = consecutive_days(35);
    ds.days.erase(ds.days.begin() + 14);
    const auto w = dw::schedule_windows(ds);
    EXPECT_EQ(w.size(), 12u);
    for (const auto& x : w) EXPECT_NE(x.test_date.weekday(), ds.days[0].date.plus_days(14).weekday());
    EXPECT_THROW(dw::schedule_windows(ds, 28, 0), dw::ConfigError);
    EXPECT_THROW(dw::schedule_windows(ds, 30, 7), dw::ConfigError);
}

TEST(TrajectoryPipeline, PlantedDiversionIsFlagged) {
    const auto ds = dw::generate_synthetic_dataset(dw::two_lane_spec(22, {21}), 17);
    const auto report = dw::run_trajectory_pipeline(ds, {});
    ASSERT_EQ(report.rows.size(), 1u);
    const auto& row = report.rows[0];
    EXPECT_EQ(row.prediction.date, ds.days[21].date);
    EXPECT_EQ(row.label, 1);
    EXPECT_EQ(row.prediction.predicted, 1);
    EXPECT_GE(row.prediction.anomalous_tracks, 10u);
}

TEST(TrajectoryPipeline, CsvHeaders) {
    const auto ds = dw::generate_synthetic_dataset(dw::two_lane_spec(22), 3);
    const auto report = dw::run_trajectory_pipeline(ds, {}, true);
    const auto csv = dw::trajectory_report_csv(report);
    EXPECT_EQ(csv.rfind("date,weekday,n_total,n_ano,psi,predicted,label\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
    const auto tracks = dw::trajectory_tracks_csv(report);
    EXPECT_EQ(tracks.rfind("date,track_id,cluster,distance,likelihood,anomalous\n", 0), 0u);
    EXPECT_EQ(static_cast<std::size_t>(std::count(tracks.begin(), tracks.end(), '\n')),
              1 + ds.days[21].tracks.size());
}
