#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cinnamon/errors.hpp"
#include "cinnamon/har/evaluation.hpp"
#include "cinnamon/har/features.hpp"
#include "cinnamon/har/logistic.hpp"
#include "cinnamon/har/model.hpp"
#include "cinnamon/sim/scenario.hpp"
#include "cinnamon/sim/simulator.hpp"

using namespace cinnamon;
using namespace cinnamon::har;

namespace {

std::vector<ImuSample> session(ActivityLabel label, double seconds, const std::string& id, double noise = 1.0,
                               std::uint64_t seed = 1) {
  sim::ActivityScript script;
  script.sessions = {{label, seconds, id}};
  script.model.noise_scale = noise;
  return sim::emit_imu(script, seed);
}

std::size_t feature_index(const std::string& name) {
  const auto& names = feature_names();
  return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
}

const Dataset& small_dataset() {
  static const Dataset data = build_dataset(sim::emit_imu(sim::recording_protocol(3, 30), 5));
  return data;
}

const Dataset& default_dataset() {
  static const Dataset data = build_dataset(sim::emit_imu(sim::default_scenario().activities, 42));
  return data;
}

FeatureVector point(std::vector<double> values, std::optional<ActivityLabel> label = std::nullopt) {
  FeatureVector fv;
  fv.values = std::move(values);
  fv.label = label;
  return fv;
}

/// Two Gaussian blobs one unit apart in every coordinate.
Dataset blobs(std::size_t per_class, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  Dataset data;
  for (std::size_t i = 0; i < per_class; ++i) {
    data.push_back(point({g(rng), g(rng), g(rng)}, ActivityLabel::Rest));
    data.push_back(point({1 + g(rng), 1 + g(rng), 1 + g(rng)}, ActivityLabel::FastWalk));
  }
  return data;
}

NamedTrainer constant_trainer(ActivityLabel label) {
  return {"constant", [label](const Dataset&, std::uint64_t) {
            return Predictor([label](const FeatureVector&) { return label; });
          }};
}

}  // namespace

TEST_CASE("window counts") {
  CHECK(make_windows(session(ActivityLabel::Rest, 60, "a")).size() == 39);
  CHECK(make_windows(session(ActivityLabel::Rest, 2, "a")).empty());
  CHECK(make_windows(session(ActivityLabel::Rest, 3, "a")).size() == 1);
  CHECK_THROWS_AS(make_windows(session(ActivityLabel::Rest, 6, "a"), 0.0), ValidationError);
  CHECK_THROWS_AS(make_windows(session(ActivityLabel::Rest, 6, "a"), 3.0, 1.0), ValidationError);
}

TEST_CASE("windows never span sessions or cadence breaks") {
  auto samples = session(ActivityLabel::Rest, 10, "a");
  auto second = session(ActivityLabel::Stairs, 10, "b");
  for (auto& s : second) s.t += 10.0;
  samples.insert(samples.end(), second.begin(), second.end());
  const auto windows = make_windows(samples);
  CHECK(windows.size() == 10);
  for (const auto& w : windows) {
    REQUIRE(w.samples.size() == 30);
    for (const auto& s : w.samples) CHECK(s.session_id == w.session_id);
  }

  auto gapped = session(ActivityLabel::Rest, 10, "a");
  for (std::size_t i = 50; i < gapped.size(); ++i) gapped[i].t += 5.0;
  for (const auto& w : make_windows(gapped)) {
    for (std::size_t i = 1; i < w.samples.size(); ++i) {
      CHECK(w.samples[i].t - w.samples[i - 1].t == doctest::Approx(0.1));
    }
  }
}

TEST_CASE("feature names are stable") {
  const auto& names = feature_names();
  REQUIRE(names.size() == kFeatureCount);
  CHECK(names.front() == "accel_x_mean");
  CHECK(names[23] == "gyro_z_max");
  CHECK(names[24] == "accel_mag_mean");
  CHECK(names[29] == "dominant_period_s");
  CHECK(names[31] == "pitch_range");
  CHECK(names.back() == "pitch_mean");
}

TEST_CASE("noise-free Rest window") {
  const auto windows = make_windows(session(ActivityLabel::Rest, 6, "r", 0.0));
  const auto fv = extract_features(windows.front());
  CHECK(fv.values[feature_index("accel_mag_mean")] == doctest::Approx(9.81));
  CHECK(fv.values[feature_index("accel_mag_std")] == doctest::Approx(0.0));
  CHECK(fv.values[feature_index("accel_z_zero_crossing_rate")] == 0.0);
  CHECK(fv.values[feature_index("dominant_period_s")] == 0.0);
  CHECK(fv.label == ActivityLabel::Rest);
  CHECK(fv.session_id == "r");
}

TEST_CASE("every window yields finite features") {
  for (const auto& fv : small_dataset()) {
    REQUIRE(fv.values.size() == kFeatureCount);
    for (double v : fv.values) CHECK(std::isfinite(v));
  }
}

TEST_CASE("FastWalk dominant period is near 1/2.2 s") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (const auto& w : make_windows(session(ActivityLabel::FastWalk, 30, "f", 1.0, seed))) {
      const double period = extract_features(w).values[feature_index("dominant_period_s")];
      CHECK(std::abs(period - 1.0 / 2.2) <= 0.2 / 2.2);
    }
  }
}

TEST_CASE("dominant period of a pure sinusoid") {
  std::vector<double> x;
  for (int i = 0; i < 60; ++i) x.push_back(std::sin(2 * M_PI * 1.25 * i / 10.0));
  CHECK(dominant_period_s(x) == doctest::Approx(0.8).epsilon(0.02));
  CHECK(dominant_period_s(std::vector<double>(30, 1.0)) == 0.0);
}

TEST_CASE("feature masks") {
  std::vector<bool> mask(kFeatureCount, false);
  mask[0] = mask[29] = true;
  const auto masked = apply_feature_mask(small_dataset(), mask);
  REQUIRE(masked.size() == small_dataset().size());
  CHECK(masked[3].values == std::vector<double>{small_dataset()[3].values[0], small_dataset()[3].values[29]});
  CHECK_THROWS_AS(apply_feature_mask(small_dataset(), std::vector<bool>(3, true)), ValidationError);
}

TEST_CASE("KNN with k = 1 returns the label of a training point") {
  const auto model = train(small_dataset(), ModelKind::KNN, {{"k", 1}});
  for (const auto& fv : small_dataset()) CHECK(model.predict(fv).label == *fv.label);
}

TEST_CASE("GNB separates unit-distance blobs") {
  const auto model = train(blobs(100, 0.1, 1), ModelKind::GNB);
  const auto test = blobs(200, 0.1, 2);
  for (const auto& fv : test) CHECK(model.predict(fv).label == *fv.label);
}

TEST_CASE("training is deterministic for every kind") {
  for (auto kind : kAllModelKinds) {
    CAPTURE(to_string(kind));
    const auto a = train(small_dataset(), kind, {}, 9).to_json().dump();
    const auto b = train(small_dataset(), kind, {}, 9).to_json().dump();
    CHECK(a == b);
  }
}

TEST_CASE("training preconditions") {
  Dataset one_class = small_dataset();
  std::erase_if(one_class, [](const FeatureVector& fv) { return fv.label != ActivityLabel::Rest; });
  CHECK_THROWS_AS(train(one_class, ModelKind::LR), ValidationError);
  CHECK_THROWS_AS(train(Dataset{}, ModelKind::LR), ValidationError);
  CHECK_THROWS_AS(train(small_dataset(), ModelKind::KNN, {{"neighbours", 3}}), ValidationError);

  Dataset unlabeled = small_dataset();
  unlabeled[4].label.reset();
  CHECK_THROWS_AS(train(unlabeled, ModelKind::GNB), ValidationError);

  Dataset ragged = small_dataset();
  ragged[2].values.pop_back();
  CHECK_THROWS_AS(train(ragged, ModelKind::GNB), ValidationError);

  const auto model = train(small_dataset(), ModelKind::GNB);
  CHECK_THROWS_AS(model.predict(std::vector<double>(5, 0.0)), ValidationError);
}

TEST_CASE("scores and labels agree for every kind") {
  for (auto kind : kAllModelKinds) {
    CAPTURE(to_string(kind));
    const auto model = train(small_dataset(), kind, {}, 3);
    for (const auto& fv : small_dataset()) {
      const auto p = model.predict(fv);
      const auto best = std::max_element(p.scores.begin(), p.scores.end());
      CHECK(index_of(p.label) == static_cast<std::size_t>(best - p.scores.begin()));
      if (is_probabilistic(kind)) {
        CHECK(std::accumulate(p.scores.begin(), p.scores.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("ties go to the earlier label") {
  Dataset data = {point({0.0}, ActivityLabel::Stairs), point({0.0}, ActivityLabel::SlowWalk),
                  point({1.0}, ActivityLabel::Stairs), point({1.0}, ActivityLabel::SlowWalk)};
  const auto model = train(data, ModelKind::KNN, {{"k", 2}});
  CHECK(model.predict(std::vector<double>{0.0}).label == ActivityLabel::SlowWalk);
}

TEST_CASE("GB recognises a held-out FastWalk window") {
  Dataset train_split, held_out;
  for (const auto& fv : default_dataset()) {
    (fv.session_id == "FastWalk-5" ? held_out : train_split).push_back(fv);
  }
  REQUIRE_FALSE(held_out.empty());
  const auto model = train(train_split, ModelKind::GB, {}, 42);
  CHECK(model.predict(held_out[held_out.size() / 2]).label == ActivityLabel::FastWalk);
}

TEST_CASE("GB training loss never increases") {
  const auto model = train(default_dataset(), ModelKind::GB, {}, 42);
  const auto& history = std::get<BoostParams>(model.params()).loss_history;
  REQUIRE(history.size() == 100);
  for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= history[i - 1] + 1e-12);
}

TEST_CASE("softmax gradient matches central differences") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> lab(0, 3);
  for (int instance = 0; instance < 50; ++instance) {
    const std::size_t d = 2 + instance % 4, n = 5 + instance % 7;
    std::vector<std::vector<double>> x(n, std::vector<double>(d));
    std::vector<ActivityLabel> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& v : x[i]) v = g(rng);
      y[i] = static_cast<ActivityLabel>(lab(rng));
    }
    WeightMatrix w(kActivityCount, std::vector<double>(d + 1));
    for (auto& row : w) {
      for (auto& v : row) v = 0.5 * g(rng);
    }
    const double l2 = instance % 2 ? 0.1 : 0.0;
    const auto analytic = softmax_gradient(w, x, y, l2);
    const double h = 1e-5;
    for (std::size_t k = 0; k < kActivityCount; ++k) {
      for (std::size_t j = 0; j <= d; ++j) {
        auto plus = w, minus = w;
        plus[k][j] += h;
        minus[k][j] -= h;
        const double numeric = (softmax_loss(plus, x, y, l2) - softmax_loss(minus, x, y, l2)) / (2 * h);
        const double scale = std::max({std::abs(numeric), std::abs(analytic[k][j]), 1e-3});
        CHECK(std::abs(numeric - analytic[k][j]) / scale < 1e-5);
      }
    }
  }
}

TEST_CASE("standardization uses only the training split") {
  Dataset train_split, test_split;
  for (const auto& fv : small_dataset()) {
    (fv.session_id.ends_with("-3") ? test_split : train_split).push_back(fv);
  }
  for (auto& fv : test_split) {
    for (auto& v : fv.values) v += 100.0;
  }
  Dataset combined = train_split;
  combined.insert(combined.end(), test_split.begin(), test_split.end());

  const auto model = train(train_split, ModelKind::LR, {{"epochs", 5}});
  const auto& stats = model.standardizer();
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    double sum = 0.0;
    for (const auto& fv : train_split) sum += fv.values[j];
    const double mean = sum / train_split.size();
    double ss = 0.0;
    for (const auto& fv : train_split) ss += (fv.values[j] - mean) * (fv.values[j] - mean);
    const double sd = std::sqrt(ss / train_split.size());
    CHECK(stats.mean[j] == doctest::Approx(mean).epsilon(1e-12));
    CHECK(stats.std[j] == doctest::Approx(sd < 1e-12 ? 1.0 : sd).epsilon(1e-12));
  }
  CHECK(Standardizer::fit(combined).mean[0] != doctest::Approx(stats.mean[0]));
}

TEST_CASE("serialized models predict identically") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 1.0);
  const auto stats = Standardizer::fit(small_dataset());
  std::vector<std::vector<double>> probes(1000, std::vector<double>(kFeatureCount));
  for (auto& p : probes) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) p[j] = stats.mean[j] + 2.0 * stats.std[j] * g(rng);
  }
  for (auto kind : kAllModelKinds) {
    CAPTURE(to_string(kind));
    const auto model = train(small_dataset(), kind, {}, 4);
    const auto restored = Model::from_json(nlohmann::json::parse(model.to_json().dump()));
    CHECK(restored.kind() == kind);
    CHECK(restored.hyperparameters() == model.hyperparameters());
    for (const auto& p : probes) {
      const auto a = model.predict(p);
      const auto b = restored.predict(p);
      CHECK(a.label == b.label);
      CHECK(a.scores == b.scores);
    }
  }
  CHECK_THROWS(Model::from_json(nlohmann::json{{"kind", "XGB"}}));
}

TEST_CASE("model kind names") {
  for (auto kind : kAllModelKinds) CHECK(parse_model_kind(to_string(kind)) == kind);
  CHECK(parse_model_kind("gb") == ModelKind::GB);
  CHECK_THROWS_AS(parse_model_kind("xgb"), ValidationError);
  CHECK_FALSE(is_probabilistic(ModelKind::SVC));
}

TEST_CASE("evaluation harness bounds") {
  const NamedTrainer oracle{"oracle", [](const Dataset&, std::uint64_t) {
                              return Predictor([](const FeatureVector& fv) { return *fv.label; });
                            }};
  const auto report = evaluate(small_dataset(), {oracle, constant_trainer(ActivityLabel::Stairs)}, 0);
  CHECK(report.folds == 3);
  CHECK(report.scheme == "leave-one-session-out");
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].model == "oracle");
  CHECK(report.rows[0].accuracy == 1.0);
  CHECK(report.rows[0].macro_f1 == 1.0);
  CHECK(report.rows[1].accuracy == doctest::Approx(0.25));
}

TEST_CASE("confusion rows match the test counts") {
  const auto report = evaluate(small_dataset(), {ModelKind::GNB, ModelKind::DT}, 1);
  std::array<std::size_t, kActivityCount> counts{};
  for (const auto& fv : small_dataset()) ++counts[index_of(*fv.label)];
  for (const auto& row : report.rows) {
    std::size_t trace = 0, total = 0;
    for (std::size_t i = 0; i < kActivityCount; ++i) {
      const auto sum = std::accumulate(row.confusion[i].begin(), row.confusion[i].end(), std::size_t{0});
      CHECK(sum == counts[i]);
      trace += row.confusion[i][i];
      total += sum;
    }
    CHECK(row.accuracy == doctest::Approx(static_cast<double>(trace) / total));
    for (double m : {row.accuracy, row.macro_precision, row.macro_recall, row.macro_f1}) {
      CHECK(m >= 0.0);
      CHECK(m <= 1.0);
    }
  }
  CHECK(report.rows[0].macro_f1 >= report.rows[1].macro_f1);
  CHECK(report.find("GNB") != nullptr);
  CHECK(report.find("SVC") == nullptr);
  CHECK(report.to_json().at("models").size() == 2);
  CHECK(report.to_table().find("GNB") != std::string::npos);
}

TEST_CASE("evaluation needs two sessions per class") {
  Dataset data = small_dataset();
  std::erase_if(data, [](const FeatureVector& fv) {
    return fv.label == ActivityLabel::Rest && !fv.session_id.ends_with("-1");
  });
  CHECK_THROWS_AS(evaluate(data, {ModelKind::GNB}, 0), ValidationError);
}

TEST_CASE("metrics from a hand-made confusion matrix") {
  ConfusionMatrix m{};
  m[0][0] = 8;
  m[0][1] = 2;
  m[1][1] = 5;
  const auto row = metrics_from_confusion("x", m);
  CHECK(row.accuracy == doctest::Approx(13.0 / 15.0));
  CHECK(row.macro_precision == doctest::Approx((1.0 + 5.0 / 7.0) / 2.0));
  CHECK(row.macro_recall == doctest::Approx((0.8 + 1.0) / 2.0));
  const double f0 = 2 * 1.0 * 0.8 / 1.8, f1 = 2 * (5.0 / 7.0) / (5.0 / 7.0 + 1.0);
  CHECK(row.macro_f1 == doctest::Approx((f0 + f1) / 2.0));
  CHECK_THROWS_AS(metrics_from_confusion("empty", ConfusionMatrix{}), std::logic_error);
}

TEST_CASE("every kind beats chance on a small recording") {
  const std::vector<ModelKind> kinds(kAllModelKinds.begin(), kAllModelKinds.end());
  const auto report = evaluate(small_dataset(), kinds, 2);
  REQUIRE(report.rows.size() == 7);
  for (const auto& row : report.rows) {
    CAPTURE(row.model);
    CHECK(row.accuracy > 0.25);
  }
}
