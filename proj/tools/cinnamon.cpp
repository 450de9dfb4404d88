#include <CLI11.hpp>
#include <httplib.h>

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <thread>

#include "cinnamon/api/http_server.hpp"
#include "cinnamon/api/service.hpp"
#include "cinnamon/assessment/assessment.hpp"
#include "cinnamon/csv.hpp"
#include "cinnamon/errors.hpp"
#include "cinnamon/har/evaluation.hpp"
#include "cinnamon/har/features.hpp"
#include "cinnamon/har/model.hpp"
#include "cinnamon/layout_json.hpp"
#include "cinnamon/pipeline.hpp"
#include "cinnamon/sim/datasets.hpp"
#include "cinnamon/sim/scenario.hpp"
#include "cinnamon/sim/simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cinnamon;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

void write_json(const fs::path& path, const json& doc) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

sim::Scenario scenario_from(const std::string& path) {
  return path.empty() ? sim::default_scenario() : sim::load_scenario(path);
}

/// A directory holding `name`, or the file itself.
fs::path dataset_file(const fs::path& dataset, const char* name) {
  return fs::is_directory(dataset) ? dataset / name : dataset;
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

std::string summary(const localization::LocalizationReport& r) {
  return "estimates=" + std::to_string(r.n_estimates) + " positioned=" + std::to_string(r.n_positioned) +
         " room_accuracy=" + fixed(r.room_accuracy) + " mean_error_m=" + fixed(r.mean_position_error_m) +
         " median_error_m=" + fixed(r.median_position_error_m);
}

std::string score_text(const assessment::PssuqScore& s) {
  if (!s.mean) return "NA";
  std::ostringstream out;
  out << *s.mean;
  return out.str();
}

har::Dataset har_dataset(const std::string& dataset, std::uint64_t seed) {
  if (dataset.empty()) return har::build_dataset(sim::emit_imu(sim::default_scenario().activities, seed));
  return har::build_dataset(sim::read_imu_csv(dataset_file(dataset, "imu.csv")));
}

void write_estimates(const fs::path& path, const std::vector<localization::PositionEstimate>& estimates) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << "t,wearable_id,x,y,room_id,residual_rms_m,anchors_used\n";
  for (const auto& e : estimates) {
    out << csv::format_number(e.t) << ',' << e.wearable_id << ',';
    if (e.xy) {
      out << csv::format_number(e.xy->x) << ',' << csv::format_number(e.xy->y);
    } else {
      out << ',';
    }
    out << ',' << e.room_id.value_or("") << ',' << csv::format_number(e.residual_rms_m) << ',' << e.anchors_used
        << '\n';
  }
}

/// Layout and channel from a layout JSON or a whole scenario JSON.
std::pair<RoomLayout, ChannelModel> layout_from(const fs::path& path) {
  const auto doc = read_json(path);
  if (doc.is_object() && doc.contains("layout")) {
    const auto scenario = sim::parse_scenario(doc);
    return {scenario.layout, scenario.channel};
  }
  RoomLayout layout;
  try {
    layout = doc.get<RoomLayout>();
  } catch (const json::exception& e) {
    throw ParseError("layout '" + path.string() + "': " + e.what());
  }
  layout.validate();
  return {layout, ChannelModel{}};
}

api::ApiRequest request(const std::string& method, const std::string& path, const json& body = nullptr,
                        const std::string& token = {}) {
  api::ApiRequest r;
  r.method = method;
  r.path = path;
  if (!body.is_null()) r.body = body.dump();
  if (!token.empty()) r.headers["authorization"] = "Bearer " + token;
  return r;
}

json expect(api::ApiService& service, const api::ApiRequest& r) {
  const auto response = service.handle(r);
  if (response.status >= 400) {
    throw std::runtime_error(r.method + " " + r.path + " -> " + std::to_string(response.status) + " " +
                             response.body.dump());
  }
  return response.body;
}

/// Replays the simulated recording through the API as a patient would.
void feed_api(api::ApiService& service, const pipeline::SimulationOutput& sim) {
  const std::string p = api::kApiPrefix;
  expect(service, request("POST", p + "/auth/register",
                          {{"name", "Admin"}, {"email", "admin@demo.local"}, {"role", "admin"}, {"credential", "admin-pass"}}));
  const auto patient = expect(service, request("POST", p + "/auth/register",
                                               {{"name", "Patient"},
                                                {"email", "patient@demo.local"},
                                                {"role", "patient"},
                                                {"credential", "patient-pass"}}));
  const auto patient_id = patient.at("user_id").get<std::string>();
  const auto token = expect(service, request("POST", p + "/auth/login",
                                             {{"email", "admin@demo.local"}, {"credential", "admin-pass"}}))
                         .at("token")
                         .get<std::string>();

  const auto& layout = sim.scenario.layout;
  json sensors = json::array();
  sensors.push_back({{"sensor_id", sim.scenario.trajectory.wearable_id},
                     {"kind", "wearable"},
                     {"location_id", "home"},
                     {"room_id", layout.rooms.front().id},
                     {"position", layout.rooms.front().polygon.front()}});
  for (const auto& s : sim.scenario.environment.sensors) {
    if (std::any_of(sensors.begin(), sensors.end(), [&](const json& j) { return j.at("sensor_id") == s.sensor_id; })) {
      continue;
    }
    sensors.push_back({{"sensor_id", s.sensor_id},
                       {"kind", "environment"},
                       {"location_id", "home"},
                       {"room_id", layout.rooms.front().id},
                       {"position", polygon_centroid(layout.rooms.front().polygon)}});
  }
  expect(service, request("POST", p + "/projects",
                          {{"patient_user_id", patient_id},
                           {"locations", json::array({{{"location_id", "home"}, {"name", "Home"}, {"layout", layout}}})},
                           {"sensors", sensors}},
                          token));
  expect(service, request("PUT", p + "/patients/" + patient_id + "/thresholds",
                          {{"rules", json::array({{{"parameter", "co2_ppm"}, {"max", 1000}, {"severity", "warning"}}})}},
                          token));

  json readings = json::array();
  for (const auto& r : sim.env) readings.push_back(telemonitor::to_json(r));
  std::size_t alerts = 0;
  if (!readings.empty()) {
    alerts = expect(service, request("POST", p + "/ingest/env", {{"readings", readings}}, token)).at("changes").size();
  }

  json batch = json::array();
  for (std::size_t i = 0; i < sim.rssi.size(); ++i) {
    const auto& s = sim.rssi[i];
    batch.push_back({{"t", s.t}, {"anchor_id", s.anchor_id}, {"wearable_id", s.wearable_id}, {"rssi_dbm", s.rssi_dbm}});
    if (batch.size() == 30 || i + 1 == sim.rssi.size()) {
      expect(service, request("POST", p + "/ingest/rssi", {{"samples", batch}}, token));
      batch = json::array();
    }
  }

  json imu = json::array();
  const auto first_session = sim.imu.empty() ? std::string() : sim.imu.front().session_id;
  for (const auto& s : sim.imu) {
    if (s.session_id != first_session || imu.size() == 30) break;
    imu.push_back({{"t", s.t},
                   {"accel", s.accel},
                   {"gyro", s.gyro},
                   {"orientation", s.orientation},
                   {"heart_rate_bpm", s.heart_rate_bpm ? json(*s.heart_rate_bpm) : json(nullptr)}});
  }
  if (!imu.empty()) {
    expect(service, request("POST", p + "/ingest/imu",
                            {{"wearable_id", sim.scenario.trajectory.wearable_id}, {"samples", imu}}, token));
  }

  std::cout << "api: ingested " << readings.size() << " env readings (" << alerts << " alert changes), "
            << sim.rssi.size() << " rssi samples, " << imu.size() << " imu samples\n";
  const auto position = service.handle(request("GET", p + "/patients/" + patient_id + "/position", nullptr, token));
  if (position.status == 200) std::cout << "api: latest position " << position.body.dump() << '\n';
  const auto activity = service.handle(request("GET", p + "/patients/" + patient_id + "/activity", nullptr, token));
  if (activity.status == 200) {
    std::cout << "api: latest activity " << activity.body.at("label").get<std::string>() << " (first session "
              << first_session << ")\n";
  }
}

void wait_for(double seconds) {
  const auto until = std::chrono::steady_clock::now() + std::chrono::duration<double>(seconds);
  while (!g_stop && (seconds < 0 || std::chrono::steady_clock::now() < until)) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cinnamon: indoor localization, activity recognition and telemonitoring"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir, dataset, layout_path, filter = "kalman", model = "gb", folds = "session";
  std::string answers, config_path, report;
  std::uint64_t seed = 42;
  std::optional<std::uint64_t> seed_override;
  double window_s = localization::kDefaultWindowS;
  std::optional<int> port;
  double serve_seconds = 0.0;

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic recording from a scenario");
  simulate->add_option("--scenario", scenario_path, "scenario JSON (default: built-in three-room home)")
      ->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed_override, "RNG seed (default: the scenario's seed)");
  simulate->add_option("--out", out_dir, "output directory")->required();

  auto* localize = app.add_subcommand("localize", "Localize a recorded RSSI stream");
  localize->add_option("--dataset", dataset, "rssi.csv or a simulate output directory")
      ->required()
      ->check(CLI::ExistingPath);
  localize->add_option("--layout", layout_path, "layout or scenario JSON (default: <dataset>/scenario.json)")
      ->check(CLI::ExistingFile);
  localize->add_option("--filter", filter, "RSSI denoising")->check(CLI::IsMember({"none", "kalman"}));
  localize->add_option("--window-s", window_s, "window length in seconds")->check(CLI::PositiveNumber);
  localize->add_option("--report", report, "write the evaluation report JSON here");
  localize->add_option("--out", out_dir, "write estimates.csv into this directory");

  auto* har_cmd = app.add_subcommand("har", "Human activity recognition");
  har_cmd->require_subcommand(1);
  const std::vector<std::string> kinds = {"lr", "dt", "rf", "gb", "knn", "svc", "gnb"};
  std::vector<std::string> kinds_all = kinds;
  kinds_all.push_back("all");

  auto* har_train = har_cmd->add_subcommand("train", "Train one classifier and save it as JSON");
  har_train->add_option("--dataset", dataset, "imu.csv or a simulate output directory (default: simulated)")
      ->check(CLI::ExistingPath);
  har_train->add_option("--model", model, "classifier")->check(CLI::IsMember(kinds));
  har_train->add_option("--seed", seed, "RNG seed");
  har_train->add_option("--out", out_dir, "output directory")->required();

  auto* har_eval = har_cmd->add_subcommand("eval", "Leave-one-session-out evaluation");
  har_eval->add_option("--dataset", dataset, "imu.csv or a simulate output directory (default: simulated)")
      ->check(CLI::ExistingPath);
  har_eval->add_option("--model", model, "classifier or all")->check(CLI::IsMember(kinds_all));
  har_eval->add_option("--folds", folds, "fold scheme")->check(CLI::IsMember({"session"}));
  har_eval->add_option("--seed", seed, "RNG seed");
  har_eval->add_option("--report", report, "write the metrics JSON here");

  auto* gfi = app.add_subcommand("gfi", "Groningen Frailty Indicator");
  gfi->require_subcommand(1);
  auto* gfi_score = gfi->add_subcommand("score", "Score a 15-item answer file");
  gfi_score->add_option("--answers", answers, "JSON array of 15 values in {0, 1}")->required()->check(CLI::ExistingFile);
  gfi_score->add_option("--report", report, "write the result JSON here");

  auto* pssuq = app.add_subcommand("pssuq", "Post-Study System Usability Questionnaire");
  pssuq->require_subcommand(1);
  auto* pssuq_score = pssuq->add_subcommand("score", "Score a 16-slot answer file");
  pssuq_score->add_option("--answers", answers, "JSON array of 16 values in 1..7 or null")
      ->required()
      ->check(CLI::ExistingFile);
  pssuq_score->add_option("--report", report, "write the result JSON here");

  auto* serve = app.add_subcommand("serve", "Run the HTTP API until interrupted");
  serve->add_option("--config", config_path, "service config JSON")->check(CLI::ExistingFile);
  serve->add_option("--port", port, "listen port (0 picks a free one)")->check(CLI::Range(0, 65535));

  auto* demo = app.add_subcommand("demo", "Simulate, localize, evaluate HAR and serve the API in one go");
  demo->add_option("--seed", seed, "RNG seed");
  demo->add_option("--out", out_dir, "keep recordings and reports in this directory");
  demo->add_option("--port", port, "listen port (default: a free one)")->check(CLI::Range(0, 65535));
  demo->add_option("--serve-seconds", serve_seconds, "keep serving this long after the health check (-1: forever)");

  if (argc > 1 && argv[1][0] != '-' && !app.get_subcommand_no_throw(argv[1])) {
    std::cerr << "error: unknown subcommand '" << argv[1] << "'\n\n" << app.help();
    return 2;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  try {
    if (simulate->parsed()) {
      const auto scenario = scenario_from(scenario_path);
      const auto output = pipeline::simulate(scenario, seed_override.value_or(scenario.seed));
      pipeline::write_simulation(output, out_dir);
      std::cout << "simulated seed=" << output.seed << " track=" << output.track.samples.size()
                << " rssi=" << output.rssi.size() << " imu=" << output.imu.size() << " env=" << output.env.size()
                << " -> " << out_dir << '\n';
      return 0;
    }

    if (localize->parsed()) {
      const fs::path rssi_path = dataset_file(dataset, "rssi.csv");
      fs::path layout_file = layout_path;
      if (layout_file.empty()) {
        if (!fs::is_directory(dataset)) throw ValidationError("--layout is required when --dataset is a file");
        layout_file = fs::path(dataset) / "scenario.json";
      }
      const auto [layout, channel] = layout_from(layout_file);
      std::optional<GroundTruthTrack> truth;
      if (fs::is_directory(dataset) && fs::exists(fs::path(dataset) / "track.csv")) {
        truth = sim::read_track_csv(fs::path(dataset) / "track.csv");
      }
      const auto run = pipeline::localize(sim::read_rssi_csv(rssi_path), layout, channel, filter == "kalman",
                                          window_s, truth ? &*truth : nullptr);
      if (!out_dir.empty()) write_estimates(fs::path(out_dir) / "estimates.csv", run.estimates);
      json doc = {{"filter", filter}, {"window_s", window_s}, {"estimates", run.estimates.size()}};
      if (run.report) {
        std::cout << "filter=" << filter << ' ' << summary(*run.report) << '\n';
        doc["report"] = run.report->to_json();
      } else {
        std::cout << "filter=" << filter << " estimates=" << run.estimates.size() << " (no track.csv, no accuracy)\n";
      }
      if (!report.empty()) write_json(report, doc);
      return 0;
    }

    if (har_train->parsed()) {
      const auto data = har_dataset(dataset, seed);
      const auto kind = har::parse_model_kind(model);
      const auto fitted = har::train(data, kind, {}, seed);
      const auto path = fs::path(out_dir) / ("model-" + model + ".json");
      write_json(path, fitted.to_json());
      std::cout << "trained " << har::to_string(kind) << " on " << data.size() << " windows -> " << path.string()
                << '\n';
      return 0;
    }

    if (har_eval->parsed()) {
      const auto data = har_dataset(dataset, seed);
      std::vector<har::ModelKind> selected;
      if (model == "all") {
        selected.assign(har::kAllModelKinds.begin(), har::kAllModelKinds.end());
      } else {
        selected.push_back(har::parse_model_kind(model));
      }
      const auto metrics = har::evaluate(data, selected, seed);
      std::cout << data.size() << " windows\n" << metrics.to_table();
      if (!report.empty()) write_json(report, metrics.to_json());
      return 0;
    }

    if (gfi_score->parsed()) {
      const auto result = assessment::score_gfi(assessment::gfi_from_json(read_json(answers)));
      std::cout << "total=" << result.total << " frail=" << (result.frail ? "true" : "false") << '\n';
      if (!report.empty()) write_json(report, assessment::to_json(result));
      return 0;
    }

    if (pssuq_score->parsed()) {
      const auto result = assessment::score_pssuq(assessment::pssuq_from_json(read_json(answers)));
      std::cout << "overall=" << score_text(result.overall) << " sysuse=" << score_text(result.sysuse)
                << " infoqual=" << score_text(result.infoqual) << " interqual=" << score_text(result.interqual)
                << '\n';
      if (!report.empty()) write_json(report, assessment::to_json(result));
      return 0;
    }

    if (serve->parsed()) {
      api::ServiceConfig config = config_path.empty() ? api::ServiceConfig{} : api::load_service_config(config_path);
      if (port) config.port = *port;
      api::ApiService service(config);
      api::HttpServer server(service);
      const int bound = server.start();
      std::cout << "listening on http://" << config.host << ':' << bound << api::kApiPrefix << std::endl;
      wait_for(-1);
      server.stop();
      std::cout << "stopped\n";
      return 0;
    }

    if (demo->parsed()) {
      const auto output = pipeline::simulate(sim::default_scenario(), seed);
      std::cout << "[simulate] seed=" << seed << " track=" << output.track.samples.size()
                << " rssi=" << output.rssi.size() << " imu=" << output.imu.size() << " env=" << output.env.size()
                << '\n';
      if (!out_dir.empty()) pipeline::write_simulation(output, out_dir);

      const auto& sc = output.scenario;
      const auto raw = pipeline::localize(output.rssi, sc.layout, sc.channel, false, window_s, &output.track);
      const auto filtered = pipeline::localize(output.rssi, sc.layout, sc.channel, true, window_s, &output.track);
      std::cout << "[localize] filter=none   " << summary(*raw.report) << '\n'
                << "[localize] filter=kalman " << summary(*filtered.report) << '\n';

      const auto data = har::build_dataset(output.imu);
      const std::vector<har::ModelKind> all(har::kAllModelKinds.begin(), har::kAllModelKinds.end());
      const auto metrics = har::evaluate(data, all, seed);
      std::cout << "[har] " << data.size() << " windows, leave-one-session-out\n" << metrics.to_table();

      if (!out_dir.empty()) {
        write_json(fs::path(out_dir) / "localization.json",
                   {{"none", raw.report->to_json()}, {"kalman", filtered.report->to_json()}});
        write_json(fs::path(out_dir) / "har_metrics.json", metrics.to_json());
      }

      api::ServiceConfig config;
      config.port = port.value_or(0);
      api::ApiService service(config);
      api::HttpServer server(service);
      const int bound = server.start();
      std::cout << "[serve] listening on http://" << config.host << ':' << bound << api::kApiPrefix << '\n';
      httplib::Client client(config.host, bound);
      const auto health = client.Get(std::string(api::kApiPrefix) + "/health");
      const bool ok = health && health->status == 200 && json::parse(health->body).value("status", "") == "ok";
      std::cout << "[serve] GET /api/v1/health -> " << (health ? std::to_string(health->status) : "no response") << ' '
                << (health ? health->body : "") << '\n';
      if (ok) feed_api(service, output);
      if (ok && serve_seconds != 0.0) wait_for(serve_seconds);
      server.stop();
      if (!ok) {
        std::cerr << "error: health check failed\n";
        return 1;
      }
      std::cout << "demo complete\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cerr << app.help();
  return 2;
}
