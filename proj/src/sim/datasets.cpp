#include "cinnamon/sim/datasets.hpp"

#include <fstream>
#include <string>

#include "cinnamon/csv.hpp"
#include "cinnamon/errors.hpp"

namespace cinnamon::sim {

using csv::format_number;
using csv::parse_number;

namespace {

std::vector<std::string> fields_of(const std::string& line, std::size_t expected, std::size_t line_no) {
  auto fields = csv::split(line);
  if (fields.size() != expected) {
    throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(expected) +
                     " fields, got " + std::to_string(fields.size()));
  }
  return fields;
}

template <typename Fn>
void for_each_row(std::istream& in, const char* header, std::size_t columns, Fn&& fn) {
  csv::expect_header(in, header);
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    fn(fields_of(line, columns, line_no), line_no);
  }
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

void write_rssi_csv(std::ostream& out, const std::vector<RssiSample>& samples) {
  out << kRssiHeader << '\n';
  for (const auto& s : samples) {
    out << format_number(s.t) << ',' << s.anchor_id << ',' << s.wearable_id << ','
        << format_number(s.rssi_dbm) << '\n';
  }
}

void write_imu_csv(std::ostream& out, const std::vector<ImuSample>& samples) {
  out << kImuHeader << '\n';
  for (const auto& s : samples) {
    out << format_number(s.t);
    for (double v : s.accel) out << ',' << format_number(v);
    for (double v : s.gyro) out << ',' << format_number(v);
    for (double v : s.orientation) out << ',' << format_number(v);
    out << ',' << (s.heart_rate_bpm ? format_number(*s.heart_rate_bpm) : "") << ',' << s.session_id
        << ',' << to_string(s.label) << '\n';
  }
}

void write_env_csv(std::ostream& out, const std::vector<EnvReading>& readings) {
  out << kEnvHeader << '\n';
  for (const auto& r : readings) {
    out << format_number(r.t) << ',' << r.sensor_id << ',' << to_string(r.parameter) << ','
        << format_number(r.value) << '\n';
  }
}

void write_track_csv(std::ostream& out, const GroundTruthTrack& track) {
  out << kTrackHeader << '\n';
  for (const auto& s : track.samples) {
    out << format_number(s.t) << ',' << format_number(s.position.x) << ','
        << format_number(s.position.y) << ',' << s.room_id << '\n';
  }
}

std::vector<RssiSample> read_rssi_csv(std::istream& in) {
  std::vector<RssiSample> out;
  for_each_row(in, kRssiHeader, 4, [&](const std::vector<std::string>& f, std::size_t n) {
    out.push_back({parse_number(f[0], n), f[1], f[2], parse_number(f[3], n)});
  });
  return out;
}

std::vector<ImuSample> read_imu_csv(std::istream& in) {
  std::vector<ImuSample> out;
  for_each_row(in, kImuHeader, 13, [&](const std::vector<std::string>& f, std::size_t n) {
    ImuSample s;
    s.t = parse_number(f[0], n);
    for (int i = 0; i < 3; ++i) {
      s.accel[i] = parse_number(f[1 + i], n);
      s.gyro[i] = parse_number(f[4 + i], n);
      s.orientation[i] = parse_number(f[7 + i], n);
    }
    if (!f[10].empty()) s.heart_rate_bpm = parse_number(f[10], n);
    s.session_id = f[11];
    try {
      s.label = parse_activity(f[12]);
    } catch (const ValidationError& e) {
      throw ParseError("line " + std::to_string(n) + ": " + e.what());
    }
    out.push_back(std::move(s));
  });
  return out;
}

std::vector<EnvReading> read_env_csv(std::istream& in) {
  std::vector<EnvReading> out;
  for_each_row(in, kEnvHeader, 4, [&](const std::vector<std::string>& f, std::size_t n) {
    Parameter p;
    try {
      p = parse_parameter(f[2]);
    } catch (const ValidationError& e) {
      throw ParseError("line " + std::to_string(n) + ": " + e.what());
    }
    out.push_back({parse_number(f[0], n), f[1], p, parse_number(f[3], n)});
  });
  return out;
}

GroundTruthTrack read_track_csv(std::istream& in) {
  GroundTruthTrack track;
  for_each_row(in, kTrackHeader, 4, [&](const std::vector<std::string>& f, std::size_t n) {
    track.samples.push_back({parse_number(f[0], n), {parse_number(f[1], n), parse_number(f[2], n)}, f[3]});
  });
  return track;
}

std::vector<RssiSample> read_rssi_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_rssi_csv(in);
}

std::vector<ImuSample> read_imu_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_imu_csv(in);
}

std::vector<EnvReading> read_env_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_env_csv(in);
}

GroundTruthTrack read_track_csv(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_track_csv(in);
}

}  // namespace cinnamon::sim
