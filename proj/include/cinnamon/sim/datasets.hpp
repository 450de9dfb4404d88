#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <vector>

#include "cinnamon/readings.hpp"

namespace cinnamon::sim {

inline constexpr const char* kRssiHeader = "t,anchor_id,wearable_id,rssi_dbm";
inline constexpr const char* kImuHeader = "t,ax,ay,az,gx,gy,gz,roll,pitch,yaw,hr,session_id,label";
inline constexpr const char* kEnvHeader = "t,sensor_id,parameter,value";
inline constexpr const char* kTrackHeader = "t,x,y,room_id";

void write_rssi_csv(std::ostream& out, const std::vector<RssiSample>& samples);
void write_imu_csv(std::ostream& out, const std::vector<ImuSample>& samples);
void write_env_csv(std::ostream& out, const std::vector<EnvReading>& readings);
void write_track_csv(std::ostream& out, const GroundTruthTrack& track);

std::vector<RssiSample> read_rssi_csv(std::istream& in);
std::vector<ImuSample> read_imu_csv(std::istream& in);
std::vector<EnvReading> read_env_csv(std::istream& in);
GroundTruthTrack read_track_csv(std::istream& in);

/// File wrappers; throw ParseError when the file cannot be opened.
std::vector<RssiSample> read_rssi_csv(const std::filesystem::path& path);
std::vector<ImuSample> read_imu_csv(const std::filesystem::path& path);
std::vector<EnvReading> read_env_csv(const std::filesystem::path& path);
GroundTruthTrack read_track_csv(const std::filesystem::path& path);

}  // namespace cinnamon::sim
