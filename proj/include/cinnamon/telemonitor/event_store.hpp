#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace cinnamon::telemonitor {

/// One committed state change. `type` is "<family>.<verb>", e.g. "reading.ingested".
struct Event {
  std::uint64_t seq = 0;
  std::string type;
  nlohmann::json data;
};

std::string event_family(const std::string& type);

class EventStore {
 public:
  virtual ~EventStore() = default;

  /// All committed events in seq order.
  virtual std::vector<Event> load() = 0;

  /// Assigns consecutive seq numbers to the batch and commits it.
  virtual void append(std::vector<Event>& batch) = 0;

  virtual void flush() = 0;
};

class MemoryEventStore : public EventStore {
 public:
  std::vector<Event> load() override;
  void append(std::vector<Event>& batch) override;
  void flush() override {}

 private:
  std::mutex mutex_;
  std::vector<Event> events_;
};

/// One "<family>.jsonl" file per entity family inside `dir`, sharing a global
/// seq counter. The directory is locked for the lifetime of the object; a
/// second opener gets ConflictError.
class JsonlEventStore : public EventStore {
 public:
  explicit JsonlEventStore(std::filesystem::path dir);
  ~JsonlEventStore() override;
  JsonlEventStore(const JsonlEventStore&) = delete;
  JsonlEventStore& operator=(const JsonlEventStore&) = delete;

  std::vector<Event> load() override;
  void append(std::vector<Event>& batch) override;
  void flush() override;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::ofstream& stream_for(const std::string& family);

  std::filesystem::path dir_;
  int lock_fd_ = -1;
  std::mutex mutex_;
  std::uint64_t last_seq_ = 0;
  bool loaded_ = false;
  std::map<std::string, std::ofstream> streams_;
};

}  // namespace cinnamon::telemonitor
