#include "cinnamon/telemonitor/event_store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "cinnamon/errors.hpp"

namespace cinnamon::telemonitor {

using nlohmann::json;

std::string event_family(const std::string& type) {
  const auto dot = type.find('.');
  if (dot == 0 || dot == std::string::npos) throw ValidationError("event type '" + type + "' has no family");
  return type.substr(0, dot);
}

std::vector<Event> MemoryEventStore::load() {
  std::lock_guard lock(mutex_);
  return events_;
}

void MemoryEventStore::append(std::vector<Event>& batch) {
  std::lock_guard lock(mutex_);
  for (auto& e : batch) {
    event_family(e.type);
    e.seq = events_.size() + 1;
    events_.push_back(e);
  }
}

JsonlEventStore::JsonlEventStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw std::runtime_error("cannot create data directory '" + dir_.string() + "': " + ec.message());
  const auto lock_path = dir_ / ".lock";
  lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (lock_fd_ < 0) {
    throw std::runtime_error("cannot open '" + lock_path.string() + "': " + std::strerror(errno));
  }
  if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(lock_fd_);
    lock_fd_ = -1;
    throw ConflictError("data directory '" + dir_.string() + "' is locked by another process");
  }
}

JsonlEventStore::~JsonlEventStore() {
  try {
    flush();
  } catch (...) {
  }
  streams_.clear();
  if (lock_fd_ >= 0) {
    ::flock(lock_fd_, LOCK_UN);
    ::close(lock_fd_);
  }
}

std::vector<Event> JsonlEventStore::load() {
  std::lock_guard lock(mutex_);
  std::vector<Event> events;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".jsonl") continue;
    const auto family = entry.path().stem().string();
    std::ifstream in(entry.path());
    std::string line;
    std::size_t line_no = 0;
    std::uint64_t previous = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto where = entry.path().filename().string() + ":" + std::to_string(line_no);
      Event e;
      try {
        const auto j = json::parse(line);
        e.seq = j.at("seq").get<std::uint64_t>();
        e.type = j.at("type").get<std::string>();
        e.data = j.at("data");
      } catch (const json::exception& ex) {
        throw ParseError(where + ": " + ex.what());
      }
      if (event_family(e.type) != family) throw ParseError(where + ": event '" + e.type + "' in wrong file");
      if (e.seq <= previous) throw ParseError(where + ": seq not increasing");
      previous = e.seq;
      events.push_back(std::move(e));
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.seq < b.seq; });
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].seq == events[i - 1].seq) throw ParseError("duplicate seq " + std::to_string(events[i].seq));
  }
  last_seq_ = std::max(last_seq_, events.empty() ? std::uint64_t{0} : events.back().seq);
  loaded_ = true;
  return events;
}

std::ofstream& JsonlEventStore::stream_for(const std::string& family) {
  auto it = streams_.find(family);
  if (it == streams_.end()) {
    const auto path = dir_ / (family + ".jsonl");
    it = streams_.emplace(family, std::ofstream(path, std::ios::app)).first;
    if (!it->second) throw std::runtime_error("cannot open '" + path.string() + "' for append");
  }
  return it->second;
}

void JsonlEventStore::append(std::vector<Event>& batch) {
  if (!loaded_) load();
  std::lock_guard lock(mutex_);
  for (auto& e : batch) {
    auto& out = stream_for(event_family(e.type));
    e.seq = ++last_seq_;
    out << json{{"seq", e.seq}, {"type", e.type}, {"data", e.data}}.dump() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("write to event log failed");
  }
}

void JsonlEventStore::flush() {
  std::lock_guard lock(mutex_);
  for (auto& [family, out] : streams_) out.flush();
}

}  // namespace cinnamon::telemonitor
