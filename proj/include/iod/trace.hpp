#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "iod/errors.hpp"
#include "iod/messages.hpp"

namespace iod {

// One trace line. Field order is fixed (tick, seq, kind, subject, payload)
// so identical runs serialize byte-identically.
struct TraceEvent {
  Tick tick = 0;
  std::uint64_t seq = 0;
  std::string kind;
  std::string subject;
  Json payload;

  Json to_json() const {
    Json j;
    j["tick"] = tick;
    j["seq"] = seq;
    j["kind"] = kind;
    j["subject"] = subject;
    j["payload"] = payload;
    return j;
  }
};

class Trace {
 public:
  void emit(Tick tick, std::string kind, std::string subject, Json payload) {
    events_.push_back({tick, next_seq_++, std::move(kind), std::move(subject), std::move(payload)});
  }

  const std::vector<TraceEvent>& events() const { return events_; }
  std::vector<TraceEvent> take() { return std::exchange(events_, {}); }

  void write(std::ostream& out) const {
    for (const auto& e : events_) out << e.to_json().dump() << '\n';
  }

  // FNV-1a over the serialized lines; cheap equality witness for determinism
  std::uint64_t digest() const {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& e : events_) {
      std::string line = e.to_json().dump();
      line.push_back('\n');
      for (unsigned char c : line) {
        h ^= c;
        h *= 1099511628211ull;
      }
    }
    return h;
  }

 private:
  std::vector<TraceEvent> events_;
  std::uint64_t next_seq_ = 0;
};

inline std::vector<TraceEvent> read_trace(std::istream& in) {
  std::vector<TraceEvent> out;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const std::exception& e) {
      raise(Errc::MalformedTrace, "line " + std::to_string(lineno) + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("tick") || !j.contains("seq") || !j.contains("kind") ||
        !j.contains("subject") || !j.contains("payload"))
      raise(Errc::MalformedTrace, "line " + std::to_string(lineno) + ": missing trace fields");
    TraceEvent e;
    e.tick = j["tick"].get<Tick>();
    e.seq = j["seq"].get<std::uint64_t>();
    e.kind = j["kind"].get<std::string>();
    e.subject = j["subject"].get<std::string>();
    e.payload = j["payload"];
    out.push_back(std::move(e));
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].seq <= out[i - 1].seq || out[i].tick < out[i - 1].tick)
      raise(Errc::MalformedTrace, "events out of order at seq " + std::to_string(out[i].seq));
  return out;
}

}  // namespace iod
