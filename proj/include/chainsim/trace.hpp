#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "chainsim/chain.hpp"
#include "chainsim/scheduler.hpp"

namespace chainsim {

inline constexpr int kTraceVersion = 1;

// One simulated round: the chain after the round plus what happened in it.
struct TraceRecord {
  std::uint64_t round{0};
  bool gathered{false};
  std::vector<GridPoint> positions;  // chain order
  struct Token {
    std::size_t owner{0};  // chain index
    int dir{0};
    int phase{0};  // RunPhase as int
    int kind{0};   // CoastKind as int
    std::uint64_t age{0};
    bool operator==(const Token&) const = default;
  };
  std::vector<Token> tokens;
  std::vector<std::uint64_t> removed;
  struct Started {
    std::uint64_t run{0};
    std::uint64_t robot{0};
    int dir{0};
    bool dual{false};
    bool operator==(const Started&) const = default;
  };
  std::vector<Started> started;
  struct Ended {
    std::uint64_t run{0};
    std::uint64_t robot{0};
    int cause{0};
    bool violation{false};
    bool operator==(const Ended&) const = default;
  };
  std::vector<Ended> ended;

  bool operator==(const TraceRecord&) const = default;
};

struct Trace {
  std::size_t initial_robots{0};
  std::vector<TraceRecord> records;

  bool operator==(const Trace&) const = default;
};

inline TraceRecord make_trace_record(const ClosedChain& after, const RoundEvents& ev) {
  TraceRecord rec;
  rec.round = ev.round;
  rec.gathered = ev.gathered;
  rec.positions.reserve(after.size());
  for (std::size_t i = 0; i < after.size(); ++i) {
    rec.positions.push_back(after.robots[i].pos);
    for (const auto& run : after.robots[i].runs)
      rec.tokens.push_back({i, run.dir, static_cast<int>(run.phase),
                            static_cast<int>(run.coast_kind),
                            static_cast<std::uint64_t>(run.age)});
  }
  rec.removed = ev.removed_robots;
  for (const auto& s : ev.started) rec.started.push_back({s.run_id, s.robot_id, s.dir, s.dual});
  for (const auto& e : ev.ended)
    rec.ended.push_back({e.run_id, e.robot_id, static_cast<int>(e.cause), e.violation});
  return rec;
}

inline void write_trace(const Trace& trace, std::ostream& out) {
  out << "cgtrace " << kTraceVersion << "\n";
  out << "n " << trace.initial_robots << "\n";
  for (const auto& r : trace.records) {
    out << "r " << r.round << ' ' << (r.gathered ? 1 : 0);
    out << " p " << r.positions.size();
    for (const auto& p : r.positions) out << ' ' << p.x << ' ' << p.y;
    out << " t " << r.tokens.size();
    for (const auto& t : r.tokens)
      out << ' ' << t.owner << ' ' << t.dir << ' ' << t.phase << ' ' << t.kind << ' ' << t.age;
    out << " f " << r.removed.size();
    for (const auto id : r.removed) out << ' ' << id;
    out << " s " << r.started.size();
    for (const auto& s : r.started)
      out << ' ' << s.run << ' ' << s.robot << ' ' << s.dir << ' ' << (s.dual ? 1 : 0);
    out << " e " << r.ended.size();
    for (const auto& e : r.ended)
      out << ' ' << e.run << ' ' << e.robot << ' ' << e.cause << ' ' << (e.violation ? 1 : 0);
    out << "\n";
  }
}

inline std::optional<Trace> read_trace(std::istream& in, std::string* error = nullptr) {
  const auto fail = [&](const std::string& why) -> std::optional<Trace> {
    if (error) *error = why;
    return std::nullopt;
  };
  std::string line;
  if (!std::getline(in, line)) return fail("empty stream");
  {
    std::istringstream hdr(line);
    std::string magic;
    int version = 0;
    if (!(hdr >> magic >> version) || magic != "cgtrace") return fail("not a trace stream");
    if (version != kTraceVersion)
      return fail("unsupported trace version " + std::to_string(version));
  }
  Trace trace;
  if (!std::getline(in, line)) return fail("truncated stream: missing size line");
  {
    std::istringstream sz(line);
    std::string tag;
    if (!(sz >> tag >> trace.initial_robots) || tag != "n")
      return fail("malformed size line");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag;
    TraceRecord rec;
    int gathered = 0;
    std::size_t count = 0;
    if (!(ls >> tag >> rec.round >> gathered) || tag != "r") return fail("malformed round line");
    rec.gathered = gathered != 0;
    if (!(ls >> tag >> count) || tag != "p") return fail("malformed positions block");
    rec.positions.resize(count);
    for (auto& p : rec.positions)
      if (!(ls >> p.x >> p.y)) return fail("truncated positions block");
    if (!(ls >> tag >> count) || tag != "t") return fail("malformed tokens block");
    rec.tokens.resize(count);
    for (auto& t : rec.tokens)
      if (!(ls >> t.owner >> t.dir >> t.phase >> t.kind >> t.age))
        return fail("truncated tokens block");
    if (!(ls >> tag >> count) || tag != "f") return fail("malformed removals block");
    rec.removed.resize(count);
    for (auto& id : rec.removed)
      if (!(ls >> id)) return fail("truncated removals block");
    if (!(ls >> tag >> count) || tag != "s") return fail("malformed starts block");
    rec.started.resize(count);
    for (auto& s : rec.started) {
      int dual = 0;
      if (!(ls >> s.run >> s.robot >> s.dir >> dual)) return fail("truncated starts block");
      s.dual = dual != 0;
    }
    if (!(ls >> tag >> count) || tag != "e") return fail("malformed ends block");
    rec.ended.resize(count);
    for (auto& e : rec.ended) {
      int viol = 0;
      if (!(ls >> e.run >> e.robot >> e.cause >> viol)) return fail("truncated ends block");
      e.violation = viol != 0;
    }
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace chainsim
