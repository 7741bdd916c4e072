#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "rtj/model.hpp"

namespace rtj {

struct TestOutcome {
  enum class Status { Pass, Fail, Error, FrameworkSkipped };
  std::string test;
  Status status = Status::Error;
  double duration_ms = 0.0;
};

const char* to_string(TestOutcome::Status status);

struct RunMetadata {
  std::string timestamp;              // source snapshot time, UTC ISO-8601
  std::string framework_version;      // e.g. "pytest 9.1.1"
  std::string instrumentation_version;
};

/// Per-test outcomes and per-(test, element) hit counts of one instrumented
/// run. Immutable once assembled; safe for concurrent reads.
class DynamicTrace {
 public:
  DynamicTrace() = default;
  DynamicTrace(std::map<std::string, TestOutcome> outcomes,
               std::map<std::string, std::unordered_map<ElementId, std::uint64_t>> hits,
               std::set<ElementId> instrumented, RunMetadata metadata)
      : outcomes_(std::move(outcomes)),
        hits_(std::move(hits)),
        instrumented_(std::move(instrumented)),
        metadata_(std::move(metadata)) {}

  const std::map<std::string, TestOutcome>& outcomes() const { return outcomes_; }
  const RunMetadata& metadata() const { return metadata_; }
  const std::set<ElementId>& instrumented_elements() const { return instrumented_; }

  const TestOutcome* outcome_of(const std::string& test) const;

  /// Recorded hit count; 0 when no record exists. Throws UntracedElement when
  /// the element was never an instrumentation target.
  std::uint64_t was_executed(const std::string& test, ElementId element) const;

 private:
  std::map<std::string, TestOutcome> outcomes_;
  std::map<std::string, std::unordered_map<ElementId, std::uint64_t>> hits_;
  std::set<ElementId> instrumented_;
  RunMetadata metadata_;
};

/// Parses one per-test trace file: header `#rtj-trace v1 <qualified-test-name>`
/// followed by `element_id<TAB>count` lines sorted by element id.
/// Throws TraceCorruption on malformed content.
std::unordered_map<ElementId, std::uint64_t> parse_trace_file(const std::string& content,
                                                              const std::string& expected_test);

/// Serializes counts into the trace file format (used by tests and tooling;
/// the probe runtime emits the same shape from inside the host process).
std::string format_trace_file(const std::string& test,
                              const std::map<ElementId, std::uint64_t>& counts);

}  // namespace rtj
