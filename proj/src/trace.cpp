#include "rtj/trace.hpp"

#include <sstream>

#include "rtj/error.hpp"

namespace rtj {

const char* to_string(TestOutcome::Status status) {
  switch (status) {
    case TestOutcome::Status::Pass: return "pass";
    case TestOutcome::Status::Fail: return "fail";
    case TestOutcome::Status::Error: return "error";
    case TestOutcome::Status::FrameworkSkipped: return "framework-skipped";
  }
  return "error";
}

const TestOutcome* DynamicTrace::outcome_of(const std::string& test) const {
  auto it = outcomes_.find(test);
  return it == outcomes_.end() ? nullptr : &it->second;
}

std::uint64_t DynamicTrace::was_executed(const std::string& test, ElementId element) const {
  if (instrumented_.count(element) == 0) {
    throw UntracedElement("element " + std::to_string(element) + " was not instrumented");
  }
  auto per_test = hits_.find(test);
  if (per_test == hits_.end()) return 0;
  auto it = per_test->second.find(element);
  return it == per_test->second.end() ? 0 : it->second;
}

std::unordered_map<ElementId, std::uint64_t> parse_trace_file(const std::string& content,
                                                              const std::string& expected_test) {
  std::istringstream in(content);
  std::string line;
  if (!std::getline(in, line)) throw TraceCorruption("empty trace file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string prefix = "#rtj-trace v1 ";
  if (line.rfind(prefix, 0) != 0) {
    throw TraceCorruption("bad trace header: " + line);
  }
  std::string test = line.substr(prefix.size());
  if (!expected_test.empty() && test != expected_test) {
    throw TraceCorruption("trace file for '" + test + "', expected '" + expected_test + "'");
  }
  std::unordered_map<ElementId, std::uint64_t> counts;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw TraceCorruption("trace line " + std::to_string(line_no) + " has no tab: " + line);
    }
    try {
      unsigned long long id = std::stoull(line.substr(0, tab));
      unsigned long long count = std::stoull(line.substr(tab + 1));
      counts[static_cast<ElementId>(id)] += count;
    } catch (const std::exception&) {
      throw TraceCorruption("unparsable trace line " + std::to_string(line_no) + ": " + line);
    }
  }
  return counts;
}

std::string format_trace_file(const std::string& test,
                              const std::map<ElementId, std::uint64_t>& counts) {
  std::ostringstream out;
  out << "#rtj-trace v1 " << test << "\n";
  for (const auto& [id, count] : counts) {
    out << id << "\t" << count << "\n";
  }
  return out.str();
}

}  // namespace rtj
