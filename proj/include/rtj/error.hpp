#pragma once

#include <stdexcept>
#include <string>

namespace rtj {

/// Base class for all failures raised by the analyzer.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A source file could not be parsed. Carries the offending position.
class ParseError : public Error {
 public:
  ParseError(std::string file, int line, int column, const std::string& msg)
      : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        file(std::move(file)),
        line(line),
        column(column) {}

  std::string file;
  int line;
  int column;
};

/// The project root does not exist or contains no analyzable sources.
class ProjectNotFound : public Error {
 public:
  using Error::Error;
};

/// An element id does not resolve in the model it was handed to.
class UnknownElement : public Error {
 public:
  using Error::Error;
};

/// A probe could not be injected at a requested target.
class InstrumentationError : public Error {
 public:
  using Error::Error;
};

/// The test runner could not be started at all (as opposed to a test failing).
class BuildError : public Error {
 public:
  using Error::Error;
};

/// A per-test trace file exists but cannot be parsed.
class TraceCorruption : public Error {
 public:
  using Error::Error;
};

/// Queried element was never an instrumentation target. Distinct from a zero count.
class UntracedElement : public Error {
 public:
  using Error::Error;
};

/// File content changed between proposal creation and application.
class StaleAnchor : public Error {
 public:
  using Error::Error;
};

/// Two proposals try to rewrite overlapping byte ranges.
class ConflictingProposals : public Error {
 public:
  using Error::Error;
};

/// The forced-fail expression is not a standalone statement we can rewrite.
class UnsupportedShape : public Error {
 public:
  using Error::Error;
};

/// Analyzer raised during one (test, analyzer) step; caught and logged by the pipeline.
class AnalyzerError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rtj
