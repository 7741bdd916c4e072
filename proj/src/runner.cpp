#include "rtj/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

#include "rtj/error.hpp"
#include "rtj/proc.hpp"

namespace rtj {
namespace {

namespace fs = std::filesystem;

constexpr const char* kDefaultTemplate =
    "python3 -m pytest -q --tb=no -p no:cacheprovider {nodeid}";

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += '\'';
  return out;
}

void replace_all(std::string& text, const std::string& from, const std::string& to) {
  size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
}

std::string build_command(const std::string& tmpl, const TestCase& test) {
  std::string cmd = tmpl;
  std::string local = test.name;
  size_t sep = local.find("::");
  if (sep != std::string::npos) local = local.substr(sep + 2);
  replace_all(cmd, "{nodeid}", shell_quote(test.name));
  replace_all(cmd, "{file}", shell_quote(test.unit));
  replace_all(cmd, "{test}", shell_quote(local));
  return cmd;
}

std::string runner_template(const RunnerOptions& options) {
  if (!options.command_template.empty()) return options.command_template;
  if (const char* env = std::getenv("RTJ_RUNNER_CMD"); env != nullptr && *env != '\0') {
    return env;
  }
  return kDefaultTemplate;
}

std::string existing_pythonpath() {
  const char* env = std::getenv("PYTHONPATH");
  return env == nullptr ? "" : env;
}

std::string format_utc(std::time_t t) {
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

TestOutcome::Status classify_runner_output(const std::string& output, int exit_code) {
  static const std::regex kSummary(R"((\d+)\s+(passed|failed|skipped|xfailed|xpassed|errors?)\b)");
  std::uint64_t passed = 0, failed = 0, skipped = 0, errors = 0;
  for (auto it = std::sregex_iterator(output.begin(), output.end(), kSummary);
       it != std::sregex_iterator(); ++it) {
    std::uint64_t count = std::stoull((*it)[1].str());
    const std::string& word = (*it)[2].str();
    if (word == "passed" || word == "xpassed") passed += count;
    else if (word == "failed") failed += count;
    else if (word == "skipped" || word == "xfailed") skipped += count;
    else errors += count;
  }
  if (errors > 0) return TestOutcome::Status::Error;
  if (failed > 0) return TestOutcome::Status::Fail;
  if (passed > 0) return TestOutcome::Status::Pass;
  if (skipped > 0) return TestOutcome::Status::FrameworkSkipped;
  // no summary at all: fall back to the exit code
  return exit_code == 0 ? TestOutcome::Status::Pass : TestOutcome::Status::Error;
}

DynamicTrace execute_tests(const std::filesystem::path& project_root,
                           const std::vector<TestCase>& tests, const RunnerOptions& options,
                           std::set<ElementId> instrumented, RunMetadata metadata) {
  if (!fs::exists(project_root)) {
    throw BuildError("project to execute does not exist: " + project_root.string());
  }
  fs::path trace_dir = options.trace_dir;
  if (trace_dir.empty()) {
    trace_dir = fs::temp_directory_path() /
                ("rtj-traces-" + std::to_string(::getpid()) + "-" +
                 std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  }
  fs::create_directories(trace_dir);

  const std::string tmpl = runner_template(options);
  const std::string pythonpath = [&] {
    std::string existing = existing_pythonpath();
    std::string root = project_root.string();
    return existing.empty() ? root : root + ":" + existing;
  }();

  struct Slot {
    TestOutcome outcome;
    std::unordered_map<ElementId, std::uint64_t> hits;
    std::exception_ptr failure;  // set aborts the whole run after workers join
  };
  std::vector<Slot> slots(tests.size());

  std::atomic<size_t> cursor{0};
  auto run_one = [&](size_t i) {
    const TestCase& test = tests[i];
    Slot& slot = slots[i];
    slot.outcome.test = test.name;

    fs::path trace_file = trace_dir / ("t" + std::to_string(i) + ".trace");
    std::error_code ec;
    fs::remove(trace_file, ec);

    std::vector<std::pair<std::string, std::string>> env = {
        {"RTJ_TRACE_FILE", trace_file.string()},
        {"RTJ_CURRENT_TEST", test.name},
        {"PYTHONPATH", pythonpath},
        {"PYTEST_DISABLE_PLUGIN_AUTOLOAD", "1"},
        {"PYTHONDONTWRITEBYTECODE", "1"},
    };
    auto start = std::chrono::steady_clock::now();
    ProcessResult proc =
        run_process(build_command(tmpl, test), project_root, env, options.timeout_seconds);
    slot.outcome.duration_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();

    if (proc.spawn_failed || proc.exit_code == 126 || proc.exit_code == 127) {
      throw BuildError("runner command could not be executed (exit " +
                       std::to_string(proc.exit_code) + "): " + proc.output);
    }
    slot.outcome.status = proc.timed_out ? TestOutcome::Status::Error
                                         : classify_runner_output(proc.output, proc.exit_code);

    if (!instrumented.empty() && fs::exists(trace_file)) {
      std::ifstream in(trace_file, std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      try {
        auto counts = parse_trace_file(buf.str(), test.name);
        for (const auto& [id, count] : counts) {
          if (instrumented.count(id) != 0) slot.hits[id] = count;
        }
      } catch (const TraceCorruption&) {
        // a killed process may leave a torn file; nothing usable beyond what flushed
        if (!proc.timed_out) throw;
      }
    }
    fs::remove(trace_file, ec);
  };

  auto worker = [&] {
    while (true) {
      size_t i = cursor.fetch_add(1);
      if (i >= tests.size()) return;
      try {
        run_one(i);
      } catch (...) {
        slots[i].failure = std::current_exception();
      }
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  size_t jobs = options.jobs > 0 ? static_cast<size_t>(options.jobs)
                                 : std::max<size_t>(1, hw == 0 ? 2 : hw);
  jobs = std::min(jobs, std::max<size_t>(1, tests.size()));
  std::vector<std::thread> pool;
  for (size_t j = 0; j + 1 < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::error_code ec;
  if (options.trace_dir.empty()) fs::remove_all(trace_dir, ec);

  std::map<std::string, TestOutcome> outcomes;
  std::map<std::string, std::unordered_map<ElementId, std::uint64_t>> hits;
  for (size_t i = 0; i < tests.size(); ++i) {
    if (slots[i].failure) std::rethrow_exception(slots[i].failure);
    outcomes[tests[i].name] = slots[i].outcome;
    hits[tests[i].name] = std::move(slots[i].hits);
  }
  return DynamicTrace(std::move(outcomes), std::move(hits), std::move(instrumented),
                      std::move(metadata));
}

std::string source_snapshot_timestamp(const std::filesystem::path& project_root) {
  fs::file_time_type newest = fs::file_time_type::min();
  bool any = false;
  for (auto it = fs::recursive_directory_iterator(project_root);
       it != fs::recursive_directory_iterator(); ++it) {
    std::string name = it->path().filename().string();
    if (it->is_directory()) {
      if (name == "__pycache__" || name == ".pytest_cache" ||
          (!name.empty() && name[0] == '.')) {
        it.disable_recursion_pending();
      }
      continue;
    }
    if (!it->is_regular_file()) continue;
    auto t = fs::last_write_time(it->path());
    if (!any || t > newest) {
      newest = t;
      any = true;
    }
  }
  if (!any) return format_utc(0);
  auto sys = std::chrono::time_point_cast<std::chrono::system_clock::duration>(
      newest - fs::file_time_type::clock::now() + std::chrono::system_clock::now());
  return format_utc(std::chrono::system_clock::to_time_t(sys));
}

std::string detect_framework_version() {
  static std::once_flag flag;
  static std::string version;
  std::call_once(flag, [] {
    ProcessResult proc = run_process(
        "python3 -m pytest --version", fs::temp_directory_path(),
        {{"PYTEST_DISABLE_PLUGIN_AUTOLOAD", "1"}, {"PYTHONDONTWRITEBYTECODE", "1"}}, 30.0);
    std::istringstream in(proc.output);
    std::getline(in, version);
    if (version.empty()) version = "unknown";
  });
  return version;
}

}  // namespace rtj
