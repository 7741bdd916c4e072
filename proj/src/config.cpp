#include "rtj/config.hpp"

#include <fstream>

#include "rtj/error.hpp"

namespace rtj {
namespace {

std::string trim(const std::string& s) {
  size_t begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  size_t end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string basename_of(const std::string& path) {
  size_t slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

}  // namespace

bool glob_match(const std::string& pattern, const std::string& text) {
  size_t p = 0, t = 0;
  size_t star = std::string::npos, match = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      match = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++match;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

bool FrontendConfig::is_test_file(const std::string& relative_path) const {
  std::string base = basename_of(relative_path);
  for (const auto& glob : test_file_globs) {
    if (glob_match(glob, base)) return true;
  }
  return false;
}

std::string FrontendConfig::match_marker(const std::string& method_simple_name,
                                         const std::vector<std::string>& markers) const {
  for (const auto& rule : test_marker_rules) {
    if (rule.rfind("name:", 0) == 0) {
      if (glob_match(rule.substr(5), method_simple_name)) return rule;
    } else if (rule.rfind("decorator:", 0) == 0) {
      for (const auto& marker : markers) {
        if (glob_match(rule.substr(10), marker)) return rule;
      }
    }
  }
  return "";
}

bool FrontendConfig::matches_assertion_rule(const std::string& callee,
                                            const std::string& callee_last) const {
  for (const auto& rule : assertion_name_rules) {
    if (glob_match(rule, callee) || glob_match(rule, callee_last)) return true;
  }
  return false;
}

FrontendConfig load_config(const std::filesystem::path& project_root) {
  FrontendConfig config;
  config.project_root = project_root;
  std::filesystem::path file = project_root / "rtj.conf";
  std::ifstream in(file);
  if (!in) return config;

  bool saw_file_glob = false, saw_marker = false, saw_assertion = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw ParseError("rtj.conf", line_no, 1, "expected key = value");
    }
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (value.empty()) throw ParseError("rtj.conf", line_no, 1, "empty value for " + key);
    if (key == "test_file") {
      if (!saw_file_glob) config.test_file_globs.clear();
      saw_file_glob = true;
      config.test_file_globs.push_back(value);
    } else if (key == "test_marker") {
      if (!saw_marker) config.test_marker_rules.clear();
      saw_marker = true;
      config.test_marker_rules.push_back(value);
    } else if (key == "assertion_name") {
      if (!saw_assertion) config.assertion_name_rules.clear();
      saw_assertion = true;
      config.assertion_name_rules.push_back(value);
    } else if (key == "fail_primitive") {
      config.fail_primitive_name = value;
    } else {
      throw ParseError("rtj.conf", line_no, 1, "unknown key: " + key);
    }
  }
  if (config.test_marker_rules.empty() || config.assertion_name_rules.empty()) {
    throw ParseError("rtj.conf", line_no, 1,
                     "at least one test_marker and one assertion_name rule required");
  }
  return config;
}

}  // namespace rtj
