#include "rtj/instrument.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rtj/error.hpp"
#include "rtj/frontend.hpp"
#include "rtj/lexer.hpp"

namespace rtj {
namespace {

namespace fs = std::filesystem;

constexpr const char* kRuntimeModule = "_rtj_probe_runtime.py";
constexpr const char* kImportLine = "from _rtj_probe_runtime import probe as _rt_probe";

constexpr const char* kRuntimeSource = R"(import atexit
import os

_hits = {}


def probe(element_id):
    _hits[element_id] = _hits.get(element_id, 0) + 1


def _flush():
    path = os.environ.get("RTJ_TRACE_FILE")
    if not path:
        return
    test = os.environ.get("RTJ_CURRENT_TEST", "<unknown>")
    with open(path, "w") as out:
        out.write("#rtj-trace v1 %s\n" % test)
        for element_id in sorted(_hits):
            out.write("%d\t%d\n" % (element_id, _hits[element_id]))


atexit.register(_flush)
)";

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
}

void copy_tree(const fs::path& from, const fs::path& to) {
  fs::create_directories(to);
  for (auto it = fs::recursive_directory_iterator(from);
       it != fs::recursive_directory_iterator(); ++it) {
    std::string name = it->path().filename().string();
    fs::path rel = fs::relative(it->path(), from);
    if (it->is_directory()) {
      if (name == "__pycache__" || name == ".pytest_cache" || name == ".git") {
        it.disable_recursion_pending();
        continue;
      }
      fs::create_directories(to / rel);
    } else if (it->is_regular_file()) {
      fs::copy_file(it->path(), to / rel, fs::copy_options::overwrite_existing);
    }
  }
}

// True for the synthetic else-block that carries an elif chain; a line probe
// between the if-suite and the elif keyword would not parse.
bool is_elif_chain_block(const Statement& block) {
  return block.kind == StatementKind::Block && block.children.size() == 1 &&
         block.children[0].kind == StatementKind::Conditional &&
         block.children[0].loc.line == block.loc.line &&
         block.children[0].loc.column == block.loc.column;
}

void collect_method_targets(const Statement& body, const ProgramModel& model,
                            const FrontendConfig& config,
                            const std::map<ElementId, int>& helpers,
                            const std::string& unit_path, std::set<ElementId>& out) {
  walk_statements(body, [&](const Statement& stmt) {
    switch (stmt.kind) {
      case StatementKind::Call: {
        if (config.matches_assertion_rule(stmt.call.callee, stmt.call.callee_last)) {
          out.insert(stmt.loc.element_id);
        } else {
          ElementId callee = resolve_callee(model, unit_path, stmt.call);
          if (callee != 0 && helpers.count(callee) != 0) out.insert(stmt.loc.element_id);
        }
        break;
      }
      case StatementKind::Return:
        out.insert(stmt.loc.element_id);
        break;
      case StatementKind::Conditional:
        for (const auto& branch : stmt.children) {
          if (!is_elif_chain_block(branch) && !branch.children.empty()) {
            out.insert(branch.loc.element_id);
          }
        }
        break;
      default:
        break;
    }
  });
}

// Physical line index (0-based) before which the probe import can go:
// after a shebang, a module docstring, and any __future__ imports.
size_t import_insertion_index(const std::string& source, const std::string& file) {
  size_t index = 0;
  if (source.rfind("#!", 0) == 0) index = 1;
  std::vector<Token> tokens = tokenize(source, file);
  size_t i = 0;
  auto skip_layout = [&] {
    while (i < tokens.size() && (tokens[i].kind == Token::Kind::Newline ||
                                 tokens[i].kind == Token::Kind::Indent ||
                                 tokens[i].kind == Token::Kind::Dedent)) {
      ++i;
    }
  };
  skip_layout();
  if (i < tokens.size() && tokens[i].kind == Token::Kind::String &&
      i + 1 < tokens.size() && tokens[i + 1].kind == Token::Kind::Newline) {
    index = std::max(index, static_cast<size_t>(tokens[i].end_line));
    i += 2;
  }
  while (true) {
    skip_layout();
    if (i < tokens.size() && tokens[i].is_name("from") && i + 1 < tokens.size() &&
        tokens[i + 1].is_name("__future__")) {
      while (i < tokens.size() && tokens[i].kind != Token::Kind::Newline) ++i;
      if (i < tokens.size()) {
        index = std::max(index, static_cast<size_t>(tokens[i].line));
        ++i;
      }
    } else {
      break;
    }
  }
  return index;
}

}  // namespace

std::set<ElementId> default_targets(const ProgramModel& model, const std::vector<TestCase>& tests,
                                    const std::map<ElementId, int>& helpers,
                                    const FrontendConfig& config) {
  std::set<ElementId> targets;
  for (const auto& test : tests) {
    const Method* method = model.find_method(test.method_ref);
    if (method == nullptr) {
      throw UnknownElement("test method " + test.name + " not in model");
    }
    collect_method_targets(method->body, model, config, helpers, test.unit, targets);
  }
  for (const auto& [helper_id, depth] : helpers) {
    (void)depth;
    const Method* method = model.find_method(helper_id);
    if (method == nullptr) continue;
    collect_method_targets(method->body, model, config, helpers, method->loc.file, targets);
  }
  return targets;
}

InstrumentationResult instrument(const std::filesystem::path& project_root,
                                 const ProgramModel& model, const std::set<ElementId>& targets,
                                 const std::filesystem::path& out_dir) {
  if (!fs::exists(project_root) || !fs::is_directory(project_root)) {
    throw ProjectNotFound("project root not found: " + project_root.string());
  }
  InstrumentationResult result;
  result.root = out_dir;
  copy_tree(project_root, out_dir);

  // group targets per file and per anchor line
  std::map<std::string, std::map<int, std::vector<ElementId>>> per_file;
  for (ElementId id : targets) {
    const Statement* stmt = model.find_statement(id);
    if (stmt == nullptr) {
      throw UnknownElement("instrumentation target " + std::to_string(id) + " not in model");
    }
    if (!stmt->own_line) {
      result.warnings.push_back("cannot inject probe at " + stmt->loc.file + ":" +
                                std::to_string(stmt->loc.line) +
                                ": statement shares its line; target dropped");
      continue;
    }
    per_file[stmt->loc.file][stmt->loc.line].push_back(id);
    result.instrumented.insert(id);
  }

  for (auto& [file, lines] : per_file) {
    fs::path path = out_dir / file;
    std::string source = read_file(path);
    bool trailing_newline = !source.empty() && source.back() == '\n';
    std::vector<std::string> content;
    {
      std::istringstream in(source);
      std::string line;
      while (std::getline(in, line)) content.push_back(line);
    }
    size_t import_at = import_insertion_index(source, file);

    // bottom-up so earlier insertions do not shift later anchors
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
      size_t anchor = static_cast<size_t>(it->first) - 1;
      if (anchor >= content.size()) {
        throw InstrumentationError("anchor line out of range in " + file);
      }
      const std::string& line = content[anchor];
      std::string indent = line.substr(0, line.find_first_not_of(" \t"));
      std::sort(it->second.begin(), it->second.end());
      std::string probe = indent;
      for (size_t k = 0; k < it->second.size(); ++k) {
        if (k > 0) probe += "; ";
        probe += "_rt_probe(" + std::to_string(it->second[k]) + ")";
      }
      content.insert(content.begin() + static_cast<std::ptrdiff_t>(anchor), probe);
    }
    content.insert(content.begin() + static_cast<std::ptrdiff_t>(import_at), kImportLine);

    std::ostringstream out;
    for (size_t k = 0; k < content.size(); ++k) {
      out << content[k];
      if (k + 1 < content.size() || trailing_newline) out << "\n";
    }
    write_file(path, out.str());
  }

  if (!per_file.empty()) {
    write_file(out_dir / kRuntimeModule, kRuntimeSource);
  }
  return result;
}

}  // namespace rtj
