#include "rtj/refactor.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "rtj/error.hpp"

namespace rtj {
namespace {

namespace fs = std::filesystem;

struct FileText {
  std::vector<std::string> lines;
  bool trailing_newline = true;
};

FileText read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  FileText out;
  out.trailing_newline = !text.empty() && text.back() == '\n';
  std::string line;
  std::istringstream lines(text);
  while (std::getline(lines, line)) out.lines.push_back(line);
  return out;
}

std::string join_lines(const FileText& text) {
  std::ostringstream out;
  for (size_t i = 0; i < text.lines.size(); ++i) {
    out << text.lines[i];
    if (i + 1 < text.lines.size() || text.trailing_newline) out << "\n";
  }
  return out.str();
}

// Extracts the exact source span [ (line, col), (end_line, end_col) ).
std::string extract_span(const FileText& text, int line, int col, int end_line, int end_col) {
  if (line < 1 || end_line > static_cast<int>(text.lines.size()) || line > end_line) {
    throw StaleAnchor("span out of range at line " + std::to_string(line));
  }
  if (line == end_line) {
    const std::string& l = text.lines[static_cast<size_t>(line) - 1];
    if (end_col - 1 > static_cast<int>(l.size()) || col - 1 > static_cast<int>(l.size())) {
      throw StaleAnchor("span out of range at line " + std::to_string(line));
    }
    return l.substr(static_cast<size_t>(col) - 1, static_cast<size_t>(end_col - col));
  }
  std::string out = text.lines[static_cast<size_t>(line) - 1].substr(static_cast<size_t>(col) - 1);
  for (int i = line + 1; i < end_line; ++i) {
    out += "\n";
    out += text.lines[static_cast<size_t>(i) - 1];
  }
  out += "\n";
  out += text.lines[static_cast<size_t>(end_line) - 1].substr(0, static_cast<size_t>(end_col) - 1);
  return out;
}

std::string indent_of(const std::string& line) {
  return line.substr(0, line.find_first_not_of(" \t"));
}

const char* explanation(Category category) {
  switch (category) {
    case Category::ContextDependentAssertion:
      return "assertion under this conditional is never executed";
    case Category::ContextDependentHelperCall:
      return "helper call under this conditional is never executed";
    case Category::FullyRottenAssertion: return "assertion is never executed";
    case Category::FullyRottenHelperCall: return "helper call is never executed";
    case Category::RottenAssertionInHelper:
      return "invoked helper does not execute this assertion";
    case Category::Skip: return "executed early return skips the validations below";
    case Category::MissedFail: return "assertion is forced to fail; use the fail primitive";
    case Category::Smoke: return "test contains no assertions and no helper calls";
    case Category::BothBranchesContextDependent:
      return "only one branch of a both-branch assertion runs";
  }
  return "";
}

}  // namespace

const char* to_string(ProposalKind kind) {
  return kind == ProposalKind::ReplaceForcedFail ? "ReplaceForcedFail" : "AddTodoComment";
}

RefactoringProposal propose_replace_forced_fail(const Label& label, const ProgramModel& model,
                                                const FrontendConfig& config,
                                                const std::filesystem::path& project_root) {
  if (label.category != Category::MissedFail || label.evidence.empty()) {
    throw Error("replace-forced-fail requires a MissedFail label with evidence");
  }
  const Statement* stmt = model.find_statement(label.evidence.front().element);
  if (stmt == nullptr) {
    throw UnknownElement("label evidence does not resolve in the model");
  }
  if (!stmt->own_line) {
    throw UnsupportedShape("forced-fail site at " + stmt->loc.file + ":" +
                           std::to_string(stmt->loc.line) +
                           " is embedded in a larger source line");
  }
  FileText text = read_lines(project_root / stmt->loc.file);
  SourceEdit edit;
  edit.anchor = stmt->loc;
  edit.insertion = false;
  edit.end_line = stmt->end_line;
  edit.end_column = stmt->end_column;
  edit.original_snippet =
      extract_span(text, stmt->loc.line, stmt->loc.column, stmt->end_line, stmt->end_column);
  edit.replacement_snippet = config.fail_primitive_name + "()";

  RefactoringProposal proposal;
  proposal.test = label.test;
  proposal.kind = ProposalKind::ReplaceForcedFail;
  proposal.rationale = label;
  proposal.edits.push_back(std::move(edit));
  return proposal;
}

RefactoringProposal propose_todo_comment(const Label& label, const ProgramModel& model,
                                         const std::filesystem::path& project_root) {
  if (label.evidence.empty()) throw Error("todo-comment requires label evidence");
  RefactoringProposal proposal;
  proposal.test = label.test;
  proposal.kind = ProposalKind::AddTodoComment;
  proposal.rationale = label;

  std::map<fs::path, FileText> cache;
  std::vector<std::pair<std::string, int>> seen;
  for (const auto& item : label.evidence) {
    if (std::find(seen.begin(), seen.end(), std::make_pair(item.file, item.line)) != seen.end()) {
      continue;
    }
    seen.emplace_back(item.file, item.line);
    const Statement* stmt = model.find_statement(item.element);
    const Method* method = stmt == nullptr ? model.find_method(item.element) : nullptr;
    if (stmt == nullptr && method == nullptr) {
      throw UnknownElement("label evidence does not resolve in the model");
    }
    auto [it, inserted] = cache.try_emplace(item.file);
    if (inserted) it->second = read_lines(project_root / item.file);
    const FileText& text = it->second;
    if (item.line < 1 || item.line > static_cast<int>(text.lines.size())) {
      throw StaleAnchor("evidence line out of range in " + item.file);
    }
    const std::string& anchored = text.lines[static_cast<size_t>(item.line) - 1];

    SourceEdit edit;
    edit.anchor = SourceLocation{item.file, item.line, 1, item.element};
    edit.insertion = true;
    edit.original_snippet = anchored;
    edit.replacement_snippet = indent_of(anchored) + "# TODO [rotten:" +
                               to_string(label.category) + "] " + label.analyzer + ": " +
                               explanation(label.category);
    proposal.edits.push_back(std::move(edit));
  }
  return proposal;
}

std::string unified_diff(const std::string& before, const std::string& after,
                         const std::string& label) {
  auto split = [](const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream in(text);
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
  };
  std::vector<std::string> a = split(before);
  std::vector<std::string> b = split(after);
  size_t n = a.size(), m = b.size();

  // longest common subsequence, then backtrack into keep/del/ins ops
  std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
  for (size_t i = n; i-- > 0;) {
    for (size_t j = m; j-- > 0;) {
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }
  struct Op {
    char tag;  // ' ', '-', '+'
    size_t a_index, b_index;
  };
  std::vector<Op> ops;
  size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j]) {
      ops.push_back({' ', i++, j++});
    } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
      ops.push_back({'-', i++, 0});
    } else {
      ops.push_back({'+', 0, j++});
    }
  }
  while (i < n) ops.push_back({'-', i++, 0});
  while (j < m) ops.push_back({'+', 0, j++});

  bool any_change = std::any_of(ops.begin(), ops.end(), [](const Op& op) { return op.tag != ' '; });
  if (!any_change) return "";

  std::ostringstream out;
  out << "--- a/" << label << "\n+++ b/" << label << "\n";
  const size_t context = 3;
  size_t k = 0;
  while (k < ops.size()) {
    if (ops[k].tag == ' ') {
      ++k;
      continue;
    }
    size_t start = k >= context ? k - context : 0;
    size_t end = k;
    size_t gap = 0;
    for (size_t t = k; t < ops.size(); ++t) {
      if (ops[t].tag == ' ') {
        ++gap;
        if (gap > 2 * context) break;
      } else {
        gap = 0;
        end = t;
      }
    }
    size_t stop = std::min(ops.size(), end + context + 1);
    size_t a_start = n, b_start = m;
    size_t a_count = 0, b_count = 0;
    for (size_t t = start; t < stop; ++t) {
      if (ops[t].tag != '+') {
        a_start = std::min(a_start, ops[t].a_index);
        ++a_count;
      }
      if (ops[t].tag != '-') {
        b_start = std::min(b_start, ops[t].b_index);
        ++b_count;
      }
    }
    if (a_count == 0) a_start = ops[start].tag == '+' && start > 0 ? ops[start - 1].a_index : 0;
    if (b_count == 0) b_start = 0;
    out << "@@ -" << (a_count == 0 ? a_start : a_start + 1) << "," << a_count << " +"
        << (b_count == 0 ? b_start : b_start + 1) << "," << b_count << " @@\n";
    for (size_t t = start; t < stop; ++t) {
      const std::string& line = ops[t].tag == '+' ? b[ops[t].b_index] : a[ops[t].a_index];
      out << ops[t].tag << line << "\n";
    }
    k = stop;
  }
  return out.str();
}

PatchSet apply_proposals(const std::filesystem::path& project_root,
                         const std::vector<RefactoringProposal>& proposals, ApplyMode mode) {
  struct PendingEdit {
    const SourceEdit* edit;
    size_t order;  // proposal arrival order, for stable stacking
  };
  std::map<std::string, std::vector<PendingEdit>> per_file;
  size_t order = 0;
  for (const auto& proposal : proposals) {
    for (const auto& edit : proposal.edits) {
      per_file[edit.anchor.file].push_back({&edit, order++});
    }
  }

  PatchSet patch;
  for (auto& [file, edits] : per_file) {
    FileText text = read_lines(project_root / file);
    const std::string before = join_lines(text);

    // staleness first, against the untouched file
    for (const auto& pending : edits) {
      const SourceEdit& e = *pending.edit;
      if (e.insertion) {
        if (e.anchor.line < 1 || e.anchor.line > static_cast<int>(text.lines.size()) ||
            text.lines[static_cast<size_t>(e.anchor.line) - 1] != e.original_snippet) {
          throw StaleAnchor(file + ":" + std::to_string(e.anchor.line) +
                            " changed since the proposal was created");
        }
      } else {
        std::string current =
            extract_span(text, e.anchor.line, e.anchor.column, e.end_line, e.end_column);
        if (current != e.original_snippet) {
          throw StaleAnchor(file + ":" + std::to_string(e.anchor.line) +
                            " changed since the proposal was created");
        }
      }
    }

    // conflict detection over replacement spans
    auto begin_key = [](const SourceEdit& e) { return std::pair(e.anchor.line, e.anchor.column); };
    auto end_key = [](const SourceEdit& e) { return std::pair(e.end_line, e.end_column); };
    for (size_t x = 0; x < edits.size(); ++x) {
      const SourceEdit& ex = *edits[x].edit;
      if (ex.insertion) continue;
      for (size_t y = x + 1; y < edits.size(); ++y) {
        const SourceEdit& ey = *edits[y].edit;
        if (ey.insertion) {
          // an insertion inside a replaced span cannot be ordered
          if (std::pair(ey.anchor.line, 1) > begin_key(ex) &&
              std::pair(ey.anchor.line, 1) <= end_key(ex)) {
            throw ConflictingProposals(file + ": insertion inside a replaced span at line " +
                                       std::to_string(ey.anchor.line));
          }
          continue;
        }
        if (begin_key(ex) < end_key(ey) && begin_key(ey) < end_key(ex)) {
          throw ConflictingProposals(file + ": overlapping edits at line " +
                                     std::to_string(ex.anchor.line));
        }
      }
    }

    // one bottom-up pass: edits below an anchor never shift lines above it.
    // At the same anchor line a replacement is applied before insertions
    // (insertions go above the line); stacked insertions keep proposal order.
    std::sort(edits.begin(), edits.end(), [&](const PendingEdit& l, const PendingEdit& r) {
      if (l.edit->anchor.line != r.edit->anchor.line) {
        return l.edit->anchor.line > r.edit->anchor.line;
      }
      if (l.edit->insertion != r.edit->insertion) return !l.edit->insertion;
      if (!l.edit->insertion) return l.edit->anchor.column > r.edit->anchor.column;
      return l.order > r.order;
    });
    for (const auto& pending : edits) {
      const SourceEdit& e = *pending.edit;
      if (e.insertion) {
        text.lines.insert(text.lines.begin() + (e.anchor.line - 1), e.replacement_snippet);
        continue;
      }
      size_t first = static_cast<size_t>(e.anchor.line) - 1;
      size_t last = static_cast<size_t>(e.end_line) - 1;
      std::string prefix = text.lines[first].substr(0, static_cast<size_t>(e.anchor.column) - 1);
      std::string suffix = text.lines[last].substr(static_cast<size_t>(e.end_column) - 1);
      std::string merged = prefix + e.replacement_snippet + suffix;
      text.lines.erase(text.lines.begin() + static_cast<std::ptrdiff_t>(first),
                       text.lines.begin() + static_cast<std::ptrdiff_t>(last) + 1);
      std::vector<std::string> replacement_lines;
      std::string piece;
      std::istringstream stream(merged);
      while (std::getline(stream, piece)) replacement_lines.push_back(piece);
      if (merged.empty()) replacement_lines.push_back("");
      text.lines.insert(text.lines.begin() + static_cast<std::ptrdiff_t>(first),
                        replacement_lines.begin(), replacement_lines.end());
    }

    std::string after = join_lines(text);
    patch.unified_diff += unified_diff(before, after, file);
    patch.rewritten.emplace_back(file, after);
  }

  if (mode == ApplyMode::Write) {
    for (const auto& [file, content] : patch.rewritten) {
      std::ofstream out(project_root / file, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write " + (project_root / file).string());
      out << content;
    }
  }
  return patch;
}

}  // namespace rtj
