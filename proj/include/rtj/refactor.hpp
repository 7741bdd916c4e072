#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rtj/config.hpp"
#include "rtj/label.hpp"
#include "rtj/model.hpp"

namespace rtj {

enum class ProposalKind { ReplaceForcedFail, AddTodoComment };

const char* to_string(ProposalKind kind);

/// One concrete text edit. An insertion places replacement_snippet as new
/// line(s) above the anchor line (original_snippet is the anchored line,
/// checked for staleness); a replacement swaps the exact original bytes at the
/// anchor position.
struct SourceEdit {
  SourceLocation anchor;
  bool insertion = false;
  int end_line = 0;    // replacement only: end of the replaced span
  int end_column = 0;  // one past the last replaced character
  std::string original_snippet;
  std::string replacement_snippet;
};

struct RefactoringProposal {
  std::string test;
  ProposalKind kind = ProposalKind::AddTodoComment;
  Label rationale;
  std::vector<SourceEdit> edits;

  const SourceLocation& anchor() const { return edits.front().anchor; }
};

/// Builds the forced-fail replacement for a MissedFail label: the assertion
/// statement becomes an argument-free call to the configured fail primitive.
/// Throws UnsupportedShape when the site does not start its own line.
RefactoringProposal propose_replace_forced_fail(const Label& label, const ProgramModel& model,
                                                const FrontendConfig& config,
                                                const std::filesystem::path& project_root);

/// Builds the TODO annotation for any label: one comment line above each
/// distinct evidence source line, indentation matched, program tokens
/// untouched.
RefactoringProposal propose_todo_comment(const Label& label, const ProgramModel& model,
                                         const std::filesystem::path& project_root);

enum class ApplyMode { DryRun, Write };

struct PatchSet {
  // (relative path, new content) for every touched file
  std::vector<std::pair<std::string, std::string>> rewritten;
  std::string unified_diff;
};

/// Applies proposals bottom-up per file. DryRun computes the diff without
/// touching disk; Write also rewrites the files. Throws StaleAnchor when a
/// snippet no longer matches and ConflictingProposals on overlapping
/// replacements.
PatchSet apply_proposals(const std::filesystem::path& project_root,
                         const std::vector<RefactoringProposal>& proposals, ApplyMode mode);

/// Unified diff between two texts (three context lines), used by apply_proposals.
std::string unified_diff(const std::string& before, const std::string& after,
                         const std::string& label);

}  // namespace rtj
