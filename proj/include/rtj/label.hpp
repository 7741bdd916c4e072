#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rtj/model.hpp"

namespace rtj {

enum class Category {
  ContextDependentAssertion,
  ContextDependentHelperCall,
  FullyRottenAssertion,
  FullyRottenHelperCall,
  RottenAssertionInHelper,
  Skip,
  MissedFail,
  Smoke,
  BothBranchesContextDependent,
};

const char* to_string(Category category);
std::optional<Category> category_from_string(const std::string& name);

/// The seven categories that count as rotten. Smoke is a smell but not rotten;
/// BothBranchesContextDependent is a false-positive special case.
bool is_rotten(Category category);

struct EvidenceItem {
  ElementId element = 0;
  std::string file;
  int line = 0;
  std::uint64_t hits = 0;
};

struct Label {
  std::string test;  // qualified test name
  Category category = Category::Smoke;
  std::vector<EvidenceItem> evidence;
  std::string analyzer;
};

}  // namespace rtj
