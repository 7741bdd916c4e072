#include "rtj/label.hpp"

namespace rtj {

const char* to_string(Category category) {
  switch (category) {
    case Category::ContextDependentAssertion: return "ContextDependentAssertion";
    case Category::ContextDependentHelperCall: return "ContextDependentHelperCall";
    case Category::FullyRottenAssertion: return "FullyRottenAssertion";
    case Category::FullyRottenHelperCall: return "FullyRottenHelperCall";
    case Category::RottenAssertionInHelper: return "RottenAssertionInHelper";
    case Category::Skip: return "Skip";
    case Category::MissedFail: return "MissedFail";
    case Category::Smoke: return "Smoke";
    case Category::BothBranchesContextDependent: return "BothBranchesContextDependent";
  }
  return "Smoke";
}

std::optional<Category> category_from_string(const std::string& name) {
  static const Category all[] = {
      Category::ContextDependentAssertion, Category::ContextDependentHelperCall,
      Category::FullyRottenAssertion,      Category::FullyRottenHelperCall,
      Category::RottenAssertionInHelper,   Category::Skip,
      Category::MissedFail,                Category::Smoke,
      Category::BothBranchesContextDependent,
  };
  for (Category c : all) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

bool is_rotten(Category category) {
  switch (category) {
    case Category::Smoke:
    case Category::BothBranchesContextDependent:
      return false;
    default:
      return true;
  }
}

}  // namespace rtj
