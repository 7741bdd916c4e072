#include "rtj/model.hpp"

#include <algorithm>
#include <cmath>

namespace rtj {

const char* to_string(StatementKind kind) {
  switch (kind) {
    case StatementKind::Call: return "call";
    case StatementKind::Conditional: return "conditional";
    case StatementKind::Loop: return "loop";
    case StatementKind::Return: return "return";
    case StatementKind::Block: return "block";
    case StatementKind::Other: return "other";
  }
  return "other";
}

bool Literal::equals(const Literal& other) const {
  if (!is_literal() || !other.is_literal()) return false;
  if (kind != other.kind) {
    // bool/number cross-compare mirrors the host semantics (True == 1).
    auto numeric = [](const Literal& l) {
      return l.kind == Kind::Bool ? (l.bool_value ? 1.0 : 0.0) : l.number_value;
    };
    bool lhs_num = kind == Kind::Bool || kind == Kind::Number;
    bool rhs_num = other.kind == Kind::Bool || other.kind == Kind::Number;
    if (lhs_num && rhs_num) return numeric(*this) == numeric(other);
    return false;
  }
  switch (kind) {
    case Kind::Bool: return bool_value == other.bool_value;
    case Kind::Number: return number_value == other.number_value;
    case Kind::String: return string_value == other.string_value;
    case Kind::None: return true;
    case Kind::NotALiteral: return false;
  }
  return false;
}

ProgramModel::ProgramModel(std::vector<Unit> units) : units_(std::move(units)) {
  std::sort(units_.begin(), units_.end(),
            [](const Unit& a, const Unit& b) { return a.path < b.path; });
  for (auto& unit : units_) {
    std::sort(unit.methods.begin(), unit.methods.end(),
              [](const Method& a, const Method& b) { return a.loc.line < b.loc.line; });
  }
  // Two passes: ids first (vectors no longer move afterwards), then pointers.
  for (auto& unit : units_) {
    for (auto& method : unit.methods) {
      method.loc.element_id = next_id_++;
      method.loc.file = unit.path;
      struct Walk {
        ElementId* next;
        int order = 0;
        void run(Statement& s, const std::string& file) {
          s.loc.element_id = (*next)++;
          s.loc.file = file;
          s.order_index = order++;
          for (auto& child : s.children) run(child, file);
        }
      } walk{&next_id_};
      walk.run(method.body, unit.path);
    }
  }
  for (auto& unit : units_) {
    for (auto& method : unit.methods) {
      methods_[method.loc.element_id] = &method;
      owners_[method.loc.element_id] = &method;
      index_statement(method.body, unit.path, &method);
    }
  }
}

void ProgramModel::index_statement(Statement& stmt, const std::string& file, const Method* owner) {
  statements_[stmt.loc.element_id] = &stmt;
  owners_[stmt.loc.element_id] = owner;
  for (auto& child : stmt.children) {
    parent_[child.loc.element_id] = stmt.loc.element_id;
    index_statement(child, file, owner);
  }
}

const Method* ProgramModel::find_method(ElementId id) const {
  auto it = methods_.find(id);
  return it == methods_.end() ? nullptr : it->second;
}

const Statement* ProgramModel::find_statement(ElementId id) const {
  auto it = statements_.find(id);
  return it == statements_.end() ? nullptr : it->second;
}

const Method* ProgramModel::owner_of(ElementId id) const {
  auto it = owners_.find(id);
  return it == owners_.end() ? nullptr : it->second;
}

const Method* ProgramModel::method_by_qualified_name(const std::string& qualified) const {
  for (const auto& unit : units_) {
    for (const auto& method : unit.methods) {
      if (method.qualified == qualified) return &method;
    }
  }
  return nullptr;
}

std::vector<const Statement*> ProgramModel::ancestors_of(ElementId id) const {
  std::vector<const Statement*> chain;
  auto it = parent_.find(id);
  while (it != parent_.end()) {
    ElementId parent = it->second;
    const Statement* stmt = find_statement(parent);
    if (stmt == nullptr) break;
    const Method* owner = owner_of(parent);
    if (owner != nullptr && owner->body.loc.element_id == parent) break;  // stop below the body root
    chain.push_back(stmt);
    it = parent_.find(parent);
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

}  // namespace rtj
