#pragma once

// Definability table for the henselian valuations of a tower field. Group
// predicates, residue fields and power class indices are computed; the
// Yes/No entries apply cited theorems to those computed facts.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "valdef/construction.hpp"
#include "valdef/powers.hpp"

namespace valdef {

struct TableCell {
  std::string value;  // "Yes", "No" or "?"
  std::string basis;  // "cited" or "computed"
  std::string reason;
};

struct TableRow {
  std::size_t level = 0;
  GroupShape group;
  std::string residue;
  std::uint32_t residue_characteristic = 0;
  bool residue_finite = false;
  std::optional<std::uint64_t> square_class_index;
  bool discrete = false;
  bool two_regular = false;
  bool z_group = false;
  bool regular_quotient = false;
  bool no_two_divisible_convex = false;
  std::optional<char> noE_case;
  TableCell exists_mac, forall_mac, exists_forall_ring, forall_exists_ring;
};

namespace detail {

inline TableCell unknown_cell(std::string why) { return TableCell{"?", "cited", std::move(why)}; }

}  // namespace detail

inline TableRow table_row(const FieldPtr& f, std::size_t level) {
  f->require_level(level);
  if (level == 0) throw PreconditionViolation("level 0 is the trivial valuation");
  TableRow r;
  r.level = level;
  r.group = f->value_group(level);
  const FieldPtr rf = f->residue_field(level);
  r.residue = rf->to_string();
  r.residue_characteristic = rf->characteristic();
  r.residue_finite = rf->kind() == Field::Kind::Base && rf->base_field()->is_finite();
  try {
    r.square_class_index = power_class_index(*rf, 2);
  } catch (const Unsupported&) {
  }
  r.discrete = is_discrete(r.group).has_value();
  r.two_regular = is_p_regular(r.group, 2);
  r.z_group = is_Z_group(r.group);
  r.regular_quotient = has_regular_quotient(r.group);
  r.no_two_divisible_convex = r.group.factor(0) == Factor::Z;
  r.noE_case = qualifies_for_noE(*rf);

  if (r.residue_finite && r.residue_characteristic != 2) {
    r.exists_mac = {"Yes", "cited", "finite residue field of characteristic not 2"};
  } else if (r.residue_characteristic == 0 && r.noE_case && r.regular_quotient) {
    r.exists_mac = {"No", "cited",
                    std::string("value group has a regular quotient and the residue field meets case (") +
                        *r.noE_case + ")"};
  } else {
    r.exists_mac = detail::unknown_cell("no listed criterion applies");
  }

  if (r.residue_characteristic != 2 && r.square_class_index && r.no_two_divisible_convex) {
    r.forall_mac = {"Yes", "cited",
                    "residue square class index " + std::to_string(*r.square_class_index) +
                        ", no 2-divisible convex subgroup"};
  } else {
    r.forall_mac = detail::unknown_cell("index or convex subgroup condition not established");
  }

  if (r.discrete && r.two_regular) {
    r.exists_forall_ring = {"Yes", "cited", "discrete 2-regular value group"};
  } else if (r.exists_mac.value == "Yes") {
    r.exists_forall_ring = {"Yes", "cited", "follows from the existential Macintyre definition"};
  } else {
    r.exists_forall_ring = detail::unknown_cell("neither a Z-group nor existentially definable");
  }

  if (r.forall_mac.value == "Yes") {
    r.forall_exists_ring = {"Yes", "cited", "eliminate P_2 from the universal Macintyre definition"};
  } else {
    r.forall_exists_ring = detail::unknown_cell("no universal Macintyre definition established");
  }
  return r;
}

/// Rows for v_1 .. v_depth.
inline std::vector<TableRow> definability_table(const FieldPtr& f) {
  if (f->depth() == 0) throw Unsupported(f->to_string() + " carries no nontrivial henselian valuation");
  if (!f->has_elements() && f->kind() != Field::Kind::Series) throw Unsupported("unsupported tower");
  std::vector<TableRow> rows;
  for (std::size_t j = 1; j <= f->depth(); ++j) rows.push_back(table_row(f, j));
  return rows;
}

inline nlohmann::json to_json(const TableCell& c) {
  return {{"value", c.value}, {"basis", c.basis}, {"reason", c.reason}};
}

inline nlohmann::json to_json(const TableRow& r) {
  nlohmann::json facts = {
      {"value_group", {{"value", r.group.to_string()}, {"basis", "computed"}}},
      {"residue_field", {{"value", r.residue}, {"basis", "computed"}}},
      {"residue_characteristic", {{"value", r.residue_characteristic}, {"basis", "computed"}}},
      {"square_class_index",
       {{"value", r.square_class_index ? nlohmann::json(*r.square_class_index) : nlohmann::json(nullptr)},
        {"basis", "computed"}}},
      {"discrete", {{"value", r.discrete}, {"basis", "computed"}}},
      {"two_regular", {{"value", r.two_regular}, {"basis", "computed"}}},
      {"z_group", {{"value", r.z_group}, {"basis", "computed"}}},
      {"regular_quotient", {{"value", r.regular_quotient}, {"basis", "computed"}}},
      {"noE_case", {{"value", r.noE_case ? nlohmann::json(std::string(1, *r.noE_case)) : nlohmann::json(nullptr)},
                    {"basis", "computed"}}},
  };
  return {{"level", r.level},
          {"facts", facts},
          {"exists_mac", to_json(r.exists_mac)},
          {"forall_mac", to_json(r.forall_mac)},
          {"exists_forall_ring", to_json(r.exists_forall_ring)},
          {"forall_exists_ring", to_json(r.forall_exists_ring)}};
}

}  // namespace valdef
