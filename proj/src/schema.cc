#include "jia/schema.h"

#include <stdexcept>

namespace jia {

std::string_view party_name(Party p) {
  return p == Party::kPlaintiff ? "plaintiff" : "defendant";
}

std::optional<Party> party_from_name(std::string_view s) {
  if (s == "plaintiff" || s == "Plaintiff") return Party::kPlaintiff;
  if (s == "defendant" || s == "Defendant") return Party::kDefendant;
  return std::nullopt;
}

ParsedTag parse_tag(std::string_view tag) {
  ParsedTag out;
  if (tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '_') {
    out.prefix = tag[0];
    out.label = std::string(tag.substr(2));
  } else {
    out.prefix = 'O';
    if (tag != "O") out.label = std::string(tag);
  }
  return out;
}

std::string make_tag(char prefix, std::string_view label) {
  if (prefix == 'O') return "O";
  std::string t(1, prefix);
  t += '_';
  t += label;
  return t;
}

const LabelSchema& LabelSchema::Default() {
  static const LabelSchema schema;
  return schema;
}

LabelSchema::LabelSchema() {
  using E = EventType;
  // Table of event types. Role lists are key attributes followed by the
  // non-key attributes; every type carries Polarity.
  types_ = {
      {E::kKnow, "K", "Know", "Know", {"Time", "Participant", "Polarity"},
       {"Time", "Participant"}, true},
      {E::kBeInLove, "BIL", "Be_In_Love", "Be-In-Love",
       {"Time", "Participant", "Polarity"}, {"Time", "Participant"}, true},
      {E::kMarry, "M", "Marry", "Marry", {"Time", "Polarity"}, {"Time"},
       false},
      {E::kRemarry, "R", "Remarry", "Remarry", {"Participant", "Polarity"},
       {"Participant"}, false},
      {E::kBeBorn, "BB", "Be_Born", "Be-Born",
       {"Name", "Time", "Gender", "Age", "Polarity"}, {"Name"}, false},
      {E::kFamilyConflict, "FC", "Family_Conflict", "Family-Conflict",
       {"Polarity"}, {std::string(kTriggerAttribute)}, false},
      {E::kDomesticViolence, "DV", "Domestic_Violence", "Domestic-Violence",
       {"Time", "Perpetrators", "Victim", "Polarity"},
       {"Time", "Perpetrators", "Victim"}, false},
      {E::kBadHabit, "BH", "Bad_Habit", "Bad-Habit",
       {"Participant", "Polarity"},
       {"Participant", std::string(kTriggerAttribute)}, false},
      {E::kDerailed, "DE", "Derailed", "Derailed",
       {"Time", "Derailed-Person", "Derailed-Target", "Polarity"},
       {"Time", "Derailed-Person", "Derailed-Target"}, false},
      {E::kSeparation, "S", "Separation", "Separation",
       {"Begin-Time", "End-Time", "Duration", "Polarity"},
       {"Begin-Time", "End-Time"}, false},
      {E::kDivorceLawsuit, "DL", "Divorce_Lawsuit", "Divorce-Lawsuit",
       {"Sue-Time", "Initiator", "Court", "Sentence-Time", "Court-Verdict",
        "Result", "Polarity"},
       {"Sue-Time", "Initiator"}, false},
      {E::kWealth, "W", "Wealth", "Wealth",
       {"Value", "Is-Common", "Is-Personal", "Whose", "Polarity"},
       {std::string(kTriggerAttribute)}, false},
      {E::kDebt, "D", "Debt", "Debt",
       {"Debtor", "Creditor", "Value", "Polarity"}, {"Debtor", "Creditor"},
       false},
  };

  transition_labels_ = {"Time",        "Person",    "Name",  "Gender",
                        "Age",         "Duration",  "Is-Personal",
                        "Is-Common",   "Money",     "Court", "Document",
                        "Result",      "Polarity"};

  static const std::unordered_map<std::string, std::string> kRenamed = {
      {"Time", "Time"},           {"Begin-Time", "Time"},
      {"End-Time", "Time"},       {"Sue-Time", "Time"},
      {"Sentence-Time", "Time"},  {"Participant", "Person"},
      {"Perpetrators", "Person"}, {"Victim", "Person"},
      {"Derailed-Person", "Person"}, {"Derailed-Target", "Person"},
      {"Initiator", "Person"},    {"Debtor", "Person"},
      {"Creditor", "Person"},     {"Whose", "Person"},
      {"Value", "Money"},         {"Court-Verdict", "Document"},
  };

  for (const auto& info : types_) {
    for (const auto& role : info.roles) {
      final_roles_.emplace_back(info.type, role);
      auto it = kRenamed.find(role);
      const std::string& target = it != kRenamed.end() ? it->second : role;
      if (!is_transition_label(target)) {
        throw std::logic_error("role without transition label: " + role);
      }
      role_transition_[role_label(info.type, role)] = target;
    }
  }

  first_round_tags_.push_back("O");
  final_tags_.push_back("O");
  for (const auto& info : types_) {
    for (char p : {'B', 'I'}) {
      first_round_tags_.push_back(make_tag(p, info.tag_name));
      final_tags_.push_back(make_tag(p, info.tag_name));
    }
  }
  for (const auto& label : transition_labels_) {
    for (char p : {'B', 'I'}) first_round_tags_.push_back(make_tag(p, label));
  }
  for (const auto& [type, role] : final_roles_) {
    for (char p : {'B', 'I'}) {
      final_tags_.push_back(make_tag(p, role_label(type, role)));
    }
  }
  first_round_vocab_.insert(first_round_tags_.begin(), first_round_tags_.end());
  final_vocab_.insert(final_tags_.begin(), final_tags_.end());
  any_vocab_ = first_round_vocab_;
  any_vocab_.insert(final_vocab_.begin(), final_vocab_.end());
}

std::optional<EventType> LabelSchema::event_by_abbr(
    std::string_view abbr) const {
  for (const auto& info : types_) {
    if (info.abbr == abbr) return info.type;
  }
  return std::nullopt;
}

std::optional<EventType> LabelSchema::event_by_tag_name(
    std::string_view name) const {
  for (const auto& info : types_) {
    if (info.tag_name == name) return info.type;
  }
  return std::nullopt;
}

std::optional<EventType> LabelSchema::event_by_any_name(
    std::string_view name) const {
  for (const auto& info : types_) {
    if (info.abbr == name || info.tag_name == name ||
        info.display_name == name) {
      return info.type;
    }
  }
  return std::nullopt;
}

bool LabelSchema::is_transition_label(std::string_view label) const {
  for (const auto& l : transition_labels_) {
    if (l == label) return true;
  }
  return false;
}

bool LabelSchema::has_role(EventType t, std::string_view role) const {
  for (const auto& r : info(t).roles) {
    if (r == role) return true;
  }
  return false;
}

const std::string& LabelSchema::role_to_transition(
    EventType t, std::string_view role) const {
  auto it = role_transition_.find(role_label(t, role));
  if (it == role_transition_.end()) {
    throw std::logic_error("schema has no role " + role_label(t, role));
  }
  return it->second;
}

std::vector<std::string> LabelSchema::roles_with_transition(
    EventType t, std::string_view transition) const {
  std::vector<std::string> out;
  for (const auto& role : info(t).roles) {
    if (role_to_transition(t, role) == transition) out.push_back(role);
  }
  return out;
}

std::string LabelSchema::role_label(EventType t, std::string_view role) const {
  std::string s = info(t).abbr;
  s += '.';
  s += role;
  return s;
}

std::optional<std::pair<EventType, std::string>>
LabelSchema::parse_role_label(std::string_view label) const {
  auto dot = label.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  auto type = event_by_abbr(label.substr(0, dot));
  if (!type) return std::nullopt;
  std::string role(label.substr(dot + 1));
  if (!has_role(*type, role)) return std::nullopt;
  return std::make_pair(*type, role);
}

}  // namespace jia
