// Event schema for divorce-case statements: the 13 event types, their
// argument roles, the coarse transition labels used by the first labeling
// round, and the BIO tag vocabularies derived from them.

#ifndef JIA_SCHEMA_H_
#define JIA_SCHEMA_H_

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace jia {

enum class EventType : int {
  kKnow = 0,
  kBeInLove,
  kMarry,
  kRemarry,
  kBeBorn,
  kFamilyConflict,
  kDomesticViolence,
  kBadHabit,
  kDerailed,
  kSeparation,
  kDivorceLawsuit,
  kWealth,
  kDebt,
};

inline constexpr int kNumEventTypes = 13;

enum class Party { kPlaintiff, kDefendant };

std::string_view party_name(Party p);
std::optional<Party> party_from_name(std::string_view s);
inline Party opposite(Party p) {
  return p == Party::kPlaintiff ? Party::kDefendant : Party::kPlaintiff;
}

// Pseudo-attribute naming the trigger chunk in key-attribute lists.
inline constexpr std::string_view kTriggerAttribute = "Trigger";

struct EventTypeInfo {
  EventType type;
  std::string abbr;          // "BB"
  std::string tag_name;      // "Be_Born", used in B_/I_ trigger tags
  std::string display_name;  // "Be-Born"
  std::vector<std::string> roles;           // key roles first, then non-key
  std::vector<std::string> key_attributes;  // may contain kTriggerAttribute
  bool unique;                              // auto-aligned across parties
};

// A BIO tag split into its prefix and label. prefix is 'O', 'B' or 'I'.
struct ParsedTag {
  char prefix = 'O';
  std::string label;
};

ParsedTag parse_tag(std::string_view tag);
std::string make_tag(char prefix, std::string_view label);

class LabelSchema {
 public:
  static const LabelSchema& Default();

  const std::vector<EventTypeInfo>& event_types() const { return types_; }
  const EventTypeInfo& info(EventType t) const {
    return types_[static_cast<int>(t)];
  }
  std::optional<EventType> event_by_abbr(std::string_view abbr) const;
  std::optional<EventType> event_by_tag_name(std::string_view name) const;
  // Accepts abbreviation, tag name or display name.
  std::optional<EventType> event_by_any_name(std::string_view name) const;

  const std::vector<std::string>& transition_labels() const {
    return transition_labels_;
  }
  bool is_transition_label(std::string_view label) const;

  bool has_role(EventType t, std::string_view role) const;
  // Throws std::logic_error when (t, role) is not in the schema.
  const std::string& role_to_transition(EventType t,
                                        std::string_view role) const;
  // All (event, role) pairs, 46 in the canonical schema.
  const std::vector<std::pair<EventType, std::string>>& final_roles() const {
    return final_roles_;
  }
  // Roles of t whose transition label equals `transition`.
  std::vector<std::string> roles_with_transition(
      EventType t, std::string_view transition) const;

  // Label of a role chunk in final tags, e.g. "DL.Court".
  std::string role_label(EventType t, std::string_view role) const;
  // Decodes "DL.Court" into (kDivorceLawsuit, "Court").
  std::optional<std::pair<EventType, std::string>> parse_role_label(
      std::string_view label) const;

  // O first, then B_/I_ for each trigger type, then for each transition
  // label: 53 tags.
  const std::vector<std::string>& first_round_tags() const {
    return first_round_tags_;
  }
  // O first, then B_/I_ for each trigger type, then for each final role.
  const std::vector<std::string>& final_tags() const { return final_tags_; }

  const std::unordered_set<std::string>& first_round_vocabulary() const {
    return first_round_vocab_;
  }
  const std::unordered_set<std::string>& final_vocabulary() const {
    return final_vocab_;
  }
  const std::unordered_set<std::string>& any_vocabulary() const {
    return any_vocab_;
  }

 private:
  LabelSchema();

  std::vector<EventTypeInfo> types_;
  std::vector<std::string> transition_labels_;
  std::vector<std::pair<EventType, std::string>> final_roles_;
  std::unordered_map<std::string, std::string> role_transition_;  // "DL.Court"
  std::vector<std::string> first_round_tags_;
  std::vector<std::string> final_tags_;
  std::unordered_set<std::string> first_round_vocab_;
  std::unordered_set<std::string> final_vocab_;
  std::unordered_set<std::string> any_vocab_;
};

}  // namespace jia

#endif  // JIA_SCHEMA_H_
