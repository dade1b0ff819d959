// Synthetic divorce-case corpus with gold event annotation.
//
// Every case has a plaintiff and a defendant statement in English-like
// tokens. Both narrate a shared set of facts; the defendant version of some
// events is altered to contradict the plaintiff. Sentences without trigger
// candidates are filler labelled all O.

#ifndef JIA_SYNTH_H_
#define JIA_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "jia/conflict.h"
#include "jia/corpus.h"

namespace jia {

struct SynthConfig {
  std::size_t cases = 100;
  std::uint64_t seed = 7;
  // Fraction of cases whose plaintiff states Know and Be-In-Love in one
  // sentence sharing Time and Participant.
  double know_love_share_rate = 481.0 / 3100.0;
  // Fraction of cases with twins announced under one Be-Born trigger.
  double twins_rate = 124.0 / 3100.0;
  // Fraction of Divorce-Lawsuit mentions naming two suits under one trigger.
  double double_suit_rate = 0.05;
  // Chance the defendant also narrates an event, and chance that such a
  // narration contradicts the plaintiff.
  double defendant_rate = 0.75;
  double contradiction_rate = 0.35;
  // Chance a trigger is drawn from the rarely used variants.
  double rare_trigger_rate = 0.06;
  bool filler = true;
};

struct IntendedPair {
  std::string case_id;
  EventType type = EventType::kKnow;
  Verdict label = Verdict::kEntailment;
};

struct SyntheticCorpus {
  std::vector<Document> documents;  // plaintiff then defendant per case
  std::vector<IntendedPair> intended;
  std::size_t know_love_shared = 0;  // sentences with the shared pattern
  std::size_t twins = 0;             // sentences with a shared Be-Born trigger
};

SyntheticCorpus generate_synthetic(const SynthConfig& config);

}  // namespace jia

#endif  // JIA_SYNTH_H_
