#include "jia/synth.h"

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <set>
#include <string_view>

#include "jia/lexicons.h"

namespace jia {

namespace {

using E = EventType;

const LabelSchema& schema() { return LabelSchema::Default(); }

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(g_() % n); }
  int between(int lo, int hi) { return lo + static_cast<int>(below(hi - lo + 1)); }
  bool chance(double p) {
    return static_cast<double>(g_() >> 11) * 0x1.0p-53 < p;
  }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }
  std::mt19937_64& engine() { return g_; }

 private:
  std::mt19937_64 g_;
};

std::string trig(E t) { return schema().info(t).tag_name; }
std::string role(E t, std::string_view r) { return schema().role_label(t, r); }

std::string pos_of(std::string_view w) {
  static const std::map<std::string, std::string, std::less<>> kPos = {
      {"in", "P"},    {"on", "P"},    {"at", "P"},     {"from", "P"},
      {"to", "P"},    {"with", "P"},  {"for", "P"},    {"since", "P"},
      {"the", "DT"},  {"a", "DT"},    {"an", "DT"},    {"this", "DT"},
      {"This", "DT"}, {"The", "DT"},  {"It", "PN"},    {"and", "CC"},
      {"is", "VC"},   {"am", "VC"},   {"was", "VC"},   {"have", "VE"},
      {"has", "VE"},  {"had", "VE"},  {"We", "PN"},    {"Our", "PN"},
      {"we", "PN"},   {"our", "PN"},  {"I", "PN"},     {"me", "PN"},
      {"my", "PN"},   {"he", "PN"},   {"He", "PN"},    {"him", "PN"},
      {"his", "PN"},  {"she", "PN"},  {"She", "PN"},   {"her", "PN"},
      {"not", "AD"},  {"never", "AD"}, {"no", "AD"},   {"did", "VV"},
      {"indeed", "AD"}, {"really", "AD"}, {"truly", "AD"}, {"often", "AD"},
      {"now", "AD"},  {"In", "P"},    {".", "PU"},     {",", "PU"},
      {"years", "M"}, {"old", "JJ"},  {"yuan", "M"},
  };
  if (auto it = kPos.find(w); it != kPos.end()) return it->second;
  if (!w.empty() && std::isdigit(static_cast<unsigned char>(w[0]))) return "CD";
  return "NN";
}

// Sentence under construction with one tag row per event.
class Builder {
 public:
  explicit Builder(std::size_t events) : rows_(events) {}

  Builder& w(std::string_view words, std::string_view pos = {}) {
    for (const auto& t : split_phrase(words)) {
      tokens_.push_back({t, pos.empty() ? pos_of(t) : std::string(pos)});
      for (auto& r : rows_) r.push_back("O");
    }
    return *this;
  }

  Builder& c(std::string_view words,
             const std::vector<std::pair<std::size_t, std::string>>& labels,
             std::string_view pos = {}) {
    bool first = true;
    for (const auto& t : split_phrase(words)) {
      tokens_.push_back({t, pos.empty() ? pos_of(t) : std::string(pos)});
      for (auto& r : rows_) r.push_back("O");
      for (const auto& [ev, label] : labels) {
        rows_[ev].back() = make_tag(first ? 'B' : 'I', label);
      }
      first = false;
    }
    return *this;
  }

  Sentence build() const {
    Sentence s;
    s.tokens = tokens_;
    std::vector<std::string> merged(tokens_.size(), "O");
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      for (const auto& r : rows_) {
        if (r[i] != "O") {
          merged[i] = r[i];
          break;
        }
      }
    }
    s.gold_labels = merged;
    s.gold_events = rows_;
    return s;
  }

 private:
  std::vector<Token> tokens_;
  std::vector<std::vector<std::string>> rows_;
};

// How one party refers to people.
struct Voice {
  Party speaker;
  bool formal = false;  // "the defendant" instead of a pronoun for the other

  std::string subj(Party p, bool capital) const {
    if (p == speaker) return "I";
    std::string s = p == Party::kPlaintiff ? "she" : "he";
    if (capital) s[0] = static_cast<char>(std::toupper(s[0]));
    return s;
  }
  std::string obj(Party p) const {
    if (p == speaker) return "me";
    return p == Party::kPlaintiff ? "her" : "him";
  }
  std::string poss(Party p) const {
    if (p == speaker) return "my";
    return p == Party::kPlaintiff ? "her" : "his";
  }
  std::string be(Party p) const { return p == speaker ? "am" : "is"; }
  std::string have(Party p) const { return p == speaker ? "have" : "has"; }
};

using Labels = std::vector<std::pair<std::size_t, std::string>>;

// A person chunk; the other party is sometimes named by role.
void person(Builder& b, const Voice& v, Party p, bool subject, bool capital,
            const Labels& labels) {
  if (p != v.speaker && v.formal) {
    b.w(capital ? "The" : "the");
    b.c(p == Party::kPlaintiff ? "plaintiff" : "defendant", labels, "NN");
    return;
  }
  b.c(subject ? v.subj(p, capital) : v.obj(p), labels, "PN");
}

struct Time {
  int year = 2000;
  int month = 0;  // 0 when absent
  int day = 0;
  int style = 0;  // 0 YYYY, 1 YYYY-MM, 2 Month YYYY, 3 YYYY-MM-DD

  std::string text() const {
    static const std::array<const char*, 12> kMonth = {
        "January", "February", "March",     "April",   "May",      "June",
        "July",    "August",   "September", "October", "November", "December"};
    auto two = [](int x) { return (x < 10 ? "0" : "") + std::to_string(x); };
    switch (style) {
      case 1: return std::to_string(year) + "-" + two(month);
      case 2: return std::string(kMonth[month - 1]) + " " + std::to_string(year);
      case 3: return std::to_string(year) + "-" + two(month) + "-" + two(day);
      default: return std::to_string(year);
    }
  }
};

Time random_time(Rng& rng, int year, bool month_needed = false) {
  Time t;
  t.year = year;
  t.month = rng.between(1, 12);
  t.day = rng.between(1, 28);
  std::size_t r = rng.below(10);
  t.style = r < 4 ? 0 : r < 7 ? 1 : r < 9 ? 2 : 3;
  if (month_needed && t.style == 0) t.style = 1;
  return t;
}

void polarity_word(Builder& b, E type, int pol, Rng& rng,
                   std::string_view negative = "never") {
  static const std::vector<std::string> kPositive = {"indeed", "really", "truly"};
  if (pol > 0) b.c(rng.pick(kPositive), {{0, role(type, "Polarity")}});
  if (pol < 0) b.c(negative, {{0, role(type, "Polarity")}});
}

struct Phrases {
  std::vector<std::string> common;
  std::vector<std::string> rare;
};

std::string choose(Rng& rng, const Phrases& p, double rare_rate) {
  if (!p.rare.empty() && rng.chance(rare_rate)) return rng.pick(p.rare);
  return rng.pick(p.common);
}

const std::vector<std::string> kChildNames = {
    "Lele", "Niuniu", "Doudou", "Tiantian", "Xiaobao", "Mengmeng", "Haohao",
    "Yuanyuan", "Dandan", "Beibei", "Guoguo", "Xinxin"};
const std::vector<std::string> kThirdParties = {
    "Zhang Wei", "Li Na",     "Wang Fang", "Liu Yang", "Chen Jie",
    "Zhao Lei",  "Sun Li",    "Zhou Min",  "Wu Hao",   "Xu Jing"};
const std::vector<std::string> kCourts = {
    "Haidian court", "Chaoyang court", "Xicheng court", "Dongcheng court",
    "Fengtai court", "Shunyi court"};
const std::vector<std::string> kDocuments = {"civil judgment", "civil ruling",
                                             "mediation statement"};
const std::vector<std::string> kResults = {"rejected", "dismissed", "granted"};
const std::vector<std::string> kAssets = {"house", "car", "apartment",
                                          "savings", "shop", "stocks"};
const std::vector<std::string> kHabits = {
    "gambling", "drinking", "drugs",       "prostitution", "pyramid selling",
    "stealing", "fighting", "online games", "fraud"};

const std::vector<std::string> kFiller = {
    "The hearing took place in the morning .",
    "Both sides presented evidence to the judge .",
    "The witness described the neighborhood in detail .",
    "The family lives in a quiet district of the city .",
    "The mediator asked several questions about the past .",
    "The parents visited during the spring festival .",
    "The documents were submitted before the deadline .",
    "The children attend a local school near the park .",
    "The weather was cold that winter .",
    "Relatives offered advice to both sides .",
    "The neighbors heard loud voices at night .",
    "The statement was prepared with the help of a lawyer .",
    "The village committee issued a certificate .",
    "The grandparents look after the children on weekends .",
    "The photos were attached to the file .",
    "The lawyer requested more time to prepare .",
    "The salary is paid at the end of each month .",
    "The family moved to the city to find work .",
    "The judge reminded both sides of their duties .",
    "The hospital records were reviewed by the clerk ."};

std::string money(long v) { return std::to_string(v) + " yuan"; }

struct CaseWriter {
  Rng& rng;
  const SynthConfig& cfg;
  std::string case_id;
  std::vector<Sentence> plaintiff;
  std::vector<Sentence> defendant;
  std::vector<IntendedPair> intended;
  Voice pv{Party::kPlaintiff};
  Voice dv{Party::kDefendant};

  static constexpr Party P = Party::kPlaintiff;
  static constexpr Party D = Party::kDefendant;

  Voice voice(Party who) {
    Voice v{who};
    v.formal = rng.chance(0.12);
    return v;
  }

  // Whether the defendant narrates an event and whether it contradicts.
  std::pair<bool, bool> plan() {
    bool narrate = rng.chance(cfg.defendant_rate);
    bool contra = narrate && rng.chance(cfg.contradiction_rate);
    return {narrate, contra};
  }

  void expect(E type, bool contra) {
    intended.push_back({case_id, type,
                        contra ? Verdict::kContradictory : Verdict::kEntailment});
  }

  Sentence know(const Voice& v, const Time& t, int variant, int pol) {
    Builder b(1);
    Party other = opposite(v.speaker);
    const std::string part = role(E::kKnow, "Participant");
    static const std::array<const char*, 3> kTrig = {"met", "got to know",
                                                     "became acquainted with"};
    person(b, v, v.speaker, true, true, {{0, part}});
    polarity_word(b, E::kKnow, pol, rng);
    b.c(kTrig[variant], {{0, trig(E::kKnow)}}, "VV");
    person(b, v, other, false, false, {{0, part}});
    b.w("in").c(t.text(), {{0, role(E::kKnow, "Time")}}, "NT").w(".");
    return b.build();
  }

  Sentence love(const Voice& v, const Time& t, int variant, int pol) {
    Builder b(1);
    Party other = opposite(v.speaker);
    const std::string part = role(E::kBeInLove, "Participant");
    if (variant == 0) {
      person(b, v, v.speaker, true, true, {{0, part}});
      polarity_word(b, E::kBeInLove, pol, rng);
      b.c("fell in love", {{0, trig(E::kBeInLove)}}, "VV").w("with");
      person(b, v, other, false, false, {{0, part}});
    } else {
      person(b, v, other, true, true, {{0, part}});
      b.w("and");
      person(b, v, v.speaker, true, false, {{0, part}});
      polarity_word(b, E::kBeInLove, pol, rng);
      b.c(variant == 1 ? "started dating" : "became lovers",
          {{0, trig(E::kBeInLove)}}, "VV");
    }
    b.w("in").c(t.text(), {{0, role(E::kBeInLove, "Time")}}, "NT").w(".");
    return b.build();
  }

  Sentence know_love(const Voice& v, const Time& t) {
    Builder b(2);
    Labels part = {{0, role(E::kKnow, "Participant")},
                   {1, role(E::kBeInLove, "Participant")}};
    person(b, v, opposite(v.speaker), true, true, part);
    b.w("and");
    person(b, v, v.speaker, true, false, part);
    b.c("met", {{0, trig(E::kKnow)}}, "VV").w("in");
    b.c(t.text(), {{0, role(E::kKnow, "Time")}, {1, role(E::kBeInLove, "Time")}},
        "NT");
    b.w("and").c("fell in love", {{1, trig(E::kBeInLove)}}, "VV").w(".");
    return b.build();
  }

  void know_and_love() {
    bool has_know = rng.chance(0.7);
    bool has_love = rng.chance(0.6);
    int year = rng.between(1990, 2008);
    Time tk = random_time(rng, year);
    Time tl = random_time(rng, year + static_cast<int>(rng.below(2)));
    auto variant = [&](int rare_index) {
      return rng.chance(cfg.rare_trigger_rate) ? rare_index
                                               : static_cast<int>(rng.below(2));
    };
    if (has_know) {
      auto [narrate, contra] = plan();
      plaintiff.push_back(know(voice(P), tk, variant(2), 0));
      if (narrate) {
        Time t = tk;
        if (contra) t.year += rng.between(1, 3);
        defendant.push_back(know(voice(D), t, variant(2), 0));
        expect(E::kKnow, contra);
      }
    }
    if (has_love) {
      auto [narrate, contra] = plan();
      plaintiff.push_back(love(voice(P), tl, variant(2), 0));
      if (narrate) {
        Time t = tl;
        if (contra) t.year += rng.between(1, 3);
        defendant.push_back(love(voice(D), t, variant(2), 0));
        expect(E::kBeInLove, contra);
      }
    }
  }

  // Plaintiff states both events in one sentence; the defendant, if at all,
  // separately.
  void shared_know_love() {
    int year = rng.between(1990, 2008);
    Time t = random_time(rng, year);
    plaintiff.push_back(know_love(voice(P), t));
    for (E type : {E::kKnow, E::kBeInLove}) {
      auto [narrate, contra] = plan();
      if (!narrate) continue;
      Time td = t;
      if (contra) td.year += rng.between(1, 3);
      int variant = rng.chance(cfg.rare_trigger_rate) ? 2 : static_cast<int>(rng.below(2));
      defendant.push_back(type == E::kKnow ? know(voice(D), td, variant, 0)
                                           : love(voice(D), td, variant, 0));
      expect(type, contra);
    }
  }

  Sentence marry(const std::string& trigger, const Time* t, int pol) {
    Builder b(1);
    b.w("We");
    polarity_word(b, E::kMarry, pol, rng);
    b.c(trigger, {{0, trig(E::kMarry)}}, "VV");
    if (t) b.w("in").c(t->text(), {{0, role(E::kMarry, "Time")}}, "NT");
    b.w(".");
    return b.build();
  }

  void marriage() {
    Phrases p{{"married", "registered marriage"}, {"tied the knot"}};
    Time t = random_time(rng, rng.between(1995, 2012));
    auto [narrate, contra] = plan();
    plaintiff.push_back(marry(choose(rng, p, cfg.rare_trigger_rate), &t,
                              contra ? 1 : 0));
    if (!narrate) return;
    if (contra) {
      defendant.push_back(marry(choose(rng, p, cfg.rare_trigger_rate), nullptr, -1));
    } else {
      defendant.push_back(marry(choose(rng, p, cfg.rare_trigger_rate),
                                rng.chance(0.7) ? &t : nullptr, 0));
    }
    expect(E::kMarry, contra);
  }

  Sentence remarry(const Voice& v, Party who, bool remarriage, bool rare) {
    Builder b(1);
    const std::string part = role(E::kRemarry, "Participant");
    if (remarriage && !rare) {
      person(b, v, who, true, true, {{0, part}});
      b.c("remarried", {{0, trig(E::kRemarry)}}, "VV").w(".");
    } else {
      b.w(remarriage ? "It was" : "This was");
      b.c(v.poss(who), {{0, part}}, "PN");
      b.c(remarriage ? "remarriage" : "first marriage", {{0, trig(E::kRemarry)}});
      b.w(".");
    }
    return b.build();
  }

  void remarriage() {
    Party who = rng.chance(0.7) ? D : P;
    bool claim = rng.chance(0.7);
    auto [narrate, contra] = plan();
    plaintiff.push_back(
        remarry(voice(P), who, claim, claim && rng.chance(cfg.rare_trigger_rate)));
    if (!narrate) return;
    bool d_claim = contra ? !claim : claim;
    defendant.push_back(
        remarry(voice(D), who, d_claim, d_claim && rng.chance(cfg.rare_trigger_rate)));
    expect(E::kRemarry, contra);
  }

  struct Child {
    std::string name;
    std::string gender;
    Time born;
    int age = 0;  // 0 when unstated
  };

  Sentence birth(const Child& c, int variant) {
    Builder b(1);
    auto attrs = [&] {
      b.c(c.gender, {{0, role(E::kBeBorn, "Gender")}});
      b.c(c.name, {{0, role(E::kBeBorn, "Name")}}, "NR");
    };
    if (variant == 0) {
      b.w("Our");
      attrs();
      b.c("was born", {{0, trig(E::kBeBorn)}}, "VV");
    } else {
      b.w("We").c(variant == 1 ? "gave birth to" : "delivered",
                  {{0, trig(E::kBeBorn)}}, "VV");
      b.w("a");
      attrs();
    }
    b.w("in").c(c.born.text(), {{0, role(E::kBeBorn, "Time")}}, "NT");
    if (c.age > 0) {
      b.w(", now").c(std::to_string(c.age), {{0, role(E::kBeBorn, "Age")}});
      b.w("years old");
    }
    b.w(".");
    return b.build();
  }

  Sentence twins(const Child& a, const Child& c) {
    Builder b(2);
    b.w("We").c("gave birth to", {{0, trig(E::kBeBorn)}, {1, trig(E::kBeBorn)}},
                "VV");
    b.w("a").c(a.gender, {{0, role(E::kBeBorn, "Gender")}});
    b.c(a.name, {{0, role(E::kBeBorn, "Name")}}, "NR");
    b.w("and a").c(c.gender, {{1, role(E::kBeBorn, "Gender")}});
    b.c(c.name, {{1, role(E::kBeBorn, "Name")}}, "NR");
    b.w("in").c(a.born.text(), {{0, role(E::kBeBorn, "Time")},
                                {1, role(E::kBeBorn, "Time")}}, "NT");
    b.w(".");
    return b.build();
  }

  int birth_variant() {
    return rng.chance(cfg.rare_trigger_rate) ? 2 : static_cast<int>(rng.below(2));
  }

  // The defendant's version of a child, possibly contradicting one attribute.
  void defendant_child(Child c, bool contra) {
    if (contra) {
      std::size_t what = rng.below(3);
      if (what == 0) {
        c.gender = c.gender == "son" ? "daughter" : "son";
      } else if (what == 1 || c.age == 0) {
        c.born.year += rng.between(1, 2);
        c.age = 0;
      } else {
        c.age += rng.between(1, 3);
      }
    }
    defendant.push_back(birth(c, birth_variant()));
    expect(E::kBeBorn, contra);
  }

  void births(bool twin) {
    std::vector<std::string> names = kChildNames;
    std::shuffle(names.begin(), names.end(), rng.engine());
    int year = rng.between(1998, 2015);
    auto make = [&](std::size_t i, int y) {
      Child c;
      c.name = names[i];
      c.gender = rng.chance(0.5) ? "son" : "daughter";
      c.born = random_time(rng, y);
      if (rng.chance(0.4)) c.age = rng.between(1, 15);
      return c;
    };
    if (twin) {
      Child a = make(0, year);
      Child c = make(1, year);
      c.born = a.born;
      a.age = c.age = 0;
      plaintiff.push_back(twins(a, c));
      for (const Child& k : {a, c}) {
        auto [narrate, contra] = plan();
        if (narrate) defendant_child(k, contra);
      }
      return;
    }
    std::size_t kids = rng.chance(0.25) ? 2 : 1;
    for (std::size_t i = 0; i < kids; ++i) {
      Child c = make(i, year + 3 * static_cast<int>(i));
      plaintiff.push_back(birth(c, birth_variant()));
      auto [narrate, contra] = plan();
      if (narrate) defendant_child(c, contra);
    }
  }

  Sentence conflict(const std::string& trigger, int pol) {
    Builder b(1);
    if (trigger == "harmonious" || trigger == "inharmonious") {
      b.w("Our relationship was").c(trigger, {{0, trig(E::kFamilyConflict)}}, "JJ");
    } else {
      b.w("We");
      polarity_word(b, E::kFamilyConflict, pol, rng);
      b.c(trigger, {{0, trig(E::kFamilyConflict)}}, "VV");
      if (trigger != "got along well") b.w("often");
    }
    b.w(".");
    return b.build();
  }

  void family_conflict() {
    Phrases p{{"quarreled", "inharmonious", "harmonious", "got along well"},
              {"bickered"}};
    std::string t = choose(rng, p, cfg.rare_trigger_rate);
    auto [narrate, contra] = plan();
    bool tendency = t == "harmonious" || t == "inharmonious";
    plaintiff.push_back(conflict(t, contra && !tendency ? 1 : 0));
    if (!narrate) return;
    if (contra && tendency) {
      defendant.push_back(conflict(t == "harmonious" ? "inharmonious" : "harmonious", 0));
    } else {
      defendant.push_back(conflict(t, contra ? -1 : 0));
    }
    expect(E::kFamilyConflict, contra);
  }

  struct Violence {
    Party perp;
    std::string trigger;
    Time when;
  };

  Sentence violence(const Voice& v, const Violence& f, bool with_time, int pol) {
    Builder b(1);
    person(b, v, f.perp, true, true, {{0, role(E::kDomesticViolence, "Perpetrators")}});
    polarity_word(b, E::kDomesticViolence, pol, rng);
    b.c(f.trigger, {{0, trig(E::kDomesticViolence)}}, "VV");
    person(b, v, opposite(f.perp), false, false,
           {{0, role(E::kDomesticViolence, "Victim")}});
    if (with_time) {
      b.w("in").c(f.when.text(), {{0, role(E::kDomesticViolence, "Time")}}, "NT");
    }
    b.w(".");
    return b.build();
  }

  // Family-Conflict and Domestic-Violence in one plaintiff sentence.
  Sentence scolded_and_beat(const Voice& v, const Violence& f) {
    Builder b(2);
    person(b, v, f.perp, true, true, {{1, role(E::kDomesticViolence, "Perpetrators")}});
    b.c("scolded", {{0, trig(E::kFamilyConflict)}}, "VV").w("and");
    b.c(f.trigger, {{1, trig(E::kDomesticViolence)}}, "VV");
    person(b, v, opposite(f.perp), false, false,
           {{1, role(E::kDomesticViolence, "Victim")}});
    b.w("in").c(f.when.text(), {{1, role(E::kDomesticViolence, "Time")}}, "NT");
    b.w(".");
    return b.build();
  }

  void domestic_violence(bool combined) {
    Phrases p{{"beat", "hit", "slapped"}, {"assaulted"}};
    Violence f{rng.chance(0.85) ? D : P, choose(rng, p, cfg.rare_trigger_rate),
               random_time(rng, rng.between(2000, 2018))};
    auto [narrate, contra] = plan();
    if (combined) {
      if (contra) narrate = contra = false;
      plaintiff.push_back(scolded_and_beat(voice(P), f));
    } else {
      plaintiff.push_back(violence(voice(P), f, true, contra ? 1 : 0));
    }
    if (!narrate) return;
    defendant.push_back(violence(voice(D), f, !contra && rng.chance(0.7),
                                 contra ? -1 : 0));
    expect(E::kDomesticViolence, contra);
  }

  Sentence habit(const Voice& v, Party who, const std::string& h, bool addicted,
                 int pol) {
    Builder b(1);
    person(b, v, who, true, true, {{0, role(E::kBadHabit, "Participant")}});
    if (addicted) {
      b.w(v.be(who));
      polarity_word(b, E::kBadHabit, pol, rng, "not");
      b.w("addicted to");
    } else {
      b.w(v.have(who) + " a");
    }
    b.c(h, {{0, trig(E::kBadHabit)}});
    if (!addicted) b.w("habit");
    b.w(".");
    return b.build();
  }

  void bad_habit() {
    Phrases p{kHabits, {"mahjong"}};
    Party who = rng.chance(0.85) ? D : P;
    std::string h = choose(rng, p, cfg.rare_trigger_rate);
    auto [narrate, contra] = plan();
    plaintiff.push_back(habit(voice(P), who, h, contra || rng.chance(0.6),
                              contra ? 1 : 0));
    if (!narrate) return;
    defendant.push_back(habit(voice(D), who, h, contra || rng.chance(0.6),
                              contra ? -1 : 0));
    expect(E::kBadHabit, contra);
  }

  Sentence derailed(const Voice& v, Party who, const std::string& trigger,
                    const std::string& target, const Time* when, int pol) {
    Builder b(1);
    person(b, v, who, true, true, {{0, role(E::kDerailed, "Derailed-Person")}});
    if (pol < 0) {
      b.w("had");
      polarity_word(b, E::kDerailed, pol, rng, "no");
      b.c("improper relationship", {{0, trig(E::kDerailed)}});
    } else {
      polarity_word(b, E::kDerailed, pol, rng);
      b.c(trigger, {{0, trig(E::kDerailed)}}, "VV");
    }
    if (trigger != "kept a mistress" || pol < 0) {
      b.w("with").c(target, {{0, role(E::kDerailed, "Derailed-Target")}}, "NR");
    }
    if (when) b.w("in").c(when->text(), {{0, role(E::kDerailed, "Time")}}, "NT");
    b.w(".");
    return b.build();
  }

  void derailment() {
    Phrases p{{"had an affair", "lived together", "cheated"}, {"kept a mistress"}};
    Party who = rng.chance(0.85) ? D : P;
    std::string t = choose(rng, p, cfg.rare_trigger_rate);
    std::string target = rng.pick(kThirdParties);
    Time when = random_time(rng, rng.between(2003, 2018));
    bool timed = rng.chance(0.7);
    auto [narrate, contra] = plan();
    plaintiff.push_back(derailed(voice(P), who, t, target, timed ? &when : nullptr,
                                 contra ? 1 : 0));
    if (!narrate) return;
    if (contra) {
      defendant.push_back(derailed(voice(D), who, t, target, nullptr, -1));
    } else {
      defendant.push_back(derailed(voice(D), who, t, target, timed ? &when : nullptr, 0));
    }
    expect(E::kDerailed, contra);
  }

  Sentence separated(int variant, const Time& begin, const Time& end, int years) {
    Builder b(1);
    b.w("We");
    const std::string bt = role(E::kSeparation, "Begin-Time");
    switch (variant) {
      case 0:
        b.c("separated", {{0, trig(E::kSeparation)}}, "VV").w("from");
        b.c(begin.text(), {{0, bt}}, "NT").w("to");
        b.c(end.text(), {{0, role(E::kSeparation, "End-Time")}}, "NT");
        break;
      case 1:
        b.c("lived apart", {{0, trig(E::kSeparation)}}, "VV").w("since");
        b.c(begin.text(), {{0, bt}}, "NT");
        break;
      case 2:
        b.c("split up", {{0, trig(E::kSeparation)}}, "VV").w("in");
        b.c(begin.text(), {{0, bt}}, "NT").w("and stayed apart for");
        b.c(std::to_string(years) + " years", {{0, role(E::kSeparation, "Duration")}});
        break;
      default:
        b.c("moved out", {{0, trig(E::kSeparation)}}, "VV").w("in");
        b.c(begin.text(), {{0, bt}}, "NT");
        break;
    }
    b.w(".");
    return b.build();
  }

  void separation() {
    int variant = rng.chance(cfg.rare_trigger_rate) ? 3 : static_cast<int>(rng.below(3));
    Time begin = random_time(rng, rng.between(2005, 2016), true);
    begin.month = rng.between(1, 6);
    begin.style = rng.chance(0.5) ? 1 : 2;
    Time end = begin;
    end.year += rng.between(1, 3);
    end.month = rng.between(1, 12);
    int years = end.year - begin.year;
    auto [narrate, contra] = plan();
    plaintiff.push_back(separated(variant, begin, end, years));
    if (!narrate) return;
    Time b2 = begin;
    if (contra) b2.month += rng.between(1, 6);
    defendant.push_back(separated(variant, b2, end, years));
    expect(E::kSeparation, contra);
  }

  struct Suit {
    Party initiator;
    Time sued;
    std::string court;
    std::string document;
    std::string result;
    Time sentenced;
  };

  Sentence lawsuit(const Voice& v, const Suit& s, int variant) {
    Builder b(1);
    const E T = E::kDivorceLawsuit;
    const Labels init = {{0, role(T, "Initiator")}};
    switch (variant) {
      case 0:
        b.w("In").c(s.sued.text(), {{0, role(T, "Sue-Time")}}, "NT").w(",");
        person(b, v, s.initiator, true, false, init);
        b.c("sued for divorce", {{0, trig(T)}}, "VV").w("at");
        b.c(s.court, {{0, role(T, "Court")}}, "NR").w(", and the");
        b.c(s.document, {{0, role(T, "Court-Verdict")}});
        b.c(s.result, {{0, role(T, "Result")}}, "VV").w("the claim on");
        b.c(s.sentenced.text(), {{0, role(T, "Sentence-Time")}}, "NT");
        break;
      case 1:
        person(b, v, s.initiator, true, true, init);
        b.c("filed a lawsuit", {{0, trig(T)}}, "VV").w("at");
        b.c(s.court, {{0, role(T, "Court")}}, "NR").w("in");
        b.c(s.sued.text(), {{0, role(T, "Sue-Time")}}, "NT");
        break;
      default:
        person(b, v, s.initiator, true, true, init);
        b.c("petitioned the court", {{0, trig(T)}}, "VV").w("for divorce in");
        b.c(s.sued.text(), {{0, role(T, "Sue-Time")}}, "NT");
        break;
    }
    b.w(".");
    return b.build();
  }

  Sentence double_lawsuit(const Voice& v, Party initiator, const Time& a,
                          const Time& c) {
    Builder b(2);
    const E T = E::kDivorceLawsuit;
    person(b, v, initiator, true, true,
           {{0, role(T, "Initiator")}, {1, role(T, "Initiator")}});
    b.c("sued for divorce", {{0, trig(T)}, {1, trig(T)}}, "VV").w("in");
    b.c(a.text(), {{0, role(T, "Sue-Time")}}, "NT").w("and in");
    b.c(c.text(), {{1, role(T, "Sue-Time")}}, "NT").w(".");
    return b.build();
  }

  void divorce_lawsuit() {
    Party init = rng.chance(0.7) ? P : D;
    int year = rng.between(2006, 2016);
    if (rng.chance(cfg.double_suit_rate)) {
      Time a = random_time(rng, year, true);
      Time c = random_time(rng, year + rng.between(1, 3), true);
      plaintiff.push_back(double_lawsuit(voice(P), init, a, c));
      if (rng.chance(cfg.defendant_rate)) {
        defendant.push_back(double_lawsuit(voice(D), init, a, c));
        expect(E::kDivorceLawsuit, false);
        expect(E::kDivorceLawsuit, false);
      }
      return;
    }
    Suit s{init,
           random_time(rng, year, true),
           rng.pick(kCourts),
           rng.pick(kDocuments),
           rng.pick(kResults),
           {}};
    s.sentenced = random_time(rng, year + 1);
    s.sentenced.style = 3;
    int variant = rng.chance(cfg.rare_trigger_rate) ? 2 : static_cast<int>(rng.below(2));
    auto [narrate, contra] = plan();
    if (contra && variant == 2) variant = 1;
    plaintiff.push_back(lawsuit(voice(P), s, variant));
    if (!narrate) return;
    Suit d = s;
    if (contra) {
      std::size_t what = variant == 0 ? rng.below(3) : 0;
      auto other = [&](const std::vector<std::string>& pool, const std::string& x) {
        std::string y = x;
        while (y == x) y = rng.pick(pool);
        return y;
      };
      if (what == 0) d.court = other(kCourts, s.court);
      if (what == 1) d.result = other(kResults, s.result);
      if (what == 2) d.sentenced.day = s.sentenced.day % 28 + 1;
    }
    defendant.push_back(lawsuit(voice(D), d, variant));
    expect(E::kDivorceLawsuit, contra);
  }

  struct Asset {
    std::string trigger;
    long value = 0;  // 0 when unstated
    bool common = true;
    Party owner = P;
  };

  Sentence wealth(const Voice& v, const Asset& a) {
    Builder b(1);
    const E T = E::kWealth;
    b.w("The").c(a.trigger, {{0, trig(T)}});
    if (a.value > 0) b.w("worth").c(money(a.value), {{0, role(T, "Value")}});
    b.w("is");
    if (a.common) {
      b.c("common property", {{0, role(T, "Is-Common")}});
    } else {
      b.c(v.poss(a.owner), {{0, role(T, "Whose")}}, "PN");
      b.c("personal property", {{0, role(T, "Is-Personal")}});
    }
    b.w(".");
    return b.build();
  }

  void wealth_items() {
    std::vector<std::string> assets = kAssets;
    std::shuffle(assets.begin(), assets.end(), rng.engine());
    std::size_t n = rng.chance(0.3) ? 2 : 1;
    for (std::size_t i = 0; i < n; ++i) {
      Asset a;
      a.trigger = i == 0 && rng.chance(cfg.rare_trigger_rate) ? "villa" : assets[i];
      if (rng.chance(0.7)) a.value = 1000L * rng.between(10, 900);
      a.common = rng.chance(0.6);
      a.owner = rng.chance(0.5) ? P : D;
      auto [narrate, contra] = plan();
      plaintiff.push_back(wealth(voice(P), a));
      if (!narrate) continue;
      Asset d = a;
      if (contra) {
        std::size_t what = rng.below(a.value > 0 ? 3 : 2);
        if (what == 0) {
          d.common = !a.common;
          d.owner = D;
        } else if (what == 1) {
          if (a.common) {
            d.common = false;
            d.owner = D;
          } else {
            d.owner = opposite(a.owner);
          }
        } else {
          d.value = a.value + 1000L * rng.between(1, 50);
        }
      }
      defendant.push_back(wealth(voice(D), d));
      expect(E::kWealth, contra);
    }
  }

  struct Loan {
    Party debtor;
    std::optional<Party> creditor;  // third party when empty
    std::string third;
    long value;
  };

  void creditor_chunk(Builder& b, const Voice& v, const Loan& l, bool subject,
                      bool capital) {
    const std::string cr = role(E::kDebt, "Creditor");
    if (l.creditor) {
      person(b, v, *l.creditor, subject, capital, {{0, cr}});
    } else {
      b.c(l.third, {{0, cr}}, "NR");
    }
  }

  Sentence debt(const Voice& v, const Loan& l, int variant) {
    Builder b(1);
    const E T = E::kDebt;
    const Labels debtor = {{0, role(T, "Debtor")}};
    if (variant == 2) {
      creditor_chunk(b, v, l, true, true);
      b.c("loaned", {{0, trig(T)}}, "VV").c(money(l.value), {{0, role(T, "Value")}});
      b.w("to");
      person(b, v, l.debtor, false, false, debtor);
    } else if (variant == 1) {
      person(b, v, l.debtor, true, true, debtor);
      b.c("owed", {{0, trig(T)}}, "VV");
      creditor_chunk(b, v, l, false, false);
      b.c(money(l.value), {{0, role(T, "Value")}});
    } else {
      person(b, v, l.debtor, true, true, debtor);
      b.c("borrowed", {{0, trig(T)}}, "VV").c(money(l.value), {{0, role(T, "Value")}});
      b.w("from");
      creditor_chunk(b, v, l, false, false);
    }
    b.w(".");
    return b.build();
  }

  void debts() {
    Loan l;
    l.debtor = rng.chance(0.7) ? D : P;
    if (rng.chance(0.3)) l.creditor = opposite(l.debtor);
    l.third = rng.pick(kThirdParties);
    l.value = 1000L * rng.between(5, 500);
    int variant = rng.chance(cfg.rare_trigger_rate) ? 2 : static_cast<int>(rng.below(2));
    auto [narrate, contra] = plan();
    plaintiff.push_back(debt(voice(P), l, variant));
    if (!narrate) return;
    Loan d = l;
    if (contra) d.value += 1000L * rng.between(1, 100);
    defendant.push_back(debt(voice(D), d, variant));
    expect(E::kDebt, contra);
  }
};

Sentence filler_sentence(Rng& rng) {
  Sentence s;
  for (const auto& w : split_phrase(rng.pick(kFiller))) s.tokens.push_back({w, pos_of(w)});
  s.gold_labels = std::vector<std::string>(s.tokens.size(), "O");
  return s;
}

// Mixes filler into a statement so document sizes fall in three bands.
void pad(std::vector<Sentence>& doc, Rng& rng, std::size_t band) {
  static const std::array<std::pair<int, int>, 3> kRange = {
      std::pair{0, 40}, std::pair{75, 110}, std::pair{150, 200}};
  int n = rng.between(kRange[band].first, kRange[band].second);
  for (int i = 0; i < n; ++i) {
    std::size_t at = rng.below(doc.size() + 1);
    doc.insert(doc.begin() + static_cast<std::ptrdiff_t>(at), filler_sentence(rng));
  }
}

std::vector<bool> exact_selection(Rng& rng, std::size_t n, double rate) {
  std::size_t k = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::llround(rate * static_cast<double>(n))));
  std::vector<bool> sel(n, false);
  std::fill(sel.begin(), sel.begin() + static_cast<std::ptrdiff_t>(k), true);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(sel[i - 1], sel[rng.below(i)]);
  }
  return sel;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SynthConfig& cfg) {
  Rng rng(cfg.seed);
  SyntheticCorpus out;
  auto shared = exact_selection(rng, cfg.cases, cfg.know_love_share_rate);
  auto twins = exact_selection(rng, cfg.cases, cfg.twins_rate);
  for (std::size_t k = 0; k < cfg.cases; ++k) {
    CaseWriter w{rng, cfg, "case" + std::to_string(k + 1), {}, {}, {}};
    if (shared[k]) {
      w.shared_know_love();
      ++out.know_love_shared;
    } else {
      w.know_and_love();
    }
    if (rng.chance(0.9)) w.marriage();
    if (rng.chance(0.15)) w.remarriage();
    if (twins[k]) {
      w.births(true);
      ++out.twins;
    } else if (rng.chance(0.6)) {
      w.births(false);
    }
    bool fc = rng.chance(0.6);
    bool dv = rng.chance(0.35);
    bool combined = fc && dv && rng.chance(0.4);
    if (fc && !combined) w.family_conflict();
    if (dv) w.domestic_violence(combined);
    if (rng.chance(0.3)) w.bad_habit();
    if (rng.chance(0.3)) w.derailment();
    if (rng.chance(0.4)) w.separation();
    if (rng.chance(0.3)) w.divorce_lawsuit();
    if (rng.chance(0.5)) w.wealth_items();
    if (rng.chance(0.3)) w.debts();

    if (cfg.filler) {
      std::size_t band = rng.below(3);
      pad(w.plaintiff, rng, band);
      pad(w.defendant, rng, band);
    }
    for (auto [party, sentences] :
         {std::pair{Party::kPlaintiff, &w.plaintiff},
          std::pair{Party::kDefendant, &w.defendant}}) {
      Document d;
      d.case_id = w.case_id;
      d.doc_id = w.case_id + (party == Party::kPlaintiff ? "-p" : "-d");
      d.party = party;
      d.sentences = std::move(*sentences);
      out.documents.push_back(std::move(d));
    }
    for (auto& p : w.intended) out.intended.push_back(std::move(p));
  }
  return out;
}

}  // namespace jia
