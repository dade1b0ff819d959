#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "jia/error.h"
#include "jia/extract.h"

using namespace jia;

namespace {

using Tags = std::vector<std::string>;

Sentence sentence(const std::string& words, Tags labels = {},
                  std::vector<Tags> events = {}) {
  Sentence s;
  for (auto& w : split_phrase(words)) s.tokens.push_back({w, "UNK"});
  if (!labels.empty()) s.gold_labels = labels;
  s.gold_events = std::move(events);
  return s;
}

Lexicons small_lexicons() {
  Lexicons lex;
  lex.triggers = TriggerLexicon{{"met", EventType::kKnow},
                                {"married", EventType::kMarry},
                                {"born", EventType::kBeBorn},
                                {"sued", EventType::kDivorceLawsuit},
                                {"scolded", EventType::kFamilyConflict}};
  lex.polarity = PolarityLexicon({"indeed"}, {"not", "never", "did not"});
  lex.aux.currency_units = {"yuan"};
  return lex;
}

const EventSkeleton* find_role(const std::vector<EventSkeleton>& v,
                               const std::string& role, std::size_t begin) {
  for (const auto& sk : v) {
    auto it = sk.roles.find(role);
    if (it != sk.roles.end() && it->second.front().begin == begin) return &sk;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("shared Be-Born trigger splits by unique roles") {
  Tags r1 = {"O", "B_Be_Born", "B_Gender", "B_Name", "O", "B_Gender", "B_Name"};
  auto out = apply_shared_trigger_rules(r1);
  REQUIRE(out.size() == 2);
  for (const auto& sk : out) {
    CHECK(sk.type == EventType::kBeBorn);
    CHECK(sk.trigger == Chunk{1, 2, "Be_Born"});
  }
  CHECK(out[0].roles.at("Gender").front().begin == 2);
  CHECK(out[0].roles.at("Name").front().begin == 3);
  CHECK(out[1].roles.at("Gender").front().begin == 5);
  CHECK(out[1].roles.at("Name").front().begin == 6);
}

TEST_CASE("shared-trigger rules stay quiet without surplus") {
  CHECK(apply_shared_trigger_rules({"O", "B_Be_Born", "B_Name"}).empty());
  CHECK(apply_shared_trigger_rules({"B_Know", "B_Time", "B_Person"}).empty());
  // Two triggers and two names: one instance each.
  CHECK(apply_shared_trigger_rules(
            {"B_Be_Born", "B_Name", "O", "B_Be_Born", "B_Name"})
            .empty());
}

TEST_CASE("Be-Born shares non-unique roles from the decode") {
  Tags r1 = {"B_Time", "O", "B_Be_Born", "B_Name", "O", "B_Name"};
  RoundTwoDecode d{{Chunk{2, 3, "Be_Born"}, EventType::kBeBorn},
                   {"B_BB.Time", "O", "B_Be_Born", "B_BB.Name", "O", "B_BB.Name"}};
  auto out = apply_shared_trigger_rules(r1, {d});
  REQUIRE(out.size() == 2);
  for (const auto& sk : out) {
    REQUIRE(sk.roles.contains("Time"));
    CHECK(sk.roles.at("Time").size() == 1);
    CHECK(sk.roles.at("Name").size() == 1);
  }
  CHECK(out[0].roles.at("Name").front().begin == 3);
  CHECK(out[1].roles.at("Name").front().begin == 5);
}

TEST_CASE("Divorce-Lawsuit Time rule") {
  Tags r1 = {"B_Time", "O", "B_Time", "B_Person", "B_Divorce_Lawsuit"};
  RoundTwoDecode dl{{Chunk{4, 5, "Divorce_Lawsuit"}, EventType::kDivorceLawsuit},
                    {"B_DL.Sue-Time", "O", "O", "B_DL.Initiator",
                     "B_Divorce_Lawsuit"}};
  auto out = apply_shared_trigger_rules(r1, {dl});
  REQUIRE(out.size() == 2);
  for (const auto& sk : out) {
    CHECK(sk.trigger == Chunk{4, 5, "Divorce_Lawsuit"});
    CHECK(sk.roles.at("Initiator").front().begin == 3);
    CHECK(sk.roles.at("Sue-Time").size() == 1);
  }
  CHECK(find_role(out, "Sue-Time", 0));
  CHECK(find_role(out, "Sue-Time", 2));

  // A Time taken by another event no longer counts.
  RoundTwoDecode m{{Chunk{1, 2, "Marry"}, EventType::kMarry},
                   {"B_M.Time", "B_Marry", "O", "O", "O"}};
  Tags r1m = {"B_Time", "B_Marry", "B_Time", "B_Person", "B_Divorce_Lawsuit"};
  dl.tags[1] = "O";
  CHECK(apply_shared_trigger_rules(r1m, {m, dl}).empty());

  // Flanking times: the side with more wins, ties go left.
  Tags flank = {"B_Time", "B_Divorce_Lawsuit", "B_Time", "O", "B_Time"};
  auto f = apply_shared_trigger_rules(flank);
  REQUIRE(f.size() == 2);
  CHECK(find_role(f, "Sue-Time", 2));
  CHECK(find_role(f, "Sue-Time", 4));
  CHECK(apply_shared_trigger_rules({"B_Time", "B_Divorce_Lawsuit", "B_Time"})
            .empty());
}

TEST_CASE("Divorce-Lawsuit courts") {
  Tags r1 = {"B_Divorce_Lawsuit", "B_Court", "I_Court", "O", "B_Court"};
  auto out = apply_shared_trigger_rules(r1);
  REQUIRE(out.size() == 2);
  CHECK(out[0].roles.at("Court").front() == Chunk{1, 3, "Court"});
  CHECK(out[1].roles.at("Court").front() == Chunk{4, 5, "Court"});
}

TEST_CASE("round-two mask") {
  Tags r1 = {"B_Know", "B_Court", "B_Time", "I_Time", "O", "B_Marry"};
  TriggerChunk know{Chunk{0, 1, "Know"}, EventType::kKnow};
  auto allowed = round_two_allowed_tags(r1, know);
  CHECK(allowed[0] == Tags{"B_Know"});
  CHECK(allowed[1] == Tags{"O"});
  CHECK(allowed[2] == Tags{"O", "B_K.Time"});
  CHECK(allowed[3] == Tags{"O", "I_K.Time"});
  CHECK(allowed[4] == Tags{"O"});
  CHECK(allowed[5] == Tags{"O"});

  TriggerChunk dl{Chunk{0, 1, "Divorce_Lawsuit"}, EventType::kDivorceLawsuit};
  auto a = round_two_allowed_tags({"B_Divorce_Lawsuit", "B_Time"}, dl);
  CHECK(a[1] == Tags{"O", "B_DL.Sue-Time", "B_DL.Sentence-Time"});
}

TEST_CASE("adjust_patterns") {
  auto lex = small_lexicons();
  Sentence s = sentence("he paid 5000 yuan and did not return 12.5");
  RoundOneResult r;
  r.tags = Tags(s.size(), "O");
  auto out = adjust_patterns(r, s, lex.polarity, lex.aux.currency_units);
  CHECK(out.tags == Tags{"O", "O", "B_Money", "I_Money", "O", "B_Polarity",
                         "I_Polarity", "O", "B_Money"});

  Sentence age = sentence("aged 5000 not");
  RoundOneResult tagged;
  tagged.tags = {"O", "B_Age", "B_Time"};
  CHECK(adjust_patterns(tagged, age, lex.polarity, lex.aux.currency_units).tags ==
        tagged.tags);

  Sentence unit = sentence("5000 yuan");
  RoundOneResult half;
  half.tags = {"O", "B_Person"};
  CHECK(adjust_patterns(half, unit, lex.polarity, lex.aux.currency_units).tags ==
        Tags{"B_Money", "B_Person"});
  CHECK_FALSE(adjust_patterns(RoundOneResult{0, {"O"}, {}}, sentence("5.000."),
                              lex.polarity, lex.aux.currency_units)
                  .tags[0]
                  .starts_with("B"));
}

TEST_CASE("gold round-two target keeps shared chunks") {
  Tags merged = {"B_K.Time", "B_K.Participant", "B_Know", "O", "B_Marry"};
  Sentence s = sentence("2005 Zhang met and married", merged,
                        {{"B_K.Time", "B_K.Participant", "B_Know", "O", "O"},
                         {"B_M.Time", "O", "O", "O", "B_Marry"}});
  auto r1 = gold_round_one_tags(s);
  CHECK(r1 == Tags{"B_Time", "B_Person", "B_Know", "O", "B_Marry"});
  auto tc = trigger_chunks(r1);
  REQUIRE(tc.size() == 2);
  CHECK(gold_round_two_target(s, tc[0]) == s.gold_events[0]);
  CHECK(gold_round_two_target(s, tc[1]) == s.gold_events[1]);
}

TEST_CASE("oracle taggers reproduce the gold mentions") {
  auto lex = small_lexicons();
  Document doc;
  doc.doc_id = "c1-p";
  doc.case_id = "c1";
  doc.party = Party::kPlaintiff;
  doc.sentences.push_back(sentence(
      "in 2005 Zhang and I met and married", {},
      {{"O", "B_K.Time", "B_K.Participant", "O", "O", "B_Know", "O", "O"},
       {"O", "B_M.Time", "O", "O", "O", "O", "O", "B_Marry"}}));
  doc.sentences[0].gold_labels =
      Tags{"O", "B_K.Time", "B_K.Participant", "O", "O", "B_Know", "O", "B_Marry"};
  doc.sentences.push_back(sentence("nothing happened", Tags{"O", "O"}));
  doc.sentences.push_back(sentence(
      "he never scolded me", Tags{"O", "B_FC.Polarity", "B_Family_Conflict", "O"}));

  auto res = extract_document(doc, OracleRoundOne{}, OracleRoundTwo{}, lex);
  CHECK(res.errors.empty());
  CHECK(res.traces.size() == 2);
  auto gold = gold_mentions(doc);
  CHECK(gold.size() == 3);
  CHECK(res.mentions == gold);
  CHECK(res.mentions[1].role_text("Time") == "2005");
  CHECK(res.mentions[2].role_text("Polarity") == "never");

  auto jsonl = mentions_to_jsonl(res.mentions);
  CHECK(parse_mentions_jsonl(jsonl) == res.mentions);
  CHECK_THROWS_AS(parse_mentions_jsonl("{\"case_id\":1}\n"), ValidationError);
}

TEST_CASE("document without triggers yields nothing") {
  Document doc;
  doc.doc_id = "d";
  doc.sentences.push_back(sentence("nothing to see", Tags{"O", "O", "O"}));
  auto res = extract_document(doc, OracleRoundOne{}, OracleRoundTwo{},
                              small_lexicons());
  CHECK(res.mentions.empty());
  CHECK(res.traces.empty());
}

TEST_CASE("per-sentence failures are collected") {
  Document doc;
  doc.doc_id = "d";
  doc.sentences.push_back(sentence("we met"));  // no gold for the oracle
  doc.sentences.push_back(sentence("we married", Tags{"O", "B_Marry"}));
  auto res = extract_document(doc, OracleRoundOne{}, OracleRoundTwo{},
                              small_lexicons());
  CHECK(res.errors.size() == 1);
  CHECK(res.mentions.size() == 1);
}

TEST_CASE("rule-based round two") {
  Sentence s = sentence("2003 Li 2005 Zhang met 2007 Wang");
  Tags r1 = {"B_Time", "B_Person", "B_Time", "B_Person", "B_Know", "B_Time",
             "B_Person"};
  TriggerChunk know{Chunk{4, 5, "Know"}, EventType::kKnow};
  CHECK(RuleRoundTwo{}.tag(s, r1, know) ==
        Tags{"O", "O", "B_K.Time", "B_K.Participant", "B_Know", "O", "O"});

  Sentence dv = sentence("Wang beat Li not");
  Tags r1dv = {"B_Person", "B_Domestic_Violence", "B_Person", "B_Polarity"};
  TriggerChunk beat{Chunk{1, 2, "Domestic_Violence"},
                    EventType::kDomesticViolence};
  CHECK(RuleRoundTwo{}.tag(dv, r1dv, beat) ==
        Tags{"B_DV.Perpetrators", "B_Domestic_Violence", "B_DV.Victim",
             "B_DV.Polarity"});
}

TEST_CASE("trained rounds recover a separable fixture") {
  auto lex = small_lexicons();
  std::vector<Document> docs;
  const char* names[] = {"Zhang", "Li", "Wang", "Zhao"};
  const char* years[] = {"2001", "2002", "2003", "2004", "2005"};
  for (int i = 0; i < 40; ++i) {
    Document d;
    d.doc_id = "d" + std::to_string(i);
    d.case_id = d.doc_id;
    std::string who = names[i % 4];
    std::string year = years[i % 5];
    Sentence s = sentence("in " + year + " I met " + who + " and married",
                          Tags{"O", "B_K.Time", "O", "B_Know", "B_K.Participant",
                               "O", "B_Marry"},
                          {{"O", "B_K.Time", "O", "B_Know", "B_K.Participant",
                            "O", "O"},
                           {"O", "B_M.Time", "O", "O", "O", "O", "B_Marry"}});
    d.sentences.push_back(s);
    d.sentences.push_back(sentence(
        "he scolded me in " + year,
        Tags{"O", "B_Family_Conflict", "O", "O", "O"}));
    docs.push_back(d);
  }
  auto m1 = new_round_one_model();
  auto ex1 = round_one_examples(docs, lex.triggers, m1, true);
  auto m2 = new_round_two_model();
  auto ex2 = round_two_examples(docs, lex.triggers, m2, true);
  CHECK(ex1.size() == 80);
  CHECK(ex2.size() == 120);
  crf::TrainConfig cfg;
  cfg.epochs = 15;
  cfg.batch_size = 8;
  m1 = crf::train(ex1, m1, cfg);
  m2 = crf::train(ex2, m2, cfg);

  CrfRoundOne r1(m1);
  CrfRoundTwo r2(m2);
  for (const auto& d : docs) {
    auto got = extract_document(d, r1, r2, lex);
    CHECK(got.errors.empty());
    CHECK(got.mentions == gold_mentions(d));
  }

  // Unseen name and year.
  Document fresh;
  fresh.doc_id = "x";
  fresh.sentences.push_back(sentence("in 1999 I met Qian and married"));
  auto got = extract_document(fresh, r1, r2, lex);
  REQUIRE(got.mentions.size() == 2);
  CHECK(got.mentions[0].type == EventType::kKnow);
  CHECK(got.mentions[0].role_text("Time") == "1999");
  CHECK(got.mentions[0].role_text("Participant") == "Qian");
  CHECK(got.mentions[1].type == EventType::kMarry);
  CHECK(got.mentions[1].role_text("Time") == "1999");
}

TEST_CASE("arguments overlapping the trigger are dropped") {
  EventMention m;
  m.type = EventType::kKnow;
  m.trigger = {1, 2, "met"};
  m.roles["Time"] = {{0, 2, "x met"}};
  CHECK_THROWS_AS(check_mention(m, 3), std::logic_error);
  m.roles["Time"] = {{0, 1, "x"}};
  CHECK_NOTHROW(check_mention(m, 3));
  m.roles["Court"] = {{2, 3, "y"}};
  CHECK_THROWS_AS(check_mention(m, 3), std::logic_error);
}
