// Copyright 2026 The Spanlink Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "spanlink/corpus.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.h"
#include "spanlink/errors.h"

namespace spanlink {
namespace {

// Two documents in NCBI style, with a composite mention, a non-disease
// mention and a relation line.
constexpr char kSample[] =
    "# exported sample\n"
    "10192393|t|A common MSH2 mutation in English and North American HNPCC "
    "families.\n"
    "10192393|a|Germline mutations in MSH2 and MLH1 account for most "
    "hereditary nonpolyposis colorectal cancer (HNPCC). Breast and ovarian "
    "cancer were rare.\n"
    "10192393\t53\t58\tHNPCC\tSpecificDisease\tD003123\n"
    "10192393\t122\t163\thereditary nonpolyposis colorectal cancer\t"
    "SpecificDisease\tD003123\n"
    "10192393\t165\t170\tHNPCC\tSpecificDisease\tD003123\n"
    "10192393\t173\t198\tBreast and ovarian cancer\tCompositeMention\t"
    "D001943|D010051\n"
    "10192393\t9\t13\tMSH2\tGene\t4436\n"
    "\n";

std::string FirstDocument() {
  std::string s = kSample;
  return s.substr(0, s.find("\n\n") + 2);
}

TEST(CanonicalCuiTest, Forms) {
  EXPECT_EQ(CanonicalCui("D003123"), "MESH:D003123");
  EXPECT_EQ(CanonicalCui("C565248"), "MESH:C565248");
  EXPECT_EQ(CanonicalCui("mesh:D003123"), "MESH:D003123");
  EXPECT_EQ(CanonicalCui("OMIM:114480"), "OMIM:114480");
  EXPECT_EQ(CanonicalCui("114480"), "OMIM:114480");
  EXPECT_EQ(CanonicalCui(" -1 "), "-1");
}

TEST(SplitConceptIdsTest, CompositeSeparatorsAndDedup) {
  EXPECT_EQ(SplitConceptIds("D001943|D010051"),
            (std::vector<std::string>{"MESH:D001943", "MESH:D010051"}));
  EXPECT_EQ(SplitConceptIds("D001943+D001943|OMIM:1"),
            (std::vector<std::string>{"MESH:D001943", "OMIM:1"}));
  EXPECT_TRUE(SplitConceptIds("|").empty());
}

TEST(ParsePubtatorTest, ParsesSampleAndFiltersTypes) {
  std::istringstream in(FirstDocument());
  PubtatorStats stats;
  auto docs = ParsePubtator(in, &stats);
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(stats.documents, 1u);
  EXPECT_EQ(stats.mentions, 4u);
  EXPECT_EQ(stats.dropped_non_disease, 1u);
  const auto &d = docs[0];
  EXPECT_EQ(d.doc.doc_id, "10192393");
  EXPECT_EQ(d.mentions[3].concept_ids,
            (std::vector<std::string>{"MESH:D001943", "MESH:D010051"}));
  EXPECT_EQ(d.mentions[3].type, "CompositeMention");
  EXPECT_EQ(d.doc.Text().substr(d.mentions[1].char_start,
                                d.mentions[1].char_end - d.mentions[1].char_start),
            "hereditary nonpolyposis colorectal cancer");
}

TEST(ParsePubtatorTest, RoundTripIsLossless) {
  std::string text =
      "1|t|Gout.\n1|a|Gout and asthma.\n"
      "1\t0\t4\tGout\tDisease\tMESH:D006073\textra\tcols\n"
      "1\t15\t21\tasthma\tDisease\tD001249\n\n"
      "2|t|Nothing here.\n2|a|\n\n";
  std::istringstream in(text);
  auto docs = ParsePubtator(in);
  std::ostringstream out;
  WritePubtator(out, docs);
  EXPECT_EQ(out.str(), text);
  std::istringstream again(out.str());
  auto docs2 = ParsePubtator(again);
  ASSERT_EQ(docs2.size(), 2u);
  EXPECT_EQ(docs2[0].mentions[0].extra_fields,
            (std::vector<std::string>{"extra", "cols"}));
}

TEST(ParsePubtatorTest, RoundTripOnGeneratedDocuments) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<AnnotatedDocument> docs;
    for (int k = 0; k < 3; ++k) {
      AnnotatedDocument d;
      d.doc.doc_id = std::to_string(1000 + k);
      d.doc.title = oracle::RandomName(rng, 4) + ".";
      d.doc.abstract_text = oracle::RandomName(rng, 8) + ".";
      std::string text = d.doc.Text();
      size_t s = std::uniform_int_distribution<size_t>(0, text.size() - 2)(rng);
      size_t e = std::uniform_int_distribution<size_t>(s + 1, text.size())(rng);
      GoldMention m;
      m.doc_id = d.doc.doc_id;
      m.char_start = s;
      m.char_end = e;
      m.surface = text.substr(s, e - s);
      if (m.surface.find('\t') != std::string::npos) continue;
      m.type = "Disease";
      m.raw_concept = "D00" + std::to_string(k);
      m.concept_ids = SplitConceptIds(m.raw_concept);
      d.mentions.push_back(m);
      docs.push_back(d);
    }
    std::ostringstream out;
    WritePubtator(out, docs);
    std::istringstream in(out.str());
    auto back = ParsePubtator(in);
    std::ostringstream out2;
    WritePubtator(out2, back);
    EXPECT_EQ(out.str(), out2.str());
  }
}

TEST(ParsePubtatorTest, RelationLinesAreSkipped) {
  std::istringstream in(
      "5|t|Drug induced hepatitis.\n5|a|\n"
      "5\t13\t22\thepatitis\tDisease\tD006505\n"
      "5\tCID\tD000001\tD006505\n");
  PubtatorStats stats;
  auto docs = ParsePubtator(in, &stats);
  EXPECT_EQ(docs[0].mentions.size(), 1u);
  EXPECT_EQ(stats.relation_lines, 1u);
}

TEST(ParsePubtatorTest, MalformedInputNamesTheLine) {
  std::istringstream few("1|t|Gout.\n1|a|x\n1\t0\t4\tGout\n");
  try {
    ParsePubtator(few);
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    EXPECT_EQ(e.code(), ExitCode::kData);
  }
  std::istringstream orphan("1\t0\t4\tGout\tDisease\tD1\n");
  EXPECT_THROW(ParsePubtator(orphan), ParseError);
  std::istringstream bad_kind("1|x|Gout.\n");
  EXPECT_THROW(ParsePubtator(bad_kind), ParseError);
  std::istringstream no_title("1|a|Gout.\n");
  EXPECT_THROW(ParsePubtator(no_title), ParseError);
  std::istringstream other_doc("1|t|Gout.\n1|a|\n2\t0\t4\tGout\tDisease\tD1\n");
  EXPECT_THROW(ParsePubtator(other_doc), ParseError);
  std::istringstream bad_offset("1|t|Gout.\n1|a|\n1\t0\tx\tGout\tDisease\tD1\n");
  EXPECT_THROW(ParsePubtator(bad_offset), ParseError);
}

TEST(ParsePubtatorTest, SurfaceMismatchIsAlignmentError) {
  std::istringstream in("1|t|Gout.\n1|a|\n1\t0\t4\tGoat\tDisease\tD1\n");
  EXPECT_THROW(ParsePubtator(in), AlignmentError);
  std::istringstream past_end("1|t|Gout.\n1|a|\n1\t3\t40\tt\tDisease\tD1\n");
  EXPECT_THROW(ParsePubtator(past_end), AlignmentError);
}

TEST(ParsePubtatorTest, CrlfAndEmptyInput) {
  std::istringstream crlf("1|t|Gout.\r\n1|a|Yes.\r\n1\t0\t4\tGout\tDisease\tD1\r\n");
  auto docs = ParsePubtator(crlf);
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].doc.abstract_text, "Yes.");
  std::istringstream empty("");
  EXPECT_TRUE(ParsePubtator(empty).empty());
}

TEST(TokenizeTest, KeepsOffsets) {
  auto toks = Tokenize("Type-2 diabetes (T2D).", 100);
  ASSERT_EQ(toks.size(), 4u);
  EXPECT_EQ(toks[0].text, "Type");
  EXPECT_EQ(toks[1].text, "2");
  EXPECT_EQ(toks[3].text, "T2D");
  EXPECT_EQ(toks[3].char_start, 117u);
  EXPECT_EQ(toks[3].char_end, 120u);
}

TEST(TokenizeTest, OffsetsRecoverText) {
  std::mt19937_64 rng(9);
  std::string alphabet = "ab1 .,-()\xc3\xa9";
  for (int trial = 0; trial < 200; ++trial) {
    std::string s;
    for (int i = 0; i < 30; ++i) s += alphabet[rng() % alphabet.size()];
    size_t prev_end = 0;
    for (const Token &t : Tokenize(s, 7)) {
      EXPECT_EQ(s.substr(t.char_start - 7, t.char_end - t.char_start), t.text);
      EXPECT_GE(t.char_start, prev_end + (prev_end == 0 ? 0 : 1));
      prev_end = t.char_end;
    }
  }
}

RawDocument Doc(std::string title, std::string abstract) {
  RawDocument d;
  d.doc_id = "9";
  d.title = std::move(title);
  d.abstract_text = std::move(abstract);
  return d;
}

TEST(SplitSentencesTest, SplitsOnTerminatorAndCapital) {
  auto s = SplitSentences(
      Doc("Title here.", "First one. Second one! third stays. 4 starts."));
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0].char_start, 0u);
  EXPECT_EQ(s[0].char_end, 11u);
  EXPECT_EQ(s[1].char_start, 12u);
  EXPECT_EQ(s[2].tokens[0].text, "Second");
  EXPECT_EQ(s[2].tokens.size(), 4u);
  EXPECT_EQ(s[3].tokens[0].text, "4");
}

TEST(SplitSentencesTest, AbbreviationsAndDecimalsDoNotSplit) {
  auto s = SplitSentences(
      Doc("", "As shown by Smith et al. Patients had 2.5 mg, e.g. Aspirin. "
              "See Fig. 3 for data."));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].tokens[0].text, "See");
}

TEST(SplitSentencesTest, ClosersStayWithSentence) {
  auto s = SplitSentences(Doc("", "It was rare (n=3.) Then it grew."));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].char_end, 1 + std::string("It was rare (n=3.)").size());
}

TEST(SplitSentencesTest, TitleIsItsOwnSentenceEvenWithoutPeriod) {
  auto s = SplitSentences(Doc("Gout in men", "Gout is common."));
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[1].char_start, 12u);
}

TEST(AlignMentionsTest, SnapsAndDropsCrossSentence) {
  RawDocument d = Doc("Hyperuricemia and gout.", "Gout flares. Then gout stops.");
  auto sentences = SplitSentences(d);
  auto mention = [&](size_t s, size_t e) {
    GoldMention m;
    m.doc_id = "9";
    m.char_start = s;
    m.char_end = e;
    m.surface = d.Text().substr(s, e - s);
    m.concept_ids = {"MESH:D006073"};
    return m;
  };
  std::vector<GoldMention> ms = {mention(18, 22), mention(5, 13),
                                 mention(24, 42), mention(0, 13)};
  AlignmentResult r = AlignMentions(sentences, ms);
  ASSERT_EQ(r.aligned.size(), 3u);
  EXPECT_EQ(r.aligned[0].token_start, 2u);
  EXPECT_EQ(r.aligned[0].token_end, 3u);
  EXPECT_FALSE(r.aligned[0].snapped);
  EXPECT_TRUE(r.aligned[1].snapped);  // "uricemia" inside a token
  EXPECT_EQ(r.aligned[1].token_start, 0u);
  EXPECT_EQ(r.dropped_cross_sentence, (std::vector<size_t>{2}));
  EXPECT_EQ(r.snapped, 1u);
  std::vector<GoldMention> gap = {mention(22, 23)};  // the period
  EXPECT_THROW(AlignMentions(sentences, gap), AlignmentError);
}

TEST(ReadSplitManifestTest, ParsesAndValidates) {
  std::istringstream ok("# header\ntrain\t1\ndev\t2\n\ntest\t3\n");
  auto m = ReadSplitManifest(ok);
  EXPECT_EQ(m.at("2"), "dev");
  EXPECT_EQ(m.size(), 3u);
  std::istringstream dup("train\t1\ntest\t1\n");
  EXPECT_THROW(ReadSplitManifest(dup), ParseError);
  std::istringstream bad("holdout\t1\n");
  EXPECT_THROW(ReadSplitManifest(bad), ParseError);
}

}  // namespace
}  // namespace spanlink
