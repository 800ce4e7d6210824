#include <gtest/gtest.h>

#include "dict2wic/dictionary.hpp"
#include "dict2wic/errors.hpp"
#include "dict2wic/io.hpp"
#include "support/fuzz.hpp"

namespace dict2wic {
namespace {

std::string fixture(const std::string& name) {
  return io::read_file(std::string(D2W_TEST_DATA) + "/" + name);
}

TEST(Dictionary, SlovarFixture) {
  const ParseResult r = parse_dictionary(fixture("slovar.txt"), ParseMode::kStrict);
  ASSERT_EQ(r.entries.size(), 1u);
  const DictionaryEntry& e = r.entries[0];
  EXPECT_EQ(e.lemma, "slovar");
  ASSERT_EQ(e.senses.size(), 2u);

  const Sense& s1 = e.senses[0];
  EXPECT_EQ(s1.definition, "knjiga, v kateri so besede razvrščene po abecedi in pojasnjene");
  ASSERT_EQ(s1.snippets.size(), 6u);
  EXPECT_EQ(s1.snippets[0].text, "slovar ima sto tisoč besed");
  EXPECT_EQ(s1.snippets[1].text, "izdati, sestavljati slovar");
  EXPECT_EQ(s1.snippets[3].text, "obsežen slovar");
  EXPECT_EQ(s1.snippets[5].text, "enojezični, narečni, pravopisni, tehniški slovar");
  const std::vector<int> groups = {0, 1, 2, 3, 3, 3};
  for (std::size_t k = 0; k < groups.size(); ++k) {
    EXPECT_EQ(s1.snippets[k].group_id, groups[k]);
    EXPECT_EQ(s1.snippets[k].index, static_cast<int>(k));
    EXPECT_EQ(s1.snippets[k].sense_ordinal, 1);
  }
  ASSERT_EQ(s1.special_examples.size(), 3u);
  for (const auto& x : s1.special_examples) {
    EXPECT_EQ(x.level, 1);
    EXPECT_EQ(x.tag, "jezikosl");
  }
  EXPECT_EQ(s1.special_examples[0].text, "avtorski slovar ki vsebuje besede določenega avtorja");
  EXPECT_EQ(s1.special_examples[2].text, "obrnjeni slovar");

  const Sense& s2 = e.senses[1];
  EXPECT_EQ(s2.definition, "besedni zaklad");
  ASSERT_EQ(s2.snippets.size(), 2u);
  EXPECT_EQ(s2.snippets[0].group_id, 0);
  EXPECT_EQ(s2.snippets[1].group_id, 0);
  EXPECT_EQ(s2.snippets[1].text, "njen slovar ni bil ravno izbran");
  ASSERT_EQ(s2.special_examples.size(), 2u);
  EXPECT_EQ(s2.special_examples[0].level, 2);
  EXPECT_EQ(s2.special_examples[0].tag, "ekspr");
  EXPECT_EQ(s2.special_examples[1].text, "če to povemo v ekonomskem slovarju [...]");

  EXPECT_EQ(extract_snippets(r.entries).size(), 8u);
  const auto all = extract_snippets(r.entries, SnippetMode::kCoreAndSpecial);
  ASSERT_EQ(all.size(), 13u);
  EXPECT_EQ(all[6].category, "jezikosl");
  EXPECT_EQ(all[6].group_id, 4);
}

TEST(Dictionary, MinimalEntryAndCanonicalText) {
  const ParseResult r = parse_dictionary("x\n1. def: ex1", ParseMode::kStrict);
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_EQ(r.entries[0].senses[0].snippets[0].text, "ex1");
  EXPECT_EQ(serialize_dictionary(r.entries), "x\n1. def: ex1\n");
}

TEST(Dictionary, ContinuationLinesAndCrlf) {
  const ParseResult r =
      parse_dictionary("hiša\r\n1. stavba: lepa hiša;\r\n   velika hiša\r\n", ParseMode::kStrict);
  ASSERT_EQ(r.entries.size(), 1u);
  ASSERT_EQ(r.entries[0].senses[0].snippets.size(), 2u);
  EXPECT_EQ(r.entries[0].senses[0].snippets[1].text, "velika hiša");
}

TEST(Dictionary, LenientSkipsBadEntryAndRecordsLine) {
  const std::string input =
      "dobro\n1. def: dobro je\n\nslabo\n2. def: ni prvi\n\nlepo\n1. def: lepo je\n";
  const ParseResult r = parse_dictionary(input);
  ASSERT_EQ(r.entries.size(), 2u);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].line, 5u);
  EXPECT_EQ(r.errors[0].lemma, "slabo");
}

TEST(Dictionary, StrictThrowsParseErrorWithLine) {
  try {
    parse_dictionary("a\n1. def: a\n\nb\n1. brez dvopicja\n", ParseMode::kStrict);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
    EXPECT_EQ(e.kind(), "parse_error");
  }
}

TEST(Dictionary, RejectsStructuralErrors) {
  EXPECT_THROW(parse_dictionary("1. def: x\n", ParseMode::kStrict), ParseError);
  EXPECT_THROW(parse_dictionary("a\n* tag. x\n", ParseMode::kStrict), ParseError);
  EXPECT_THROW(parse_dictionary("a\n", ParseMode::kStrict), ParseError);
  EXPECT_THROW(parse_dictionary("a\n1. : x\n", ParseMode::kStrict), ParseError);
  EXPECT_THROW(parse_dictionary("a\n1. d: x\n3. d: y\n", ParseMode::kStrict), ParseError);
  EXPECT_THROW(parse_dictionary("a\xFF\n1. d: x\n"), InvalidArgument);
}

TEST(Dictionary, SerializeRejectsUnrepresentableText) {
  ParseResult r = parse_dictionary("x\n1. def: ex1", ParseMode::kStrict);
  r.entries[0].senses[0].snippets[0].text = "a; b";
  EXPECT_THROW(serialize_dictionary(r.entries), InvalidArgument);
}

TEST(Dictionary, FuzzedRoundTripText) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto fuzz = testing::fuzz_dictionary(seed, 100);
    const std::string text = serialize_dictionary(fuzz.entries);
    const ParseResult back = parse_dictionary(text, ParseMode::kStrict);
    ASSERT_EQ(back.entries, fuzz.entries) << "seed " << seed;
    EXPECT_EQ(serialize_dictionary(back.entries), text);
  }
}

TEST(Dictionary, FuzzedRoundTripJsonl) {
  const auto fuzz = testing::fuzz_dictionary(11, 100);
  const ParseResult back =
      parse_dictionary_jsonl(serialize_dictionary_jsonl(fuzz.entries), ParseMode::kStrict);
  EXPECT_EQ(back.entries, fuzz.entries);
}

TEST(Dictionary, FilterAndRestrict) {
  const ParseResult r = parse_dictionary(
      "a\n1. d: a1\n2. d: a2\n\nb\n1. d: b1\n\nc\n1. d: c1\n2. d: c2\n", ParseMode::kStrict);
  const auto multi = filter_multisense(r.entries);
  ASSERT_EQ(multi.size(), 2u);
  EXPECT_EQ(multi[1].lemma, "c");
  const auto only = restrict_to_lemmas(r.entries, {"b"});
  ASSERT_EQ(only.size(), 1u);
  EXPECT_EQ(only[0].lemma, "b");
}

}  // namespace
}  // namespace dict2wic
