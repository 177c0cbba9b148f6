#include <sstream>

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "irtcat/digest.hpp"
#include "irtcat/error.hpp"
#include "irtcat/item_bank.hpp"

using namespace irtcat;
using irtcat::testing::TempDir;

namespace {

ItemBank parse(const std::string& text) {
  std::istringstream in(text);
  return parse_bank(in);
}

std::string serialize(const ItemBank& bank) {
  std::ostringstream out;
  write_bank(out, bank);
  return out.str();
}

}  // namespace

TEST(ItemBank, ThreeRowFilePreservesOrder) {
  const auto bank = parse("id,a,b,key,stem,options\nq1,1.0,-1,,,\nq2,1.2,0,,,\nq3,0.8,1,,,\n");
  ASSERT_EQ(bank.size(), 3u);
  EXPECT_EQ(bank[0].id, "q1");
  EXPECT_EQ(bank[1].id, "q2");
  EXPECT_EQ(bank[2].id, "q3");
  EXPECT_DOUBLE_EQ(bank[1].discrimination, 1.2);
  EXPECT_DOUBLE_EQ(bank[2].difficulty, 1.0);
  EXPECT_EQ(bank.find("q2"), 1u);
  EXPECT_FALSE(bank.find("nope"));
}

TEST(ItemBank, ZeroDiscriminationNamesTheItem) {
  try {
    parse("id,a,b,key,stem,options\nok,1,0,,,\nbad-item,0,0.5,,,\n");
    FAIL() << "expected BankError";
  } catch (const BankError& e) {
    EXPECT_EQ(e.item_id(), "bad-item");
    EXPECT_EQ(e.row(), 3u);
    EXPECT_EQ(e.field(), "a");
    EXPECT_NE(std::string(e.what()).find("bad-item"), std::string::npos);
  }
}

TEST(ItemBank, AnswerKeyOutsideOptionsIsRejected) {
  const std::string row = "q1,1,0,F,Stem,A|one;;B|two;;C|three;;D|four;;E|five\n";
  EXPECT_THROW(parse("id,a,b,key,stem,options\n" + row), BankError);
}

TEST(ItemBank, RejectsMalformedInput) {
  EXPECT_THROW(parse(""), BankError);
  EXPECT_THROW(parse("id,a,b\nq,1,0\n"), BankError);
  EXPECT_THROW(parse("id,a,b,key,stem,options\n"), BankError);                       // empty bank
  EXPECT_THROW(parse("id,a,b,key,stem,options\nq,1,0,,,\nq,1,0,,,\n"), BankError);  // duplicate id
  EXPECT_THROW(parse("id,a,b,key,stem,options\nq,abc,0,,,\n"), BankError);
  EXPECT_THROW(parse("id,a,b,key,stem,options\nq,1,nan,,,\n"), BankError);
  EXPECT_THROW(parse("id,a,b,key,stem,options\nq,-1,0,,,\n"), BankError);
  EXPECT_THROW(parse("id,a,b,key,stem,options\nq,1,0,,\"unterminated,\n"), BankError);
  EXPECT_THROW(parse("id,a,b,key,stem,options\nq,1,0,A,Stem,A|x;;C|y\n"), BankError);  // letters skip B
  EXPECT_THROW(parse("id,a,b,key,stem,options\nq,1,0,,Stem,A|x;;B|y\n"), BankError);   // options need a key
}

TEST(ItemBank, QuotedContentRoundTrips) {
  std::vector<ItemParameters> items(1);
  items[0].id = "q1";
  items[0].discrimination = 1.0 / 3.0;
  items[0].difficulty = -0.1;
  items[0].answer_key = 'B';
  items[0].stem = "A stem with, commas\nand \"quotes\" across lines";
  items[0].options = {{'A', "first, option"}, {'B', "second \"one\""}, {'C', "third"}};
  const ItemBank bank(items);
  EXPECT_EQ(parse(serialize(bank)), bank);
}

TEST(ItemBank, RoundTripIdentityOnGeneratedBanks) {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto spec = reference_bank_spec(seed);
    spec.n_items = 200;
    const auto bank = with_placeholder_content(generate_synthetic_bank(spec), seed);
    const auto again = parse(serialize(bank));
    ASSERT_EQ(again.size(), bank.size());
    for (std::size_t i = 0; i < bank.size(); ++i) EXPECT_EQ(again[i], bank[i]);
  }
}

TEST(ItemBank, SaveAndLoadWithSidecar) {
  TempDir dir;
  auto spec = reference_bank_spec(4);
  spec.n_items = 50;
  const auto bank = generate_synthetic_bank(spec);
  save_bank(dir / "bank.csv", bank, R"({"manifest":{"seed":4}})");
  const auto loaded = load_bank(dir / "bank.csv");
  EXPECT_EQ(loaded, bank);
  EXPECT_TRUE(std::filesystem::exists(metadata_path(dir / "bank.csv")));
  const auto meta = irtcat::testing::read_file(metadata_path(dir / "bank.csv"));
  EXPECT_NE(meta.find("\"manifest\""), std::string::npos);
  EXPECT_THROW(load_bank(dir / "missing.csv"), Error);
}

TEST(ItemBank, LoadsWithoutSidecar) {
  TempDir dir;
  irtcat::testing::write_text(dir / "b.csv", "id,a,b,key,stem,options\nx,1,0,,,\n");
  EXPECT_EQ(load_bank(dir / "b.csv").size(), 1u);
}

TEST(SyntheticBank, ReferenceMoments) {
  const auto bank = generate_synthetic_bank(reference_bank_spec(7));
  ASSERT_EQ(bank.size(), 2815u);
  double sa = 0.0;
  double sb = 0.0;
  for (const auto& item : bank.items()) {
    sa += item.discrimination;
    sb += item.difficulty;
  }
  EXPECT_NEAR(sa / 2815.0, 1.01, 0.01);
  EXPECT_NEAR(sb / 2815.0, -0.01, 0.02);
  EXPECT_EQ(bank[0].id, "syn-0001");
  EXPECT_EQ(bank[2814].id, "syn-2815");
}

TEST(SyntheticBank, DegenerateSpecReturnsTheMeans) {
  BankSpec spec;
  spec.n_items = 1;
  spec.alpha = {1.3, 0.0, 0.5, 2.0};
  spec.beta = {-0.4, 0.0, -1.0, 1.0};
  const auto bank = generate_synthetic_bank(spec);
  ASSERT_EQ(bank.size(), 1u);
  EXPECT_EQ(bank[0].discrimination, 1.3);
  EXPECT_EQ(bank[0].difficulty, -0.4);
}

TEST(SyntheticBank, SameSpecSameBytes) {
  const auto spec = reference_bank_spec(99);
  EXPECT_EQ(sha256_hex(serialize(generate_synthetic_bank(spec))), sha256_hex(serialize(generate_synthetic_bank(spec))));
  auto other = spec;
  other.seed = 100;
  EXPECT_NE(serialize(generate_synthetic_bank(spec)), serialize(generate_synthetic_bank(other)));
}

TEST(SyntheticBank, DrawsStayInsideTheWindow) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    BankSpec spec;
    spec.n_items = 2000;
    spec.alpha = {1.0, 0.5, 0.9, 1.1};  // narrow window, heavy rejection
    spec.beta = {0.0, 2.0, -0.5, 3.0};
    spec.seed = seed;
    const auto bank = generate_synthetic_bank(spec);
    for (const auto& item : bank.items()) {
      ASSERT_GE(item.discrimination, 0.9);
      ASSERT_LE(item.discrimination, 1.1);
      ASSERT_GE(item.difficulty, -0.5);
      ASSERT_LE(item.difficulty, 3.0);
    }
  }
}

TEST(SyntheticBank, InfeasibleWindowsAreRejected) {
  auto spec = reference_bank_spec(1);
  spec.beta = {5.0, 0.1, -1.0, 1.0};  // mean 40 sd above the window
  EXPECT_THROW(validate_bank_spec(spec), ConfigError);
  EXPECT_THROW(generate_synthetic_bank(spec), ConfigError);

  spec = reference_bank_spec(1);
  spec.alpha = {1.0, 0.1, -0.5, 2.0};  // discrimination window reaches zero
  EXPECT_THROW(validate_bank_spec(spec), ConfigError);

  spec = reference_bank_spec(1);
  spec.n_items = 0;
  EXPECT_THROW(validate_bank_spec(spec), ConfigError);

  spec = reference_bank_spec(1);
  spec.beta = {1.6, 0.08, -1.0, 1.52};  // one sd outside: still feasible
  EXPECT_NO_THROW(validate_bank_spec(spec));
}

TEST(SyntheticBank, PlaceholderContentIsValid) {
  auto spec = reference_bank_spec(3);
  spec.n_items = 30;
  const auto bank = with_placeholder_content(generate_synthetic_bank(spec), 3);
  for (const auto& item : bank.items()) {
    EXPECT_TRUE(item.has_content());
    EXPECT_EQ(item.options.size(), 5u);
    ASSERT_TRUE(item.answer_key);
    EXPECT_GE(*item.answer_key, 'A');
    EXPECT_LE(*item.answer_key, 'E');
  }
}
