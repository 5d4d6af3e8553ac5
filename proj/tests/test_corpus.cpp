#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "planrec/corpus.hpp"
#include "planrec/error.hpp"
#include "support.hpp"

namespace planrec {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no planrec::Error thrown";
  return ErrorCode::kIo;
}

TEST(Corpus, SinglePlan) {
  const PlanLibrary lib = parse_corpus("pick-up-B stack-B-A\n");
  EXPECT_EQ(lib.size(), 1u);
  EXPECT_EQ(lib.plans()[0].size(), 2u);
  EXPECT_EQ(lib.vocabulary().size(), 2u);
}

TEST(Corpus, ExampleLibraryCounts) {
  const PlanLibrary lib = parse_corpus(testing::example_corpus_text());
  EXPECT_EQ(lib.size(), 4u);
  EXPECT_EQ(lib.total_words(), 20u);
  EXPECT_EQ(lib.vocabulary().size(), 12u);
  EXPECT_EQ(lib.vocabulary().count(lib.vocabulary().id("pick-up-B")), 2u);
  EXPECT_EQ(lib.vocabulary().count(lib.vocabulary().id("put-down-C")), 1u);
}

TEST(Corpus, CommentsOnlyIsEmpty) {
  EXPECT_EQ(code_of([] { parse_corpus("# comment\n\n"); }), ErrorCode::kEmptyCorpus);
  EXPECT_EQ(code_of([] { parse_corpus(""); }), ErrorCode::kEmptyCorpus);
}

TEST(Corpus, HoleTokenRejectedInLibrary) {
  try {
    parse_corpus("a b\nc ?? d\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFormat);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Corpus, VocabularyInFirstAppearanceOrder) {
  const PlanLibrary lib = parse_corpus("b a\nc a\n");
  EXPECT_EQ(lib.vocabulary().tokens(), (std::vector<std::string>{"b", "a", "c"}));
  EXPECT_EQ(lib.vocabulary().counts(), (std::vector<std::uint64_t>{1, 2, 1}));
}

TEST(Corpus, ToleratesExtraWhitespaceAndCrLf) {
  const PlanLibrary lib = parse_corpus("  a   b \r\n\n# x\nc\n");
  EXPECT_EQ(lib.size(), 2u);
  EXPECT_EQ(lib.plan_tokens(lib.plans()[0]), (std::vector<std::string>{"a", "b"}));
}

TEST(Corpus, SerializeRoundTrip) {
  const PlanLibrary lib = parse_corpus(testing::example_corpus_text());
  const std::string text = serialize_corpus(lib);
  const PlanLibrary back = parse_corpus(text);
  EXPECT_EQ(back.vocabulary(), lib.vocabulary());
  ASSERT_EQ(back.size(), lib.size());
  for (std::size_t i = 0; i < lib.size(); ++i) EXPECT_EQ(back.plan_tokens(back.plans()[i]), lib.plan_tokens(lib.plans()[i]));
  EXPECT_EQ(serialize_corpus(back), text);
}

TEST(Corpus, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "planrec_corpus_rt.txt";
  const PlanLibrary lib = parse_corpus(testing::example_corpus_text());
  save_corpus(lib, path.string());
  const PlanLibrary back = load_corpus(path.string());
  EXPECT_EQ(serialize_corpus(back), serialize_corpus(lib));
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([&] { load_corpus(path.string()); }), ErrorCode::kIo);
}

TEST(Observation, ParseHolesAndUnknowns) {
  const PlanLibrary lib = parse_corpus(testing::example_corpus_text());
  const Observation obs =
      parse_observation("# o\npick-up-B ?? unstack-D-C put-down-D ?? stack-C-B ?? ??\n", lib.vocabulary());
  EXPECT_EQ(obs.size(), 8u);
  EXPECT_EQ(obs.hole_indices(), (std::vector<std::size_t>{1, 4, 6, 7}));
  EXPECT_EQ(observation_tokens(obs, lib.vocabulary())[1], "??");

  try {
    parse_observation("pick-up-Q ?? zap", lib.vocabulary());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownAction);
    EXPECT_NE(std::string(e.what()).find("pick-up-Q"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("zap"), std::string::npos);
  }
  EXPECT_EQ(code_of([&] { parse_observation("a\nb\n", lib.vocabulary()); }), ErrorCode::kFormat);
}

TEST(Mask, HoleCounts) {
  EXPECT_EQ(mask_hole_count(8, 0.25), 2u);
  EXPECT_EQ(mask_hole_count(8, 0.5), 4u);
  EXPECT_EQ(mask_hole_count(3, 0.05), 1u);  // at least one hole
  EXPECT_EQ(mask_hole_count(4, 1.0), 4u);
}

TEST(Mask, TruthMatchesPlanAndIsDeterministic) {
  Plan plan{{0, 1, 2, 3, 4, 5, 6, 7}};
  const MaskedPlan a = mask_plan(plan, {0.25, 9});
  const MaskedPlan b = mask_plan(plan, {0.25, 9});
  EXPECT_EQ(a.observation, b.observation);
  EXPECT_EQ(a.truth, b.truth);
  ASSERT_EQ(a.observation.hole_count(), 2u);
  for (auto [pos, act] : a.truth) {
    EXPECT_TRUE(a.observation.is_hole(pos));
    EXPECT_EQ(act, plan.actions[pos]);
  }
  for (std::size_t i = 0; i < plan.size(); ++i)
    if (!a.observation.is_hole(i)) EXPECT_EQ(*a.observation.slots()[i], plan.actions[i]);
}

TEST(Mask, EveryPositionCanBeMasked) {
  Plan plan{{0, 1, 2, 3}};
  std::set<std::size_t> seen;
  for (std::uint64_t s = 0; s < 200; ++s)
    for (auto [pos, act] : mask_plan(plan, {0.25, s}).truth) seen.insert(pos);
  EXPECT_EQ(seen.size(), 4u);
}

TEST(Folds, SizesAndPartition) {
  std::vector<std::vector<std::string>> plans;
  for (int i = 0; i < 10; ++i) plans.push_back({"p" + std::to_string(i), "x"});
  const PlanLibrary lib = PlanLibrary::from_tokens(plans);
  const auto folds = split_folds(lib, 5, 3);
  ASSERT_EQ(folds.size(), 5u);
  std::multiset<ActionId> test_heads;
  for (const auto& f : folds) {
    EXPECT_EQ(f.test.size(), 2u);
    EXPECT_EQ(f.train.size(), 8u);
    EXPECT_EQ(f.train.vocabulary().tokens(), lib.vocabulary().tokens());
    for (const auto& p : f.test) test_heads.insert(p.actions[0]);
  }
  EXPECT_EQ(test_heads.size(), 10u);
  EXPECT_EQ(std::set<ActionId>(test_heads.begin(), test_heads.end()).size(), 10u);
}

TEST(Folds, TenFoldsOfFiveHundred) {
  std::vector<std::vector<std::string>> plans(5000, std::vector<std::string>{"a", "b"});
  const auto folds = split_folds(PlanLibrary::from_tokens(plans), 10, 1);
  for (const auto& f : folds) EXPECT_EQ(f.test.size(), 500u);
}

TEST(Folds, TrainCountsComeFromTrainingSplit) {
  const PlanLibrary lib = parse_corpus("a b\nc d\n");
  const auto folds = split_folds(lib, 2, 1);
  for (const auto& f : folds) {
    std::uint64_t total = 0;
    for (auto c : f.train.vocabulary().counts()) total += c;
    EXPECT_EQ(total, 2u);
  }
}

TEST(Folds, InvalidK) {
  const PlanLibrary lib = parse_corpus("a\nb\nc\n");
  EXPECT_EQ(code_of([&] { split_folds(lib, 1, 0); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([&] { split_folds(lib, 4, 0); }), ErrorCode::kInvalidConfig);
}

}  // namespace
}  // namespace planrec
