#include <gtest/gtest.h>

#include <sstream>

#include "helpers.hpp"

using namespace flatmwe;

TEST(ScoreSet, MakeSelfMasked) {
    ScoreSet sc = ScoreSet::make(3);
    EXPECT_EQ(sc.n, 3);
    for (int j = 1; j <= 3; ++j) EXPECT_TRUE(is_neg_inf(sc.attach_at(j, j)));
    EXPECT_EQ(sc.attach_at(0, 1), 0.0);
}

TEST(ScoreSet, NormalizationCheck) {
    Rng rng(3, "normcheck");
    ScoreSet sc = testutil::random_normalized_scores(4, rng, true);
    EXPECT_TRUE(sc.check_normalized(1e-6));
    sc.attach[0][1] += 0.1;
    EXPECT_FALSE(sc.check_normalized(1e-6));
}

TEST(ScoreSet, FlatIndex) {
    ScoreSet sc = ScoreSet::make(1);
    sc.rel_vocab = {"dep", "flat"};
    EXPECT_EQ(sc.flat_index(), 1);
    sc.flat_label = "mwe_NNP";
    EXPECT_EQ(sc.flat_index(), -1);
}

TEST(ScoresJsonl, RoundTripPreservesValues) {
    Rng rng(17, "jsonl");
    for (bool labeled : {false, true}) {
        ScoreSet sc = testutil::random_normalized_scores(3, rng, labeled);
        sc.sent_id = "s1";
        std::string line = scores_to_jsonl_line(sc);
        ScoreSet back = scores_from_jsonl_line(line);
        EXPECT_EQ(back.sent_id, "s1");
        EXPECT_EQ(back.n, sc.n);
        EXPECT_EQ(back.rel_vocab, sc.rel_vocab);
        EXPECT_EQ(back.flat_label, sc.flat_label);
        for (int i = 0; i <= sc.n; ++i)
            for (int j = 1; j <= sc.n; ++j)
                EXPECT_DOUBLE_EQ(back.attach_at(i, j), sc.attach_at(i, j));
        for (int j = 1; j <= sc.n; ++j)
            for (int c = 0; c < 3; ++c)
                EXPECT_DOUBLE_EQ(back.tag[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)],
                                 sc.tag[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)]);
        EXPECT_EQ(back.label.has_value(), labeled);
        if (labeled)
            for (int i = 0; i <= sc.n; ++i)
                for (int j = 1; j <= sc.n; ++j)
                    for (int r = 0; r < sc.label->n_rels; ++r)
                        EXPECT_DOUBLE_EQ(back.label->at(i, j, r), sc.label->at(i, j, r));
    }
}

TEST(ScoresJsonl, MinusInfinityAsNull) {
    ScoreSet sc = ScoreSet::make(2);
    sc.attach[0][1] = kNegInf;
    std::string line = scores_to_jsonl_line(sc);
    EXPECT_NE(line.find("null"), std::string::npos);
    ScoreSet back = scores_from_jsonl_line(line);
    EXPECT_TRUE(is_neg_inf(back.attach_at(0, 1)));
    EXPECT_TRUE(is_neg_inf(back.attach_at(1, 1)));
}

TEST(ScoresJsonl, StreamReadWrite) {
    Rng rng(23, "jsonl-stream");
    std::vector<ScoreSet> scores;
    for (int i = 0; i < 3; ++i)
        scores.push_back(testutil::random_normalized_scores(2 + i, rng, i % 2 == 0));
    std::ostringstream out;
    write_scores_jsonl(out, scores);
    std::istringstream in(out.str());
    std::vector<ScoreSet> back = read_scores_jsonl(in);
    ASSERT_EQ(back.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(back[static_cast<std::size_t>(i)].n, 2 + i);
}

TEST(ScoresJsonl, MalformedLinesRejected) {
    EXPECT_THROW(scores_from_jsonl_line("not json"), DataError);
    EXPECT_THROW(scores_from_jsonl_line("{\"n\": 2}"), DataError);          // missing attach
    EXPECT_THROW(scores_from_jsonl_line("{\"n\": 2, \"attach\": [[0,0]], \"tag\": []}"),
                 DataError);  // wrong attach shape
    std::istringstream in("{\"n\": bad\n");
    EXPECT_THROW(read_scores_jsonl(in), ParseError);
}

TEST(SatArithmetic, SaturatesExactly) {
    EXPECT_EQ(sat_add(kNegInf, -1.0), kNegInf);
    EXPECT_EQ(sat_add(-1.0, kNegInf), kNegInf);
    EXPECT_EQ(sat_add(kNegInf, kNegInf), kNegInf);
    EXPECT_DOUBLE_EQ(sat_add(-1.0, -2.0), -3.0);
    EXPECT_TRUE(is_neg_inf(sat_add(kNegInf, 5.0)));
}

TEST(LogSumExp, BasicsAndAllInf) {
    EXPECT_NEAR(log_sum_exp({std::log(0.25), std::log(0.75)}), 0.0, 1e-12);
    EXPECT_TRUE(is_neg_inf(log_sum_exp({kNegInf, kNegInf})));
}
