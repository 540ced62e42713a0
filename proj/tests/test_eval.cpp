#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace flatmwe;

TEST(SpanPrf, PerfectPrediction) {
    std::vector<std::vector<HeadlessSpan>> gold = {{{1, 2}}, {{3, 5}}};
    SpanPRF r = span_prf(gold, gold);
    EXPECT_EQ(r.true_positives, 2);
    EXPECT_DOUBLE_EQ(r.precision, 1.0);
    EXPECT_DOUBLE_EQ(r.recall, 1.0);
    EXPECT_DOUBLE_EQ(r.f1, 1.0);
}

TEST(SpanPrf, PartialRecall) {
    std::vector<std::vector<HeadlessSpan>> gold = {{{1, 2}, {4, 5}}};
    std::vector<std::vector<HeadlessSpan>> pred = {{{1, 2}}};
    SpanPRF r = span_prf(gold, pred);
    EXPECT_DOUBLE_EQ(r.precision, 1.0);
    EXPECT_DOUBLE_EQ(r.recall, 0.5);
    EXPECT_NEAR(r.f1, 2.0 / 3.0, 1e-12);
}

TEST(SpanPrf, BothEmptyIsPerfect) {
    std::vector<std::vector<HeadlessSpan>> empty = {{}};
    SpanPRF r = span_prf(empty, empty);
    EXPECT_DOUBLE_EQ(r.f1, 1.0);
}

TEST(SpanPrf, BoundaryMismatchIsNotCredited) {
    std::vector<std::vector<HeadlessSpan>> gold = {{{2, 4}}};
    std::vector<std::vector<HeadlessSpan>> pred = {{{2, 3}}};
    SpanPRF r = span_prf(gold, pred);
    EXPECT_EQ(r.true_positives, 0);
    EXPECT_DOUBLE_EQ(r.f1, 0.0);
}

TEST(SpanPrf, LengthMismatchRejected) {
    std::vector<std::vector<HeadlessSpan>> gold = {{}};
    std::vector<std::vector<HeadlessSpan>> pred = {{}, {}};
    EXPECT_THROW(span_prf(gold, pred), ContractViolation);
}

TEST(SpanPrf, PrecisionRecallSymmetry) {
    Rng rng(103, "prf-symmetry");
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::vector<HeadlessSpan>> a, b;
        int sentences = 1 + static_cast<int>(rng.below(4));
        for (int s = 0; s < sentences; ++s) {
            auto gen = [&rng]() {
                std::vector<HeadlessSpan> spans;
                int pos = 1;
                while (pos < 10) {
                    if (rng.uniform() < 0.3) {
                        spans.push_back({pos, pos + 1});
                        pos += 3;
                    } else {
                        ++pos;
                    }
                }
                return spans;
            };
            a.push_back(gen());
            b.push_back(gen());
        }
        SpanPRF ab = span_prf(a, b), ba = span_prf(b, a);
        EXPECT_DOUBLE_EQ(ab.precision, ba.recall);
        EXPECT_DOUBLE_EQ(ab.recall, ba.precision);
    }
}

TEST(SpanPrf, MicroAggregationSumsCounts) {
    std::vector<std::vector<HeadlessSpan>> g1 = {{{1, 2}}}, p1 = {{{1, 2}, {4, 6}}};
    std::vector<std::vector<HeadlessSpan>> g2 = {{{2, 3}, {5, 6}}}, p2 = {{{2, 3}}};
    SpanPRF a = span_prf(g1, p1), b = span_prf(g2, p2);
    std::vector<std::vector<HeadlessSpan>> gc = g1, pc = p1;
    gc.insert(gc.end(), g2.begin(), g2.end());
    pc.insert(pc.end(), p2.begin(), p2.end());
    SpanPRF c = span_prf(gc, pc);
    EXPECT_EQ(c.true_positives, a.true_positives + b.true_positives);
    EXPECT_EQ(c.predicted_count, a.predicted_count + b.predicted_count);
    EXPECT_EQ(c.gold_count, a.gold_count + b.gold_count);
}

TEST(Attachment, PerfectAndAllWrong) {
    DepGraph g = DepGraph::from_heads({0, 1, 1}, {"root", "dep", "flat"});
    AttachmentScores same = attachment_scores({g}, {g});
    EXPECT_DOUBLE_EQ(same.uas, 100.0);
    EXPECT_DOUBLE_EQ(same.las, 100.0);
    DepGraph wrong = DepGraph::from_heads({2, 3, 0}, {"dep", "dep", "root"});
    AttachmentScores zero = attachment_scores({g}, {wrong});
    EXPECT_DOUBLE_EQ(zero.uas, 0.0);
    EXPECT_DOUBLE_EQ(zero.las, 0.0);
}

TEST(Attachment, DirectCount) {
    DepGraph gold = DepGraph::from_heads({0, 1, 2, 2}, {"root", "a", "b", "c"});
    DepGraph pred = DepGraph::from_heads({0, 1, 2, 3}, {"root", "a", "x", "c"});
    // heads right: 1, 2, 3 (token 4 wrong); labels right among those: 1, 2
    AttachmentScores r = attachment_scores({gold}, {pred});
    EXPECT_EQ(r.token_count, 4);
    EXPECT_DOUBLE_EQ(r.uas, 75.0);
    EXPECT_DOUBLE_EQ(r.las, 50.0);
}

TEST(Attachment, SubtypeStrippingInLas) {
    DepGraph gold = DepGraph::from_heads({0, 1}, {"root", "flat:name"});
    DepGraph pred = DepGraph::from_heads({0, 1}, {"root", "flat"});
    AttachmentScores r = attachment_scores({gold}, {pred});
    EXPECT_DOUBLE_EQ(r.las, 100.0);
}

TEST(Attachment, LasNeverExceedsUas) {
    Rng rng(107, "las-uas");
    for (int trial = 0; trial < 1000; ++trial) {
        int n = 1 + static_cast<int>(rng.below(6));
        DepGraph gold = testutil::random_tree(n, rng);
        DepGraph pred = testutil::random_tree(n, rng);
        for (int k = 1; k <= n; ++k) {
            gold.labels[static_cast<std::size_t>(k)] = rng.uniform() < 0.5 ? "a" : "b";
            pred.labels[static_cast<std::size_t>(k)] = rng.uniform() < 0.5 ? "a" : "b";
        }
        AttachmentScores r = attachment_scores({gold}, {pred});
        EXPECT_LE(r.las, r.uas);
        EXPECT_LE(r.uas, 100.0);
    }
}

TEST(Attachment, LengthMismatchRejected) {
    DepGraph a = DepGraph::from_heads({0}), b = DepGraph::from_heads({0, 1});
    EXPECT_THROW(attachment_scores({a}, {b}), ContractViolation);
}

TEST(Reports, FormattersMentionEveryMetric) {
    SpanPRF prf;
    AttachmentScores att;
    std::string kv = format_eval_kv(prf, att);
    for (const char* key : {"precision=", "recall=", "f1=", "uas=", "las=", "tokens="})
        EXPECT_NE(kv.find(key), std::string::npos) << key;
    std::string table = format_eval_table(prf, att);
    EXPECT_NE(table.find("uas"), std::string::npos);
}
