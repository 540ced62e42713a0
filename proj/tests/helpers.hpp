#pragma once

// Shared test utilities: fixture loading, random generators, and independent
// reference implementations used as oracles. Everything here stays clear of
// the library's decoding/scoring code paths it is meant to check.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "flatmwe/flatmwe.hpp"

namespace testutil {

using namespace flatmwe;

inline std::string fixture_path(const std::string& name) {
    return std::string(FLATMWE_FIXTURE_DIR) + "/" + name;
}

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name), std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<Sentence> load_fixture(const std::string& name) {
    return parse_conllu(read_fixture(name));
}

// Random ScoreSet with log-probabilities normalized per column/row/fiber.
inline ScoreSet random_normalized_scores(int n, Rng& rng, bool labeled,
                                         std::vector<std::string> rel_vocab = {"dep", "flat",
                                                                               "punct"}) {
    ScoreSet sc = ScoreSet::make(n);
    for (int j = 1; j <= n; ++j) {
        std::vector<double> col(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i)
            col[static_cast<std::size_t>(i)] = i == j ? kNegInf : rng.uniform(-3.0, 0.0);
        double lse = log_sum_exp(col);
        for (int i = 0; i <= n; ++i)
            sc.attach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                is_neg_inf(col[static_cast<std::size_t>(i)]) ? kNegInf
                                                             : col[static_cast<std::size_t>(i)] - lse;
        std::vector<double> row = {rng.uniform(-3.0, 0.0), rng.uniform(-3.0, 0.0),
                                   rng.uniform(-3.0, 0.0)};
        double rlse = log_sum_exp(row);
        for (int c = 0; c < 3; ++c)
            sc.tag[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)] =
                row[static_cast<std::size_t>(c)] - rlse;
    }
    sc.rel_vocab = rel_vocab;
    sc.flat_label = "flat";
    if (labeled) {
        const int R = static_cast<int>(rel_vocab.size());
        LabelTensor lt(n, R, kNegInf);
        std::vector<double> fiber(static_cast<std::size_t>(R));
        for (int i = 0; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
                for (int r = 0; r < R; ++r) fiber[static_cast<std::size_t>(r)] = rng.uniform(-3.0, 0.0);
                double lse = log_sum_exp(fiber);
                for (int r = 0; r < R; ++r) lt.at(i, j, r) = fiber[static_cast<std::size_t>(r)] - lse;
            }
        sc.label = lt;
    }
    return sc;
}

// Uniform-ish random tree over {0..n}: each node attaches to a random
// already-connected node. Not uniform over trees, but covers the space.
inline DepGraph random_tree(int n, Rng& rng, const std::string& fill_label = "dep") {
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) order[static_cast<std::size_t>(k - 1)] = k;
    rng.shuffle(order);
    std::vector<int> heads(static_cast<std::size_t>(n), -1);
    std::vector<int> connected = {0};
    for (int k : order) {
        int h = connected[static_cast<std::size_t>(rng.below(connected.size()))];
        heads[static_cast<std::size_t>(k - 1)] = h;
        connected.push_back(k);
    }
    return DepGraph::from_heads(heads, std::vector<std::string>(static_cast<std::size_t>(n), fill_label));
}

// Random tree whose flat spans are fully compliant: disjoint spans are chosen
// first, span-internal tokens attach to the span start (flat, with an
// occasional punct), and the contracted sentence gets a random tree.
inline DepGraph random_compliant_tree(int n, Rng& rng) {
    std::vector<HeadlessSpan> spans;
    int pos = 1;
    while (pos < n) {
        if (rng.uniform() < 0.35) {
            int len = 2 + static_cast<int>(rng.below(3));
            if (pos + len - 1 > n) len = 2;
            if (pos + len - 1 <= n) {
                spans.push_back({pos, pos + len - 1});
                pos += len;
                continue;
            }
        }
        ++pos;
    }
    std::vector<int> rep;  // representative token of each contracted unit
    std::vector<bool> in_span(static_cast<std::size_t>(n) + 1, false);
    for (const HeadlessSpan& sp : spans)
        for (int k = sp.start + 1; k <= sp.end; ++k) in_span[static_cast<std::size_t>(k)] = true;
    for (int k = 1; k <= n; ++k)
        if (!in_span[static_cast<std::size_t>(k)]) rep.push_back(k);

    std::vector<int> heads(static_cast<std::size_t>(n), -1);
    std::vector<std::string> labels(static_cast<std::size_t>(n), "dep");
    std::vector<int> connected = {0};
    std::vector<int> order = rep;
    rng.shuffle(order);
    for (int k : order) {
        int h = connected[static_cast<std::size_t>(rng.below(connected.size()))];
        heads[static_cast<std::size_t>(k - 1)] = h;
        labels[static_cast<std::size_t>(k - 1)] = h == 0 ? "root" : "dep";
        connected.push_back(k);
    }
    for (const HeadlessSpan& sp : spans)
        for (int k = sp.start + 1; k <= sp.end; ++k) {
            heads[static_cast<std::size_t>(k - 1)] = sp.start;
            bool mid_punct = k < sp.end && rng.uniform() < 0.15;
            labels[static_cast<std::size_t>(k - 1)] = mid_punct ? "punct" : "flat";
        }
    return DepGraph::from_heads(heads, std::move(labels));
}

// Reference reachability check built on parent-pointer traversal, independent
// of the library's child-list DFS.
inline bool reference_is_tree(const std::vector<int>& heads_one_based) {
    int n = static_cast<int>(heads_one_based.size());
    for (int k = 1; k <= n; ++k) {
        int h = heads_one_based[static_cast<std::size_t>(k - 1)];
        if (h < 0 || h > n || h == k) return false;
        // climb to the root; more than n steps means a cycle
        int cur = k, steps = 0;
        while (cur != 0) {
            cur = heads_one_based[static_cast<std::size_t>(cur - 1)];
            if (++steps > n) return false;
        }
    }
    return true;
}

// Reference pairwise-crossing projectivity test (the definition itself).
inline bool reference_is_projective(const std::vector<int>& heads_one_based) {
    int n = static_cast<int>(heads_one_based.size());
    for (int m1 = 1; m1 <= n; ++m1)
        for (int m2 = 1; m2 <= n; ++m2) {
            if (m1 == m2) continue;
            int a1 = std::min(heads_one_based[static_cast<std::size_t>(m1 - 1)], m1);
            int b1 = std::max(heads_one_based[static_cast<std::size_t>(m1 - 1)], m1);
            int a2 = std::min(heads_one_based[static_cast<std::size_t>(m2 - 1)], m2);
            int b2 = std::max(heads_one_based[static_cast<std::size_t>(m2 - 1)], m2);
            if (a1 < a2 && a2 < b1 && b1 < b2) return false;
        }
    return true;
}

}  // namespace testutil
