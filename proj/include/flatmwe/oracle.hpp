#pragma once

// Brute-force decoding oracles. These enumerate the full structure space and
// never touch the chart code, so agreement between the two routes is strong
// evidence for both. Sentence lengths are capped; the enumerations are
// exponential by design.

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "flatmwe/decode.hpp"

namespace flatmwe {

// Enumeration refused: the requested length exceeds the oracle's cap.
class OracleLimitError : public std::logic_error {
public:
    OracleLimitError(int n, int limit)
        : std::logic_error("oracle limit: n = " + std::to_string(n) + " exceeds limit " +
                           std::to_string(limit)) {}
};

namespace detail {

// All projective trees over {0..n} rooted at 0, as 1-based head vectors.
// Multiple root attachments are included; the list is in lexicographic
// order of the head vectors and cached per n.
inline const std::vector<std::vector<int>>& projective_trees(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<std::vector<int>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::vector<int>> trees;
    std::vector<int> heads(static_cast<std::size_t>(n), 0);
    while (true) {
        DepGraph g = DepGraph::from_heads(heads);
        if (detail::is_tree(g) && is_projective(g)) trees.push_back(heads);
        int pos = n - 1;
        while (pos >= 0) {
            if (++heads[static_cast<std::size_t>(pos)] <= n) break;
            heads[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    return cache.emplace(n, std::move(trees)).first->second;
}

// Well-formed tag sequences: disjoint spans of length >= 2, everything else
// O. Enumerated as span sets, lexicographic over the induced tag strings.
struct TaggedSpans {
    TagSeq tags;
    std::vector<HeadlessSpan> spans;
};

inline const std::vector<TaggedSpans>& wellformed_tagseqs(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<TaggedSpans>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<TaggedSpans> out;
    std::vector<HeadlessSpan> spans;
    // Recursive enumeration over span start positions.
    auto rec = [&](auto&& self, int next_start) -> void {
        out.push_back({spans_to_bio(n, spans), spans});
        for (int i = next_start; i < n; ++i)
            for (int j = i + 1; j <= n; ++j) {
                spans.push_back({i, j});
                self(self, j + 1);
                spans.pop_back();
            }
    };
    rec(rec, 1);
    return cache.emplace(n, std::move(out)).first->second;
}

}  // namespace detail

// Exhaustive maximum over projective trees under the parsing objective
// (attachment plus best per-arc label when labeled). Same tie-break as
// decode_eisner.
inline ParseResult brute_force_parse_full(const ScoreSet& sc, int limit = 6,
                                          const DecodeOptions& opts = {}) {
    if (sc.n > limit) throw OracleLimitError(sc.n, limit);
    const bool labeled = opts.use_labels && sc.label.has_value();
    detail::ArcScores arc =
        detail::make_arc_scores(sc, labeled ? detail::LabelMode::ArgmaxAll : detail::LabelMode::None, -1);
    ParseResult best;
    detail::ExtScore best_ext;
    bool found = false;
    for (const std::vector<int>& heads : detail::projective_trees(sc.n)) {
        if (opts.single_root) {
            int roots = 0;
            for (int h : heads)
                if (h == 0) ++roots;
            if (roots != 1) continue;
        }
        detail::ExtScore s;
        for (int k = 1; k <= sc.n; ++k) {
            int h = heads[static_cast<std::size_t>(k - 1)];
            s = s + arc.at(h, k);
            s.tkey -= h;
        }
        if (!found || detail::improves(s, best_ext)) {
            found = true;
            best_ext = s;
            best.score = s.value();
            best.tie_key = s.tkey;
            std::vector<std::string> labels(static_cast<std::size_t>(sc.n));
            for (int k = 1; k <= sc.n; ++k) {
                int h = heads[static_cast<std::size_t>(k - 1)];
                int rel = arc.rel_at(h, k);
                labels[static_cast<std::size_t>(k - 1)] =
                    rel >= 0 ? sc.rel_vocab[static_cast<std::size_t>(rel)] : detail::default_rel(sc);
            }
            best.graph = DepGraph::from_heads(heads, std::move(labels));
        }
    }
    if (!found) throw InfeasibleError(0);
    return best;
}

inline DepGraph brute_force_parse(const ScoreSet& sc, int limit = 6, const DecodeOptions& opts = {}) {
    return brute_force_parse_full(sc, limit, opts).graph;
}

// Exhaustive maximum over consistent (projective tree, well-formed tags)
// pairs: inside every span, tokens are leaves attached to the span start.
// Mirrors decode_joint's objective, label policy and tie-break exactly.
inline JointResult brute_force_joint(const ScoreSet& sc, int limit = 5, const DecodeOptions& opts = {}) {
    if (sc.n > limit) throw OracleLimitError(sc.n, limit);
    const int n = sc.n;
    const bool labeled = opts.use_labels && sc.label.has_value();
    int flat = -1, punct = -1;
    if (labeled) {
        flat = sc.flat_index();
        if (flat < 0) throw ContractViolation("brute_force_joint: flat label missing from rel_vocab");
        if (sc.label->n_rels < 2)
            throw ConfigError("labeled joint decoding needs a non-flat relation in rel_vocab");
        for (std::size_t r = 0; r < sc.rel_vocab.size(); ++r)
            if (sc.rel_vocab[r] == "punct") punct = static_cast<int>(r);
    }
    detail::ArcScores arc = detail::make_arc_scores(
        sc, labeled ? detail::LabelMode::JointRestricted : detail::LabelMode::None, flat);

    JointResult best;
    detail::ExtScore best_ext;
    bool found = false;
    std::vector<int> child_count(static_cast<std::size_t>(n) + 1, 0);
    for (const std::vector<int>& heads : detail::projective_trees(n)) {
        if (opts.single_root) {
            int roots = 0;
            for (int h : heads)
                if (h == 0) ++roots;
            if (roots != 1) continue;
        }
        std::fill(child_count.begin(), child_count.end(), 0);
        for (int h : heads) ++child_count[static_cast<std::size_t>(h)];
        for (const detail::TaggedSpans& ts : detail::wellformed_tagseqs(n)) {
            bool compatible = true;
            for (const HeadlessSpan& sp : ts.spans) {
                for (int k = sp.start + 1; k <= sp.end && compatible; ++k)
                    compatible = heads[static_cast<std::size_t>(k - 1)] == sp.start &&
                                 child_count[static_cast<std::size_t>(k)] == 0;
                if (!compatible) break;
            }
            if (!compatible) continue;
            std::vector<bool> in_span(static_cast<std::size_t>(n) + 1, false);
            std::vector<int> span_of(static_cast<std::size_t>(n) + 1, -1);
            for (std::size_t si = 0; si < ts.spans.size(); ++si)
                for (int k = ts.spans[si].start + 1; k <= ts.spans[si].end; ++k) {
                    in_span[static_cast<std::size_t>(k)] = true;
                    span_of[static_cast<std::size_t>(k)] = static_cast<int>(si);
                }
            detail::ExtScore s;
            std::vector<int> rels(static_cast<std::size_t>(n) + 1, -1);
            for (int k = 1; k <= n; ++k) {
                int h = heads[static_cast<std::size_t>(k - 1)];
                Tag t = ts.tags[static_cast<std::size_t>(k - 1)];
                s = s + detail::ext_of(sc.tag_at(k, t), t != Tag::O ? -1 : 0);
                if (in_span[static_cast<std::size_t>(k)]) {
                    s = s + detail::ext_of(sc.attach_at(h, k), -h);
                    if (labeled) {
                        const HeadlessSpan& sp = ts.spans[static_cast<std::size_t>(
                            span_of[static_cast<std::size_t>(k)])];
                        detail::ScoredChoice c = detail::in_span_label(sc, sp.start, k, sp.end, flat,
                                                                       punct, opts.allow_punct_in_span);
                        s = s + detail::ext_of(c.score);
                        rels[static_cast<std::size_t>(k)] = c.rel;
                    }
                } else {
                    s = s + arc.at(h, k);
                    s.tkey -= h;
                    rels[static_cast<std::size_t>(k)] = arc.rel_at(h, k);
                }
            }
            if (!found || detail::improves(s, best_ext)) {
                found = true;
                best_ext = s;
                best.total_score = s.value();
                best.tie_key = s.tkey;
                best.tags = ts.tags;
                std::vector<std::string> labels(static_cast<std::size_t>(n));
                for (int k = 1; k <= n; ++k) {
                    int rel = rels[static_cast<std::size_t>(k)];
                    if (rel >= 0)
                        labels[static_cast<std::size_t>(k - 1)] = sc.rel_vocab[static_cast<std::size_t>(rel)];
                    else if (in_span[static_cast<std::size_t>(k)])
                        labels[static_cast<std::size_t>(k - 1)] = sc.flat_label;
                    else
                        labels[static_cast<std::size_t>(k - 1)] = detail::default_rel(sc);
                }
                best.graph = DepGraph::from_heads(heads, std::move(labels));
            }
        }
    }
    if (!found) throw InfeasibleError(0);
    return best;
}

}  // namespace flatmwe
