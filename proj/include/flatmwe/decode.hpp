#pragma once

// Inference over ScoreSets: independent tagging, projective maximum-score
// dependency parsing, and the joint decoder that finds the best
// tree/tag-consistent structure.
//
// The parser and the joint decoder share one first-order chart over triangle
// (complete) and trapezoid (incomplete) items. The joint decoder adds an
// axiom that injects a complete right triangle for a whole candidate span
// (i, j), scored by span_delta: the B score at i plus, for every k in
// (i, j], the I score and the attachment of k to i (plus flat-label scores
// in the labeled case). Everything else is the classic O(n^3) dynamic
// program, so joint decoding stays cubic.
//
// Canonical tie-break, applied identically by the chart decoders and the
// brute-force oracles:
//   1. total score; candidates that are infeasible compare by how many
//      impossible (minus-infinity) terms they contain, fewer first;
//   2. an integer key summing -head(k) over tokens plus -1 per non-O tag
//      (prefers low-indexed heads, then fewer tagged tokens), higher wins;
//   3. residual ties resolve by fixed iteration order: the chart scans rules
//      in the order init < span-axiom < combine and split points ascending;
//      the oracles scan head vectors, then tag sequences, lexicographically.
// Random real-valued scores never reach step 3.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flatmwe/conllu.hpp"
#include "flatmwe/scores.hpp"
#include "flatmwe/spans.hpp"
#include "flatmwe/util.hpp"

namespace flatmwe {

// No feasible head remains for some token (an all minus-infinity column).
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(int token)
        : std::runtime_error("no feasible head for token " + std::to_string(token)), token_(token) {}
    int token() const { return token_; }

private:
    int token_;
};

struct DecodeOptions {
    bool use_labels = true;  // honored only when the ScoreSet carries a label tensor
    bool allow_punct_in_span = false;
    bool single_root = false;
};

// One filled chart cell. Triangles are complete items (the apex dominates
// everything in [left, right]); trapezoids are incomplete items carrying the
// arc between their endpoints. A span-flagged right triangle always has
// left < right.
struct ChartItem {
    enum class Kind { RightTriangle, LeftTriangle, RightTrapezoid, LeftTrapezoid };
    Kind kind = Kind::RightTriangle;
    int left = 0;
    int right = 0;
    double score = kNegInf;
    long long tie_key = 0;
    int split = -1;       // backpointer split, -1 for axioms
    bool mwe = false;     // right triangle produced by the span axiom
};

struct JointResult {
    DepGraph graph;
    TagSeq tags;
    double total_score = kNegInf;
    long long tie_key = 0;
};

// Per-position argmax over {B, I, O}; ties broken O > B > I. Span reading of
// the result goes through bio_to_spans, which repairs orphan I tags and
// drops single-token spans.
inline TagSeq decode_tags(const ScoreSet& sc) {
    TagSeq tags(static_cast<std::size_t>(sc.n), Tag::O);
    for (int j = 1; j <= sc.n; ++j) {
        Tag best = Tag::O;
        double best_score = sc.tag_at(j, Tag::O);
        for (Tag t : {Tag::B, Tag::I}) {
            double s = sc.tag_at(j, t);
            if (s > best_score) {
                best_score = s;
                best = t;
            }
        }
        tags[static_cast<std::size_t>(j - 1)] = best;
    }
    return tags;
}

// Span axiom score: log P(t_i = B) plus, for k in (i, j], the
// I-tag and head-attachment scores (and the flat-label score when labeled).
inline double span_delta(const ScoreSet& sc, int i, int j) {
    if (i < 1 || i >= j || j > sc.n) throw ContractViolation("span_delta: need 1 <= i < j <= n");
    int flat = sc.label ? sc.flat_index() : -1;
    if (sc.label && flat < 0) throw ContractViolation("span_delta: flat label missing from rel_vocab");
    double total = sc.tag_at(i, Tag::B);
    for (int k = i + 1; k <= j; ++k) {
        total = sat_add(total, sat_add(sc.tag_at(k, Tag::I), sc.attach_at(i, k)));
        if (sc.label) total = sat_add(total, sc.label->at(i, k, flat));
    }
    return total;
}

namespace detail {

enum class LabelMode { None, ArgmaxAll, JointRestricted };

// Exact log-domain score extended with an explicit count of minus-infinity
// terms. Addition stays associative where plain saturation would not be, so
// the lexicographic dynamic program keeps its optimal-substructure property
// even when every candidate is infeasible. Comparison order: fewer infinite
// terms, then larger finite part, then larger tie key.
struct ExtScore {
    int inf_count = 0;
    double finite = 0.0;
    long long tkey = 0;

    friend ExtScore operator+(const ExtScore& a, const ExtScore& b) {
        return {a.inf_count + b.inf_count, a.finite + b.finite, a.tkey + b.tkey};
    }
    double value() const { return inf_count > 0 ? kNegInf : finite; }
};

inline ExtScore ext_of(double x, long long tkey = 0) {
    if (is_neg_inf(x)) return {1, 0.0, tkey};
    return {0, x, tkey};
}

inline bool improves(const ExtScore& a, const ExtScore& b) {
    if (a.inf_count != b.inf_count) return a.inf_count < b.inf_count;
    if (a.finite != b.finite) return a.finite > b.finite;
    return a.tkey > b.tkey;
}

// Comparison on materialized results (single-root candidate selection).
inline bool improves(double s, long long k, double best_s, long long best_k) {
    if (s != best_s) return s > best_s;
    return k > best_k;
}

struct ScoredChoice {
    double score = kNegInf;
    int rel = -1;
};

// Per-arc score used by the link rules, with the label policy folded in.
struct ArcScores {
    int n = 0;
    std::vector<ExtScore> score;  // (n+1) x (n+1), [head][mod]
    std::vector<int> rel;         // chosen relation id, -1 when unlabeled

    const ExtScore& at(int h, int m) const {
        return score[static_cast<std::size_t>(h * (n + 1) + m)];
    }
    int rel_at(int h, int m) const { return rel[static_cast<std::size_t>(h * (n + 1) + m)]; }
};

inline ArcScores make_arc_scores(const ScoreSet& sc, LabelMode mode, int flat) {
    ArcScores a;
    a.n = sc.n;
    a.score.assign(static_cast<std::size_t>((sc.n + 1) * (sc.n + 1)), ExtScore{1, 0.0, 0});
    a.rel.assign(static_cast<std::size_t>((sc.n + 1) * (sc.n + 1)), -1);
    for (int h = 0; h <= sc.n; ++h)
        for (int m = 1; m <= sc.n; ++m) {
            if (h == m) continue;
            ExtScore s = ext_of(sc.attach_at(h, m));
            int rel = -1;
            if (mode != LabelMode::None) {
                double best = kNegInf;
                for (int r = 0; r < sc.label->n_rels; ++r) {
                    if (mode == LabelMode::JointRestricted && r == flat) continue;
                    double v = sc.label->at(h, m, r);
                    if (rel < 0 || v > best) {
                        best = v;
                        rel = r;
                    }
                }
                s = s + ext_of(best);
            }
            a.score[static_cast<std::size_t>(h * (sc.n + 1) + m)] = s;
            a.rel[static_cast<std::size_t>(h * (sc.n + 1) + m)] = rel;
        }
    return a;
}

// Label choice for token k inside span (i, j). Interior tokens may take
// punct when the relaxation is on; the span-final token always takes the
// flat label so the covering arc stays flat.
inline ScoredChoice in_span_label(const ScoreSet& sc, int i, int k, int j, int flat, int punct,
                                  bool allow_punct) {
    ScoredChoice c;
    c.rel = flat;
    c.score = sc.label ? sc.label->at(i, k, flat) : 0.0;
    if (allow_punct && punct >= 0 && k < j && sc.label) {
        double p = sc.label->at(i, k, punct);
        if (p > c.score) {
            c.score = p;
            c.rel = punct;
        }
    }
    return c;
}

struct ChartConfig {
    bool with_spans = false;  // enable the span axiom and tag scoring
    LabelMode label_mode = LabelMode::None;
    bool allow_punct_in_span = false;
};

struct ChartOutput {
    std::vector<int> heads;      // size n+1
    std::vector<int> rels;       // chosen relation ids, -1 = none
    TagSeq tags;
    std::vector<HeadlessSpan> spans;
    double score = kNegInf;
    long long tie_key = 0;
};

// The shared Eisner-style chart. Kind order matches ChartItem::Kind. When
// items != nullptr, every filled cell is exported after decoding.
inline ChartOutput run_chart(const ScoreSet& sc, const ChartConfig& cfg,
                             std::vector<ChartItem>* items = nullptr) {
    const int n = sc.n;
    if (n < 1) throw ContractViolation("decode: empty sentence");
    for (int j = 1; j <= n; ++j) {
        bool feasible = false;
        for (int i = 0; i <= n && !feasible; ++i)
            if (i != j && !is_neg_inf(sc.attach_at(i, j))) feasible = true;
        if (!feasible) throw InfeasibleError(j);
    }
    int flat = -1, punct = -1;
    if (cfg.label_mode != LabelMode::None) {
        if (!sc.label) throw ContractViolation("decode: labeled mode without label tensor");
        flat = sc.flat_index();
        if (cfg.label_mode == LabelMode::JointRestricted) {
            if (flat < 0) throw ContractViolation("decode: flat label missing from rel_vocab");
            if (sc.label->n_rels < 2)
                throw ConfigError("labeled joint decoding needs a non-flat relation in rel_vocab");
            for (std::size_t r = 0; r < sc.rel_vocab.size(); ++r)
                if (sc.rel_vocab[r] == "punct") punct = static_cast<int>(r);
        }
    }
    ArcScores arc = make_arc_scores(sc, cfg.label_mode, flat);

    // Span axiom scores. Without the punct relaxation the label term is a
    // fixed flat score per token, so a running prefix builds all (i, j)
    // values in O(n^2); with it, interior tokens score differently from the
    // span-final one and the table is rebuilt exactly in O(n^3).
    std::vector<ExtScore> delta;
    if (cfg.with_spans) {
        delta.assign(static_cast<std::size_t>((n + 1) * (n + 1)), ExtScore{1, 0.0, 0});
        const bool relaxed = cfg.label_mode == LabelMode::JointRestricted && cfg.allow_punct_in_span;
        for (int i = 1; i <= n; ++i) {
            ExtScore acc = ext_of(sc.tag_at(i, Tag::B), -1);
            for (int j = i + 1; j <= n; ++j) {
                ExtScore term = ext_of(sc.tag_at(j, Tag::I), -1) + ext_of(sc.attach_at(i, j), -i);
                if (cfg.label_mode == LabelMode::JointRestricted)
                    term = term + ext_of(sc.label->at(i, j, flat));
                acc = acc + term;
                delta[static_cast<std::size_t>(i * (n + 1) + j)] = acc;
            }
        }
        if (relaxed) {
            for (int i = 1; i <= n; ++i)
                for (int j = i + 1; j <= n; ++j) {
                    ExtScore total = ext_of(sc.tag_at(i, Tag::B), -1);
                    for (int k = i + 1; k <= j; ++k) {
                        total = total + ext_of(sc.tag_at(k, Tag::I), -1) +
                                ext_of(sc.attach_at(i, k), -i);
                        total = total + ext_of(in_span_label(sc, i, k, j, flat, punct, true).score);
                    }
                    delta[static_cast<std::size_t>(i * (n + 1) + j)] = total;
                }
        }
    }

    const int cells = (n + 1) * (n + 1);
    auto at = [n](int i, int j) { return static_cast<std::size_t>(i * (n + 1) + j); };
    // Backpointers: kInit and kSpan are rules, k >= 0 is a split point.
    constexpr int kUnset = -3, kSpan = -2, kInit = -1;
    std::vector<ExtScore> rt_s(cells), lt_s(cells), ra_s(cells), la_s(cells);
    std::vector<int> rt_b(cells, kUnset), lt_b(cells, kUnset), ra_b(cells, kUnset), la_b(cells, kUnset);

    for (int i = 0; i <= n; ++i) {
        rt_s[at(i, i)] = cfg.with_spans && i > 0 ? ext_of(sc.tag_at(i, Tag::O)) : ExtScore{};
        rt_b[at(i, i)] = kInit;
        if (i > 0) {
            lt_s[at(i, i)] = ExtScore{};
            lt_b[at(i, i)] = kInit;
        }
    }

    for (int w = 1; w <= n; ++w) {
        for (int i = 0; i + w <= n; ++i) {
            const int j = i + w;
            // Trapezoids: complete right half [i, k] meets complete left half
            // [k+1, j]; the new arc attaches one end to the other.
            for (int k = i; k < j; ++k) {
                if (rt_b[at(i, k)] == kUnset || lt_b[at(k + 1, j)] == kUnset) continue;
                ExtScore base = rt_s[at(i, k)] + lt_s[at(k + 1, j)];
                ExtScore s = base + arc.at(i, j);
                s.tkey -= i;
                if (ra_b[at(i, j)] == kUnset || improves(s, ra_s[at(i, j)])) {
                    ra_s[at(i, j)] = s;
                    ra_b[at(i, j)] = k;
                }
                if (i >= 1) {
                    s = base + arc.at(j, i);
                    s.tkey -= j;
                    if (la_b[at(i, j)] == kUnset || improves(s, la_s[at(i, j)])) {
                        la_s[at(i, j)] = s;
                        la_b[at(i, j)] = k;
                    }
                }
            }
            // Complete right triangle: span axiom first (documented order),
            // then combines with split k ascending.
            if (cfg.with_spans && i >= 1) {
                const ExtScore& s = delta[at(i, j)];
                rt_s[at(i, j)] = s;
                rt_b[at(i, j)] = kSpan;
            }
            for (int k = i + 1; k <= j; ++k) {
                if (ra_b[at(i, k)] == kUnset || rt_b[at(k, j)] == kUnset) continue;
                ExtScore s = ra_s[at(i, k)] + rt_s[at(k, j)];
                if (rt_b[at(i, j)] == kUnset || improves(s, rt_s[at(i, j)])) {
                    rt_s[at(i, j)] = s;
                    rt_b[at(i, j)] = k;
                }
            }
            // Complete left triangle.
            if (i >= 1) {
                for (int k = i; k < j; ++k) {
                    if (lt_b[at(i, k)] == kUnset || la_b[at(k, j)] == kUnset) continue;
                    ExtScore s = lt_s[at(i, k)] + la_s[at(k, j)];
                    if (lt_b[at(i, j)] == kUnset || improves(s, lt_s[at(i, j)])) {
                        lt_s[at(i, j)] = s;
                        lt_b[at(i, j)] = k;
                    }
                }
            }
        }
    }

    if (items) {
        for (int i = 0; i <= n; ++i)
            for (int j = i; j <= n; ++j) {
                if (rt_b[at(i, j)] != kUnset)
                    items->push_back({ChartItem::Kind::RightTriangle, i, j, rt_s[at(i, j)].value(),
                                      rt_s[at(i, j)].tkey, rt_b[at(i, j)] >= 0 ? rt_b[at(i, j)] : -1,
                                      rt_b[at(i, j)] == kSpan});
                if (lt_b[at(i, j)] != kUnset)
                    items->push_back({ChartItem::Kind::LeftTriangle, i, j, lt_s[at(i, j)].value(),
                                      lt_s[at(i, j)].tkey, lt_b[at(i, j)] >= 0 ? lt_b[at(i, j)] : -1,
                                      false});
                if (ra_b[at(i, j)] != kUnset)
                    items->push_back({ChartItem::Kind::RightTrapezoid, i, j, ra_s[at(i, j)].value(),
                                      ra_s[at(i, j)].tkey, ra_b[at(i, j)], false});
                if (la_b[at(i, j)] != kUnset)
                    items->push_back({ChartItem::Kind::LeftTrapezoid, i, j, la_s[at(i, j)].value(),
                                      la_s[at(i, j)].tkey, la_b[at(i, j)], false});
            }
    }

    ChartOutput out;
    out.heads.assign(static_cast<std::size_t>(n) + 1, -1);
    out.rels.assign(static_cast<std::size_t>(n) + 1, -1);
    out.tags.assign(static_cast<std::size_t>(n), Tag::O);
    out.score = rt_s[at(0, n)].value();
    out.tie_key = rt_s[at(0, n)].tkey;

    // Backtrace. Kinds: 0 = right triangle, 1 = left triangle,
    // 2 = right trapezoid, 3 = left trapezoid.
    std::vector<std::array<int, 3>> stack = {{0, 0, n}};
    while (!stack.empty()) {
        auto [kind, i, j] = stack.back();
        stack.pop_back();
        if (kind == 0) {
            int b = rt_b[at(i, j)];
            if (b == kInit) continue;
            if (b == kSpan) {
                out.spans.push_back({i, j});
                out.tags[static_cast<std::size_t>(i - 1)] = Tag::B;
                for (int k = i + 1; k <= j; ++k) {
                    out.tags[static_cast<std::size_t>(k - 1)] = Tag::I;
                    out.heads[static_cast<std::size_t>(k)] = i;
                    if (cfg.label_mode == LabelMode::JointRestricted)
                        out.rels[static_cast<std::size_t>(k)] =
                            in_span_label(sc, i, k, j, flat, punct, cfg.allow_punct_in_span).rel;
                    else if (cfg.label_mode == LabelMode::ArgmaxAll)
                        out.rels[static_cast<std::size_t>(k)] = arc.rel_at(i, k);
                }
                continue;
            }
            stack.push_back({2, i, b});
            stack.push_back({0, b, j});
        } else if (kind == 1) {
            int b = lt_b[at(i, j)];
            if (b == kInit) continue;
            stack.push_back({1, i, b});
            stack.push_back({3, b, j});
        } else if (kind == 2) {
            int b = ra_b[at(i, j)];
            out.heads[static_cast<std::size_t>(j)] = i;
            out.rels[static_cast<std::size_t>(j)] = arc.rel_at(i, j);
            stack.push_back({0, i, b});
            stack.push_back({1, b + 1, j});
        } else {
            int b = la_b[at(i, j)];
            out.heads[static_cast<std::size_t>(i)] = j;
            out.rels[static_cast<std::size_t>(i)] = arc.rel_at(j, i);
            stack.push_back({0, i, b});
            stack.push_back({1, b + 1, j});
        }
    }
    std::sort(out.spans.begin(), out.spans.end());
    return out;
}

// Non-flat fallback for unlabeled outputs; arcs outside spans must never
// carry the flat label.
inline std::string default_rel(const ScoreSet& sc) {
    for (const std::string& r : sc.rel_vocab)
        if (r != sc.flat_label) return r;
    return "dep";
}

inline DepGraph graph_from_chart(const ScoreSet& sc, const ChartOutput& out, bool spans_are_flat) {
    std::vector<int> heads(static_cast<std::size_t>(sc.n));
    std::vector<std::string> labels(static_cast<std::size_t>(sc.n));
    std::vector<bool> in_span(static_cast<std::size_t>(sc.n) + 1, false);
    for (const HeadlessSpan& s : out.spans)
        for (int k = s.start + 1; k <= s.end; ++k) in_span[static_cast<std::size_t>(k)] = true;
    for (int k = 1; k <= sc.n; ++k) {
        heads[static_cast<std::size_t>(k - 1)] = out.heads[static_cast<std::size_t>(k)];
        int rel = out.rels[static_cast<std::size_t>(k)];
        if (rel >= 0)
            labels[static_cast<std::size_t>(k - 1)] = sc.rel_vocab[static_cast<std::size_t>(rel)];
        else if (spans_are_flat && in_span[static_cast<std::size_t>(k)])
            labels[static_cast<std::size_t>(k - 1)] = sc.flat_label;
        else
            labels[static_cast<std::size_t>(k - 1)] = default_rel(sc);
    }
    return DepGraph::from_heads(heads, std::move(labels));
}

// Forces exactly one dependent of the dummy root by re-decoding with the
// root column masked to each candidate in turn (the root-split trick);
// costs one extra factor of n.
template <typename DecodeFn>
inline auto single_root_best(const ScoreSet& sc, DecodeFn&& decode)
    -> decltype(decode(sc)) {
    std::optional<decltype(decode(sc))> best;
    std::optional<InfeasibleError> last_err(std::nullopt);
    for (int r = 1; r <= sc.n; ++r) {
        if (is_neg_inf(sc.attach_at(0, r))) continue;
        ScoreSet masked = sc;
        for (int j = 1; j <= sc.n; ++j)
            if (j != r) masked.attach[0][static_cast<std::size_t>(j)] = kNegInf;
        try {
            auto res = decode(masked);
            if (!best || improves(res.score, res.tie_key, best->score, best->tie_key)) best = res;
        } catch (const InfeasibleError& e) {
            last_err = e;
        }
    }
    if (!best) throw last_err.value_or(InfeasibleError(0));
    return *best;
}

}  // namespace detail

struct ParseResult {
    DepGraph graph;
    double score = kNegInf;
    long long tie_key = 0;
};

// Maximum projective tree under the attachment scores (plus per-arc best
// label scores when the ScoreSet is labeled and use_labels is set).
inline ParseResult decode_eisner_full(const ScoreSet& sc, const DecodeOptions& opts = {}) {
    detail::ChartConfig cfg;
    cfg.with_spans = false;
    cfg.label_mode =
        opts.use_labels && sc.label ? detail::LabelMode::ArgmaxAll : detail::LabelMode::None;
    auto run = [&cfg](const ScoreSet& s) -> ParseResult {
        detail::ChartOutput out = detail::run_chart(s, cfg);
        ParseResult res;
        res.graph = detail::graph_from_chart(s, out, /*spans_are_flat=*/false);
        res.score = out.score;
        res.tie_key = out.tie_key;
        return res;
    };
    if (opts.single_root) return detail::single_root_best(sc, run);
    return run(sc);
}

inline DepGraph decode_eisner(const ScoreSet& sc, const DecodeOptions& opts = {}) {
    return decode_eisner_full(sc, opts).graph;
}

// Highest-scoring consistent (projective tree, tag sequence) pair. Every
// predicted span has length >= 2, all of its inner tokens attach to the span
// start, and the output tree and tags always induce the same spans.
inline JointResult decode_joint(const ScoreSet& sc, const DecodeOptions& opts = {}) {
    detail::ChartConfig cfg;
    cfg.with_spans = true;
    cfg.label_mode =
        opts.use_labels && sc.label ? detail::LabelMode::JointRestricted : detail::LabelMode::None;
    cfg.allow_punct_in_span = opts.allow_punct_in_span;
    auto run = [&cfg](const ScoreSet& s) -> JointResult {
        detail::ChartOutput out = detail::run_chart(s, cfg);
        JointResult res;
        res.graph = detail::graph_from_chart(s, out, /*spans_are_flat=*/true);
        res.tags = out.tags;
        res.total_score = out.score;
        res.tie_key = out.tie_key;
        return res;
    };
    if (opts.single_root) {
        // single_root_best keys on .score/.tie_key; adapt via a small shim.
        struct Shim {
            JointResult inner;
            double score;
            long long tie_key;
        };
        auto shim_run = [&run](const ScoreSet& s) {
            JointResult r = run(s);
            double score = r.total_score;
            long long key = r.tie_key;
            return Shim{std::move(r), score, key};
        };
        return detail::single_root_best(sc, shim_run).inner;
    }
    return run(sc);
}

// Materialized chart cells from a joint decode, for inspection.
inline std::vector<ChartItem> joint_chart_items(const ScoreSet& sc, const DecodeOptions& opts = {}) {
    detail::ChartConfig cfg;
    cfg.with_spans = true;
    cfg.label_mode =
        opts.use_labels && sc.label ? detail::LabelMode::JointRestricted : detail::LabelMode::None;
    cfg.allow_punct_in_span = opts.allow_punct_in_span;
    std::vector<ChartItem> items;
    detail::run_chart(sc, cfg, &items);
    return items;
}

// Log score of an explicit consistent (tree, tags) pair under the tables:
// tag terms, attachment terms, and label terms when the set is labeled.
inline double structure_score(const ScoreSet& sc, const DepGraph& g, const TagSeq& tags) {
    if (g.n != sc.n || static_cast<int>(tags.size()) != sc.n)
        throw ContractViolation("structure_score: size mismatch");
    if (!consistent(g, tags, sc.flat_label)) throw ContractViolation("structure_score: inconsistent pair");
    if (!is_projective(g)) throw ContractViolation("structure_score: non-projective tree");
    double total = 0.0;
    for (int k = 1; k <= sc.n; ++k) {
        total = sat_add(total, sc.tag_at(k, tags[static_cast<std::size_t>(k - 1)]));
        total = sat_add(total, sc.attach_at(g.head_of(k), k));
        if (sc.label) {
            int rel = -1;
            for (std::size_t r = 0; r < sc.rel_vocab.size(); ++r)
                if (sc.rel_vocab[r] == g.label_of(k)) {
                    rel = static_cast<int>(r);
                    break;
                }
            if (rel < 0)
                throw ContractViolation("structure_score: label '" + g.label_of(k) +
                                        "' not in rel_vocab");
            total = sat_add(total, sc.label->at(g.head_of(k), k, rel));
        }
    }
    return total;
}

}  // namespace flatmwe
