#pragma once

// The two views of headless multi-word spans: contiguous [start, end] token
// ranges on one side, per-token B/I/O tags on the other, plus the conversions
// between them, the UD compliance audit, and corpus statistics.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "flatmwe/conllu.hpp"
#include "flatmwe/util.hpp"

namespace flatmwe {

// Inclusive token range [start, end], multi-word by definition: start < end.
struct HeadlessSpan {
    int start = 0;
    int end = 0;

    friend bool operator==(const HeadlessSpan&, const HeadlessSpan&) = default;
    friend auto operator<=>(const HeadlessSpan&, const HeadlessSpan&) = default;
};

enum class Tag : int { B = 0, I = 1, O = 2 };

inline char tag_char(Tag t) { return t == Tag::B ? 'B' : t == Tag::I ? 'I' : 'O'; }

// Raw predicted sequences may be ill-formed; only gold sequences built by
// spans_to_bio are guaranteed well-formed.
using TagSeq = std::vector<Tag>;

inline std::string tags_to_string(const TagSeq& t, char sep = ' ') {
    std::string out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += sep;
        out += tag_char(t[i]);
    }
    return out;
}

struct MalformedFlatArc {
    int head = 0;
    int dep = 0;  // dep < head: a leftward arc cannot start a span
};

// Spans induced by the longest-spanning flat arcs: each head with at least
// one flat dependent to its right covers [head, furthest such dependent],
// internal punctuation included. Overlapping candidates (malformed data only)
// keep the longest covering arc, ties to the leftmost. A leftward flat arc is
// malformed; it throws unless the caller collects it for skipping.
inline std::vector<HeadlessSpan> extract_spans(const DepGraph& g, const std::string& flat_label,
                                               std::vector<MalformedFlatArc>* malformed = nullptr,
                                               char boundary = ':') {
    const int n = g.n;
    std::vector<int> furthest(static_cast<std::size_t>(n) + 1, -1);
    for (int m = 1; m <= n; ++m) {
        if (!label_matches(g.label_of(m), flat_label, boundary)) continue;
        int h = g.head_of(m);
        if (m < h) {
            if (malformed == nullptr)
                throw DataError("leftward " + flat_label + " arc " + std::to_string(h) + "->" +
                                std::to_string(m));
            malformed->push_back({h, m});
            continue;
        }
        furthest[static_cast<std::size_t>(h)] = std::max(furthest[static_cast<std::size_t>(h)], m);
    }
    std::vector<HeadlessSpan> candidates;
    for (int h = 1; h <= n; ++h)
        if (furthest[static_cast<std::size_t>(h)] > h)
            candidates.push_back({h, furthest[static_cast<std::size_t>(h)]});
    std::sort(candidates.begin(), candidates.end(), [](const HeadlessSpan& a, const HeadlessSpan& b) {
        int la = a.end - a.start, lb = b.end - b.start;
        if (la != lb) return la > lb;
        return a.start < b.start;
    });
    std::vector<HeadlessSpan> kept;
    for (const HeadlessSpan& c : candidates) {
        bool overlaps = false;
        for (const HeadlessSpan& k : kept)
            if (c.start <= k.end && k.start <= c.end) {
                overlaps = true;
                break;
            }
        if (!overlaps) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

inline TagSeq spans_to_bio(int n, const std::vector<HeadlessSpan>& spans) {
    TagSeq tags(static_cast<std::size_t>(n), Tag::O);
    std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
    for (const HeadlessSpan& s : spans) {
        if (s.start < 1 || s.end > n || s.start >= s.end)
            throw ContractViolation("spans_to_bio: bad span [" + std::to_string(s.start) + ", " +
                                    std::to_string(s.end) + "]");
        for (int k = s.start; k <= s.end; ++k) {
            if (used[static_cast<std::size_t>(k)])
                throw ContractViolation("spans_to_bio: overlapping spans at token " + std::to_string(k));
            used[static_cast<std::size_t>(k)] = true;
            tags[static_cast<std::size_t>(k - 1)] = k == s.start ? Tag::B : Tag::I;
        }
    }
    return tags;
}

// Reads maximal B I* runs as spans. An orphan I (no B or I before it) starts
// a new span rather than being dropped. Single-token spans are discarded.
inline std::vector<HeadlessSpan> bio_to_spans(const TagSeq& tags) {
    std::vector<HeadlessSpan> out;
    const int n = static_cast<int>(tags.size());
    int start = -1;
    auto close = [&](int end) {
        if (start >= 1 && end > start) out.push_back({start, end});
        start = -1;
    };
    for (int k = 1; k <= n; ++k) {
        Tag t = tags[static_cast<std::size_t>(k - 1)];
        if (t == Tag::B) {
            close(k - 1);
            start = k;
        } else if (t == Tag::I) {
            if (start < 0) start = k;
        } else {
            close(k - 1);
        }
    }
    close(n);
    return out;
}

// True iff the tree and the tag sequence induce the same span set. Malformed
// flat arcs in the tree are skipped, mirroring the extraction used on data.
inline bool consistent(const DepGraph& g, const TagSeq& tags, const std::string& flat_label = "flat",
                       char boundary = ':') {
    if (static_cast<int>(tags.size()) != g.n)
        throw ContractViolation("consistent: tag length != sentence length");
    std::vector<MalformedFlatArc> skipped;
    return extract_spans(g, flat_label, &skipped, boundary) == bio_to_spans(tags);
}

// ---------------------------------------------------------------------------
// UD compliance audit.
//   property 1: every flat-attached token is a leaf.
//   property 2: inside each span, every token attaches to the span start with
//               a flat or punct label.
// ---------------------------------------------------------------------------

struct ComplianceResult {
    bool has_flat = false;
    bool leaf_ok = true;
    bool common_head_ok = true;
    std::vector<std::pair<int, int>> violations;  // (token index, property id)

    bool compliant() const { return leaf_ok && common_head_ok; }
};

inline ComplianceResult check_compliance(const DepGraph& g, const std::string& flat_label,
                                         char boundary = ':') {
    ComplianceResult res;
    const int n = g.n;
    std::vector<int> child_count(static_cast<std::size_t>(n) + 1, 0);
    for (int k = 1; k <= n; ++k) ++child_count[static_cast<std::size_t>(g.head_of(k))];

    std::vector<MalformedFlatArc> malformed;
    std::vector<HeadlessSpan> spans = extract_spans(g, flat_label, &malformed, boundary);

    for (int m = 1; m <= n; ++m) {
        if (!label_matches(g.label_of(m), flat_label, boundary)) continue;
        res.has_flat = true;
        if (child_count[static_cast<std::size_t>(m)] > 0) {
            res.leaf_ok = false;
            res.violations.emplace_back(m, 1);
        }
    }
    // A leftward flat arc cannot belong to a well-formed span.
    for (const MalformedFlatArc& a : malformed) {
        res.common_head_ok = false;
        res.violations.emplace_back(a.dep, 2);
    }
    for (const HeadlessSpan& s : spans) {
        for (int k = s.start + 1; k <= s.end; ++k) {
            bool head_ok = g.head_of(k) == s.start;
            bool label_ok = label_matches(g.label_of(k), flat_label, boundary) ||
                            label_matches(g.label_of(k), "punct", boundary);
            if (!head_ok || !label_ok) {
                res.common_head_ok = false;
                res.violations.emplace_back(k, 2);
            }
        }
    }
    return res;
}

inline ComplianceResult check_compliance(const Sentence& s, const std::string& flat_label,
                                         char boundary = ':') {
    return check_compliance(DepGraph::from_sentence(s), flat_label, boundary);
}

// ---------------------------------------------------------------------------
// Corpus statistics.
// ---------------------------------------------------------------------------

struct StatsReport {
    long long token_count = 0;
    long long flat_arc_count = 0;
    double flat_arc_pct = 0.0;  // flat arcs per dependency arc, in percent
    long long headless_span_count = 0;
    double avg_span_length = 0.0;  // covered tokens per span, punct included
    long long sentences_with_flat = 0;
    long long compliant_sentences_with_flat = 0;
    double compliance_ratio = 100.0;  // percent; 100 when no flat sentences
};

// Mergeable per-sentence counts; lets callers fan the per-sentence work out
// across threads and reduce afterwards.
struct StatsPartial {
    long long token_count = 0;
    long long flat_arc_count = 0;
    long long span_count = 0;
    long long covered_tokens = 0;
    long long sentences_with_flat = 0;
    long long compliant_sentences_with_flat = 0;

    void merge(const StatsPartial& o) {
        token_count += o.token_count;
        flat_arc_count += o.flat_arc_count;
        span_count += o.span_count;
        covered_tokens += o.covered_tokens;
        sentences_with_flat += o.sentences_with_flat;
        compliant_sentences_with_flat += o.compliant_sentences_with_flat;
    }
};

inline StatsPartial stats_partial(const Sentence& s, const std::string& flat_label,
                                  char boundary = ':') {
    StatsPartial p;
    p.token_count = s.size();
    DepGraph g = DepGraph::from_sentence(s);
    bool has_flat = false;
    for (int k = 1; k <= g.n; ++k) {
        if (label_matches(g.label_of(k), flat_label, boundary)) {
            ++p.flat_arc_count;
            has_flat = true;
        }
    }
    std::vector<MalformedFlatArc> skipped;
    for (const HeadlessSpan& sp : extract_spans(g, flat_label, &skipped, boundary)) {
        ++p.span_count;
        p.covered_tokens += sp.end - sp.start + 1;
    }
    if (has_flat) {
        ++p.sentences_with_flat;
        if (check_compliance(g, flat_label, boundary).compliant()) ++p.compliant_sentences_with_flat;
    }
    return p;
}

inline StatsReport finalize_stats(const StatsPartial& p) {
    StatsReport r;
    r.token_count = p.token_count;
    r.flat_arc_count = p.flat_arc_count;
    r.headless_span_count = p.span_count;
    r.sentences_with_flat = p.sentences_with_flat;
    r.compliant_sentences_with_flat = p.compliant_sentences_with_flat;
    r.flat_arc_pct = r.token_count == 0
                         ? 0.0
                         : 100.0 * static_cast<double>(r.flat_arc_count) /
                               static_cast<double>(r.token_count);
    r.avg_span_length = p.span_count == 0 ? 0.0
                                          : static_cast<double>(p.covered_tokens) /
                                                static_cast<double>(p.span_count);
    r.compliance_ratio = p.sentences_with_flat == 0
                             ? 100.0
                             : 100.0 * static_cast<double>(p.compliant_sentences_with_flat) /
                                   static_cast<double>(p.sentences_with_flat);
    return r;
}

inline StatsReport corpus_stats(const std::vector<Sentence>& corpus, const std::string& flat_label,
                                char boundary = ':') {
    StatsPartial total;
    for (const Sentence& s : corpus) total.merge(stats_partial(s, flat_label, boundary));
    return finalize_stats(total);
}

// Aligned one-row table in the shape of the dataset-statistics tables used
// for treebank surveys.
inline std::string format_stats_table(const StatsReport& r, const std::string& name) {
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof(buf), "%-16s %10s %10s %7s %9s %9s %11s\n", "treebank", "tokens",
                  "flat-arcs", "%", "spans", "avg-len", "compliance");
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-16s %10lld %10lld %6.2f%% %9lld %9.2f %10.2f%%\n", name.c_str(),
                  r.token_count, r.flat_arc_count, r.flat_arc_pct, r.headless_span_count,
                  r.avg_span_length, r.compliance_ratio);
    out += buf;
    return out;
}

inline std::string format_stats_kv(const StatsReport& r) {
    char buf[64];
    std::string out;
    out += "token_count=" + std::to_string(r.token_count) + "\n";
    out += "flat_arc_count=" + std::to_string(r.flat_arc_count) + "\n";
    std::snprintf(buf, sizeof(buf), "%.4f", r.flat_arc_pct);
    out += "flat_arc_pct=" + std::string(buf) + "\n";
    out += "headless_span_count=" + std::to_string(r.headless_span_count) + "\n";
    std::snprintf(buf, sizeof(buf), "%.4f", r.avg_span_length);
    out += "avg_span_length=" + std::string(buf) + "\n";
    out += "sentences_with_flat=" + std::to_string(r.sentences_with_flat) + "\n";
    out += "compliant_sentences_with_flat=" + std::to_string(r.compliant_sentences_with_flat) + "\n";
    std::snprintf(buf, sizeof(buf), "%.4f", r.compliance_ratio);
    out += "compliance_ratio=" + std::string(buf) + "\n";
    return out;
}

// "# mwe_spans = 3:4,6:10" sentence comment carrying the span view.
inline std::string format_mwe_spans_comment(const std::vector<HeadlessSpan>& spans) {
    std::string out = "# mwe_spans =";
    for (std::size_t i = 0; i < spans.size(); ++i) {
        out += i == 0 ? " " : ",";
        out += std::to_string(spans[i].start) + ":" + std::to_string(spans[i].end);
    }
    return out;
}

inline std::optional<std::vector<HeadlessSpan>> parse_mwe_spans_comment(const std::string& line) {
    constexpr std::string_view kPrefix = "# mwe_spans =";
    if (line.rfind(kPrefix, 0) != 0) return std::nullopt;
    std::vector<HeadlessSpan> spans;
    std::string rest = line.substr(kPrefix.size());
    if (!rest.empty() && rest[0] == ' ') rest = rest.substr(1);
    if (rest.empty()) return spans;
    for (const std::string& part : split(rest, ',')) {
        auto colon = part.find(':');
        int a = 0, b = 0;
        if (colon == std::string::npos || !parse_int(part.substr(0, colon), a) ||
            !parse_int(part.substr(colon + 1), b))
            throw DataError("bad mwe_spans comment: " + line);
        spans.push_back({a, b});
    }
    return spans;
}

// Spans recorded in a sentence's comments, if any.
inline std::optional<std::vector<HeadlessSpan>> spans_from_comments(const Sentence& s) {
    for (const std::string& c : s.raw_comments)
        if (auto spans = parse_mwe_spans_comment(c)) return spans;
    return std::nullopt;
}

// Span listing: sent_id, start, end, surface text, tab-separated.
inline std::string format_spans_tsv(const Sentence& s, const std::vector<HeadlessSpan>& spans) {
    std::string out;
    for (const HeadlessSpan& sp : spans) {
        out += s.sent_id;
        out += '\t';
        out += std::to_string(sp.start);
        out += '\t';
        out += std::to_string(sp.end);
        out += '\t';
        for (int k = sp.start; k <= sp.end; ++k) {
            if (k > sp.start) out += ' ';
            out += s.token(k).form;
        }
        out += '\n';
    }
    return out;
}

}  // namespace flatmwe
