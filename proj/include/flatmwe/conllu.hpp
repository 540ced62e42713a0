#pragma once

// CoNLL-U reading/writing and the dependency-tree data model.
//
// Ten tab-separated columns, UTF-8, LF line endings, blank-line sentence
// separation, comments starting with '#'. Multi-word-token ranges ("3-4") and
// empty nodes ("5.1") are preserved verbatim at their positions but excluded
// from the syntactic token sequence. Writing back a parsed file reproduces it
// byte for byte as long as it contains only plain token rows and comments.

#include <string>
#include <vector>

#include "flatmwe/util.hpp"

namespace flatmwe {

struct Token {
    int index = 0;  // 1-based position
    std::string form;
    std::string lemma;   // empty when the column was "_"
    std::string upos;    // empty when "_"
    std::string xpos;    // retained for round-trip
    std::string feats;   // retained for round-trip
    int head = 0;        // in [0, n]; never equal to index
    std::string deprel;  // non-empty whenever head is set
    std::string deps;    // retained for round-trip
    std::string misc;    // retained for round-trip
};

// A raw line (multi-word-token range, empty node, stray comment) anchored
// before the token with index `before_index`; n+1 anchors at sentence end.
struct RawRow {
    int before_index = 0;
    std::string text;
};

struct Sentence {
    std::vector<Token> tokens;  // indices exactly 1..n
    std::string sent_id;
    std::vector<std::string> raw_comments;  // leading comment lines, verbatim
    std::vector<RawRow> raw_rows;

    int size() const { return static_cast<int>(tokens.size()); }
    const Token& token(int index) const { return tokens[static_cast<std::size_t>(index - 1)]; }
};

// Head/label arrays encoding a dependency tree over {0..n} rooted at the
// dummy node 0. heads[k] and labels[k] are defined for k = 1..n.
struct DepGraph {
    int n = 0;
    std::vector<int> heads;           // size n+1, entry 0 unused (-1)
    std::vector<std::string> labels;  // size n+1, entry 0 unused

    DepGraph() = default;

    // one_based_heads holds heads[1..n] in order.
    static DepGraph from_heads(const std::vector<int>& one_based_heads,
                               std::vector<std::string> one_based_labels = {}) {
        DepGraph g;
        g.n = static_cast<int>(one_based_heads.size());
        g.heads.assign(static_cast<std::size_t>(g.n) + 1, -1);
        g.labels.assign(static_cast<std::size_t>(g.n) + 1, "");
        for (int k = 1; k <= g.n; ++k) {
            g.heads[static_cast<std::size_t>(k)] = one_based_heads[static_cast<std::size_t>(k - 1)];
            if (!one_based_labels.empty())
                g.labels[static_cast<std::size_t>(k)] =
                    std::move(one_based_labels[static_cast<std::size_t>(k - 1)]);
        }
        return g;
    }

    static DepGraph from_sentence(const Sentence& s) {
        DepGraph g;
        g.n = s.size();
        g.heads.assign(static_cast<std::size_t>(g.n) + 1, -1);
        g.labels.assign(static_cast<std::size_t>(g.n) + 1, "");
        for (const Token& t : s.tokens) {
            g.heads[static_cast<std::size_t>(t.index)] = t.head;
            g.labels[static_cast<std::size_t>(t.index)] = t.deprel;
        }
        return g;
    }

    int head_of(int k) const { return heads[static_cast<std::size_t>(k)]; }
    const std::string& label_of(int k) const { return labels[static_cast<std::size_t>(k)]; }
};

struct ValidationReport {
    bool is_tree = false;
    bool is_projective = false;
    int root_children = 0;
    std::vector<std::pair<int, std::string>> errors;  // (token index, message)
};

namespace detail {

inline bool is_integer_range_id(std::string_view id) {
    auto dash = id.find('-');
    if (dash == std::string_view::npos || dash == 0 || dash + 1 == id.size()) return false;
    int a = 0, b = 0;
    return parse_int(id.substr(0, dash), a) && parse_int(id.substr(dash + 1), b);
}

inline bool is_decimal_id(std::string_view id) {
    auto dot = id.find('.');
    if (dot == std::string_view::npos || dot == 0 || dot + 1 == id.size()) return false;
    int a = 0, b = 0;
    return parse_int(id.substr(0, dot), a) && parse_int(id.substr(dot + 1), b);
}

inline std::string unpad(const std::string& col) { return col == "_" ? std::string() : col; }
inline const std::string& pad(const std::string& col) {
    static const std::string underscore = "_";
    return col.empty() ? underscore : col;
}

// Reachability from node 0 via child lists; with one head per node this is
// exactly tree-ness.
inline bool is_tree(const DepGraph& g) {
    const int n = g.n;
    std::vector<std::vector<int>> children(static_cast<std::size_t>(n) + 1);
    for (int k = 1; k <= n; ++k) {
        int h = g.head_of(k);
        if (h < 0 || h > n || h == k) return false;
        children[static_cast<std::size_t>(h)].push_back(k);
    }
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    std::vector<int> stack = {0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int c : children[static_cast<std::size_t>(u)])
            if (!seen[static_cast<std::size_t>(c)]) {
                seen[static_cast<std::size_t>(c)] = true;
                ++reached;
                stack.push_back(c);
            }
    }
    return reached == n + 1;
}

}  // namespace detail

// Two arcs cross iff exactly one endpoint of one lies strictly inside the
// other's span. Arcs from the dummy root participate.
inline bool is_projective(const DepGraph& g);

inline ValidationReport validate_tree(const DepGraph& g) {
    ValidationReport rep;
    const int n = g.n;
    std::vector<std::vector<int>> children(static_cast<std::size_t>(n) + 1);
    bool structurally_ok = true;
    for (int k = 1; k <= n; ++k) {
        int h = g.head_of(k);
        if (h < 0 || h > n) {
            rep.errors.emplace_back(k, "head out of range");
            structurally_ok = false;
            continue;
        }
        if (h == k) {
            rep.errors.emplace_back(k, "self-loop");
            structurally_ok = false;
            continue;
        }
        children[static_cast<std::size_t>(h)].push_back(k);
        if (h == 0) ++rep.root_children;
    }
    // Every node has exactly one head, so tree-ness reduces to reachability
    // from the root.
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    std::vector<int> stack = {0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int c : children[static_cast<std::size_t>(u)]) {
            if (!seen[static_cast<std::size_t>(c)]) {
                seen[static_cast<std::size_t>(c)] = true;
                ++reached;
                stack.push_back(c);
            }
        }
    }
    if (reached != n + 1) {
        for (int k = 1; k <= n; ++k)
            if (!seen[static_cast<std::size_t>(k)])
                rep.errors.emplace_back(k, "unreachable from root (cycle)");
    }
    rep.is_tree = structurally_ok && reached == n + 1;
    rep.is_projective = rep.is_tree && is_projective(g);
    return rep;
}

inline bool is_projective(const DepGraph& g) {
    if (!detail::is_tree(g)) throw ContractViolation("is_projective: input is not a tree");
    const int n = g.n;
    for (int m1 = 1; m1 <= n; ++m1) {
        int a1 = std::min(g.head_of(m1), m1), b1 = std::max(g.head_of(m1), m1);
        for (int m2 = m1 + 1; m2 <= n; ++m2) {
            int a2 = std::min(g.head_of(m2), m2), b2 = std::max(g.head_of(m2), m2);
            // Strict interleaving; arcs sharing an endpoint never cross.
            if (a1 < a2 && a2 < b1 && b1 < b2) return false;
            if (a2 < a1 && a1 < b2 && b2 < b1) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Parsing.
// ---------------------------------------------------------------------------

inline std::vector<Sentence> parse_conllu(const std::string& text) {
    std::vector<Sentence> out;
    Sentence cur;
    bool in_sentence = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    auto flush = [&]() {
        if (!in_sentence) return;
        if (cur.tokens.empty() && cur.raw_comments.empty() && cur.raw_rows.empty()) {
            in_sentence = false;
            return;
        }
        int n = cur.size();
        for (const Token& t : cur.tokens)
            if (t.head > n)
                throw DataError("sentence " + (cur.sent_id.empty() ? "#" + std::to_string(out.size() + 1)
                                                                   : cur.sent_id) +
                                ": token " + std::to_string(t.index) + " has head " +
                                std::to_string(t.head) + " beyond sentence length " + std::to_string(n));
        out.push_back(std::move(cur));
        cur = Sentence{};
        in_sentence = false;
    };

    while (pos <= text.size()) {
        if (pos == text.size()) {
            flush();
            break;
        }
        auto eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = eol == std::string::npos ? text.size() : eol + 1;
        ++line_no;

        if (line.empty()) {
            flush();
            continue;
        }
        in_sentence = true;
        if (line[0] == '#') {
            if (cur.tokens.empty()) {
                cur.raw_comments.push_back(line);
            } else {
                cur.raw_rows.push_back({cur.size() + 1, line});
            }
            constexpr std::string_view kSentId = "# sent_id = ";
            if (line.rfind(kSentId, 0) == 0) cur.sent_id = line.substr(kSentId.size());
            continue;
        }
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() != 10)
            throw ParseError(line_no, "expected 10 tab-separated columns, got " +
                                          std::to_string(cols.size()));
        if (detail::is_integer_range_id(cols[0]) || detail::is_decimal_id(cols[0])) {
            cur.raw_rows.push_back({cur.size() + 1, line});
            continue;
        }
        Token t;
        if (!parse_int(cols[0], t.index) || t.index < 1)
            throw ParseError(line_no, "bad token id '" + cols[0] + "'");
        if (t.index != cur.size() + 1)
            throw ParseError(line_no, "token ids must be 1..n without gaps; got " + cols[0] +
                                          " after " + std::to_string(cur.size()));
        t.form = cols[1];
        t.lemma = detail::unpad(cols[2]);
        t.upos = detail::unpad(cols[3]);
        t.xpos = detail::unpad(cols[4]);
        t.feats = detail::unpad(cols[5]);
        if (!parse_int(cols[6], t.head) || t.head < 0)
            throw ParseError(line_no, "non-integer head '" + cols[6] + "'");
        if (t.head == t.index) throw ParseError(line_no, "token is its own head");
        t.deprel = detail::unpad(cols[7]);
        if (t.deprel.empty()) throw ParseError(line_no, "missing deprel for attached token");
        t.deps = detail::unpad(cols[8]);
        t.misc = detail::unpad(cols[9]);
        cur.tokens.push_back(std::move(t));
    }
    return out;
}

inline std::string write_conllu(const std::vector<Sentence>& sentences) {
    std::string out;
    for (const Sentence& s : sentences) {
        bool has_sent_id_comment = false;
        for (const std::string& c : s.raw_comments) {
            out += c;
            out += '\n';
            if (c.rfind("# sent_id = ", 0) == 0) has_sent_id_comment = true;
        }
        if (!s.sent_id.empty() && !has_sent_id_comment)
            out += "# sent_id = " + s.sent_id + "\n";
        std::size_t raw_i = 0;
        auto emit_raw_before = [&](int idx) {
            while (raw_i < s.raw_rows.size() && s.raw_rows[raw_i].before_index <= idx) {
                out += s.raw_rows[raw_i].text;
                out += '\n';
                ++raw_i;
            }
        };
        for (const Token& t : s.tokens) {
            emit_raw_before(t.index);
            out += std::to_string(t.index);
            out += '\t';
            out += t.form;
            out += '\t';
            out += detail::pad(t.lemma);
            out += '\t';
            out += detail::pad(t.upos);
            out += '\t';
            out += detail::pad(t.xpos);
            out += '\t';
            out += detail::pad(t.feats);
            out += '\t';
            out += std::to_string(t.head);
            out += '\t';
            out += detail::pad(t.deprel);
            out += '\t';
            out += detail::pad(t.deps);
            out += '\t';
            out += detail::pad(t.misc);
            out += '\n';
        }
        emit_raw_before(s.size() + 1);
        out += '\n';
    }
    return out;
}

}  // namespace flatmwe
