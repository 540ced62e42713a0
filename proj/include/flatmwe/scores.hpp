#pragma once

// Log-domain score tables: the decoders' sole input. One ScoreSet per
// sentence holds head-attachment scores, B/I/O tag scores and, optionally,
// arc-label scores. The on-disk form is "scores-jsonl": one JSON object per
// line per sentence, minus-infinity encoded as null.

#include <array>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "flatmwe/spans.hpp"
#include "flatmwe/util.hpp"

namespace flatmwe {

struct LabelTensor {
    int n = 0;       // tokens
    int n_rels = 0;  // relation vocabulary size
    std::vector<double> v;  // (n+1) x (n+1) x n_rels, modifier column 0 unused

    LabelTensor() = default;
    LabelTensor(int n_, int n_rels_, double fill = 0.0)
        : n(n_), n_rels(n_rels_),
          v(static_cast<std::size_t>(n_ + 1) * static_cast<std::size_t>(n_ + 1) *
                static_cast<std::size_t>(n_rels_),
            fill) {}

    double& at(int head, int mod, int rel) {
        return v[(static_cast<std::size_t>(head) * static_cast<std::size_t>(n + 1) +
                  static_cast<std::size_t>(mod)) *
                     static_cast<std::size_t>(n_rels) +
                 static_cast<std::size_t>(rel)];
    }
    double at(int head, int mod, int rel) const {
        return v[(static_cast<std::size_t>(head) * static_cast<std::size_t>(n + 1) +
                  static_cast<std::size_t>(mod)) *
                     static_cast<std::size_t>(n_rels) +
                 static_cast<std::size_t>(rel)];
    }
};

struct ScoreSet {
    std::string sent_id;
    int n = 0;
    // attach[i][j] = log P(head of token j is i), i in 0..n, j in 1..n.
    // attach[j][j] stays at minus infinity; column 0 is unused.
    std::vector<std::vector<double>> attach;
    // tag[j] = {B, I, O} log-probabilities, j in 1..n; row 0 unused.
    std::vector<std::array<double, 3>> tag;
    std::optional<LabelTensor> label;  // label[i][j][r] = log P(r | head i, mod j)
    std::vector<std::string> rel_vocab;
    std::string flat_label = "flat";

    static ScoreSet make(int n) {
        ScoreSet sc;
        sc.n = n;
        sc.attach.assign(static_cast<std::size_t>(n) + 1,
                         std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
        for (int j = 0; j <= n; ++j) sc.attach[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] = kNegInf;
        sc.tag.assign(static_cast<std::size_t>(n) + 1, {0.0, 0.0, 0.0});
        return sc;
    }

    double attach_at(int head, int mod) const {
        return attach[static_cast<std::size_t>(head)][static_cast<std::size_t>(mod)];
    }
    double tag_at(int mod, Tag t) const {
        return tag[static_cast<std::size_t>(mod)][static_cast<std::size_t>(t)];
    }

    int flat_index() const {
        for (std::size_t r = 0; r < rel_vocab.size(); ++r)
            if (rel_vocab[r] == flat_label) return static_cast<int>(r);
        return -1;
    }

    // Every attach column, every tag row and, when present, every label fiber
    // must log-sum-exp to zero within tol.
    bool check_normalized(double tol = 1e-6) const {
        std::vector<double> col(static_cast<std::size_t>(n) + 1);
        for (int j = 1; j <= n; ++j) {
            for (int i = 0; i <= n; ++i) col[static_cast<std::size_t>(i)] = attach_at(i, j);
            if (std::abs(log_sum_exp(col)) > tol) return false;
            std::vector<double> row(tag[static_cast<std::size_t>(j)].begin(),
                                    tag[static_cast<std::size_t>(j)].end());
            if (std::abs(log_sum_exp(row)) > tol) return false;
        }
        if (label) {
            std::vector<double> fiber(static_cast<std::size_t>(label->n_rels));
            for (int i = 0; i <= n; ++i)
                for (int j = 1; j <= n; ++j) {
                    for (int r = 0; r < label->n_rels; ++r)
                        fiber[static_cast<std::size_t>(r)] = label->at(i, j, r);
                    if (std::abs(log_sum_exp(fiber)) > tol) return false;
                }
        }
        return true;
    }
};

// ---------------------------------------------------------------------------
// scores-jsonl
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json score_to_json(double x) {
    if (is_neg_inf(x)) return nullptr;
    return x;
}

inline double score_from_json(const nlohmann::json& j) {
    if (j.is_null()) return kNegInf;
    if (!j.is_number()) throw DataError("scores-jsonl: expected number or null");
    return j.get<double>();
}

}  // namespace detail

inline std::string scores_to_jsonl_line(const ScoreSet& sc) {
    nlohmann::json j;
    j["sent_id"] = sc.sent_id;
    j["n"] = sc.n;
    nlohmann::json attach = nlohmann::json::array();
    for (int i = 0; i <= sc.n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int mod = 1; mod <= sc.n; ++mod) row.push_back(detail::score_to_json(sc.attach_at(i, mod)));
        attach.push_back(std::move(row));
    }
    j["attach"] = std::move(attach);
    nlohmann::json tag = nlohmann::json::array();
    for (int mod = 1; mod <= sc.n; ++mod) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < 3; ++c)
            row.push_back(detail::score_to_json(sc.tag[static_cast<std::size_t>(mod)][static_cast<std::size_t>(c)]));
        tag.push_back(std::move(row));
    }
    j["tag"] = std::move(tag);
    if (sc.label) {
        nlohmann::json label = nlohmann::json::array();
        for (int i = 0; i <= sc.n; ++i) {
            nlohmann::json plane = nlohmann::json::array();
            for (int mod = 1; mod <= sc.n; ++mod) {
                nlohmann::json fiber = nlohmann::json::array();
                for (int r = 0; r < sc.label->n_rels; ++r)
                    fiber.push_back(detail::score_to_json(sc.label->at(i, mod, r)));
                plane.push_back(std::move(fiber));
            }
            label.push_back(std::move(plane));
        }
        j["label"] = std::move(label);
    }
    j["rel_vocab"] = sc.rel_vocab;
    j["flat"] = sc.flat_label;
    return j.dump();
}

inline ScoreSet scores_from_jsonl_line(const std::string& line) try {
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw DataError("scores-jsonl: invalid JSON line");
    if (!j.contains("n") || !j["n"].is_number_integer()) throw DataError("scores-jsonl: missing n");
    int n = j["n"].get<int>();
    if (n < 0) throw DataError("scores-jsonl: negative n");
    ScoreSet sc = ScoreSet::make(n);
    if (j.contains("sent_id") && j["sent_id"].is_string()) sc.sent_id = j["sent_id"].get<std::string>();
    const auto& attach = j.at("attach");
    if (static_cast<int>(attach.size()) != n + 1) throw DataError("scores-jsonl: attach must have n+1 rows");
    for (int i = 0; i <= n; ++i) {
        const auto& row = attach[static_cast<std::size_t>(i)];
        if (static_cast<int>(row.size()) != n) throw DataError("scores-jsonl: attach rows must have n entries");
        for (int mod = 1; mod <= n; ++mod) {
            double v = detail::score_from_json(row[static_cast<std::size_t>(mod - 1)]);
            sc.attach[static_cast<std::size_t>(i)][static_cast<std::size_t>(mod)] = i == mod ? kNegInf : v;
        }
    }
    const auto& tag = j.at("tag");
    if (static_cast<int>(tag.size()) != n) throw DataError("scores-jsonl: tag must have n rows");
    for (int mod = 1; mod <= n; ++mod) {
        const auto& row = tag[static_cast<std::size_t>(mod - 1)];
        if (row.size() != 3) throw DataError("scores-jsonl: tag rows must have 3 entries (B, I, O)");
        for (int c = 0; c < 3; ++c)
            sc.tag[static_cast<std::size_t>(mod)][static_cast<std::size_t>(c)] =
                detail::score_from_json(row[static_cast<std::size_t>(c)]);
    }
    if (j.contains("rel_vocab")) sc.rel_vocab = j["rel_vocab"].get<std::vector<std::string>>();
    if (j.contains("flat") && j["flat"].is_string()) sc.flat_label = j["flat"].get<std::string>();
    if (j.contains("label") && !j["label"].is_null()) {
        int n_rels = static_cast<int>(sc.rel_vocab.size());
        if (n_rels == 0) throw DataError("scores-jsonl: label tensor requires rel_vocab");
        LabelTensor lt(n, n_rels, kNegInf);
        const auto& label = j["label"];
        if (static_cast<int>(label.size()) != n + 1)
            throw DataError("scores-jsonl: label must have n+1 planes");
        for (int i = 0; i <= n; ++i) {
            const auto& plane = label[static_cast<std::size_t>(i)];
            if (static_cast<int>(plane.size()) != n)
                throw DataError("scores-jsonl: label planes must have n rows");
            for (int mod = 1; mod <= n; ++mod) {
                const auto& fiber = plane[static_cast<std::size_t>(mod - 1)];
                if (static_cast<int>(fiber.size()) != n_rels)
                    throw DataError("scores-jsonl: label fibers must match rel_vocab size");
                for (int r = 0; r < n_rels; ++r)
                    lt.at(i, mod, r) = detail::score_from_json(fiber[static_cast<std::size_t>(r)]);
            }
        }
        sc.label = std::move(lt);
    }
    return sc;
} catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("scores-jsonl: ") + e.what());
}

inline std::vector<ScoreSet> read_scores_jsonl(std::istream& in) {
    std::vector<ScoreSet> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(scores_from_jsonl_line(line));
        } catch (const DataError& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return out;
}

inline void write_scores_jsonl(std::ostream& out, const std::vector<ScoreSet>& scores) {
    for (const ScoreSet& sc : scores) out << scores_to_jsonl_line(sc) << '\n';
}

}  // namespace flatmwe
