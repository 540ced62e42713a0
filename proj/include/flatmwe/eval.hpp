#pragma once

// Corpus-level evaluation: exact-boundary span F1 (micro-averaged) and
// attachment scores.

#include <cstdio>
#include <string>
#include <vector>

#include "flatmwe/conllu.hpp"
#include "flatmwe/spans.hpp"
#include "flatmwe/util.hpp"

namespace flatmwe {

struct SpanPRF {
    long long true_positives = 0;
    long long predicted_count = 0;
    long long gold_count = 0;
    double precision = 1.0;  // 1.0 when nothing was predicted
    double recall = 1.0;     // 1.0 when there is no gold span
    double f1 = 1.0;
};

inline SpanPRF span_prf(const std::vector<std::vector<HeadlessSpan>>& gold,
                        const std::vector<std::vector<HeadlessSpan>>& pred) {
    if (gold.size() != pred.size()) throw ContractViolation("span_prf: corpus length mismatch");
    SpanPRF r;
    for (std::size_t s = 0; s < gold.size(); ++s) {
        r.gold_count += static_cast<long long>(gold[s].size());
        r.predicted_count += static_cast<long long>(pred[s].size());
        for (const HeadlessSpan& p : pred[s])
            for (const HeadlessSpan& g : gold[s])
                if (p == g) {
                    ++r.true_positives;
                    break;
                }
    }
    r.precision = r.predicted_count == 0
                      ? 1.0
                      : static_cast<double>(r.true_positives) / static_cast<double>(r.predicted_count);
    r.recall = r.gold_count == 0
                   ? 1.0
                   : static_cast<double>(r.true_positives) / static_cast<double>(r.gold_count);
    r.f1 = r.precision + r.recall == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / (r.precision + r.recall);
    return r;
}

struct AttachmentScores {
    double uas = 0.0;  // percent
    double las = 0.0;  // percent
    long long token_count = 0;
};

// All tokens count, punctuation included. Labels compare equal after subtype
// stripping on both sides.
inline AttachmentScores attachment_scores(const std::vector<DepGraph>& gold,
                                          const std::vector<DepGraph>& pred, bool labels = true,
                                          char boundary = ':') {
    if (gold.size() != pred.size()) throw ContractViolation("attachment_scores: corpus length mismatch");
    AttachmentScores r;
    long long head_hits = 0, label_hits = 0;
    for (std::size_t s = 0; s < gold.size(); ++s) {
        if (gold[s].n != pred[s].n)
            throw ContractViolation("attachment_scores: sentence length mismatch at index " +
                                    std::to_string(s));
        for (int k = 1; k <= gold[s].n; ++k) {
            ++r.token_count;
            if (gold[s].head_of(k) != pred[s].head_of(k)) continue;
            ++head_hits;
            if (labels &&
                strip_subtype(gold[s].label_of(k), boundary) ==
                    strip_subtype(pred[s].label_of(k), boundary))
                ++label_hits;
        }
    }
    if (r.token_count > 0) {
        r.uas = 100.0 * static_cast<double>(head_hits) / static_cast<double>(r.token_count);
        r.las = 100.0 * static_cast<double>(label_hits) / static_cast<double>(r.token_count);
    }
    return r;
}

inline std::string format_eval_table(const SpanPRF& prf, const AttachmentScores& att) {
    char buf[160];
    std::string out;
    std::snprintf(buf, sizeof(buf), "%-10s %10s %10s %10s\n", "spans", "precision", "recall", "f1");
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-10s %10.4f %10.4f %10.4f\n", "", prf.precision, prf.recall,
                  prf.f1);
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-10s %10s %10s %10s\n", "attach", "uas", "las", "tokens");
    out += buf;
    std::snprintf(buf, sizeof(buf), "%-10s %10.2f %10.2f %10lld\n", "", att.uas, att.las,
                  att.token_count);
    out += buf;
    return out;
}

inline std::string format_eval_kv(const SpanPRF& prf, const AttachmentScores& att) {
    char buf[64];
    std::string out;
    out += "span_tp=" + std::to_string(prf.true_positives) + "\n";
    out += "span_pred=" + std::to_string(prf.predicted_count) + "\n";
    out += "span_gold=" + std::to_string(prf.gold_count) + "\n";
    std::snprintf(buf, sizeof(buf), "%.6f", prf.precision);
    out += "precision=" + std::string(buf) + "\n";
    std::snprintf(buf, sizeof(buf), "%.6f", prf.recall);
    out += "recall=" + std::string(buf) + "\n";
    std::snprintf(buf, sizeof(buf), "%.6f", prf.f1);
    out += "f1=" + std::string(buf) + "\n";
    std::snprintf(buf, sizeof(buf), "%.4f", att.uas);
    out += "uas=" + std::string(buf) + "\n";
    std::snprintf(buf, sizeof(buf), "%.4f", att.las);
    out += "las=" + std::string(buf) + "\n";
    out += "tokens=" + std::to_string(att.token_count) + "\n";
    return out;
}

}  // namespace flatmwe
