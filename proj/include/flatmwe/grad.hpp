#pragma once

// Analytic gradients of the joint loss with respect to every parameter
// tensor, written as explicit reverse-mode passes through the three heads and
// the window encoder. Verified against central finite differences by the
// test suite.

#include <cstdint>
#include <string>
#include <vector>

#include "flatmwe/model.hpp"

namespace flatmwe {

struct ParamGrads {
    Mat embeddings;
    Vec root_vec, pad_vec;
    Mat w_attach_head, w_attach_mod;
    Vec b_attach_head, b_attach_mod;
    Mat w_rel_head, w_rel_mod;
    Vec b_rel_head, b_rel_mod;
    Mat u_attach;
    std::vector<Mat> u_rel;
    Mat w_tag1;
    Vec b_tag1;
    Mat w_tag2;
    Vec b_tag2;

    static ParamGrads zeros_like(const ModelParams& p) {
        ParamGrads g;
        g.embeddings = Mat::Zero(p.embeddings.rows(), p.embeddings.cols());
        g.root_vec = Vec::Zero(p.root_vec.size());
        g.pad_vec = Vec::Zero(p.pad_vec.size());
        g.w_attach_head = Mat::Zero(p.w_attach_head.rows(), p.w_attach_head.cols());
        g.b_attach_head = Vec::Zero(p.b_attach_head.size());
        g.w_attach_mod = Mat::Zero(p.w_attach_mod.rows(), p.w_attach_mod.cols());
        g.b_attach_mod = Vec::Zero(p.b_attach_mod.size());
        g.w_rel_head = Mat::Zero(p.w_rel_head.rows(), p.w_rel_head.cols());
        g.b_rel_head = Vec::Zero(p.b_rel_head.size());
        g.w_rel_mod = Mat::Zero(p.w_rel_mod.rows(), p.w_rel_mod.cols());
        g.b_rel_mod = Vec::Zero(p.b_rel_mod.size());
        g.u_attach = Mat::Zero(p.u_attach.rows(), p.u_attach.cols());
        for (const Mat& u : p.u_rel) g.u_rel.push_back(Mat::Zero(u.rows(), u.cols()));
        g.w_tag1 = Mat::Zero(p.w_tag1.rows(), p.w_tag1.cols());
        g.b_tag1 = Vec::Zero(p.b_tag1.size());
        g.w_tag2 = Mat::Zero(p.w_tag2.rows(), p.w_tag2.cols());
        g.b_tag2 = Vec::Zero(p.b_tag2.size());
        return g;
    }

    void accumulate(const ParamGrads& o) {
        embeddings += o.embeddings;
        root_vec += o.root_vec;
        pad_vec += o.pad_vec;
        w_attach_head += o.w_attach_head;
        b_attach_head += o.b_attach_head;
        w_attach_mod += o.w_attach_mod;
        b_attach_mod += o.b_attach_mod;
        w_rel_head += o.w_rel_head;
        b_rel_head += o.b_rel_head;
        w_rel_mod += o.w_rel_mod;
        b_rel_mod += o.b_rel_mod;
        u_attach += o.u_attach;
        for (std::size_t r = 0; r < u_rel.size(); ++r) u_rel[r] += o.u_rel[r];
        w_tag1 += o.w_tag1;
        b_tag1 += o.b_tag1;
        w_tag2 += o.w_tag2;
        b_tag2 += o.b_tag2;
    }

    void check_finite() const {
        auto chk_m = [](const Mat& m, const char* name) {
            if (!m.allFinite()) throw NumericalError(std::string("non-finite gradient in ") + name);
        };
        auto chk_v = [](const Vec& v, const char* name) {
            if (!v.allFinite()) throw NumericalError(std::string("non-finite gradient in ") + name);
        };
        chk_m(embeddings, "embeddings");
        chk_v(root_vec, "root_vec");
        chk_v(pad_vec, "pad_vec");
        chk_m(w_attach_head, "w_attach_head");
        chk_v(b_attach_head, "b_attach_head");
        chk_m(w_attach_mod, "w_attach_mod");
        chk_v(b_attach_mod, "b_attach_mod");
        chk_m(w_rel_head, "w_rel_head");
        chk_v(b_rel_head, "b_rel_head");
        chk_m(w_rel_mod, "w_rel_mod");
        chk_v(b_rel_mod, "b_rel_mod");
        chk_m(u_attach, "u_attach");
        for (std::size_t r = 0; r < u_rel.size(); ++r) chk_m(u_rel[r], "u_rel");
        chk_m(w_tag1, "w_tag1");
        chk_v(b_tag1, "b_tag1");
        chk_m(w_tag2, "w_tag2");
        chk_v(b_tag2, "b_tag2");
    }
};

struct GradConfig {
    double lambda = 0.3;
    bool use_labels = true;       // include the arc-label term of the parse loss
    double dropout_rate = 0.0;    // inverted dropout on MLP inputs
    std::uint64_t dropout_seed = 0;
};

namespace detail {

// log-softmax of a finite logit vector; returns log-probabilities.
inline Vec log_softmax(const Vec& logits) {
    double m = logits.maxCoeff();
    Vec shifted = logits.array() - m;
    double lse = std::log(shifted.array().exp().sum());
    return shifted.array() - lse;
}

inline Vec relu_backward(const Vec& pre, const Vec& dout) {
    Vec out(pre.size());
    for (Eigen::Index i = 0; i < pre.size(); ++i) out(i) = pre(i) > 0.0 ? dout(i) : 0.0;
    return out;
}

}  // namespace detail

// Joint loss for one sentence plus gradient accumulation into `grads`.
// Dropout, when enabled, draws one mask per token representation from `rng`
// and applies it identically to all three heads.
inline double sentence_loss_and_gradients(const ModelParams& p, const Sentence& s,
                                          const DepGraph& gold_graph, const TagSeq& gold_tags,
                                          const GradConfig& cfg, ParamGrads& grads,
                                          Rng* dropout_rng = nullptr) {
    const int n = s.size();
    if (gold_graph.n != n || static_cast<int>(gold_tags.size()) != n)
        throw ContractViolation("gradients: gold size mismatch");
    const ModelConfig& mc = p.config;
    const double lambda = cfg.lambda;
    if (lambda < 0.0 || lambda > 1.0) throw ContractViolation("gradients: lambda outside [0, 1]");

    std::vector<Vec> xs = encode(s, p);
    std::vector<Vec> masks;
    if (cfg.dropout_rate > 0.0 && dropout_rng != nullptr) {
        const double keep = 1.0 - cfg.dropout_rate;
        masks.resize(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            Vec m(xs[i].size());
            for (Eigen::Index d = 0; d < m.size(); ++d)
                m(d) = dropout_rng->uniform() < keep ? 1.0 / keep : 0.0;
            masks[i] = m;
            xs[i] = xs[i].cwiseProduct(m);
        }
    }
    std::vector<Vec> dxs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) dxs[i] = Vec::Zero(xs[i].size());

    double loss = 0.0;

    // ---- tag head -------------------------------------------------------
    if (lambda < 1.0) {
        for (int j = 1; j <= n; ++j) {
            const Vec& x = xs[static_cast<std::size_t>(j)];
            Vec pre1 = p.w_tag1 * x + p.b_tag1;
            Vec h1 = pre1.cwiseMax(0.0);
            Vec logits = p.w_tag2 * h1 + p.b_tag2;
            Vec logp = detail::log_softmax(logits);
            int gold = static_cast<int>(gold_tags[static_cast<std::size_t>(j - 1)]);
            loss += (1.0 - lambda) * -logp(gold);
            Vec dlogits = (1.0 - lambda) * logp.array().exp().matrix();
            dlogits(gold) -= 1.0 - lambda;
            grads.w_tag2 += dlogits * h1.transpose();
            grads.b_tag2 += dlogits;
            Vec dh1 = p.w_tag2.transpose() * dlogits;
            Vec dpre1 = detail::relu_backward(pre1, dh1);
            grads.w_tag1 += dpre1 * x.transpose();
            grads.b_tag1 += dpre1;
            dxs[static_cast<std::size_t>(j)] += p.w_tag1.transpose() * dpre1;
        }
    }

    // ---- attachment head --------------------------------------------------
    if (lambda > 0.0) {
        const int d = mc.attach_dim;
        Mat pre_h(d, n + 1), pre_m(d, n + 1);
        Mat hhat(d + 1, n + 1), mhat(d + 1, n + 1);
        for (int i = 0; i <= n; ++i) {
            const Vec& x = xs[static_cast<std::size_t>(i)];
            pre_h.col(i) = p.w_attach_head * x + p.b_attach_head;
            pre_m.col(i) = p.w_attach_mod * x + p.b_attach_mod;
            hhat.col(i).head(d) = pre_h.col(i).cwiseMax(0.0);
            hhat(d, i) = 1.0;
            mhat.col(i).head(d) = pre_m.col(i).cwiseMax(0.0);
            mhat(d, i) = 1.0;
        }
        Mat um = p.u_attach * mhat;            // (d+1) x (n+1)
        Mat scores = hhat.transpose() * um;    // (n+1) x (n+1), [head][mod]
        Mat gscore = Mat::Zero(n + 1, n + 1);  // dL/ds
        for (int j = 1; j <= n; ++j) {
            // Column log-softmax with the self-head masked out.
            double m = kNegInf;
            for (int i = 0; i <= n; ++i)
                if (i != j && scores(i, j) > m) m = scores(i, j);
            double z = 0.0;
            for (int i = 0; i <= n; ++i)
                if (i != j) z += std::exp(scores(i, j) - m);
            double lse = m + std::log(z);
            int gold = gold_graph.head_of(j);
            if (gold == j) throw ContractViolation("gradients: gold head equals modifier");
            loss += lambda * (lse - scores(gold, j));
            for (int i = 0; i <= n; ++i)
                if (i != j) gscore(i, j) = lambda * std::exp(scores(i, j) - lse);
            gscore(gold, j) -= lambda;
        }
        grads.u_attach += hhat * gscore * mhat.transpose();
        Mat dhhat = um * gscore.transpose();               // (d+1) x (n+1)
        Mat dmhat = p.u_attach.transpose() * hhat * gscore;  // (d+1) x (n+1)
        for (int i = 0; i <= n; ++i) {
            Vec dpre_h = detail::relu_backward(pre_h.col(i), dhhat.col(i).head(d));
            Vec dpre_m = detail::relu_backward(pre_m.col(i), dmhat.col(i).head(d));
            const Vec& x = xs[static_cast<std::size_t>(i)];
            grads.w_attach_head += dpre_h * x.transpose();
            grads.b_attach_head += dpre_h;
            grads.w_attach_mod += dpre_m * x.transpose();
            grads.b_attach_mod += dpre_m;
            dxs[static_cast<std::size_t>(i)] +=
                p.w_attach_head.transpose() * dpre_h + p.w_attach_mod.transpose() * dpre_m;
        }
    }

    // ---- label head (teacher-forced at gold heads) ------------------------
    if (lambda > 0.0 && cfg.use_labels) {
        const int d = mc.rel_dim;
        const int R = static_cast<int>(p.rel_vocab.size());
        Mat pre_h(d, n + 1), pre_m(d, n + 1);
        Mat hhat(d + 1, n + 1), mhat(d + 1, n + 1);
        for (int i = 0; i <= n; ++i) {
            const Vec& x = xs[static_cast<std::size_t>(i)];
            pre_h.col(i) = p.w_rel_head * x + p.b_rel_head;
            pre_m.col(i) = p.w_rel_mod * x + p.b_rel_mod;
            hhat.col(i).head(d) = pre_h.col(i).cwiseMax(0.0);
            hhat(d, i) = 1.0;
            mhat.col(i).head(d) = pre_m.col(i).cwiseMax(0.0);
            mhat(d, i) = 1.0;
        }
        Mat dhhat = Mat::Zero(d + 1, n + 1), dmhat = Mat::Zero(d + 1, n + 1);
        for (int j = 1; j <= n; ++j) {
            int i = gold_graph.head_of(j);
            std::string rel(strip_subtype(gold_graph.label_of(j), mc.subtype_boundary));
            int gold_r = -1;
            for (int r = 0; r < R; ++r)
                if (p.rel_vocab[static_cast<std::size_t>(r)] == rel) {
                    gold_r = r;
                    break;
                }
            if (gold_r < 0) throw DataError("gradients: gold label '" + rel + "' not in rel_vocab");
            Vec logits(R);
            for (int r = 0; r < R; ++r)
                logits(r) = hhat.col(i).dot(p.u_rel[static_cast<std::size_t>(r)] * mhat.col(j));
            Vec logp = detail::log_softmax(logits);
            loss += lambda * -logp(gold_r);
            Vec dv = lambda * logp.array().exp().matrix();
            dv(gold_r) -= lambda;
            for (int r = 0; r < R; ++r) {
                const Mat& u = p.u_rel[static_cast<std::size_t>(r)];
                grads.u_rel[static_cast<std::size_t>(r)] += dv(r) * hhat.col(i) * mhat.col(j).transpose();
                dhhat.col(i) += dv(r) * (u * mhat.col(j));
                dmhat.col(j) += dv(r) * (u.transpose() * hhat.col(i));
            }
        }
        for (int i = 0; i <= n; ++i) {
            Vec dpre_h = detail::relu_backward(pre_h.col(i), dhhat.col(i).head(d));
            Vec dpre_m = detail::relu_backward(pre_m.col(i), dmhat.col(i).head(d));
            const Vec& x = xs[static_cast<std::size_t>(i)];
            grads.w_rel_head += dpre_h * x.transpose();
            grads.b_rel_head += dpre_h;
            grads.w_rel_mod += dpre_m * x.transpose();
            grads.b_rel_mod += dpre_m;
            dxs[static_cast<std::size_t>(i)] +=
                p.w_rel_head.transpose() * dpre_h + p.w_rel_mod.transpose() * dpre_m;
        }
    }

    // ---- scatter representation gradients back to the encoder -------------
    if (!masks.empty())
        for (std::size_t i = 0; i < dxs.size(); ++i) dxs[i] = dxs[i].cwiseProduct(masks[i]);
    grads.root_vec += dxs[0];
    for (int k = 1; k <= n; ++k) {
        const Vec& dx = dxs[static_cast<std::size_t>(k)];
        int offset = 0;
        for (int w = -mc.window; w <= mc.window; ++w) {
            int pos = k + w;
            if (pos < 1 || pos > n)
                grads.pad_vec += dx.segment(offset, mc.embed_dim);
            else
                grads.embeddings.row(p.word_id(s.token(pos).form)) +=
                    dx.segment(offset, mc.embed_dim).transpose();
            offset += mc.embed_dim;
        }
    }
    if (!std::isfinite(loss)) throw NumericalError("gradients: non-finite loss");
    return loss;
}

// Batch gradient of the summed joint loss. Gold tag sequences are derived
// from the gold trees' flat spans.
inline std::pair<double, ParamGrads> gradients(const ModelParams& p, const std::vector<Sentence>& batch,
                                               const GradConfig& cfg) {
    ParamGrads grads = ParamGrads::zeros_like(p);
    double loss = 0.0;
    Rng rng(cfg.dropout_seed, "dropout");
    Rng* rng_ptr = cfg.dropout_rate > 0.0 ? &rng : nullptr;
    for (const Sentence& s : batch) {
        DepGraph g = DepGraph::from_sentence(s);
        std::vector<MalformedFlatArc> skipped;
        TagSeq tags = spans_to_bio(
            g.n, extract_spans(g, p.config.flat_label, &skipped, p.config.subtype_boundary));
        loss += sentence_loss_and_gradients(p, s, g, tags, cfg, grads, rng_ptr);
    }
    grads.check_finite();
    return {loss, std::move(grads)};
}

}  // namespace flatmwe
