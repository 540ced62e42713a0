#pragma once

// Seeded, fully deterministic training: Adam over the summed joint loss,
// learning-rate decay when the development loss stops improving, and
// best-dev parameter selection.

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "flatmwe/grad.hpp"
#include "flatmwe/model.hpp"

namespace flatmwe {

struct TrainConfig {
    double lambda = 0.3;  // weight of the parse loss; 1 - lambda goes to the tag loss
    double learning_rate = 1e-3;
    int batch_size = 16;
    int max_epochs = 50;
    int patience = 3;  // dev evaluations without improvement before decaying lr x0.1
    std::uint64_t seed = 1;
    double dropout_rate = 0.0;
    bool use_labels = true;
};

namespace detail {

struct AdamSlot {
    Mat m, v;
    AdamSlot() = default;
    explicit AdamSlot(const Mat& shape) : m(Mat::Zero(shape.rows(), shape.cols())), v(m) {}

    void step(Mat& param, const Mat& grad, double lr, double beta1, double beta2, double eps,
              double bias1, double bias2) {
        m = beta1 * m + (1.0 - beta1) * grad;
        v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
        Mat mhat = m / bias1;
        Mat vhat = v / bias2;
        param -= lr * mhat.cwiseQuotient((vhat.cwiseSqrt().array() + eps).matrix());
    }
};

class AdamOptimizer {
public:
    explicit AdamOptimizer(const ModelParams& p) {
        auto add_m = [this](const Mat& m) { slots_.emplace_back(m); };
        add_m(p.embeddings);
        add_m(p.root_vec);
        add_m(p.pad_vec);
        add_m(p.w_attach_head);
        add_m(p.b_attach_head);
        add_m(p.w_attach_mod);
        add_m(p.b_attach_mod);
        add_m(p.w_rel_head);
        add_m(p.b_rel_head);
        add_m(p.w_rel_mod);
        add_m(p.b_rel_mod);
        add_m(p.u_attach);
        for (const Mat& u : p.u_rel) add_m(u);
        add_m(p.w_tag1);
        add_m(p.b_tag1);
        add_m(p.w_tag2);
        add_m(p.b_tag2);
    }

    void step(ModelParams& p, const ParamGrads& g, double lr) {
        ++t_;
        double bias1 = 1.0 - std::pow(beta1_, t_);
        double bias2 = 1.0 - std::pow(beta2_, t_);
        std::size_t i = 0;
        auto upd_m = [&](Mat& param, const Mat& grad) {
            slots_[i++].step(param, grad, lr, beta1_, beta2_, eps_, bias1, bias2);
        };
        auto upd_v = [&](Vec& param, const Vec& grad) {
            Mat pm = param, gm = grad;
            slots_[i].step(pm, gm, lr, beta1_, beta2_, eps_, bias1, bias2);
            param = pm;
            ++i;
        };
        upd_m(p.embeddings, g.embeddings);
        upd_v(p.root_vec, g.root_vec);
        upd_v(p.pad_vec, g.pad_vec);
        upd_m(p.w_attach_head, g.w_attach_head);
        upd_v(p.b_attach_head, g.b_attach_head);
        upd_m(p.w_attach_mod, g.w_attach_mod);
        upd_v(p.b_attach_mod, g.b_attach_mod);
        upd_m(p.w_rel_head, g.w_rel_head);
        upd_v(p.b_rel_head, g.b_rel_head);
        upd_m(p.w_rel_mod, g.w_rel_mod);
        upd_v(p.b_rel_mod, g.b_rel_mod);
        upd_m(p.u_attach, g.u_attach);
        for (std::size_t r = 0; r < p.u_rel.size(); ++r) upd_m(p.u_rel[r], g.u_rel[r]);
        upd_m(p.w_tag1, g.w_tag1);
        upd_v(p.b_tag1, g.b_tag1);
        upd_m(p.w_tag2, g.w_tag2);
        upd_v(p.b_tag2, g.b_tag2);
    }

private:
    std::vector<AdamSlot> slots_;
    long t_ = 0;
    double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
};

inline double corpus_loss(const ModelParams& p, const std::vector<Sentence>& corpus,
                          const TrainConfig& cfg) {
    double total = 0.0;
    for (const Sentence& s : corpus) {
        ScoreSet sc = scores_for(s, p);
        if (!cfg.use_labels) sc.label.reset();
        DepGraph g = DepGraph::from_sentence(s);
        std::vector<MalformedFlatArc> skipped;
        TagSeq tags = spans_to_bio(
            g.n, extract_spans(g, p.config.flat_label, &skipped, p.config.subtype_boundary));
        total += loss_joint(sc, g, tags, cfg.lambda, p.config.subtype_boundary);
    }
    return total;
}

}  // namespace detail

struct TrainCallbacks {
    // Called after each epoch with (epoch, train loss, dev loss, lr).
    std::function<void(int, double, double, double)> on_epoch;
};

// Trains on `corpus`, selecting the best parameters by dev loss. When `dev`
// is empty, every 10th sentence is carved out of the corpus deterministically
// (the remainder trains). Identical seeds yield identical parameters.
inline ModelParams train(const std::vector<Sentence>& corpus, const std::vector<Sentence>& dev_in,
                         const TrainConfig& cfg, const ModelConfig& model_cfg,
                         const TrainCallbacks& callbacks = {}) {
    if (corpus.empty()) throw ContractViolation("train: empty corpus");
    std::vector<Sentence> train_set, dev;
    if (dev_in.empty()) {
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            if (corpus.size() >= 10 && i % 10 == 9)
                dev.push_back(corpus[i]);
            else
                train_set.push_back(corpus[i]);
        }
        if (dev.empty()) dev.push_back(corpus.back());
    } else {
        train_set = corpus;
        dev = dev_in;
    }

    ModelParams params = init_model(train_set, model_cfg, cfg.seed);
    params.check_shapes();
    detail::AdamOptimizer adam(params);

    GradConfig gcfg;
    gcfg.lambda = cfg.lambda;
    gcfg.use_labels = cfg.use_labels;
    gcfg.dropout_rate = cfg.dropout_rate;

    ModelParams best = params;
    double best_dev = std::numeric_limits<double>::infinity();
    int stale = 0;
    double lr = cfg.learning_rate;
    Rng shuffle_rng(cfg.seed, "epoch-shuffle");

    std::vector<std::size_t> order(train_set.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double train_loss = 0.0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            std::vector<Sentence> batch;
            for (std::size_t b = start;
                 b < order.size() && b < start + static_cast<std::size_t>(cfg.batch_size); ++b)
                batch.push_back(train_set[order[b]]);
            gcfg.dropout_seed = derive_seed(cfg.seed, "dropout-epoch-" + std::to_string(epoch) +
                                                          "-batch-" + std::to_string(start));
            auto [loss, grads] = gradients(params, batch, gcfg);
            if (!std::isfinite(loss)) throw NumericalError("train: loss diverged");
            train_loss += loss;
            adam.step(params, grads, lr);
        }
        double dev_loss = detail::corpus_loss(params, dev, cfg);
        if (!std::isfinite(dev_loss)) throw NumericalError("train: dev loss diverged");
        if (dev_loss < best_dev - 1e-9) {
            best_dev = dev_loss;
            best = params;
            stale = 0;
        } else if (++stale >= cfg.patience) {
            lr *= 0.1;
            stale = 0;
        }
        if (callbacks.on_epoch) callbacks.on_epoch(epoch, train_loss, dev_loss, lr);
    }
    return best;
}

}  // namespace flatmwe
