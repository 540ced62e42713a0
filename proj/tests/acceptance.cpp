// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one [PASS]/[FAIL] line per criterion. Exit status is the number of
// failed criteria.
//
// Criterion 5 checks real-corpus statistics when the corpora are supplied via
// FLATMWE_MWE_EN_CORPUS / FLATMWE_NL_LASSYSMALL (colon-separated CoNLL-U
// paths); otherwise it runs against the bundled 50-sentence fixture with
// frozen hand-tallied values.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "flatmwe/flatmwe.hpp"

using namespace flatmwe;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, const std::string& what, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << what;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!ok) ++g_failures;
}

std::string fixture(const std::string& name) {
    return std::string(FLATMWE_FIXTURE_DIR) + "/" + name;
}

std::vector<Sentence> load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_conllu(ss.str());
}

ScoreSet random_normalized(int n, Rng& rng, bool labeled) {
    ScoreSet sc = ScoreSet::make(n);
    std::vector<double> col(static_cast<std::size_t>(n) + 1);
    for (int j = 1; j <= n; ++j) {
        for (int i = 0; i <= n; ++i)
            col[static_cast<std::size_t>(i)] = i == j ? kNegInf : rng.uniform(-3.0, 0.0);
        double lse = log_sum_exp(col);
        for (int i = 0; i <= n; ++i)
            sc.attach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                i == j ? kNegInf : col[static_cast<std::size_t>(i)] - lse;
        std::vector<double> row = {rng.uniform(-3.0, 0.0), rng.uniform(-3.0, 0.0),
                                   rng.uniform(-3.0, 0.0)};
        double rlse = log_sum_exp(row);
        for (int c = 0; c < 3; ++c)
            sc.tag[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)] =
                row[static_cast<std::size_t>(c)] - rlse;
    }
    sc.rel_vocab = {"dep", "flat", "punct"};
    sc.flat_label = "flat";
    if (labeled) {
        LabelTensor lt(n, 3, kNegInf);
        std::vector<double> fiber(3);
        for (int i = 0; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
                for (int r = 0; r < 3; ++r) fiber[static_cast<std::size_t>(r)] = rng.uniform(-3.0, 0.0);
                double lse = log_sum_exp(fiber);
                for (int r = 0; r < 3; ++r) lt.at(i, j, r) = fiber[static_cast<std::size_t>(r)] - lse;
            }
        sc.label = lt;
    }
    return sc;
}

// ---- criteria 1 and 2: oracle equivalence --------------------------------

void criterion_oracle(int id, bool labeled) {
    Rng rng(labeled ? 1002 : 1001, "acceptance-oracle");
    long long bad = 0, total = 0;
    auto start = Clock::now();
    for (int n = 2; n <= 5; ++n) {
        for (int t = 0; t < 500; ++t) {
            ScoreSet sc = random_normalized(n, rng, labeled);
            ++total;
            ParseResult pe = decode_eisner_full(sc);
            ParseResult bp = brute_force_parse_full(sc);
            JointResult jd = decode_joint(sc);
            JointResult bj = brute_force_joint(sc);
            bool ok = std::abs(pe.score - bp.score) <= 1e-9 && pe.graph.heads == bp.graph.heads &&
                      std::abs(jd.total_score - bj.total_score) <= 1e-9 &&
                      jd.graph.heads == bj.graph.heads && jd.tags == bj.tags;
            if (labeled && ok)
                ok = pe.graph.labels == bp.graph.labels && jd.graph.labels == bj.graph.labels;
            if (!ok) ++bad;
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    char detail[128];
    std::snprintf(detail, sizeof(detail), "%lld/%lld exact, %.1f s", total - bad, total, secs);
    report(id, std::string("oracle equivalence, ") + (labeled ? "labeled" : "unlabeled"),
           bad == 0 && secs < 60.0, detail);
}

// ---- criteria 3 and 4: consistency and score decomposition ----------------

void criterion_consistency_and_decomposition() {
    Rng rng(1003, "acceptance-consistency");
    int violations = 0, decomposition_bad = 0, runs = 0;
    for (int t = 0; t < 1000; ++t) {
        int n = 2 + static_cast<int>(rng.below(11));  // n <= 12
        bool labeled = t % 2 == 0;
        ScoreSet sc = random_normalized(n, rng, labeled);
        DecodeOptions opts;
        opts.allow_punct_in_span = labeled && t % 4 == 0;
        JointResult r = decode_joint(sc, opts);
        ++runs;
        bool consistent_ok = consistent(r.graph, r.tags, sc.flat_label);
        bool projective_ok = is_projective(r.graph);
        ComplianceResult comp = check_compliance(r.graph, sc.flat_label);
        if (!consistent_ok || !projective_ok || !comp.compliant()) ++violations;
        if (std::abs(structure_score(sc, r.graph, r.tags) - r.total_score) > 1e-9)
            ++decomposition_bad;
    }
    report(3, "every joint decode is consistent, projective and compliant", violations == 0,
           std::to_string(runs - violations) + "/" + std::to_string(runs) + " clean");
    report(4, "total_score decomposes exactly over the output structure", decomposition_bad == 0,
           std::to_string(runs - decomposition_bad) + "/" + std::to_string(runs) + " within 1e-9");
}

// ---- criterion 5: data statistics -----------------------------------------

std::vector<Sentence> load_colon_paths(const char* env) {
    std::vector<Sentence> corpus;
    for (const std::string& p : split(env, ':')) {
        if (p.empty()) continue;
        std::vector<Sentence> part = load(p);
        corpus.insert(corpus.end(), part.begin(), part.end());
    }
    return corpus;
}

void criterion_statistics() {
    bool ok = true;
    std::string detail;
    if (const char* en = std::getenv("FLATMWE_MWE_EN_CORPUS")) {
        StatsReport r = corpus_stats(load_colon_paths(en), "mwe_NNP");
        ok = r.token_count == 731677 && r.flat_arc_count == 32065 &&
             std::abs(r.flat_arc_pct - 4.38) <= 0.01 && r.headless_span_count == 16997 &&
             std::abs(r.avg_span_length - 2.89) <= 0.05 &&
             std::abs(r.compliance_ratio - 100.0) <= 1e-9;
        detail = "MWE-aware English corpus";
    } else if (const char* nl = std::getenv("FLATMWE_NL_LASSYSMALL")) {
        StatsReport r = corpus_stats(load_colon_paths(nl), "flat");
        ok = std::abs(r.flat_arc_pct - 5.87) <= 0.02 && std::abs(r.compliance_ratio - 99.82) <= 0.1;
        detail = "nl_lassysmall";
    } else {
        StatsReport r = corpus_stats(load(fixture("stats50.conllu")), "flat");
        ok = r.token_count == 241 && r.flat_arc_count == 38 &&
             std::abs(r.flat_arc_pct - 15.7676) <= 0.01 && r.headless_span_count == 32 &&
             std::abs(r.avg_span_length - 2.21875) <= 0.05 && r.sentences_with_flat == 30 &&
             r.compliant_sentences_with_flat == 27 && std::abs(r.compliance_ratio - 90.0) <= 1e-9;
        detail = "bundled 50-sentence fixture (corpora not supplied)";
    }
    report(5, "corpus statistics reproduce the reference tallies", ok, detail);
}

// ---- criterion 6: gradient check ------------------------------------------

double grad_loss(const ModelParams& p, const std::vector<Sentence>& batch, double lambda) {
    double total = 0.0;
    for (const Sentence& s : batch) {
        ScoreSet sc = scores_for(s, p);
        DepGraph g = DepGraph::from_sentence(s);
        std::vector<MalformedFlatArc> skipped;
        TagSeq tags = spans_to_bio(
            g.n, extract_spans(g, p.config.flat_label, &skipped, p.config.subtype_boundary));
        total += loss_joint(sc, g, tags, lambda, p.config.subtype_boundary);
    }
    return total;
}

void criterion_gradients() {
    auto start = Clock::now();
    std::vector<Sentence> corpus = load(fixture("train50.conllu"));
    std::vector<Sentence> batch(corpus.begin(), corpus.begin() + 3);
    ModelConfig mc;
    mc.embed_dim = 3;
    mc.window = 1;
    mc.attach_dim = 4;
    mc.rel_dim = 3;
    mc.tag_hidden = 5;
    ModelParams params = init_model(batch, mc, 1);
    GradConfig cfg;
    cfg.lambda = 0.3;
    auto [loss, grads] = gradients(params, batch, cfg);
    (void)loss;

    struct Slot {
        const char* name;
        std::function<double*(ModelParams&, int)> coord;
        std::function<double(const ParamGrads&, int)> grad;
        int size;
    };
    std::vector<Slot> slots;
    auto add_mat = [&](const char* name, Mat ModelParams::*pm, Mat ParamGrads::*gm) {
        int size = static_cast<int>((params.*pm).size());
        slots.push_back({name,
                         [pm](ModelParams& p, int i) { return (p.*pm).data() + i; },
                         [gm](const ParamGrads& g, int i) { return *((g.*gm).data() + i); }, size});
    };
    auto add_vec = [&](const char* name, Vec ModelParams::*pv, Vec ParamGrads::*gv) {
        int size = static_cast<int>((params.*pv).size());
        slots.push_back({name,
                         [pv](ModelParams& p, int i) { return (p.*pv).data() + i; },
                         [gv](const ParamGrads& g, int i) { return *((g.*gv).data() + i); }, size});
    };
    add_mat("embeddings", &ModelParams::embeddings, &ParamGrads::embeddings);
    add_vec("root_vec", &ModelParams::root_vec, &ParamGrads::root_vec);
    add_vec("pad_vec", &ModelParams::pad_vec, &ParamGrads::pad_vec);
    add_mat("w_attach_head", &ModelParams::w_attach_head, &ParamGrads::w_attach_head);
    add_vec("b_attach_head", &ModelParams::b_attach_head, &ParamGrads::b_attach_head);
    add_mat("w_attach_mod", &ModelParams::w_attach_mod, &ParamGrads::w_attach_mod);
    add_vec("b_attach_mod", &ModelParams::b_attach_mod, &ParamGrads::b_attach_mod);
    add_mat("w_rel_head", &ModelParams::w_rel_head, &ParamGrads::w_rel_head);
    add_vec("b_rel_head", &ModelParams::b_rel_head, &ParamGrads::b_rel_head);
    add_mat("w_rel_mod", &ModelParams::w_rel_mod, &ParamGrads::w_rel_mod);
    add_vec("b_rel_mod", &ModelParams::b_rel_mod, &ParamGrads::b_rel_mod);
    add_mat("u_attach", &ModelParams::u_attach, &ParamGrads::u_attach);
    add_mat("w_tag1", &ModelParams::w_tag1, &ParamGrads::w_tag1);
    add_vec("b_tag1", &ModelParams::b_tag1, &ParamGrads::b_tag1);
    add_mat("w_tag2", &ModelParams::w_tag2, &ParamGrads::w_tag2);
    add_vec("b_tag2", &ModelParams::b_tag2, &ParamGrads::b_tag2);
    // relation biaffines, flattened by hand
    for (std::size_t r = 0; r < params.u_rel.size(); ++r) {
        int size = static_cast<int>(params.u_rel[r].size());
        slots.push_back({"u_rel",
                         [r](ModelParams& p, int i) { return p.u_rel[r].data() + i; },
                         [r](const ParamGrads& g, int i) { return *(g.u_rel[r].data() + i); }, size});
    }

    Rng rng(1006, "acceptance-grad");
    int bad = 0, checked = 0;
    const double step = 1e-4;
    for (const Slot& slot : slots) {
        for (int c = 0; c < 50; ++c) {
            int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(slot.size)));
            ModelParams probe = params;
            double* x = slot.coord(probe, i);
            double saved = *x;
            *x = saved + step;
            double up = grad_loss(probe, batch, cfg.lambda);
            *x = saved - step;
            double down = grad_loss(probe, batch, cfg.lambda);
            double fd = (up - down) / (2.0 * step);
            double an = slot.grad(grads, i);
            double denom = std::max({std::abs(fd), std::abs(an), 1e-6});
            ++checked;
            if (std::abs(fd - an) / denom >= 1e-4) ++bad;
        }
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    char detail[128];
    std::snprintf(detail, sizeof(detail), "%d/%d coordinates within 1e-4, %.1f s", checked - bad,
                  checked, secs);
    report(6, "analytic gradients match central finite differences", bad == 0 && secs < 30.0, detail);
}

// ---- criterion 7: overfit sanity -------------------------------------------

struct OverfitOutcome {
    double f1 = 0.0;
    double uas = 0.0;
};

OverfitOutcome overfit_mode(const std::vector<Sentence>& corpus, double lambda,
                            const std::string& mode) {
    TrainConfig cfg;
    cfg.lambda = lambda;
    cfg.learning_rate = 1e-2;
    cfg.batch_size = 8;
    cfg.max_epochs = 150;
    cfg.patience = 1000;  // no decay during overfitting
    cfg.seed = 17;
    ModelConfig mc;
    mc.embed_dim = 12;
    mc.window = 1;
    mc.attach_dim = 20;
    mc.rel_dim = 10;
    mc.tag_hidden = 20;
    ModelParams model = train(corpus, corpus, cfg, mc);

    std::vector<std::vector<HeadlessSpan>> gold_spans, pred_spans;
    std::vector<DepGraph> gold_graphs, pred_graphs;
    for (const Sentence& s : corpus) {
        DepGraph gold = DepGraph::from_sentence(s);
        std::vector<MalformedFlatArc> skipped;
        gold_spans.push_back(extract_spans(gold, "flat", &skipped));
        gold_graphs.push_back(gold);
        ScoreSet sc = scores_for(s, model);
        if (mode == "tag") {
            pred_spans.push_back(bio_to_spans(decode_tags(sc)));
            pred_graphs.push_back(gold);  // tree view is not predicted in tag mode
        } else if (mode == "parse") {
            DepGraph g = decode_eisner(sc);
            std::vector<MalformedFlatArc> skip2;
            pred_spans.push_back(extract_spans(g, "flat", &skip2));
            pred_graphs.push_back(g);
        } else {
            JointResult r = decode_joint(sc);
            pred_spans.push_back(bio_to_spans(r.tags));
            pred_graphs.push_back(r.graph);
        }
    }
    OverfitOutcome out;
    out.f1 = span_prf(gold_spans, pred_spans).f1;
    out.uas = attachment_scores(gold_graphs, pred_graphs).uas / 100.0;
    return out;
}

void criterion_overfit() {
    auto start = Clock::now();
    std::vector<Sentence> corpus = load(fixture("train50.conllu"));
    OverfitOutcome tag = overfit_mode(corpus, 0.0, "tag");
    OverfitOutcome joint = overfit_mode(corpus, 0.3, "joint");
    OverfitOutcome parse = overfit_mode(corpus, 1.0, "parse");
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    bool ok = tag.f1 >= 0.99 && joint.f1 >= 0.99 && joint.uas >= 0.99 && parse.f1 >= 0.99 &&
              parse.uas >= 0.99 && secs < 300.0;
    char detail[192];
    std::snprintf(detail, sizeof(detail),
                  "tag F1 %.3f | joint F1 %.3f UAS %.3f | parse F1 %.3f UAS %.3f | %.0f s", tag.f1,
                  joint.f1, joint.uas, parse.f1, parse.uas, secs);
    report(7, "overfit run reaches span F1 and UAS >= 0.99 for each mode", ok, detail);
}

// ---- criterion 8: cubic scaling ---------------------------------------------

volatile double g_timing_sink = 0.0;

double median_decode_seconds(int n, int trials, Rng& rng) {
    std::vector<double> times;
    for (int t = 0; t < trials; ++t) {
        ScoreSet sc = random_normalized(n, rng, false);
        auto s = Clock::now();
        JointResult r = decode_joint(sc);
        double dt = std::chrono::duration<double>(Clock::now() - s).count();
        g_timing_sink = g_timing_sink + r.total_score;
        times.push_back(dt);
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

void criterion_complexity() {
    Rng rng(1008, "acceptance-complexity");
    double m40 = median_decode_seconds(40, 50, rng);
    double m80 = median_decode_seconds(80, 50, rng);
    double ratio = m80 / m40;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "median %.3f ms -> %.3f ms, ratio %.2f", m40 * 1e3,
                  m80 * 1e3, ratio);
    report(8, "doubling the length scales decode time like a cubic", ratio <= 10.0, detail);
}

// ---- criterion 9: view round-trips -----------------------------------------

void criterion_roundtrips() {
    // Exhaustive: every span set readable from the 3^7 tag space survives the
    // spans -> tags -> spans round trip.
    bool ok = true;
    const int n = 7;
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    while (true) {
        TagSeq t;
        for (int d : digits) t.push_back(static_cast<Tag>(d));
        std::vector<HeadlessSpan> spans = bio_to_spans(t);
        if (bio_to_spans(spans_to_bio(n, spans)) != spans) ok = false;
        int pos = n - 1;
        while (pos >= 0) {
            if (++digits[static_cast<std::size_t>(pos)] <= 2) break;
            digits[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    // Random compliant trees: extraction followed by conversion is consistent.
    Rng rng(1009, "acceptance-roundtrip");
    int bad = 0;
    for (int t = 0; t < 1000; ++t) {
        int n2 = 2 + static_cast<int>(rng.below(11));
        std::vector<HeadlessSpan> spans;
        int pos = 1;
        while (pos < n2) {
            if (rng.uniform() < 0.35 && pos + 1 <= n2) {
                int len = 2 + static_cast<int>(rng.below(2));
                if (pos + len - 1 > n2) len = 2;
                if (pos + len - 1 <= n2) {
                    spans.push_back({pos, pos + len - 1});
                    pos += len;
                    continue;
                }
            }
            ++pos;
        }
        std::vector<bool> in_span(static_cast<std::size_t>(n2) + 1, false);
        for (const HeadlessSpan& sp : spans)
            for (int k = sp.start + 1; k <= sp.end; ++k) in_span[static_cast<std::size_t>(k)] = true;
        std::vector<int> heads(static_cast<std::size_t>(n2), -1);
        std::vector<std::string> labels(static_cast<std::size_t>(n2), "dep");
        std::vector<int> connected = {0};
        for (int k = 1; k <= n2; ++k) {
            if (in_span[static_cast<std::size_t>(k)]) continue;
            heads[static_cast<std::size_t>(k - 1)] =
                connected[static_cast<std::size_t>(rng.below(connected.size()))];
            connected.push_back(k);
        }
        for (const HeadlessSpan& sp : spans)
            for (int k = sp.start + 1; k <= sp.end; ++k) {
                heads[static_cast<std::size_t>(k - 1)] = sp.start;
                labels[static_cast<std::size_t>(k - 1)] =
                    (k < sp.end && rng.uniform() < 0.2) ? "punct" : "flat";
            }
        DepGraph g = DepGraph::from_heads(heads, std::move(labels));
        std::vector<MalformedFlatArc> skipped;
        TagSeq tags = spans_to_bio(n2, extract_spans(g, "flat", &skipped));
        if (!consistent(g, tags, "flat")) ++bad;
    }
    report(9, "view round-trips: tag-space exhaustive and extract-then-consistent", ok && bad == 0,
           bad == 0 ? "3^7 sequences + 1000 trees" : std::to_string(bad) + " tree failures");
}

// ---- criterion 10: figure golden test ---------------------------------------

void criterion_golden() {
    std::vector<Sentence> sents = load(fixture("mellon.conllu"));
    bool ok = sents.size() == 1;
    if (ok) {
        DepGraph g = DepGraph::from_sentence(sents[0]);
        std::vector<HeadlessSpan> spans = extract_spans(g, "mwe_NNP");
        TagSeq tags = spans_to_bio(g.n, spans);
        ok = spans == std::vector<HeadlessSpan>{{3, 4}} &&
             tags_to_string(tags) == "O O B I O O O O";
    }
    report(10, "reference sentence yields span (3,4) and tags O O B I O O O O", ok);
}

}  // namespace

int main() {
    try {
        criterion_oracle(1, false);
        criterion_oracle(2, true);
        criterion_consistency_and_decomposition();
        criterion_statistics();
        criterion_gradients();
        criterion_overfit();
        criterion_complexity();
        criterion_roundtrips();
        criterion_golden();
    } catch (const std::exception& e) {
        std::cout << "[FAIL] acceptance suite aborted: " << e.what() << std::endl;
        return 99;
    }
    std::cout << (g_failures == 0 ? "all criteria passed"
                                  : std::to_string(g_failures) + " criteria failed")
              << std::endl;
    return g_failures;
}
