// Command-line front end: batch identification of headless multi-word
// expressions in CoNLL-U treebanks, plus the training, scoring, evaluation
// and oracle-checking machinery around it.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flatmwe/flatmwe.hpp"

namespace {

using namespace flatmwe;

// Post-parse usage problems (bad --mode value and the like); exit code 1.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << content;
}

std::vector<Sentence> load_corpus(const std::vector<std::string>& paths) {
    std::vector<Sentence> corpus;
    for (const std::string& p : paths) {
        std::vector<Sentence> part = parse_conllu(read_file(p));
        corpus.insert(corpus.end(), std::make_move_iterator(part.begin()),
                      std::make_move_iterator(part.end()));
    }
    return corpus;
}

ModelParams load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model " + path);
    return load_model(in);
}

// Per-sentence gold or predicted spans: explicit mwe_spans comments win over
// extraction from the tree.
std::vector<HeadlessSpan> sentence_spans(const Sentence& s, const std::string& flat, char boundary) {
    if (auto spans = spans_from_comments(s)) return *spans;
    std::vector<MalformedFlatArc> skipped;
    return extract_spans(DepGraph::from_sentence(s), flat, &skipped, boundary);
}

Sentence with_structure(const Sentence& base, const DepGraph& g,
                        const std::vector<HeadlessSpan>& spans) {
    Sentence out = base;
    for (Token& t : out.tokens) {
        t.head = g.head_of(t.index);
        t.deprel = g.label_of(t.index);
    }
    std::vector<std::string> comments;
    for (const std::string& c : out.raw_comments)
        if (!parse_mwe_spans_comment(c)) comments.push_back(c);
    comments.push_back(format_mwe_spans_comment(spans));
    out.raw_comments = std::move(comments);
    return out;
}

Sentence with_spans_only(const Sentence& base, const std::vector<HeadlessSpan>& spans) {
    Sentence out = base;
    std::vector<std::string> comments;
    for (const std::string& c : out.raw_comments)
        if (!parse_mwe_spans_comment(c)) comments.push_back(c);
    comments.push_back(format_mwe_spans_comment(spans));
    out.raw_comments = std::move(comments);
    return out;
}

struct BioBlock {
    std::string sent_id;
    std::vector<std::string> forms;
    TagSeq tags;
};

std::string write_bio(const std::vector<Sentence>& corpus, const std::string& flat, char boundary) {
    std::string out;
    for (const Sentence& s : corpus) {
        if (!s.sent_id.empty()) out += "# sent_id = " + s.sent_id + "\n";
        std::vector<MalformedFlatArc> skipped;
        TagSeq tags = spans_to_bio(
            s.size(), extract_spans(DepGraph::from_sentence(s), flat, &skipped, boundary));
        for (const Token& t : s.tokens) {
            out += t.form;
            out += '\t';
            out += tag_char(tags[static_cast<std::size_t>(t.index - 1)]);
            out += '\n';
        }
        out += '\n';
    }
    return out;
}

std::vector<BioBlock> read_bio(const std::string& text) {
    std::vector<BioBlock> out;
    BioBlock cur;
    bool in_block = false;
    std::size_t line_no = 0;
    std::istringstream in(text);
    std::string line;
    auto flush = [&]() {
        if (in_block && !cur.forms.empty()) out.push_back(std::move(cur));
        cur = BioBlock{};
        in_block = false;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            flush();
            continue;
        }
        in_block = true;
        constexpr std::string_view kSentId = "# sent_id = ";
        if (line[0] == '#') {
            if (line.rfind(kSentId, 0) == 0) cur.sent_id = line.substr(kSentId.size());
            continue;
        }
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() != 2) throw ParseError(line_no, "bio line needs form<TAB>tag");
        cur.forms.push_back(cols[0]);
        if (cols[1] == "B")
            cur.tags.push_back(Tag::B);
        else if (cols[1] == "I")
            cur.tags.push_back(Tag::I);
        else if (cols[1] == "O")
            cur.tags.push_back(Tag::O);
        else
            throw ParseError(line_no, "bad tag '" + cols[1] + "'");
    }
    flush();
    return out;
}

// ---------------------------------------------------------------------------

struct CommonOpts {
    std::string flat = "flat";
    std::string boundary = ":";
    char boundary_char() const { return boundary.empty() ? ':' : boundary[0]; }
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--flat", c.flat, "relation label marking headless attachment")
        ->capture_default_str();
    cmd->add_option("--subtype-boundary", c.boundary,
                    "label subtype boundary character used when matching relations")
        ->capture_default_str();
}

int cmd_stats(const std::vector<std::string>& inputs, const CommonOpts& c, const std::string& name,
              bool kv, unsigned jobs, const std::string& output) {
    std::vector<Sentence> corpus = load_corpus(inputs);
    std::vector<StatsPartial> partials = parallel_map(
        corpus,
        [&](const Sentence& s, std::size_t) { return stats_partial(s, c.flat, c.boundary_char()); },
        jobs);
    StatsPartial total;
    for (const StatsPartial& p : partials) total.merge(p);
    StatsReport report = finalize_stats(total);
    write_output(output, kv ? format_stats_kv(report) : format_stats_table(report, name));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"headless multi-word expression identification toolkit"};
    app.require_subcommand(1);

    try {
        // ---- stats -------------------------------------------------------
        auto* stats = app.add_subcommand("stats", "corpus statistics: tokens, flat arcs, spans, compliance");
        std::vector<std::string> stats_inputs;
        CommonOpts stats_c;
        std::string stats_name = "corpus", stats_out;
        bool stats_kv = false;
        unsigned stats_jobs = default_jobs();
        stats->add_option("--input,-i", stats_inputs, "CoNLL-U files")->required()->expected(-1);
        add_common(stats, stats_c);
        stats->add_option("--name", stats_name, "row label for the table");
        stats->add_flag("--kv", stats_kv, "emit key=value lines instead of a table");
        stats->add_option("--jobs", stats_jobs, "worker threads");
        stats->add_option("--output,-o", stats_out, "output path (default stdout)");

        // ---- extract-spans -------------------------------------------------
        auto* extract = app.add_subcommand("extract-spans", "list flat spans as TSV");
        std::vector<std::string> extract_inputs;
        CommonOpts extract_c;
        std::string extract_out;
        extract->add_option("--input,-i", extract_inputs, "CoNLL-U files")->required()->expected(-1);
        add_common(extract, extract_c);
        extract->add_option("--output,-o", extract_out, "output path");

        // ---- to-bio --------------------------------------------------------
        auto* tobio = app.add_subcommand("to-bio", "convert the tree view to per-token B/I/O tags");
        std::vector<std::string> tobio_inputs;
        CommonOpts tobio_c;
        std::string tobio_out;
        tobio->add_option("--input,-i", tobio_inputs, "CoNLL-U files")->required()->expected(-1);
        add_common(tobio, tobio_c);
        tobio->add_option("--output,-o", tobio_out, "output path");

        // ---- to-tree-view ---------------------------------------------------
        auto* totree = app.add_subcommand(
            "to-tree-view", "make tag-view spans explicit in a tree (spans attach to span starts)");
        std::string totree_bio, totree_base, totree_out;
        CommonOpts totree_c;
        totree->add_option("--bio", totree_bio, "B/I/O file (form<TAB>tag lines)")->required();
        totree->add_option("--base", totree_base,
                           "CoNLL-U file supplying trees outside the spans; without it every "
                           "non-span token attaches to the root");
        add_common(totree, totree_c);
        totree->add_option("--output,-o", totree_out, "output path");

        // ---- score ----------------------------------------------------------
        auto* score = app.add_subcommand("score", "run the model and emit scores-jsonl");
        std::string score_model, score_vectors, score_out;
        std::vector<std::string> score_inputs;
        unsigned score_jobs = default_jobs();
        score->add_option("--model,-m", score_model, "model artifact")->required();
        score->add_option("--input,-i", score_inputs, "CoNLL-U files")->required()->expected(-1);
        score->add_option("--vectors", score_vectors,
                          "external per-sentence representations (vectors-jsonl)");
        score->add_option("--jobs", score_jobs, "worker threads");
        score->add_option("--output,-o", score_out, "output path");

        // ---- decode ---------------------------------------------------------
        auto* decode = app.add_subcommand("decode", "annotate a treebank with predicted structures");
        std::string decode_model, decode_scores, decode_mode = "joint", decode_out, decode_tsv,
                    decode_vectors;
        std::vector<std::string> decode_inputs;
        CommonOpts decode_c;
        bool decode_punct = false, decode_single_root = false, decode_unlabeled = false;
        unsigned decode_jobs = default_jobs();
        decode->add_option("--input,-i", decode_inputs, "CoNLL-U files")->required()->expected(-1);
        decode->add_option("--model,-m", decode_model, "model artifact");
        decode->add_option("--scores", decode_scores, "precomputed scores-jsonl");
        decode->add_option("--vectors", decode_vectors, "external representations (with --model)");
        decode->add_option("--mode", decode_mode, "parse | tag | joint")->capture_default_str();
        add_common(decode, decode_c);
        decode->add_flag("--allow-punct-in-span", decode_punct,
                         "let span-internal arcs take the punct label");
        decode->add_flag("--single-root", decode_single_root, "force exactly one root dependent");
        decode->add_flag("--unlabeled", decode_unlabeled, "ignore label scores");
        decode->add_option("--jobs", decode_jobs, "worker threads");
        decode->add_option("--spans-tsv", decode_tsv, "also write the span list as TSV");
        decode->add_option("--output,-o", decode_out, "output path");

        // ---- train ----------------------------------------------------------
        auto* train_cmd = app.add_subcommand("train", "train a model and save the artifact");
        std::vector<std::string> train_inputs, train_dev;
        std::string train_out = "model.flatdec";
        CommonOpts train_c;
        TrainConfig tcfg;
        ModelConfig mcfg;
        bool train_quiet = false;
        train_cmd->add_option("--input,-i", train_inputs, "training CoNLL-U files")->required()->expected(-1);
        train_cmd->add_option("--dev", train_dev, "development CoNLL-U files")->expected(-1);
        add_common(train_cmd, train_c);
        train_cmd->add_option("--lambda", tcfg.lambda, "parse-loss weight in [0,1]")
            ->capture_default_str();
        train_cmd->add_option("--lr", tcfg.learning_rate, "Adam learning rate")->capture_default_str();
        train_cmd->add_option("--batch", tcfg.batch_size, "batch size")->capture_default_str();
        train_cmd->add_option("--epochs", tcfg.max_epochs, "max epochs")->capture_default_str();
        train_cmd->add_option("--patience", tcfg.patience, "dev evaluations before lr decay")
            ->capture_default_str();
        train_cmd->add_option("--seed", tcfg.seed, "master random seed")->capture_default_str();
        train_cmd->add_option("--dropout", tcfg.dropout_rate, "dropout rate on MLP inputs")
            ->capture_default_str();
        train_cmd->add_option("--embed-dim", mcfg.embed_dim, "word embedding size")
            ->capture_default_str();
        train_cmd->add_option("--window", mcfg.window, "context half-width")->capture_default_str();
        train_cmd->add_option("--attach-dim", mcfg.attach_dim, "attachment biaffine size")
            ->capture_default_str();
        train_cmd->add_option("--rel-dim", mcfg.rel_dim, "labeling biaffine size")
            ->capture_default_str();
        train_cmd->add_option("--tag-hidden", mcfg.tag_hidden, "tag MLP hidden size")
            ->capture_default_str();
        train_cmd->add_flag("--quiet", train_quiet, "suppress per-epoch progress");
        train_cmd->add_option("--output,-o", train_out, "model artifact path")->capture_default_str();

        // ---- eval -----------------------------------------------------------
        auto* eval_cmd = app.add_subcommand("eval", "span F1 and attachment scores");
        std::string eval_gold, eval_pred, eval_out;
        CommonOpts eval_c;
        bool eval_kv = false;
        eval_cmd->add_option("--gold", eval_gold, "gold CoNLL-U")->required();
        eval_cmd->add_option("--pred", eval_pred, "predicted CoNLL-U")->required();
        add_common(eval_cmd, eval_c);
        eval_cmd->add_flag("--kv", eval_kv, "emit key=value lines");
        eval_cmd->add_option("--output,-o", eval_out, "output path");

        // ---- oracle-check -----------------------------------------------------
        auto* oracle = app.add_subcommand("oracle-check",
                                          "verify chart decoders against brute-force enumeration");
        int oracle_n = 5, oracle_trials = 500;
        std::uint64_t oracle_seed = 7;
        bool oracle_labeled = false;
        std::string oracle_scores;
        oracle->add_option("--n", oracle_n, "max sentence length (>= 2)")->capture_default_str();
        oracle->add_option("--trials", oracle_trials, "number of random score sets")
            ->capture_default_str();
        oracle->add_option("--seed", oracle_seed, "random seed")->capture_default_str();
        oracle->add_flag("--labeled", oracle_labeled, "include arc-label scores");
        oracle->add_option("--scores", oracle_scores,
                           "check these scores-jsonl sets instead of random ones");

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);  // prints the message and a help pointer to stderr
            return 1;
        }
        bool decode_flat_set = decode->count("--flat") > 0;

        if (stats->parsed())
            return cmd_stats(stats_inputs, stats_c, stats_name, stats_kv, stats_jobs, stats_out);

        if (extract->parsed()) {
            std::vector<Sentence> corpus = load_corpus(extract_inputs);
            std::string out;
            for (const Sentence& s : corpus) {
                std::vector<MalformedFlatArc> skipped;
                out += format_spans_tsv(
                    s, extract_spans(DepGraph::from_sentence(s), extract_c.flat, &skipped,
                                     extract_c.boundary_char()));
            }
            write_output(extract_out, out);
            return 0;
        }

        if (tobio->parsed()) {
            write_output(tobio_out,
                         write_bio(load_corpus(tobio_inputs), tobio_c.flat, tobio_c.boundary_char()));
            return 0;
        }

        if (totree->parsed()) {
            std::vector<BioBlock> blocks = read_bio(read_file(totree_bio));
            std::vector<Sentence> base;
            if (!totree_base.empty()) {
                base = parse_conllu(read_file(totree_base));
                if (base.size() != blocks.size())
                    throw DataError("to-tree-view: base and bio sentence counts differ");
            }
            std::vector<Sentence> out;
            for (std::size_t i = 0; i < blocks.size(); ++i) {
                const BioBlock& blk = blocks[i];
                Sentence s;
                if (!base.empty()) {
                    s = base[i];
                    if (s.size() != static_cast<int>(blk.forms.size()))
                        throw DataError("to-tree-view: length mismatch at sentence " +
                                        std::to_string(i + 1));
                } else {
                    s.sent_id = blk.sent_id;
                    for (std::size_t k = 0; k < blk.forms.size(); ++k) {
                        Token t;
                        t.index = static_cast<int>(k) + 1;
                        t.form = blk.forms[k];
                        t.head = 0;
                        t.deprel = "root";
                        s.tokens.push_back(std::move(t));
                    }
                }
                std::vector<HeadlessSpan> spans = bio_to_spans(blk.tags);
                for (const HeadlessSpan& sp : spans)
                    for (int k = sp.start + 1; k <= sp.end; ++k) {
                        s.tokens[static_cast<std::size_t>(k - 1)].head = sp.start;
                        s.tokens[static_cast<std::size_t>(k - 1)].deprel = totree_c.flat;
                    }
                out.push_back(with_spans_only(s, spans));
            }
            write_output(totree_out, write_conllu(out));
            return 0;
        }

        if (score->parsed()) {
            ModelParams model = load_model_file(score_model);
            std::vector<Sentence> corpus = load_corpus(score_inputs);
            std::vector<std::vector<Vec>> external;
            if (!score_vectors.empty()) {
                std::ifstream in(score_vectors);
                if (!in) throw DataError("cannot open " + score_vectors);
                auto loaded = read_vectors_jsonl(in);
                if (loaded.size() != corpus.size())
                    throw DataError("vectors-jsonl: sentence count mismatch");
                for (auto& [id, vecs] : loaded) external.push_back(std::move(vecs));
            }
            std::vector<std::string> lines = parallel_map(
                corpus,
                [&](const Sentence& s, std::size_t i) {
                    const std::vector<Vec>* ext = external.empty() ? nullptr : &external[i];
                    return scores_to_jsonl_line(scores_for(s, model, ext));
                },
                score_jobs);
            std::string out;
            for (const std::string& l : lines) {
                out += l;
                out += '\n';
            }
            write_output(score_out, out);
            return 0;
        }

        if (decode->parsed()) {
            if (decode_mode != "parse" && decode_mode != "tag" && decode_mode != "joint")
                throw UsageError("--mode must be parse, tag or joint");
            std::vector<Sentence> corpus = load_corpus(decode_inputs);
            std::vector<ScoreSet> scores;
            if (!decode_scores.empty()) {
                std::ifstream in(decode_scores);
                if (!in) throw DataError("cannot open " + decode_scores);
                scores = read_scores_jsonl(in);
                if (scores.size() != corpus.size())
                    throw DataError("scores-jsonl: sentence count mismatch with input");
                for (std::size_t i = 0; i < corpus.size(); ++i) {
                    if (scores[i].n != corpus[i].size())
                        throw DataError("scores-jsonl: length mismatch at sentence " +
                                        std::to_string(i + 1));
                    if (!scores[i].sent_id.empty() && !corpus[i].sent_id.empty() &&
                        scores[i].sent_id != corpus[i].sent_id)
                        throw DataError("scores-jsonl: sent_id mismatch at sentence " +
                                        std::to_string(i + 1));
                }
            } else if (!decode_model.empty()) {
                ModelParams model = load_model_file(decode_model);
                std::vector<std::vector<Vec>> external;
                if (!decode_vectors.empty()) {
                    std::ifstream in(decode_vectors);
                    if (!in) throw DataError("cannot open " + decode_vectors);
                    auto loaded = read_vectors_jsonl(in);
                    if (loaded.size() != corpus.size())
                        throw DataError("vectors-jsonl: sentence count mismatch");
                    for (auto& [id, vecs] : loaded) external.push_back(std::move(vecs));
                }
                scores = parallel_map(
                    corpus,
                    [&](const Sentence& s, std::size_t i) {
                        const std::vector<Vec>* ext = external.empty() ? nullptr : &external[i];
                        return scores_for(s, model, ext);
                    },
                    decode_jobs);
            } else {
                throw UsageError("decode needs --model or --scores");
            }

            DecodeOptions opts;
            opts.use_labels = !decode_unlabeled;
            opts.allow_punct_in_span = decode_punct;
            opts.single_root = decode_single_root;
            struct Decoded {
                Sentence sentence;
                std::vector<HeadlessSpan> spans;
            };
            std::vector<Decoded> decoded = parallel_map(
                corpus,
                [&](const Sentence& s, std::size_t i) -> Decoded {
                    ScoreSet& sc = scores[i];
                    if (decode_flat_set) sc.flat_label = decode_c.flat;
                    if (decode_mode == "tag") {
                        std::vector<HeadlessSpan> spans = bio_to_spans(decode_tags(sc));
                        return {with_spans_only(s, spans), spans};
                    }
                    if (decode_mode == "parse") {
                        DepGraph g = decode_eisner(sc, opts);
                        std::vector<MalformedFlatArc> skipped;
                        std::vector<HeadlessSpan> spans =
                            extract_spans(g, sc.flat_label, &skipped, decode_c.boundary_char());
                        return {with_structure(s, g, spans), spans};
                    }
                    JointResult jr = decode_joint(sc, opts);
                    std::vector<HeadlessSpan> spans = bio_to_spans(jr.tags);
                    return {with_structure(s, jr.graph, spans), spans};
                },
                decode_jobs);
            std::string conllu_out, tsv_out;
            for (std::size_t i = 0; i < decoded.size(); ++i) {
                conllu_out += write_conllu({decoded[i].sentence});
                if (!decode_tsv.empty())
                    tsv_out += format_spans_tsv(decoded[i].sentence, decoded[i].spans);
            }
            write_output(decode_out, conllu_out);
            if (!decode_tsv.empty()) write_output(decode_tsv, tsv_out);
            return 0;
        }

        if (train_cmd->parsed()) {
            std::vector<Sentence> corpus = load_corpus(train_inputs);
            std::vector<Sentence> dev;
            if (!train_dev.empty()) dev = load_corpus(train_dev);
            mcfg.flat_label = train_c.flat;
            mcfg.subtype_boundary = train_c.boundary_char();
            TrainCallbacks cb;
            if (!train_quiet)
                cb.on_epoch = [](int epoch, double train_loss, double dev_loss, double lr) {
                    std::cerr << "epoch " << epoch << " train_loss " << train_loss << " dev_loss "
                              << dev_loss << " lr " << lr << "\n";
                };
            ModelParams model = train(corpus, dev, tcfg, mcfg, cb);
            std::ofstream out(train_out, std::ios::binary);
            if (!out) throw DataError("cannot open " + train_out + " for writing");
            save_model(out, model);
            return 0;
        }

        if (eval_cmd->parsed()) {
            std::vector<Sentence> gold = parse_conllu(read_file(eval_gold));
            std::vector<Sentence> pred = parse_conllu(read_file(eval_pred));
            if (gold.size() != pred.size()) throw DataError("eval: sentence count mismatch");
            std::vector<std::vector<HeadlessSpan>> gold_spans, pred_spans;
            std::vector<DepGraph> gold_graphs, pred_graphs;
            for (std::size_t i = 0; i < gold.size(); ++i) {
                gold_spans.push_back(sentence_spans(gold[i], eval_c.flat, eval_c.boundary_char()));
                pred_spans.push_back(sentence_spans(pred[i], eval_c.flat, eval_c.boundary_char()));
                gold_graphs.push_back(DepGraph::from_sentence(gold[i]));
                pred_graphs.push_back(DepGraph::from_sentence(pred[i]));
            }
            SpanPRF prf = span_prf(gold_spans, pred_spans);
            AttachmentScores att = attachment_scores(gold_graphs, pred_graphs, true,
                                                     eval_c.boundary_char());
            write_output(eval_out, eval_kv ? format_eval_kv(prf, att) : format_eval_table(prf, att));
            return 0;
        }

        if (oracle->parsed()) {
            if (oracle_n < 2) throw UsageError("--n must be >= 2");
            long long pass = 0, total = 0;
            auto check_one = [&](const ScoreSet& sc) {
                ++total;
                ParseResult pe = decode_eisner_full(sc);
                ParseResult bp = brute_force_parse_full(sc, oracle_n);
                JointResult jd = decode_joint(sc);
                JointResult bj = brute_force_joint(sc, oracle_n);
                bool ok = std::abs(pe.score - bp.score) <= 1e-9 &&
                          pe.graph.heads == bp.graph.heads &&
                          std::abs(jd.total_score - bj.total_score) <= 1e-9 &&
                          jd.graph.heads == bj.graph.heads && jd.tags == bj.tags;
                if (ok) ++pass;
            };
            if (!oracle_scores.empty()) {
                std::ifstream in(oracle_scores);
                if (!in) throw DataError("cannot open " + oracle_scores);
                for (const ScoreSet& sc : read_scores_jsonl(in)) {
                    if (sc.n > oracle_n)
                        throw DataError("oracle-check: sentence of length " + std::to_string(sc.n) +
                                        " exceeds --n " + std::to_string(oracle_n));
                    check_one(sc);
                }
            } else {
                Rng rng(oracle_seed, "oracle-check");
                for (int t = 0; t < oracle_trials; ++t) {
                    int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(oracle_n - 1)));
                    ScoreSet sc = ScoreSet::make(n);
                    for (int j = 1; j <= n; ++j) {
                        for (int i = 0; i <= n; ++i)
                            if (i != j)
                                sc.attach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                                    rng.uniform(-4.0, 0.0);
                        for (int c = 0; c < 3; ++c)
                            sc.tag[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)] =
                                rng.uniform(-4.0, 0.0);
                    }
                    sc.rel_vocab = {"dep", "flat", "punct"};
                    if (oracle_labeled) {
                        LabelTensor lt(n, 3, kNegInf);
                        for (int i = 0; i <= n; ++i)
                            for (int j = 1; j <= n; ++j)
                                for (int r = 0; r < 3; ++r) lt.at(i, j, r) = rng.uniform(-4.0, 0.0);
                        sc.label = lt;
                    }
                    check_one(sc);
                }
            }
            std::cout << pass << "/" << total << " exact\n";
            return pass == total ? 0 : 3;
        }

        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
