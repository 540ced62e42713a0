#pragma once

// The trainable scoring model. Contextualized representations come from a
// window-concatenation encoder over learned word embeddings (external
// per-sentence vectors can substitute for it); three heads share them:
// biaffine head selection, biaffine arc labeling, and a 3-way tag
// classifier. Heads are single-hidden-layer ReLU MLPs; the tag head adds a
// linear output layer on top of its hidden layer.

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "flatmwe/conllu.hpp"
#include "flatmwe/rng.hpp"
#include "flatmwe/scores.hpp"
#include "flatmwe/spans.hpp"
#include "flatmwe/util.hpp"

namespace flatmwe {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr char kModelMagic[9] = "FLATDEC1";  // 8 bytes + NUL

struct ModelConfig {
    int embed_dim = 100;
    int window = 1;        // context half-width; input dim = (2*window+1)*embed_dim
    int attach_dim = 500;  // biaffine head-selection space
    int rel_dim = 100;     // biaffine labeling space
    int tag_hidden = 500;  // tag MLP hidden layer
    std::string flat_label = "flat";
    char subtype_boundary = ':';

    int input_dim() const { return (2 * window + 1) * embed_dim; }
};

struct ModelParams {
    ModelConfig config;
    std::map<std::string, int> vocab;  // word form -> id; id 0 is the unknown word
    std::vector<std::string> rel_vocab;

    Mat embeddings;  // vocab_size x embed_dim
    Vec root_vec;    // input_dim
    Vec pad_vec;     // embed_dim

    Mat w_attach_head, w_attach_mod;  // attach_dim x input_dim
    Vec b_attach_head, b_attach_mod;
    Mat w_rel_head, w_rel_mod;  // rel_dim x input_dim
    Vec b_rel_head, b_rel_mod;
    Mat u_attach;                // (attach_dim+1) x (attach_dim+1)
    std::vector<Mat> u_rel;      // per relation, (rel_dim+1) x (rel_dim+1)
    Mat w_tag1;                  // tag_hidden x input_dim
    Vec b_tag1;
    Mat w_tag2;  // 3 x tag_hidden
    Vec b_tag2;

    int flat_rel_index() const {
        for (std::size_t r = 0; r < rel_vocab.size(); ++r)
            if (rel_vocab[r] == config.flat_label) return static_cast<int>(r);
        return -1;
    }

    int word_id(const std::string& form) const {
        auto it = vocab.find(form);
        return it == vocab.end() ? 0 : it->second;
    }

    void check_shapes() const {
        const int D = config.input_dim();
        auto expect = [](bool ok, const char* what) {
            if (!ok) throw ConfigError(std::string("model shape mismatch: ") + what);
        };
        expect(embeddings.cols() == config.embed_dim, "embeddings");
        expect(root_vec.size() == D, "root_vec");
        expect(pad_vec.size() == config.embed_dim, "pad_vec");
        expect(w_attach_head.rows() == config.attach_dim && w_attach_head.cols() == D, "w_attach_head");
        expect(w_attach_mod.rows() == config.attach_dim && w_attach_mod.cols() == D, "w_attach_mod");
        expect(b_attach_head.size() == config.attach_dim, "b_attach_head");
        expect(b_attach_mod.size() == config.attach_dim, "b_attach_mod");
        expect(w_rel_head.rows() == config.rel_dim && w_rel_head.cols() == D, "w_rel_head");
        expect(w_rel_mod.rows() == config.rel_dim && w_rel_mod.cols() == D, "w_rel_mod");
        expect(b_rel_head.size() == config.rel_dim, "b_rel_head");
        expect(b_rel_mod.size() == config.rel_dim, "b_rel_mod");
        expect(u_attach.rows() == config.attach_dim + 1 && u_attach.cols() == config.attach_dim + 1,
               "u_attach");
        expect(u_rel.size() == rel_vocab.size(), "u_rel count");
        for (const Mat& u : u_rel)
            expect(u.rows() == config.rel_dim + 1 && u.cols() == config.rel_dim + 1, "u_rel");
        expect(w_tag1.rows() == config.tag_hidden && w_tag1.cols() == D, "w_tag1");
        expect(b_tag1.size() == config.tag_hidden, "b_tag1");
        expect(w_tag2.rows() == 3 && w_tag2.cols() == config.tag_hidden, "w_tag2");
        expect(b_tag2.size() == 3, "b_tag2");
    }
};

namespace detail {

// Glorot-style uniform range; the exact scheme matters less than having one
// deterministic scheme.
inline Mat init_matrix(int rows, int cols, Rng& rng) {
    double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform(-bound, bound);
    return m;
}

inline Vec init_vector(int size, Rng& rng, double bound) {
    Vec v(size);
    for (int i = 0; i < size; ++i) v(i) = rng.uniform(-bound, bound);
    return v;
}

}  // namespace detail

// Vocabulary and relation inventory are read off the corpus; relation labels
// are stored subtype-stripped. The flat label always enters rel_vocab so
// scoring stays well-defined on corpora without flat arcs.
inline ModelParams init_model(const std::vector<Sentence>& corpus, const ModelConfig& config,
                              std::uint64_t seed) {
    ModelParams p;
    p.config = config;
    p.vocab["<unk>"] = 0;
    std::map<std::string, int> rel_seen;
    for (const Sentence& s : corpus) {
        for (const Token& t : s.tokens) {
            if (p.vocab.find(t.form) == p.vocab.end())
                p.vocab.emplace(t.form, static_cast<int>(p.vocab.size()));
            std::string rel(strip_subtype(t.deprel, config.subtype_boundary));
            rel_seen.emplace(rel, 0);
        }
    }
    rel_seen.emplace(config.flat_label, 0);
    for (auto& [rel, _] : rel_seen) p.rel_vocab.push_back(rel);

    Rng rng(seed, "model-init");
    const int V = static_cast<int>(p.vocab.size());
    const int D = config.input_dim();
    p.embeddings = detail::init_matrix(V, config.embed_dim, rng);
    p.root_vec = detail::init_vector(D, rng, 0.5);
    p.pad_vec = detail::init_vector(config.embed_dim, rng, 0.5);
    p.w_attach_head = detail::init_matrix(config.attach_dim, D, rng);
    p.b_attach_head = Vec::Zero(config.attach_dim);
    p.w_attach_mod = detail::init_matrix(config.attach_dim, D, rng);
    p.b_attach_mod = Vec::Zero(config.attach_dim);
    p.w_rel_head = detail::init_matrix(config.rel_dim, D, rng);
    p.b_rel_head = Vec::Zero(config.rel_dim);
    p.w_rel_mod = detail::init_matrix(config.rel_dim, D, rng);
    p.b_rel_mod = Vec::Zero(config.rel_dim);
    p.u_attach = detail::init_matrix(config.attach_dim + 1, config.attach_dim + 1, rng);
    for (std::size_t r = 0; r < p.rel_vocab.size(); ++r)
        p.u_rel.push_back(detail::init_matrix(config.rel_dim + 1, config.rel_dim + 1, rng));
    p.w_tag1 = detail::init_matrix(config.tag_hidden, D, rng);
    p.b_tag1 = Vec::Zero(config.tag_hidden);
    p.w_tag2 = detail::init_matrix(3, config.tag_hidden, rng);
    p.b_tag2 = Vec::Zero(3);
    return p;
}

// ---------------------------------------------------------------------------
// Encoding.
// ---------------------------------------------------------------------------

// x_0 is the learned root vector; x_k concatenates the embeddings of the
// window around token k, padding past the sentence edges. Deterministic.
inline std::vector<Vec> encode(const Sentence& s, const ModelParams& p) {
    const int n = s.size();
    const ModelConfig& c = p.config;
    std::vector<Vec> xs(static_cast<std::size_t>(n) + 1);
    xs[0] = p.root_vec;
    for (int k = 1; k <= n; ++k) {
        Vec x(c.input_dim());
        int offset = 0;
        for (int w = -c.window; w <= c.window; ++w) {
            int pos = k + w;
            if (pos < 1 || pos > n)
                x.segment(offset, c.embed_dim) = p.pad_vec;
            else
                x.segment(offset, c.embed_dim) =
                    p.embeddings.row(p.word_id(s.token(pos).form)).transpose();
            offset += c.embed_dim;
        }
        xs[static_cast<std::size_t>(k)] = std::move(x);
    }
    return xs;
}

namespace detail {

inline Vec relu(const Vec& v) { return v.cwiseMax(0.0); }

// Column-wise log-softmax helper over a raw score vector.
inline void log_softmax_inplace(std::vector<double>& xs) {
    double lse = log_sum_exp(xs);
    for (double& x : xs) x = is_neg_inf(x) ? kNegInf : x - lse;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scoring heads. Each takes the shared representations x_0..x_n.
// ---------------------------------------------------------------------------

inline std::vector<std::vector<double>> attach_scores(const std::vector<Vec>& xs,
                                                      const ModelParams& p) {
    const int n = static_cast<int>(xs.size()) - 1;
    const ModelConfig& c = p.config;
    if (n < 1) throw ContractViolation("attach_scores: need at least one token");
    for (const Vec& x : xs)
        if (x.size() != c.input_dim()) throw ConfigError("attach_scores: representation dim mismatch");
    std::vector<Vec> heads(static_cast<std::size_t>(n) + 1), mods(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        Vec h = detail::relu(p.w_attach_head * xs[static_cast<std::size_t>(i)] + p.b_attach_head);
        Vec m = detail::relu(p.w_attach_mod * xs[static_cast<std::size_t>(i)] + p.b_attach_mod);
        heads[static_cast<std::size_t>(i)] = Vec(c.attach_dim + 1);
        heads[static_cast<std::size_t>(i)] << h, 1.0;
        mods[static_cast<std::size_t>(i)] = Vec(c.attach_dim + 1);
        mods[static_cast<std::size_t>(i)] << m, 1.0;
    }
    std::vector<std::vector<double>> attach(static_cast<std::size_t>(n) + 1,
                                            std::vector<double>(static_cast<std::size_t>(n) + 1, kNegInf));
    std::vector<double> col(static_cast<std::size_t>(n) + 1);
    for (int j = 1; j <= n; ++j) {
        for (int i = 0; i <= n; ++i)
            col[static_cast<std::size_t>(i)] =
                i == j ? kNegInf
                       : heads[static_cast<std::size_t>(i)].dot(p.u_attach * mods[static_cast<std::size_t>(j)]);
        detail::log_softmax_inplace(col);
        for (int i = 0; i <= n; ++i) attach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = col[static_cast<std::size_t>(i)];
    }
    return attach;
}

inline LabelTensor label_scores(const std::vector<Vec>& xs, const ModelParams& p) {
    const int n = static_cast<int>(xs.size()) - 1;
    const ModelConfig& c = p.config;
    const int R = static_cast<int>(p.rel_vocab.size());
    if (R == 0) throw ConfigError("label_scores: empty relation vocabulary");
    std::vector<Vec> heads(static_cast<std::size_t>(n) + 1), mods(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        Vec h = detail::relu(p.w_rel_head * xs[static_cast<std::size_t>(i)] + p.b_rel_head);
        Vec m = detail::relu(p.w_rel_mod * xs[static_cast<std::size_t>(i)] + p.b_rel_mod);
        heads[static_cast<std::size_t>(i)] = Vec(c.rel_dim + 1);
        heads[static_cast<std::size_t>(i)] << h, 1.0;
        mods[static_cast<std::size_t>(i)] = Vec(c.rel_dim + 1);
        mods[static_cast<std::size_t>(i)] << m, 1.0;
    }
    // Precompute per-relation projections of every head vector.
    std::vector<std::vector<Vec>> proj(static_cast<std::size_t>(R));
    for (int r = 0; r < R; ++r) {
        proj[static_cast<std::size_t>(r)].resize(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i)
            proj[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] =
                p.u_rel[static_cast<std::size_t>(r)].transpose() * heads[static_cast<std::size_t>(i)];
    }
    LabelTensor lt(n, R, kNegInf);
    std::vector<double> fiber(static_cast<std::size_t>(R));
    for (int i = 0; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            for (int r = 0; r < R; ++r)
                fiber[static_cast<std::size_t>(r)] =
                    proj[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)].dot(
                        mods[static_cast<std::size_t>(j)]);
            detail::log_softmax_inplace(fiber);
            for (int r = 0; r < R; ++r) lt.at(i, j, r) = fiber[static_cast<std::size_t>(r)];
        }
    return lt;
}

inline std::vector<std::array<double, 3>> tag_scores(const std::vector<Vec>& xs, const ModelParams& p) {
    const int n = static_cast<int>(xs.size()) - 1;
    std::vector<std::array<double, 3>> tag(static_cast<std::size_t>(n) + 1, {kNegInf, kNegInf, kNegInf});
    for (int j = 1; j <= n; ++j) {
        Vec hidden = detail::relu(p.w_tag1 * xs[static_cast<std::size_t>(j)] + p.b_tag1);
        Vec logits = p.w_tag2 * hidden + p.b_tag2;
        std::vector<double> row = {logits(0), logits(1), logits(2)};
        detail::log_softmax_inplace(row);
        tag[static_cast<std::size_t>(j)] = {row[0], row[1], row[2]};
    }
    return tag;
}

// One shared encode call feeds all three heads.
inline ScoreSet scores_for(const Sentence& s, const ModelParams& p,
                           const std::vector<Vec>* external = nullptr) {
    std::vector<Vec> xs = external ? *external : encode(s, p);
    if (external && static_cast<int>(external->size()) != s.size() + 1)
        throw ConfigError("scores_for: external vectors must cover root plus every token");
    ScoreSet sc = ScoreSet::make(s.size());
    sc.sent_id = s.sent_id;
    sc.attach = attach_scores(xs, p);
    sc.tag = tag_scores(xs, p);
    sc.label = label_scores(xs, p);
    sc.rel_vocab = p.rel_vocab;
    sc.flat_label = p.config.flat_label;
    return sc;
}

// ---------------------------------------------------------------------------
// Losses. All are negative log-likelihood sums over tokens, hence >= 0 for
// normalized score sets.
// ---------------------------------------------------------------------------

inline double loss_parse(const ScoreSet& sc, const DepGraph& gold, char boundary = ':') {
    if (gold.n != sc.n) throw ContractViolation("loss_parse: size mismatch");
    double loss = 0.0;
    for (int k = 1; k <= sc.n; ++k) {
        loss -= sc.attach_at(gold.head_of(k), k);
        if (sc.label) {
            std::string rel(strip_subtype(gold.label_of(k), boundary));
            int r = -1;
            for (std::size_t i = 0; i < sc.rel_vocab.size(); ++i)
                if (sc.rel_vocab[i] == rel) {
                    r = static_cast<int>(i);
                    break;
                }
            if (r < 0) throw DataError("loss_parse: gold label '" + rel + "' not in rel_vocab");
            loss -= sc.label->at(gold.head_of(k), k, r);
        }
    }
    return loss;
}

inline double loss_tag(const ScoreSet& sc, const TagSeq& gold) {
    if (static_cast<int>(gold.size()) != sc.n) throw ContractViolation("loss_tag: size mismatch");
    double loss = 0.0;
    for (int k = 1; k <= sc.n; ++k) loss -= sc.tag_at(k, gold[static_cast<std::size_t>(k - 1)]);
    return loss;
}

inline double loss_joint(const ScoreSet& sc, const DepGraph& gold_graph, const TagSeq& gold_tags,
                         double lambda, char boundary = ':') {
    if (lambda < 0.0 || lambda > 1.0) throw ContractViolation("loss_joint: lambda outside [0, 1]");
    return lambda * loss_parse(sc, gold_graph, boundary) + (1.0 - lambda) * loss_tag(sc, gold_tags);
}

// ---------------------------------------------------------------------------
// External vectors: one JSON object per sentence, {"sent_id": ..., "vectors":
// [[float; dim]; n+1]}, row 0 being the root representation.
// ---------------------------------------------------------------------------

inline std::vector<std::pair<std::string, std::vector<Vec>>> read_vectors_jsonl(std::istream& in) {
    std::vector<std::pair<std::string, std::vector<Vec>>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("vectors"))
            throw ParseError(line_no, "vectors-jsonl: expected {\"vectors\": [[...]]}");
        std::vector<Vec> vecs;
        for (const auto& row : j["vectors"]) {
            Vec v(static_cast<Eigen::Index>(row.size()));
            for (Eigen::Index i = 0; i < v.size(); ++i)
                v(i) = row[static_cast<std::size_t>(i)].get<double>();
            vecs.push_back(std::move(v));
        }
        std::string sent_id = j.contains("sent_id") && j["sent_id"].is_string()
                                  ? j["sent_id"].get<std::string>()
                                  : std::string();
        out.emplace_back(std::move(sent_id), std::move(vecs));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization: 8-byte magic header, then a JSON document.
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json mat_to_json(const Mat& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Mat mat_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw DataError("model file: bad matrix");
    Mat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    return m;
}

inline nlohmann::json vec_to_json(const Vec& v) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(v(i));
    return row;
}

inline Vec vec_from_json(const nlohmann::json& j) {
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
    return v;
}

}  // namespace detail

inline void save_model(std::ostream& out, const ModelParams& p) {
    nlohmann::json j;
    j["config"] = {{"embed_dim", p.config.embed_dim},
                   {"window", p.config.window},
                   {"attach_dim", p.config.attach_dim},
                   {"rel_dim", p.config.rel_dim},
                   {"tag_hidden", p.config.tag_hidden},
                   {"flat_label", p.config.flat_label},
                   {"subtype_boundary", std::string(1, p.config.subtype_boundary)}};
    std::vector<std::string> words(p.vocab.size());
    for (const auto& [w, id] : p.vocab) words[static_cast<std::size_t>(id)] = w;
    j["vocab"] = words;
    j["rel_vocab"] = p.rel_vocab;
    j["embeddings"] = detail::mat_to_json(p.embeddings);
    j["root_vec"] = detail::vec_to_json(p.root_vec);
    j["pad_vec"] = detail::vec_to_json(p.pad_vec);
    j["w_attach_head"] = detail::mat_to_json(p.w_attach_head);
    j["b_attach_head"] = detail::vec_to_json(p.b_attach_head);
    j["w_attach_mod"] = detail::mat_to_json(p.w_attach_mod);
    j["b_attach_mod"] = detail::vec_to_json(p.b_attach_mod);
    j["w_rel_head"] = detail::mat_to_json(p.w_rel_head);
    j["b_rel_head"] = detail::vec_to_json(p.b_rel_head);
    j["w_rel_mod"] = detail::mat_to_json(p.w_rel_mod);
    j["b_rel_mod"] = detail::vec_to_json(p.b_rel_mod);
    j["u_attach"] = detail::mat_to_json(p.u_attach);
    nlohmann::json u_rel = nlohmann::json::array();
    for (const Mat& u : p.u_rel) u_rel.push_back(detail::mat_to_json(u));
    j["u_rel"] = std::move(u_rel);
    j["w_tag1"] = detail::mat_to_json(p.w_tag1);
    j["b_tag1"] = detail::vec_to_json(p.b_tag1);
    j["w_tag2"] = detail::mat_to_json(p.w_tag2);
    j["b_tag2"] = detail::vec_to_json(p.b_tag2);
    out.write(kModelMagic, 8);
    out << j.dump();
}

inline ModelParams load_model(std::istream& in) try {
    char magic[8];
    in.read(magic, 8);
    if (in.gcount() != 8 || std::string(magic, 8) != std::string(kModelMagic, 8))
        throw DataError("model file: missing FLATDEC1 magic header");
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError("model file: invalid JSON payload");
    ModelParams p;
    const auto& c = j.at("config");
    p.config.embed_dim = c.at("embed_dim").get<int>();
    p.config.window = c.at("window").get<int>();
    p.config.attach_dim = c.at("attach_dim").get<int>();
    p.config.rel_dim = c.at("rel_dim").get<int>();
    p.config.tag_hidden = c.at("tag_hidden").get<int>();
    p.config.flat_label = c.at("flat_label").get<std::string>();
    std::string boundary = c.at("subtype_boundary").get<std::string>();
    p.config.subtype_boundary = boundary.empty() ? ':' : boundary[0];
    std::vector<std::string> words = j.at("vocab").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < words.size(); ++i) p.vocab[words[i]] = static_cast<int>(i);
    p.rel_vocab = j.at("rel_vocab").get<std::vector<std::string>>();
    p.embeddings = detail::mat_from_json(j.at("embeddings"));
    p.root_vec = detail::vec_from_json(j.at("root_vec"));
    p.pad_vec = detail::vec_from_json(j.at("pad_vec"));
    p.w_attach_head = detail::mat_from_json(j.at("w_attach_head"));
    p.b_attach_head = detail::vec_from_json(j.at("b_attach_head"));
    p.w_attach_mod = detail::mat_from_json(j.at("w_attach_mod"));
    p.b_attach_mod = detail::vec_from_json(j.at("b_attach_mod"));
    p.w_rel_head = detail::mat_from_json(j.at("w_rel_head"));
    p.b_rel_head = detail::vec_from_json(j.at("b_rel_head"));
    p.w_rel_mod = detail::mat_from_json(j.at("w_rel_mod"));
    p.b_rel_mod = detail::vec_from_json(j.at("b_rel_mod"));
    p.u_attach = detail::mat_from_json(j.at("u_attach"));
    for (const auto& u : j.at("u_rel")) p.u_rel.push_back(detail::mat_from_json(u));
    p.w_tag1 = detail::mat_from_json(j.at("w_tag1"));
    p.b_tag1 = detail::vec_from_json(j.at("b_tag1"));
    p.w_tag2 = detail::mat_from_json(j.at("w_tag2"));
    p.b_tag2 = detail::vec_from_json(j.at("b_tag2"));
    p.check_shapes();
    return p;
} catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model file: ") + e.what());
}

}  // namespace flatmwe
