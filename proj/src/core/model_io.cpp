#include <sstream>

#include "core/error.hpp"
#include "core/gbdt.hpp"

namespace betscan {

namespace {

constexpr const char* kMagic = "betscan-model v1";

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

[[noreturn]] void bad_model(const std::string& path, size_t line, const std::string& what) {
    raise(ErrorKind::Parse, path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void BoostedEnsemble::save(const std::string& path) const {
    std::string out;
    out += kMagic;
    out += '\n';
    out += "learning_rate " + format_double(learning_rate_) + "\n";
    out += "base_score " + format_double(base_score_) + "\n";
    out += "schema_digest " + (schema_digest_.empty() ? std::string("-") : schema_digest_) + "\n";
    out += "num_features " + std::to_string(feature_names_.size()) + "\n";
    for (size_t i = 0; i < feature_names_.size(); ++i) {
        out += "feature " + std::to_string(i) + " " + feature_names_[i] + "\n";
    }
    out += "num_trees " + std::to_string(trees_.size()) + "\n";
    for (size_t t = 0; t < trees_.size(); ++t) {
        const auto& nodes = trees_[t].nodes();
        out += "tree " + std::to_string(t) + " " + std::to_string(nodes.size()) + "\n";
        for (size_t i = 0; i < nodes.size(); ++i) {
            const auto& n = nodes[i];
            if (n.is_leaf) {
                out += "node " + std::to_string(i) + " leaf " + format_double(n.weight) + "\n";
            } else {
                out += "node " + std::to_string(i) + " split " + std::to_string(n.feature) + " " +
                       format_double(n.threshold) + " " + (n.default_left ? "L" : "R") + " " +
                       std::to_string(n.left) + " " + std::to_string(n.right) + "\n";
            }
        }
    }
    out += "end\n";
    write_text_file(path, out);
}

BoostedEnsemble BoostedEnsemble::load(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    size_t lineno = 0;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++lineno;
        return true;
    };
    auto expect_tokens = [&](const char* keyword, size_t count) {
        if (!next_line()) bad_model(path, lineno, std::string("unexpected end of file, wanted ") + keyword);
        auto tokens = tokenize(line);
        if (tokens.size() != count || tokens[0] != keyword) {
            bad_model(path, lineno, std::string("expected '") + keyword + "' record");
        }
        return tokens;
    };

    if (!next_line() || line != kMagic) raise(ErrorKind::Parse, path + ": not a model file");

    BoostedEnsemble model;
    {
        auto t = expect_tokens("learning_rate", 2);
        auto v = parse_double(t[1]);
        if (!v) bad_model(path, lineno, "invalid learning_rate");
        model.learning_rate_ = *v;
    }
    {
        auto t = expect_tokens("base_score", 2);
        auto v = parse_double(t[1]);
        if (!v) bad_model(path, lineno, "invalid base_score");
        model.base_score_ = *v;
    }
    {
        auto t = expect_tokens("schema_digest", 2);
        model.schema_digest_ = t[1] == "-" ? "" : t[1];
    }
    size_t num_features = 0;
    {
        auto t = expect_tokens("num_features", 2);
        auto v = parse_int(t[1]);
        if (!v || *v < 0) bad_model(path, lineno, "invalid num_features");
        num_features = static_cast<size_t>(*v);
    }
    model.feature_names_.resize(num_features);
    for (size_t i = 0; i < num_features; ++i) {
        auto t = expect_tokens("feature", 3);
        auto idx = parse_int(t[1]);
        if (!idx || *idx != static_cast<int64_t>(i)) bad_model(path, lineno, "feature records out of order");
        model.feature_names_[i] = t[2];
    }
    size_t num_trees = 0;
    {
        auto t = expect_tokens("num_trees", 2);
        auto v = parse_int(t[1]);
        if (!v || *v < 0) bad_model(path, lineno, "invalid num_trees");
        num_trees = static_cast<size_t>(*v);
    }
    model.trees_.reserve(num_trees);
    for (size_t t = 0; t < num_trees; ++t) {
        auto header = expect_tokens("tree", 3);
        auto tree_idx = parse_int(header[1]);
        auto node_count = parse_int(header[2]);
        if (!tree_idx || *tree_idx != static_cast<int64_t>(t) || !node_count || *node_count < 1) {
            bad_model(path, lineno, "invalid tree header");
        }
        std::vector<TreeNode> nodes(static_cast<size_t>(*node_count));
        for (size_t i = 0; i < nodes.size(); ++i) {
            if (!next_line()) bad_model(path, lineno, "unexpected end of file inside tree");
            auto tokens = tokenize(line);
            if (tokens.size() < 4 || tokens[0] != "node") bad_model(path, lineno, "expected node record");
            auto idx = parse_int(tokens[1]);
            if (!idx || *idx != static_cast<int64_t>(i)) bad_model(path, lineno, "node records out of order");
            TreeNode node;
            if (tokens[2] == "leaf" && tokens.size() == 4) {
                auto w = parse_double(tokens[3]);
                if (!w) bad_model(path, lineno, "invalid leaf weight");
                node.is_leaf = true;
                node.weight = *w;
            } else if (tokens[2] == "split" && tokens.size() == 8) {
                auto feature = parse_int(tokens[3]);
                auto threshold = parse_double(tokens[4]);
                auto left = parse_int(tokens[6]);
                auto right = parse_int(tokens[7]);
                if (!feature || !threshold || !left || !right || (tokens[5] != "L" && tokens[5] != "R")) {
                    bad_model(path, lineno, "invalid split record");
                }
                if (*feature < 0 || (num_features > 0 && *feature >= static_cast<int64_t>(num_features))) {
                    bad_model(path, lineno, "split feature out of range");
                }
                if (*left <= static_cast<int64_t>(i) || *right <= static_cast<int64_t>(i) ||
                    *left >= *node_count || *right >= *node_count) {
                    bad_model(path, lineno, "child index out of range");
                }
                node.is_leaf = false;
                node.feature = static_cast<int>(*feature);
                node.threshold = *threshold;
                node.default_left = tokens[5] == "L";
                node.left = static_cast<int>(*left);
                node.right = static_cast<int>(*right);
            } else {
                bad_model(path, lineno, "expected 'leaf' or 'split' node");
            }
            nodes[i] = node;
        }
        model.trees_.emplace_back(std::move(nodes));
    }
    if (!next_line() || trim(line) != "end") bad_model(path, lineno, "missing 'end' marker");
    return model;
}

}  // namespace betscan
