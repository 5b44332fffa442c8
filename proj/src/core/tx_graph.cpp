#include "core/tx_graph.hpp"

#include <charconv>
#include <unordered_set>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace betscan {

const std::vector<std::string>& GraphFeatureVector::names() {
    static const std::vector<std::string> names = {
        "vertex_number",      "edge_number",     "in_edge_number",     "out_edge_number",
        "vertex_degree",      "vertex_in_degree", "vertex_out_degree", "total_amount",
        "total_in_amount",    "total_out_amount", "avg_amount",        "avg_in_amount",
        "avg_out_amount",     "amount_variance",  "in_amount_variance", "out_amount_variance",
    };
    return names;
}

std::vector<double> GraphFeatureVector::values() const {
    return {vertex_number,   edge_number,      in_edge_number,     out_edge_number,
            vertex_degree,   vertex_in_degree, vertex_out_degree,  total_amount,
            total_in_amount, total_out_amount, avg_amount,         avg_in_amount,
            avg_out_amount,  amount_variance,  in_amount_variance, out_amount_variance};
}

double wei_to_ether(const BigUint& wei) {
    const std::string decimal = wei.str();
    double value = 0.0;
    auto res = std::from_chars(decimal.data(), decimal.data() + decimal.size(), value);
    if (res.ec != std::errc()) raise(ErrorKind::Internal, "wei out of double range: " + decimal);
    return value / 1e18;
}

TransactionGraph build_graph(const std::string& ego, const std::vector<TransactionRecord>& txs) {
    TransactionGraph g;
    g.ego = ego;
    g.vertices.push_back(ego);
    std::unordered_set<std::string> seen{ego};
    for (const auto& tx : txs) {
        const bool is_out = tx.from == ego;
        const bool is_in = tx.to == ego;
        if (!is_out && !is_in) continue;
        // Self-transfers produce a single edge classified as outgoing.
        g.edges.push_back({tx.from, tx.to, tx.value_wei, tx.tx_id, is_out});
        const std::string& counterparty = is_out ? tx.to : tx.from;
        if (seen.insert(counterparty).second) g.vertices.push_back(counterparty);
    }
    return g;
}

namespace {

struct AmountStats {
    double total = 0;
    double mean = 0;
    double variance = 0;  // population variance
    size_t count = 0;
};

AmountStats amount_stats(const std::vector<double>& amounts) {
    AmountStats s;
    s.count = amounts.size();
    if (amounts.empty()) return s;
    for (double a : amounts) s.total += a;
    s.mean = s.total / static_cast<double>(s.count);
    double sq = 0;
    for (double a : amounts) sq += (a - s.mean) * (a - s.mean);
    s.variance = sq / static_cast<double>(s.count);
    return s;
}

}  // namespace

GraphFeatureVector graph_features(const TransactionGraph& graph) {
    GraphFeatureVector f;
    const size_t v = graph.vertices.size();
    f.vertex_number = static_cast<double>(v);
    f.edge_number = static_cast<double>(graph.edges.size());

    // Degree sums with edge multiplicity over every vertex of the graph.
    std::unordered_map<std::string, std::pair<uint64_t, uint64_t>> degree;  // in, out
    for (const auto& vertex : graph.vertices) degree.emplace(vertex, std::make_pair(0, 0));

    std::vector<double> all, in, out;
    all.reserve(graph.edges.size());
    for (const auto& e : graph.edges) {
        const double ether = wei_to_ether(e.amount_wei);
        all.push_back(ether);
        if (e.outgoing) {
            f.out_edge_number += 1;
            out.push_back(ether);
        } else {
            f.in_edge_number += 1;
            in.push_back(ether);
        }
        degree[e.to].first += 1;
        degree[e.from].second += 1;
    }

    uint64_t in_sum = 0, out_sum = 0;
    for (const auto& [vertex, d] : degree) {
        in_sum += d.first;
        out_sum += d.second;
    }
    if (v > 0) {
        f.vertex_in_degree = static_cast<double>(in_sum) / static_cast<double>(v);
        f.vertex_out_degree = static_cast<double>(out_sum) / static_cast<double>(v);
        f.vertex_degree = static_cast<double>(in_sum + out_sum) / static_cast<double>(v);
    }

    const auto s_all = amount_stats(all);
    const auto s_in = amount_stats(in);
    const auto s_out = amount_stats(out);
    f.total_amount = s_all.total;
    f.total_in_amount = s_in.total;
    f.total_out_amount = s_out.total;
    f.avg_amount = s_all.count ? s_all.mean : 0.0;
    f.avg_in_amount = s_in.count ? s_in.mean : 0.0;
    f.avg_out_amount = s_out.count ? s_out.mean : 0.0;
    f.amount_variance = s_all.variance;
    f.in_amount_variance = s_in.variance;
    f.out_amount_variance = s_out.variance;
    return f;
}

TransactionIndex::TransactionIndex(const std::vector<TransactionRecord>& txs) : txs_(&txs) {
    for (uint32_t i = 0; i < txs.size(); ++i) {
        by_account_[txs[i].from].push_back(i);
        if (txs[i].to != txs[i].from) by_account_[txs[i].to].push_back(i);
    }
}

TransactionGraph TransactionIndex::graph_for(const std::string& ego) const {
    TransactionGraph g;
    g.ego = ego;
    g.vertices.push_back(ego);
    std::unordered_set<std::string> seen{ego};
    auto it = by_account_.find(ego);
    if (it == by_account_.end()) return g;
    for (uint32_t idx : it->second) {
        const auto& tx = (*txs_)[idx];
        const bool is_out = tx.from == ego;
        g.edges.push_back({tx.from, tx.to, tx.value_wei, tx.tx_id, is_out});
        const std::string& counterparty = is_out ? tx.to : tx.from;
        if (seen.insert(counterparty).second) g.vertices.push_back(counterparty);
    }
    return g;
}

LabeledDataset featurize_addresses(const std::vector<AddressRecord>& addresses,
                                   const std::vector<TransactionRecord>& txs) {
    TransactionIndex index(txs);
    LabeledDataset ds(GraphFeatureVector::names());
    for (const auto& addr : addresses) {
        const auto graph = index.graph_for(addr.account);
        ds.add_row(addr.account, graph_features(graph).values(), addr.label);
    }
    return ds;
}

void write_edge_list(const TransactionGraph& graph, const std::string& path) {
    CsvWriter out(path);
    out.write_row({"tx_id", "from", "to", "value_wei"});
    for (const auto& e : graph.edges) {
        out.write_row({e.tx_id, e.from, e.to, e.amount_wei.str()});
    }
    out.close();
}

TransactionGraph read_edge_list(const std::string& ego, const std::string& path) {
    auto txs = load_transactions_strict(path);
    return build_graph(ego, txs);
}

}  // namespace betscan
