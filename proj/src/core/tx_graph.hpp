#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "core/dataset.hpp"

namespace betscan {

// Per-address ego multigraph: the address plus every counterparty it
// transacted with; each transaction is one directed weighted edge.
struct GraphEdge {
    std::string from;
    std::string to;
    BigUint amount_wei;
    std::string tx_id;
    bool outgoing = false;  // relative to the ego (self-transfers count as out)
};

struct TransactionGraph {
    std::string ego;
    std::vector<std::string> vertices;  // ego first, then counterparties in first-seen order
    std::vector<GraphEdge> edges;
};

struct GraphFeatureVector {
    double vertex_number = 0;
    double edge_number = 0;
    double in_edge_number = 0;
    double out_edge_number = 0;
    double vertex_degree = 0;
    double vertex_in_degree = 0;
    double vertex_out_degree = 0;
    double total_amount = 0;
    double total_in_amount = 0;
    double total_out_amount = 0;
    double avg_amount = 0;
    double avg_in_amount = 0;
    double avg_out_amount = 0;
    double amount_variance = 0;
    double in_amount_variance = 0;
    double out_amount_variance = 0;

    static const std::vector<std::string>& names();
    std::vector<double> values() const;
};

// Wei to ether (1e18 wei), correctly rounded through the decimal string.
double wei_to_ether(const BigUint& wei);

// Edges where the ego is payer or recipient; a zero-transaction address
// yields the one-vertex empty graph.
TransactionGraph build_graph(const std::string& ego, const std::vector<TransactionRecord>& txs);

// The 16 metrics. Degree metrics average over all vertices (ego included)
// with edge multiplicity; amount metrics are computed in ether; variances
// are population variances; averages over zero edges are 0.
GraphFeatureVector graph_features(const TransactionGraph& graph);

// account -> indices into the transaction list; built once, read many.
class TransactionIndex {
public:
    explicit TransactionIndex(const std::vector<TransactionRecord>& txs);

    // Graph for one ego using only its own transactions.
    TransactionGraph graph_for(const std::string& ego) const;

private:
    const std::vector<TransactionRecord>* txs_;
    std::unordered_map<std::string, std::vector<uint32_t>> by_account_;
};

// Graph features for each listed account; feature table rows keep the
// account order of `addresses`.
LabeledDataset featurize_addresses(const std::vector<AddressRecord>& addresses,
                                   const std::vector<TransactionRecord>& txs);

// Edge-list persistence: `<dir>/<account>.edges.csv` with the transactions
// header. Reading rebuilds the identical graph.
void write_edge_list(const TransactionGraph& graph, const std::string& path);
TransactionGraph read_edge_list(const std::string& ego, const std::string& path);

}  // namespace betscan
