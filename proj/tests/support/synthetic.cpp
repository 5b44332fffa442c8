#include "support/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "core/hex.hpp"
#include "core/util.hpp"

namespace betscan::test {

namespace {

std::string make_account(Rng& rng) {
    char buf[44];
    std::snprintf(buf, sizeof(buf), "0x%016llx%016llx%08llx",
                  static_cast<unsigned long long>(rng.next_u64()),
                  static_cast<unsigned long long>(rng.next_u64()),
                  static_cast<unsigned long long>(rng.next_u64() & 0xffffffffULL));
    return buf;
}

// Quantized to 1e-6 ether so wei values are clean integers.
BigUint ether_to_wei(double eth) {
    const auto micro = static_cast<long long>(std::llround(std::max(eth, 0.0) * 1e6));
    return BigUint(micro) * BigUint("1000000000000");
}

struct WeightedOp {
    uint8_t op;
    double w;
};

// Rough opcode mix of compiled contract bodies.
const std::vector<WeightedOp>& base_profile() {
    static const std::vector<WeightedOp> p = {
        {0x60, 0.170},  // PUSH1
        {0x61, 0.060},  // PUSH2
        {0x63, 0.020},  // PUSH4
        {0x73, 0.008},  // PUSH20
        {0x7f, 0.008},  // PUSH32
        {0x80, 0.055},  // DUP1
        {0x81, 0.045},  // DUP2
        {0x82, 0.028},  // DUP3
        {0x83, 0.015},  // DUP4
        {0x90, 0.045},  // SWAP1
        {0x91, 0.028},  // SWAP2
        {0x92, 0.012},  // SWAP3
        {0x5b, 0.042},  // JUMPDEST
        {0x56, 0.028},  // JUMP
        {0x57, 0.030},  // JUMPI
        {0x52, 0.030},  // MSTORE
        {0x51, 0.020},  // MLOAD
        {0x54, 0.026},  // SLOAD
        {0x55, 0.018},  // SSTORE
        {0x33, 0.014},  // CALLER
        {0x34, 0.014},  // CALLVALUE
        {0x15, 0.030},  // ISZERO
        {0x14, 0.020},  // EQ
        {0x16, 0.018},  // AND
        {0x01, 0.028},  // ADD
        {0x03, 0.014},  // SUB
        {0x02, 0.009},  // MUL
        {0x04, 0.008},  // DIV
        {0x50, 0.038},  // POP
        {0xf3, 0.005},  // RETURN
        {0xfd, 0.006},  // REVERT
        {0x00, 0.003},  // STOP
        {0x35, 0.014},  // CALLDATALOAD
        {0x36, 0.010},  // CALLDATASIZE
        {0x10, 0.009},  // LT
        {0x11, 0.009},  // GT
        {0x19, 0.005},  // NOT
        {0x17, 0.008},  // OR
        {0x20, 0.010},  // SHA3
        {0xa1, 0.004},  // LOG1
        {0xa2, 0.004},  // LOG2
        {0xf1, 0.005},  // CALL
        {0x3b, 0.003},  // EXTCODESIZE
        {0x5a, 0.005},  // GAS
    };
    return p;
}

// Randomness-and-funds idioms that gambling bodies lean on.
std::vector<WeightedOp> gambling_extra(double strength) {
    return {
        {0x37, 0.034 * strength},  // CALLDATACOPY
        {0x0a, 0.040 * strength},  // EXP
        {0x31, 0.034 * strength},  // BALANCE
        {0x42, 0.020 * strength},  // TIMESTAMP
        {0x40, 0.014 * strength},  // BLOCKHASH
        {0x43, 0.010 * strength},  // NUMBER
        {0x06, 0.016 * strength},  // MOD
        {0x08, 0.006 * strength},  // ADDMOD
        {0x34, 0.010 * strength},  // CALLVALUE
        {0xf1, 0.010 * strength},  // CALL
    };
}

// Token-ish flavor for ordinary contracts.
std::vector<WeightedOp> token_extra(double strength) {
    return {
        {0xa3, 0.012 * strength},  // LOG3
        {0x33, 0.012 * strength},  // CALLER
        {0x55, 0.010 * strength},  // SSTORE
        {0x30, 0.005 * strength},  // ADDRESS
        {0x54, 0.008 * strength},  // SLOAD
    };
}

uint8_t draw_op(Rng& rng, const std::vector<WeightedOp>& profile, double total_weight) {
    double x = rng.uniform01() * total_weight;
    for (const auto& [op, w] : profile) {
        x -= w;
        if (x <= 0) return op;
    }
    return profile.back().op;
}

void emit_op(std::vector<uint8_t>& code, uint8_t op, Rng& rng) {
    code.push_back(op);
    if (op >= 0x60 && op <= 0x7f) {
        const size_t n = op - 0x60 + 1;
        for (size_t i = 0; i < n; ++i) code.push_back(static_cast<uint8_t>(rng.uniform_index(256)));
    }
}

std::vector<uint8_t> build_bytecode(Rng& rng, double gambling_strength, double token_strength,
                                    size_t body_ops) {
    std::vector<WeightedOp> profile = base_profile();
    // Each signal opcode joins the profile independently, so the class
    // signal is spread over several partially-correlated features.
    for (const auto& wo : gambling_extra(gambling_strength)) {
        if (rng.uniform01() < 0.85) profile.push_back(wo);
    }
    for (const auto& wo : token_extra(token_strength)) profile.push_back(wo);
    double total = 0;
    for (const auto& [op, w] : profile) total += w;

    std::vector<uint8_t> code;
    code.reserve(body_ops * 2 + 64);

    // solc-style prologue: PUSH1 0x80 PUSH1 0x40 MSTORE.
    const uint8_t prologue[] = {0x60, 0x80, 0x60, 0x40, 0x52};
    code.insert(code.end(), std::begin(prologue), std::end(prologue));
    // Dispatcher: CALLDATASIZE ISZERO PUSH2 dest JUMPI and a few
    // selector comparisons DUP1 PUSH4 sel EQ PUSH2 dst JUMPI.
    emit_op(code, 0x36, rng);
    emit_op(code, 0x15, rng);
    emit_op(code, 0x61, rng);
    emit_op(code, 0x57, rng);
    const size_t selectors = 2 + rng.uniform_index(6);
    for (size_t s = 0; s < selectors; ++s) {
        emit_op(code, 0x80, rng);
        emit_op(code, 0x63, rng);
        emit_op(code, 0x14, rng);
        emit_op(code, 0x61, rng);
        emit_op(code, 0x57, rng);
    }

    for (size_t i = 0; i < body_ops; ++i) {
        emit_op(code, draw_op(rng, profile, total), rng);
    }
    code.push_back(0x00);

    // CBOR-ish metadata trailer; decodes to garbage instructions, as the
    // trailer of a real deployment would.
    const uint8_t trailer_head[] = {0xa2, 0x64, 0x69, 0x70, 0x66, 0x73, 0x58, 0x22};
    code.insert(code.end(), std::begin(trailer_head), std::end(trailer_head));
    for (int i = 0; i < 34; ++i) code.push_back(static_cast<uint8_t>(rng.uniform_index(256)));
    code.push_back(0x00);
    code.push_back(0x33);
    return code;
}

size_t body_length(Rng& rng) {
    const double x = std::exp(rng.normal(6.3, 0.55));  // median ~545 ops
    return static_cast<size_t>(std::clamp(x, 120.0, 2600.0));
}

}  // namespace

std::vector<uint8_t> synthetic_bytecode(uint64_t seed, bool gambling_profile, size_t body_ops) {
    Rng rng(seed);
    return build_bytecode(rng, gambling_profile ? 1.0 : 0.0, gambling_profile ? 0.0 : 1.0, body_ops);
}

CorpusSpec CorpusSpec::paper_scale() {
    CorpusSpec spec;
    spec.gambling_contracts = 260;
    spec.normal_contracts = 1040;
    spec.unlabeled_contracts = 2585;
    spec.gambling_addresses = 10423;
    spec.normal_addresses = 51004;
    spec.unlabeled_addresses = 28919;
    spec.seed = 2024;
    return spec;
}

CorpusSpec CorpusSpec::small() {
    CorpusSpec spec;
    spec.gambling_contracts = 30;
    spec.normal_contracts = 120;
    spec.unlabeled_contracts = 40;
    spec.gambling_addresses = 260;
    spec.normal_addresses = 1100;
    spec.unlabeled_addresses = 180;
    spec.seed = 77;
    return spec;
}

Corpus generate_corpus(const CorpusSpec& spec) {
    Rng rng(spec.seed);
    Corpus corpus;
    uint64_t tx_counter = 0;

    auto add_tx = [&](const std::string& from, const std::string& to, double eth) {
        corpus.transactions.push_back({"t" + std::to_string(++tx_counter), from, to, ether_to_wei(eth)});
    };

    // --- contracts ---------------------------------------------------------
    std::vector<std::string> gambling_contracts, hard_negative_contracts, plain_contracts;
    const double hard_negative_rate = spec.hard_negative_rate;

    for (size_t i = 0; i < spec.gambling_contracts; ++i) {
        const std::string account = make_account(rng);
        // A slice of weak-signal positives keeps recall below 1.
        const double s = rng.uniform01() < 0.15 ? rng.uniform(0.12, 0.38) : rng.uniform(0.55, 1.15);
        const auto code = build_bytecode(rng, s, rng.uniform(0.0, 0.25), body_length(rng));
        corpus.contracts.push_back({account, encode_hex(code), 1});
        gambling_contracts.push_back(account);
    }
    for (size_t i = 0; i < spec.normal_contracts; ++i) {
        const std::string account = make_account(rng);
        const bool hard = rng.uniform01() < hard_negative_rate;
        const double gambling_strength = hard ? rng.uniform(0.5, 0.95) : rng.uniform(0.0, 0.08);
        const auto code = build_bytecode(rng, gambling_strength, rng.uniform(0.5, 1.1), body_length(rng));
        corpus.contracts.push_back({account, encode_hex(code), 0});
        (hard ? hard_negative_contracts : plain_contracts).push_back(account);
    }
    for (size_t i = 0; i < spec.unlabeled_contracts; ++i) {
        const std::string account = make_account(rng);
        const bool gambling_like = rng.uniform01() < 0.2;
        const double s = gambling_like ? rng.uniform(0.4, 1.0) : rng.uniform(0.0, 0.1);
        const auto code = build_bytecode(rng, s, rng.uniform(0.3, 1.0), body_length(rng));
        corpus.contracts.push_back({account, encode_hex(code), -1});
    }
    if (plain_contracts.empty()) plain_contracts.push_back(make_account(rng));

    // --- addresses ----------------------------------------------------------
    auto pick = [&](const std::vector<std::string>& pool) -> const std::string& {
        return pool[rng.uniform_index(pool.size())];
    };

    auto gambler_activity = [&](const std::string& account, bool weak_allowed) {
        const double kind = rng.uniform01();
        size_t bets;
        double jitter;
        if (weak_allowed && kind < 0.15) {
            bets = 3 + rng.uniform_index(3);  // casual gambler, little evidence
            jitter = 0.22;
        } else if (kind < 0.40) {
            bets = 6 + rng.uniform_index(7);
            jitter = 0.10;
        } else {
            bets = 12 + rng.uniform_index(29);
            jitter = 0.06;
        }
        const size_t n_contracts = 1 + rng.uniform_index(std::min<size_t>(3, gambling_contracts.size()));
        std::vector<std::string> chosen;
        for (size_t c = 0; c < n_contracts; ++c) chosen.push_back(pick(gambling_contracts));
        const double base_bet = std::clamp(std::exp(rng.normal(-1.2, 0.6)), 0.004, 5.0);
        for (size_t b = 0; b < bets; ++b) {
            const auto& contract = chosen[rng.uniform_index(chosen.size())];
            add_tx(account, contract, base_bet * (1.0 + rng.normal(0.0, jitter)));
            if (rng.uniform01() < 0.25) {
                add_tx(contract, account, base_bet * rng.uniform(0.5, 4.0));  // winnings
            }
        }
        const size_t noise = rng.uniform_index(3);
        for (size_t k = 0; k < noise; ++k) {
            add_tx(account, make_account(rng), std::exp(rng.normal(0.0, 1.0)));
        }
    };

    auto normal_activity = [&](const std::string& account) {
        const double kind = rng.uniform01();
        if (kind < 0.05) {
            // Repeated-payment habit (standing order): the bait that keeps
            // address precision below 1.
            const std::string payee = rng.uniform01() < 0.5 ? pick(plain_contracts) : make_account(rng);
            const size_t n = 8 + rng.uniform_index(18);
            const double amount = std::clamp(std::exp(rng.normal(-0.7, 0.5)), 0.01, 3.0);
            for (size_t k = 0; k < n; ++k) add_tx(account, payee, amount * (1.0 + rng.normal(0.0, 0.05)));
            return;
        }
        if (kind < 0.13) return;  // dormant address, no transactions
        size_t n;
        if (kind < 0.55) {
            n = 2 + rng.uniform_index(4);
        } else {
            n = 5 + rng.uniform_index(26);
        }
        for (size_t k = 0; k < n; ++k) {
            const double roll = rng.uniform01();
            const double amount = std::exp(rng.normal(0.2, 1.3));
            if (roll < 0.18) {
                add_tx(account, pick(plain_contracts), amount);
            } else if (roll < 0.60) {
                add_tx(account, make_account(rng), amount);
            } else {
                add_tx(make_account(rng), account, amount);
            }
        }
    };

    std::vector<std::string> normal_addresses;
    for (size_t i = 0; i < spec.gambling_addresses; ++i) {
        const std::string account = make_account(rng);
        corpus.addresses.push_back({account, 1});
        gambler_activity(account, true);
    }
    for (size_t i = 0; i < spec.normal_addresses; ++i) {
        const std::string account = make_account(rng);
        corpus.addresses.push_back({account, 0});
        normal_addresses.push_back(account);
        normal_activity(account);
    }
    for (size_t i = 0; i < spec.unlabeled_addresses; ++i) {
        const std::string account = make_account(rng);
        corpus.addresses.push_back({account, -1});
        if (rng.uniform01() < 0.3) {
            gambler_activity(account, false);
        } else {
            normal_activity(account);
        }
    }

    // Hard-negative contracts get ordinary users paying varied amounts, so
    // their associated addresses read as non-gambling.
    for (const auto& contract : hard_negative_contracts) {
        const size_t users = std::min<size_t>(normal_addresses.size(), 20 + rng.uniform_index(41));
        for (size_t u = 0; u < users; ++u) {
            const auto& user = normal_addresses[rng.uniform_index(normal_addresses.size())];
            const size_t n = 2 + rng.uniform_index(5);
            for (size_t k = 0; k < n; ++k) {
                add_tx(user, contract, std::exp(rng.normal(0.0, 1.2)));
            }
        }
    }

    return corpus;
}

void Corpus::write(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    const auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
    write_contracts(contracts, path("contracts.csv"));
    write_addresses(addresses, path("addresses.csv"));
    write_transactions(transactions, path("transactions.csv"));
}

LabeledDataset synthetic_classification_set(size_t rows, size_t features, double positive_rate,
                                            double class_separation, uint64_t seed) {
    Rng rng(seed);
    std::vector<std::string> names;
    for (size_t f = 0; f < features; ++f) names.push_back("f" + std::to_string(f));
    LabeledDataset ds(names);
    const size_t informative = std::min<size_t>(3, features);
    for (size_t i = 0; i < rows; ++i) {
        const int label = rng.uniform01() < positive_rate ? 1 : 0;
        std::vector<double> row(features);
        for (size_t f = 0; f < features; ++f) {
            double mean = 0.0;
            if (label == 1 && f < informative) {
                mean = class_separation * (1.0 - 0.25 * static_cast<double>(f));
            }
            row[f] = rng.normal(mean, 1.0);
        }
        ds.add_row("r" + std::to_string(i), std::move(row), label);
    }
    return ds;
}

}  // namespace betscan::test
