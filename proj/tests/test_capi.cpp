// Exercises the public C surface through the shared library and the
// installed header alone (no core headers).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "betscan/betscan.h"

namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        static int counter = 0;
        dir = fs::temp_directory_path() / ("betscan_capi_" + std::to_string(counter++));
        fs::create_directories(dir);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

std::string account(int i) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "0x%040x", i);
    return buf;
}

void write_small_feature_table(const std::string& path) {
    std::ofstream out(path);
    out << "account,label,f0,f1\n";
    for (int i = 0; i < 60; ++i) {
        const int label = i % 3 == 0 ? 1 : 0;
        const double f0 = label == 1 ? 3.0 + 0.05 * i : 0.5 + 0.02 * i;
        const double f1 = 0.1 * i;
        out << account(i + 1) << ',' << label << ',' << f0 << ',' << f1 << "\n";
    }
}

}  // namespace

TEST_CASE("version and error-state basics") {
    CHECK(std::string(betscan_version()) == "1.0.0");
    CHECK(betscan_last_error() != nullptr);
}

TEST_CASE("disassemble hex through the C API") {
    char* listing = nullptr;
    REQUIRE(betscan_disassemble_hex("0x6001600201", nullptr, &listing) == BETSCAN_OK);
    CHECK(std::string(listing) == "0 PUSH1 0x01\n2 PUSH1 0x02\n4 ADD\n");
    betscan_string_free(listing);

    CHECK(betscan_disassemble_hex("0xzz", nullptr, &listing) == BETSCAN_ERR_PARSE);
    CHECK(std::string(betscan_last_error()).find("hex") != std::string::npos);
    CHECK(betscan_disassemble_hex(nullptr, nullptr, &listing) == BETSCAN_ERR_CONFIG);
}

TEST_CASE("status codes map error categories") {
    Scratch scratch;
    CHECK(betscan_featurize_contracts("/nonexistent.csv", nullptr, scratch.file("out.csv").c_str()) ==
          BETSCAN_ERR_IO);

    const auto bad = scratch.file("bad.csv");
    std::ofstream(bad) << "wrong,header\n";
    CHECK(betscan_featurize_contracts(bad.c_str(), nullptr, scratch.file("out.csv").c_str()) ==
          BETSCAN_ERR_PARSE);
}

TEST_CASE("train, predict, evaluate, importance through files") {
    Scratch scratch;
    const auto features = scratch.file("toy.features.csv");
    write_small_feature_table(features);

    const auto config = scratch.file("train.conf");
    std::ofstream(config) << "rounds = 25\nmin_samples_leaf = 2\nmax_leaves = 8\nseed = 5\n"
                          << "use_goss = off\nmemory = on\nmax_outer_iterations = 3\n";

    const auto model = scratch.file("model.txt");
    const auto memory = scratch.file("memory.csv");
    const auto history = scratch.file("history.csv");
    REQUIRE(betscan_train(features.c_str(), nullptr, config.c_str(), model.c_str(), memory.c_str(),
                          history.c_str()) == BETSCAN_OK);
    CHECK(fs::exists(model));
    CHECK(fs::exists(memory));
    CHECK(fs::exists(history));

    // Opaque handle: open, inspect, predict one row.
    betscan_model* handle = nullptr;
    REQUIRE(betscan_model_open(model.c_str(), &handle) == BETSCAN_OK);
    CHECK(betscan_model_num_trees(handle) > 0);
    CHECK(betscan_model_num_features(handle) == 2);
    double proba = -1;
    const double strong_positive[2] = {4.0, 0.5};
    REQUIRE(betscan_model_predict(handle, strong_positive, 2, &proba) == BETSCAN_OK);
    CHECK(proba > 0.5);
    CHECK(betscan_model_predict(handle, strong_positive, 1, &proba) == BETSCAN_ERR_SCHEMA);
    betscan_model_close(handle);
    CHECK(betscan_model_open(scratch.file("missing.txt").c_str(), &handle) == BETSCAN_ERR_IO);

    const auto preds = scratch.file("preds.csv");
    REQUIRE(betscan_predict_file(model.c_str(), features.c_str(), preds.c_str(), 0.5) == BETSCAN_OK);

    const auto labels = scratch.file("labels.csv");
    {
        std::ofstream out(labels);
        out << "account,label\n";
        for (int i = 0; i < 60; ++i) out << account(i + 1) << ',' << (i % 3 == 0 ? 1 : 0) << "\n";
    }
    betscan_metrics m{};
    REQUIRE(betscan_evaluate(preds.c_str(), labels.c_str(), &m) == BETSCAN_OK);
    CHECK(m.tp + m.fp + m.tn + m.fn == 60);
    CHECK(m.accuracy > 0.9);  // trivially separable table
    CHECK(m.f1 > 0.8);

    const auto importance = scratch.file("imp.csv");
    REQUIRE(betscan_importance(model.c_str(), importance.c_str(), 0) == BETSCAN_OK);
    std::ifstream imp(importance);
    std::string header, first;
    std::getline(imp, header);
    std::getline(imp, first);
    CHECK(header == "feature,splits");
    CHECK(first.substr(0, 3) == "f0,");  // the informative feature splits most
}

TEST_CASE("graph building and address featurization through the C API") {
    Scratch scratch;
    const auto txs = scratch.file("transactions.csv");
    std::ofstream(txs) << "tx_id,from,to,value_wei\n"
                       << "t1," << account(1) << "," << account(2) << ",1000000000000000000\n"
                       << "t2," << account(2) << "," << account(1) << ",2000000000000000000\n"
                       << "t3," << account(1) << "," << account(3) << ",500000000000000000\n";
    const auto addrs = scratch.file("addresses.csv");
    std::ofstream(addrs) << "account,label\n" << account(1) << ",1\n" << account(2) << ",0\n";

    const auto graphs = scratch.file("graphs");
    REQUIRE(betscan_build_graphs(txs.c_str(), addrs.c_str(), graphs.c_str()) == BETSCAN_OK);
    CHECK(fs::exists(fs::path(graphs) / (account(1) + ".edges.csv")));

    const auto from_graphs = scratch.file("a1.features.csv");
    REQUIRE(betscan_featurize_addresses_from_graphs(graphs.c_str(), addrs.c_str(),
                                                    from_graphs.c_str()) == BETSCAN_OK);
    const auto direct = scratch.file("a2.features.csv");
    REQUIRE(betscan_featurize_addresses(txs.c_str(), addrs.c_str(), direct.c_str()) == BETSCAN_OK);

    // Same features through either route.
    std::ifstream f1(from_graphs), f2(direct);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
}

TEST_CASE("correction through the C API") {
    Scratch scratch;
    const auto cp = scratch.file("contract_preds.csv");
    std::ofstream(cp) << "account,proba,predicted\n0xc1,0.9,1\n0xc2,0.8,1\n0xc3,0.2,0\n";
    const auto ap = scratch.file("address_preds.csv");
    {
        std::ofstream out(ap);
        out << "account,proba,predicted\n";
        for (int i = 0; i < 10; ++i) out << "0xa" << i << ",0.5," << (i < 7 ? 1 : 0) << "\n";
        for (int i = 0; i < 10; ++i) out << "0xb" << i << ",0.5," << (i < 9 ? 1 : 0) << "\n";
    }
    const auto txs = scratch.file("transactions.csv");
    {
        std::ofstream out(txs);
        out << "tx_id,from,to,value_wei\n";
        int t = 0;
        for (int i = 0; i < 10; ++i) out << "t" << ++t << ",0xa" << i << ",0xc1,1\n";
        for (int i = 0; i < 10; ++i) out << "t" << ++t << ",0xb" << i << ",0xc2,1\n";
    }
    const auto report = scratch.file("correction.csv");
    const auto corrected = scratch.file("corrected.csv");
    REQUIRE(betscan_correct(cp.c_str(), ap.c_str(), txs.c_str(), 0.8, report.c_str(),
                            corrected.c_str()) == BETSCAN_OK);
    std::ifstream in(corrected);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line == "0xc1,0");  // 0.7 < 0.8: flipped
    std::getline(in, line);
    CHECK(line == "0xc2,1");  // 0.9 >= 0.8: kept
    std::getline(in, line);
    CHECK(line == "0xc3,0");
}
