#include <doctest.h>

#include <cmath>
#include <fstream>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/hex.hpp"
#include "core/util.hpp"
#include "support/temp_dir.hpp"

using namespace betscan;

TEST_CASE("format_double round-trips arbitrary bit patterns") {
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.normal(0, 1e6) * std::pow(10.0, static_cast<int>(rng.uniform_index(30)) - 15);
        const auto parsed = parse_double(format_double(v));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == v);
    }
    CHECK(*parse_double(format_double(0.1)) == 0.1);
    CHECK(*parse_double(format_double(1e300)) == 1e300);
}

TEST_CASE("parse helpers reject trailing garbage") {
    CHECK_FALSE(parse_double("1.5x").has_value());
    CHECK_FALSE(parse_int("12 34").has_value());
    CHECK(parse_int(" 42 ").value() == 42);
    CHECK_FALSE(parse_double("").has_value());
}

TEST_CASE("rng bounded draws stay in range and are deterministic") {
    Rng a(7), b(7);
    for (int i = 0; i < 200; ++i) {
        const uint64_t n = 1 + a.uniform_index(50);
        CHECK(a.uniform_index(n) < n);
    }
    Rng c(7);
    (void)b;
    for (int i = 0; i < 50; ++i) {
        Rng d(static_cast<uint64_t>(i));
        auto s1 = d.sample_without_replacement(100, 10);
        Rng e(static_cast<uint64_t>(i));
        auto s2 = e.sample_without_replacement(100, 10);
        CHECK(s1 == s2);
        std::sort(s1.begin(), s1.end());
        CHECK(std::unique(s1.begin(), s1.end()) == s1.end());  // distinct
    }
    (void)c;
}

TEST_CASE("digest is order sensitive") {
    std::vector<std::string> a = {"ADD", "MUL"};
    std::vector<std::string> b = {"MUL", "ADD"};
    CHECK(digest_names(a) != digest_names(b));
    CHECK(digest_names(a) == digest_names(a));
    CHECK(digest_names(a).size() == 16);
}

TEST_CASE("hex decode/encode") {
    auto bytes = decode_hex("0x6001");
    REQUIRE(bytes.has_value());
    CHECK(*bytes == std::vector<uint8_t>{0x60, 0x01});
    CHECK(encode_hex(*bytes) == "0x6001");
    CHECK(decode_hex("0x").value().empty());
    CHECK_FALSE(decode_hex("0x123").has_value());   // odd length
    CHECK_FALSE(decode_hex("0xzz").has_value());    // bad digits
    CHECK(normalize_account("0XAB00000000000000000000000000000000000001").value() ==
          "0xab00000000000000000000000000000000000001");
    CHECK_FALSE(normalize_account("0xab01").has_value());
}

TEST_CASE("csv reader handles quoting and reports line numbers") {
    test::TempDir dir("csv");
    const auto path = dir.file("t.csv");
    std::ofstream(path) << "a,b\n1,\"x,y\"\n\"with \"\"quote\"\"\",2\n\n3,4\n";

    CsvReader reader(path);
    CHECK(reader.header() == std::vector<std::string>{"a", "b"});
    std::vector<std::string> fields;
    REQUIRE(reader.next(fields));
    CHECK(fields == std::vector<std::string>{"1", "x,y"});
    CHECK(reader.line_number() == 2);
    REQUIRE(reader.next(fields));
    CHECK(fields == std::vector<std::string>{"with \"quote\"", "2"});
    REQUIRE(reader.next(fields));
    CHECK(fields == std::vector<std::string>{"3", "4"});
    CHECK(reader.line_number() == 5);
    CHECK_FALSE(reader.next(fields));
}

TEST_CASE("csv writer escapes fields that need it") {
    test::TempDir dir("csvw");
    const auto path = dir.file("w.csv");
    CsvWriter writer(path);
    writer.write_row({"plain", "with,comma", "with\"quote"});
    writer.close();

    CsvReader reader(path);
    CHECK(reader.header() == std::vector<std::string>{"plain", "with,comma", "with\"quote"});
}

TEST_CASE("missing files raise Io errors") {
    CHECK_THROWS_AS(CsvReader("/nonexistent/file.csv"), Error);
    try {
        CsvReader("/nonexistent/file.csv");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
}
