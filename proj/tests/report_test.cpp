#include "memwall/report.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

namespace memwall {
namespace {

Report sample_report() {
    Report r;
    r.command = "analyze";
    r.inputs_digest = "0011223344556677";
    r.columns = {"seq_len", "total_flops", "arithmetic_intensity"};
    r.rows.push_back({std::uint64_t{128}, std::uint64_t{22'347'251'712u}, 192.0});
    r.rows.push_back({std::uint64_t{256}, std::uint64_t{1}, 1.9948051948051948});
    return r;
}

TEST(Report, CsvLayout) {
    const auto csv = to_csv(sample_report());
    EXPECT_EQ(csv,
              "seq_len,total_flops,arithmetic_intensity\n"
              "128,22347251712,192\n"
              "256,1,1.9948051948051948\n");
}

TEST(Report, GnuplotHeaderNamesColumns) {
    const auto csv = to_csv(sample_report(), true);
    EXPECT_EQ(csv.rfind("# command: analyze\n", 0), 0u);
    EXPECT_NE(csv.find("# columns: seq_len total_flops arithmetic_intensity\n"),
              std::string::npos);
}

TEST(Report, JsonRoundTripsThroughParser) {
    const auto text = to_json(sample_report());
    const auto doc = nlohmann::json::parse(text);
    EXPECT_EQ(doc["command"], "analyze");
    EXPECT_EQ(doc["inputs_digest"], "0011223344556677");
    EXPECT_EQ(doc["rows"].size(), 2u);
    EXPECT_EQ(doc["rows"][0][1], 22'347'251'712u);
}

TEST(Report, FormattingIsDeterministic) {
    const auto a = to_csv(sample_report());
    const auto b = to_csv(sample_report());
    EXPECT_EQ(a, b);
    // shortest round-trip double formatting
    EXPECT_EQ(format_double(0.25), "0.25");
    EXPECT_EQ(format_double(1e300), "1e+300");
}

TEST(Digest, StableAndContentSensitive) {
    Digest a, b, c;
    a.feed("analyze:").feed("gpt2");
    b.feed("analyze:").feed("gpt2");
    c.feed("analyze:").feed("gpt3");
    EXPECT_EQ(a.hex(), b.hex());
    EXPECT_NE(a.hex(), c.hex());
    EXPECT_EQ(a.hex().size(), 16u);
}

}  // namespace
}  // namespace memwall
