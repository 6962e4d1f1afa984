#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "memwall/cost_model.hpp"
#include "memwall/model_spec.hpp"
#include "memwall/report.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const std::string command =
        std::string(MEMWALL_CLI_PATH) + " " + args + " 2>/dev/null";
    RunResult result;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        ADD_FAILURE() << "popen failed for: " << command;
        return result;
    }
    std::array<char, 4096> buf;
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        result.stdout_text.append(buf.data(), n);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

class ScratchDir {
  public:
    ScratchDir() {
        dir_ = fs::temp_directory_path() /
               ("memwall_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    ~ScratchDir() { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        std::ofstream out(path);
        out << content;
        return path.string();
    }

  private:
    fs::path dir_;
};

TEST(CliAnalyze, DelegatesToDecoderGenerate) {
    const auto result = run_cli("analyze gpt2 --mode decoder --seq 128");
    ASSERT_EQ(result.exit_code, 0);
    const auto lines = lines_of(result.stdout_text);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0], "seq_len,total_flops,total_mops,arithmetic_intensity");

    memwall::Workload wl;
    wl.seq_len = 128;
    const auto cost =
        memwall::decoder_generate_cost(memwall::preset("gpt2"), wl);
    const auto fields = fields_of(lines[1]);
    ASSERT_EQ(fields.size(), 4u);
    EXPECT_EQ(fields[0], "128");
    EXPECT_EQ(fields[1], std::to_string(cost.total_flops));
    EXPECT_EQ(fields[2], std::to_string(cost.total_mops));
    EXPECT_EQ(fields[3], memwall::format_double(cost.arithmetic_intensity));
}

TEST(CliAnalyze, SweepEmitsRowsInDeclaredOrder) {
    const auto result =
        run_cli("analyze bert-base --seq 32,64,128,256,512");
    ASSERT_EQ(result.exit_code, 0);
    const auto lines = lines_of(result.stdout_text);
    ASSERT_EQ(lines.size(), 6u);
    const char* expected[] = {"32", "64", "128", "256", "512"};
    for (int i = 0; i < 5; ++i) {
        EXPECT_EQ(fields_of(lines[i + 1])[0], expected[i]);
    }
}

TEST(CliAnalyze, PrecisionScalesMopsColumnOnly) {
    const auto int8 = run_cli("analyze bert-base --seq 128 --precision int8");
    const auto fp16 = run_cli("analyze bert-base --seq 128 --precision fp16");
    ASSERT_EQ(int8.exit_code, 0);
    ASSERT_EQ(fp16.exit_code, 0);
    const auto f8 = fields_of(lines_of(int8.stdout_text)[1]);
    const auto f16 = fields_of(lines_of(fp16.stdout_text)[1]);
    EXPECT_EQ(f16[1], f8[1]);  // flops unchanged
    EXPECT_EQ(std::stoull(f16[2]), 2 * std::stoull(f8[2]));
}

TEST(CliAnalyze, PerLayerEmitsKernelRows) {
    const auto result = run_cli("analyze bert-base --seq 16 --per-layer");
    ASSERT_EQ(result.exit_code, 0);
    const auto lines = lines_of(result.stdout_text);
    EXPECT_EQ(lines[0], "seq_len,kernel,flops,mops,weight_mops");
    ASSERT_EQ(lines.size(), 1u + 6u);  // six matmul-path kernels
    EXPECT_EQ(fields_of(lines[1])[1], "qkv_proj");
}

TEST(CliAnalyze, MissingFileExitsTwo) {
    const auto result = run_cli("analyze /no/such/model.json --seq 8");
    EXPECT_EQ(result.exit_code, 2);
}

TEST(CliAnalyze, InvalidModelExitsThree) {
    ScratchDir scratch;
    const auto path = scratch.write("bad.json", R"({
        "num_layers": 2, "hidden_dim": 770, "num_heads": 12,
        "vocab_size": 100, "max_positions": 16, "arch_class": "encoder"
    })");
    const auto result = run_cli("analyze " + path + " --seq 8");
    EXPECT_EQ(result.exit_code, 3);
}

TEST(CliAnalyze, ModelFileMatchesPresetByContent) {
    ScratchDir scratch;
    const auto path = scratch.write(
        "mine.json", memwall::serialize(memwall::preset("bert-base")));
    const auto from_file = run_cli("analyze " + path + " --seq 64");
    const auto from_preset = run_cli("analyze bert-base --seq 64");
    ASSERT_EQ(from_file.exit_code, 0);
    EXPECT_EQ(lines_of(from_file.stdout_text)[1],
              lines_of(from_preset.stdout_text)[1]);
}

TEST(CliRoofline, SingleModelNormalizesToOne) {
    const auto result = run_cli(
        "roofline gpt2 --hardware " + std::string(MEMWALL_DATA_DIR) +
        "/hardware.csv --device a100-sxm4-80g --seq 128");
    ASSERT_EQ(result.exit_code, 0);
    const auto lines = lines_of(result.stdout_text);
    ASSERT_EQ(lines.size(), 2u);
    const auto fields = fields_of(lines[1]);
    EXPECT_EQ(fields.back(), "1");          // normalized latency
    EXPECT_EQ(fields[6], "memory_bound");   // decoder on a high-ridge device
}

TEST(CliRoofline, Gpt2HasLargestNormalizedLatency) {
    const auto result = run_cli(
        "roofline bert-base bert-large gpt2 --hardware " +
        std::string(MEMWALL_DATA_DIR) + "/hardware.csv --device a100-sxm4-80g "
        "--seq 128");
    ASSERT_EQ(result.exit_code, 0);
    const auto lines = lines_of(result.stdout_text);
    ASSERT_EQ(lines.size(), 4u);
    double best = 0.0;
    std::string slowest;
    for (int i = 1; i <= 3; ++i) {
        const auto fields = fields_of(lines[i]);
        const double norm = std::stod(fields.back());
        if (norm > best) {
            best = norm;
            slowest = fields[1];
        }
    }
    EXPECT_EQ(slowest, "gpt2");
    EXPECT_GE(best, 10.0);
}

TEST(CliTrends, ExactDoublingSeries) {
    ScratchDir scratch;
    const auto path = scratch.write("t.csv",
                                    "metric,year,value\n"
                                    "m,2000,1\n"
                                    "m,2002,2\n"
                                    "m,2004,4\n");
    const auto result = run_cli("trends " + path);
    ASSERT_EQ(result.exit_code, 0);
    const auto fields = fields_of(lines_of(result.stdout_text)[1]);
    EXPECT_EQ(fields[0], "m");
    EXPECT_NEAR(std::stod(fields[1]), 2.0, 1e-12);
    EXPECT_NEAR(std::stod(fields[2]), 1.0, 1e-12);
}

TEST(CliTrends, UnknownMetricExitsThree) {
    const auto result =
        run_cli("trends " + std::string(MEMWALL_DATA_DIR) +
                "/trends.csv --metric no_such_metric");
    EXPECT_EQ(result.exit_code, 3);
}

TEST(CliTrends, MalformedRowExitsThree) {
    ScratchDir scratch;
    const auto path = scratch.write("bad.csv",
                                    "metric,year,value\n"
                                    "m,2000,xyz\n"
                                    "m,2002,2\n");
    const auto result = run_cli("trends " + path);
    EXPECT_EQ(result.exit_code, 3);
}

TEST(CliAnalyze, CountOverflowExitsFour) {
    ScratchDir scratch;
    const auto path = scratch.write("huge.json", R"({
        "num_layers": 1, "hidden_dim": 4294967296, "num_heads": 1,
        "vocab_size": 1, "max_positions": 1, "arch_class": "encoder"
    })");
    const auto result = run_cli("analyze " + path + " --seq 1");
    EXPECT_EQ(result.exit_code, 4);
}

TEST(CliTrends, ExcludeTagRemovesRecsysRows) {
    const std::string base = "trends " + std::string(MEMWALL_DATA_DIR) +
                             "/trends.csv --metric transformer_params "
                             "--from 2018 --to 2022";
    const auto all = run_cli(base);
    const auto dense = run_cli(base + " --exclude-tag recsys");
    ASSERT_EQ(all.exit_code, 0);
    ASSERT_EQ(dense.exit_code, 0);
    const double rate_all = std::stod(fields_of(lines_of(all.stdout_text)[1])[1]);
    const double rate_dense =
        std::stod(fields_of(lines_of(dense.stdout_text)[1])[1]);
    EXPECT_GT(rate_all, rate_dense);  // recsys rows steepen the fit
    EXPECT_GE(rate_dense, 410.0 / 1.5);
    EXPECT_LE(rate_dense, 410.0 * 1.5);
}

TEST(CliTrends, BundledPeakFlopsInBand) {
    const auto result =
        run_cli("trends " + std::string(MEMWALL_DATA_DIR) +
                "/trends.csv --metric peak_flops --from 2003 --to 2023");
    ASSERT_EQ(result.exit_code, 0);
    const auto fields = fields_of(lines_of(result.stdout_text)[1]);
    const double rate = std::stod(fields[1]);
    EXPECT_GE(rate, 2.7);
    EXPECT_LE(rate, 3.3);
}

TEST(CliMemory, SgdHasZeroOptimizerColumn) {
    const auto result = run_cli("memory bert-base --optimizer sgd --seq 128");
    ASSERT_EQ(result.exit_code, 0);
    const auto lines = lines_of(result.stdout_text);
    EXPECT_EQ(lines[0],
              "seq_len,weights,gradients,optimizer_state,activations,total");
    EXPECT_EQ(fields_of(lines[1])[3], "0");
}

TEST(CliMemory, CheckpointEveryOneHasZeroOverhead) {
    const auto result =
        run_cli("memory bert-base --checkpoint-every 1 --seq 128");
    ASSERT_EQ(result.exit_code, 0);
    const auto fields = fields_of(lines_of(result.stdout_text)[1]);
    EXPECT_EQ(fields.back(), "0");
}

TEST(CliMemory, CheckpointOutOfRangeExitsThree) {
    const auto result =
        run_cli("memory bert-base --checkpoint-every 99 --seq 8");
    EXPECT_EQ(result.exit_code, 3);
}

TEST(CliMemory, SweepEmitsOneRowPerK) {
    const auto result = run_cli("memory bert-base --checkpoint-sweep --seq 64");
    ASSERT_EQ(result.exit_code, 0);
    const auto lines = lines_of(result.stdout_text);
    EXPECT_EQ(lines[0], "seq_len,every_k,activation_bytes,recompute_overhead");
    EXPECT_EQ(lines.size(), 1u + 12u);
}

TEST(CliOutput, JsonCarriesDigestAndRows) {
    const auto result = run_cli("analyze gpt2 --seq 32 --format json");
    ASSERT_EQ(result.exit_code, 0);
    EXPECT_NE(result.stdout_text.find("\"inputs_digest\""), std::string::npos);
    EXPECT_NE(result.stdout_text.find("\"rows\""), std::string::npos);
}

TEST(CliOutput, GnuplotEmitStartsWithCommentHeader) {
    const auto result =
        run_cli("analyze gpt2 --seq 32 --emit gnuplot-data");
    ASSERT_EQ(result.exit_code, 0);
    EXPECT_EQ(result.stdout_text.rfind("# command: analyze", 0), 0u);
}

TEST(CliOutput, ByteIdenticalAcrossRuns) {
    const std::string invocations[] = {
        "analyze gpt2 --seq 128,256 --format json",
        "trends " + std::string(MEMWALL_DATA_DIR) + "/trends.csv",
        "memory bert-base --checkpoint-sweep --seq 64",
    };
    for (const auto& inv : invocations) {
        const auto first = run_cli(inv);
        const auto second = run_cli(inv);
        ASSERT_EQ(first.exit_code, 0) << inv;
        EXPECT_EQ(first.stdout_text, second.stdout_text) << inv;
    }
}

}  // namespace
