#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <string>

#include "teco/jsonio.hpp"
#include "tests/helpers.hpp"

using testutil::read_file;
using testutil::run_cli;
using testutil::write_file;

namespace {

std::string repeat_lines(const std::string& line, int n) {
    std::string out;
    for (int i = 0; i < n; ++i) {
        out += line;
        out += '\n';
    }
    return out;
}

teco::Json manifest_of(const std::filesystem::path& output) {
    return teco::parse_json(read_file(output.string() + ".manifest.json"),
                            "manifest");
}

}  // namespace

TEST_CASE("version flag prints the tool version") {
    const auto dir = testutil::temp_dir("cli_version");
    const auto r = run_cli("--version", dir);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("0.1.0") != std::string::npos);
}

TEST_CASE("missing required flags exit with the usage code") {
    const auto dir = testutil::temp_dir("cli_usage");
    const auto r = run_cli("extract --ref a.txt --hyp b.txt", dir);  // no --out
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("UsageError:") != std::string::npos);
}

TEST_CASE("unknown subcommands exit with the usage code") {
    const auto dir = testutil::temp_dir("cli_unknown");
    const auto r = run_cli("frobnicate --in x", dir);
    CHECK(r.exit_code == 2);
}

TEST_CASE("extract reports mismatched parallel files by name") {
    const auto dir = testutil::temp_dir("cli_mismatch");
    write_file(dir / "ref.txt", "a b\nc d\n");
    write_file(dir / "hyp.txt", "a b\n");
    const auto r =
        run_cli("extract --ref ref.txt --hyp hyp.txt --out m.json", dir);
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("LineCountMismatch:") == 0);
    CHECK(r.output.find("ref.txt") != std::string::npos);
    CHECK(r.output.find("hyp.txt") != std::string::npos);
}

TEST_CASE("a missing input file maps to the io exit code") {
    const auto dir = testutil::temp_dir("cli_io");
    const auto r = run_cli(
        "corrupt --model nope.json --in nope.txt --out x.tsv", dir);
    CHECK(r.exit_code == 12);
    CHECK(r.output.find("IoError:") == 0);
}

TEST_CASE("eval prints exact rates and rejects ragged input") {
    const auto dir = testutil::temp_dir("cli_eval");
    write_file(dir / "ref.txt", repeat_lines("a b", 3));
    const auto ok = run_cli("eval --ref ref.txt --hyp ref.txt", dir);
    CHECK(ok.exit_code == 0);
    CHECK(ok.output ==
          "wer=0.000000 cer=0.000000 substitutions=0 deletions=0 "
          "insertions=0 ref_words=6\n");

    write_file(dir / "short.txt", "a b\n");
    const auto bad = run_cli("eval --ref ref.txt --hyp short.txt", dir);
    CHECK(bad.exit_code == 11);
    CHECK(bad.output.find("LengthMismatch:") == 0);
}

TEST_CASE("normalize lowercases, strips punctuation, and writes a manifest") {
    const auto dir = testutil::temp_dir("cli_norm");
    write_file(dir / "raw.txt", "  The CAT!  sat  \n\n!!!\nA  dog.\n");
    const auto r = run_cli("normalize --in raw.txt --out clean.txt", dir);
    REQUIRE(r.exit_code == 0);
    CHECK(read_file(dir / "clean.txt") == "the cat sat\na dog\n");
    const teco::Json manifest = manifest_of(dir / "clean.txt");
    CHECK(manifest.at("subcommand") == "normalize");
    CHECK(manifest.at("config").at("kept") == 2);
    CHECK(manifest.at("config").at("dropped") == 2);
}

TEST_CASE("the full pipeline runs end to end in one directory") {
    const auto dir = testutil::temp_dir("cli_pipeline");

    // Parallel data: half the hypothesis lines turn "cat" into "cut".
    std::string ref, hyp;
    for (int i = 0; i < 40; ++i) {
        ref += "the cat sat on the mat\n";
        hyp += i % 2 ? "the cat sat on the mat\n" : "the cut sat on the mat\n";
    }
    write_file(dir / "ref.txt", ref);
    write_file(dir / "hyp.txt", hyp);
    write_file(dir / "clean.txt", repeat_lines("the cat sat on the mat", 60));
    write_file(dir / "test_clean.txt", repeat_lines("the cat sat on the mat", 20));
    write_file(dir / "noisy.txt", repeat_lines("the cut sat", 5));

    // 1. Error model extraction.
    REQUIRE(run_cli("extract --ref ref.txt --hyp hyp.txt --alpha 0.01 "
                    "--out model.json",
                    dir)
                .exit_code == 0);
    const teco::Json extract_manifest = manifest_of(dir / "model.json");
    CHECK(extract_manifest.at("subcommand") == "extract");
    CHECK(extract_manifest.at("tool_version") == "0.1.0");
    CHECK(extract_manifest.at("config").at("pairs") == 40);
    CHECK(extract_manifest.at("command")[0] == "extract");

    // 2. Synthetic corruption, deterministic in seed and thread count.
    REQUIRE(run_cli("corrupt --model model.json --in clean.txt --out train.tsv "
                    "--seed 17",
                    dir)
                .exit_code == 0);
    const std::string train_tsv = read_file(dir / "train.tsv");
    REQUIRE(run_cli("corrupt --model model.json --in clean.txt --out again.tsv "
                    "--seed 17 --threads 4",
                    dir)
                .exit_code == 0);
    CHECK(read_file(dir / "again.tsv") == train_tsv);
    REQUIRE(run_cli("corrupt --model model.json --in clean.txt --out other.tsv "
                    "--seed 18",
                    dir)
                .exit_code == 0);
    CHECK(read_file(dir / "other.tsv") != train_tsv);
    // Re-running the manifest's own command line reproduces the output.
    const teco::Json corrupt_manifest = manifest_of(dir / "train.tsv");
    std::string replay;
    for (const auto& tok : corrupt_manifest.at("command")) {
        if (!replay.empty()) replay += ' ';
        replay += tok.get<std::string>();
    }
    REQUIRE(run_cli(replay, dir).exit_code == 0);
    CHECK(read_file(dir / "train.tsv") == train_tsv);

    REQUIRE(run_cli("corrupt --model model.json --in test_clean.txt "
                    "--out test.tsv --seed 18",
                    dir)
                .exit_code == 0);

    // 3. Tokenizer training and encoding.
    REQUIRE(run_cli("train-bpe --in clean.txt --vocab-size 40 "
                    "--max-token-len 8 --out bpe.json",
                    dir)
                .exit_code == 0);
    write_file(dir / "enc_in.txt", "the cat\nzq\n");
    const auto enc = run_cli("encode --model bpe.json --in enc_in.txt", dir);
    REQUIRE(enc.exit_code == 0);
    const std::size_t nl = enc.output.find('\n');
    REQUIRE(nl != std::string::npos);
    const std::string line1 = enc.output.substr(0, nl);
    CHECK(line1.find('#') == std::string::npos);  // all chars are in the vocab
    CHECK(line1.substr(line1.size() - 2) == " 0");  // marker closes the word
    // Unseen characters come out as literal codepoints, then the marker.
    CHECK(enc.output.substr(nl + 1) == "#7a #71 0\n");

    // 4. Memory corrector: build from synthetic pairs, then correct.
    REQUIRE(run_cli("build-memory --in train.tsv --bpe bpe.json --out mem.json "
                    "--min-count 3",
                    dir)
                .exit_code == 0);
    REQUIRE(run_cli("correct --mode memory --memory mem.json --bpe bpe.json "
                    "--in noisy.txt --out memcor.txt",
                    dir)
                .exit_code == 0);
    CHECK(read_file(dir / "memcor.txt") == repeat_lines("the cat sat", 5));

    // 5. Channel corrector: needs the error model and a char LM.
    REQUIRE(run_cli("train-lm --in clean.txt --order 3 --out lm.json", dir)
                .exit_code == 0);
    REQUIRE(run_cli("correct --mode channel --model model.json --lm lm.json "
                    "--in noisy.txt --out chancor.txt",
                    dir)
                .exit_code == 0);
    CHECK(read_file(dir / "chancor.txt") == repeat_lines("the cat sat", 5));

    // 6. Correction must lower the measured error rate.
    write_file(dir / "noisy_ref.txt", repeat_lines("the cat sat", 5));
    const auto before = run_cli("eval --ref noisy_ref.txt --hyp noisy.txt", dir);
    const auto after =
        run_cli("eval --ref noisy_ref.txt --hyp memcor.txt --out eval.json", dir);
    REQUIRE(before.exit_code == 0);
    REQUIRE(after.exit_code == 0);
    CHECK(before.output.find("wer=0.333333") == 0);
    CHECK(after.output.find("wer=0.000000") == 0);
    CHECK(manifest_of(dir / "eval.json").at("subcommand") == "eval");

    // 7. Sweep over two cells; the V=2 cell fails soft.
    REQUIRE(run_cli("sweep --grid 16:4,2:4 --train train.tsv --test test.tsv "
                    "--out sweep.csv",
                    dir)
                .exit_code == 0);
    const std::string sweep = read_file(dir / "sweep.csv");
    CHECK(sweep.find("vocab_size,max_token_len,corrector,wer_before,wer_after,"
                     "cer_after,fertility,coverage,status\n") == 0);
    CHECK(sweep.find("2,4,token_memory,") != std::string::npos);
    CHECK(sweep.find(",,,,,vocab_too_small") != std::string::npos);
    REQUIRE(run_cli("sweep --grid 16:4,2:4 --train train.tsv --test test.tsv "
                    "--out sweep4.csv --threads 4",
                    dir)
                .exit_code == 0);
    CHECK(read_file(dir / "sweep4.csv") == sweep);

    // 8. Noising comparison and extraction-data ablation.
    REQUIRE(run_cli("compare-noising --model model.json --train clean.txt "
                    "--test test_clean.txt --out cmp.csv --vocab-size 32 "
                    "--seed 5",
                    dir)
                .exit_code == 0);
    const std::string cmp = read_file(dir / "cmp.csv");
    CHECK(cmp.find("method,wer_before,wer_after\n") == 0);
    CHECK(cmp.find("distribution_matched,") != std::string::npos);
    CHECK(cmp.find("random_baseline,") != std::string::npos);
    CHECK(cmp.find("bpe_dropout,") != std::string::npos);

    REQUIRE(run_cli("ablate --ref ref.txt --hyp hyp.txt --raw clean.txt "
                    "--test test_clean.txt --fractions 0.5,1.0 --alpha 0.01 "
                    "--vocab-size 32 --out abl.csv",
                    dir)
                .exit_code == 0);
    const std::string abl = read_file(dir / "abl.csv");
    CHECK(abl.find("fraction,model_l1,wer_after\n") == 0);
    CHECK(abl.find("\n1.000000,0.000000,") != std::string::npos);

    std::filesystem::remove_all(dir);
}

TEST_CASE("correct rejects unknown modes") {
    const auto dir = testutil::temp_dir("cli_badmode");
    write_file(dir / "in.txt", "a\n");
    const auto r =
        run_cli("correct --mode wizard --in in.txt --out out.txt", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("UsageError:") == 0);
}
