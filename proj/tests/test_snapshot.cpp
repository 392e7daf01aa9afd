#include <doctest.h>

#include <random>
#include <sstream>

#include "harmony/errors.hpp"
#include "harmony/snapshot.hpp"
#include "harmony/synth.hpp"
#include "test_support.hpp"

using namespace harmony;

namespace {

int parse_error_line(const std::string& text) {
    std::istringstream in(text);
    try {
        (void)read_snapshot(in);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Parse);
        return e.detail().value("line", -1);
    }
    return 0;
}

} // namespace

TEST_CASE("fixture A snapshot text") {
    const auto t = accumulate_counts(testing::fixture_a_records());
    const auto text = snapshot_string(t);
    CHECK(text.rfind("harmony-counts 1\nsides 12\nagents 5\na\t6\t3\n", 0) == 0);
    CHECK(text.find("pairs 8\na\tb\t3\t2\n") != std::string::npos);
    CHECK(text.substr(text.size() - 4) == "end\n");
    std::istringstream in(text);
    CHECK(read_snapshot(in) == t);
}

TEST_CASE("write-read-write is byte identical") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto cfg = testing::random_config(rng, 6 + trial, 2 + trial % 3, 500 + 300 * trial);
        const auto t = accumulate_counts(synth::generate_dataset(cfg));
        const auto first = snapshot_string(t);
        std::istringstream in(first);
        const auto back = read_snapshot(in);
        CHECK(back == t);
        CHECK(snapshot_string(back) == first);
    }
    // empty table
    const auto empty = snapshot_string(CountTable{});
    std::istringstream in(empty);
    CHECK(snapshot_string(read_snapshot(in)) == empty);
}

TEST_CASE("file round trip and load errors") {
    const auto path = testing::temp_path("snap.txt");
    const auto t = accumulate_counts(testing::fixture_a_records());
    save_snapshot(path, t);
    CHECK(load_snapshot_file(path) == t);
    const auto s = Snapshot::load(path, AnalysisConfig{});
    CHECK(s.counts == t);
    CHECK(s.content_hash == sha256_hex(testing::read_file(path)));
    CHECK(s.path == path);
    std::remove(path.c_str());
    try {
        (void)load_snapshot_file(path);
        FAIL("expected io error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Io);
    }
}

TEST_CASE("corrupt snapshots name the offending line") {
    const std::string good = "harmony-counts 1\nsides 2\nagents 2\na\t1\t1\nb\t1\t0\npairs 0\nend\n";
    CHECK(parse_error_line(good) == 0);
    CHECK(parse_error_line("") == 1);
    CHECK(parse_error_line("harmony-counts 2\n") == 1);
    CHECK(parse_error_line("nonsense\n") == 1);
    CHECK(parse_error_line("harmony-counts 1\nsides x\n") == 2);
    CHECK(parse_error_line("harmony-counts 1\nsides 2\nagents 2\na\t1\t1\n") == 5);                        // truncated
    CHECK(parse_error_line("harmony-counts 1\nsides 2\nagents 2\na\t1\t2\nb\t1\t0\npairs 0\nend\n") == 4);   // wins > games
    CHECK(parse_error_line("harmony-counts 1\nsides 2\nagents 2\nb\t1\t1\na\t1\t0\npairs 0\nend\n") == 5);   // unsorted
    CHECK(parse_error_line("harmony-counts 1\nsides 2\nagents 2\na\t1\t1\nb\t1\t0\npairs 1\nb\ta\t1\t0\nend\n") == 7);
    CHECK(parse_error_line("harmony-counts 1\nsides 2\nagents 2\na\t1\t1\nb\t1\t0\npairs 1\na\tc\t1\t0\nend\n") == 7);
    CHECK(parse_error_line("harmony-counts 1\nsides 2\nagents 2\na\t1\t1\nb\t1\t0\npairs 0\n") == 7);       // no end
    CHECK(parse_error_line(good + "extra\n") == 8);
}

TEST_CASE("sha256 test vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
