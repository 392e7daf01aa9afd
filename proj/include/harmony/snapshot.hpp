#pragma once

#include <chrono>
#include <istream>
#include <ostream>
#include <string>

#include "harmony/config.hpp"
#include "harmony/count_table.hpp"

namespace harmony {

/// Text dump of a CountTable:
///
///   harmony-counts 1
///   sides <n>
///   agents <count>
///   <id>\t<games>\t<wins>          (sorted by id)
///   pairs <count>
///   <a>\t<b>\t<games>\t<wins>      (sorted by (a, b), a < b)
///   end
///
/// write -> read -> write is byte-identical.
inline constexpr int kSnapshotVersion = 1;

void write_snapshot(std::ostream& out, const CountTable& table);
std::string snapshot_string(const CountTable& table);
/// Throws Error(Parse) with the line number on malformed or
/// version-incompatible input.
CountTable read_snapshot(std::istream& in);

void save_snapshot(const std::string& path, const CountTable& table);
CountTable load_snapshot_file(const std::string& path);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

/// A loaded, immutable snapshot.
struct Snapshot {
    CountTable counts;
    AnalysisConfig cfg;
    std::chrono::system_clock::time_point loaded_at;
    std::string content_hash;
    std::string path;

    static Snapshot load(const std::string& path, const AnalysisConfig& cfg);
};

} // namespace harmony
