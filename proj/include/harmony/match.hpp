#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "harmony/agent_id.hpp"

namespace harmony {

/// One match: two disjoint, duplicate-free rosters and who won.
struct MatchRecord {
    std::string match_id;
    std::vector<AgentId> winners;
    std::vector<AgentId> losers;
    std::optional<std::int64_t> timestamp;

    friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

/// Checks the record invariants. Returns an empty string when valid,
/// otherwise a short reason ("duplicate agent in side", ...).
/// `team_size` of 0 disables the side-size check.
std::string validate_match(const MatchRecord& record, std::size_t team_size);

enum class LogFormat { Jsonl, Csv };

std::optional<LogFormat> parse_log_format(std::string_view name);
/// Guesses from the file extension (.csv -> Csv, everything else Jsonl).
LogFormat log_format_for_path(std::string_view path);

struct LineError {
    std::size_t line = 0;  // 1-based
    std::string reason;

    friend bool operator==(const LineError&, const LineError&) = default;
};

using ParsedLine = std::variant<MatchRecord, LineError>;

struct ParseOptions {
    LogFormat format = LogFormat::Jsonl;
    std::size_t team_size = 5;  // 0 = any size, sides need not match
};

/// Streaming reader: holds one line at a time, yields records in input
/// order and reports malformed lines with their line number.
class MatchLogReader {
public:
    MatchLogReader(std::istream& in, ParseOptions options);

    /// Next record or line error; nullopt at end of stream.
    std::optional<ParsedLine> next();

    std::size_t line_number() const noexcept { return line_no_; }

private:
    ParsedLine parse_jsonl(const std::string& line) const;
    ParsedLine parse_csv(const std::string& line) const;
    std::optional<LineError> read_csv_header();

    std::istream& in_;
    ParseOptions options_;
    std::size_t line_no_ = 0;
    std::size_t csv_side_ = 0;
    bool header_done_ = false;
};

/// Convenience: drains a reader.
std::vector<ParsedLine> parse_match_log(std::istream& in, ParseOptions options);

/// Serializes one record as a JSONL line (no trailing newline).
std::string to_jsonl(const MatchRecord& record);

/// Splits one CSV line honoring double-quoted fields.
std::vector<std::string> split_csv_line(const std::string& line);

} // namespace harmony
