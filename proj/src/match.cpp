#include "harmony/match.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "harmony/errors.hpp"

namespace harmony {

namespace {

using nlohmann::json;

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

// Fills `side` from a JSON array of strings; returns a reason on failure.
std::string read_side(const json& obj, const char* key, std::vector<AgentId>& side) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        return std::string("missing field \"") + key + "\"";
    }
    if (!it->is_array()) {
        return std::string("field \"") + key + "\" must be an array";
    }
    side.reserve(it->size());
    for (const auto& v : *it) {
        if (!v.is_string()) {
            return std::string("field \"") + key + "\" must contain strings";
        }
        const auto& s = v.get_ref<const std::string&>();
        if (auto reason = AgentId::validate(s); !reason.empty()) {
            return reason;
        }
        side.emplace_back(s);
    }
    return {};
}

} // namespace

std::string validate_match(const MatchRecord& record, std::size_t team_size) {
    if (record.match_id.empty()) {
        return "empty match_id";
    }
    if (record.winners.empty() || record.losers.empty()) {
        return "empty side";
    }
    std::set<std::string_view> seen_w;
    for (const auto& a : record.winners) {
        if (!seen_w.insert(a.str()).second) {
            return "duplicate agent in side";
        }
    }
    std::set<std::string_view> seen_l;
    for (const auto& a : record.losers) {
        if (!seen_l.insert(a.str()).second) {
            return "duplicate agent in side";
        }
        if (seen_w.contains(a.str())) {
            return "agent on both sides";
        }
    }
    if (team_size != 0 && (record.winners.size() != team_size || record.losers.size() != team_size)) {
        return "side size differs from team_size " + std::to_string(team_size);
    }
    return {};
}

std::optional<LogFormat> parse_log_format(std::string_view name) {
    if (name == "jsonl") return LogFormat::Jsonl;
    if (name == "csv") return LogFormat::Csv;
    return std::nullopt;
}

LogFormat log_format_for_path(std::string_view path) {
    return path.ends_with(".csv") ? LogFormat::Csv : LogFormat::Jsonl;
}

MatchLogReader::MatchLogReader(std::istream& in, ParseOptions options) : in_(in), options_(options) {
    if (!in_) {
        throw Error(ErrorCode::Io, "unreadable stream");
    }
}

std::optional<ParsedLine> MatchLogReader::next() {
    if (options_.format == LogFormat::Csv && !header_done_) {
        header_done_ = true;
        if (auto err = read_csv_header()) {
            return ParsedLine{*err};
        }
    }
    std::string line;
    while (std::getline(in_, line)) {
        ++line_no_;
        strip_cr(line);
        if (is_blank(line)) {
            continue;
        }
        return options_.format == LogFormat::Jsonl ? parse_jsonl(line) : parse_csv(line);
    }
    if (in_.bad()) {
        throw Error(ErrorCode::Io, "read error after line " + std::to_string(line_no_));
    }
    return std::nullopt;
}

ParsedLine MatchLogReader::parse_jsonl(const std::string& line) const {
    auto fail = [&](std::string reason) { return ParsedLine{LineError{line_no_, std::move(reason)}}; };
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded()) {
        return fail("invalid JSON");
    }
    if (!obj.is_object()) {
        return fail("line is not a JSON object");
    }
    MatchRecord rec;
    auto id = obj.find("match_id");
    if (id == obj.end()) {
        return fail("missing field \"match_id\"");
    }
    if (!id->is_string()) {
        return fail("field \"match_id\" must be a string");
    }
    rec.match_id = id->get<std::string>();
    if (auto r = read_side(obj, "winners", rec.winners); !r.empty()) {
        return fail(r);
    }
    if (auto r = read_side(obj, "losers", rec.losers); !r.empty()) {
        return fail(r);
    }
    if (auto ts = obj.find("timestamp"); ts != obj.end() && !ts->is_null()) {
        if (!ts->is_number_integer()) {
            return fail("field \"timestamp\" must be an integer");
        }
        rec.timestamp = ts->get<std::int64_t>();
    }
    if (auto r = validate_match(rec, options_.team_size); !r.empty()) {
        return fail(r);
    }
    return rec;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::optional<LineError> MatchLogReader::read_csv_header() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_no_;
        strip_cr(line);
        if (!is_blank(line)) {
            break;
        }
        line.clear();
    }
    if (line.empty()) {
        if (line_no_ == 0) {
            return std::nullopt;  // empty input
        }
        return LineError{line_no_, "missing CSV header"};
    }
    auto cols = split_csv_line(line);
    if (cols.size() < 3 || (cols.size() - 1) % 2 != 0 || cols[0] != "match_id") {
        return LineError{line_no_, "CSV header must be match_id,winner_1..winner_k,loser_1..loser_k"};
    }
    const std::size_t k = (cols.size() - 1) / 2;
    for (std::size_t i = 0; i < k; ++i) {
        if (cols[1 + i] != "winner_" + std::to_string(i + 1) || cols[1 + k + i] != "loser_" + std::to_string(i + 1)) {
            return LineError{line_no_, "CSV header must be match_id,winner_1..winner_k,loser_1..loser_k"};
        }
    }
    if (options_.team_size != 0 && k != options_.team_size) {
        return LineError{line_no_, "CSV header has " + std::to_string(k) + " players per side, team_size is " +
                                       std::to_string(options_.team_size)};
    }
    csv_side_ = k;
    return std::nullopt;
}

ParsedLine MatchLogReader::parse_csv(const std::string& line) const {
    auto fail = [&](std::string reason) { return ParsedLine{LineError{line_no_, std::move(reason)}}; };
    if (csv_side_ == 0) {
        return fail("no valid CSV header");
    }
    auto cols = split_csv_line(line);
    if (cols.size() != 1 + 2 * csv_side_) {
        return fail("expected " + std::to_string(1 + 2 * csv_side_) + " columns, got " + std::to_string(cols.size()));
    }
    MatchRecord rec;
    rec.match_id = cols[0];
    for (std::size_t i = 0; i < 2 * csv_side_; ++i) {
        const auto& s = cols[1 + i];
        if (auto reason = AgentId::validate(s); !reason.empty()) {
            return fail(reason + " in column " + std::to_string(i + 2));
        }
        (i < csv_side_ ? rec.winners : rec.losers).emplace_back(s);
    }
    if (auto r = validate_match(rec, options_.team_size); !r.empty()) {
        return fail(r);
    }
    return rec;
}

std::vector<ParsedLine> parse_match_log(std::istream& in, ParseOptions options) {
    MatchLogReader reader(in, options);
    std::vector<ParsedLine> out;
    while (auto item = reader.next()) {
        out.push_back(std::move(*item));
    }
    return out;
}

std::string to_jsonl(const MatchRecord& record) {
    nlohmann::ordered_json j;
    j["match_id"] = record.match_id;
    auto w = nlohmann::ordered_json::array();
    for (const auto& a : record.winners) w.push_back(a.str());
    auto l = nlohmann::ordered_json::array();
    for (const auto& a : record.losers) l.push_back(a.str());
    j["winners"] = std::move(w);
    j["losers"] = std::move(l);
    if (record.timestamp) {
        j["timestamp"] = *record.timestamp;
    }
    return j.dump();
}

} // namespace harmony
