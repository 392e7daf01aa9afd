#include "harmony/snapshot.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "harmony/errors.hpp"

namespace harmony {

namespace {

[[noreturn]] void corrupt(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::Parse, "snapshot line " + std::to_string(line) + ": " + what, {{"line", line}});
}

std::vector<std::string_view> split_tabs(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find('\t', start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::uint64_t parse_u64(std::string_view s, std::size_t line) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
        corrupt(line, "bad integer \"" + std::string(s) + "\"");
    }
    return v;
}

Tally tally(std::string_view games, std::string_view wins, std::size_t line) {
    const Tally t{parse_u64(games, line), parse_u64(wins, line)};
    if (t.wins > t.games) corrupt(line, "wins exceed games");
    return t;
}

AgentId parse_id(std::string_view s, std::size_t line) {
    if (auto reason = AgentId::validate(s); !reason.empty()) {
        corrupt(line, reason);
    }
    return AgentId(s);
}

class LineSource {
public:
    explicit LineSource(std::istream& in) : in_(in) {}

    std::string next() {
        std::string line;
        if (!std::getline(in_, line)) {
            corrupt(line_ + 1, "unexpected end of snapshot");
        }
        ++line_;
        return line;
    }
    std::size_t line() const { return line_; }

    // "<keyword> <n>"
    std::uint64_t header(std::string_view keyword) {
        const auto l = next();
        const std::string prefix = std::string(keyword) + " ";
        if (!l.starts_with(prefix)) {
            corrupt(line_, "expected \"" + std::string(keyword) + "\"");
        }
        return parse_u64(std::string_view(l).substr(prefix.size()), line_);
    }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

} // namespace

void write_snapshot(std::ostream& out, const CountTable& table) {
    out << "harmony-counts " << kSnapshotVersion << '\n';
    out << "sides " << table.total_sides() << '\n';
    out << "agents " << table.agents().size() << '\n';
    for (const auto& [id, t] : table.agents()) {
        out << id.str() << '\t' << t.games << '\t' << t.wins << '\n';
    }
    out << "pairs " << table.pairs().size() << '\n';
    for (const auto& [p, t] : table.pairs()) {
        out << p.first().str() << '\t' << p.second().str() << '\t' << t.games << '\t' << t.wins << '\n';
    }
    out << "end\n";
}

std::string snapshot_string(const CountTable& table) {
    std::ostringstream os;
    write_snapshot(os, table);
    return os.str();
}

CountTable read_snapshot(std::istream& in) {
    LineSource src(in);
    const auto magic = src.next();
    if (!magic.starts_with("harmony-counts ")) {
        corrupt(1, "not a harmony count snapshot");
    }
    const auto version = parse_u64(std::string_view(magic).substr(15), 1);
    if (version != kSnapshotVersion) {
        corrupt(1, "unsupported snapshot version " + std::to_string(version));
    }
    CountTable table;
    table.add_total_sides(src.header("sides"));

    const auto n_agents = src.header("agents");
    std::optional<AgentId> prev;
    for (std::uint64_t i = 0; i < n_agents; ++i) {
        const auto l = src.next();
        const auto f = split_tabs(l);
        if (f.size() != 3) corrupt(src.line(), "agent row needs 3 fields");
        auto id = parse_id(f[0], src.line());
        if (prev && !(*prev < id)) corrupt(src.line(), "agents not strictly sorted");
        table.add_agent(id, tally(f[1], f[2], src.line()));
        prev = std::move(id);
    }

    const auto n_pairs = src.header("pairs");
    std::optional<AgentPair> prev_pair;
    for (std::uint64_t i = 0; i < n_pairs; ++i) {
        const auto l = src.next();
        const auto f = split_tabs(l);
        if (f.size() != 4) corrupt(src.line(), "pair row needs 4 fields");
        auto a = parse_id(f[0], src.line());
        auto b = parse_id(f[1], src.line());
        if (!(a < b)) corrupt(src.line(), "pair members must be distinct and ordered");
        if (!table.has_agent(a) || !table.has_agent(b)) corrupt(src.line(), "pair names an unknown agent");
        AgentPair p(std::move(a), std::move(b));
        if (prev_pair && !(*prev_pair < p)) corrupt(src.line(), "pairs not strictly sorted");
        table.add_pair(p, tally(f[2], f[3], src.line()));
        prev_pair = std::move(p);
    }
    if (src.next() != "end") {
        corrupt(src.line(), "expected \"end\"");
    }
    if (std::string rest; std::getline(in, rest)) {
        corrupt(src.line() + 1, "content after \"end\"");
    }
    try {
        table.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::Parse, std::string("snapshot violates count invariants: ") + e.what(), e.detail());
    }
    return table;
}

void save_snapshot(const std::string& path, const CountTable& table) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write snapshot " + path, {{"path", path}});
    }
    write_snapshot(out, table);
    if (!out.flush()) {
        throw Error(ErrorCode::Io, "failed writing snapshot " + path, {{"path", path}});
    }
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot read snapshot " + path, {{"path", path}});
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

CountTable load_snapshot_file(const std::string& path) {
    std::istringstream in(read_file(path));
    return read_snapshot(in);
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::Io, "sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

Snapshot Snapshot::load(const std::string& path, const AnalysisConfig& cfg) {
    cfg.validate();
    const std::string bytes = read_file(path);
    std::istringstream in(bytes);
    Snapshot s;
    try {
        s.counts = read_snapshot(in);
    } catch (const Error& e) {
        auto detail = e.detail();
        detail["path"] = path;
        throw Error(e.code(), path + ": " + e.what(), detail);
    }
    s.cfg = cfg;
    s.loaded_at = std::chrono::system_clock::now();
    s.content_hash = sha256_hex(bytes);
    s.path = path;
    return s;
}

} // namespace harmony
