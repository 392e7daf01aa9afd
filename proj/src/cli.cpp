#include "harmony/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "harmony/composer.hpp"
#include "harmony/errors.hpp"
#include "harmony/graph_export.hpp"
#include "harmony/report.hpp"
#include "harmony/service.hpp"
#include "harmony/snapshot.hpp"
#include "harmony/synth.hpp"
#include "harmony/views.hpp"

namespace harmony::cli {

using nlohmann::json;

namespace {

constexpr const char* kFooter = R"(Structured output (--format json) is a single JSON document per invocation.
Failures print one line "error: <code>: <message>" on stderr (and, with
--format json, the error document on stdout) and exit nonzero.
HARMONY_SNAPSHOT sets the default snapshot path.)";

struct AnalysisFlags {
    std::string snapshot;
    std::uint64_t min_shared = 1000;
    double target = 0.5;
    double alpha = 0.0;
    std::string format = "text";

    void attach(CLI::App* sub) {
        sub->add_option("--snapshot", snapshot, "Count-table snapshot")->envname("HARMONY_SNAPSHOT");
        sub->add_option("--min-shared", min_shared, "Minimum shared games per pair")->capture_default_str();
        sub->add_option("--target", target, "Target success rate")->capture_default_str();
        sub->add_option("--alpha", alpha, "Additive smoothing")->capture_default_str();
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    }

    AnalysisConfig config() const {
        AnalysisConfig cfg{min_shared, target, alpha};
        cfg.validate();
        return cfg;
    }

    Snapshot load() const {
        if (snapshot.empty()) {
            throw Error(ErrorCode::InvalidArgument, "no snapshot given (--snapshot or HARMONY_SNAPSHOT)");
        }
        auto snap = Snapshot::load(snapshot, config());
        loaded_hash = snap.content_hash;
        return snap;
    }

    bool json_out() const { return format == "json"; }

    // Hash of the last snapshot loaded; error payloads carry it too.
    mutable std::string loaded_hash;
};

std::vector<std::string> split_list(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const auto& item : raw) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (!part.empty()) out.push_back(part);
        }
    }
    return out;
}

std::string opt_fixed(const json& v) { return v.is_null() ? std::string("-") : fmt::format("{:.6f}", v.get<double>()); }

void print_pair_text(std::ostream& out, const json& j) {
    const auto& p = j["probabilities"];
    const std::string a = j["a"], b = j["b"];
    const std::vector<std::pair<std::string, std::string>> rows{
        {"P(" + a + ")", fmt::format("{:.6f}  n={}", p["p_x"].get<double>(), p["n_x"].get<std::uint64_t>())},
        {"P(" + b + ")", fmt::format("{:.6f}  n={}", p["p_y"].get<double>(), p["n_y"].get<std::uint64_t>())},
        {"P(" + a + " and " + b + ")",
         fmt::format("{:.6f}  n={}", p["p_joint"].get<double>(), p["n_joint"].get<std::uint64_t>())},
        {"P(" + a + " without " + b + ")",
         fmt::format("{:.6f}  n={}", p["p_x_not_y"].get<double>(), p["n_x_not_y"].get<std::uint64_t>())},
        {"P(" + b + " without " + a + ")",
         fmt::format("{:.6f}  n={}", p["p_y_not_x"].get<double>(), p["n_y_not_x"].get<std::uint64_t>())},
        {"ratio " + a, fmt::format("{:.6f}", j["ratio_a"].get<double>())},
        {"ratio " + b, fmt::format("{:.6f}", j["ratio_b"].get<double>())},
        {"harmony index", fmt::format("{:.6f}", j["index"].get<double>())},
        {"class", j["class"].is_null() ? std::string("(filtered)") : j["class"].get<std::string>()},
    };
    std::size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.first.size());
    out << fmt::format("pair {} {} ({})\n", a, b, j["status"].get<std::string>());
    for (const auto& [label, value] : rows) {
        out << fmt::format("  {:<{}}  {}\n", label, width, value);
    }
    if (j["below_target"].get<bool>()) {
        out << "  below target success rate\n";
    }
}

void print_team_text(std::ostream& out, const json& t) {
    std::string members;
    for (const auto& m : t["team"]) members += (members.empty() ? "" : " ") + m.get<std::string>();
    out << fmt::format("team {}\n", members);
    out << fmt::format("  harmony index {:.6f}{}\n", t["index"].get<double>(),
                       t["partial"].get<bool>() ? "  (partial, non-canonical)" : "");
    out << fmt::format("  coverage      {:.6f}\n", t["coverage"].get<double>());
    for (const auto& e : t["edges"]) {
        out << fmt::format("  {} -> {}  {:.6f}\n", e["from"].get<std::string>(), e["to"].get<std::string>(),
                           e["ratio"].get<double>());
    }
    for (const auto& e : t["excluded_edges"]) {
        out << fmt::format("  {} -> {}  excluded: {}\n", e["from"].get<std::string>(), e["to"].get<std::string>(),
                           e["reason"].get<std::string>());
    }
    if (!t["weakest_edge"].is_null()) {
        const auto& w = t["weakest_edge"];
        out << fmt::format("  weakest edge  {} -> {} {:.6f}\n", w["from"].get<std::string>(),
                           w["to"].get<std::string>(), w["ratio"].get<double>());
    }
}

void print_recommendations_text(std::ostream& out, const json& r) {
    if (r["no_data_warning"].get<bool>()) {
        out << "warning: no candidate has qualifying data\n";
    }
    out << fmt::format("{:<4} {:<16} {:>10} {:>9}  {}\n", "rank", "candidate", "projected", "coverage", "weakest edge");
    int rank = 1;
    for (const auto& rec : r["recommendations"]) {
        std::string weakest = "-";
        if (!rec["weakest_edge"].is_null()) {
            const auto& w = rec["weakest_edge"];
            weakest = fmt::format("{}->{} {:.6f}", w["from"].get<std::string>(), w["to"].get<std::string>(),
                                  w["ratio"].get<double>());
        }
        out << fmt::format("{:<4} {:<16} {:>10} {:>9.6f}  {}{}\n", rank++, rec["candidate"].get<std::string>(),
                           opt_fixed(rec["projected_index"]), rec["data_coverage"].get<double>(), weakest,
                           rec["below_target"].get<bool>() ? "  [below target]" : "");
    }
}

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(const std::vector<std::string>& args);

private:
    void emit(const AnalysisFlags& flags, const Snapshot& snap, json doc, const std::function<void()>& text) {
        if (flags.json_out()) {
            doc["content_hash"] = snap.content_hash;
            out_ << doc.dump(2) << '\n';
        } else {
            text();
        }
    }

    int ingest();
    int report();
    int pair();
    int team();
    int search();
    int draft();
    int graph();
    int synth();
    int serve();

    std::ostream& out_;
    std::ostream& err_;

    AnalysisFlags flags_;

    // ingest
    std::vector<std::string> inputs_;
    std::string input_format_ = "auto";
    std::size_t team_size_ = 5;
    std::string output_;
    bool strict_ = false;

    // report / graph
    double bin_width_ = 0.01;
    std::string graph_format_ = "graph_json";

    // pair / team
    std::vector<std::string> members_;
    bool partial_ = false;

    // search / draft
    std::vector<std::string> pool_;
    std::vector<std::string> picked_;
    std::vector<std::string> banned_;
    std::size_t k_ = 5;
    std::string method_ = "auto";
    std::size_t beam_ = 8;

    // synth
    std::string synth_config_;
    std::optional<std::uint64_t> seed_;
    std::optional<std::uint64_t> matches_;
    std::string synth_out_format_ = "jsonl";

    // serve
    int port_ = 8080;
    std::string host_ = "127.0.0.1";
    std::string cors_ = "*";
};

int Runner::run(const std::vector<std::string>& args) {
    CLI::App app{"Harmony Index team-synergy analytics"};
    app.footer(kFooter);
    app.require_subcommand(1);

    auto* ingest = app.add_subcommand("ingest", "Read match logs and write a count-table snapshot");
    ingest->add_option("inputs", inputs_, "Match log files (- for stdin)")->required();
    ingest->add_option("--input-format", input_format_, "auto|jsonl|csv")
        ->check(CLI::IsMember({"auto", "jsonl", "csv"}))
        ->capture_default_str();
    ingest->add_option("--team-size", team_size_, "Players per side (0 = unchecked)")->capture_default_str();
    ingest->add_option("-o,--output", output_, "Snapshot to write")->envname("HARMONY_SNAPSHOT");
    ingest->add_flag("--strict", strict_, "Fail on the first malformed line");
    ingest->add_option("--format", flags_.format, "Summary format")->check(CLI::IsMember({"text", "json"}));

    auto* report = app.add_subcommand("report", "Class distribution, quartiles and histogram");
    flags_.attach(report);
    report->add_option("--bin-width", bin_width_, "Histogram bin width")->capture_default_str();

    auto* pair = app.add_subcommand("pair", "Conditional rates, index and class for one pair");
    flags_.attach(pair);
    pair->add_option("agents", members_, "Two agent ids")->required()->expected(2);

    auto* team = app.add_subcommand("team", "Generalized index for a roster");
    flags_.attach(team);
    team->add_option("members", members_, "Roster (>= 2 agents)")->required();
    team->add_flag("--partial", partial_, "Skip edges lacking data instead of failing");

    auto* search = app.add_subcommand("search", "Find the highest-index team");
    flags_.attach(search);
    search->add_option("--pool", pool_, "Candidate agents, comma separated (default: all)");
    search->add_option("-k", k_, "Team size")->required();
    search->add_option("--method", method_, "auto|exhaustive|greedy")
        ->check(CLI::IsMember({"auto", "exhaustive", "greedy"}))
        ->capture_default_str();
    search->add_option("--beam", beam_, "Beam width for greedy search")->capture_default_str();

    auto* draft = app.add_subcommand("draft", "Rank next-pick candidates for a partial team");
    flags_.attach(draft);
    draft->add_option("--picked", picked_, "Current picks, comma separated")->required();
    draft->add_option("--pool", pool_, "Available candidates (default: all others)");
    draft->add_option("--banned", banned_, "Excluded agents");
    draft->add_option("--team-size", team_size_, "Final team size")->capture_default_str();

    auto* graph = app.add_subcommand("graph", "Export the synergy network");
    flags_.attach(graph);
    graph->add_option("--graph-format", graph_format_, "graph_json|dot")
        ->check(CLI::IsMember({"graph_json", "dot"}))
        ->capture_default_str();
    graph->add_option("-o,--output", output_, "Write to file instead of stdout");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic match log");
    synth->add_option("--config", synth_config_, "Synth config JSON")->required();
    synth->add_option("--seed", seed_, "Override the config seed");
    synth->add_option("--matches", matches_, "Override num_matches");
    synth->add_option("--output-format", synth_out_format_, "jsonl|csv")
        ->check(CLI::IsMember({"jsonl", "csv"}))
        ->capture_default_str();
    synth->add_option("-o,--output", output_, "Write to file instead of stdout");

    auto* serve = app.add_subcommand("serve", "Serve the snapshot over HTTP");
    flags_.attach(serve);
    serve->add_option("--port", port_, "Port")->envname("HARMONY_PORT")->capture_default_str();
    serve->add_option("--host", host_, "Bind address")->capture_default_str();
    serve->add_option("--cors-origin", cors_, "Access-Control-Allow-Origin value")->capture_default_str();

    std::vector<const char*> argv{"harmony"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out_ << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out_ << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err_ << "error: usage: " << e.what() << '\n';
        return 2;
    }
    // CLI11 prints subcommand help via exceptions too; handled above.

    try {
        if (*ingest) return this->ingest();
        if (*report) return this->report();
        if (*pair) return this->pair();
        if (*team) return this->team();
        if (*search) return this->search();
        if (*draft) return this->draft();
        if (*graph) return this->graph();
        if (*synth) return this->synth();
        if (*serve) return this->serve();
    } catch (const Error& e) {
        err_ << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        if (flags_.json_out()) {
            auto doc = e.to_json();
            if (!flags_.loaded_hash.empty()) doc["content_hash"] = flags_.loaded_hash;
            out_ << doc.dump(2) << '\n';
        }
        return 1;
    } catch (const std::exception& e) {
        err_ << "error: internal: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

int Runner::ingest() {
    if (output_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "no output snapshot given (-o or HARMONY_SNAPSHOT)");
    }
    CountAccumulator acc;
    std::uint64_t records = 0;
    std::uint64_t rejected = 0;
    for (const auto& path : inputs_) {
        std::ifstream file;
        std::istream* in = &std::cin;
        if (path != "-") {
            file.open(path, std::ios::binary);
            if (!file) {
                throw Error(ErrorCode::Io, "cannot read " + path, {{"path", path}});
            }
            in = &file;
        }
        ParseOptions opts;
        opts.team_size = team_size_;
        opts.format = input_format_ == "auto" ? log_format_for_path(path) : *parse_log_format(input_format_);
        MatchLogReader reader(*in, opts);
        while (auto item = reader.next()) {
            if (auto* rec = std::get_if<MatchRecord>(&*item)) {
                acc.add(*rec);
                ++records;
                continue;
            }
            const auto& le = std::get<LineError>(*item);
            if (strict_) {
                throw Error(ErrorCode::Parse, path + ":" + std::to_string(le.line) + ": " + le.reason,
                            {{"path", path}, {"line", le.line}, {"reason", le.reason}});
            }
            ++rejected;
            err_ << "warning: skipped " << path << ':' << le.line << ": " << le.reason << '\n';
        }
    }
    const CountTable table = acc.finish();
    save_snapshot(output_, table);
    if (flags_.json_out()) {
        out_ << json{{"records", records},
                     {"rejected", rejected},
                     {"agents", table.agents().size()},
                     {"pairs", table.pairs().size()},
                     {"snapshot", output_}}
                    .dump(2)
             << '\n';
    } else {
        out_ << fmt::format("ingested {} records ({} rejected), {} agents, {} pairs -> {}\n", records, rejected,
                            table.agents().size(), table.pairs().size(), output_);
    }
    return 0;
}

int Runner::report() {
    if (!(bin_width_ > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "--bin-width must be positive");
    }
    const auto snap = flags_.load();
    const auto all = assess_all_pairs(snap.counts, snap.cfg);
    const auto r = distribution_report(all.assessments, bin_width_);
    emit(flags_, snap, views::report(r, all.summary), [&] { out_ << format_report_text(r, &all.summary); });
    return 0;
}

int Runner::pair() {
    const auto snap = flags_.load();
    const json j = views::pair(snap.counts, members_[0], members_[1], snap.cfg);
    emit(flags_, snap, j, [&] { print_pair_text(out_, j); });
    return 0;
}

int Runner::team() {
    const auto snap = flags_.load();
    const auto members = split_list(members_);
    const json j = views::team_query(snap.counts, members, snap.cfg, partial_);
    emit(flags_, snap, j, [&] { print_team_text(out_, j); });
    return 0;
}

int Runner::search() {
    const auto snap = flags_.load();
    std::vector<AgentId> pool;
    if (pool_.empty()) {
        pool = snap.counts.agent_ids();
    } else {
        pool = views::resolve_agents(snap.counts, split_list(pool_));
    }
    TeamSearchResult result;
    std::string used = method_;
    if (method_ == "greedy") {
        result = best_team_greedy(snap.counts, pool, k_, snap.cfg, beam_);
    } else if (method_ == "exhaustive") {
        result = best_team_exhaustive(snap.counts, pool, k_, snap.cfg);
    } else {
        try {
            result = best_team_exhaustive(snap.counts, pool, k_, snap.cfg);
            used = "exhaustive";
        } catch (const Error& e) {
            if (e.code() != ErrorCode::GuardExceeded) throw;
            result = best_team_greedy(snap.counts, pool, k_, snap.cfg, beam_);
            used = "greedy";
        }
    }
    json j = views::search_result(result);
    j["method"] = used;
    emit(flags_, snap, j, [&] {
        out_ << fmt::format("method {} ({} rosters evaluated)\n", used, result.evaluated);
        print_team_text(out_, j["assessment"]);
        if (!result.unusable_agents.empty()) {
            std::string names;
            for (const auto& a : result.unusable_agents) names += " " + a.str();
            out_ << "agents without qualifying edges:" << names << '\n';
        }
    });
    return 0;
}

int Runner::draft() {
    const auto snap = flags_.load();
    json body{{"picked", split_list(picked_)}, {"banned", split_list(banned_)}, {"team_size", team_size_}};
    if (!pool_.empty()) {
        body["pool"] = split_list(pool_);
    }
    const auto state = views::parse_draft_state(body, snap.counts);
    const json j = views::draft_query(snap.counts, state, snap.cfg);
    emit(flags_, snap, j, [&] { print_recommendations_text(out_, j); });
    return 0;
}

int Runner::graph() {
    const auto snap = flags_.load();
    const auto all = assess_all_pairs(snap.counts, snap.cfg);
    const auto doc = export_graph(all.assessments, *parse_graph_format(graph_format_));
    if (output_.empty()) {
        out_ << doc;
    } else {
        std::ofstream f(output_, std::ios::binary | std::ios::trunc);
        if (!f || !(f << doc)) {
            throw Error(ErrorCode::Io, "cannot write " + output_, {{"path", output_}});
        }
    }
    return 0;
}

int Runner::synth() {
    std::ifstream cfg_file(synth_config_);
    if (!cfg_file) {
        throw Error(ErrorCode::Io, "cannot read synth config " + synth_config_, {{"path", synth_config_}});
    }
    json raw = json::parse(cfg_file, nullptr, false);
    if (raw.is_discarded()) {
        throw Error(ErrorCode::Parse, "synth config is not valid JSON", {{"path", synth_config_}});
    }
    auto cfg = synth::SynthConfig::from_json(raw);
    if (seed_) cfg.seed = *seed_;
    if (matches_) cfg.num_matches = *matches_;

    std::ofstream file;
    std::ostream* out = &out_;
    if (!output_.empty()) {
        file.open(output_, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw Error(ErrorCode::Io, "cannot write " + output_, {{"path", output_}});
        }
        out = &file;
    }
    const bool csv = synth_out_format_ == "csv";
    if (csv) {
        *out << "match_id";
        for (std::size_t i = 1; i <= cfg.team_size; ++i) *out << ",winner_" << i;
        for (std::size_t i = 1; i <= cfg.team_size; ++i) *out << ",loser_" << i;
        *out << '\n';
    }
    synth::generate_range(cfg, 0, cfg.num_matches, [&](MatchRecord&& r) {
        if (csv) {
            *out << r.match_id;
            for (const auto& a : r.winners) *out << ',' << a.str();
            for (const auto& a : r.losers) *out << ',' << a.str();
            *out << '\n';
        } else {
            *out << to_jsonl(r) << '\n';
        }
    });
    out->flush();
    if (!*out) {
        throw Error(ErrorCode::Io, "write failed");
    }
    return 0;
}

int Runner::serve() {
    if (flags_.snapshot.empty()) {
        throw Error(ErrorCode::InvalidArgument, "no snapshot given (--snapshot or HARMONY_SNAPSHOT)");
    }
    Service service(flags_.snapshot, flags_.config(), ServiceOptions{host_, port_, cors_});
    const int port = service.start();
    err_ << fmt::format("serving {} on http://{}:{}\n", flags_.snapshot, host_, port);
    err_.flush();
    service.wait();
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Runner runner(out, err);
    return runner.run(args);
}

} // namespace harmony::cli
