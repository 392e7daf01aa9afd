#include "harmony/service.hpp"

#include <chrono>
#include <ctime>

#include <httplib.h>
#include <json.hpp>

#include "harmony/errors.hpp"
#include "harmony/graph_export.hpp"
#include "harmony/views.hpp"

namespace harmony {

using nlohmann::json;

SnapshotStore::SnapshotStore(std::shared_ptr<const Snapshot> initial) : snapshot_(std::move(initial)) {}

std::shared_ptr<const Snapshot> SnapshotStore::current() const {
    std::lock_guard lock(mutex_);
    return snapshot_;
}

void SnapshotStore::replace(std::shared_ptr<const Snapshot> next) {
    std::lock_guard lock(mutex_);
    snapshot_ = std::move(next);
}

namespace {

int status_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::NotFound: return 404;
    case ErrorCode::InsufficientData:
    case ErrorCode::BelowThreshold:
    case ErrorCode::Infeasible:
    case ErrorCode::GuardExceeded: return 422;
    case ErrorCode::InvalidArgument:
    case ErrorCode::Parse: return 400;
    case ErrorCode::Io:
    case ErrorCode::Overflow: return 500;
    }
    return 500;
}

std::string iso8601(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void send_json(httplib::Response& res, const Snapshot& snap, json body, int status = 200) {
    body["content_hash"] = snap.content_hash;
    res.status = status;
    res.set_header("X-Content-Hash", snap.content_hash);
    res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded()) {
        throw Error(ErrorCode::InvalidArgument, "request body is not valid JSON");
    }
    return body;
}

std::string path_param(const httplib::Request& req, std::size_t i) {
    return httplib::detail::decode_url(req.matches[i].str(), false);
}

// Runs `fn` against one snapshot, mapping library errors onto HTTP codes.
template <typename Fn>
httplib::Server::Handler guarded(const SnapshotStore& store, Fn fn) {
    return [&store, fn](const httplib::Request& req, httplib::Response& res) {
        const auto snap = store.current();
        try {
            fn(*snap, req, res);
        } catch (const Error& e) {
            send_json(res, *snap, e.to_json(), status_for(e.code()));
        } catch (const std::exception& e) {
            send_json(res, *snap, {{"error", "internal"}, {"message", e.what()}, {"detail", json::object()}}, 500);
        }
    };
}

AnalysisConfig with_min_shared(const Snapshot& snap, const httplib::Request& req) {
    AnalysisConfig cfg = snap.cfg;
    if (req.has_param("min_shared")) {
        const auto v = req.get_param_value("min_shared");
        try {
            std::size_t used = 0;
            const long long n = std::stoll(v, &used);
            if (used != v.size() || n < 1) throw std::invalid_argument(v);
            cfg.min_shared_games = static_cast<std::uint64_t>(n);
        } catch (const std::exception&) {
            throw Error(ErrorCode::InvalidArgument, "min_shared must be a positive integer", {{"min_shared", v}});
        }
    }
    return cfg;
}

} // namespace

Service::Service(std::string snapshot_path, AnalysisConfig cfg, ServiceOptions options)
    : snapshot_path_(std::move(snapshot_path)),
      cfg_(cfg),
      options_(std::move(options)),
      store_(std::make_shared<const Snapshot>(Snapshot::load(snapshot_path_, cfg_))),
      server_(std::make_unique<httplib::Server>()) {
    install_routes();
}

Service::~Service() { stop(); }

std::string Service::reload() {
    auto next = std::make_shared<const Snapshot>(Snapshot::load(snapshot_path_, cfg_));
    std::string hash = next->content_hash;
    store_.replace(std::move(next));
    return hash;
}

void Service::install_routes() {
    auto& srv = *server_;
    srv.set_default_headers({{"Access-Control-Allow-Origin", options_.cors_origin},
                             {"Access-Control-Expose-Headers", "X-Content-Hash"}});
    srv.Options(".*", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });

    srv.Get("/health", guarded(store_, [](const Snapshot& s, const httplib::Request&, httplib::Response& res) {
                send_json(res, s,
                          {{"status", "ok"},
                           {"loaded_at", iso8601(s.loaded_at)},
                           {"agents", s.counts.agents().size()},
                           {"pairs", s.counts.pairs().size()}});
            }));

    srv.Get("/agents", guarded(store_, [](const Snapshot& s, const httplib::Request&, httplib::Response& res) {
                send_json(res, s, views::agents(s.counts, s.cfg.smoothing_alpha));
            }));

    srv.Get("/pairs", guarded(store_, [](const Snapshot& s, const httplib::Request& req, httplib::Response& res) {
                send_json(res, s, views::pairs(s.counts, with_min_shared(s, req)));
            }));

    srv.Get(R"(/pair/([^/]+)/([^/]+))",
            guarded(store_, [](const Snapshot& s, const httplib::Request& req, httplib::Response& res) {
                send_json(res, s, views::pair(s.counts, path_param(req, 1), path_param(req, 2), s.cfg));
            }));

    srv.Post("/team", guarded(store_, [](const Snapshot& s, const httplib::Request& req, httplib::Response& res) {
                 const json body = parse_body(req);
                 if (!body.is_object() || !body.contains("members") || !body["members"].is_array()) {
                     throw Error(ErrorCode::InvalidArgument, "body must be {\"members\": [...]}");
                 }
                 std::vector<std::string> members;
                 for (const auto& m : body["members"]) {
                     if (!m.is_string()) throw Error(ErrorCode::InvalidArgument, "members must be strings");
                     members.push_back(m.get<std::string>());
                 }
                 const bool partial = body.value("partial", false);
                 send_json(res, s, views::team_query(s.counts, members, s.cfg, partial));
             }));

    srv.Post("/draft/recommend",
             guarded(store_, [](const Snapshot& s, const httplib::Request& req, httplib::Response& res) {
                 const auto state = views::parse_draft_state(parse_body(req), s.counts);
                 send_json(res, s, views::draft_query(s.counts, state, s.cfg));
             }));

    srv.Get("/graph", guarded(store_, [](const Snapshot& s, const httplib::Request& req, httplib::Response& res) {
                const auto name = req.has_param("format") ? req.get_param_value("format") : std::string("graph_json");
                const auto format = parse_graph_format(name);
                if (!format) {
                    throw Error(ErrorCode::InvalidArgument, "unknown graph format " + name, {{"format", name}});
                }
                const auto all = assess_all_pairs(s.counts, with_min_shared(s, req));
                res.set_header("X-Content-Hash", s.content_hash);
                res.set_content(export_graph(all.assessments, *format),
                                *format == GraphFormat::Dot ? "text/vnd.graphviz" : "application/json");
            }));

    srv.Post("/reload", [this](const httplib::Request&, httplib::Response& res) {
        try {
            reload();
            const auto snap = store_.current();
            send_json(res, *snap, {{"status", "reloaded"}, {"loaded_at", iso8601(snap->loaded_at)}});
        } catch (const Error& e) {
            const auto snap = store_.current();
            send_json(res, *snap, e.to_json(), 500);
        }
    });
}

int Service::bind() {
    if (options_.port == 0) {
        bound_port_ = server_->bind_to_any_port(options_.host);
    } else if (server_->bind_to_port(options_.host, options_.port)) {
        bound_port_ = options_.port;
    } else {
        bound_port_ = -1;
    }
    if (bound_port_ <= 0) {
        throw Error(ErrorCode::Io, "cannot bind " + options_.host + ":" + std::to_string(options_.port));
    }
    return bound_port_;
}

int Service::start() {
    const int port = bind();
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port;
}

void Service::run() {
    bind();
    server_->listen_after_bind();
}

void Service::wait() {
    if (thread_.joinable()) {
        thread_.join();
    }
}

void Service::stop() {
    if (server_) {
        server_->stop();
    }
    if (thread_.joinable()) {
        thread_.join();
    }
}

} // namespace harmony
