#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "harmony/config.hpp"
#include "harmony/snapshot.hpp"

namespace httplib {
class Server;
}

namespace harmony {

/// Holds the current snapshot; readers take a shared_ptr copy, reload swaps
/// the pointer so a request never sees two snapshots.
class SnapshotStore {
public:
    explicit SnapshotStore(std::shared_ptr<const Snapshot> initial);

    std::shared_ptr<const Snapshot> current() const;
    void replace(std::shared_ptr<const Snapshot> next);

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const Snapshot> snapshot_;
};

struct ServiceOptions {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 = pick a free port
    std::string cors_origin = "*";
};

/// Read-only HTTP facade over a snapshot.
///
///   GET  /health
///   GET  /agents
///   GET  /pairs?min_shared=N
///   GET  /pair/{a}/{b}
///   POST /team            {"members": [...], "partial": bool}
///   POST /draft/recommend {"picked": [...], "pool": [...], "banned": [...], "team_size": n}
///   GET  /graph?format=graph_json|dot
///   POST /reload          re-reads the snapshot file and swaps atomically
///
/// Every JSON body carries "content_hash" of the snapshot that answered it.
class Service {
public:
    Service(std::string snapshot_path, AnalysisConfig cfg, ServiceOptions options);
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds and serves on a background thread; returns the bound port.
    int start();
    /// Binds and blocks the calling thread.
    void run();
    /// Blocks until a server started with start() stops.
    void wait();
    void stop();

    int port() const noexcept { return bound_port_; }
    SnapshotStore& store() noexcept { return store_; }
    /// Reloads from the configured path; returns the new content hash.
    std::string reload();

private:
    void install_routes();
    int bind();

    std::string snapshot_path_;
    AnalysisConfig cfg_;
    ServiceOptions options_;
    SnapshotStore store_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int bound_port_ = 0;
};

} // namespace harmony
