#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "curator/workspace.hpp"

namespace curator {

struct JournalEntry {
  std::size_t line = 0;  // 1-based line in events.log
  nlohmann::json event;
};

struct RecoveredJournal {
  std::optional<nlohmann::json> snapshot;
  std::vector<JournalEntry> events;
  bool torn_tail_dropped = false;
};

/// Append-only event log plus periodic snapshot inside one data directory:
///   events.log     one JSON event per line
///   snapshot.json  full state as of its "seq"
class FileJournal : public EventSink {
 public:
  static constexpr const char* kEventsFile = "events.log";
  static constexpr const char* kSnapshotFile = "snapshot.json";

  explicit FileJournal(std::filesystem::path dir, bool durable = true);
  ~FileJournal() override;

  FileJournal(const FileJournal&) = delete;
  FileJournal& operator=(const FileJournal&) = delete;

  void append(const nlohmann::json& event) override;
  void checkpoint(const nlohmann::json& snapshot) override;

  const std::filesystem::path& dir() const { return dir_; }

  /// Reads the directory. An unterminated final line is a write torn by a crash:
  /// it was never acknowledged, so it is dropped and cut from the file.
  /// Any other unreadable line throws LineError(CorruptState).
  static RecoveredJournal recover(const std::filesystem::path& dir);

 private:
  void open_log();

  std::filesystem::path dir_;
  bool durable_;
  int fd_ = -1;
  std::mutex mutex_;
};

/// Restores a workspace from `dir` (creating it if needed) and attaches a
/// journal so later mutations are persisted. Throws CorruptState when the
/// stored state cannot be replayed.
std::unique_ptr<Workspace> open_workspace(const std::filesystem::path& dir, WorkspaceOptions options = {},
                                          bool durable = true);

}  // namespace curator
