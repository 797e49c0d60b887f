#include "curator/journal.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "curator/error.hpp"

namespace curator {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void storage_failure(const std::string& what, const fs::path& path, int err) {
  throw Error(ErrorCode::StorageFailure, what + ": " + std::strerror(err), path.string());
}

bool write_all(int fd, const std::string& data) {
  std::size_t done = 0;
  while (done < data.size()) {
    auto n = ::write(fd, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    done += static_cast<std::size_t>(n);
  }
  return true;
}

void sync_dir(const fs::path& dir) {
  int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

FileJournal::FileJournal(fs::path dir, bool durable) : dir_(std::move(dir)), durable_(durable) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::StorageFailure, "cannot create data directory: " + ec.message(), dir_.string());
  open_log();
}

FileJournal::~FileJournal() {
  if (fd_ >= 0) ::close(fd_);
}

void FileJournal::open_log() {
  auto path = dir_ / kEventsFile;
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) storage_failure("cannot open event log", path, errno);
}

void FileJournal::append(const json& event) {
  std::lock_guard lock(mutex_);
  auto line = event.dump();
  line += '\n';
  auto before = ::lseek(fd_, 0, SEEK_END);
  bool ok = write_all(fd_, line);
  int err = errno;
  if (ok && durable_ && ::fsync(fd_) != 0 && errno != EINVAL && errno != EROFS) {
    ok = false;
    err = errno;
  }
  if (!ok) {
    if (before >= 0) {
      if (::ftruncate(fd_, before) != 0) {
        // nothing more can be done; recovery drops the torn tail
      }
    }
    storage_failure("cannot append event", dir_ / kEventsFile, err);
  }
}

void FileJournal::checkpoint(const json& snapshot) {
  std::lock_guard lock(mutex_);
  auto tmp = dir_ / (std::string(kSnapshotFile) + ".tmp");
  auto target = dir_ / kSnapshotFile;
  {
    int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) storage_failure("cannot write snapshot", tmp, errno);
    bool ok = write_all(fd, snapshot.dump());
    int err = errno;
    if (ok && durable_ && ::fsync(fd) != 0) {
      ok = false;
      err = errno;
    }
    ::close(fd);
    if (!ok) {
      fs::remove(tmp);
      storage_failure("cannot write snapshot", tmp, err);
    }
  }
  if (::rename(tmp.c_str(), target.c_str()) != 0) storage_failure("cannot install snapshot", target, errno);
  if (durable_) sync_dir(dir_);
  // Events up to the snapshot's seq are now redundant; replay skips them anyway
  // if the process dies before the truncation lands.
  if (::ftruncate(fd_, 0) != 0) storage_failure("cannot truncate event log", dir_ / kEventsFile, errno);
  if (durable_) ::fsync(fd_);
}

RecoveredJournal FileJournal::recover(const fs::path& dir) {
  RecoveredJournal out;
  auto snap_path = dir / kSnapshotFile;
  if (fs::exists(snap_path)) {
    try {
      out.snapshot = json::parse(slurp(snap_path));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::CorruptState, std::string("unreadable snapshot: ") + e.what(), snap_path.string());
    }
  }

  auto log_path = dir / kEventsFile;
  if (!fs::exists(log_path)) return out;
  if (!fs::is_regular_file(log_path)) {
    throw Error(ErrorCode::StorageFailure, "event log is not a regular file", log_path.string());
  }
  auto data = slurp(log_path);

  std::size_t pos = 0;
  std::size_t line = 0;
  while (pos < data.size()) {
    auto nl = data.find('\n', pos);
    ++line;
    if (nl == std::string::npos) {
      out.torn_tail_dropped = true;
      fs::resize_file(log_path, pos);
      break;
    }
    std::string_view text(data.data() + pos, nl - pos);
    pos = nl + 1;
    if (text.empty()) continue;
    try {
      out.events.push_back({line, json::parse(text)});
    } catch (const json::exception& e) {
      throw LineError(ErrorCode::CorruptState, line, std::string("unreadable event: ") + e.what());
    }
  }
  return out;
}

std::unique_ptr<Workspace> open_workspace(const fs::path& dir, WorkspaceOptions options, bool durable) {
  options.sink.reset();
  auto ws = std::make_unique<Workspace>(std::move(options));
  if (fs::exists(dir)) {
    auto rec = FileJournal::recover(dir);
    if (rec.snapshot) {
      try {
        ws->load_snapshot(*rec.snapshot);
      } catch (const std::exception& e) {
        throw Error(ErrorCode::CorruptState, std::string("snapshot: ") + e.what(), (dir / FileJournal::kSnapshotFile).string());
      }
    }
    for (const auto& entry : rec.events) {
      try {
        auto seq = entry.event.at("seq").get<std::uint64_t>();
        if (seq > ws->sequence() + 1) {
          throw Error(ErrorCode::CorruptState, "sequence gap before event " + std::to_string(seq));
        }
        ws->replay(entry.event);
      } catch (const std::exception& e) {
        throw LineError(ErrorCode::CorruptState, entry.line, std::string("cannot replay event: ") + e.what());
      }
    }
  }
  ws->set_sink(std::make_shared<FileJournal>(dir, durable));
  return ws;
}

}  // namespace curator
