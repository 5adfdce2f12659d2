#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pbench/experiment/results.hpp"
#include "pbench/experiment/spec.hpp"

namespace pbench {

namespace fs = std::filesystem;

struct ServiceConfig {
  fs::path data_dir;
  fs::path experiments_dir;
  std::chrono::seconds ticket_ttl{15 * 60};
  std::chrono::seconds session_ttl{24 * 60 * 60};
  std::size_t max_upload_bytes = 5 * 1024 * 1024;
};

enum class SessionState { Open, Uploaded, Expired };
std::string_view to_string(SessionState s) noexcept;

struct Session {
  std::string id;
  std::string experiment_id;
  std::uint64_t counter = 0;
  std::uint64_t seed = 0;  // seed the assignment was drawn with
  std::vector<std::size_t> assignment;
  std::int64_t created_at_ms = 0;  // unix epoch
  SessionState state = SessionState::Open;
  bool descriptions_uploaded = false;
};

/// Which file of a session an upload targets. Bubble sessions carry a
/// descriptions sidecar next to their click records.
enum class UploadPart { Results, Descriptions };

struct UploadTicket {
  std::string token;
  std::string upload_path;  // "/uploads/<token>", relative to the service origin
  std::chrono::system_clock::time_point expires_at;
  std::string session_id;
  UploadPart part = UploadPart::Results;
};

struct StoreAck {
  std::string experiment_id;
  std::string session_id;
  fs::path path;
  std::size_t bytes = 0;
};

/// Writes `content` to `target` through a temporary file in `tmp_dir` and a
/// rename, so readers of `target`'s directory never observe a partial file.
/// `before_rename`, if set, runs between the write and the rename.
void write_file_atomic(const fs::path& target, std::string_view content, const fs::path& tmp_dir,
                       const std::function<void(const fs::path&)>& before_rename = {});

/// 128+ bit random token, lowercase hex.
std::string random_token(std::size_t bytes = 24);

/// Experiment catalogue, sessions, upload tickets and result persistence.
///
/// Layout under data_dir:
///   sessions/<sessionId>.json
///   results/<experimentId>/<sessionId>.csv
///   results/<experimentId>/<sessionId>.descriptions.csv   (bubble)
///   tmp/                                                    (staging for renames)
///
/// Thread-safe. The session counters and the ticket table are guarded by one
/// mutex; file writes happen outside it.
class CollectionService {
 public:
  using Clock = std::chrono::system_clock;
  using NowFn = std::function<Clock::time_point()>;

  /// Loads every *.json under experiments_dir (lexicographic order). Throws
  /// InvalidInput naming the offending file, or Io if the directory is missing.
  explicit CollectionService(ServiceConfig config, NowFn now = [] { return Clock::now(); });

  const ServiceConfig& config() const noexcept { return config_; }
  std::vector<std::string> experiment_ids() const;
  /// Throws NotFound.
  const ExperimentSpec& experiment(std::string_view id) const;

  Session create_session(std::string_view experiment_id);
  Session session(std::string_view session_id) const;

  /// Issues a fresh ticket for the session part, invalidating any earlier
  /// unused one. Throws NotFound, Expired, or Conflict (already uploaded).
  UploadTicket presign_upload(std::string_view session_id, UploadPart part = UploadPart::Results);

  /// Validates `body` against the paradigm schema and persists it verbatim.
  /// Tickets are single use. Throws NotFound (unknown/replayed token), Expired,
  /// TooLarge, or InvalidInput with a row/column diagnostic.
  StoreAck store_result(std::string_view token, std::string_view body);

  /// Single-step path mirroring a form post of the `dataOutput` field.
  StoreAck accept_form_result(std::string_view session_id, std::string_view data_output);
  StoreAck accept_form_descriptions(std::string_view session_id, std::string_view descriptions);

  fs::path results_dir(std::string_view experiment_id) const;
  fs::path result_path(const Session& s, UploadPart part) const;

  /// Test seam: runs after the temporary file is written and before the rename.
  void set_before_rename_hook(std::function<void(const fs::path&)> hook);

 private:
  struct TicketState {
    UploadTicket ticket;
  };

  Session& live_session(std::string_view id);  // caller holds mutex_
  void refresh_expiry(Session& s) const;        // caller holds mutex_
  void persist_session(const Session& s) const;
  void validate_body(const Session& s, UploadPart part, std::string_view body) const;
  StoreAck persist_upload(const std::string& session_id, UploadPart part, std::string_view body,
                          const std::optional<std::string>& token);

  ServiceConfig config_;
  NowFn now_;
  std::map<std::string, ExperimentSpec, std::less<>> experiments_;

  mutable std::mutex mutex_;
  std::map<std::string, std::uint64_t, std::less<>> counters_;  // experiment -> next counter
  std::map<std::string, Session, std::less<>> sessions_;
  std::map<std::string, TicketState, std::less<>> tickets_;            // token -> ticket
  std::map<std::pair<std::string, UploadPart>, std::string> active_;   // (session, part) -> token
  std::set<std::pair<std::string, UploadPart>> in_flight_;
  std::function<void(const fs::path&)> before_rename_;
};

}  // namespace pbench
