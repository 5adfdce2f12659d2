#include "pbench/service/collection.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "pbench/error.hpp"
#include "pbench/experiment/shuffle.hpp"

namespace pbench {

using nlohmann::json;

std::string_view to_string(SessionState s) noexcept {
  switch (s) {
    case SessionState::Open: return "open";
    case SessionState::Uploaded: return "uploaded";
    case SessionState::Expired: return "expired";
  }
  return "unknown";
}

namespace {

SessionState state_from_string(std::string_view s) {
  if (s == "open") return SessionState::Open;
  if (s == "uploaded") return SessionState::Uploaded;
  if (s == "expired") return SessionState::Expired;
  fail(ErrorKind::InvalidInput, "unknown session state '" + std::string(s) + "'");
}

std::int64_t epoch_ms(std::chrono::system_clock::time_point t) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json session_to_json(const Session& s) {
  return json{{"sessionId", s.id},
              {"experimentId", s.experiment_id},
              {"counter", s.counter},
              {"seed", s.seed},
              {"shuffle", kShuffleAlgorithm},
              {"assignment", s.assignment},
              {"createdAtMs", s.created_at_ms},
              {"state", std::string(to_string(s.state))},
              {"descriptionsUploaded", s.descriptions_uploaded}};
}

Session session_from_json(const json& j) {
  Session s;
  s.id = j.at("sessionId").get<std::string>();
  s.experiment_id = j.at("experimentId").get<std::string>();
  s.counter = j.at("counter").get<std::uint64_t>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.assignment = j.at("assignment").get<std::vector<std::size_t>>();
  s.created_at_ms = j.at("createdAtMs").get<std::int64_t>();
  s.state = state_from_string(j.at("state").get<std::string>());
  s.descriptions_uploaded = j.value("descriptionsUploaded", false);
  return s;
}

}  // namespace

void write_file_atomic(const fs::path& target, std::string_view content, const fs::path& tmp_dir,
                       const std::function<void(const fs::path&)>& before_rename) {
  fs::create_directories(tmp_dir);
  fs::create_directories(target.parent_path());
  const fs::path tmp = tmp_dir / (target.filename().string() + "." + random_token(8) + ".tmp");
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
  if (fd < 0) fail(ErrorKind::Io, "cannot create " + tmp.string() + ": " + std::strerror(errno));
  std::size_t written = 0;
  while (written < content.size()) {
    const auto n = ::write(fd, content.data() + written, content.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      ::close(fd);
      fs::remove(tmp);
      fail(ErrorKind::Io, "write to " + tmp.string() + " failed: " + std::strerror(err));
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0 || ::close(fd) != 0) {
    fs::remove(tmp);
    fail(ErrorKind::Io, "cannot flush " + tmp.string());
  }
  if (before_rename) before_rename(tmp);
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    fail(ErrorKind::Io, "cannot rename into " + target.string() + ": " + ec.message());
  }
}

std::string random_token(std::size_t bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::random_device rd;
  std::string out;
  out.reserve(bytes * 2);
  for (std::size_t i = 0; i < bytes; i += 4) {
    auto word = rd();
    for (std::size_t k = 0; k < 4 && i + k < bytes; ++k) {
      const auto b = static_cast<unsigned char>(word & 0xFF);
      word >>= 8;
      out.push_back(kHex[b >> 4]);
      out.push_back(kHex[b & 0xF]);
    }
  }
  return out;
}

CollectionService::CollectionService(ServiceConfig config, NowFn now) : config_(std::move(config)), now_(std::move(now)) {
  if (!fs::is_directory(config_.experiments_dir)) {
    fail(ErrorKind::Io, "experiments directory " + config_.experiments_dir.string() + " does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(config_.experiments_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto spec = load_experiment(f);
    const auto id = spec.id;
    if (!experiments_.emplace(id, std::move(spec)).second) {
      fail(ErrorKind::InvalidInput, f.string() + ": duplicate experiment id '" + id + "'");
    }
  }

  fs::create_directories(config_.data_dir / "sessions");
  fs::create_directories(config_.data_dir / "results");
  fs::create_directories(config_.data_dir / "tmp");
  // Staged writes that never reached their rename are garbage.
  for (const auto& e : fs::directory_iterator(config_.data_dir / "tmp")) fs::remove_all(e.path());

  for (const auto& e : fs::directory_iterator(config_.data_dir / "sessions")) {
    if (e.path().extension() != ".json") continue;
    Session s;
    try {
      s = session_from_json(json::parse(read_file(e.path())));
    } catch (const json::exception& ex) {
      fail(ErrorKind::InvalidInput, e.path().string() + ": " + ex.what());
    }
    auto& next = counters_[s.experiment_id];
    next = std::max(next, s.counter + 1);
    sessions_.emplace(s.id, std::move(s));
  }
}

std::vector<std::string> CollectionService::experiment_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, spec] : experiments_) ids.push_back(id);
  return ids;
}

const ExperimentSpec& CollectionService::experiment(std::string_view id) const {
  auto it = experiments_.find(id);
  if (it == experiments_.end()) fail(ErrorKind::NotFound, "unknown experiment '" + std::string(id) + "'");
  return it->second;
}

fs::path CollectionService::results_dir(std::string_view experiment_id) const {
  return config_.data_dir / "results" / std::string(experiment_id);
}

fs::path CollectionService::result_path(const Session& s, UploadPart part) const {
  return results_dir(s.experiment_id) / (s.id + (part == UploadPart::Results ? ".csv" : ".descriptions.csv"));
}

void CollectionService::set_before_rename_hook(std::function<void(const fs::path&)> hook) {
  std::lock_guard lock(mutex_);
  before_rename_ = std::move(hook);
}

void CollectionService::persist_session(const Session& s) const {
  write_file_atomic(config_.data_dir / "sessions" / (s.id + ".json"), session_to_json(s).dump(2) + "\n",
                    config_.data_dir / "tmp");
}

Session CollectionService::create_session(std::string_view experiment_id) {
  const auto& spec = experiment(experiment_id);
  Session s;
  {
    std::lock_guard lock(mutex_);
    s.counter = counters_[spec.id]++;
    do {
      s.id = random_token(16);
    } while (sessions_.contains(s.id));
    s.experiment_id = spec.id;
    s.created_at_ms = epoch_ms(now_());
    sessions_.emplace(s.id, s);
  }
  s.seed = mix_seed(spec.seed, s.counter);
  s.assignment = randomize_trials(spec.trials, s.seed);
  {
    std::lock_guard lock(mutex_);
    sessions_[s.id] = s;
  }
  persist_session(s);
  return s;
}

void CollectionService::refresh_expiry(Session& s) const {
  if (s.state != SessionState::Open) return;
  const auto age = epoch_ms(now_()) - s.created_at_ms;
  if (age > std::chrono::duration_cast<std::chrono::milliseconds>(config_.session_ttl).count()) {
    s.state = SessionState::Expired;
  }
}

Session& CollectionService::live_session(std::string_view id) {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) fail(ErrorKind::NotFound, "unknown session '" + std::string(id) + "'");
  const auto before = it->second.state;
  refresh_expiry(it->second);
  if (before != it->second.state) persist_session(it->second);
  if (it->second.state == SessionState::Expired) fail(ErrorKind::Expired, "session '" + std::string(id) + "' has expired");
  return it->second;
}

Session CollectionService::session(std::string_view session_id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) fail(ErrorKind::NotFound, "unknown session '" + std::string(session_id) + "'");
  Session s = it->second;
  refresh_expiry(s);
  return s;
}

UploadTicket CollectionService::presign_upload(std::string_view session_id, UploadPart part) {
  std::lock_guard lock(mutex_);
  Session& s = live_session(session_id);
  if (part == UploadPart::Results && s.state == SessionState::Uploaded) {
    fail(ErrorKind::Conflict, "session '" + s.id + "' already uploaded its results");
  }
  if (part == UploadPart::Descriptions) {
    if (experiment(s.experiment_id).paradigm != Paradigm::Bubble) {
      fail(ErrorKind::InvalidInput, "only bubble sessions upload descriptions");
    }
    if (s.descriptions_uploaded) fail(ErrorKind::Conflict, "session '" + s.id + "' already uploaded its descriptions");
  }

  const auto key = std::pair(s.id, part);
  if (auto it = active_.find(key); it != active_.end()) {
    tickets_.erase(it->second);
    active_.erase(it);
  }
  UploadTicket t;
  t.token = random_token(24);
  t.upload_path = "/uploads/" + t.token;
  t.expires_at = now_() + config_.ticket_ttl;
  t.session_id = s.id;
  t.part = part;
  tickets_.emplace(t.token, TicketState{t});
  active_.emplace(key, t.token);
  return t;
}

void CollectionService::validate_body(const Session& s, UploadPart part, std::string_view body) const {
  const auto& spec = experiment(s.experiment_id);
  const auto schema = part == UploadPart::Descriptions ? ResultSchema::Descriptions : schema_for(spec.paradigm);
  const auto records = parse_results(schema, body);

  auto bad = [](std::size_t row, std::string_view column, const std::string& what) {
    fail(ErrorKind::InvalidInput,
         "result csv: row " + std::to_string(row + 1) + " column (" + std::string(column) + "): " + what);
  };
  auto check_trial = [&](std::size_t row, std::int64_t trial) {
    if (static_cast<std::size_t>(trial) >= s.assignment.size()) {
      bad(row, "trial", "trial " + std::to_string(trial) + " outside assignment of " +
                            std::to_string(s.assignment.size()));
    }
  };
  auto check_image = [&](std::size_t row, const std::string& name) {
    if (!spec.find_stimulus(name)) bad(row, "imageName", "unknown stimulus '" + name + "'");
  };

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const std::string& session_field = std::visit([](const auto& r) -> const std::string& { return r.session; }, rec);
    if (session_field != s.id) bad(i, "session", "expected session '" + s.id + "', got '" + session_field + "'");

    if (const auto* r = std::get_if<FlickerRecord>(&rec)) {
      check_trial(i, r->trial);
      check_image(i, r->image_name);
    } else if (const auto* r = std::get_if<BubbleRecord>(&rec)) {
      check_trial(i, r->trial);
      check_image(i, r->image_name);
      if (static_cast<double>(r->click_index) >= spec.parameter("max-clicks")) {
        bad(i, "clickIndex", "click index " + std::to_string(r->click_index) + " exceeds the click budget");
      }
    } else if (const auto* r = std::get_if<DescriptionRecord>(&rec)) {
      check_image(i, r->image_name);
    } else if (const auto* r = std::get_if<GaugeRecord>(&rec)) {
      check_trial(i, r->trial);
      if (!spec.triangulation || static_cast<std::size_t>(r->point_index) >= spec.triangulation->triangle_count()) {
        bad(i, "pointIndex", "no triangle " + std::to_string(r->point_index));
      }
      if (r->slant_deg < 0 || r->slant_deg > spec.parameter("max-slant-deg")) bad(i, "slantDeg", "slant out of range");
      if (r->tilt_deg < 0 || r->tilt_deg >= 360) bad(i, "tiltDeg", "tilt outside [0, 360)");
    } else if (const auto* r = std::get_if<PerspectiveRecord>(&rec)) {
      check_image(i, r->image_name);
      if (r->kind == AnnotationKind::Figure && r->x1 == r->x2 && r->y1 == r->y2) {
        bad(i, "kind", "zero-length figure segment");
      }
    }
  }
}

StoreAck CollectionService::persist_upload(const std::string& session_id, UploadPart part, std::string_view body,
                                           const std::optional<std::string>& token) {
  // The caller has already claimed (session, part) in in_flight_.
  Session snapshot;
  std::function<void(const fs::path&)> hook;
  {
    std::lock_guard lock(mutex_);
    snapshot = sessions_.at(session_id);
    hook = before_rename_;
  }
  const auto path = result_path(snapshot, part);
  try {
    validate_body(snapshot, part, body);
    write_file_atomic(path, body, config_.data_dir / "tmp", hook);
  } catch (...) {
    std::lock_guard lock(mutex_);
    in_flight_.erase({session_id, part});
    if (token) {
      // Nothing was stored, so the ticket is still good for a corrected upload.
      // A newer presign in the meantime wins.
      if (!active_.contains({session_id, part})) {
        active_[{session_id, part}] = *token;
      } else if (active_.at({session_id, part}) != *token) {
        tickets_.erase(*token);
      }
    }
    throw;
  }

  std::lock_guard lock(mutex_);
  in_flight_.erase({session_id, part});
  if (token) tickets_.erase(*token);
  if (auto it = active_.find({session_id, part}); it != active_.end()) {
    tickets_.erase(it->second);
    active_.erase(it);
  }
  Session& s = sessions_.at(session_id);
  if (part == UploadPart::Results) {
    s.state = SessionState::Uploaded;
  } else {
    s.descriptions_uploaded = true;
  }
  persist_session(s);
  return {s.experiment_id, s.id, path, body.size()};
}

StoreAck CollectionService::store_result(std::string_view token, std::string_view body) {
  std::string session_id;
  UploadPart part = UploadPart::Results;
  {
    std::lock_guard lock(mutex_);
    auto it = tickets_.find(token);
    if (it == tickets_.end()) fail(ErrorKind::NotFound, "unknown or already used upload token");
    const UploadTicket t = it->second.ticket;
    if (now_() > t.expires_at) {
      tickets_.erase(it);
      active_.erase({t.session_id, t.part});
      fail(ErrorKind::Expired, "upload ticket expired; request a new one");
    }
    if (body.size() > config_.max_upload_bytes) {
      fail(ErrorKind::TooLarge, "upload of " + std::to_string(body.size()) + " bytes exceeds the " +
                                    std::to_string(config_.max_upload_bytes) + " byte cap");
    }
    Session& s = live_session(t.session_id);
    if (t.part == UploadPart::Results && s.state == SessionState::Uploaded) fail(ErrorKind::Conflict, "session already uploaded");
    if (t.part == UploadPart::Descriptions && s.descriptions_uploaded) fail(ErrorKind::Conflict, "descriptions already uploaded");
    if (!in_flight_.insert({t.session_id, t.part}).second) fail(ErrorKind::Conflict, "an upload for this session is in progress");
    // Claim the ticket; persist_upload restores it if the body is rejected.
    active_.erase({t.session_id, t.part});
    session_id = t.session_id;
    part = t.part;
  }
  return persist_upload(session_id, part, body, std::string(token));
}

namespace {

void require_size(std::string_view body, std::size_t cap) {
  if (body.size() > cap) {
    fail(ErrorKind::TooLarge, "upload of " + std::to_string(body.size()) + " bytes exceeds the " + std::to_string(cap) +
                                  " byte cap");
  }
}

}  // namespace

StoreAck CollectionService::accept_form_result(std::string_view session_id, std::string_view data_output) {
  require_size(data_output, config_.max_upload_bytes);
  {
    std::lock_guard lock(mutex_);
    Session& s = live_session(session_id);
    if (s.state == SessionState::Uploaded) fail(ErrorKind::Conflict, "session already uploaded");
    if (!in_flight_.insert({s.id, UploadPart::Results}).second) fail(ErrorKind::Conflict, "an upload for this session is in progress");
  }
  return persist_upload(std::string(session_id), UploadPart::Results, data_output, std::nullopt);
}

StoreAck CollectionService::accept_form_descriptions(std::string_view session_id, std::string_view descriptions) {
  require_size(descriptions, config_.max_upload_bytes);
  {
    std::lock_guard lock(mutex_);
    Session& s = live_session(session_id);
    if (experiment(s.experiment_id).paradigm != Paradigm::Bubble) {
      fail(ErrorKind::InvalidInput, "only bubble sessions upload descriptions");
    }
    if (s.descriptions_uploaded) fail(ErrorKind::Conflict, "descriptions already uploaded");
    if (!in_flight_.insert({s.id, UploadPart::Descriptions}).second) fail(ErrorKind::Conflict, "an upload for this session is in progress");
  }
  return persist_upload(std::string(session_id), UploadPart::Descriptions, descriptions, std::nullopt);
}

}  // namespace pbench
