// Copyright 2026 The TCA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tca/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "tca/error.hpp"

namespace tca {
namespace {

[[noreturn]] void io_error(const std::string& what, const std::filesystem::path& path) {
    throw Error(ErrorCode::IoError, what + " " + path.string() + ": " + std::strerror(errno));
}

void write_all(int fd, std::string_view data, const std::filesystem::path& path) {
    while (!data.empty()) {
        const auto n = ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) continue;
            io_error("write failed for", path);
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

class Fd {
public:
    Fd(const std::filesystem::path& path, int flags) : fd_(::open(path.c_str(), flags, 0644)) {
        if (fd_ < 0) io_error("cannot open", path);
    }
    ~Fd() {
        if (fd_ >= 0) ::close(fd_);
    }
    Fd(const Fd&) = delete;
    Fd& operator=(const Fd&) = delete;
    int get() const { return fd_; }

private:
    int fd_;
};

void check_record(const SessionRecord& r) {
    const auto n = r.session.turn_pairs.size();
    if (r.decisions.size() != n || r.flags.size() != n || r.assessments.size() != n ||
        r.risk.history.size() != n) {
        throw Error(ErrorCode::CorruptSnapshot,
                    "session '" + r.session.session_id + "' has mismatched per-turn lengths");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const int t = static_cast<int>(i) + 1;
        if (r.session.turn_pairs[i].index != t || r.risk.history[i].t != t ||
            r.decisions[i].turn_index != t) {
            throw Error(ErrorCode::CorruptSnapshot,
                        "session '" + r.session.session_id + "' has non-consecutive turn indices");
        }
    }
}

}  // namespace

SessionRecord apply_bundle(const SessionRecord& record, const TurnBundle& bundle) {
    const int next_index = static_cast<int>(record.turns()) + 1;
    if (bundle.risk_record.t != next_index || bundle.decision.turn_index != next_index) {
        throw Error(ErrorCode::IndexGap, "bundle for turn " + std::to_string(bundle.pair.index) +
                                             " carries mismatched risk/decision indices");
    }
    SessionRecord next = record;
    next.session = append_turn_pair(record.session, bundle.pair);
    next.metadata = bundle.metadata;
    next.risk.history.push_back(bundle.risk_record);
    next.risk.current = bundle.risk_record.risk;
    next.risk.trend = bundle.decision.contributing.trend;
    next.decisions.push_back(bundle.decision);
    next.flags.push_back(bundle.flags);
    next.assessments.push_back(bundle.assessment);
    return next;
}

json to_json(const TurnBundle& b) {
    return {{"pair", to_json(b.pair)},
            {"flags", to_json(b.flags)},
            {"assessment", to_json(b.assessment)},
            {"risk_record", to_json(b.risk_record, Reals::Decimal)},
            {"decision", to_json(b.decision, Reals::Decimal)},
            {"metadata", to_json(b.metadata)}};
}

TurnBundle bundle_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "turn bundle must be an object");
    TurnBundle b;
    b.pair = pair_from_json(j.at("pair"));
    b.flags = flags_from_json(j.at("flags"));
    b.assessment = assessment_from_json(j.at("assessment"));
    b.risk_record = risk_record_from_json(j.at("risk_record"));
    b.decision = decision_from_json(j.at("decision"));
    b.metadata = metadata_from_json(j.at("metadata"));
    return b;
}

json to_json(const SessionRecord& r) {
    json decisions = json::array();
    for (const auto& d : r.decisions) decisions.push_back(to_json(d, Reals::Decimal));
    json flags = json::array();
    for (const auto& f : r.flags) flags.push_back(to_json(f));
    json assessments = json::array();
    for (const auto& a : r.assessments) assessments.push_back(to_json(a));
    return {{"session", to_json(r.session)},
            {"metadata", to_json(r.metadata)},
            {"risk", to_json(r.risk, Reals::Decimal)},
            {"decisions", std::move(decisions)},
            {"flags", std::move(flags)},
            {"assessments", std::move(assessments)},
            {"updated_at_ms", r.updated_at}};
}

SessionRecord record_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, "session record must be an object");
    SessionRecord r;
    r.session = session_from_json(j.at("session"));
    r.metadata = metadata_from_json(j.at("metadata"));
    r.risk = risk_state_from_json(j.at("risk"));
    for (const auto& d : j.at("decisions")) r.decisions.push_back(decision_from_json(d));
    for (const auto& f : j.at("flags")) r.flags.push_back(flags_from_json(f));
    for (const auto& a : j.at("assessments")) r.assessments.push_back(assessment_from_json(a));
    r.updated_at = j.at("updated_at_ms").get<TimestampMs>();
    return r;
}

bool valid_session_id(std::string_view id) {
    if (id.empty() || id.size() > 128 || id.front() == '.') return false;
    for (unsigned char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '.' || c == '_' || c == '-';
        if (!ok) return false;
    }
    return true;
}

std::shared_ptr<SessionStore> SessionStore::in_memory() {
    return std::shared_ptr<SessionStore>(new SessionStore());
}

std::shared_ptr<SessionStore> SessionStore::open_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create store directory " + dir.string());

    auto store = std::shared_ptr<SessionStore>(new SessionStore());
    store->dir_ = dir;

    std::vector<std::filesystem::path> logs;
    for (const auto& item : std::filesystem::directory_iterator(dir)) {
        if (item.is_regular_file() && item.path().extension() == ".jsonl") logs.push_back(item.path());
    }
    std::sort(logs.begin(), logs.end());

    for (const auto& path : logs) {
        std::ifstream in(path, std::ios::binary);
        const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

        std::vector<json> lines;
        std::size_t good_end = 0;
        std::size_t pos = 0;
        while (pos < content.size()) {
            const auto nl = content.find('\n', pos);
            const bool complete = nl != std::string::npos;
            const auto line = content.substr(pos, complete ? nl - pos : std::string::npos);
            auto parsed = json::parse(line, nullptr, false);
            if (!complete || parsed.is_discarded()) {
                if (complete && nl + 1 < content.size()) {
                    throw Error(ErrorCode::CorruptSnapshot, path.string() + ": unreadable line in the middle of the log");
                }
                break;  // torn tail from an interrupted append
            }
            lines.push_back(std::move(parsed));
            pos = nl + 1;
            good_end = pos;
        }
        if (good_end < content.size()) {
            if (::truncate(path.c_str(), static_cast<off_t>(good_end)) != 0) io_error("cannot truncate", path);
        }
        if (lines.empty()) continue;

        try {
            const auto& header = lines.front();
            if (header.value("type", "") != "session") {
                throw Error(ErrorCode::CorruptSnapshot, path.string() + ": first line is not a session header");
            }
            auto entry = std::make_shared<Entry>();
            auto& rec = entry->record;
            rec.session.session_id = header.at("session_id").get<std::string>();
            rec.session.created_at = header.at("created_at_ms").get<TimestampMs>();
            rec.metadata = metadata_from_json(header.at("metadata"));
            rec.updated_at = rec.session.created_at;
            for (std::size_t i = 1; i < lines.size(); ++i) {
                rec = apply_bundle(rec, bundle_from_json(lines[i]));
                rec.updated_at = lines[i].at("committed_at_ms").get<TimestampMs>();
            }
            store->entries_.emplace(rec.session.session_id, std::move(entry));
        } catch (const Error& e) {
            if (e.code() == ErrorCode::CorruptSnapshot) throw;
            throw Error(ErrorCode::CorruptSnapshot, path.string() + ": " + e.what());
        } catch (const json::exception& e) {
            throw Error(ErrorCode::CorruptSnapshot, path.string() + ": " + e.what());
        }
    }
    return store;
}

std::shared_ptr<SessionStore> SessionStore::restore(const std::filesystem::path& snapshot_path) {
    std::ifstream in(snapshot_path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open snapshot " + snapshot_path.string());
    auto doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) {
        throw Error(ErrorCode::CorruptSnapshot, snapshot_path.string() + ": not a JSON array of session records");
    }
    auto store = std::shared_ptr<SessionStore>(new SessionStore());
    for (const auto& item : doc) {
        SessionRecord record;
        try {
            record = record_from_json(item);
        } catch (const std::exception& e) {
            throw Error(ErrorCode::CorruptSnapshot, snapshot_path.string() + ": " + e.what());
        }
        check_record(record);
        auto entry = std::make_shared<Entry>();
        const auto id = record.session.session_id;
        entry->record = std::move(record);
        if (!store->entries_.emplace(id, std::move(entry)).second) {
            throw Error(ErrorCode::CorruptSnapshot, "duplicate session '" + id + "' in snapshot");
        }
    }
    return store;
}

SessionRecord SessionStore::create(const std::string& session_id, MetadataState initial) {
    if (!valid_session_id(session_id)) {
        throw Error(ErrorCode::InvalidSessionId, "session id '" + session_id + "' is not allowed");
    }
    std::unique_lock lock(mutex_);
    if (entries_.count(session_id)) {
        throw Error(ErrorCode::DuplicateSession, "session '" + session_id + "' already exists");
    }
    auto entry = std::make_shared<Entry>();
    auto& rec = entry->record;
    rec.session.session_id = session_id;
    rec.session.created_at = now_ms();
    rec.updated_at = rec.session.created_at;
    rec.metadata = std::move(initial);
    if (!dir_.empty()) {
        const auto path = log_path(session_id);
        if (std::filesystem::exists(path)) {
            throw Error(ErrorCode::DuplicateSession, "session log " + path.string() + " already exists");
        }
        json header{{"type", "session"},
                    {"session_id", session_id},
                    {"created_at_ms", rec.session.created_at},
                    {"metadata", to_json(rec.metadata)}};
        append_line(path, header.dump() + "\n");
    }
    entries_.emplace(session_id, entry);
    return rec;
}

SessionRecord SessionStore::commit_turn(const std::string& session_id, const TurnBundle& bundle) {
    auto entry = find(session_id);
    std::lock_guard lock(entry->mutex);
    SessionRecord next = apply_bundle(entry->record, bundle);
    next.updated_at = now_ms();

    fault(FaultPoint::BeforeAppend);
    if (dir_.empty()) {
        fault(FaultPoint::AfterAppend);
    } else {
        auto line = to_json(bundle);
        line["type"] = "turn";
        line["committed_at_ms"] = next.updated_at;
        const auto text = line.dump() + "\n";
        const auto path = log_path(session_id);
        std::error_code ec;
        const auto size_before = std::filesystem::file_size(path, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot stat session log " + path.string());
        try {
            if (fault_hook_) {
                // Split the write so a crash can be injected with half a line on disk.
                append_line(path, text.substr(0, text.size() / 2));
                fault(FaultPoint::MidAppend);
                append_line(path, text.substr(text.size() / 2));
            } else {
                append_line(path, text);
            }
            fault(FaultPoint::AfterAppend);
        } catch (...) {
            // Roll the log back so the next commit does not land after a torn line.
            if (::truncate(path.c_str(), static_cast<off_t>(size_before)) != 0) {
                io_error("cannot roll back", path);
            }
            throw;
        }
    }

    entry->record = std::move(next);
    return entry->record;
}

SessionRecord SessionStore::snapshot(const std::string& session_id) const {
    auto entry = find(session_id);
    std::lock_guard lock(entry->mutex);
    return entry->record;
}

bool SessionStore::contains(const std::string& session_id) const {
    std::shared_lock lock(mutex_);
    return entries_.count(session_id) > 0;
}

std::vector<std::string> SessionStore::session_ids() const {
    std::shared_lock lock(mutex_);
    std::vector<std::string> ids;
    ids.reserve(entries_.size());
    for (const auto& [id, _] : entries_) ids.push_back(id);
    return ids;
}

std::size_t SessionStore::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

void SessionStore::write_snapshot(const std::filesystem::path& path) const {
    json doc = json::array();
    for (const auto& id : session_ids()) doc.push_back(to_json(snapshot(id)));

    auto tmp = path;
    tmp += ".tmp";
    {
        Fd fd(tmp, O_WRONLY | O_CREAT | O_TRUNC);
        write_all(fd.get(), doc.dump(), tmp);
        if (::fsync(fd.get()) != 0) io_error("fsync failed for", tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot move snapshot into place at " + path.string());
}

bool SessionStore::operator==(const SessionStore& other) const {
    const auto ids = session_ids();
    if (ids != other.session_ids()) return false;
    for (const auto& id : ids) {
        if (!(snapshot(id) == other.snapshot(id))) return false;
    }
    return true;
}

std::shared_ptr<SessionStore::Entry> SessionStore::find(const std::string& session_id) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(session_id);
    if (it == entries_.end()) {
        throw Error(ErrorCode::UnknownSession, "no session '" + session_id + "'");
    }
    return it->second;
}

std::filesystem::path SessionStore::log_path(const std::string& session_id) const {
    return dir_ / (session_id + ".jsonl");
}

void SessionStore::append_line(const std::filesystem::path& path, const std::string& line) const {
    Fd fd(path, O_WRONLY | O_CREAT | O_APPEND);
    write_all(fd.get(), line, path);
    if (::fdatasync(fd.get()) != 0) io_error("fdatasync failed for", path);
}

void SessionStore::fault(FaultPoint point) const {
    if (fault_hook_) fault_hook_(point);
}

}  // namespace tca
