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

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "tca/conversation.hpp"
#include "tca/decision.hpp"
#include "tca/intent.hpp"
#include "tca/patterns.hpp"
#include "tca/risk.hpp"
#include "tca/serialization.hpp"

namespace tca {

// Everything one assessed turn contributes to a session, committed as a unit.
struct TurnBundle {
    TurnPair pair;
    PatternFlags flags;
    IntentAssessment assessment;
    RiskRecord risk_record;
    Decision decision;
    MetadataState metadata;  // metadata state after this turn

    bool operator==(const TurnBundle&) const = default;
};

// Invariant: decisions, flags, assessments, session.turn_pairs and
// risk.history all have the same length.
struct SessionRecord {
    Session session;
    MetadataState metadata;
    RiskState risk;
    std::vector<Decision> decisions;
    std::vector<PatternFlags> flags;
    std::vector<IntentAssessment> assessments;
    TimestampMs updated_at = 0;

    std::size_t turns() const { return session.turn_pairs.size(); }
    bool operator==(const SessionRecord&) const = default;
};

// Pure: returns `record` extended by `bundle`. Throws IndexGap when the pair,
// risk record or decision index is not the next turn.
SessionRecord apply_bundle(const SessionRecord& record, const TurnBundle& bundle);

json to_json(const TurnBundle& bundle);
TurnBundle bundle_from_json(const json& j);
json to_json(const SessionRecord& record);
SessionRecord record_from_json(const json& j);

// Letters, digits, '.', '_' and '-'; 1-128 chars; no leading '.'.
bool valid_session_id(std::string_view id);

// Test hook for crash injection. A hook that throws aborts the commit at that point.
enum class FaultPoint { BeforeAppend, MidAppend, AfterAppend };
using FaultHook = std::function<void(FaultPoint)>;

// Thread-safe across sessions; commits to one session are serialized.
// With a directory, every session is an append-only JSONL log: a header line
// then one line per committed turn.
class SessionStore {
public:
    static std::shared_ptr<SessionStore> in_memory();
    // Loads every session log in `dir`, dropping a torn final line if present.
    static std::shared_ptr<SessionStore> open_directory(const std::filesystem::path& dir);
    // Reads a snapshot written by write_snapshot into a new in-memory store.
    static std::shared_ptr<SessionStore> restore(const std::filesystem::path& snapshot_path);

    SessionRecord create(const std::string& session_id, MetadataState initial = {});
    SessionRecord commit_turn(const std::string& session_id, const TurnBundle& bundle);
    SessionRecord snapshot(const std::string& session_id) const;

    bool contains(const std::string& session_id) const;
    std::vector<std::string> session_ids() const;
    std::size_t size() const;

    // JSON array of SessionRecord, written to a temp file and renamed into place.
    void write_snapshot(const std::filesystem::path& path) const;

    void set_fault_hook(FaultHook hook) { fault_hook_ = std::move(hook); }

    bool operator==(const SessionStore& other) const;

private:
    struct Entry {
        mutable std::mutex mutex;
        SessionRecord record;
    };

    SessionStore() = default;
    std::shared_ptr<Entry> find(const std::string& session_id) const;
    std::filesystem::path log_path(const std::string& session_id) const;
    void append_line(const std::filesystem::path& path, const std::string& line) const;
    void fault(FaultPoint point) const;

    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<Entry>> entries_;
    std::filesystem::path dir_;  // empty for the in-memory backend
    FaultHook fault_hook_;
};

}  // namespace tca
