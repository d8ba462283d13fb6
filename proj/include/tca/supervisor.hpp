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

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "tca/config.hpp"
#include "tca/intent.hpp"
#include "tca/lexicon.hpp"
#include "tca/store.hpp"

namespace tca {

struct TurnInput {
    std::string user_message;
    std::optional<std::string> assistant_message;
    std::optional<TimestampMs> timestamp;
};

struct TurnOutcome {
    TurnBundle bundle;
    RiskState risk;  // state after this turn
    bool analyzer_unavailable = false;
};

// Upstream model call used in forwarding mode: (session so far, user message) -> reply.
using UpstreamFn = std::function<std::string(const Session&, const std::string&)>;

struct ChatOutcome {
    TurnOutcome outcome;
    bool forwarded = false;
    std::optional<std::string> reply;  // withheld when the full pair is blocked
};

// The assessment pipeline shared by the HTTP gateway and the batch harness:
// patterns, then intent, then risk, then decision, then commit. Calls for one
// session are serialized; distinct sessions run concurrently.
class Supervisor {
public:
    Supervisor(PolicyConfig config, std::shared_ptr<const LexiconSet> lexicons,
               std::shared_ptr<const AnalyzerBackend> backend, std::shared_ptr<SessionStore> store);

    // Loads the configured lexicon and builds the configured analyzer backend.
    static std::shared_ptr<Supervisor> from_config(PolicyConfig config,
                                                   std::shared_ptr<SessionStore> store);

    // Generates an id when none is given. `baseline_domain` seeds the domain baseline.
    std::string create_session(std::optional<std::string> session_id = std::nullopt,
                               std::string baseline_domain = {});

    TurnOutcome assess_turn(const std::string& session_id, const TurnInput& input);

    // Screens the user message alone; forwards to the upstream model only when
    // that is not a block, then assesses and commits the full pair. A blocked
    // pre-screen is committed as a user-only pair.
    ChatOutcome chat_turn(const std::string& session_id, const std::string& user_message,
                          const UpstreamFn& upstream);

    SessionRecord record(const std::string& session_id) const { return store_->snapshot(session_id); }

    const PolicyConfig& config() const { return config_; }
    const LexiconSet& lexicons() const { return *lexicons_; }
    SessionStore& store() { return *store_; }

private:
    TurnOutcome evaluate(const SessionRecord& record, const TurnInput& input) const;
    std::shared_ptr<std::mutex> session_lock(const std::string& session_id);

    PolicyConfig config_;
    DecisionPolicy policy_;
    std::shared_ptr<const LexiconSet> lexicons_;
    std::shared_ptr<const AnalyzerBackend> backend_;
    std::shared_ptr<SessionStore> store_;

    std::mutex locks_mutex_;
    std::map<std::string, std::shared_ptr<std::mutex>> session_locks_;
};

std::shared_ptr<const AnalyzerBackend> make_backend(const PolicyConfig& config,
                                                    std::shared_ptr<const LexiconSet> lexicons);

// Recomputes a committed turn's decision from its stored bundle alone.
Decision recompute_decision(const SessionRecord& record, std::size_t turn, const PolicyConfig& config);

}  // namespace tca
