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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tca {

enum class Role { User, Assistant };

std::string_view to_string(Role role);
// Throws Error(IllegalRole) for anything but "user" / "assistant".
Role parse_role(std::string_view text);

// Milliseconds since the Unix epoch, UTC.
using TimestampMs = std::int64_t;

TimestampMs now_ms();

struct Turn {
    Role role = Role::User;
    std::string content;
    std::optional<TimestampMs> timestamp;

    bool operator==(const Turn&) const = default;
};

// One user request plus the model's reply. The reply is absent when a message
// is screened before it reaches the protected model.
struct TurnPair {
    int index = 1;
    Turn user_turn;
    std::optional<Turn> assistant_turn;

    bool operator==(const TurnPair&) const = default;
};

struct Session {
    std::string session_id;
    std::vector<TurnPair> turn_pairs;
    TimestampMs created_at = 0;

    bool operator==(const Session&) const = default;
};

bool is_blank(std::string_view text);

// Throws EmptyContent or IllegalRole.
void validate_turn(const Turn& turn);
void validate_turn(const Turn& turn, Role expected);
void validate_pair(const TurnPair& pair);

TurnPair make_pair(int index, std::string user_content,
                   std::optional<std::string> assistant_content = std::nullopt,
                   std::optional<TimestampMs> timestamp = std::nullopt);

// Returns a new session with `pair` at the tail. Throws IndexGap when
// pair.index != size + 1, EmptyContent / IllegalRole for invalid turns.
Session append_turn_pair(const Session& session, TurnPair pair);

}  // namespace tca
