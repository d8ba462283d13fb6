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

#include "tca/conversation.hpp"

#include <chrono>
#include <string>

#include "tca/error.hpp"

namespace tca {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EmptyContent: return "EmptyContent";
        case ErrorCode::IllegalRole: return "IllegalRole";
        case ErrorCode::IndexGap: return "IndexGap";
        case ErrorCode::NegativeInput: return "NegativeInput";
        case ErrorCode::InvalidWeights: return "InvalidWeights";
        case ErrorCode::InvalidThresholds: return "InvalidThresholds";
        case ErrorCode::BackendUnavailable: return "BackendUnavailable";
        case ErrorCode::MalformedBackendReply: return "MalformedBackendReply";
        case ErrorCode::DuplicateSession: return "DuplicateSession";
        case ErrorCode::UnknownSession: return "UnknownSession";
        case ErrorCode::InvalidSessionId: return "InvalidSessionId";
        case ErrorCode::CorruptSnapshot: return "CorruptSnapshot";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::InvalidLexicon: return "InvalidLexicon";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::NonAlternatingRoles: return "NonAlternatingRoles";
        case ErrorCode::InvalidGrid: return "InvalidGrid";
        case ErrorCode::FixtureMissing: return "FixtureMissing";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

std::string_view to_string(Role role) {
    return role == Role::User ? "user" : "assistant";
}

Role parse_role(std::string_view text) {
    if (text == "user") return Role::User;
    if (text == "assistant") return Role::Assistant;
    throw Error(ErrorCode::IllegalRole, "role must be 'user' or 'assistant', got '" +
                                            std::string(text) + "'");
}

TimestampMs now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

bool is_blank(std::string_view text) {
    for (unsigned char c : text) {
        if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f' && c != '\v') {
            return false;
        }
    }
    return true;
}

void validate_turn(const Turn& turn) {
    if (turn.role != Role::User && turn.role != Role::Assistant) {
        throw Error(ErrorCode::IllegalRole, "unknown role value");
    }
    if (is_blank(turn.content)) {
        throw Error(ErrorCode::EmptyContent, std::string(to_string(turn.role)) +
                                                 " turn has no content");
    }
}

void validate_turn(const Turn& turn, Role expected) {
    validate_turn(turn);
    if (turn.role != expected) {
        throw Error(ErrorCode::IllegalRole, "expected a " + std::string(to_string(expected)) +
                                                " turn");
    }
}

void validate_pair(const TurnPair& pair) {
    if (pair.index < 1) {
        throw Error(ErrorCode::IndexGap, "turn index must be >= 1");
    }
    validate_turn(pair.user_turn, Role::User);
    if (pair.assistant_turn) validate_turn(*pair.assistant_turn, Role::Assistant);
}

TurnPair make_pair(int index, std::string user_content,
                   std::optional<std::string> assistant_content,
                   std::optional<TimestampMs> timestamp) {
    TurnPair pair;
    pair.index = index;
    pair.user_turn = Turn{Role::User, std::move(user_content), timestamp};
    if (assistant_content) {
        pair.assistant_turn = Turn{Role::Assistant, std::move(*assistant_content), std::nullopt};
    }
    return pair;
}

Session append_turn_pair(const Session& session, TurnPair pair) {
    const auto expected = static_cast<int>(session.turn_pairs.size()) + 1;
    if (pair.index != expected) {
        throw Error(ErrorCode::IndexGap, "expected turn " + std::to_string(expected) + ", got " +
                                             std::to_string(pair.index));
    }
    validate_pair(pair);
    Session next = session;
    next.turn_pairs.push_back(std::move(pair));
    return next;
}

}  // namespace tca
