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

#include "tca/supervisor.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "tca/error.hpp"

namespace tca {
namespace {

std::string random_session_id() {
    thread_local std::mt19937_64 rng{std::random_device{}()};
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
    return buf;
}

IntentAssessment fail_closed_assessment(const AnalyzerBackend& backend) {
    IntentAssessment a;
    a.risk = kMaxInteractionRisk;
    a.intent_class = IntentClass::Critical;
    a.concerns = {std::string(kAnalyzerUnavailable)};
    a.analyzer_id = backend.id();
    return a;
}

bool has_concern(const IntentAssessment& a, std::string_view concern) {
    return std::find(a.concerns.begin(), a.concerns.end(), concern) != a.concerns.end();
}

}  // namespace

std::shared_ptr<const AnalyzerBackend> make_backend(const PolicyConfig& config,
                                                    std::shared_ptr<const LexiconSet> lexicons) {
    if (config.analyzer == AnalyzerKind::Remote) {
        return std::make_shared<RemoteAnalyzer>(config.remote);
    }
    return std::make_shared<HeuristicAnalyzer>(std::move(lexicons), heuristic_params(config));
}

Supervisor::Supervisor(PolicyConfig config, std::shared_ptr<const LexiconSet> lexicons,
                       std::shared_ptr<const AnalyzerBackend> backend,
                       std::shared_ptr<SessionStore> store)
    : config_(std::move(config)),
      policy_(decision_policy(config_)),
      lexicons_(std::move(lexicons)),
      backend_(std::move(backend)),
      store_(std::move(store)) {
    validate(config_);
}

std::shared_ptr<Supervisor> Supervisor::from_config(PolicyConfig config,
                                                    std::shared_ptr<SessionStore> store) {
    validate(config);
    auto lexicons = std::make_shared<const LexiconSet>(load_lexicon(resolved_lexicon_path(config)));
    auto backend = make_backend(config, lexicons);
    return std::make_shared<Supervisor>(std::move(config), std::move(lexicons), std::move(backend),
                                        std::move(store));
}

std::string Supervisor::create_session(std::optional<std::string> session_id,
                                       std::string baseline_domain) {
    auto initial = seeded_metadata(std::move(baseline_domain));
    if (session_id) return store_->create(*session_id, initial).session.session_id;
    for (;;) {
        try {
            return store_->create(random_session_id(), initial).session.session_id;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DuplicateSession) throw;
        }
    }
}

TurnOutcome Supervisor::evaluate(const SessionRecord& record, const TurnInput& input) const {
    const int index = static_cast<int>(record.turns()) + 1;
    TurnPair pair = make_pair(index, input.user_message, input.assistant_message, input.timestamp);
    validate_pair(pair);

    TurnOutcome out;
    auto& b = out.bundle;

    auto patterns = detect_patterns(record.metadata, pair, *lexicons_, pattern_params(config_));
    b.flags = patterns.flags;
    b.metadata = std::move(patterns.state);

    AnalyzerContext ctx;
    const auto& prior = record.session.turn_pairs;
    const auto keep = std::min(prior.size(), static_cast<std::size_t>(config_.window));
    ctx.prior_pairs.assign(prior.end() - static_cast<std::ptrdiff_t>(keep), prior.end());
    ctx.prior_risk = record.risk.current;
    ctx.session_domain = b.metadata.baseline_domain;
    try {
        b.assessment = analyze_intent(ctx, pair, *backend_);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::EmptyContent || e.code() == ErrorCode::IllegalRole) throw;
        b.assessment = fail_closed_assessment(*backend_);
        out.analyzer_unavailable = true;
    } catch (const std::exception&) {
        b.assessment = fail_closed_assessment(*backend_);
        out.analyzer_unavailable = true;
    }

    const double p = pattern_risk(b.flags, config_.pattern_weights);
    out.risk = update_tracker(record.risk, index, b.assessment.risk, p, config_.weights,
                              trend_params(config_));
    b.risk_record = out.risk.history.back();

    AssessmentBundle ab{index, b.assessment, b.flags, out.risk, out.analyzer_unavailable};
    b.decision = decide_turn(ab, policy_);
    b.pair = std::move(pair);
    return out;
}

TurnOutcome Supervisor::assess_turn(const std::string& session_id, const TurnInput& input) {
    auto lock_ptr = session_lock(session_id);
    std::lock_guard lock(*lock_ptr);
    auto outcome = evaluate(store_->snapshot(session_id), input);
    store_->commit_turn(session_id, outcome.bundle);
    return outcome;
}

ChatOutcome Supervisor::chat_turn(const std::string& session_id, const std::string& user_message,
                                  const UpstreamFn& upstream) {
    auto lock_ptr = session_lock(session_id);
    std::lock_guard lock(*lock_ptr);
    const auto record = store_->snapshot(session_id);
    const TurnInput screen{user_message, std::nullopt, now_ms()};

    ChatOutcome chat;
    chat.outcome = evaluate(record, screen);
    if (chat.outcome.bundle.decision.verdict == Verdict::Block) {
        store_->commit_turn(session_id, chat.outcome.bundle);
        return chat;
    }

    auto reply = upstream(record.session, user_message);
    chat.forwarded = true;
    chat.outcome = evaluate(record, {user_message, reply, screen.timestamp});
    store_->commit_turn(session_id, chat.outcome.bundle);
    if (chat.outcome.bundle.decision.verdict != Verdict::Block) chat.reply = std::move(reply);
    return chat;
}

std::shared_ptr<std::mutex> Supervisor::session_lock(const std::string& session_id) {
    std::lock_guard guard(locks_mutex_);
    auto& slot = session_locks_[session_id];
    if (!slot) slot = std::make_shared<std::mutex>();
    return slot;
}

Decision recompute_decision(const SessionRecord& record, std::size_t turn, const PolicyConfig& config) {
    if (turn >= record.turns()) throw Error(ErrorCode::IndexGap, "no such committed turn");
    RiskState risk;
    risk.history.assign(record.risk.history.begin(),
                        record.risk.history.begin() + static_cast<std::ptrdiff_t>(turn) + 1);
    risk.current = risk.history.back().risk;
    risk.trend = risk_trend(std::span<const RiskRecord>(risk.history), trend_params(config));
    const auto& a = record.assessments[turn];
    AssessmentBundle ab{static_cast<int>(turn) + 1, a, record.flags[turn], risk,
                        has_concern(a, kAnalyzerUnavailable)};
    return decide_turn(ab, decision_policy(config));
}

}  // namespace tca
