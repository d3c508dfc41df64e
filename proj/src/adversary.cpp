#include "swapsim/adversary.hpp"

#include <algorithm>
#include <set>

namespace swapsim {

namespace {

using ordered_json = nlohmann::ordered_json;

std::optional<Secret> resolve_secret_spec(const std::string& spec,
                                          const std::map<std::string, Secret>& own,
                                          const WorldView& view) {
    if (spec.rfind("own:", 0) == 0) {
        auto it = own.find(spec.substr(4));
        if (it == own.end()) return std::nullopt;
        return it->second;
    }
    if (spec.rfind("public:", 0) == 0) {
        auto bytes = from_hex(spec.substr(7));
        if (!bytes) return std::nullopt;
        return view.public_secret(Hashlock{*bytes});
    }
    if (spec.rfind("literal:", 0) == 0) {
        auto bytes = from_hex(spec.substr(8));
        if (!bytes) return std::nullopt;
        return Secret{*bytes};
    }
    return std::nullopt;
}

ScriptStep make_extra_step(const PartyId& party, const ExtraEdit& extra,
                           const std::map<std::string, Secret>& own_secrets,
                           std::size_t index) {
    ScriptStep step;
    step.name = "extra:" + extra.kind + "#" + std::to_string(index);
    step.party = party;
    step.round = extra.round;
    step.chain = extra.chain;
    step.claim_like = extra.kind == "claim" || extra.kind == "redeem";
    step.target = extra.target;
    ExtraEdit spec = extra;
    std::map<std::string, Secret> own = own_secrets;
    step.build = [spec, own, party](const WorldView& view) -> std::optional<Action> {
        if (spec.kind == "refund") {
            return RefundAction{spec.target};
        }
        if (spec.kind == "deposit_premium") {
            return PremiumDepositAction{spec.target, PremiumLeg::Premium};
        }
        if (spec.kind == "deposit_principal") {
            return PremiumDepositAction{spec.target, PremiumLeg::Principal};
        }
        if (spec.kind == "claim" || spec.kind == "redeem") {
            auto secret = resolve_secret_spec(spec.secret_spec, own, view);
            if (!secret) return std::nullopt;
            if (spec.kind == "claim") return ClaimAction{spec.target, *secret};
            return PremiumRedeemAction{spec.target, *secret};
        }
        if (spec.kind == "add_clause") {
            auto secret = resolve_secret_spec(spec.secret_spec, own, view);
            if (!secret) return std::nullopt;
            Clause clause{party, hashlock(*secret), spec.clause_deadline, std::nullopt};
            return AddClauseAction{spec.target, clause};
        }
        return std::nullopt;
    };
    return step;
}

}  // namespace

ordered_json strategy_to_json(const Strategy& strategy) {
    ordered_json j;
    j["party"] = strategy.party;
    if (!strategy.label.empty()) j["label"] = strategy.label;
    ordered_json edits = ordered_json::array();
    for (const Edit& edit : strategy.edits) {
        ordered_json e;
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, OmitEdit>) {
                    e["type"] = "omit";
                    e["step"] = v.step;
                } else if constexpr (std::is_same_v<T, DelayEdit>) {
                    e["type"] = "delay";
                    e["step"] = v.step;
                    e["round"] = v.to_round;
                } else {
                    e["type"] = "extra";
                    e["round"] = v.round;
                    e["chain"] = v.chain;
                    e["kind"] = v.kind;
                    e["target"] = v.target;
                    if (!v.secret_spec.empty()) e["secret"] = v.secret_spec;
                    if (v.clause_deadline != 0) e["clause_deadline"] = v.clause_deadline;
                }
            },
            edit);
        edits.push_back(e);
    }
    j["edits"] = edits;
    return j;
}

Strategy strategy_from_json(const nlohmann::json& j) {
    Strategy strategy;
    strategy.party = j.at("party").get<std::string>();
    strategy.label = j.value("label", std::string{});
    for (const auto& e : j.value("edits", nlohmann::json::array())) {
        const std::string type = e.at("type").get<std::string>();
        if (type == "omit") {
            strategy.edits.push_back(OmitEdit{e.at("step").get<std::string>()});
        } else if (type == "delay") {
            strategy.edits.push_back(
                DelayEdit{e.at("step").get<std::string>(), e.at("round").get<Round>()});
        } else if (type == "extra") {
            ExtraEdit extra;
            extra.round = e.at("round").get<Round>();
            extra.chain = e.at("chain").get<std::string>();
            extra.kind = e.at("kind").get<std::string>();
            extra.target = e.at("target").get<std::string>();
            extra.secret_spec = e.value("secret", std::string{});
            extra.clause_deadline = e.value("clause_deadline", Round{0});
            strategy.edits.push_back(extra);
        } else {
            throw std::invalid_argument("strategy edit: unknown type " + type);
        }
    }
    if (strategy.label.empty()) {
        strategy.label = strategy.edits.empty() ? "compliant" : "edited";
    }
    return strategy;
}

Script apply_strategies(const ProtocolBundle& bundle, const std::vector<Strategy>& strategies) {
    Script script = bundle.script;
    for (const Strategy& strategy : strategies) {
        std::set<std::string> omitted;
        std::map<std::string, Round> delayed;
        for (const Edit& edit : strategy.edits) {
            if (const auto* omit = std::get_if<OmitEdit>(&edit)) {
                omitted.insert(omit->step);
            } else if (const auto* delay = std::get_if<DelayEdit>(&edit)) {
                delayed[delay->step] = delay->to_round;
            }
        }
        std::vector<ScriptStep> kept;
        for (ScriptStep& step : script.steps) {
            if (step.party != strategy.party) {
                kept.push_back(std::move(step));
                continue;
            }
            if (omitted.count(step.name)) continue;
            auto it = delayed.find(step.name);
            if (it != delayed.end()) step.round = it->second;
            kept.push_back(std::move(step));
        }
        script.steps = std::move(kept);

        std::map<std::string, Secret> own;
        auto secrets_it = bundle.secrets.find(strategy.party);
        if (secrets_it != bundle.secrets.end()) own = secrets_it->second;
        std::size_t extra_index = 0;
        for (const Edit& edit : strategy.edits) {
            if (const auto* extra = std::get_if<ExtraEdit>(&edit)) {
                script.steps.push_back(
                    make_extra_step(strategy.party, *extra, own, extra_index++));
            }
        }
    }
    return script;
}

std::vector<Strategy> enumerate_strategies(const ProtocolBundle& bundle, const PartyId& party) {
    std::vector<const ScriptStep*> own_steps;
    for (const ScriptStep& step : bundle.script.steps) {
        if (step.party == party) own_steps.push_back(&step);
    }
    if (own_steps.empty()) {
        throw std::invalid_argument("enumerate: party " + party + " has no script in protocol " +
                                    bundle.name);
    }

    std::map<std::string, Secret> own;
    auto secrets_it = bundle.secrets.find(party);
    if (secrets_it != bundle.secrets.end()) own = secrets_it->second;

    const Round last = bundle.max_deadline + 1;
    std::vector<Strategy> catalog;
    catalog.push_back({party, "compliant", {}});

    for (const ScriptStep* step : own_steps) {
        catalog.push_back({party, "omit:" + step->name, {OmitEdit{step->name}}});
    }

    for (const ScriptStep* step : own_steps) {
        if (!step->claim_like) continue;
        for (Round r = step->round + 1; r <= last; ++r) {
            catalog.push_back({party, "delay:" + step->name + "@" + std::to_string(r),
                               {DelayEdit{step->name, r}}});
        }
    }

    // Premature reveals: the party's own secret sent to its claim target
    // before the scripted round.
    for (const ScriptStep* step : own_steps) {
        if (!step->claim_like || step->own_secret.empty()) continue;
        std::string kind = "claim";
        for (const ContractInfo& info : bundle.contracts) {
            if (info.id == step->target && !info.is_escrow) kind = "redeem";
        }
        for (Round r = 0; r < step->round; ++r) {
            ExtraEdit extra{r, step->chain, kind, step->target, "own:" + step->own_secret, 0};
            catalog.push_back({party,
                               "early:" + step->name + "@" + std::to_string(r),
                               {extra}});
        }
    }

    for (const ContractInfo& info : bundle.contracts) {
        for (Round r = 0; r <= last; ++r) {
            ExtraEdit extra{r, info.chain, "refund", info.id, "", 0};
            catalog.push_back(
                {party, "refund:" + info.id + "@" + std::to_string(r), {extra}});
        }
    }

    // Claims riding on other parties' secrets, once public.
    for (const ContractInfo& info : bundle.contracts) {
        for (const auto& [lock, owner] : info.locks) {
            if (owner == party) continue;
            const std::string kind = info.is_escrow ? "claim" : "redeem";
            for (Round r = 1; r <= last; ++r) {
                ExtraEdit extra{r, info.chain, kind, info.id, "public:" + to_hex(lock), 0};
                catalog.push_back({party,
                                   "grab:" + info.id + "@" + std::to_string(r),
                                   {extra}});
            }
        }
    }

    return catalog;
}

bool no_clairvoyance_check(const PartyId& party,
                           const std::map<std::string, Secret>& own_secrets,
                           const std::vector<TraceEvent>& trace) {
    std::set<std::string> own_hex;
    for (const auto& [label, secret] : own_secrets) {
        own_hex.insert(to_hex(secret));
    }
    std::map<std::string, Round> first_public;
    for (const TraceEvent& event : trace) {
        if (!event.action.contains("secret")) continue;
        const std::string hex = event.action["secret"].get<std::string>();
        if (!first_public.count(hex)) first_public[hex] = event.round;
    }
    for (const TraceEvent& event : trace) {
        if (event.actor != party || !event.action.contains("secret")) continue;
        const std::string hex = event.action["secret"].get<std::string>();
        if (own_hex.count(hex)) continue;
        const Round submit_round = event.action["submit_round"].get<Round>();
        if (first_public.at(hex) > submit_round) return false;
    }
    return true;
}

bool no_clairvoyance_check(const ProtocolBundle& bundle, const Strategy& strategy,
                           const std::vector<TraceEvent>& trace) {
    std::map<std::string, Secret> own;
    auto it = bundle.secrets.find(strategy.party);
    if (it != bundle.secrets.end()) own = it->second;
    return no_clairvoyance_check(strategy.party, own, trace);
}

}  // namespace swapsim
