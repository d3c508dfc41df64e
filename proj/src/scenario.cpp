#include "swapsim/scenario.hpp"

#include <fstream>

namespace swapsim {

namespace {

using nlohmann::json;

void require(bool condition, const std::string& message) {
    if (!condition) throw ScenarioError("scenario: " + message);
}

WorldInit parse_world(const json& j) {
    WorldInit init;
    require(j.contains("chains") && j["chains"].is_array(), "missing chains array");
    for (const auto& chain_json : j["chains"]) {
        WorldInit::ChainInit chain;
        require(chain_json.contains("name"), "chain without name");
        chain.name = chain_json["name"].get<std::string>();
        if (chain_json.contains("balances")) {
            require(chain_json["balances"].is_object(), "chain balances must be an object");
            for (const auto& [party, amount] : chain_json["balances"].items()) {
                require(amount.is_number_integer() && amount.get<std::int64_t>() >= 0,
                        "balance for " + party + " must be a non-negative integer");
                chain.balances.push_back({party, amount.get<Amount>()});
            }
        }
        init.chains.push_back(std::move(chain));
    }
    return init;
}

void require_party(const WorldInit& world, const PartyId& party) {
    for (const auto& chain : world.chains) {
        for (const auto& [name, amount] : chain.balances) {
            if (name == party) return;
        }
    }
    throw ScenarioError("scenario: party " + party + " not present on any chain");
}

void require_chain(const WorldInit& world, const ChainId& chain) {
    for (const auto& c : world.chains) {
        if (c.name == chain) return;
    }
    throw ScenarioError("scenario: chain " + chain + " not declared");
}

tpc::Config parse_tpc(const json& params) {
    tpc::Config config;
    if (params.contains("coordinator")) {
        config.coordinator = params["coordinator"].get<std::string>();
    }
    require(params.contains("participants") && params["participants"].is_array(),
            "tpc params need a participants array");
    for (const auto& p : params["participants"]) {
        config.participants.push_back(p.get<std::string>());
    }
    require(params.contains("votes") && params["votes"].is_object(),
            "tpc params need a votes object");
    for (const auto& [party, vote] : params["votes"].items()) {
        const std::string v = vote.get<std::string>();
        require(v == "yes" || v == "no", "tpc vote must be yes or no");
        config.votes[party] = v == "yes" ? tpc::Vote::Yes : tpc::Vote::No;
    }
    if (params.contains("faults")) {
        for (const auto& f : params["faults"]) {
            tpc::FaultEvent event;
            event.round = f.at("round").get<Round>();
            event.node = f.at("node").get<std::string>();
            const std::string kind = f.at("kind").get<std::string>();
            require(kind == "crash" || kind == "recover", "fault kind must be crash or recover");
            event.crash = kind == "crash";
            config.faults.events.push_back(event);
        }
    }
    if (params.contains("horizon")) config.horizon = params["horizon"].get<Round>();
    return config;
}

}  // namespace

Scenario parse_scenario(const json& j) {
    Scenario scenario;
    require(j.is_object(), "top level must be an object");
    require(j.contains("version"), "missing version field");
    scenario.version = j["version"].get<int>();
    require(scenario.version == 1, "unsupported version");
    require(j.contains("protocol"), "missing protocol field");
    scenario.protocol = j["protocol"].get<std::string>();

    if (j.contains("seed")) scenario.seed = j["seed"].get<std::string>();
    require(!scenario.seed.empty(), "seed must be non-empty");
    if (j.contains("max_rounds")) scenario.max_rounds = j["max_rounds"].get<Round>();

    const json params = j.value("params", json::object());

    if (scenario.protocol == "tpc") {
        scenario.tpc_config = parse_tpc(params);
        return scenario;
    }

    scenario.world = parse_world(j);
    require_chain(scenario.world, "guilder");
    require_chain(scenario.world, "florin");
    require_party(scenario.world, "alice");
    require_party(scenario.world, "bob");

    if (j.contains("valuation")) {
        for (const auto& [chain, value] : j["valuation"].items()) {
            require_chain(scenario.world, chain);
            scenario.valuation[chain] = value.get<AmountDelta>();
        }
    }

    if (scenario.protocol == "htlc") {
        HtlcParams p;
        if (params.contains("alice_principal")) {
            p.alice_principal = params["alice_principal"].get<Amount>();
        }
        if (params.contains("bob_principal")) {
            p.bob_principal = params["bob_principal"].get<Amount>();
        }
        if (params.contains("deadlines")) {
            const json& d = params["deadlines"];
            if (d.contains("alice_escrow")) p.deadlines.alice_escrow = d["alice_escrow"].get<Round>();
            if (d.contains("bob_escrow")) p.deadlines.bob_escrow = d["bob_escrow"].get<Round>();
        }
        require(p.deadlines.alice_escrow > 0 && p.deadlines.bob_escrow > 0,
                "htlc deadlines must be positive");
        scenario.htlc = p;
    } else if (scenario.protocol == "premium") {
        PremiumParams p;
        if (params.contains("alice_principal")) {
            p.alice_principal = params["alice_principal"].get<Amount>();
        }
        if (params.contains("bob_principal")) {
            p.bob_principal = params["bob_principal"].get<Amount>();
        }
        if (params.contains("premium_a")) p.premium_a = params["premium_a"].get<Amount>();
        if (params.contains("premium_b")) p.premium_b = params["premium_b"].get<Amount>();
        if (params.contains("deadlines")) {
            const json& d = params["deadlines"];
            require(d.is_array() && d.size() == 6, "premium deadlines must be six rounds");
            for (std::size_t i = 0; i < 6; ++i) p.deadlines.step[i] = d[i].get<Round>();
            for (std::size_t i = 1; i < 6; ++i) {
                require(p.deadlines.step[i] > p.deadlines.step[i - 1],
                        "premium deadlines must be strictly increasing");
            }
            require(p.deadlines.step[0] > 0, "premium deadlines must be positive");
        }
        scenario.premium = p;
    } else if (scenario.protocol == "transfer") {
        require_party(scenario.world, "carol");
        TransferParams p;
        if (params.contains("ab_amount")) p.ab_amount = params["ab_amount"].get<Amount>();
        if (params.contains("ba_amount")) p.ba_amount = params["ba_amount"].get<Amount>();
        if (params.contains("ca_amount")) p.ca_amount = params["ca_amount"].get<Amount>();
        if (params.contains("ac_amount")) p.ac_amount = params["ac_amount"].get<Amount>();
        if (params.contains("carol_participates")) {
            p.carol_participates = params["carol_participates"].get<bool>();
        }
        if (params.contains("deadlines")) {
            const json& d = params["deadlines"];
            if (d.contains("ab_alice")) p.deadlines.ab_alice = d["ab_alice"].get<Round>();
            if (d.contains("ba_alice")) p.deadlines.ba_alice = d["ba_alice"].get<Round>();
            if (d.contains("ca_carol")) p.deadlines.ca_carol = d["ca_carol"].get<Round>();
            if (d.contains("ab_carol")) p.deadlines.ab_carol = d["ab_carol"].get<Round>();
            if (d.contains("ba_carol")) p.deadlines.ba_carol = d["ba_carol"].get<Round>();
            if (d.contains("ac_carol")) p.deadlines.ac_carol = d["ac_carol"].get<Round>();
        }
        scenario.transfer = p;
    } else {
        throw ScenarioError("scenario: unknown protocol " + scenario.protocol);
    }

    if (j.contains("strategy_overrides")) {
        require(j["strategy_overrides"].is_array(), "strategy_overrides must be an array");
        for (const auto& s : j["strategy_overrides"]) {
            Strategy strategy = strategy_from_json(s);
            require_party(scenario.world, strategy.party);
            scenario.overrides.push_back(std::move(strategy));
        }
    }

    return scenario;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError("scenario: cannot open " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ScenarioError(std::string{"scenario: invalid JSON: "} + e.what());
    }
    try {
        return parse_scenario(j);
    } catch (const json::exception& e) {
        throw ScenarioError(std::string{"scenario: "} + e.what());
    }
}

ProtocolBundle scenario_bundle(const Scenario& scenario) {
    const Secret alice_secret = make_secret(scenario.seed + "/alice");
    const Secret carol_secret = make_secret(scenario.seed + "/carol");

    ProtocolBundle bundle;
    if (scenario.htlc) {
        HtlcParams p = *scenario.htlc;
        p.alice_secret = alice_secret;
        bundle = htlc_bundle(p, scenario.world);
    } else if (scenario.premium) {
        PremiumParams p = *scenario.premium;
        p.alice_secret = alice_secret;
        bundle = premium_bundle(p, scenario.world);
    } else if (scenario.transfer) {
        TransferParams p = *scenario.transfer;
        p.alice_secret = alice_secret;
        p.carol_secret = carol_secret;
        bundle = transfer_bundle(p, scenario.world);
    } else {
        throw ScenarioError("scenario: protocol " + scenario.protocol +
                            " has no ledger bundle");
    }
    bundle.max_rounds = scenario.max_rounds;
    return bundle;
}

Valuation scenario_valuation(const Scenario& scenario) {
    Valuation v = unit_valuation(scenario.world);
    for (const auto& [chain, value] : scenario.valuation) v[chain] = value;
    return v;
}

}  // namespace swapsim
