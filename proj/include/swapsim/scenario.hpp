#pragma once

#include <optional>
#include <string>

#include "swapsim/adversary.hpp"
#include "swapsim/explorer.hpp"
#include "swapsim/protocols.hpp"
#include "swapsim/tpc.hpp"

namespace swapsim {

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A loaded scenario file: world, protocol parameters, overrides. Referential
// integrity is validated at parse time.
struct Scenario {
    int version = 1;
    std::string protocol;  // htlc | premium | transfer | tpc
    WorldInit world;
    Valuation valuation;  // empty -> unit values
    std::string seed = "default";
    Round max_rounds = 16;
    std::vector<Strategy> overrides;

    std::optional<HtlcParams> htlc;
    std::optional<PremiumParams> premium;
    std::optional<TransferParams> transfer;
    std::optional<tpc::Config> tpc_config;
};

Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario_file(const std::string& path);

// Instantiates the protocol bundle (secrets derived from the seed). Throws
// for tpc scenarios, which do not use the ledger machinery.
ProtocolBundle scenario_bundle(const Scenario& scenario);

Valuation scenario_valuation(const Scenario& scenario);

}  // namespace swapsim
