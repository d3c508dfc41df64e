#include <doctest.h>

#include "swapsim/ledger.hpp"

using namespace swapsim;

namespace {

WorldInit two_chain_init() {
    WorldInit init;
    init.chains.push_back({"florin", {{"alice", 0}, {"bob", 100}}});
    init.chains.push_back({"guilder", {{"alice", 100}, {"bob", 0}}});
    return init;
}

Clause simple_clause(const Secret& s, Round deadline) {
    return {"alice", hashlock(s), deadline, std::nullopt};
}

}  // namespace

TEST_CASE("world creation validates the scenario") {
    World world = World::create(two_chain_init());
    CHECK(world.round() == 0);
    CHECK(world.read("guilder").balances.at("alice") == 100);
    CHECK(world.trace().empty());

    CHECK_THROWS_AS(World::create(WorldInit{}), std::invalid_argument);

    WorldInit dup_chain = two_chain_init();
    dup_chain.chains.push_back({"florin", {}});
    CHECK_THROWS_AS(World::create(dup_chain), std::invalid_argument);

    WorldInit dup_party;
    dup_party.chains.push_back({"florin", {{"alice", 1}, {"alice", 2}}});
    CHECK_THROWS_AS(World::create(dup_party), std::invalid_argument);
}

TEST_CASE("submissions stay pending until the round boundary") {
    World world = World::create(two_chain_init());
    const Secret s = make_secret("s");

    world.submit("alice", "guilder",
                 DeployEscrowAction{"guilder.htlc", "bob", 100, {simple_clause(s, 2)}});
    CHECK(world.pending_count() == 1);
    CHECK(world.read("guilder").balances.at("alice") == 100);  // not yet applied
    CHECK(world.read("guilder").contracts.empty());

    world.advance_round();
    CHECK(world.round() == 1);
    CHECK(world.pending_count() == 0);
    CHECK(world.read("guilder").balances.at("alice") == 0);
    CHECK(world.read("guilder").contracts.count("guilder.htlc") == 1);

    CHECK_THROWS_AS(world.submit("mallory", "guilder", NoopAction{}), std::invalid_argument);
    CHECK_THROWS_AS(world.submit("alice", "ducat", NoopAction{}), std::invalid_argument);
    CHECK_THROWS_AS(world.read("ducat"), std::invalid_argument);
}

TEST_CASE("deadline rule: timely iff submit round strictly below the deadline") {
    const Secret s = make_secret("s");

    SUBCASE("claim submitted in round 0 against deadline 1 is applied") {
        World world = World::create(two_chain_init());
        world.submit("bob", "florin",
                     DeployEscrowAction{"florin.htlc", "alice", 100, {simple_clause(s, 1)}});
        world.submit("alice", "florin", ClaimAction{"florin.htlc", s});
        world.advance_round();
        CHECK(world.read("florin").balances.at("alice") == 100);
        CHECK(world.read("florin").balances.at("bob") == 0);
    }

    SUBCASE("claim submitted at the deadline round is late and the refund fires") {
        World world = World::create(two_chain_init());
        world.submit("bob", "florin",
                     DeployEscrowAction{"florin.htlc", "alice", 100, {simple_clause(s, 2)}});
        world.advance_round();
        world.advance_round();
        CHECK(world.round() == 2);
        world.submit("alice", "florin", ClaimAction{"florin.htlc", s});
        world.advance_round();
        // The escrow refunded at the boundary into round 2, before the late claim landed.
        CHECK(world.read("florin").balances.at("bob") == 100);
        CHECK(world.read("florin").balances.at("alice") == 0);
        const TraceEvent& last = world.trace().back();
        CHECK(last.result["status"] == "rejected");
    }
}

TEST_CASE("advance with empty pending just moves the clock") {
    World world = World::create(two_chain_init());
    world.advance_round();
    CHECK(world.round() == 1);
    CHECK(world.read("guilder").balances.at("alice") == 100);
}

TEST_CASE("rejected deployments are traced, not silently dropped") {
    World world = World::create(two_chain_init());
    const Secret s = make_secret("s");

    world.submit("alice", "guilder",
                 DeployEscrowAction{"too.big", "bob", 500, {simple_clause(s, 2)}});
    world.submit("alice", "guilder", DeployEscrowAction{"no.clauses", "bob", 10, {}});
    world.advance_round();

    REQUIRE(world.trace().size() == 2);
    CHECK(world.trace()[0].result["reason"] == "insufficient balance");
    CHECK(world.trace()[1].result["reason"] == "empty clause list");
    CHECK(world.read("guilder").balances.at("alice") == 100);
}

TEST_CASE("duplicate contract ids are rejected") {
    World world = World::create(two_chain_init());
    const Secret s = make_secret("s");
    world.submit("alice", "guilder",
                 DeployEscrowAction{"esc", "bob", 10, {simple_clause(s, 2)}});
    world.submit("alice", "guilder",
                 DeployEscrowAction{"esc", "bob", 10, {simple_clause(s, 2)}});
    world.advance_round();
    CHECK(world.trace()[0].result["status"] == "accepted");
    CHECK(world.trace()[1].result["reason"] == "contract id already exists");
}

TEST_CASE("secrets published by any claim transaction become public next round") {
    World world = World::create(two_chain_init());
    const Secret s = make_secret("s");
    const Hashlock lock = hashlock(s);

    // A claim against a nonexistent contract still exposes its secret.
    world.submit("alice", "florin", ClaimAction{"ghost", s});
    CHECK_FALSE(world.public_secret(lock).has_value());
    world.advance_round();
    auto revealed = world.public_secret(lock);
    REQUIRE(revealed.has_value());
    CHECK(*revealed == s);
    CHECK(world.publication_round(lock) == Round{1});
}

TEST_CASE("per-chain supply is conserved across rounds") {
    World world = World::create(two_chain_init());
    const Secret s = make_secret("s");
    const Amount florin_supply = world.chain_supply("florin");
    const Amount guilder_supply = world.chain_supply("guilder");

    world.submit("alice", "guilder",
                 DeployEscrowAction{"g", "bob", 60, {simple_clause(s, 3)}});
    world.submit("bob", "florin", DeployEscrowAction{"f", "alice", 40, {simple_clause(s, 2)}});
    world.advance_round();
    CHECK(world.chain_supply("florin") == florin_supply);
    CHECK(world.chain_supply("guilder") == guilder_supply);

    world.submit("alice", "florin", ClaimAction{"f", s});
    world.advance_round();
    world.advance_round();
    world.advance_round();
    CHECK(world.chain_supply("florin") == florin_supply);
    CHECK(world.chain_supply("guilder") == guilder_supply);
    CHECK(world.all_contracts_terminal());
}

TEST_CASE("identical submission sequences produce bit-identical traces") {
    auto drive = [] {
        World world = World::create(two_chain_init());
        const Secret s = make_secret("s");
        world.submit("alice", "guilder",
                     DeployEscrowAction{"g", "bob", 60, {simple_clause(s, 3)}});
        world.advance_round();
        world.submit("bob", "florin",
                     DeployEscrowAction{"f", "alice", 40, {simple_clause(s, 2)}});
        world.advance_round();
        world.submit("alice", "florin", ClaimAction{"f", s});
        world.advance_round();
        world.advance_round();
        return trace_to_jsonl(world.trace());
    };
    CHECK(drive() == drive());
}

TEST_CASE("trace events carry the pinned schema fields") {
    World world = World::create(two_chain_init());
    world.submit("alice", "guilder", NoopAction{});
    world.advance_round();
    const auto j = trace_event_json(world.trace()[0]);
    CHECK(j.contains("round"));
    CHECK(j.contains("actor"));
    CHECK(j.contains("chain"));
    CHECK(j.contains("action"));
    CHECK(j.contains("result"));
    CHECK(j.contains("deltas"));
    CHECK(j["round"] == 1);
    CHECK(j["action"]["submit_round"] == 0);
}
