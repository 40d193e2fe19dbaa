#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "evoforge/errors.hpp"
#include "evoforge/ids.hpp"
#include "evoforge/pool.hpp"
#include "evoforge/rng.hpp"
#include "evoforge/store.hpp"

using namespace evoforge;
namespace fs = std::filesystem;

namespace {

InstructionRecord make_record(const std::string& id, RootDomain domain,
                              RecordStatus status = RecordStatus::Viable) {
    InstructionRecord rec;
    rec.id = id;
    rec.text = "Solve the task named " + id + " carefully.";
    rec.root_domain = domain;
    rec.source = Source::CorpusSeed;
    rec.status = status;
    if (status == RecordStatus::Viable) {
        DecomposedElements e;
        e.objectives = {"Solve the task."};
        rec.elements = e;
        rec.objective_count = 1;
    }
    return rec;
}

fs::path temp_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("evoforge_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("pool_insert counts a single viable math record") {
    SeedPool pool(7);
    pool.insert(make_record("a", RootDomain::Math));
    CHECK(pool.domain_count(RootDomain::Math) == 1);
    CHECK(pool.viable_count() == 1);
}

TEST_CASE("pool_insert arithmetic mirrors a 48 + 16 round merge") {
    SeedPool pool(7);
    for (int i = 0; i < 48; ++i) {
        pool.insert(make_record("seed" + std::to_string(i),
                                i % 2 == 0 ? RootDomain::Math : RootDomain::Code));
    }
    for (int i = 0; i < 16; ++i) {
        pool.insert(make_record("child" + std::to_string(i), RootDomain::General));
    }
    CHECK(pool.viable_count() == 64);
    CHECK(pool.counts_consistent());
}

TEST_CASE("pool_insert rejects duplicates and dangling parents, pool unchanged") {
    SeedPool pool(7);
    pool.insert(make_record("a", RootDomain::Math));

    CHECK_THROWS_AS(pool.insert(make_record("a", RootDomain::Math)), ValidationError);

    InstructionRecord child = make_record("b", RootDomain::Math);
    child.source = Source::DepthEvolved;
    child.parents = {"ghost"};
    CHECK_THROWS_AS(pool.insert(child), ValidationError);

    CHECK(pool.size() == 1);
    CHECK(pool.counts_consistent());
}

TEST_CASE("parent arity must match source") {
    SeedPool pool(7);
    pool.insert(make_record("a", RootDomain::Math));
    InstructionRecord bad = make_record("b", RootDomain::Math);
    bad.source = Source::Fused;
    bad.parents = {"a"};  // fused needs two parents
    CHECK_THROWS_AS(pool.insert(bad), ValidationError);
}

TEST_CASE("status flips keep domain counts consistent") {
    SeedPool pool(7);
    pool.insert(make_record("a", RootDomain::Code));
    pool.set_status("a", RecordStatus::BackendFailed);
    CHECK(pool.domain_count(RootDomain::Code) == 0);
    CHECK(pool.counts_consistent());
    pool.set_status("a", RecordStatus::Viable);
    CHECK(pool.domain_count(RootDomain::Code) == 1);
}

TEST_CASE("save then load is the identity on a small pool") {
    auto dir = temp_dir("roundtrip");
    SeedPool pool(42);
    pool.set_round(3);

    auto a = make_record("r42-000001", RootDomain::Math);
    a.response = "An answer.";
    a.uncertainty = 0.25;
    pool.insert(a);

    auto b = make_record("r42-000002", RootDomain::Code);
    pool.insert(b);

    auto c = make_record("r42-000003", RootDomain::General);
    c.source = Source::Fused;
    c.parents = {"r42-000001", "r42-000002"};
    c.fusion_use_count = 2;
    pool.insert(c);

    save_pool(pool, dir / "pool.jsonl");
    SeedPool loaded = load_pool(dir / "pool.jsonl");

    CHECK(loaded.round() == 3);
    CHECK(loaded.rng_seed() == 42);
    REQUIRE(loaded.size() == 3);
    for (const auto& rec : pool.records()) {
        const auto& other = loaded.at(rec.id);
        CHECK(other.text == rec.text);
        CHECK(other.response == rec.response);
        CHECK(other.elements == rec.elements);
        CHECK(other.root_domain == rec.root_domain);
        CHECK(other.source == rec.source);
        CHECK(other.round_created == rec.round_created);
        CHECK(other.parents == rec.parents);
        CHECK(other.fusion_use_count == rec.fusion_use_count);
        CHECK(other.objective_count == rec.objective_count);
        CHECK(other.uncertainty == rec.uncertainty);
        CHECK(other.status == rec.status);
    }
}

TEST_CASE("load preserves uncertainty to full serialized precision") {
    auto dir = temp_dir("precision");
    SeedPool pool(1);
    auto rec = make_record("a", RootDomain::Math);
    rec.uncertainty = 0.13333333333333333;
    pool.insert(rec);
    save_pool(pool, dir / "pool.jsonl");
    SeedPool loaded = load_pool(dir / "pool.jsonl");
    CHECK(*loaded.at("a").uncertainty == 0.13333333333333333);
}

TEST_CASE("a truncated record names its line number") {
    auto dir = temp_dir("truncated");
    SeedPool pool(1);
    pool.insert(make_record("a", RootDomain::Math));
    pool.insert(make_record("b", RootDomain::Math));
    save_pool(pool, dir / "pool.jsonl");

    // Truncate the last record line.
    std::ifstream in(dir / "pool.jsonl");
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    content.resize(content.size() - 30);
    std::ofstream out(dir / "pool.jsonl", std::ios::trunc);
    out << content;
    out.close();

    try {
        load_pool(dir / "pool.jsonl");
        FAIL("expected StoreError");
    } catch (const StoreError& e) {
        CHECK(e.line == 3);  // metadata line + 2 records
    }
}

TEST_CASE("serialization round-trip holds for randomly generated pools") {
    auto dir = temp_dir("property");
    Rng rng = make_rng(99, {12});
    std::uniform_int_distribution<int> domain_pick(0, 2);
    std::uniform_int_distribution<int> status_pick(0, 3);
    std::uniform_real_distribution<double> u_pick(0.0, 1.0);
    std::uniform_int_distribution<int> count_pick(5, 40);

    for (int round = 0; round < 25; ++round) {
        SeedPool pool(round);
        int n = count_pick(rng);
        std::vector<std::string> viable_ids;
        for (int i = 0; i < n; ++i) {
            InstructionRecord rec;
            rec.id = "g" + std::to_string(i);
            rec.text = "Task " + std::to_string(rng()) + " with words";
            rec.root_domain = static_cast<RootDomain>(domain_pick(rng));
            rec.status = static_cast<RecordStatus>(status_pick(rng));
            if (rec.status == RecordStatus::Viable || u_pick(rng) < 0.5) {
                DecomposedElements e;
                e.objectives = {"Do thing " + std::to_string(i)};
                if (u_pick(rng) < 0.3) e.background.push_back("Some\nmultiline\ncontext");
                if (u_pick(rng) < 0.3) e.constraints.push_back("Limit " + std::to_string(i));
                rec.objective_count = 1;
                rec.elements = e;
            }
            if (u_pick(rng) < 0.5) rec.uncertainty = u_pick(rng);
            if (u_pick(rng) < 0.5) rec.response = "Answer\nwith newline";
            if (viable_ids.size() >= 2 && u_pick(rng) < 0.25) {
                rec.source = Source::Fused;
                rec.parents = {viable_ids[0], viable_ids[viable_ids.size() / 2]};
            } else if (!viable_ids.empty() && u_pick(rng) < 0.25) {
                rec.source = Source::DepthEvolved;
                rec.parents = {viable_ids.back()};
                rec.round_created = 1;
            }
            pool.insert(rec);
            viable_ids.push_back(rec.id);
        }

        auto path = dir / ("pool" + std::to_string(round) + ".jsonl");
        save_pool(pool, path);
        SeedPool loaded = load_pool(path);
        REQUIRE(loaded.size() == pool.size());
        CHECK(loaded.counts_consistent());
        for (const auto& rec : pool.records()) {
            const auto& other = loaded.at(rec.id);
            CHECK(other.text == rec.text);
            CHECK(other.elements == rec.elements);
            CHECK(other.uncertainty == rec.uncertainty);
            CHECK(other.response == rec.response);
            CHECK(other.status == rec.status);
            CHECK(other.parents == rec.parents);
        }
        // Lineage is acyclic: parent walks terminate.
        for (const auto& rec : pool.records()) {
            std::vector<const InstructionRecord*> frontier{&rec};
            int steps = 0;
            while (!frontier.empty() && steps < 1000) {
                const auto* cur = frontier.back();
                frontier.pop_back();
                for (const auto& p : cur->parents) frontier.push_back(&pool.at(p));
                ++steps;
            }
            CHECK(steps < 1000);
        }
    }
}

TEST_CASE("id generator resumes past the largest existing serial") {
    SeedPool pool(42);
    pool.insert(make_record("r42-000007", RootDomain::Math));
    pool.insert(make_record("r42-000012", RootDomain::Math));
    pool.insert(make_record("other-999", RootDomain::Math));
    IdGenerator ids = IdGenerator::resume(pool);
    CHECK(ids.next() == "r42-000013");
    CHECK(ids.next() == "r42-000014");
}
