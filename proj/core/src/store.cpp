#include "evoforge/store.hpp"

#include <fstream>
#include <string>

#include <json.hpp>

#include "evoforge/errors.hpp"

namespace evoforge {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json string_list(const std::vector<std::string>& items) {
    ordered_json arr = ordered_json::array();
    for (const auto& item : items) arr.push_back(item);
    return arr;
}

ordered_json record_to_json(const InstructionRecord& rec) {
    ordered_json j;
    j["id"] = rec.id;
    j["text"] = rec.text;
    j["response"] = rec.response ? ordered_json(*rec.response) : ordered_json(nullptr);
    if (rec.elements) {
        j["background"] = string_list(rec.elements->background);
        j["objectives"] = string_list(rec.elements->objectives);
        j["constraints"] = string_list(rec.elements->constraints);
    } else {
        j["background"] = nullptr;
        j["objectives"] = nullptr;
        j["constraints"] = nullptr;
    }
    j["root_domain"] = to_string(rec.root_domain);
    j["source"] = to_string(rec.source);
    j["round_created"] = rec.round_created;
    j["parents"] = string_list(rec.parents);
    j["fusion_use_count"] = rec.fusion_use_count;
    j["objective_count"] = rec.objective_count;
    j["uncertainty"] = rec.uncertainty ? ordered_json(*rec.uncertainty) : ordered_json(nullptr);
    j["status"] = to_string(rec.status);
    return j;
}

std::vector<std::string> read_string_list(const ordered_json& j, const char* field) {
    if (!j.at(field).is_array()) throw StoreError(std::string(field) + " is not an array");
    std::vector<std::string> out;
    for (const auto& item : j.at(field)) out.push_back(item.get<std::string>());
    return out;
}

InstructionRecord record_from_json(const ordered_json& j) {
    InstructionRecord rec;
    rec.id = j.at("id").get<std::string>();
    rec.text = j.at("text").get<std::string>();
    if (!j.at("response").is_null()) rec.response = j.at("response").get<std::string>();
    if (!j.at("objectives").is_null()) {
        DecomposedElements e;
        e.background = read_string_list(j, "background");
        e.objectives = read_string_list(j, "objectives");
        e.constraints = read_string_list(j, "constraints");
        rec.elements = std::move(e);
    }
    rec.root_domain = root_domain_from_string(j.at("root_domain").get<std::string>());
    rec.source = source_from_string(j.at("source").get<std::string>());
    rec.round_created = j.at("round_created").get<int>();
    rec.parents = read_string_list(j, "parents");
    rec.fusion_use_count = j.at("fusion_use_count").get<int>();
    rec.objective_count = j.at("objective_count").get<int>();
    if (!j.at("uncertainty").is_null()) rec.uncertainty = j.at("uncertainty").get<double>();
    rec.status = status_from_string(j.at("status").get<std::string>());
    return rec;
}

}  // namespace

void save_pool(const SeedPool& pool, const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw StoreError("cannot open " + tmp.string() + " for writing");
        ordered_json meta;
        meta["round"] = pool.round();
        meta["rng_seed"] = pool.rng_seed();
        meta["schema_version"] = kStoreSchemaVersion;
        out << meta.dump() << '\n';
        for (const auto& rec : pool.records()) {
            out << record_to_json(rec).dump() << '\n';
        }
        if (!out) throw StoreError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

SeedPool load_pool(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StoreError("cannot open " + path.string());

    std::string line;
    long line_no = 0;

    if (!std::getline(in, line)) throw StoreError("empty store: " + path.string());
    line_no = 1;

    SeedPool pool;
    try {
        ordered_json meta = ordered_json::parse(line);
        int version = meta.at("schema_version").get<int>();
        if (version != kStoreSchemaVersion) {
            throw StoreError("unsupported schema_version " + std::to_string(version));
        }
        pool.set_round(meta.at("round").get<int>());
        pool.set_rng_seed(meta.at("rng_seed").get<std::uint64_t>());
    } catch (const StoreError&) {
        throw;
    } catch (const std::exception& e) {
        throw StoreError(std::string("bad metadata: ") + e.what(), line_no);
    }

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            pool.insert(record_from_json(ordered_json::parse(line)));
        } catch (const std::exception& e) {
            throw StoreError(std::string("bad record: ") + e.what(), line_no);
        }
    }
    return pool;
}

}  // namespace evoforge
