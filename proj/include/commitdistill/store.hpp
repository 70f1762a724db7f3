#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "commitdistill/error.hpp"
#include "commitdistill/extraction.hpp"

namespace commitdistill {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kRedacted = "redacted";

/// Path of the store relative to the repository root.
inline std::filesystem::path store_path(const std::filesystem::path& root) {
    return root / ".knowledge" / "units.json";
}

/// Id-keyed unit collection; iteration is ascending id.
class KnowledgeStore {
public:
    KnowledgeStore() = default;
    explicit KnowledgeStore(const std::vector<KnowledgeUnit>& units) {
        for (const auto& u : units) units_.try_emplace(u.id, u);
    }

    /// Inserts unless the id already exists; returns whether it was added.
    bool insert(const KnowledgeUnit& u) { return units_.try_emplace(u.id, u).second; }

    std::size_t size() const { return units_.size(); }
    bool empty() const { return units_.empty(); }
    bool contains(const std::string& id) const { return units_.count(id) > 0; }
    const KnowledgeUnit* find(const std::string& id) const {
        auto it = units_.find(id);
        return it == units_.end() ? nullptr : &it->second;
    }

    std::vector<KnowledgeUnit> units() const {
        std::vector<KnowledgeUnit> out;
        out.reserve(units_.size());
        for (const auto& [id, u] : units_) out.push_back(u);
        return out;
    }

    auto begin() const { return units_.begin(); }
    auto end() const { return units_.end(); }

    int schema_version() const { return schema_version_; }

    bool operator==(const KnowledgeStore&) const = default;

private:
    friend KnowledgeStore strip_attribution(KnowledgeStore);
    std::map<std::string, KnowledgeUnit> units_;
    int schema_version_ = kSchemaVersion;
};

inline nlohmann::json to_json(const KnowledgeUnit& u) {
    return nlohmann::json{{"id", u.id},
                          {"type", std::string(to_string(u.type))},
                          {"title", u.title},
                          {"content", u.content},
                          {"weight", u.weight},
                          {"context", u.context},
                          {"meta",
                           {{"commit", u.meta.commit},
                            {"author", u.meta.author},
                            {"date", u.meta.date},
                            {"source", u.meta.source}}}};
}

inline KnowledgeUnit unit_from_json(const nlohmann::json& j) {
    try {
        KnowledgeUnit u;
        u.id = j.at("id").get<std::string>();
        u.type = unit_type_from_string(j.at("type").get<std::string>());
        u.title = j.at("title").get<std::string>();
        u.content = j.at("content").get<std::string>();
        u.weight = j.at("weight").get<double>();
        u.context = j.at("context").get<std::string>();
        const auto& m = j.at("meta");
        u.meta.commit = m.at("commit").get<std::string>();
        u.meta.author = m.at("author").get<std::string>();
        u.meta.date = m.at("date").get<std::string>();
        u.meta.source = m.at("source").get<std::string>();
        if (u.weight < 0.0 || u.weight > 1.0) throw ParseError("unit " + u.id + " has weight outside [0,1]");
        return u;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed knowledge unit: ") + e.what());
    }
}

/// Canonical text form: sorted keys, two-space indent, trailing newline.
inline std::string serialize(const KnowledgeStore& store) {
    nlohmann::json units = nlohmann::json::array();
    for (const auto& [id, u] : store) units.push_back(to_json(u));
    nlohmann::json doc{{"schema_version", store.schema_version()}, {"units", std::move(units)}};
    return doc.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

inline KnowledgeStore deserialize(std::string_view data) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(data);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("store is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("units") || !doc["units"].is_array()) {
        throw ParseError("store is missing the 'units' array");
    }
    int version = doc.value("schema_version", 0);
    if (version != kSchemaVersion) {
        throw ParseError("unsupported store schema_version " + std::to_string(version));
    }
    KnowledgeStore store;
    for (const auto& j : doc["units"]) {
        auto u = unit_from_json(j);
        if (!store.insert(u)) throw ParseError("duplicate unit id " + u.id + " in store");
    }
    return store;
}

/// Writes <root>/.knowledge/units.json through a temp file and rename.
inline void save(const KnowledgeStore& store, const std::filesystem::path& root) {
    auto path = store_path(root);
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << serialize(store);
        out.flush();
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

inline KnowledgeStore load(const std::filesystem::path& root) {
    auto path = store_path(root);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize(ss.str());
}

/// Union by id; existing units win on collision.
inline KnowledgeStore merge(KnowledgeStore existing, const std::vector<KnowledgeUnit>& incoming) {
    for (const auto& u : incoming) existing.insert(u);
    return existing;
}

/// Replaces every author with "redacted"; ids, content and shas stay put.
inline KnowledgeStore strip_attribution(KnowledgeStore store) {
    for (auto& [id, u] : store.units_) u.meta.author = std::string(kRedacted);
    return store;
}

}  // namespace commitdistill
