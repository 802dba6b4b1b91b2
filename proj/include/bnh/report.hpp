#pragma once
#include "bnh/barcycles.hpp"

#include "json.hpp"

#include <string>

namespace bnh {

// bumped whenever generator conventions change; stored entries from another
// version are invalid, never silently compared
inline constexpr int CONVENTION_VERSION = 1;

struct RunConfig {
    FieldRef field;
    std::vector<std::string> support_items;
    int n = 3;
    Caps caps = default_caps();
    std::string cache_dir; // empty: take BNH_CACHE_DIR, else no cache
    bool json_output = true;
    uint64_t seed = 0; // drives generator shuffling and property sampling
    bool timings = false;
};

nlohmann::ordered_json unit_json(const UnitVector& u);
nlohmann::ordered_json report_json(const BnReport& r);
nlohmann::ordered_json chain_json(const BarChain<QMatrix>& c);
nlohmann::ordered_json torus_chain_json(const BarChain<TorusElement>& c);
nlohmann::ordered_json exterior_json(const ExteriorClass& e);

// presentation payload of one symbol group, the unit persisted by the cache
nlohmann::ordered_json k_presentation_json(const Support& s, int m, const Caps& caps);

std::string content_key(const Support& s, int m); // stable hash over the conventions

std::string default_cache_dir(const RunConfig& cfg); // flag, then environment, then ""

// writes <dir>/<key>.json when absent (atomic replace); verifies an existing
// entry byte-for-byte and throws std::runtime_error on conflict; true on hit
bool cache_ensure(const std::string& dir, const Support& s, int m, const Caps& caps);

// versioned key -> value store for recorded results
class GoldenStore {
public:
    explicit GoldenStore(std::string path);

    bool load(); // false when the file is absent
    void save() const;

    int stored_version() const { return version_; }
    void record(const std::string& key, const nlohmann::ordered_json& value);
    // "match", "mismatch", "missing" or "stale-convention"
    std::string check(const std::string& key, const nlohmann::ordered_json& value) const;
    std::vector<std::string> keys() const;

private:
    std::string path_;
    int version_ = CONVENTION_VERSION;
    nlohmann::ordered_json entries_ = nlohmann::ordered_json::object();
};

} // namespace bnh
