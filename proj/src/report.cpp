#include "bnh/report.hpp"

#include "bnh/milnor.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace bnh {
namespace {

nlohmann::ordered_json sparse_matrix_json(const IntMatrix& m) {
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& [rc, v] : m.entries())
        entries.push_back({rc.first, rc.second, v.get_str()});
    nlohmann::ordered_json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["entries"] = std::move(entries);
    return j;
}

void write_atomic(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write " + tmp.string());
        os << text;
    }
    fs::rename(tmp, path);
}

std::string read_all(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

} // namespace

nlohmann::ordered_json unit_json(const UnitVector& u) {
    nlohmann::ordered_json places = nlohmann::ordered_json::array();
    for (const auto& [pl, e] : u.exps)
        if (e != 0) places.push_back({{"place", pl.str()}, {"exp", e}});
    nlohmann::ordered_json j;
    j["torsion"] = u.torsion;
    j["places"] = std::move(places);
    return j;
}

nlohmann::ordered_json report_json(const BnReport& r) {
    nlohmann::ordered_json j;
    j["schema"] = "bn-report";
    j["version"] = CONVENTION_VERSION;
    j["field"] = r.field;
    j["support"] = r.support_items;
    j["n"] = r.n;
    j["generators_per_position"] = r.gens_per_position;
    j["refused"] = r.refused;
    if (r.refused) {
        j["reason"] = r.refusal_reason;
        return j;
    }
    nlohmann::ordered_json factors = nlohmann::ordered_json::array();
    for (const auto& f : r.invariant_factors) factors.push_back(f.get_str());
    j["group"] = {{"free_rank", r.free_rank}, {"invariant_factors", std::move(factors)}};
    j["differential_ranks"] = r.differential_ranks;
    return j;
}

nlohmann::ordered_json chain_json(const BarChain<QMatrix>& c) {
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& [tuple, coeff] : c.terms()) {
        nlohmann::ordered_json mats = nlohmann::ordered_json::array();
        for (const QMatrix& m : tuple) {
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (int i = 0; i < m.size(); ++i) {
                nlohmann::ordered_json row = nlohmann::ordered_json::array();
                for (int jc = 0; jc < m.size(); ++jc) row.push_back(m.at(i, jc).get_str());
                rows.push_back(std::move(row));
            }
            mats.push_back(std::move(rows));
        }
        terms.push_back({{"coefficient", coeff.get_str()}, {"matrices", std::move(mats)}});
    }
    nlohmann::ordered_json j;
    j["degree"] = c.degree();
    j["terms"] = std::move(terms);
    return j;
}

nlohmann::ordered_json torus_chain_json(const BarChain<TorusElement>& c) {
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& [tuple, coeff] : c.terms()) {
        nlohmann::ordered_json tup = nlohmann::ordered_json::array();
        for (const TorusElement& g : tuple) {
            nlohmann::ordered_json coords = nlohmann::ordered_json::array();
            for (const UnitVector& u : g.coords) coords.push_back(unit_json(u));
            tup.push_back(std::move(coords));
        }
        terms.push_back({{"coefficient", coeff.get_str()}, {"tuple", std::move(tup)}});
    }
    nlohmann::ordered_json j;
    j["degree"] = c.degree();
    j["terms"] = std::move(terms);
    return j;
}

nlohmann::ordered_json exterior_json(const ExteriorClass& e) {
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& [labels, coeff] : e.terms()) {
        nlohmann::ordered_json wedge = nlohmann::ordered_json::array();
        for (const auto& [slot, pl] : labels)
            wedge.push_back({{"slot", slot}, {"place", pl.str()}});
        terms.push_back({{"coefficient", coeff.get_str()}, {"wedge", std::move(wedge)}});
    }
    nlohmann::ordered_json j;
    j["terms"] = std::move(terms);
    return j;
}

nlohmann::ordered_json k_presentation_json(const Support& s, int m, const Caps& caps) {
    auto kg = TruncatedKGroup::get(s, m, caps);
    nlohmann::ordered_json moduli = nlohmann::ordered_json::array();
    for (const auto& v : kg->moduli()) moduli.push_back(v.get_str());
    nlohmann::ordered_json j;
    j["schema"] = "k-presentation";
    j["version"] = CONVENTION_VERSION;
    j["field"] = s.field().str();
    j["support"] = s.item_strings();
    j["weight"] = m;
    j["generators"] = kg->gen_count();
    j["coordinate_moduli"] = std::move(moduli);
    j["coordinate_matrix"] = sparse_matrix_json(kg->coord_matrix());
    j["relations"] = sparse_matrix_json(kg->relations());
    return j;
}

std::string content_key(const Support& s, int m) {
    std::string text = "bnh:v" + std::to_string(CONVENTION_VERSION) + "|" + s.field().str() +
                       "|" + s.str() + "|m=" + std::to_string(m);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

std::string default_cache_dir(const RunConfig& cfg) {
    if (!cfg.cache_dir.empty()) return cfg.cache_dir;
    if (const char* env = std::getenv("BNH_CACHE_DIR")) return env;
    return "";
}

bool cache_ensure(const std::string& dir, const Support& s, int m, const Caps& caps) {
    if (dir.empty()) return false;
    fs::create_directories(dir);
    fs::path path = fs::path(dir) / (content_key(s, m) + ".json");
    std::string text = k_presentation_json(s, m, caps).dump(2) + "\n";
    if (fs::exists(path)) {
        if (read_all(path) != text)
            throw std::runtime_error("cache entry " + path.string() +
                                     " disagrees with the recomputed presentation");
        return true;
    }
    write_atomic(path, text);
    return false;
}

GoldenStore::GoldenStore(std::string path) : path_(std::move(path)) {}

bool GoldenStore::load() {
    if (!fs::exists(path_)) return false;
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(read_all(path_));
    version_ = j.value("version", -1);
    entries_ = nlohmann::ordered_json::object();
    if (version_ == CONVENTION_VERSION && j.contains("entries") && j["entries"].is_object())
        entries_ = j["entries"];
    return true;
}

void GoldenStore::save() const {
    nlohmann::ordered_json j;
    j["schema"] = "golden-store";
    j["version"] = CONVENTION_VERSION;
    j["entries"] = entries_;
    write_atomic(path_, j.dump(2) + "\n");
}

void GoldenStore::record(const std::string& key, const nlohmann::ordered_json& value) {
    version_ = CONVENTION_VERSION;
    entries_[key] = value;
}

std::string GoldenStore::check(const std::string& key, const nlohmann::ordered_json& value) const {
    if (version_ != CONVENTION_VERSION) return "stale-convention";
    if (!entries_.contains(key)) return "missing";
    return entries_[key] == value ? "match" : "mismatch";
}

std::vector<std::string> GoldenStore::keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_.items()) out.push_back(k);
    return out;
}

} // namespace bnh
