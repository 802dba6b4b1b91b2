#include "bnh/report.hpp"
#include "bnh/verify.hpp"

#include "CLI11.hpp"

#include <cctype>
#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

using namespace bnh;
using nlohmann::ordered_json;

namespace {

FieldRef parse_field(const std::string& text) {
    if (text == "q" || text == "Q") return {FieldTag::Q, 0};
    if (text.size() >= 3 && (text.front() == 'f' || text.front() == 'F') && text.back() == 't') {
        long p = 0;
        try {
            p = std::stol(text.substr(1, text.size() - 2));
        } catch (const std::exception&) {
            throw std::invalid_argument("unrecognized field: " + text);
        }
        if (p < 2 || !is_prime_u64((uint64_t)p))
            throw std::invalid_argument("field characteristic must be prime: " + text);
        return {FieldTag::Fpt, p};
    }
    throw std::invalid_argument("unrecognized field (expected q or f<p>t): " + text);
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace((unsigned char)ch)) {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string join_commas(const std::vector<std::string>& items) {
    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += items[i];
    }
    return out;
}

std::pair<int, int> parse_n_range(const std::string& text) {
    size_t dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            int n = std::stoi(text);
            return {n, n};
        }
        int lo = std::stoi(text.substr(0, dots));
        int hi = std::stoi(text.substr(dots + 2));
        if (lo > hi) throw std::invalid_argument("empty weight range: " + text);
        return {lo, hi};
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed weight: " + text);
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("malformed weight: " + text);
    }
}

mpq_class parse_rational(const std::string& text) {
    mpq_class q;
    try {
        q = mpq_class(text);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational: " + text);
    }
    q.canonicalize();
    return q;
}

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

std::string group_text(int free_rank, const std::vector<std::string>& factors) {
    std::string out;
    if (free_rank > 0) out = "Z^" + std::to_string(free_rank);
    for (const auto& f : factors) out += (out.empty() ? "Z/" : " + Z/") + f;
    return out.empty() ? "0" : out;
}

ordered_json group_json(const FgAbGroup& g) {
    ordered_json factors = ordered_json::array();
    for (const auto& f : g.invariant_factors()) factors.push_back(f.get_str());
    return {{"free_rank", g.free_rank()}, {"invariant_factors", std::move(factors)}};
}

ordered_json parse_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open input file: " + path);
    try {
        return ordered_json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
}

long elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 t0)
        .count();
}

struct CommonOpts {
    std::string field_str = "q";
    std::string support_str;
    RunConfig cfg;
};

void add_field_opt(CLI::App* sub, CommonOpts& c) {
    sub->add_option("--field", c.field_str, "base field: q or f<p>t (e.g. f3t)");
}

void add_caps_opts(CLI::App* sub, CommonOpts& c) {
    sub->add_option("--max-support", c.cfg.caps.max_support, "largest allowed support basis");
    sub->add_option("--max-n", c.cfg.caps.max_n, "largest allowed weight");
    sub->add_option("--max-residue-order", c.cfg.caps.max_residue_order,
                    "largest tabulated residue field");
    sub->add_option("--trial-bound", c.cfg.caps.trial_division_bound,
                    "trial division bound for factoring");
}

Support make_support(const CommonOpts& c) {
    if (c.support_str.empty()) throw std::invalid_argument("--support is required");
    return Support::parse(parse_field(c.field_str), split_commas(c.support_str), c.cfg.caps);
}

int cmd_factor(const CommonOpts& c, const std::string& element, bool text) {
    if (element.empty()) throw std::invalid_argument("factor needs an element");
    FieldRef f = parse_field(c.field_str);
    UnitVector u = factor_element(parse_field_elem(element, f), c.cfg.caps);
    if (text) {
        std::cout << u.str() << "\n";
        return 0;
    }
    ordered_json j;
    j["schema"] = "unit";
    j["version"] = CONVENTION_VERSION;
    j["field"] = f.str();
    j["element"] = element;
    j["unit"] = unit_json(u);
    emit(j);
    return 0;
}

int cmd_nf(const CommonOpts& c, const std::vector<std::string>& entries, bool text) {
    if (entries.empty()) throw std::invalid_argument("nf needs at least one symbol entry");
    FieldRef f = parse_field(c.field_str);
    std::vector<UnitVector> units;
    for (const auto& e : entries)
        units.push_back(factor_element(parse_field_elem(e, f), c.cfg.caps));
    Support s;
    if (!c.support_str.empty()) {
        s = make_support(c);
    } else {
        std::set<Place> places;
        for (const auto& u : units)
            for (const auto& [pl, ex] : u.exps)
                if (ex != 0) places.insert(pl);
        s = Support::make(f, std::vector<Place>(places.begin(), places.end()), c.cfg.caps);
    }
    auto kg = TruncatedKGroup::get(s, (int)units.size(), c.cfg.caps);
    std::vector<mpz_class> nf = kg->normal_form(units);
    bool zero = true;
    for (const auto& v : nf) zero = zero && v == 0;
    if (text) {
        std::string coords;
        for (const auto& v : nf) coords += (coords.empty() ? "" : " ") + v.get_str();
        std::cout << "support " << s.str() << "; coordinates [" << coords << "]; "
                  << (zero ? "zero" : "nonzero") << "\n";
        return 0;
    }
    ordered_json coords = ordered_json::array(), moduli = ordered_json::array();
    for (const auto& v : nf) coords.push_back(v.get_str());
    for (const auto& v : kg->moduli()) moduli.push_back(v.get_str());
    ordered_json j;
    j["schema"] = "k-normal-form";
    j["version"] = CONVENTION_VERSION;
    j["field"] = f.str();
    j["support"] = s.item_strings();
    j["weight"] = (int)units.size();
    j["coordinate_moduli"] = std::move(moduli);
    j["coordinates"] = std::move(coords);
    j["zero"] = zero;
    emit(j);
    return 0;
}

int cmd_verify(const std::string& suite, long count, uint64_t seed, const Caps& caps, bool text) {
    VerifySummary s = run_verify_suite(suite, count, seed, caps);
    if (text) {
        std::cout << "suite " << s.suite << ": " << (s.pass ? "pass" : "FAIL") << " (" << s.checked
                  << " checked, " << s.skipped << " skipped)";
        if (!s.detail.empty()) std::cout << " " << s.detail;
        std::cout << "\n";
    } else {
        ordered_json j;
        j["schema"] = "verify";
        j["version"] = CONVENTION_VERSION;
        j["suite"] = s.suite;
        j["pass"] = s.pass;
        j["checked"] = s.checked;
        j["skipped"] = s.skipped;
        j["detail"] = s.detail;
        emit(j);
    }
    return s.pass ? 0 : 1;
}

int cmd_bn(const CommonOpts& c, const std::string& n_text, bool text) {
    auto [n_lo, n_hi] = parse_n_range(n_text);
    Support s = make_support(c);
    std::string cache = default_cache_dir(c.cfg);
    BnBuildOptions opt;
    opt.shuffle_seed = c.cfg.seed;
    opt.caps = c.cfg.caps;
    bool any_refused = false;
    ordered_json reports = ordered_json::array();
    std::string text_out;
    for (int n = n_lo; n <= n_hi; ++n) {
        auto t0 = std::chrono::steady_clock::now();
        if (!cache.empty())
            for (int m = 0; m <= n; ++m) cache_ensure(cache, s, m, c.cfg.caps);
        BnReport rep = bn_report(s, n, opt);
        any_refused = any_refused || rep.refused;
        ordered_json j = report_json(rep);
        if (c.cfg.timings) j["timings"] = {{"total_ms", elapsed_ms(t0)}};
        reports.push_back(std::move(j));
        if (text) {
            std::ostringstream os;
            os << "field " << rep.field << "; support " << join_commas(rep.support_items)
               << "; n " << rep.n << "; generators " << rep.gens_per_position << "; ";
            if (rep.refused) {
                os << "refused: " << rep.refusal_reason;
            } else {
                std::vector<std::string> fs;
                for (const auto& f : rep.invariant_factors) fs.push_back(f.get_str());
                os << "b = " << group_text(rep.free_rank, fs);
            }
            text_out += os.str() + "\n";
        }
    }
    if (text)
        std::cout << text_out;
    else
        emit(reports.size() == 1 ? reports[0] : ordered_json{{"schema", "bn-report-set"},
                                                             {"reports", std::move(reports)}});
    return any_refused ? 2 : 0;
}

int cmd_scan(const CommonOpts& c, const std::vector<std::string>& support_args,
             const std::string& n_text, bool text) {
    auto [n_lo, n_hi] = parse_n_range(n_text);
    if (n_lo != n_hi) throw std::invalid_argument("scan takes a single weight");
    int n = n_lo;
    if (n < 3) throw std::invalid_argument("scan needs weight 3 or more");
    if (support_args.size() < 2)
        throw std::invalid_argument("scan needs at least two --support values");
    FieldRef f = parse_field(c.field_str);
    BnBuildOptions opt;
    opt.shuffle_seed = c.cfg.seed;
    opt.caps = c.cfg.caps;
    std::vector<std::shared_ptr<const SymbolComplex>> cxs;
    std::vector<Support> sups;
    for (const auto& arg : support_args) {
        sups.push_back(Support::parse(f, split_commas(arg), c.cfg.caps));
        cxs.push_back(SymbolComplex::build(sups.back(), n, opt));
    }
    ordered_json groups = ordered_json::array();
    std::vector<FgAbGroup> hs;
    for (const auto& cx : cxs) {
        hs.push_back(cx->homology_at(2));
        groups.push_back(group_json(hs.back()));
    }
    ordered_json steps = ordered_json::array();
    std::string text_out;
    for (size_t k = 0; k + 1 < cxs.size(); ++k) {
        IntMatrix phi = stabilization_matrix(*cxs[k], *cxs[k + 1], 2);
        IntMatrix z = phi.mul(cxs[k]->cycle_basis(2));
        IntMatrix bounds = cxs[k + 1]->differential(3).hcat(cxs[k + 1]->position_relations(2));
        long induced = rank_of(z.hcat(bounds)) - rank_of(bounds);
        steps.push_back({{"from", sups[k].item_strings()},
                         {"to", sups[k + 1].item_strings()},
                         {"induced_rank", induced}});
        if (text) {
            std::ostringstream os;
            os << sups[k].str() << " -> " << sups[k + 1].str() << ": induced rank " << induced;
            text_out += os.str() + "\n";
        }
    }
    if (text) {
        for (size_t k = 0; k < sups.size(); ++k) {
            std::vector<std::string> fs;
            for (const auto& v : hs[k].invariant_factors()) fs.push_back(v.get_str());
            std::cout << sups[k].str() << ": b = " << group_text(hs[k].free_rank(), fs) << "\n";
        }
        std::cout << text_out;
        return 0;
    }
    ordered_json j;
    j["schema"] = "stabilization-scan";
    j["version"] = CONVENTION_VERSION;
    j["field"] = f.str();
    j["n"] = n;
    ordered_json sj = ordered_json::array();
    for (const auto& s : sups) sj.push_back(s.item_strings());
    j["supports"] = std::move(sj);
    j["groups"] = std::move(groups);
    j["steps"] = std::move(steps);
    emit(j);
    return 0;
}

int cmd_kappa(const CommonOpts& c, int n, const std::string& input) {
    if (parse_field(c.field_str).tag != FieldTag::Q)
        throw std::invalid_argument("kappa chains live over rational matrices; use --field q");
    ordered_json in = parse_json_file(input);
    if (!in.is_array()) throw std::invalid_argument("kappa input must be a JSON array of triples");
    std::vector<QTriple> triples;
    for (const auto& item : in) {
        QTriple t;
        t.coeff = mpz_class(item.value("coeff", "1"));
        t.a = parse_rational(item.at("a").get<std::string>());
        t.b = parse_rational(item.at("b").get<std::string>());
        for (const auto& cv : item.at("c")) t.c.push_back(parse_rational(cv.get<std::string>()));
        triples.push_back(std::move(t));
    }
    BarChain<QMatrix> chain = kappa_chain(n, triples);
    bool cycle = bar_boundary(chain).is_zero();
    BarChain<QMatrix> multiple = chain.scaled(mpq_class(n - 1));
    ordered_json j;
    j["schema"] = "kappa-chain";
    j["version"] = CONVENTION_VERSION;
    j["n"] = n;
    j["triples"] = (int)triples.size();
    j["chain"] = chain_json(chain);
    j["boundary_is_zero"] = cycle;
    j["exterior_of_multiple"] = {{"factor", n - 1},
                                 {"class", exterior_json(exterior_class(multiple, c.cfg.caps))}};
    emit(j);
    return cycle ? 0 : 1;
}

int cmd_chiprime(const CommonOpts& c, const std::string& n_text, long kernel_index,
                 const std::string& input) {
    auto [n_lo, n_hi] = parse_n_range(n_text);
    if (n_lo != n_hi) throw std::invalid_argument("chiprime takes a single weight");
    int n = n_lo;
    Support s = make_support(c);
    BnBuildOptions opt;
    opt.shuffle_seed = c.cfg.seed;
    opt.caps = c.cfg.caps;
    auto cx = SymbolComplex::build(s, n, opt);
    SparseVec x;
    long kernel_rank = -1;
    if (!input.empty()) {
        ordered_json in = parse_json_file(input);
        for (const auto& ent : in.at("entries")) {
            int idx = ent.at(0).get<int>();
            if (idx < 0 || idx >= cx->gens())
                throw std::invalid_argument("entry index out of range: " + std::to_string(idx));
            mpz_class v(ent.at(1).get<std::string>());
            if (v != 0) x[idx] += v;
        }
    } else {
        IntMatrix z = cx->cycle_basis(2);
        kernel_rank = z.cols();
        if (kernel_index < 0 || kernel_index >= z.cols())
            throw std::invalid_argument("kernel index out of range (kernel rank " +
                                        std::to_string(z.cols()) + ")");
        x = z.col((int)kernel_index);
    }
    ChiPrimeData data = chi_prime_data(*cx, x);
    ordered_json lifts = ordered_json::array();
    for (const auto& [u, chain] : data.u31)
        lifts.push_back({{"unit", unit_json(u)}, {"chain", torus_chain_json(chain)}});
    ordered_json xs = ordered_json::array();
    for (const auto& [idx, v] : data.x) xs.push_back({idx, v.get_str()});
    ordered_json j;
    j["schema"] = "chi-prime";
    j["version"] = CONVENTION_VERSION;
    j["field"] = s.field().str();
    j["support"] = s.item_strings();
    j["n"] = n;
    if (kernel_rank >= 0) j["kernel_rank"] = kernel_rank;
    j["x"] = std::move(xs);
    j["certified"] = data.certified;
    j["lifts"] = std::move(lifts);
    emit(j);
    return data.certified ? 0 : 1;
}

std::vector<std::pair<std::string, ordered_json>> golden_battery(const Caps& caps) {
    const FieldRef kQ{FieldTag::Q, 0};
    const std::vector<std::vector<std::string>> items = {
        {"-1", "2"}, {"-1", "2", "3"}, {"-1", "2", "3", "5"}};
    std::vector<std::pair<std::string, ordered_json>> out;
    std::vector<std::shared_ptr<const SymbolComplex>> cxs;
    std::vector<std::string> names;
    for (const auto& it : items) {
        Support s = Support::parse(kQ, it, caps);
        cxs.push_back(SymbolComplex::build(s, 3));
        names.push_back(s.str());
        out.push_back({"bn/q/" + names.back() + "/n=3", group_json(cxs.back()->homology_at(2))});
    }
    for (size_t k = 0; k + 1 < cxs.size(); ++k) {
        IntMatrix phi = stabilization_matrix(*cxs[k], *cxs[k + 1], 2);
        IntMatrix z = phi.mul(cxs[k]->cycle_basis(2));
        IntMatrix bounds = cxs[k + 1]->differential(3).hcat(cxs[k + 1]->position_relations(2));
        long induced = rank_of(z.hcat(bounds)) - rank_of(bounds);
        out.push_back({"stab/q/" + names[k] + "->" + names[k + 1] + "/n=3",
                       ordered_json{{"induced_rank", induced}}});
    }
    return out;
}

int cmd_golden(const std::string& action, const std::string& file, const Caps& caps) {
    GoldenStore store(file);
    if (action == "record") {
        store.load();
        ordered_json keys = ordered_json::array();
        for (const auto& [key, value] : golden_battery(caps)) {
            store.record(key, value);
            keys.push_back(key);
        }
        store.save();
        ordered_json j;
        j["schema"] = "golden";
        j["version"] = CONVENTION_VERSION;
        j["action"] = "record";
        j["file"] = file;
        j["keys"] = std::move(keys);
        emit(j);
        return 0;
    }
    if (action != "check") throw std::invalid_argument("golden action must be record or check");
    if (!store.load()) throw std::invalid_argument("no golden file at " + file);
    bool ok = true;
    ordered_json results = ordered_json::array();
    for (const auto& [key, value] : golden_battery(caps)) {
        std::string status = store.check(key, value);
        ok = ok && status == "match";
        results.push_back({{"key", key}, {"status", status}});
    }
    ordered_json j;
    j["schema"] = "golden";
    j["version"] = CONVENTION_VERSION;
    j["action"] = "check";
    j["file"] = file;
    j["stored_version"] = store.stored_version();
    j["ok"] = ok;
    j["results"] = std::move(results);
    emit(j);
    return ok ? 0 : 1;
}

// values that may begin with '-' (supports, elements) are glued into = form so
// the option parser does not mistake them for flags
std::vector<std::string> preprocess(int argc, char** argv) {
    std::vector<std::string> out;
    for (int i = 0; i < argc; ++i) {
        std::string a = argv[i];
        if ((a == "--support" || a == "--elem" || a == "--entries") && i + 1 < argc) {
            out.push_back(a + "=" + argv[++i]);
        } else {
            out.push_back(a);
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"S-unit symbol complex toolkit: factorization, truncated symbol groups, "
                 "homology reports, and bar-cycle certificates"};
    app.require_subcommand(1);

    CommonOpts c;
    bool text = false;
    std::string n_text = "3";
    std::string element, input_file, nf_entries_str;
    std::vector<std::string> nf_entries, scan_supports;
    std::string verify_suite = "steinberg";
    long verify_count = 1000;
    long kernel_index = -1;
    int kappa_n = 3;
    std::string golden_action, golden_file = "golden.json";

    auto* sub_factor = app.add_subcommand("factor", "factor an element over the support places");
    add_field_opt(sub_factor, c);
    add_caps_opts(sub_factor, c);
    sub_factor->add_option("element", element, "field element, e.g. -12/35 or (t^2+t)/(t+2)");
    sub_factor->add_option("--elem", element, "alternative to the positional element");
    sub_factor->add_flag("--json", c.cfg.json_output, "JSON output (default)");
    sub_factor->add_flag("--text", text, "human-readable output");

    auto* sub_nf = app.add_subcommand("nf", "normal form of a symbol in the truncated group");
    add_field_opt(sub_nf, c);
    add_caps_opts(sub_nf, c);
    sub_nf->add_option("entry", nf_entries, "symbol entries");
    sub_nf->add_option("--entries", nf_entries_str, "comma-separated symbol entries");
    sub_nf->add_option("--support", c.support_str, "comma-separated support items");
    sub_nf->add_flag("--json", c.cfg.json_output, "JSON output (default)");
    sub_nf->add_flag("--text", text, "human-readable output");

    auto* sub_verify = app.add_subcommand("verify", "run a randomized property suite");
    sub_verify->add_option("--suite", verify_suite, "steinberg | product-formula | dd-zero | "
                                                    "bar-cycles | exterior");
    sub_verify->add_option("--count", verify_count, "sample count");
    sub_verify->add_option("--seed", c.cfg.seed, "rng seed");
    add_caps_opts(sub_verify, c);
    sub_verify->add_flag("--json", c.cfg.json_output, "JSON output (default)");
    sub_verify->add_flag("--text", text, "human-readable output");

    auto* sub_bn = app.add_subcommand("bn", "homology report of the symbol complex");
    add_field_opt(sub_bn, c);
    add_caps_opts(sub_bn, c);
    sub_bn->add_option("--support", c.support_str, "comma-separated support items");
    sub_bn->add_option("--n", n_text, "weight, single value or lo..hi");
    sub_bn->add_option("--seed", c.cfg.seed, "generator shuffle seed (0 keeps canonical order)");
    sub_bn->add_option("--cache-dir", c.cfg.cache_dir, "persist symbol group presentations here");
    sub_bn->add_flag("--timings", c.cfg.timings, "append wall-clock timings to the report");
    sub_bn->add_flag("--json", c.cfg.json_output, "JSON output (default)");
    sub_bn->add_flag("--text", text, "human-readable output");

    auto* sub_scan = app.add_subcommand("scan", "stabilization across a chain of supports");
    add_field_opt(sub_scan, c);
    add_caps_opts(sub_scan, c);
    sub_scan->add_option("--support", scan_supports,
                         "comma-separated support items; repeat per step");
    sub_scan->add_option("--n", n_text, "weight");
    sub_scan->add_option("--seed", c.cfg.seed, "generator shuffle seed");
    sub_scan->add_flag("--json", c.cfg.json_output, "JSON output (default)");
    sub_scan->add_flag("--text", text, "human-readable output");

    auto* sub_kappa = app.add_subcommand("kappa", "build the averaged commuting-family cycle");
    add_field_opt(sub_kappa, c);
    add_caps_opts(sub_kappa, c);
    sub_kappa->add_option("--n", kappa_n, "weight, 3 or more");
    sub_kappa->add_option("--input", input_file, "JSON array of {coeff, a, b, c[]} triples")
        ->required();

    auto* sub_chi = app.add_subcommand("chiprime", "torus lift certificate for a kernel element");
    add_field_opt(sub_chi, c);
    add_caps_opts(sub_chi, c);
    sub_chi->add_option("--support", c.support_str, "comma-separated support items");
    sub_chi->add_option("--n", n_text, "weight, 3 or more");
    sub_chi->add_option("--seed", c.cfg.seed, "generator shuffle seed");
    sub_chi->add_option("--kernel-index", kernel_index, "column of the cycle lattice basis");
    sub_chi->add_option("--input", input_file, "JSON {entries: [[index, coeff], ...]}");

    auto* sub_golden = app.add_subcommand("golden", "record or check the regression battery");
    sub_golden->add_option("action", golden_action, "record | check")->required();
    sub_golden->add_option("--file", golden_file, "golden store path");
    add_caps_opts(sub_golden, c);

    std::vector<std::string> args = preprocess(argc, argv);
    std::vector<char*> argv2;
    argv2.reserve(args.size());
    for (auto& a : args) argv2.push_back(a.data());
    try {
        app.parse((int)argv2.size(), argv2.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (sub_factor->parsed()) return cmd_factor(c, element, text);
        if (sub_nf->parsed()) {
            for (const auto& e : split_commas(nf_entries_str)) nf_entries.push_back(e);
            return cmd_nf(c, nf_entries, text);
        }
        if (sub_verify->parsed())
            return cmd_verify(verify_suite, verify_count, c.cfg.seed, c.cfg.caps, text);
        if (sub_bn->parsed()) return cmd_bn(c, n_text, text);
        if (sub_scan->parsed()) return cmd_scan(c, scan_supports, n_text, text);
        if (sub_kappa->parsed()) return cmd_kappa(c, kappa_n, input_file);
        if (sub_chi->parsed()) return cmd_chiprime(c, n_text, kernel_index, input_file);
        if (sub_golden->parsed()) return cmd_golden(golden_action, golden_file, c.cfg.caps);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const UnsupportedWeight& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 1;
    }
}
