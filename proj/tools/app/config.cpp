#include "app/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "gmxb/model/mortality.hpp"
#include "gmxb/riders/riders.hpp"

namespace gmxb::app {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

// Reads one object of the document, copying every value it hands out (or
// the default it substitutes) into the resolved document, and rejects any
// key that was never asked for.
class Section {
public:
    Section(const json& parent, json& resolved, const std::string& parent_path, const std::string& key)
        : path_(join(parent_path, key)), out_(resolved[key]) {
        out_ = json::object();
        if (parent.is_object() && parent.contains(key) && !parent.at(key).is_null()) {
            in_ = &parent.at(key);
            if (!in_->is_object()) throw ConfigError(path_, "expected an object");
        }
    }

    const std::string& path() const { return path_; }
    json& resolved() { return out_; }
    const json* raw(const std::string& key) {
        seen_.insert(key);
        if (in_ == nullptr || !in_->contains(key) || in_->at(key).is_null()) return nullptr;
        return &in_->at(key);
    }
    Section child(const std::string& key) {
        seen_.insert(key);
        static const json empty = json::object();
        return Section(in_ != nullptr ? *in_ : empty, out_, path_, key);
    }

    double number(const std::string& key, double fallback) {
        double v = fallback;
        if (const json* j = raw(key)) {
            if (!j->is_number()) throw ConfigError(join(path_, key), "expected a number");
            v = j->get<double>();
        }
        if (!std::isfinite(v)) throw ConfigError(join(path_, key), "must be finite");
        out_[key] = v;
        return v;
    }
    double number_in(const std::string& key, double fallback, double lo, double hi) {
        const double v = number(key, fallback);
        if (v < lo || v > hi) {
            std::ostringstream msg;
            msg << "must lie in [" << lo << ", " << hi << "], got " << v;
            throw ConfigError(join(path_, key), msg.str());
        }
        return v;
    }
    long integer(const std::string& key, long fallback, long lo, long hi) {
        long v = fallback;
        if (const json* j = raw(key)) {
            if (!j->is_number_integer() && !j->is_number_unsigned()) {
                throw ConfigError(join(path_, key), "expected an integer");
            }
            v = j->get<long>();
        }
        if (v < lo || v > hi) {
            std::ostringstream msg;
            msg << "must lie in [" << lo << ", " << hi << "], got " << v;
            throw ConfigError(join(path_, key), msg.str());
        }
        out_[key] = v;
        return v;
    }
    bool boolean(const std::string& key, bool fallback) {
        bool v = fallback;
        if (const json* j = raw(key)) {
            if (!j->is_boolean()) throw ConfigError(join(path_, key), "expected true or false");
            v = j->get<bool>();
        }
        out_[key] = v;
        return v;
    }
    std::string text(const std::string& key, const std::string& fallback) {
        std::string v = fallback;
        if (const json* j = raw(key)) {
            if (!j->is_string()) throw ConfigError(join(path_, key), "expected a string");
            v = j->get<std::string>();
        }
        out_[key] = v;
        return v;
    }
    std::string choice(const std::string& key, const std::string& fallback,
                       std::initializer_list<const char*> allowed) {
        const std::string v = text(key, fallback);
        std::string list;
        for (const char* a : allowed) {
            if (v == a) return v;
            list += list.empty() ? a : std::string(", ") + a;
        }
        throw ConfigError(join(path_, key), "unknown value '" + v + "' (expected one of " + list + ")");
    }

    // Call once every key has been read.
    void finish() const {
        if (in_ == nullptr) return;
        for (auto it = in_->begin(); it != in_->end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError(join(path_, it.key()), "unknown key");
        }
    }

private:
    std::string path_;
    json& out_;
    const json* in_ = nullptr;
    std::set<std::string> seen_;
};

DeathBenefitType death_type(const std::string& name) {
    if (name == "max_base_wealth") return DeathBenefitType::max_base_wealth;
    if (name == "premium") return DeathBenefitType::premium;
    if (name == "max_premium_wealth") return DeathBenefitType::max_premium_wealth;
    if (name == "wealth") return DeathBenefitType::wealth;
    return DeathBenefitType::none;
}

#define GMXB_DEATH_CHOICES {"none", "max_base_wealth", "premium", "max_premium_wealth", "wealth"}

RiderPtr read_rider(Section s) {
    const std::string type = s.choice("type", "gmab", {"gmab", "gmwb", "glwb", "gmib", "gmdb", "none"});
    RiderPtr rider;
    if (type == "gmab") {
        GmabConfig c;
        c.account = s.choice("account", "super", {"super", "pension"}) == "pension" ? GmabAccount::pension
                                                                                    : GmabAccount::super;
        c.withdrawal_limit = s.number_in("withdrawal_limit", 0.15, 0.0, 1.0);
        c.ratchet = s.boolean("ratchet", true);
        const auto death = death_type(s.choice("death_benefit", "none", GMXB_DEATH_CHOICES));
        rider = std::make_shared<GmabRider>(c, death);
    } else if (type == "gmwb") {
        GmwbConfig c;
        const std::string v = s.choice("variant", "basic", {"basic", "spec1", "spec2", "spec3"});
        c.variant = v == "spec1"   ? GmwbVariant::spec1
                    : v == "spec2" ? GmwbVariant::spec2
                    : v == "spec3" ? GmwbVariant::spec3
                                   : GmwbVariant::basic;
        c.penalty = s.number_in("penalty", 0.1, 0.0, 1.0);
        c.excess_penalty = s.number_in("excess_penalty", 0.0, 0.0, 1.0);
        c.early_penalty = s.number_in("early_penalty", 0.0, 0.0, 1.0);
        c.early_age = s.number_in("early_age", 59.5, 0.0, 150.0);
        c.entry_age = s.number_in("entry_age", 65.0, 0.0, 150.0);
        c.withdrawal_rate = s.number_in("withdrawal_rate", 0.0, 0.0, 1.0);
        const std::string r = s.choice("ratchet", "none", {"none", "before_withdrawal", "after_withdrawal"});
        c.ratchet = r == "before_withdrawal"  ? RatchetTiming::before_withdrawal
                    : r == "after_withdrawal" ? RatchetTiming::after_withdrawal
                                              : RatchetTiming::none;
        const auto death = death_type(s.choice("death_benefit", "none", GMXB_DEATH_CHOICES));
        rider = std::make_shared<GmwbRider>(c, death);
    } else if (type == "glwb") {
        GlwbConfig c;
        c.withdrawal_rate = s.number_in("withdrawal_rate", 0.05, 0.0, 1.0);
        c.bonus = s.number_in("bonus", 0.0, 0.0, 1.0);
        c.penalty = s.number_in("penalty", 0.0, 0.0, 1.0);
        c.ratchet = s.boolean("ratchet", true);
        const auto death = death_type(s.choice("death_benefit", "wealth", GMXB_DEATH_CHOICES));
        rider = std::make_shared<GlwbRider>(c, death);
    } else if (type == "gmib") {
        GmibConfig c;
        c.annuity_ratio = s.number_in("annuity_ratio", 1.0, 0.0, 100.0);
        c.rollup = s.number_in("rollup", 0.0, 0.0, 1.0);
        c.ratchet = s.boolean("ratchet", false);
        const auto death = death_type(s.choice("death_benefit", "wealth", GMXB_DEATH_CHOICES));
        rider = std::make_shared<GmibRider>(c, death);
    } else if (type == "gmdb") {
        GmdbConfig c;
        c.type = death_type(s.choice("benefit", "max_base_wealth",
                                     {"max_base_wealth", "premium", "max_premium_wealth", "wealth"}));
        c.ratchet = s.boolean("ratchet", true);
        c.rollup = s.number_in("rollup", 0.0, 0.0, 1.0);
        rider = std::make_shared<GmdbRider>(c);
    } else {
        rider = std::make_shared<PlainAccount>();
    }
    s.finish();
    return rider;
}

#undef GMXB_DEATH_CHOICES

// Scalar or one value per period.
std::vector<double> per_period(Section& s, const std::string& key, double fallback, std::size_t n,
                               double lo, double hi) {
    const json* j = s.raw(key);
    const std::string path = join(s.path(), key);
    std::vector<double> out;
    if (j == nullptr) {
        out.assign(n, fallback);
        s.resolved()[key] = fallback;
    } else if (j->is_number()) {
        out.assign(n, j->get<double>());
        s.resolved()[key] = out.front();
    } else if (j->is_array()) {
        if (j->size() != n) {
            throw ConfigError(path, "expected " + std::to_string(n) + " values, one per period");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!(*j)[i].is_number()) throw ConfigError(path + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back((*j)[i].get<double>());
        }
        s.resolved()[key] = out;
    } else {
        throw ConfigError(path, "expected a number or an array of numbers");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(out[i] >= lo && out[i] <= hi)) {
            std::ostringstream msg;
            msg << "must lie in [" << lo << ", " << hi << "], got " << out[i];
            throw ConfigError(path, msg.str());
        }
    }
    return out;
}

MarketModel read_market(Section s) {
    const double maturity = s.number_in("maturity", 10.0, 1e-6, 200.0);
    const long per_year = s.integer("events_per_year", 4, 1, 365);
    const long ratchet_every = s.integer("ratchet_every", 4, 0, 100000);
    const double steps = maturity * static_cast<double>(per_year);
    const long events = std::lround(steps);
    if (events < 1 || std::abs(steps - static_cast<double>(events)) > 1e-9) {
        throw ConfigError(join(s.path(), "maturity"),
                          "maturity times events_per_year must be a whole number of events");
    }
    const auto n = static_cast<std::size_t>(events);
    std::vector<double> rates = per_period(s, "rate", 0.05, n, -0.5, 1.0);
    std::vector<double> vols = per_period(s, "vol", 0.2, n, 0.0, 5.0);
    s.finish();
    std::vector<double> times(n + 1);
    std::vector<bool> ratchet(n);
    for (std::size_t k = 0; k <= n; ++k) times[k] = maturity * static_cast<double>(k) / static_cast<double>(n);
    times.back() = maturity;
    for (std::size_t k = 1; k <= n; ++k) {
        ratchet[k - 1] = ratchet_every > 0 && k % static_cast<std::size_t>(ratchet_every) == 0;
    }
    return MarketModel(std::move(times), std::move(rates), std::move(vols), std::move(ratchet));
}

FeeStructure read_fee(Section s) {
    const std::string kind = s.choice("kind", "continuous", {"continuous", "on_wealth", "on_base"});
    const double rate = s.number_in("rate_bp", 0.0, 0.0, 1e4) * 1e-4;
    s.finish();
    if (kind == "on_wealth") return FeeStructure::on_wealth(rate);
    if (kind == "on_base") return FeeStructure::on_base(rate);
    return FeeStructure::continuous(rate);
}

MortalityModel read_mortality(Section s, const MarketModel& market) {
    const std::string table = s.text("life_table", "");
    const double age = s.number_in("entry_age", 65.0, 0.0, 150.0);
    s.finish();
    if (table.empty()) return {};
    try {
        return mortality_from_life_table(read_life_table_file(table), age, market.times());
    } catch (const DataError& e) {
        throw ConfigError(join(s.path(), "life_table"), e.what());
    }
}

StrategySpec read_strategy(Section s) {
    const std::string kind = s.choice("kind", "static", {"static", "optimal", "threshold"});
    const std::string rule =
        s.choice("rule", "none", {"none", "wealth_fraction", "contractual", "fixed", "maximum"});
    const double value = s.number_in("value", 0.0, 0.0, 1e9);
    const double theta = s.number_in("theta", 0.0, 0.0, 1e6);
    const long candidates = s.integer("candidates", 101, 2, 100000);
    s.finish();
    StrategySpec out;
    if (kind == "optimal") {
        out = StrategySpec::optimal(static_cast<int>(candidates));
    } else if (kind == "threshold") {
        out = StrategySpec::threshold(theta, static_cast<int>(candidates));
    } else {
        WithdrawalRule r;
        if (rule == "wealth_fraction") r = WithdrawalRule::wealth_fraction(value);
        else if (rule == "contractual") r = WithdrawalRule::contractual(value);
        else if (rule == "fixed") r = WithdrawalRule::fixed(value);
        else if (rule == "maximum") r = WithdrawalRule{WithdrawalRule::Kind::maximum, 0.0};
        out = StrategySpec::fixed(r);
    }
    return out;
}

LatticeSpec read_lattice(Section s, const LatticeSpec& fallback) {
    LatticeSpec l;
    l.m = static_cast<int>(s.integer("m", fallback.m, 4, 1 << 20));
    l.j = static_cast<int>(s.integer("j", fallback.j, 5, 1 << 20));
    l.w_floor_rel = s.number_in("w_floor_rel", fallback.w_floor_rel, 1e-300, 1.0);
    l.a_floor_rel = s.number_in("a_floor_rel", fallback.a_floor_rel, 1e-300, 1.0);
    l.sigma_multiple = s.number_in("sigma_multiple", fallback.sigma_multiple, 0.5, 50.0);
    s.finish();
    return l;
}

SolverSettings read_solver(Section s) {
    SolverSettings out;
    out.method = method_from_string(s.choice("method", "ghqc", {"ghqc", "pde", "mc"}));
    const long threads = s.integer("threads", 1, 1, 1024);
    out.ghqc.lattice = read_lattice(s.child("lattice"), LatticeSpec{});

    Section g = s.child("ghqc");
    out.ghqc.quadrature_order = static_cast<int>(g.integer("quadrature_order", 9, 1, 200));
    out.ghqc.integration = g.choice("integration", "exact_spline", {"exact_spline", "gauss_hermite"}) ==
                                   "gauss_hermite"
                               ? Integration::gauss_hermite
                               : Integration::exact_spline;
    out.ghqc.split_kinks = g.boolean("split_kinks", true);
    g.finish();

    Section p = s.child("pde");
    out.pde.lattice = out.ghqc.lattice;
    // Zero keeps the shared lattice size.
    const long pm = p.integer("m", 0, 0, 1 << 20);
    const long pj = p.integer("j", 0, 0, 1 << 20);
    if (pm > 0) out.pde.lattice.m = static_cast<int>(pm);
    if (pj > 0) out.pde.lattice.j = static_cast<int>(pj);
    if (pm > 0 && pm < 4) throw ConfigError(join(p.path(), "m"), "must be 0 or at least 4");
    if (pj > 0 && pj < 5) throw ConfigError(join(p.path(), "j"), "must be 0 or at least 5");
    out.pde.scheme.steps_per_interval = static_cast<int>(p.integer("steps_per_interval", 40, 1, 1 << 20));
    out.pde.scheme.theta = p.number_in("theta", 0.5, 0.5, 1.0);
    out.pde.scheme.rannacher_steps = static_cast<int>(p.integer("rannacher_steps", 2, 0, 1000));
    p.finish();

    Section m = s.child("mc");
    out.mc.paths = m.integer("paths", 20'000'000, 1, 1L << 40);
    out.mc.seed = static_cast<std::uint64_t>(m.integer("seed", 20120601, 0, (1L << 62)));
    out.mc.antithetic = m.boolean("antithetic", true);
    out.mc.control_variate = m.boolean("control_variate", true);
    out.mc.batch_size = m.integer("batch_size", 50'000, 1, 1L << 40);
    m.finish();
    out.mc.threads = static_cast<int>(threads);
    s.finish();
    return out;
}

}  // namespace

json parse_config_text(const std::string& text) {
    try {
        return json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("", "override '" + assignment + "' is not of the form key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    if (!doc.is_object()) doc = json::object();
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError(key, "empty component in override key");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        json& next = (*node)[part];
        if (next.is_null()) next = json::object();
        if (!next.is_object()) throw ConfigError(key.substr(0, dot), "not a section");
        node = &next;
        start = dot + 1;
    }
}

RunConfig build_run(const json& doc) {
    if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
    RunConfig run;
    json resolved = json::object();
    static const std::set<std::string> sections = {"rider",  "market", "fee",    "mortality",
                                                   "strategy", "solver", "search", "state",
                                                   "output", "greeks", "validate", "bench"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!sections.count(it.key())) throw ConfigError(it.key(), "unknown section");
    }

    Contract& c = run.contract;
    c.rider = read_rider(Section(doc, resolved, "", "rider"));
    c.market = read_market(Section(doc, resolved, "", "market"));
    c.fee = read_fee(Section(doc, resolved, "", "fee"));
    c.mortality = read_mortality(Section(doc, resolved, "", "mortality"), c.market);
    c.strategy = read_strategy(Section(doc, resolved, "", "strategy"));
    run.solver = read_solver(Section(doc, resolved, "", "solver"));

    {
        Section s(doc, resolved, "", "search");
        FairFeeRequest& r = run.search;
        r.lower = s.number_in("lower_bp", 0.0, 0.0, 1e4) * 1e-4;
        r.upper = s.number_in("upper_bp", 2000.0, 0.0, 1e4) * 1e-4;
        r.max_upper = s.number_in("max_upper_bp", 5000.0, 0.0, 1e4) * 1e-4;
        r.tolerance = s.number_in("tolerance_bp", 0.01, 1e-9, 100.0) * 1e-4;
        r.guess_width = s.number_in("guess_width", 0.05, 1e-6, 0.99);
        if (const json* g = s.raw("guess_bp")) {
            if (!g->is_number() || !(g->get<double>() > 0.0)) {
                throw ConfigError(join(s.path(), "guess_bp"), "expected a positive number");
            }
            r.guess = g->get<double>() * 1e-4;
            s.resolved()["guess_bp"] = g->get<double>();
        } else {
            s.resolved()["guess_bp"] = nullptr;
        }
        if (!(r.upper > r.lower)) throw ConfigError(join(s.path(), "upper_bp"), "must exceed lower_bp");
        if (r.max_upper < r.upper) throw ConfigError(join(s.path(), "max_upper_bp"), "must be at least upper_bp");
        s.finish();
    }
    {
        Section s(doc, resolved, "", "state");
        c.premium = s.number_in("premium", 1.0, 1e-12, 1e12);
        run.wealth = s.number_in("wealth", c.premium, 0.0, 1e15);
        run.base = s.number_in("base", c.premium, 0.0, 1e15);
        s.finish();
    }
    {
        Section s(doc, resolved, "", "output");
        run.output.csv = s.text("csv", "");
        run.output.precision = static_cast<int>(s.integer("precision", 1, 0, 12));
        s.finish();
    }
    {
        Section s(doc, resolved, "", "greeks");
        run.greeks.bumps.wealth_rel = s.number_in("wealth_bump_rel", 1e-3, 1e-12, 0.5);
        run.greeks.bumps.rate = s.number_in("rate_bump", 1e-4, 1e-12, 0.5);
        run.greeks.bumps.vol = s.number_in("vol_bump", 1e-3, 1e-12, 0.5);
        run.greeks.asset_price = s.number_in("asset_price", 1.0, 1e-12, 1e15);
        s.finish();
    }
    {
        Section s(doc, resolved, "", "validate");
        run.validate.against = s.choice("against", "auto", {"auto", "mc", "pde"});
        run.validate.threshold = s.number_in("threshold", 0.0, 0.0, 1.0);
        s.finish();
    }
    {
        Section s(doc, resolved, "", "bench");
        run.bench.mc = s.boolean("mc", false);
        run.bench.pde = s.boolean("pde", true);
        run.bench.discrete = s.boolean("discrete", true);
        s.finish();
    }

    try {
        c.validate();
        c.strategy.validate();
        run.solver.mc.validate();
        run.solver.pde.scheme.validate();
    } catch (const ParameterError& e) {
        throw ConfigError("", e.what());
    }
    run.document = std::move(resolved);
    return run;
}

json default_document() { return build_run(json::object()).document; }

std::string config_hash(const json& doc) {
    const std::string text = doc.dump();  // object keys are kept sorted
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace gmxb::app
