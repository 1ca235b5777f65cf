#include "ri/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace ri {

namespace {

struct KeyValue {
    std::string value;
    int line = 0;
    bool used = false;
};

struct Section {
    std::string name;
    int line = 0;
    std::map<std::string, KeyValue> entries;

    bool has(const std::string& key) const { return entries.count(key) > 0; }
};

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_numbers(const std::string& text, int line) {
    std::string cleaned = text;
    for (char& c : cleaned)
        if (c == ';' || c == ',') c = ' ';
    std::istringstream ss(cleaned);
    std::vector<double> out;
    std::string tok;
    while (ss >> tok) {
        try {
            size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ParseError("not a number: '" + tok + "'", line);
        }
    }
    if (out.empty()) throw ParseError("expected numeric value", line);
    return out;
}

class SectionReader {
public:
    SectionReader(Section& s, const std::string& origin) : s_(s), origin_(origin) {}

    bool has(const std::string& key) const { return s_.has(key); }

    std::string raw(const std::string& key) {
        auto it = s_.entries.find(key);
        if (it == s_.entries.end())
            throw ValidationError(origin_ + ": section [" + s_.name +
                                  "] is missing required key '" + key + "'");
        it->second.used = true;
        return it->second.value;
    }
    int line_of(const std::string& key) const { return s_.entries.at(key).line; }

    double number(const std::string& key) {
        const int line = line_of(key);
        auto vals = parse_numbers(raw(key), line);
        if (vals.size() != 1) throw ParseError("expected a single number", line);
        return vals[0];
    }
    long long integer(const std::string& key) {
        const double v = number(key);
        if (v != std::floor(v)) throw ParseError("expected an integer", line_of(key));
        return static_cast<long long>(v);
    }
    Vec vec(const std::string& key, int dim) {
        const int line = line_of(key);
        auto vals = parse_numbers(raw(key), line);
        if (static_cast<int>(vals.size()) != dim)
            throw ParseError("expected " + std::to_string(dim) + " numbers", line);
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = vals[i];
        return v;
    }
    /// One number -> isotropic multiple of I; d*d numbers -> row-major matrix.
    SymMatrix matrix(const std::string& key, int dim) {
        const int line = line_of(key);
        auto vals = parse_numbers(raw(key), line);
        if (vals.size() == 1) return SymMatrix::isotropic(dim, vals[0]);
        if (static_cast<int>(vals.size()) == dim * dim) {
            try {
                return SymMatrix::from_rows(dim, vals.data());
            } catch (const InvalidInputError& e) {
                throw ParseError(e.what(), line);
            }
        }
        throw ParseError("expected 1 or " + std::to_string(dim * dim) + " numbers",
                         line);
    }

    void finish() const {
        for (const auto& [key, kv] : s_.entries)
            if (!kv.used)
                throw ValidationError(origin_ + ":" + std::to_string(kv.line) +
                                      ": unknown key '" + key + "' in section [" +
                                      s_.name + "]");
    }

private:
    Section& s_;
    const std::string& origin_;
};

}  // namespace

Scenario parse_scenario(std::istream& is, const std::string& origin) {
    Section top;
    top.name = "<top>";
    std::vector<Section> sections;
    Section* cur = &top;

    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("unterminated section header", line_no);
            const std::string name = trim(line.substr(1, line.size() - 2));
            static const char* known[] = {"workspace", "init", "goal",
                                          "params",    "planner", "obstacle"};
            if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
                    return name == k;
                }) == std::end(known))
                throw ParseError("unknown section [" + name + "]", line_no);
            if (name != "obstacle")
                for (const Section& s : sections)
                    if (s.name == name)
                        throw ParseError("duplicate section [" + name + "]", line_no);
            sections.push_back({name, line_no, {}});
            cur = &sections.back();
            continue;
        }

        const size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError("expected 'key = value'", line_no);
        if (cur->entries.count(key))
            throw ParseError("duplicate key '" + key + "'", line_no);
        cur->entries[key] = {value, line_no, false};
    }

    Scenario scn;

    SectionReader top_r(top, origin);
    if (top_r.has("label")) scn.label = top_r.raw("label");
    const long long dim = top_r.integer("dim");
    if (dim < 1 || dim > 3)
        throw ValidationError(origin + ": dim must be 1, 2, or 3");
    scn.dim = static_cast<int>(dim);
    top_r.finish();

    auto find_section = [&](const std::string& name) -> Section* {
        for (Section& s : sections)
            if (s.name == name) return &s;
        return nullptr;
    };
    auto require_section = [&](const std::string& name) -> Section& {
        Section* s = find_section(name);
        if (!s) throw ValidationError(origin + ": missing section [" + name + "]");
        return *s;
    };

    {
        SectionReader r(require_section("workspace"), origin);
        scn.bounds.lo = r.vec("lo", scn.dim);
        scn.bounds.hi = r.vec("hi", scn.dim);
        for (int i = 0; i < scn.dim; ++i)
            if (!(scn.bounds.lo[i] < scn.bounds.hi[i]))
                throw ValidationError(origin + ": workspace lo must be < hi");
        r.finish();
    }
    {
        SectionReader r(require_section("init"), origin);
        const Vec x = r.vec("x", scn.dim);
        const SymMatrix P = r.matrix("P", scn.dim);
        if (!is_pd(P)) throw ValidationError(origin + ": init P must be PD");
        scn.init = UncertainState(x, P);
        r.finish();
    }
    {
        SectionReader r(require_section("goal"), origin);
        scn.goal.x_lo = r.vec("lo", scn.dim);
        scn.goal.x_hi = r.vec("hi", scn.dim);
        for (int i = 0; i < scn.dim; ++i)
            if (!(scn.goal.x_lo[i] <= scn.goal.x_hi[i]))
                throw ValidationError(origin + ": goal box lo must be <= hi");
        scn.goal.P_max = r.matrix("P_max", scn.dim);
        if (!is_pd(scn.goal.P_max))
            throw ValidationError(origin + ": goal P_max must be PD");
        r.finish();
    }
    {
        SectionReader r(require_section("params"), origin);
        const double alpha = r.number("alpha");
        const SymMatrix W = r.matrix("W", scn.dim);
        if (!(alpha >= 0.0)) throw ValidationError(origin + ": alpha must be >= 0");
        if (!is_pd(W)) throw ValidationError(origin + ": W must be PD");
        scn.params = RiParams(alpha, W);
        const bool has_conf = r.has("confidence");
        const bool has_chi2 = r.has("chi2");
        try {
            if (has_conf && has_chi2)
                scn.chi2 = ChiSquare::checked(r.number("chi2"), r.number("confidence"),
                                              scn.dim);
            else if (has_conf)
                scn.chi2 = ChiSquare::from_confidence(r.number("confidence"), scn.dim);
            else if (has_chi2)
                scn.chi2 = ChiSquare::from_value(r.number("chi2"), scn.dim);
            else
                throw ValidationError(origin +
                                      ": [params] needs 'confidence' or 'chi2'");
        } catch (const ValidationError&) {
            throw;
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ValidationError(origin + ": " + e.what());
        }
        r.finish();
    }
    if (Section* s = find_section("planner")) {
        SectionReader r(*s, origin);
        PlannerConfig& pc = scn.planner;
        if (r.has("n_nodes")) pc.n_nodes = static_cast<int>(r.integer("n_nodes"));
        if (r.has("seed")) pc.seed = static_cast<std::uint64_t>(r.integer("seed"));
        if (r.has("ed_min")) pc.ed_min = r.number("ed_min");
        if (r.has("ed_nbors")) pc.ed_nbors = r.number("ed_nbors");
        if (r.has("prune_every")) pc.prune_every = static_cast<int>(r.integer("prune_every"));
        if (r.has("cov_lo")) pc.cov_eig_lo = r.number("cov_lo");
        if (r.has("cov_hi")) pc.cov_eig_hi = r.number("cov_hi");
        if (r.has("ds")) pc.ds = r.number("ds");
        if (r.has("audit_every")) pc.audit_every = static_cast<int>(r.integer("audit_every"));
        r.finish();
    }
    for (Section& s : sections) {
        if (s.name != "obstacle") continue;
        SectionReader r(s, origin);
        const std::string kind = r.raw("kind");
        try {
            if (kind == "box") {
                scn.obstacles.push_back(
                    Obstacle::box(r.vec("lo", scn.dim), r.vec("hi", scn.dim)));
            } else if (kind == "polygon") {
                if (scn.dim != 2)
                    throw ValidationError(origin + ": polygon obstacles need dim=2");
                const int line = r.line_of("vertices");
                auto vals = parse_numbers(r.raw("vertices"), line);
                if (vals.size() % 2 != 0 || vals.size() < 6)
                    throw ParseError("polygon vertices: expected x y pairs", line);
                std::vector<Vec> verts;
                for (size_t i = 0; i < vals.size(); i += 2)
                    verts.push_back(Vec{vals[i], vals[i + 1]});
                scn.obstacles.push_back(Obstacle::polygon(std::move(verts)));
            } else {
                throw ValidationError(origin + ": obstacle kind must be box or polygon");
            }
        } catch (const ValidationError& e) {
            throw ValidationError(origin + ":" + std::to_string(s.line) + ": " +
                                  e.what());
        }
        r.finish();
    }

    scn.apply_defaults();
    scn.validate();
    return scn;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open scenario file: " + path);
    return parse_scenario(f, path);
}

void Scenario::apply_defaults() {
    const double diag = bounds.diagonal();
    if (planner.ed_min <= 0.0) planner.ed_min = 0.05 * diag;
    if (planner.ed_nbors <= 0.0) planner.ed_nbors = 3.0 * planner.ed_min;
    if (planner.cov_eig_hi <= 0.0) planner.cov_eig_hi = (diag / 4.0) * (diag / 4.0);
    if (planner.ds <= 0.0) planner.ds = planner.ed_min / 10.0;
}

void Scenario::validate() const {
    if (dim < 1 || dim > 3) throw ValidationError("scenario: dim must be 1..3");
    if (init.dim() != dim || goal.x_lo.dim() != dim || bounds.dim() != dim ||
        params.W.dim() != dim)
        throw ValidationError("scenario: inconsistent dimensions");
    if (!(params.alpha >= 0.0)) throw ValidationError("scenario: alpha must be >= 0");
    if (!is_pd(params.W)) throw ValidationError("scenario: W must be PD");
    if (!(chi2.value > 0.0)) throw ValidationError("scenario: chi2 must be > 0");
    if (std::abs(chi2_quantile(chi2.confidence, dim) - chi2.value) > 1e-6)
        throw ValidationError("scenario: chi2 value inconsistent with confidence");
    if (planner.n_nodes < 1) throw ValidationError("scenario: n_nodes must be >= 1");
    if (!(planner.ed_min > 0.0) || planner.ed_min > planner.ed_nbors)
        throw ValidationError("scenario: need 0 < ed_min <= ed_nbors");
    if (planner.cov_eig_lo < kPFloor)
        throw ValidationError("scenario: cov_lo must be >= covariance floor");
    if (planner.cov_eig_hi < planner.cov_eig_lo)
        throw ValidationError("scenario: cov_hi must be >= cov_lo");
    if (!(planner.ds > 0.0)) throw ValidationError("scenario: ds must be > 0");
    for (const Obstacle& o : obstacles) {
        if (o.kind == Obstacle::Kind::Box) {
            if (o.lo.dim() != dim) throw ValidationError("scenario: obstacle dim mismatch");
        } else if (dim != 2) {
            throw ValidationError("scenario: polygon obstacles need dim=2");
        }
    }
}

}  // namespace ri
