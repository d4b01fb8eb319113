#include "torwalk/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace torwalk {

namespace {

[[noreturn]] void reject(const std::string& ctx, const std::string& why) {
    throw std::invalid_argument(ctx + ": " + why);
}

void check_keys(const Json& j, const std::string& ctx, std::set<std::string> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) reject(ctx, "unknown key '" + it.key() + "'");
}

Rat rat_from_string(const std::string& s, const std::string& ctx) {
    Rat r;
    if (mpq_set_str(r.get_mpq_t(), s.c_str(), 10) != 0 || r.get_den() == 0)
        reject(ctx, "unparsable rational '" + s + "'");
    r.canonicalize();
    if (r.get_den() < 0) reject(ctx, "negative denominator in '" + s + "'");
    return r;
}

}  // namespace

FiniteSupportMeasure measure_from_json(const Json& j) {
    check_keys(j, "measure", {"dim", "mode", "generators", "atoms"});
    if (!j.contains("dim") || !j["dim"].is_number_integer()) reject("measure", "missing dim");
    const int d = j["dim"].get<int>();
    if (d < 1 || d > 8) reject("measure", "dim out of range [1,8]");
    const std::string mode_s = j.value("mode", std::string("exact"));
    if (mode_s != "exact" && mode_s != "float") reject("measure", "mode must be exact|float");

    std::vector<Generator> gens;
    for (const auto& g : j.value("generators", Json::array())) {
        check_keys(g, "generator", {"name", "tag", "decimal"});
        Generator gen;
        gen.name = g.value("name", std::string());
        if (g.contains("tag")) {
            const std::string tag = g["tag"].get<std::string>();
            if (tag == "golden")
                gen.kind = GeneratorKind::Golden;
            else if (tag == "sqrt2")
                gen.kind = GeneratorKind::Sqrt2;
            else if (tag == "liouville6")
                gen.kind = GeneratorKind::Liouville6;
            else
                reject("generator", "unknown tag '" + tag + "'");
        } else if (g.contains("decimal")) {
            gen.kind = GeneratorKind::Decimal;
            gen.decimal = g["decimal"].get<std::string>();
        } else {
            reject("generator", "needs tag or decimal");
        }
        gens.push_back(std::move(gen));
    }
    auto basis = std::make_shared<const GeneratorBasis>(std::move(gens));

    if (!j.contains("atoms") || !j["atoms"].is_array() || j["atoms"].empty())
        reject("measure", "missing atoms");
    std::vector<Atom> atoms;
    std::size_t atom_index = 0;
    for (const auto& a : j["atoms"]) {
        const std::string ctx = "atom " + std::to_string(atom_index);
        check_keys(a, ctx, {"matrix", "translation", "weight"});
        if (!a.contains("matrix")) reject(ctx, "missing matrix");
        IntMatrix m(d);
        const auto& rows = a["matrix"];
        if (!rows.is_array() || static_cast<int>(rows.size()) != d) reject(ctx, "matrix rows != dim");
        for (int i = 0; i < d; ++i) {
            const auto& row = rows[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<int>(row.size()) != d)
                reject(ctx, "matrix row length != dim");
            for (int jj = 0; jj < d; ++jj) {
                const auto& e = row[static_cast<std::size_t>(jj)];
                if (!e.is_number_integer()) reject(ctx, "non-integer matrix entry");
                m.at(i, jj) = Int(e.get<long>());
            }
        }
        if (m.det() != 1) reject(ctx, "matrix determinant != 1");

        std::vector<SymbolicScalar> tr;
        if (a.contains("translation")) {
            const auto& tj = a["translation"];
            if (static_cast<int>(tj.size()) != d) reject(ctx, "translation length != dim");
            for (const auto& coord : tj) {
                check_keys(coord, ctx + " translation", {"rational", "coeffs"});
                Rat r = coord.contains("rational")
                            ? rat_from_string(coord["rational"].get<std::string>(), ctx)
                            : Rat(0);
                std::vector<Int> coeffs(basis->size(), Int(0));
                if (coord.contains("coeffs")) {
                    const auto& cj = coord["coeffs"];
                    if (cj.size() != basis->size()) reject(ctx, "coeffs length != generator count");
                    for (std::size_t k = 0; k < coeffs.size(); ++k) {
                        if (!cj[k].is_number_integer()) reject(ctx, "non-integer coefficient");
                        coeffs[k] = Int(cj[k].get<long>());
                    }
                }
                tr.emplace_back(std::move(r), std::move(coeffs));
            }
        } else {
            tr.assign(static_cast<std::size_t>(d),
                      SymbolicScalar::rational_value(Rat(0), basis->size()));
        }
        if (!a.contains("weight")) reject(ctx, "missing weight");
        Rat w = rat_from_string(a["weight"].get<std::string>(), ctx);

        atoms.push_back(Atom{GroupElement::exact(std::move(m), std::move(tr), basis), std::move(w)});
        ++atom_index;
    }

    Rat total(0);
    for (const auto& a : atoms) total += a.weight;
    if (total != 1) reject("measure", "weights sum != 1 (got " + total.get_str() + ")");

    FiniteSupportMeasure mu(std::move(atoms), Mode::Exact, d, basis);
    return mode_s == "float" ? mu.to_float() : mu;
}

Json measure_to_json(const FiniteSupportMeasure& mu) {
    Json j;
    j["dim"] = mu.dim();
    j["mode"] = mu.mode() == Mode::Exact ? "exact" : "float";
    Json gens = Json::array();
    if (mu.basis()) {
        for (std::size_t i = 0; i < mu.basis()->size(); ++i) {
            const auto& g = mu.basis()->gen(i);
            Json gj;
            gj["name"] = g.name;
            switch (g.kind) {
                case GeneratorKind::Golden: gj["tag"] = "golden"; break;
                case GeneratorKind::Sqrt2: gj["tag"] = "sqrt2"; break;
                case GeneratorKind::Liouville6: gj["tag"] = "liouville6"; break;
                case GeneratorKind::Decimal: gj["decimal"] = g.decimal; break;
            }
            gens.push_back(gj);
        }
    }
    j["generators"] = gens;
    Json atoms = Json::array();
    for (const auto& a : mu.atoms()) {
        Json aj;
        Json rows = Json::array();
        for (int i = 0; i < mu.dim(); ++i) {
            Json row = Json::array();
            for (int k = 0; k < mu.dim(); ++k)
                row.push_back(static_cast<long long>(a.g.linear().at(i, k).get_si()));
            rows.push_back(row);
        }
        aj["matrix"] = rows;
        Json tr = Json::array();
        if (mu.mode() == Mode::Exact) {
            for (const auto& c : a.g.translation_exact()) {
                Json cj;
                cj["rational"] = c.rational().get_str();
                Json coeffs = Json::array();
                for (const auto& v : c.coeffs())
                    coeffs.push_back(static_cast<long long>(v.get_si()));
                cj["coeffs"] = coeffs;
                tr.push_back(cj);
            }
        } else {
            for (double v : a.g.translation_float()) {
                Json cj;
                std::ostringstream os;
                os.precision(17);
                os << v;
                cj["rational"] = os.str();
                tr.push_back(cj);
            }
        }
        aj["translation"] = tr;
        aj["weight"] = a.weight.get_str();
        atoms.push_back(aj);
    }
    j["atoms"] = atoms;
    return j;
}

Json preset_measure(const std::string& name) {
    // A = [[2,1],[1,1]], B = [[0,1],[-1,0]], BA = [[1,1],[-2,-1]]
    Json j;
    j["dim"] = 2;
    j["mode"] = "exact";
    if (name == "golden") {
        j["generators"] = Json::array({Json{{"name", "gamma"}, {"tag", "golden"}}});
        j["atoms"] = Json::array(
            {Json{{"matrix", Json::array({Json::array({2, 1}), Json::array({1, 1})})},
                  {"translation",
                   Json::array({Json{{"rational", "0"}, {"coeffs", Json::array({1})}},
                                Json{{"rational", "0"}, {"coeffs", Json::array({0})}}})},
                  {"weight", "1/2"}},
             Json{{"matrix", Json::array({Json::array({1, 1}), Json::array({-2, -1})})},
                  {"translation",
                   Json::array({Json{{"rational", "0"}, {"coeffs", Json::array({0})}},
                                Json{{"rational", "0"}, {"coeffs", Json::array({-1})}}})},
                  {"weight", "1/2"}}});
        return j;
    }
    if (name == "linear-only") {
        j["generators"] = Json::array();
        j["atoms"] = Json::array(
            {Json{{"matrix", Json::array({Json::array({2, 1}), Json::array({1, 1})})},
                  {"weight", "1/2"}},
             Json{{"matrix", Json::array({Json::array({1, 1}), Json::array({-2, -1})})},
                  {"weight", "1/2"}}});
        return j;
    }
    if (name == "rational-v") {
        // 1/2 delta_{(A,0)} + 1/2 delta_{(BA, v)}, v = (1/3, 0)
        j["generators"] = Json::array();
        j["atoms"] = Json::array(
            {Json{{"matrix", Json::array({Json::array({2, 1}), Json::array({1, 1})})},
                  {"weight", "1/2"}},
             Json{{"matrix", Json::array({Json::array({1, 1}), Json::array({-2, -1})})},
                  {"translation", Json::array({Json{{"rational", "1/3"}},
                                               Json{{"rational", "0"}}})},
                  {"weight", "1/2"}}});
        return j;
    }
    if (name == "golden-v") {
        // same matrices as rational-v but v = (gamma, 0)
        j["generators"] = Json::array({Json{{"name", "gamma"}, {"tag", "golden"}}});
        j["atoms"] = Json::array(
            {Json{{"matrix", Json::array({Json::array({2, 1}), Json::array({1, 1})})},
                  {"translation",
                   Json::array({Json{{"rational", "0"}, {"coeffs", Json::array({0})}},
                                Json{{"rational", "0"}, {"coeffs", Json::array({0})}}})},
                  {"weight", "1/2"}},
             Json{{"matrix", Json::array({Json::array({1, 1}), Json::array({-2, -1})})},
                  {"translation",
                   Json::array({Json{{"rational", "0"}, {"coeffs", Json::array({1})}},
                                Json{{"rational", "0"}, {"coeffs", Json::array({0})}}})},
                  {"weight", "1/2"}}});
        return j;
    }
    throw std::invalid_argument("unknown preset '" + name + "'");
}

TestFunction test_function_from_json(const Json& j, const FiniteSupportMeasure& mu) {
    check_keys(j, "test_function", {"kind", "c", "q", "alpha", "value"});
    const std::string kind = j.value("kind", std::string());
    if (kind == "re_ec" || kind == "im_ec") {
        std::vector<long> c;
        for (const auto& v : j.at("c")) c.push_back(v.get<long>());
        if (static_cast<int>(c.size()) != mu.dim())
            reject("test_function", "frequency length != dim");
        return kind == "re_ec" ? tf_re_ec(std::move(c)) : tf_im_ec(std::move(c));
    }
    if (kind == "fq") return tf_fq(mu.dim(), j.at("q").get<int>(), j.value("alpha", 1.0));
    if (kind == "dist0") return tf_dist0_euclid(mu.dim());
    if (kind == "coboundary_dist0") return tf_coboundary_dist0(mu);
    if (kind == "constant") return tf_constant(mu.dim(), j.value("value", 1.0));
    reject("test_function", "unknown kind '" + kind + "'");
}

ExperimentConfig config_from_json(Json j, const std::string& source) {
    check_keys(j, "config",
               {"kind", "measure", "params", "seed", "threads", "out", "thresholds"});
    ExperimentConfig cfg;
    cfg.source_path = source;
    if (!j.contains("kind")) reject("config", "missing kind");
    cfg.kind = j["kind"].get<std::string>();

    static const std::map<std::string, std::set<std::string>> kinds = {
        {"walk", {"n", "mode", "x0", "x0_exact"}},
        {"equidist", {"n_list", "K", "samples"}},
        {"fourier-moment", {"c", "n_list", "L_list"}},
        {"lyapunov", {"n", "reps", "projection"}},
        {"ldp", {"lambda_ref", "epsilon", "n_list", "reps"}},
        {"translation-growth", {"lambda_ref", "epsilon", "n_list", "reps", "x"}},
        {"sigma2", {"f", "N", "reps", "mode"}},
        {"clt", {"f", "n", "reps", "oracle_paths", "sigma2"}},
        {"asclt", {"f", "phi", "n_max", "trajectories", "sigma2_ref"}},
        {"nonconc", {"f", "eps_list", "n_list", "reps", "scale_by_norm"}},
        {"lln", {"f", "n", "envelope_reps"}},
        {"dioph", {"set", "Q_grid", "qd_max"}},
        {"xq", {"x", "B", "Q"}},
        {"gnm", {"M", "n_list", "reps"}},
        {"detrate", {"n", "reps", "method"}},
        {"collide", {"n_max", "x", "lifted"}},
        {"near", {"x", "y", "r", "n", "method", "reps"}},
        {"counterexample", {"n", "reps", "sigma_reps", "N"}}};
    auto kind_it = kinds.find(cfg.kind);
    if (kind_it == kinds.end()) reject("config", "unknown kind '" + cfg.kind + "'");
    if (j.contains("params")) check_keys(j["params"], "params(" + cfg.kind + ")", kind_it->second);

    Json measure_j;
    if (!j.contains("measure")) {
        measure_j = preset_measure("golden");
    } else if (j["measure"].is_string()) {
        const std::string ref = j["measure"].get<std::string>();
        if (ref == "golden" || ref == "linear-only" || ref == "rational-v" || ref == "golden-v") {
            measure_j = preset_measure(ref);
        } else {
            std::ifstream in(ref);
            if (!in) reject("config", "cannot open measure file '" + ref + "'");
            in >> measure_j;
        }
    } else {
        measure_j = j["measure"];
    }
    // validates dim/det/weights; throws with the offending atom index
    (void)measure_from_json(measure_j);
    cfg.measure_json = measure_j;

    cfg.params = j.value("params", Json::object());
    cfg.seed = j.value("seed", static_cast<std::uint64_t>(1));
    cfg.threads = j.value("threads", 1);
    cfg.out_dir = j.value("out", std::string("out"));
    if (cfg.threads < 1 || cfg.threads > 64) reject("config", "threads out of range");

    if (const char* env_seed = std::getenv("SEED"))
        cfg.seed = static_cast<std::uint64_t>(std::strtoull(env_seed, nullptr, 10));
    if (const char* env_threads = std::getenv("THREADS"))
        cfg.threads = static_cast<int>(std::strtol(env_threads, nullptr, 10));

    cfg.resolved = Json{{"kind", cfg.kind},
                        {"measure", measure_j},
                        {"params", cfg.params},
                        {"seed", cfg.seed},
                        {"threads", cfg.threads},
                        {"out", cfg.out_dir}};
    if (j.contains("thresholds")) cfg.resolved["thresholds"] = j["thresholds"];
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config '" + path.string() + "'");
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument("config parse error in " + path.string() + ": " + e.what());
    }
    return config_from_json(std::move(j), path.string());
}

}  // namespace torwalk
