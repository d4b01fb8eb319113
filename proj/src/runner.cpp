#include <chrono>
#include <filesystem>

#include "torwalk/config.hpp"
#include "torwalk/diophantine.hpp"
#include "torwalk/errors.hpp"
#include "torwalk/limit_stats.hpp"
#include "torwalk/report.hpp"

namespace torwalk {

namespace fs = std::filesystem;

namespace {

std::vector<long> longs_from(const Json& j, std::vector<long> defaults) {
    if (j.is_null()) return defaults;
    std::vector<long> out;
    for (const auto& v : j) out.push_back(v.get<long>());
    return out;
}

std::vector<double> doubles_from(const Json& j, std::vector<double> defaults) {
    if (j.is_null()) return defaults;
    std::vector<double> out;
    for (const auto& v : j) out.push_back(v.get<double>());
    return out;
}

SymbolicScalar scalar_from_json(const Json& j, const BasisPtr& basis) {
    Rat r(0);
    if (j.contains("rational")) {
        if (mpq_set_str(r.get_mpq_t(), j["rational"].get<std::string>().c_str(), 10) != 0)
            throw std::invalid_argument("bad rational in point spec");
        r.canonicalize();
    }
    std::vector<Int> coeffs(basis->size(), Int(0));
    if (j.contains("coeffs")) {
        const auto& cj = j["coeffs"];
        if (cj.size() != coeffs.size())
            throw std::invalid_argument("coeffs length != generator count");
        for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] = Int(cj[k].get<long>());
    }
    return SymbolicScalar(std::move(r), std::move(coeffs));
}

TorusPoint exact_point_from_json(const Json& j, int d, const BasisPtr& basis) {
    if (j.is_null()) return TorusPoint::exact_zero(d, basis);
    std::vector<SymbolicScalar> coords;
    for (const auto& cj : j) coords.push_back(scalar_from_json(cj, basis));
    if (static_cast<int>(coords.size()) != d)
        throw std::invalid_argument("point has wrong dimension");
    return TorusPoint::exact(std::move(coords), basis);
}

// thresholds: { "<result key>": {"max": v} | {"min": v} }
bool thresholds_pass(const Json& resolved, Json& summary) {
    if (!resolved.contains("thresholds")) return true;
    bool ok = true;
    Json checks = Json::array();
    for (auto it = resolved["thresholds"].begin(); it != resolved["thresholds"].end(); ++it) {
        const std::string key = it.key();
        if (!summary["result"].contains(key))
            throw std::invalid_argument("threshold on unknown result key '" + key + "'");
        const double v = summary["result"][key].get<double>();
        bool pass = true;
        if (it.value().contains("max")) pass = pass && v <= it.value()["max"].get<double>();
        if (it.value().contains("min")) pass = pass && v >= it.value()["min"].get<double>();
        checks.push_back(Json{{"key", key}, {"value", v}, {"pass", pass}});
        ok = ok && pass;
    }
    summary["threshold_checks"] = checks;
    return ok;
}

Json rate_fit_json(std::span<const long> ns, std::span<const double> values) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < ns.size(); ++i)
        if (values[i] > 0.0) {
            xs.push_back(static_cast<double>(ns[i]));
            ys.push_back(values[i]);
        }
    Json j;
    j["positive_points"] = xs.size();
    if (xs.size() >= 4) {
        RateFit fit = rate_fit(xs, ys);
        j["C"] = fit.C;
        j["t"] = fit.t;
        j["r2"] = fit.r2;
    }
    return j;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    const fs::path out(cfg.out_dir);
    const FiniteSupportMeasure mu = measure_from_json(cfg.measure_json);
    RngStream rng(cfg.seed, 0);
    const Json& p = cfg.params;
    const int threads = cfg.threads;

    Json summary;
    summary["config"] = cfg.resolved;
    summary["measure_digest"] = mu.digest();
    summary["result"] = Json::object();
    Json& res = summary["result"];
    const auto t_start = std::chrono::steady_clock::now();

    if (cfg.kind == "walk") {
        const long n = p.value("n", 100L);
        const bool exact = p.value("mode", std::string("float")) == "exact";
        CsvWriter csv(out / "walk.csv", {"k", "coords(torus)", "atom_index"});
        if (exact) {
            TorusPoint x0 = exact_point_from_json(p.value("x0_exact", Json()), mu.dim(),
                                                  mu.basis());
            Trajectory t = simulate_walk(mu, x0, n, rng);
            for (std::size_t k = 0; k < t.points.size(); ++k) {
                csv.field(static_cast<long>(k));
                csv.field(t.points[k].encode());
                csv.field(k == 0 ? std::string("-") : std::to_string(t.word[k - 1]));
                csv.end_row();
            }
            res["final"] = t.points.back().encode();
        } else {
            auto x0v = doubles_from(p.value("x0", Json()),
                                    std::vector<double>(static_cast<std::size_t>(mu.dim()), 0.0));
            Trajectory t = simulate_walk(mu.to_float(), TorusPoint::floating(x0v), n, rng);
            for (std::size_t k = 0; k < t.points.size(); ++k) {
                csv.field(static_cast<long>(k));
                csv.field(t.points[k].encode());
                csv.field(k == 0 ? std::string("-") : std::to_string(t.word[k - 1]));
                csv.end_row();
            }
            res["final"] = t.points.back().encode();
        }
        res["n"] = n;
    } else if (cfg.kind == "equidist") {
        std::vector<long> ns = longs_from(p.value("n_list", Json()),
                                          {2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16,
                                           17, 18, 19, 20});
        const long K = p.value("K", 5L);
        const long samples = p.value("samples", 1000000L);
        long n_max = 0;
        for (long n : ns) n_max = std::max(n_max, n);
        FloatWalker walker(mu);
        std::vector<FourierAccumulator> accs;
        accs.reserve(ns.size());
        for (std::size_t i = 0; i < ns.size(); ++i) accs.emplace_back(mu.dim(), K);
        // one walk feeds every checkpoint; samples stay independent across
        // replicas, which is what the per-n statistics need
        std::vector<double> x(static_cast<std::size_t>(mu.dim()));
        for (long r = 0; r < samples; ++r) {
            RngStream stream = rng.derived(static_cast<std::uint64_t>(r));
            std::fill(x.begin(), x.end(), 0.0);
            for (long k = 1; k <= n_max; ++k) {
                walker.step(x, stream);
                for (std::size_t i = 0; i < ns.size(); ++i)
                    if (ns[i] == k) accs[i].add(x);
            }
        }
        CsvWriter csv(out / "equidist.csv",
                      {"n", "statistic(max_abs_fourier)", "stderr", "method", "seed"});
        std::vector<double> vals;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const double v = accs[i].max_abs();
            vals.push_back(v);
            csv.field(ns[i]);
            csv.field(v);
            csv.field(1.0 / std::sqrt(static_cast<double>(samples)));
            csv.field(std::string("mc"));
            csv.field(static_cast<long>(cfg.seed));
            csv.end_row();
        }
        res["fit"] = rate_fit_json(ns, vals);
        res["K"] = K;
        res["samples"] = samples;
        if (!vals.empty()) {
            res["first"] = vals.front();
            res["last"] = vals.back();
        }
        // second proxy: deviation over the declared test bank at the last n
        {
            auto bank = default_test_bank(mu.dim());
            const long bank_samples = std::min<long>(samples, 100000L);
            EmpiricalTorusMeasure last;
            last.d = mu.dim();
            last.samples.reserve(static_cast<std::size_t>(bank_samples * mu.dim()));
            for (long r = 0; r < bank_samples; ++r) {
                RngStream stream = rng.derived(0x100000000ull + static_cast<std::uint64_t>(r));
                std::fill(x.begin(), x.end(), 0.0);
                for (long k = 1; k <= n_max; ++k) walker.step(x, stream);
                last.samples.insert(last.samples.end(), x.begin(), x.end());
            }
            res["test_bank_deviation"] = test_bank_deviation(last, bank);
            res["test_bank_size"] = bank.size();
        }
    } else if (cfg.kind == "fourier-moment") {
        std::vector<long> cvec = longs_from(p.value("c", Json()), {1, 0});
        FrequencyVector c{cvec};
        std::vector<long> ns = longs_from(p.value("n_list", Json()), {1, 2, 3, 4, 5, 6});
        std::vector<long> Ls = longs_from(p.value("L_list", Json()), {1, 2});
        CsvWriter csv(out / "fourier_moment.csv",
                      {"n", "L", "affine(moment)", "linear(moment)", "linear_exact",
                       "imag_residue"});
        double max_violation = -1e300;
        long n_top = 0;
        for (long n : ns)
            for (long L : Ls) {
                FourierMoment m = fourier_moment_exact(mu, c, n, static_cast<int>(L));
                csv.field(n);
                csv.field(L);
                csv.field(m.affine);
                csv.field(m.linear);
                csv.field(m.linear_exact.get_str());
                csv.field(m.imag_residue);
                csv.end_row();
                max_violation = std::max(max_violation, m.affine - m.linear);
                n_top = std::max(n_top, n);
            }
        res["max_violation"] = max_violation;  // <= 0 up to rounding
        res["power_support_atoms"] = convolve_power(mu, n_top).support_size();
    } else if (cfg.kind == "lyapunov") {
        const long n = p.value("n", 10000L);
        const long reps = p.value("reps", 100L);
        const std::string proj = p.value("projection", std::string("linear"));
        MatrixAtoms atoms = proj == "affine" ? affine_embed(mu) : linear_atoms(mu);
        LyapunovEstimate est = lyapunov_top(atoms, n, reps, rng, threads);
        res["lambda1_hat"] = est.lambda1_hat;
        res["stderr"] = est.stderr_;
        res["n"] = est.n;
        res["reps"] = est.reps;
        res["units"] = "nats per step";
        res["norm"] = "spectral";
        res["renorm_stride"] = kRenormStride;
        res["power_iteration_tol"] = 1e-10;
    } else if (cfg.kind == "ldp") {
        if (!p.contains("lambda_ref"))
            throw std::invalid_argument("ldp: lambda_ref is a required input");
        const double lambda_ref = p["lambda_ref"].get<double>();
        const double eps = p.value("epsilon", 0.2);
        std::vector<long> ns = longs_from(p.value("n_list", Json()), {50, 100, 200, 400});
        const long reps = p.value("reps", 10000L);
        TailCurve tc = ldp_tail(linear_atoms(mu), lambda_ref, eps, ns, reps, rng, threads);
        CsvWriter csv(out / "ldp.csv",
                      {"n", "tail(probability)", "stderr", "method", "seed"});
        for (std::size_t i = 0; i < tc.ns.size(); ++i) {
            csv.field(tc.ns[i]);
            csv.field(tc.probs[i]);
            csv.field(tc.stderrs[i]);
            csv.field(std::string("mc"));
            csv.field(static_cast<long>(cfg.seed));
            csv.end_row();
        }
        res["fit"] = rate_fit_json(tc.ns, tc.probs);
        bool all_zero = true;
        for (double v : tc.probs) all_zero = all_zero && v == 0.0;
        res["all_zero"] = all_zero;
        res["epsilon"] = eps;
        res["lambda_ref"] = lambda_ref;
    } else if (cfg.kind == "translation-growth") {
        if (!p.contains("lambda_ref"))
            throw std::invalid_argument("translation-growth: lambda_ref is a required input");
        const double lambda_ref = p["lambda_ref"].get<double>();
        const double eps = p.value("epsilon", 0.2);
        std::vector<long> ns = longs_from(p.value("n_list", Json()), {100, 200, 400});
        const long reps = p.value("reps", 10000L);
        auto x = doubles_from(p.value("x", Json()),
                              std::vector<double>(static_cast<std::size_t>(mu.dim()), 0.0));
        bool linear_only = true;
        for (const auto& atom : mu.atoms())
            for (double v : atom.g.translation_numeric())
                if (v != 0.0) linear_only = false;
        TailCurve tc = translation_growth(mu, x, lambda_ref, eps, ns, reps, rng, threads);
        CsvWriter csv(out / "translation_growth.csv",
                      {"n", "tail(probability)", "stderr", "method", "seed"});
        for (std::size_t i = 0; i < tc.ns.size(); ++i) {
            csv.field(tc.ns[i]);
            csv.field(tc.probs[i]);
            csv.field(tc.stderrs[i]);
            csv.field(std::string("mc"));
            csv.field(static_cast<long>(cfg.seed));
            csv.end_row();
        }
        res["fit"] = rate_fit_json(tc.ns, tc.probs);
        res["warning_linear_only"] = linear_only;
        res["epsilon"] = eps;
    } else if (cfg.kind == "sigma2") {
        TestFunction f = test_function_from_json(
            p.value("f", Json{{"kind", "re_ec"}, {"c", Json::array({1, 0})}}), mu);
        const int N = p.value("N", 25);
        const long reps = p.value("reps", 30000L);
        const std::string mode_s = p.value("mode", std::string("mc"));
        VarianceEstimate est =
            sigma2_estimate(f, mu, N, mode_s == "grid" ? IntegrationMode::Grid
                                                       : IntegrationMode::McUniform,
                            rng, reps, threads);
        res["sigma2_hat"] = est.sigma2_hat;
        res["stderr"] = est.stderr_;
        res["component_g2"] = est.comp_g2;
        res["component_pg2"] = est.comp_pg2;
        res["N"] = est.N;
        res["negative_flag"] = est.negative_flag;
        res["f"] = f.id;
    } else if (cfg.kind == "clt") {
        TestFunction f = test_function_from_json(
            p.value("f", Json{{"kind", "re_ec"}, {"c", Json::array({1, 0})}}), mu);
        const long n = p.value("n", 2000L);
        const long reps = p.value("reps", 5000L);
        const long oracle_paths = p.value("oracle_paths", 100000L);
        std::vector<double> x0(static_cast<std::size_t>(mu.dim()), 0.0);
        double sigma2;
        if (p.contains("sigma2")) {
            sigma2 = p["sigma2"].get<double>();
        } else {
            VarianceEstimate est = sigma2_estimate(f, mu, 25, IntegrationMode::McUniform,
                                                   rng.derived(77), 30000, threads);
            sigma2 = std::max(0.0, est.sigma2_hat);
        }
        CltSamples s = clt_sample(f, mu, x0, n, reps, rng.derived(1), threads);
        CltSamples oracle = gaussian_walk_oracle(sigma2, n, oracle_paths, rng.derived(2), threads);
        const double sd = std::sqrt(sigma2);
        const double ks_final = ks_statistic(
            s.final_value, [sd](double x) { return normal_cdf(x, 0.0, sd); });
        const double ks_runmax = ks_two_sample(s.running_max, oracle.running_max);
        RunningStats var;
        for (double v : s.final_value) var.add(v);
        res["sigma2_used"] = sigma2;
        res["ks_final_vs_normal"] = ks_final;
        res["ks_runmax_vs_oracle"] = ks_runmax;
        res["sample_variance"] = var.variance();
        res["n"] = n;
        res["reps"] = reps;
        res["oracle_paths"] = oracle_paths;
    } else if (cfg.kind == "asclt") {
        TestFunction f = test_function_from_json(
            p.value("f", Json{{"kind", "re_ec"}, {"c", Json::array({1, 0})}}), mu);
        const long n_max = p.value("n_max", 100000L);
        const long trajectories = p.value("trajectories", 5L);
        const std::string phi_s = p.value("phi", std::string("x2"));
        std::function<double(double)> phi;
        if (phi_s == "x2")
            phi = [](double t) { return t * t; };
        else if (phi_s == "cos")
            phi = [](double t) { return std::cos(t); };
        else
            throw std::invalid_argument("asclt: phi must be x2|cos");
        std::vector<double> x0(static_cast<std::size_t>(mu.dim()), 0.0);
        CsvWriter csv(out / "asclt.csv", {"trajectory", "n", "average"});
        Json finals = Json::array();
        for (long t = 0; t < trajectories; ++t) {
            AscltSeries s = asclt_average(f, mu, x0, phi, n_max, rng.derived(
                                              static_cast<std::uint64_t>(t)), {});
            for (std::size_t i = 0; i < s.ns.size(); ++i) {
                csv.field(t);
                csv.field(s.ns[i]);
                csv.field(s.averages[i]);
                csv.end_row();
            }
            finals.push_back(s.averages.back());
        }
        res["final_averages"] = finals;
        res["phi"] = phi_s;
        res["n_max"] = n_max;
        // dual-route cross-validation of sigma^2; a gap beyond 25% flags the
        // Neumann truncation as too short
        if (phi_s == "x2" && p.contains("sigma2_ref")) {
            const double ref = p["sigma2_ref"].get<double>();
            double mean = 0.0;
            for (const auto& v : finals) mean += v.get<double>();
            mean /= static_cast<double>(finals.size());
            res["sigma2_route_mean"] = mean;
            res["sigma2_route_disagreement"] = ref != 0.0 ? std::abs(mean - ref) / std::abs(ref)
                                                          : std::abs(mean);
            res["truncation_flag"] =
                ref != 0.0 && std::abs(mean - ref) / std::abs(ref) > 0.25;
        }
    } else if (cfg.kind == "nonconc") {
        TestFunction f = test_function_from_json(
            p.value("f", Json{{"kind", "re_ec"}, {"c", Json::array({1, 0})}}), mu);
        auto eps_list = doubles_from(p.value("eps_list", Json()), {0.2});
        std::vector<long> ns = longs_from(p.value("n_list", Json()), {50, 100, 200, 400});
        const long reps = p.value("reps", 100000L);
        const bool scale = p.value("scale_by_norm", true);
        std::vector<double> x0(static_cast<std::size_t>(mu.dim()), 0.0);
        auto curves = nonconcentration_curve(f, mu, x0, eps_list, ns, reps, rng, scale, threads);
        CsvWriter csv(out / "nonconc.csv",
                      {"eps", "n", "exceedance(probability)", "stderr", "method", "seed"});
        Json fits = Json::array();
        for (const auto& c : curves) {
            for (std::size_t i = 0; i < c.ns.size(); ++i) {
                csv.field(c.eps);
                csv.field(c.ns[i]);
                csv.field(c.probs[i]);
                csv.field(c.stderrs[i]);
                csv.field(std::string("mc"));
                csv.field(static_cast<long>(cfg.seed));
                csv.end_row();
            }
            Json fj = rate_fit_json(c.ns, c.probs);
            fj["eps"] = c.eps;
            fits.push_back(fj);
        }
        res["fits"] = fits;
        res["threshold_scale"] = curves.empty() ? 1.0 : curves[0].threshold_scale;
    } else if (cfg.kind == "lln") {
        TestFunction f = test_function_from_json(
            p.value("f", Json{{"kind", "re_ec"}, {"c", Json::array({1, 0})}}), mu);
        const long n = p.value("n", 10000L);
        const long env = p.value("envelope_reps", 100L);
        std::vector<double> x0(static_cast<std::size_t>(mu.dim()), 0.0);
        LlnResult r = lln_check(f, mu, x0, n, rng, env);
        CsvWriter csv(out / "lln.csv", {"n", "S_n_over_n", "method", "seed"});
        for (std::size_t i = 0; i < r.ns.size(); ++i) {
            csv.field(r.ns[i]);
            csv.field(r.series[i]);
            csv.field(std::string("mc"));
            csv.field(static_cast<long>(cfg.seed));
            csv.end_row();
        }
        res["envelope_max"] = r.envelope_max;
        res["envelope_trajectories"] = r.envelope_trajectories;
        res["final"] = r.series.back();
    } else if (cfg.kind == "dioph") {
        CoefficientSet F;
        const Json set = p.value("set", Json("measure"));
        if (set.is_string() && set.get<std::string>() == "measure") {
            F = coefficient_set(mu);
            // drop torus-zero coefficients; they carry no diophantine content
            std::vector<SymbolicScalar> kept;
            for (auto& v : F.values)
                if (!v.torus_zero()) kept.push_back(v);
            F.values = std::move(kept);
        } else {
            std::vector<Generator> gens;
            for (const auto& g : set.at("generators")) {
                Generator gen;
                gen.name = g.value("name", std::string("g"));
                const std::string tag = g.value("tag", std::string());
                if (tag == "golden") gen.kind = GeneratorKind::Golden;
                else if (tag == "sqrt2") gen.kind = GeneratorKind::Sqrt2;
                else if (tag == "liouville6") gen.kind = GeneratorKind::Liouville6;
                else {
                    gen.kind = GeneratorKind::Decimal;
                    gen.decimal = g.at("decimal").get<std::string>();
                }
                gens.push_back(gen);
            }
            F.basis = std::make_shared<const GeneratorBasis>(std::move(gens));
            for (const auto& cj : set.at("coeffs")) F.values.push_back(scalar_from_json(cj, F.basis));
        }
        if (F.values.empty()) throw std::invalid_argument("dioph: empty coefficient set");
        std::vector<Int> grid;
        for (const auto& q : p.value("Q_grid", Json::array({10, 100, 1000, 10000, 100000}))) {
            if (q.is_string())
                grid.emplace_back(q.get<std::string>());
            else
                grid.emplace_back(q.get<long>());
        }
        DiophantineReport rep = diophantine_margin(F, grid);
        CsvWriter csv(out / "dioph.csv", {"Q", "neg_log_margin", "margin"});
        for (std::size_t i = 0; i < rep.q_grid.size(); ++i) {
            csv.field(rep.q_grid[i].get_str());
            csv.field(rep.neg_log_margin[i]);
            csv.field(rep.margin_sci[i]);
            csv.end_row();
        }
        res["L_hat"] = rep.L_hat;
        res["r2"] = rep.r2;
        res["fast_path"] = rep.used_fast_path;
        if (F.values.size() == 1 && p.contains("qd_max")) {
            Int qd(p["qd_max"].get<std::string>());
            res["min_q_dist"] = min_q_dist(F.values[0], *F.basis, qd);
        }
    } else if (cfg.kind == "xq") {
        TorusPoint x = exact_point_from_json(p.at("x"), mu.dim(), mu.basis());
        std::vector<std::vector<SymbolicScalar>> B;
        if (p.contains("B")) {
            for (const auto& bj : p["B"]) {
                std::vector<SymbolicScalar> vec;
                for (const auto& cj : bj) vec.push_back(scalar_from_json(cj, mu.basis()));
                B.push_back(std::move(vec));
            }
        } else {
            for (const auto& atom : mu.atoms()) B.push_back(atom.g.translation_exact());
        }
        const long Q = p.value("Q", 3L);
        XqWitness w = xq_membership(x, B, Q);
        res["member"] = w.member;
        res["witness"] = w.encode();
    } else if (cfg.kind == "gnm") {
        const double M = p.at("M").get<double>();
        std::vector<long> ns = longs_from(p.value("n_list", Json()), {5, 10, 20, 40});
        const long reps = p.value("reps", 10000L);
        MatrixAtoms atoms = linear_atoms(mu);
        CsvWriter csv(out / "gnm.csv", {"n", "fraction(probability)", "method", "seed"});
        Json fractions = Json::array();
        for (long n : ns) {
            const double fr = gnm_proxy_fraction(atoms, n, M, reps,
                                                 rng.derived(static_cast<std::uint64_t>(n)));
            csv.field(n);
            csv.field(fr);
            csv.field(std::string("mc"));
            csv.field(static_cast<long>(cfg.seed));
            csv.end_row();
            fractions.push_back(fr);
        }
        res["fractions"] = fractions;
        res["M"] = M;
    } else if (cfg.kind == "detrate") {
        const long n = p.value("n", 1L);
        const long reps = p.value("reps", 10000L);
        const std::string method = p.value("method", n <= 2 ? std::string("exact")
                                                            : std::string("mc"));
        if (method == "exact") {
            Rat r = det_nondegeneracy_rate_exact(mu, n);
            res["rate_exact"] = r.get_str();
            res["rate"] = r.get_d();
        } else {
            res["rate"] = det_nondegeneracy_rate_mc(mu, n, reps, rng);
        }
        res["n"] = n;
        res["method"] = method;
    } else if (cfg.kind == "collide") {
        const long n_max = p.value("n_max", 8L);
        const bool lifted = p.value("lifted", false);
        TorusPoint x = exact_point_from_json(p.value("x", Json()), mu.dim(), mu.basis());
        CollisionTable tab;
        if (lifted) {
            FiniteSupportMeasure lm = lift_rational_part(mu);
            auto lx = lift_point(x);
            tab = collision_mass_lifted(lm, lx, n_max);
        } else {
            tab = collision_mass(mu, x, n_max);
        }
        CsvWriter csv(out / "collide.csv",
                      {"n", "mass(exact probability)", "mass_float", "image_atoms"});
        std::vector<double> mf;
        for (std::size_t i = 0; i < tab.ns.size(); ++i) {
            csv.field(tab.ns[i]);
            csv.field(tab.masses[i].get_str());
            csv.field(tab.masses[i].get_d());
            csv.field(tab.image_counts[i]);
            csv.end_row();
            mf.push_back(tab.masses[i].get_d());
        }
        bool strict = true;
        for (std::size_t i = 1; i < tab.masses.size(); ++i)
            strict = strict && tab.masses[i] < tab.masses[i - 1];
        res["strictly_decreasing"] = strict;
        res["fit"] = rate_fit_json(tab.ns, mf);
        res["final_mass"] = mf.empty() ? 1.0 : mf.back();
    } else if (cfg.kind == "near") {
        TorusPoint x = exact_point_from_json(p.value("x", Json()), mu.dim(), mu.basis());
        TorusPoint y = exact_point_from_json(p.value("y", Json()), mu.dim(), mu.basis());
        const double r = p.value("r", 1e-6);
        const long n = p.value("n", 1L);
        const std::string method = p.value("method", std::string("exact"));
        const long reps = p.value("reps", 10000L);
        NearMass nm = near_coincidence_mass(mu, x, y, r, n,
                                            method == "exact" ? Method::Exact : Method::Mc, rng,
                                            reps);
        res["mass"] = nm.value;
        res["stderr"] = nm.stderr_;
        res["guard_flag"] = nm.guard_flag;
    } else if (cfg.kind == "counterexample") {
        // the zero-variance pipeline: telescoping residual + sigma^2
        const long n = p.value("n", 1000L);
        const long reps = p.value("reps", 10000L);
        const long sigma_reps = p.value("sigma_reps", 30000L);
        std::vector<std::vector<double>> starts = {{0.0, 0.0}, {0.25, 0.5}, {0.7, 0.1}};
        BoundedSumResult bs = bounded_sum_check(mu, starts, n, reps, rng.derived(1));
        TestFunction f = tf_coboundary_dist0(mu);
        VarianceEstimate est = sigma2_estimate(f, mu, p.value("N", 25),
                                               IntegrationMode::McUniform, rng.derived(2),
                                               sigma_reps, threads);
        res["max_residual"] = bs.max_residual;
        res["max_abs_sum"] = bs.max_abs_sum;
        res["bound_sqrt2"] = std::numbers::sqrt2;
        res["trajectories"] = bs.trajectories;
        res["sigma2_hat"] = est.sigma2_hat;
        res["sigma2_stderr"] = est.stderr_;
        res["sigma2_consistent_with_zero"] =
            std::abs(est.sigma2_hat) < 3.0 * est.stderr_;
    } else {
        throw std::invalid_argument("unhandled kind '" + cfg.kind + "'");
    }

    const auto t_end = std::chrono::steady_clock::now();
    summary["wall_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t_end - t_start).count();
    const bool pass = thresholds_pass(cfg.resolved, summary);
    summary["pass"] = pass;
    write_json_file(out / "summary.json", summary);
    return pass ? 0 : 1;
}

}  // namespace torwalk
