#include "torwalk/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "torwalk/errors.hpp"

namespace torwalk {

namespace {

double log_of_mpf(const BigFloat& v) {
    long e = 0;
    double m = mpf_get_d_2exp(&e, v.get_mpf_t());
    return std::log(std::abs(m)) + static_cast<double>(e) * std::numbers::ln2;
}

std::string sci_of_log(double log_v) {
    const double lg = log_v / std::numbers::ln10;
    const double fl = std::floor(lg);
    std::ostringstream os;
    os.precision(6);
    os << std::pow(10.0, lg - fl) << "e" << static_cast<long>(fl);
    return os.str();
}

// distance of q*xi to the nearest integer, in mpf at the value's precision
BigFloat nearest_int_dist(const BigFloat& xi, const Int& q) {
    const auto prec = mpf_get_prec(xi.get_mpf_t());
    BigFloat t(0, prec);
    t = xi * BigFloat(q, prec);
    BigFloat half(0.5, prec);
    BigFloat shifted = t + half;
    BigFloat fl(0, prec);
    mpf_floor(fl.get_mpf_t(), shifted.get_mpf_t());
    BigFloat d = t - fl;
    if (d < 0) d = -d;
    return d;
}

}  // namespace

namespace {

// f and -f generate the same integer combinations on the circle, so
// coefficients are normalized: first nonzero generator coefficient positive
// and the rational part reduced mod 1; pure rationals fold into [0, 1/2].
SymbolicScalar sign_normalized(const SymbolicScalar& s) {
    for (const auto& c : s.coeffs()) {
        if (c > 0) return s.reduced_mod1();
        if (c < 0) return (-s).reduced_mod1();
    }
    SymbolicScalar r = s.reduced_mod1();
    if (r.rational() > Rat(1, 2))
        return SymbolicScalar::rational_value(Rat(1) - r.rational(), s.basis_size());
    return r;
}

}  // namespace

CoefficientSet coefficient_set(const FiniteSupportMeasure& mu) {
    if (mu.mode() != Mode::Exact)
        throw std::invalid_argument("coefficient_set: exact mode required");
    CoefficientSet F;
    F.basis = mu.basis();
    std::unordered_set<std::string> seen;
    for (const auto& atom : mu.atoms())
        for (const auto& s : atom.g.translation_exact()) {
            SymbolicScalar c = sign_normalized(s);
            if (seen.insert(c.encode()).second) F.values.push_back(std::move(c));
        }
    return F;
}

namespace {

double log_of_rat(const Rat& r) {
    long en = 0, ed = 0;
    const double mn = mpz_get_d_2exp(&en, r.get_num().get_mpz_t());
    const double md = mpz_get_d_2exp(&ed, r.get_den().get_mpz_t());
    return std::log(std::abs(mn)) - std::log(md) +
           static_cast<double>(en - ed) * std::numbers::ln2;
}

// exact convergents of a rational in (0,1); terminating zero dropped
std::vector<Convergent> rational_convergents(Rat r, const Int& qmax) {
    std::vector<Convergent> out;
    Int h_prev = 1, h = 0;
    Int k_prev = 0, k = 1;
    Int num = r.get_num(), den = r.get_den();
    for (;;) {
        Rat dist = Rat(k) * r;
        Int round_val;
        {
            Rat shifted = dist + Rat(1, 2);
            mpz_fdiv_q(round_val.get_mpz_t(), shifted.get_num().get_mpz_t(),
                       shifted.get_den().get_mpz_t());
        }
        dist -= Rat(round_val);
        if (dist < 0) dist = -dist;
        if (dist > 0) {
            Convergent c;
            c.p = h;
            c.q = k;
            c.dist = dist.get_d();
            c.log_dist = log_of_rat(dist);
            out.push_back(std::move(c));
        }
        if (num == 0) break;  // expansion terminated
        Int a = den / num;
        Int rem = den - a * num;
        den = num;
        num = rem;
        Int h_next = a * h + h_prev;
        Int k_next = a * k + k_prev;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
        if (k > qmax) break;
    }
    return out;
}

}  // namespace

std::vector<Convergent> convergents_of(const SymbolicScalar& xi, const GeneratorBasis& basis,
                                       const Int& qmax, bool* resolution_truncated) {
    if (resolution_truncated) *resolution_truncated = false;
    if (!xi.has_generator_part()) {
        // pure rational: exact integer continued fraction, no float noise
        SymbolicScalar red = xi.reduced_mod1();
        if (red.torus_zero())
            throw std::invalid_argument("convergents_of: value is 0 mod 1");
        return rational_convergents(red.rational(), qmax);
    }

    long prec = 256;
    const long qbits = static_cast<long>(mpz_sizeinbase(qmax.get_mpz_t(), 2));
    for (;;) {
        const long work = prec + 2 * qbits + 64;
        BigFloat val = xi.eval(basis, work, true);
        std::vector<Convergent> out;

        // continued-fraction expansion with exact convergent recurrences; a
        // distance is accepted only when it clears the certifiable floor at
        // this working precision
        BigFloat x(val);
        Int h_prev = 1, h = 0;  // p_{-1}, p_0  (a_0 = 0 since val in [0,1))
        Int k_prev = 0, k = 1;  // q_{-1}, q_0
        bool resolution_hit = false;
        for (int it = 0; it < 100000; ++it) {
            BigFloat d = nearest_int_dist(val, k);
            const long kbits = static_cast<long>(mpz_sizeinbase(k.get_mpz_t(), 2));
            const long floor_exp = -(work - kbits - 48);
            const double log_d = d > 0 ? log_of_mpf(d) : -1e308;
            if (log_d <= static_cast<double>(floor_exp) * std::numbers::ln2) {
                resolution_hit = true;  // cannot certify positivity here
                break;
            }
            Convergent c;
            c.p = h;
            c.q = k;
            c.dist = d.get_d();
            c.log_dist = log_d;
            out.push_back(std::move(c));
            if (x == 0) break;
            BigFloat y(0, work);
            y = 1 / x;
            BigFloat fl(0, work);
            mpf_floor(fl.get_mpf_t(), y.get_mpf_t());
            Int a(0);
            mpz_set_f(a.get_mpz_t(), fl.get_mpf_t());
            x = y - fl;
            if (a < 1) {
                resolution_hit = true;  // expansion noise
                break;
            }
            Int h_next = a * h + h_prev;
            Int k_next = a * k + k_prev;
            h_prev = h;
            h = h_next;
            k_prev = k;
            k = k_next;
            if (k > qmax) break;
        }
        if (!resolution_hit || prec >= 16384) {
            if (out.empty())
                throw std::invalid_argument(
                    "convergents_of: value indistinguishable from 0 mod 1 at max precision");
            if (resolution_truncated) *resolution_truncated = resolution_hit;
            return out;
        }
        prec *= 4;  // escalate and redo; never silently round
    }
}

double min_q_dist(const SymbolicScalar& xi, const GeneratorBasis& basis, const Int& qmax) {
    auto cs = convergents_of(xi, basis, qmax);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : cs) {
        // q * d(q xi, 0), via logs to survive huge q
        const double v = std::exp(std::log(c.q.get_d()) + c.log_dist);
        best = std::min(best, v);
    }
    return best;
}

namespace {

struct MarginAccumulator {
    std::vector<Int> grid;         // ascending
    std::vector<double> best_log;  // ln m(Q) running minimum per grid point

    explicit MarginAccumulator(std::span<const Int> q_grid) {
        grid.assign(q_grid.begin(), q_grid.end());
        std::sort(grid.begin(), grid.end());
        best_log.assign(grid.size(), std::numeric_limits<double>::infinity());
    }

    // candidate with coefficient magnitude M and distance ln d
    void offer(const Int& M, double log_d) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid[i] < M) continue;
            if (log_d < best_log[i]) best_log[i] = log_d;
        }
    }
};

}  // namespace

DiophantineReport diophantine_margin(const CoefficientSet& F, std::span<const Int> q_grid,
                                     std::size_t cost_cap) {
    if (F.values.empty()) throw std::invalid_argument("diophantine_margin: empty set");
    if (q_grid.empty()) throw std::invalid_argument("diophantine_margin: empty grid");
    DiophantineReport rep;
    MarginAccumulator acc(q_grid);

    if (F.values.size() == 1) {
        // single coefficient: continued-fraction fast path (works for both
        // irrational and rational values; exact zeros are never emitted)
        rep.used_fast_path = true;
        Int qmax = acc.grid.back();
        bool truncated = false;
        auto cs = convergents_of(F.values[0], *F.basis, qmax, &truncated);
        if (truncated && !cs.empty() && cs.back().q < qmax)
            throw PrecisionLossError(
                "diophantine_margin: margins beyond q=" + cs.back().q.get_str() +
                " cannot be certified at maximum precision");
        for (const auto& c : cs) acc.offer(c.q, c.log_dist);
        // the convergent list gives the lower envelope; fill grid values
    } else {
        // brute force over nonzero integer vectors with max |L_f| <= Qmax
        const Int qmax_i = acc.grid.back();
        if (!qmax_i.fits_slong_p())
            throw CapacityError("diophantine_margin: grid too large for brute force", 0);
        const long Qmax = qmax_i.get_si();
        const double cost = std::pow(2.0 * static_cast<double>(Qmax) + 1.0,
                                     static_cast<double>(F.values.size()));
        if (cost > static_cast<double>(cost_cap)) {
            const long feasible = static_cast<long>(
                (std::pow(static_cast<double>(cost_cap),
                          1.0 / static_cast<double>(F.values.size())) -
                 1.0) /
                2.0);
            throw CapacityError("diophantine_margin: search space exceeds cap; feasible Q <= " +
                                    std::to_string(feasible),
                                feasible);
        }
        const std::size_t m = F.values.size();
        std::vector<long> L(m, -Qmax);
        const long prec = 320;
        for (;;) {
            bool all_zero = true;
            for (long v : L)
                if (v) { all_zero = false; break; }
            if (!all_zero) {
                SymbolicScalar s = SymbolicScalar::rational_value(Rat(0), F.basis->size());
                Int maxabs = 0;
                for (std::size_t i = 0; i < m; ++i) {
                    if (L[i] == 0) continue;
                    s += F.values[i].times(Int(L[i]));
                    Int a = abs(Int(L[i]));
                    if (a > maxabs) maxabs = a;
                }
                if (!s.torus_zero()) {
                    BigFloat v = s.eval(*F.basis, prec, true);
                    BigFloat d = v <= 0.5 ? v : BigFloat(1 - v, prec + 64);
                    const double floor_log =
                        -static_cast<double>(prec - 72) * std::numbers::ln2;
                    if (!(d > 0) || log_of_mpf(d) <= floor_log)
                        throw PrecisionLossError(
                            "diophantine_margin: combination too close to 0 to certify");
                    acc.offer(maxabs, log_of_mpf(d));
                }
            }
            std::size_t i = 0;
            for (; i < m; ++i) {
                if (L[i] < Qmax) {
                    ++L[i];
                    break;
                }
                L[i] = -Qmax;
            }
            if (i == m) break;
        }
    }

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < acc.grid.size(); ++i) {
        if (!std::isfinite(acc.best_log[i])) continue;
        rep.q_grid.push_back(acc.grid[i]);
        rep.neg_log_margin.push_back(-acc.best_log[i]);
        rep.margin_sci.push_back(sci_of_log(acc.best_log[i]));
        xs.push_back(std::log(acc.grid[i].get_d()));
        ys.push_back(-acc.best_log[i]);
    }
    if (xs.size() >= 2) {
        LineFit fit = least_squares(xs, ys);
        rep.L_hat = fit.slope;
        rep.r2 = fit.r2;
    }
    return rep;
}

std::string XqWitness::encode() const {
    std::ostringstream os;
    if (!member) {
        os << "non-member:" << reason;
        return os.str();
    }
    os << "q=" << q.get_str() << ";p=[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) os << ",";
        os << p[i].get_str();
    }
    os << "];M=[";
    for (std::size_t i = 0; i < M.size(); ++i) {
        if (i) os << ",";
        os << M[i].encode();
    }
    os << "]";
    return os.str();
}

namespace {

// Search integer rows r (one entry per (b, j)) with |entry| <= Q such that
// target - sum r_{b,j} b_j is torus-zero. Returns the rows and the integer
// remainder on success.
struct RowSolution {
    bool found = false;
    std::vector<long> rows;  // |B| * d entries
    Int p_entry;
};

RowSolution solve_row(const SymbolicScalar& target,
                      std::span<const std::vector<SymbolicScalar>> B, long Q,
                      std::size_t cost_cap) {
    const std::size_t nb = B.size();
    const std::size_t d = B[0].size();
    const std::size_t vars = nb * d;
    const double cost = std::pow(2.0 * Q + 1.0, static_cast<double>(vars));
    if (cost > static_cast<double>(cost_cap))
        throw CapacityError("xq_membership: row search exceeds cap", Q);

    // search outward by infinity-norm shells so the reported witness has
    // minimal multiplicities: 0, +-1, +-2, ...
    RowSolution sol;
    std::vector<long> r(vars, 0);
    auto try_vector = [&]() {
        SymbolicScalar s = target;
        for (std::size_t b = 0; b < nb; ++b)
            for (std::size_t j = 0; j < d; ++j) {
                const long coef = r[b * d + j];
                if (coef) s -= B[b][j].times(Int(coef));
            }
        if (!s.torus_zero()) return false;
        sol.found = true;
        sol.rows = r;
        Int num = s.rational().get_num();
        Int den = s.rational().get_den();
        sol.p_entry = num / den;
        return true;
    };
    for (long shell = 0; shell <= Q; ++shell) {
        std::fill(r.begin(), r.end(), -shell);
        for (;;) {
            long mx = 0;
            for (long v : r) mx = std::max(mx, std::labs(v));
            if (mx == shell && try_vector()) return sol;
            std::size_t i = 0;
            for (; i < vars; ++i) {
                if (r[i] < shell) {
                    ++r[i];
                    break;
                }
                r[i] = -shell;
            }
            if (i == vars) break;
        }
    }
    return sol;
}

}  // namespace

XqWitness xq_membership(const TorusPoint& x, std::span<const std::vector<SymbolicScalar>> B,
                        long Q, std::size_t cost_cap) {
    if (x.mode() != Mode::Exact) throw std::invalid_argument("xq_membership: exact x required");
    if (B.empty()) throw std::invalid_argument("xq_membership: empty translation set");
    const int d = x.dim();
    XqWitness w;

    // two passes: strict bounds first, then a relaxed search that names the
    // smallest violated constraint for non-members
    const long q_extended = 2 * Q + 2;
    for (int pass = 0; pass < 2; ++pass) {
        const long q_bound = pass == 0 ? Q : q_extended;
        const long row_bound = pass == 0 ? Q : q_extended;
        for (long q = 1; q <= q_bound; ++q) {
            std::vector<IntMatrix> M(B.size(), IntMatrix(d));
            std::vector<Int> p(static_cast<std::size_t>(d), Int(0));
            bool ok = true;
            long max_entry = 0;
            for (int i = 0; i < d && ok; ++i) {
                SymbolicScalar target =
                    x.exact_coords()[static_cast<std::size_t>(i)].times(Int(q));
                RowSolution sol = solve_row(target, B, row_bound, cost_cap);
                if (!sol.found) {
                    ok = false;
                    break;
                }
                for (std::size_t b = 0; b < B.size(); ++b)
                    for (int j = 0; j < d; ++j) {
                        const long e = sol.rows[b * static_cast<std::size_t>(d) +
                                                static_cast<std::size_t>(j)];
                        M[b].at(i, j) = e;
                        max_entry = std::max(max_entry, std::labs(e));
                    }
                p[static_cast<std::size_t>(i)] = sol.p_entry;
            }
            if (!ok) continue;
            if (pass == 0) {
                w.member = true;
                w.q = q;
                w.p = std::move(p);
                w.M = std::move(M);
                return w;
            }
            w.member = false;
            w.reason = "requires q=" + std::to_string(q) + ", max|M|=" +
                       std::to_string(max_entry) + " (Q=" + std::to_string(Q) + ")";
            return w;
        }
    }
    w.member = false;
    w.reason = "no representation with q <= " + std::to_string(q_extended);
    return w;
}

double gnm_proxy_fraction(const MatrixAtoms& mu0, long n, double M, long reps, RngStream rng) {
    if (M <= 0.0) throw std::invalid_argument("gnm_proxy_fraction: M > 0");
    if (reps < 1) throw std::invalid_argument("gnm_proxy_fraction: reps >= 1");
    std::size_t pass = 0;
    const double budget = M * static_cast<double>(n) + 1e-9 * static_cast<double>(n);
    for (long r = 0; r < reps; ++r) {
        RngStream stream = rng.derived(static_cast<std::uint64_t>(r));
        double acc = 0.0;
        for (long k = 0; k < n; ++k) acc += mu0.log_norms[mu0.sample(stream)];
        if (acc <= budget) ++pass;
    }
    return static_cast<double>(pass) / static_cast<double>(reps);
}

namespace {

std::vector<Int> det_probe_coeffs(int d) {
    std::vector<Int> c(static_cast<std::size_t>(d), Int(1));
    c[0] = Int(1 - d);
    return c;
}

}  // namespace

Rat det_nondegeneracy_rate_exact(const FiniteSupportMeasure& mu0, long n, std::size_t cap) {
    const int d = mu0.dim();
    if (d < 2) throw std::invalid_argument("det_nondegeneracy_rate: d >= 2");
    const FiniteSupportMeasure pw = convolve_power(linear_projection(mu0), n, cap);
    const auto c = det_probe_coeffs(d);
    const std::size_t S = pw.support_size();
    double tuples = std::pow(static_cast<double>(S), d);
    if (tuples > static_cast<double>(cap))
        throw CapacityError("det_nondegeneracy_rate_exact: tuple space exceeds cap", n);
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    Rat total(0);
    for (;;) {
        IntMatrix sum(d);
        Rat w(1);
        for (int i = 0; i < d; ++i) {
            const auto& atom = pw.atoms()[idx[static_cast<std::size_t>(i)]];
            sum = sum + atom.g.linear().times(c[static_cast<std::size_t>(i)]);
            w *= atom.weight;
        }
        if (sum.det() != 0) total += w;
        int i = 0;
        for (; i < d; ++i) {
            if (++idx[static_cast<std::size_t>(i)] < S) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
        if (i == d) break;
    }
    return total;
}

double det_nondegeneracy_rate_mc(const FiniteSupportMeasure& mu0, long n, long reps,
                                 RngStream rng) {
    const int d = mu0.dim();
    if (d < 2) throw std::invalid_argument("det_nondegeneracy_rate: d >= 2");
    const FiniteSupportMeasure proj = linear_projection(mu0);
    const auto c = det_probe_coeffs(d);
    std::size_t hits = 0;
    for (long r = 0; r < reps; ++r) {
        RngStream stream = rng.derived(static_cast<std::uint64_t>(r));
        IntMatrix sum(d);
        for (int i = 0; i < d; ++i) {
            IntMatrix prod = IntMatrix::identity(d);
            for (long k = 0; k < n; ++k)
                prod = sample(proj, stream).linear() * prod;
            sum = sum + prod.times(c[static_cast<std::size_t>(i)]);
        }
        if (sum.det() != 0) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(reps);
}

namespace {

CollisionTable collision_from_steps(
    const FiniteSupportMeasure& mu, std::vector<std::pair<std::vector<SymbolicScalar>, Rat>> im,
    long n_max, std::size_t cap, bool torus_mode) {
    CollisionTable tab;
    auto encode_vec = [](std::span<const SymbolicScalar> v) {
        std::ostringstream os;
        for (const auto& s : v) os << s.encode() << ";";
        return os.str();
    };
    for (long n = 1; n <= n_max; ++n) {
        std::vector<std::pair<std::vector<SymbolicScalar>, Rat>> next;
        std::unordered_map<Digest128, std::size_t, Digest128Hash> index;
        for (const auto& [pt, wgt] : im)
            for (const auto& atom : mu.atoms()) {
                std::vector<SymbolicScalar> y;
                if (torus_mode) {
                    y = atom.g.linear().apply(pt);
                    for (std::size_t i = 0; i < y.size(); ++i) {
                        y[i] += atom.g.translation_exact()[i];
                        y[i].reduce_mod1();
                    }
                } else {
                    y = act_affine(atom.g, pt);
                }
                Rat nw = wgt * atom.weight;
                Digest128 key = fnv128(encode_vec(y));
                auto it = index.find(key);
                if (it == index.end()) {
                    if (next.size() >= cap)
                        throw CapacityError("collision_mass: image cap exceeded", n);
                    index.emplace(key, next.size());
                    next.emplace_back(std::move(y), std::move(nw));
                } else {
                    next[it->second].second += nw;
                }
            }
        im = std::move(next);
        Rat mass(0);
        for (const auto& [pt, wgt] : im) mass += wgt * wgt;
        tab.ns.push_back(n);
        tab.masses.push_back(mass);
        tab.image_counts.push_back(im.size());
    }
    return tab;
}

}  // namespace

CollisionTable collision_mass(const FiniteSupportMeasure& mu, const TorusPoint& x, long n_max,
                              std::size_t cap) {
    if (mu.mode() != Mode::Exact || x.mode() != Mode::Exact)
        throw std::invalid_argument("collision_mass: exact mode required");
    std::vector<std::pair<std::vector<SymbolicScalar>, Rat>> im;
    im.emplace_back(x.exact_coords(), Rat(1));
    return collision_from_steps(mu, std::move(im), n_max, cap, true);
}

CollisionTable collision_mass_lifted(const FiniteSupportMeasure& lifted,
                                     std::span<const SymbolicScalar> x, long n_max,
                                     std::size_t cap) {
    if (lifted.mode() != Mode::Exact)
        throw std::invalid_argument("collision_mass_lifted: exact mode required");
    std::vector<std::pair<std::vector<SymbolicScalar>, Rat>> im;
    im.emplace_back(std::vector<SymbolicScalar>(x.begin(), x.end()), Rat(1));
    return collision_from_steps(lifted, std::move(im), n_max, cap, false);
}

std::vector<SymbolicScalar> lift_point(const TorusPoint& x) {
    if (x.mode() != Mode::Exact) throw std::invalid_argument("lift_point: exact mode required");
    std::vector<SymbolicScalar> out;
    out.reserve(static_cast<std::size_t>(x.dim()));
    for (const auto& c : x.exact_coords()) out.emplace_back(Rat(0), c.coeffs());
    return out;
}

NearMass near_coincidence_mass(const FiniteSupportMeasure& mu, const TorusPoint& x,
                               const TorusPoint& y, double r, long n, Method method,
                               RngStream rng, long reps, std::size_t cap) {
    if (r <= 0.0) throw std::invalid_argument("near_coincidence_mass: r > 0");
    NearMass out;
    if (method == Method::Exact) {
        if (mu.mode() != Mode::Exact)
            throw std::invalid_argument("near_coincidence_mass: exact mode required");
        ExactImageMeasure im = push_point(mu, x, n, cap);
        const double guard = std::ldexp(1.0, -50);
        Rat mass(0);
        auto ynum = y.numeric_coords();
        for (const auto& [pt, wgt] : im.atoms) {
            // symbolic equality first: exact hits are certain
            bool exact_equal = true;
            if (y.mode() == Mode::Exact) {
                for (std::size_t i = 0; i < pt.size(); ++i)
                    if (!(pt[i].reduced_mod1() == y.exact_coords()[i])) {
                        exact_equal = false;
                        break;
                    }
            } else {
                exact_equal = false;
            }
            if (exact_equal) {
                mass += wgt;
                continue;
            }
            std::vector<double> num(pt.size());
            for (std::size_t i = 0; i < pt.size(); ++i)
                num[i] = pt[i].eval_double_mod1(*im.basis);
            const double dist = dist_sup(num, ynum);
            if (std::abs(dist - r) < guard) out.guard_flag = true;
            if (dist <= r) mass += wgt;
        }
        out.value = mass.get_d();
        out.stderr_ = 0.0;
        return out;
    }
    FloatWalker walker(mu);
    auto x0 = x.numeric_coords();
    auto ynum = y.numeric_coords();
    std::size_t hits = 0;
    for (long rep = 0; rep < reps; ++rep) {
        RngStream stream = rng.derived(static_cast<std::uint64_t>(rep));
        std::vector<double> pt = x0;
        for (long k = 0; k < n; ++k) walker.step(pt, stream);
        if (dist_sup(pt, ynum) <= r) ++hits;
    }
    out.value = static_cast<double>(hits) / static_cast<double>(reps);
    out.stderr_ = wilson_stderr(hits, static_cast<std::size_t>(reps));
    return out;
}

}  // namespace torwalk
