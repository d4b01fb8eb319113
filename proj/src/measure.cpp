#include "torwalk/measure.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "torwalk/errors.hpp"

namespace torwalk {

std::string Digest128::hex() const {
    static const char* k = "0123456789abcdef";
    std::string s(32, '0');
    unsigned __int128 x = v;
    for (int i = 31; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = k[static_cast<unsigned>(x & 0xF)];
        x >>= 4;
    }
    return s;
}

Digest128 fnv128(const std::string& s) {
    // FNV-1a 128-bit offset basis and prime
    unsigned __int128 h = (static_cast<unsigned __int128>(0x6c62272e07bb0142ull) << 64) |
                          0x62b821756295c58dull;
    const unsigned __int128 prime = (static_cast<unsigned __int128>(0x0000000001000000ull) << 64) |
                                    0x000000000000013Bull;
    for (unsigned char c : s) {
        h ^= c;
        h *= prime;
    }
    return Digest128{h};
}

FiniteSupportMeasure::FiniteSupportMeasure(std::vector<Atom> atoms, Mode mode, int d,
                                           BasisPtr basis)
    : atoms_(std::move(atoms)), mode_(mode), d_(d), basis_(std::move(basis)) {
    if (atoms_.empty()) throw std::invalid_argument("measure: empty support");
    Rat total(0);
    std::unordered_map<Digest128, std::size_t, Digest128Hash> seen;
    std::vector<std::string> entries;
    for (const auto& a : atoms_) {
        if (a.g.dim() != d_ || a.g.mode() != mode_)
            throw std::invalid_argument("measure: atom dimension or mode mismatch");
        if (mode_ == Mode::Exact && a.g.basis() != basis_)
            throw std::invalid_argument("measure: atom basis mismatch");
        if (a.weight <= 0) throw std::invalid_argument("measure: weights must be positive");
        std::string enc = a.g.encode();
        if (!seen.emplace(fnv128(enc), seen.size()).second)
            throw std::invalid_argument("measure: duplicate atom " + enc);
        total += a.weight;
        entries.push_back(enc + "#" + a.weight.get_str());
    }
    if (total != 1) throw std::invalid_argument("measure: weights sum != 1");
    // digest is content-addressed: independent of atom order
    std::sort(entries.begin(), entries.end());
    std::ostringstream content;
    for (const auto& e : entries) content << e << ";";
    if (basis_) content << "|basis:" << basis_->describe();
    digest_ = fnv128(content.str()).hex();
    cum_.resize(atoms_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        acc += atoms_[i].weight.get_d();
        cum_[i] = acc;
    }
    cum_.back() = 1.0;
}

FiniteSupportMeasure FiniteSupportMeasure::dirac(GroupElement g) {
    Mode m = g.mode();
    int d = g.dim();
    BasisPtr b = g.basis();
    std::vector<Atom> atoms;
    atoms.push_back(Atom{std::move(g), Rat(1)});
    return FiniteSupportMeasure(std::move(atoms), m, d, std::move(b));
}

FiniteSupportMeasure FiniteSupportMeasure::to_float() const {
    if (mode_ == Mode::Float) return *this;
    std::vector<Atom> atoms;
    atoms.reserve(atoms_.size());
    for (const auto& a : atoms_)
        atoms.push_back(Atom{GroupElement::floating(a.g.linear(), a.g.translation_numeric()),
                             a.weight});
    return FiniteSupportMeasure(std::move(atoms), Mode::Float, d_, nullptr);
}

FiniteSupportMeasure convolve(const FiniteSupportMeasure& a, const FiniteSupportMeasure& b,
                              std::size_t cap) {
    if (a.dim() != b.dim() || a.mode() != b.mode())
        throw std::invalid_argument("convolve: incompatible measures");
    std::vector<Atom> out;
    std::unordered_map<Digest128, std::size_t, Digest128Hash> index;
    for (const auto& x : a.atoms())
        for (const auto& y : b.atoms()) {
            GroupElement g = compose(x.g, y.g);
            Rat w = x.weight * y.weight;
            Digest128 key = fnv128(g.encode());
            auto it = index.find(key);
            if (it == index.end()) {
                if (out.size() >= cap)
                    throw CapacityError("convolve: support cap exceeded", -1);
                index.emplace(key, out.size());
                out.push_back(Atom{std::move(g), std::move(w)});
            } else {
                out[it->second].weight += w;
            }
        }
    return FiniteSupportMeasure(std::move(out), a.mode(), a.dim(), a.basis());
}

FiniteSupportMeasure convolve_power(const FiniteSupportMeasure& mu, long n, std::size_t cap) {
    if (n < 0) throw std::invalid_argument("convolve_power: n must be >= 0");
    GroupElement id = mu.mode() == Mode::Exact ? GroupElement::identity(mu.dim(), mu.basis())
                                               : GroupElement::identity_float(mu.dim());
    FiniteSupportMeasure acc = FiniteSupportMeasure::dirac(std::move(id));
    for (long k = 1; k <= n; ++k) {
        try {
            acc = convolve(mu, acc, cap);
        } catch (const CapacityError&) {
            throw CapacityError("convolve_power: cap exceeded at power " + std::to_string(k), k);
        }
    }
    return acc;
}

FiniteSupportMeasure linear_projection(const FiniteSupportMeasure& mu) {
    std::vector<Atom> out;
    std::unordered_map<Digest128, std::size_t, Digest128Hash> index;
    for (const auto& a : mu.atoms()) {
        GroupElement g = mu.mode() == Mode::Exact
                             ? GroupElement::exact(
                                   a.g.linear(),
                                   std::vector<SymbolicScalar>(
                                       mu.dim(), SymbolicScalar::rational_value(
                                                     Rat(0), mu.basis()->size())),
                                   mu.basis())
                             : GroupElement::floating(a.g.linear(),
                                                      std::vector<double>(mu.dim(), 0.0));
        Digest128 key = fnv128(g.encode());
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, out.size());
            out.push_back(Atom{std::move(g), a.weight});
        } else {
            out[it->second].weight += a.weight;
        }
    }
    return FiniteSupportMeasure(std::move(out), mu.mode(), mu.dim(), mu.basis());
}

FiniteSupportMeasure lift_rational_part(const FiniteSupportMeasure& mu) {
    if (mu.mode() != Mode::Exact)
        throw std::invalid_argument("lift_rational_part: exact mode required");
    std::vector<Atom> out;
    std::unordered_map<Digest128, std::size_t, Digest128Hash> index;
    for (const auto& a : mu.atoms()) {
        GroupElement g = a.g.lift_rational_part();
        Digest128 key = fnv128(g.encode());
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, out.size());
            out.push_back(Atom{std::move(g), a.weight});
        } else {
            out[it->second].weight += a.weight;
        }
    }
    return FiniteSupportMeasure(std::move(out), Mode::Exact, mu.dim(), mu.basis());
}

}  // namespace torwalk
