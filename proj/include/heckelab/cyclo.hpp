#pragma once

// Exact arithmetic in Q(zeta_m), optionally extended by a square root of a
// prime p: elements are a(x) + b(x)*y in Q[x]/(Phi_m(x)) tensor Q[y]/(y^2 - p).
// The automorphism sp sends every root of unity to its inverse and fixes y.

#include "heckelab/laurent.hpp"
#include "heckelab/numtypes.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace heckelab {

namespace detail {

// Dense polynomials over Q, little-endian coefficient vectors.
using QPoly = std::vector<Rat>;

inline void qpoly_trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline QPoly qpoly_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    qpoly_trim(r);
    return r;
}

// Euclidean division, returns (quotient, remainder); divisor must be nonzero.
inline std::pair<QPoly, QPoly> qpoly_divmod(QPoly a, const QPoly& b) {
    if (b.empty()) throw std::logic_error("polynomial division by zero");
    QPoly q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rat(0));
    while (a.size() >= b.size()) {
        Rat f = a.back() / b.back();
        size_t shift = a.size() - b.size();
        q[shift] = f;
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
        a.pop_back();  // leading term cancels exactly
        qpoly_trim(a);
    }
    qpoly_trim(q);
    return {q, a};
}

// Cyclotomic polynomial Phi_m via Phi_m = (x^m - 1) / prod_{d|m, d<m} Phi_d.
inline QPoly cyclotomic_poly(int m) {
    QPoly num(m + 1, Rat(0));
    num[0] = -1;
    num[m] = 1;
    for (int d = 1; d < m; ++d) {
        if (m % d != 0) continue;
        QPoly phi_d = cyclotomic_poly(d);
        auto [q, r] = qpoly_divmod(num, phi_d);
        if (!r.empty()) throw std::logic_error("cyclotomic division not exact");
        num = q;
    }
    return num;
}

}  // namespace detail

struct CycloField {
    int m = 1;                    // conductor
    std::optional<long> p;        // adjoined sqrt(p), if any
    detail::QPoly phi;            // Phi_m, monic
    int deg = 1;                  // phi(m)

    explicit CycloField(int conductor, std::optional<long> prime = std::nullopt)
        : m(conductor), p(prime) {
        if (m < 1) throw std::invalid_argument("conductor must be positive");
        phi = detail::cyclotomic_poly(m);
        deg = static_cast<int>(phi.size()) - 1;
    }
};

class Cyclo {
public:
    Cyclo() : field_(default_field()), a_(1, Rat(0)), b_(1, Rat(0)) {}
    explicit Cyclo(std::shared_ptr<const CycloField> f)
        : field_(std::move(f)), a_(field_->deg, Rat(0)), b_(field_->deg, Rat(0)) {}

    static std::shared_ptr<const CycloField> make_field(int m, std::optional<long> p = std::nullopt) {
        return std::make_shared<const CycloField>(m, p);
    }

    static Cyclo from_rational(std::shared_ptr<const CycloField> f, const Rat& r) {
        Cyclo c(std::move(f));
        c.a_[0] = r;
        return c;
    }
    static Cyclo zero(std::shared_ptr<const CycloField> f) { return Cyclo(std::move(f)); }
    static Cyclo one(std::shared_ptr<const CycloField> f) { return from_rational(std::move(f), 1); }

    // zeta_m^k
    static Cyclo root_of_unity(std::shared_ptr<const CycloField> f, long k) {
        Cyclo c(f);
        long kk = ((k % f->m) + f->m) % f->m;
        detail::QPoly xk(static_cast<size_t>(kk) + 1, Rat(0));
        xk.back() = 1;
        c.a_ = c.reduce(xk);
        return c;
    }
    // A primitive d-th root of unity; requires d | m.
    static Cyclo primitive_root(std::shared_ptr<const CycloField> f, long d) {
        if (d <= 0 || f->m % d != 0) throw std::invalid_argument("order does not divide conductor");
        return root_of_unity(f, f->m / d);
    }
    static Cyclo sqrt_p(std::shared_ptr<const CycloField> f) {
        if (!f->p) throw std::logic_error("field has no adjoined square root");
        Cyclo c(f);
        c.b_[0] = 1;
        return c;
    }

    const std::shared_ptr<const CycloField>& field() const { return field_; }

    bool is_zero() const {
        auto z = [](const detail::QPoly& v) {
            return std::all_of(v.begin(), v.end(), [](const Rat& r) { return r == 0; });
        };
        return z(a_) && z(b_);
    }
    bool is_rational() const {
        for (size_t i = 1; i < a_.size(); ++i)
            if (a_[i] != 0) return false;
        for (auto& c : b_)
            if (c != 0) return false;
        return true;
    }
    Rat rational_value() const {
        if (!is_rational()) throw std::logic_error("not a rational value");
        return a_[0];
    }
    bool is_integer() const {
        return is_rational() && boost::multiprecision::denominator(a_[0]) == 1;
    }

    friend Cyclo operator+(const Cyclo& x, const Cyclo& y) {
        x.check_same(y);
        Cyclo r(x.field_);
        for (int i = 0; i < x.field_->deg; ++i) {
            r.a_[i] = x.a_[i] + y.a_[i];
            r.b_[i] = x.b_[i] + y.b_[i];
        }
        return r;
    }
    friend Cyclo operator-(const Cyclo& x, const Cyclo& y) {
        x.check_same(y);
        Cyclo r(x.field_);
        for (int i = 0; i < x.field_->deg; ++i) {
            r.a_[i] = x.a_[i] - y.a_[i];
            r.b_[i] = x.b_[i] - y.b_[i];
        }
        return r;
    }
    Cyclo operator-() const {
        Cyclo r(field_);
        for (int i = 0; i < field_->deg; ++i) {
            r.a_[i] = -a_[i];
            r.b_[i] = -b_[i];
        }
        return r;
    }
    friend Cyclo operator*(const Cyclo& x, const Cyclo& y) {
        x.check_same(y);
        Cyclo r(x.field_);
        // (a + b y)(c + d y) = (ac + p bd) + (ad + bc) y
        detail::QPoly ac = detail::qpoly_mul(x.a_, y.a_);
        detail::QPoly ad = detail::qpoly_mul(x.a_, y.b_);
        detail::QPoly bc = detail::qpoly_mul(x.b_, y.a_);
        detail::QPoly bd = detail::qpoly_mul(x.b_, y.b_);
        detail::QPoly num = ac;
        if (x.field_->p) {
            Rat pp(*x.field_->p);
            num.resize(std::max(num.size(), bd.size()), Rat(0));
            for (size_t i = 0; i < bd.size(); ++i) num[i] += pp * bd[i];
        }
        detail::QPoly odd = ad;
        odd.resize(std::max(odd.size(), bc.size()), Rat(0));
        for (size_t i = 0; i < bc.size(); ++i) odd[i] += bc[i];
        r.a_ = r.reduce(num);
        r.b_ = r.reduce(odd);
        return r;
    }
    Cyclo& operator+=(const Cyclo& o) { *this = *this + o; return *this; }
    Cyclo& operator-=(const Cyclo& o) { *this = *this - o; return *this; }
    Cyclo& operator*=(const Cyclo& o) { *this = *this * o; return *this; }

    friend bool operator==(const Cyclo& x, const Cyclo& y) {
        x.check_same(y);
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const Cyclo& x, const Cyclo& y) { return !(x == y); }
    // Deterministic total order on coordinates (not an order of the field).
    friend bool operator<(const Cyclo& x, const Cyclo& y) {
        x.check_same(y);
        if (x.a_ != y.a_) return x.a_ < y.a_;
        return x.b_ < y.b_;
    }

    Cyclo inverse() const {
        if (is_zero()) throw std::domain_error("division by zero in cyclotomic field");
        // First clear the sqrt(p) part by conjugation, then invert in Q(zeta_m).
        if (field_->p) {
            Cyclo conj(field_);
            conj.a_ = a_;
            for (int i = 0; i < field_->deg; ++i) conj.b_[i] = -b_[i];
            Cyclo norm = *this * conj;  // lies in Q(zeta_m)
            for (auto& c : norm.b_)
                if (c != 0) throw std::logic_error("sqrt conjugation failed");
            Cyclo ninv(field_);
            ninv.a_ = invert_mod_phi(norm.a_);
            return conj * ninv;
        }
        Cyclo r(field_);
        r.a_ = invert_mod_phi(a_);
        return r;
    }
    friend Cyclo operator/(const Cyclo& x, const Cyclo& y) { return x * y.inverse(); }

    // The automorphism sending every root of unity to its inverse; fixes y.
    Cyclo sp_conj() const {
        Cyclo r(field_);
        r.a_ = apply_galois(a_);
        r.b_ = apply_galois(b_);
        return r;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "[";
        for (int i = 0; i < field_->deg; ++i) os << (i ? "," : "") << a_[i].str();
        if (field_->p) {
            os << ";";
            for (int i = 0; i < field_->deg; ++i) os << (i ? "," : "") << b_[i].str();
        }
        os << "]";
        return os.str();
    }

    const std::vector<Rat>& coords_a() const { return a_; }
    const std::vector<Rat>& coords_b() const { return b_; }

private:
    static const std::shared_ptr<const CycloField>& default_field() {
        static const std::shared_ptr<const CycloField> f = std::make_shared<const CycloField>(1);
        return f;
    }

    void check_same(const Cyclo& o) const {
        if (field_->m != o.field_->m || field_->p != o.field_->p)
            throw std::invalid_argument("cyclotomic elements from different fields");
    }

    detail::QPoly reduce(const detail::QPoly& v) const {
        auto [q, r] = detail::qpoly_divmod(v, field_->phi);
        (void)q;
        detail::QPoly out(field_->deg, Rat(0));
        for (size_t i = 0; i < r.size(); ++i) out[i] = r[i];
        return out;
    }

    // x^j -> x^((m-j) mod m), reduced mod Phi_m.
    detail::QPoly apply_galois(const detail::QPoly& v) const {
        detail::QPoly acc(1, Rat(0));
        for (int j = 0; j < field_->deg; ++j) {
            if (v[j] == 0) continue;
            int e = (field_->m - j) % field_->m;
            detail::QPoly xe(static_cast<size_t>(e) + 1, Rat(0));
            xe.back() = v[j];
            acc.resize(std::max(acc.size(), xe.size()), Rat(0));
            for (size_t i = 0; i < xe.size(); ++i) acc[i] += xe[i];
        }
        return reduce(acc);
    }

    // Inverse of a (nonzero) element of Q[x]/(Phi_m) by extended Euclid.
    detail::QPoly invert_mod_phi(const detail::QPoly& v0) const {
        detail::QPoly r0 = field_->phi, r1 = v0;
        detail::qpoly_trim(r1);
        if (r1.empty()) throw std::domain_error("division by zero in cyclotomic field");
        detail::QPoly t0, t1{Rat(1)};
        while (!r1.empty()) {
            auto [q, r2] = detail::qpoly_divmod(r0, r1);
            detail::QPoly qt1 = detail::qpoly_mul(q, t1);
            detail::QPoly t2 = t0;
            t2.resize(std::max(t2.size(), qt1.size()), Rat(0));
            for (size_t i = 0; i < qt1.size(); ++i) t2[i] -= qt1[i];
            detail::qpoly_trim(t2);
            r0 = r1; r1 = r2; t0 = t1; t1 = t2;
        }
        // r0 = gcd, a nonzero constant since Phi_m is irreducible
        if (r0.size() != 1) throw std::logic_error("gcd with cyclotomic polynomial not constant");
        detail::QPoly inv = t0;
        for (auto& c : inv) c /= r0[0];
        detail::QPoly out(field_->deg, Rat(0));
        auto red = reduce(inv);
        for (int i = 0; i < field_->deg; ++i) out[i] = red[i];
        return out;
    }

    std::shared_ptr<const CycloField> field_;
    detail::QPoly a_, b_;  // both of length field_->deg
};

// Laurent polynomials in v with coefficients in a cyclotomic field: U[v, v^-1].
class CycloLaurent {
public:
    explicit CycloLaurent(std::shared_ptr<const CycloField> f) : field_(std::move(f)) {}

    static CycloLaurent from_laurent(std::shared_ptr<const CycloField> f, const Laurent& p) {
        CycloLaurent r(f);
        for (auto& [k, c] : p.coeffs()) r.coeffs_.emplace(k, Cyclo::from_rational(f, Rat(c)));
        return r;
    }
    static CycloLaurent constant(const Cyclo& c) {
        CycloLaurent r(c.field());
        if (!c.is_zero()) r.coeffs_.emplace(0, c);
        return r;
    }
    static CycloLaurent term(const Cyclo& c, int k) {
        CycloLaurent r(c.field());
        if (!c.is_zero()) r.coeffs_.emplace(k, c);
        return r;
    }

    const std::shared_ptr<const CycloField>& field() const { return field_; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::map<int, Cyclo>& coeffs() const { return coeffs_; }
    Cyclo coeff(int k) const {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? Cyclo::zero(field_) : it->second;
    }

    CycloLaurent& operator+=(const CycloLaurent& o) {
        for (auto& [k, c] : o.coeffs_) add_term(k, c);
        return *this;
    }
    CycloLaurent& operator-=(const CycloLaurent& o) {
        for (auto& [k, c] : o.coeffs_) add_term(k, -c);
        return *this;
    }
    friend CycloLaurent operator+(CycloLaurent a, const CycloLaurent& b) { a += b; return a; }
    friend CycloLaurent operator-(CycloLaurent a, const CycloLaurent& b) { a -= b; return a; }
    friend CycloLaurent operator*(const CycloLaurent& a, const CycloLaurent& b) {
        CycloLaurent r(a.field_);
        for (auto& [ka, ca] : a.coeffs_)
            for (auto& [kb, cb] : b.coeffs_) r.add_term(ka + kb, ca * cb);
        return r;
    }
    CycloLaurent& operator*=(const CycloLaurent& o) { *this = *this * o; return *this; }
    friend bool operator==(const CycloLaurent& a, const CycloLaurent& b) {
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const CycloLaurent& a, const CycloLaurent& b) { return !(a == b); }

    // Coefficientwise sp conjugation; v is fixed.
    CycloLaurent sp_conj() const {
        CycloLaurent r(field_);
        for (auto& [k, c] : coeffs_) r.coeffs_.emplace(k, c.sp_conj());
        return r;
    }

    // Specialization v -> kappa (kappa invertible).
    Cyclo specialize(const Cyclo& kappa) const {
        if (kappa.is_zero()) throw std::invalid_argument("substitution v -> 0 is not allowed");
        Cyclo acc = Cyclo::zero(field_);
        Cyclo kinv = kappa.inverse();
        for (auto& [k, c] : coeffs_) {
            Cyclo p = Cyclo::one(field_);
            const Cyclo& base = k >= 0 ? kappa : kinv;
            for (int i = 0; i < (k >= 0 ? k : -k); ++i) p *= base;
            acc += c * p;
        }
        return acc;
    }
    Cyclo specialize_v1() const { return specialize(Cyclo::one(field_)); }

    // All coefficients integers (entries of Z[v, v^-1])?
    bool is_integral_laurent() const {
        for (auto& [k, c] : coeffs_) { (void)k; if (!c.is_integer()) return false; }
        return true;
    }

    std::string to_string() const {
        if (coeffs_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            if (!first) os << " + ";
            first = false;
            os << it->second.to_string() << "*v^" << it->first;
        }
        return os.str();
    }

private:
    void add_term(int k, const Cyclo& c) {
        auto it = coeffs_.find(k);
        if (it == coeffs_.end()) {
            if (!c.is_zero()) coeffs_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    std::shared_ptr<const CycloField> field_;
    std::map<int, Cyclo> coeffs_;
};

}  // namespace heckelab
