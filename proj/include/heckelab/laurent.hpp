#pragma once

// Sparse exact Laurent polynomials over Z: the coefficient ring A = Z[v, v^-1],
// and a two-variable variant Z[v, v^-1, v', v'^-1] used by the P3 check.

#include "heckelab/numtypes.hpp"

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace heckelab {

class Laurent {
public:
    Laurent() = default;
    Laurent(long c) { if (c != 0) coeffs_[0] = c; }
    Laurent(const Int& c) { if (c != 0) coeffs_[0] = c; }

    static Laurent zero() { return Laurent(); }
    static Laurent one() { return Laurent(1); }
    // c * v^k
    static Laurent term(Int c, int k) {
        Laurent p;
        if (c != 0) p.coeffs_[k] = std::move(c);
        return p;
    }
    static Laurent v_pow(int k) { return term(1, k); }

    bool is_zero() const { return coeffs_.empty(); }
    const std::map<int, Int>& coeffs() const { return coeffs_; }

    Int coeff(int k) const {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? Int(0) : it->second;
    }

    // Largest exponent with nonzero coefficient; requires nonzero.
    int degree() const {
        if (is_zero()) throw std::logic_error("degree of zero Laurent polynomial");
        return coeffs_.rbegin()->first;
    }
    int valuation() const {
        if (is_zero()) throw std::logic_error("valuation of zero Laurent polynomial");
        return coeffs_.begin()->first;
    }

    Laurent& operator+=(const Laurent& o) {
        for (auto& [k, c] : o.coeffs_) add_term(k, c);
        return *this;
    }
    Laurent& operator-=(const Laurent& o) {
        for (auto& [k, c] : o.coeffs_) add_term(k, -c);
        return *this;
    }
    friend Laurent operator+(Laurent a, const Laurent& b) { a += b; return a; }
    friend Laurent operator-(Laurent a, const Laurent& b) { a -= b; return a; }
    Laurent operator-() const {
        Laurent r;
        for (auto& [k, c] : coeffs_) r.coeffs_[k] = -c;
        return r;
    }
    friend Laurent operator*(const Laurent& a, const Laurent& b) {
        Laurent r;
        for (auto& [ka, ca] : a.coeffs_)
            for (auto& [kb, cb] : b.coeffs_) r.add_term(ka + kb, ca * cb);
        return r;
    }
    Laurent& operator*=(const Laurent& o) { *this = *this * o; return *this; }

    friend bool operator==(const Laurent& a, const Laurent& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const Laurent& a, const Laurent& b) { return !(a == b); }
    friend bool operator<(const Laurent& a, const Laurent& b) { return a.coeffs_ < b.coeffs_; }

    // The bar involution v -> v^-1.
    Laurent bar() const {
        Laurent r;
        for (auto& [k, c] : coeffs_) r.coeffs_[-k] = c;
        return r;
    }

    // v -> v^2 (used when identities are stated in q = v^2).
    Laurent substitute_v_squared() const {
        Laurent r;
        for (auto& [k, c] : coeffs_) r.coeffs_[2 * k] = c;
        return r;
    }

    // v -> t for an invertible integer t (only t = 1, -1 make sense over Z).
    Int evaluate_at_unit(long t) const {
        if (t == 0) throw std::invalid_argument("substitution v -> 0 is not allowed");
        Int acc = 0, tt = t;
        for (auto& [k, c] : coeffs_) {
            Int p = 1;
            int e = k >= 0 ? k : -k;
            for (int i = 0; i < e; ++i) p *= tt;
            if (k < 0) {
                if (tt != 1 && tt != -1) throw std::invalid_argument("v must map to a unit of Z");
                // p in {1,-1}; its inverse is itself
            }
            acc += c * p;
        }
        return acc;
    }

    // True iff all exponents are < 0, i.e. the element lies in v^-1 Z[v^-1].
    bool in_v_inverse_zvinv() const { return is_zero() || degree() < 0; }
    // True iff all exponents are <= 0.
    bool in_zvinv() const { return is_zero() || degree() <= 0; }
    bool is_polynomial_in_v() const { return is_zero() || valuation() >= 0; }

    // Part with exponents < 0.
    Laurent negative_part() const {
        Laurent r;
        for (auto& [k, c] : coeffs_)
            if (k < 0) r.coeffs_[k] = c;
        return r;
    }

    bool all_coeffs_nonneg() const {
        for (auto& [k, c] : coeffs_) { (void)k; if (c < 0) return false; }
        return true;
    }
    bool only_even_exponents() const {
        for (auto& [k, c] : coeffs_) { (void)c; if (k % 2 != 0) return false; }
        return true;
    }

    // Canonical text form, exponents descending: "2*v^3 + -1*v^1 + 5".
    std::string to_string() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            if (!first) os << " + ";
            first = false;
            if (it->first == 0) os << it->second.str();
            else os << it->second.str() << "*v^" << it->first;
        }
        return os.str();
    }

    static Laurent parse(const std::string& s) {
        Laurent r;
        if (s == "0") return r;
        size_t pos = 0;
        while (pos < s.size()) {
            size_t next = s.find(" + ", pos);
            std::string tok = s.substr(pos, next == std::string::npos ? next : next - pos);
            size_t star = tok.find("*v^");
            if (star == std::string::npos) r += term(Int(tok), 0);
            else r += term(Int(tok.substr(0, star)), std::stoi(tok.substr(star + 3)));
            if (next == std::string::npos) break;
            pos = next + 3;
        }
        return r;
    }

private:
    void add_term(int k, const Int& c) {
        auto it = coeffs_.find(k);
        if (it == coeffs_.end()) {
            if (c != 0) coeffs_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    std::map<int, Int> coeffs_;  // exponent -> coefficient, no zero entries
};

// Z[v, v^-1, v', v'^-1] with v, v' independent. Only what P3 needs.
class Laurent2 {
public:
    Laurent2() = default;

    static Laurent2 from_v(const Laurent& p) {
        Laurent2 r;
        for (auto& [k, c] : p.coeffs()) r.coeffs_[{k, 0}] = c;
        return r;
    }
    static Laurent2 from_vprime(const Laurent& p) {
        Laurent2 r;
        for (auto& [k, c] : p.coeffs()) r.coeffs_[{0, k}] = c;
        return r;
    }

    bool is_zero() const { return coeffs_.empty(); }

    Laurent2& operator+=(const Laurent2& o) {
        for (auto& [k, c] : o.coeffs_) add_term(k, c);
        return *this;
    }
    friend Laurent2 operator*(const Laurent2& a, const Laurent2& b) {
        Laurent2 r;
        for (auto& [ka, ca] : a.coeffs_)
            for (auto& [kb, cb] : b.coeffs_)
                r.add_term({ka.first + kb.first, ka.second + kb.second}, ca * cb);
        return r;
    }
    friend bool operator==(const Laurent2& a, const Laurent2& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const Laurent2& a, const Laurent2& b) { return !(a == b); }

    // Specialize v' -> v; recovers a one-variable Laurent polynomial.
    Laurent specialize_diagonal() const {
        Laurent r;
        for (auto& [k, c] : coeffs_) r += Laurent::term(c, k.first + k.second);
        return r;
    }

    // Coefficient of v'^e as a polynomial in v.
    Laurent coeff_of_vprime(int e) const {
        Laurent r;
        for (auto& [k, c] : coeffs_)
            if (k.second == e) r += Laurent::term(c, k.first);
        return r;
    }

private:
    void add_term(const std::pair<int, int>& k, const Int& c) {
        auto it = coeffs_.find(k);
        if (it == coeffs_.end()) {
            if (c != 0) coeffs_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    std::map<std::pair<int, int>, Int> coeffs_;
};

}  // namespace heckelab
