#include "fiblab/modring.hpp"

#include <algorithm>
#include <numeric>

namespace fiblab::modring {

namespace {

using u64 = unsigned long long;
using u128 = unsigned __int128;

u64 mulmod_u(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<u128>(a) * b) % m); }

u64 powmod_u(u64 base, u64 exp, u64 m) {
    u64 r = m == 1 ? 0 : 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u(r, base, m);
        base = mulmod_u(base, base, m);
        exp >>= 1;
    }
    return r;
}

bool miller_rabin(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // Deterministic witness set for all 64-bit inputs.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

u64 pollard_rho(u64 n) {
    if ((n & 1) == 0) return 2;
    for (u64 c = 1;; ++c) {
        auto f = [&](u64 x) { return (mulmod_u(x, x, n) + c) % n; };
        u64 x = 2, y = 2, d = 1;
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            u64 diff = x > y ? x - y : y - x;
            d = std::gcd(diff, n);
        }
        if (d != n) return d;
    }
}

void factor_rec(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (miller_rabin(n)) { out.push_back(n); return; }
    u64 d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

Residue make_residue(long long value, long long modulus) {
    if (modulus < 1) throw InvalidArgument("residue: modulus must be >= 1");
    return Residue{mod_reduce(value, modulus), modulus};
}

bool ResidueSet::contains(long long v) const {
    v = mod_reduce(v, modulus);
    return std::binary_search(members.begin(), members.end(), v);
}

Factorization factorize(long long n) {
    if (n <= 0) throw InvalidArgument("factorize: n must be >= 1");
    // Sweeps query the same modulus once per residue value, so keep the most
    // recent result around.
    thread_local long long memo_n = 0;
    thread_local Factorization memo_f;
    if (n == memo_n) return memo_f;
    std::vector<u64> primes;
    u64 m = static_cast<u64>(n);
    // Strip small primes first; rho handles what survives.
    for (u64 p = 2; p < 100 && p * p <= m; p += (p == 2 ? 1 : 2))
        while (m % p == 0) { primes.push_back(p); m /= p; }
    factor_rec(m, primes);
    std::sort(primes.begin(), primes.end());
    Factorization f;
    for (u64 p : primes) {
        if (!f.empty() && f.back().first == static_cast<long long>(p))
            ++f.back().second;
        else
            f.emplace_back(static_cast<long long>(p), 1);
    }
    memo_n = n;
    memo_f = f;
    return f;
}

long long euler_phi(long long n) {
    if (n <= 0) throw InvalidArgument("euler_phi: n must be >= 1");
    long long phi = n;
    for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
    return phi;
}

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

long long mod_reduce(long long v, long long modulus) {
    if (modulus < 1) throw InvalidArgument("mod_reduce: modulus must be >= 1");
    long long r = v % modulus;
    return r < 0 ? r + modulus : r;
}

long long mod_mul(long long a, long long b, long long modulus) {
    a = mod_reduce(a, modulus);
    b = mod_reduce(b, modulus);
    return static_cast<long long>((static_cast<u128>(a) * static_cast<u64>(b)) % static_cast<u64>(modulus));
}

long long mod_pow(long long base, long long exp, long long modulus) {
    if (exp < 0) throw InvalidArgument("mod_pow: negative exponent");
    return static_cast<long long>(
        powmod_u(static_cast<u64>(mod_reduce(base, modulus)), static_cast<u64>(exp), static_cast<u64>(modulus)));
}

long long mod_inverse(long long a, long long modulus) {
    a = mod_reduce(a, modulus);
    if (modulus == 1) return 0;
    long long g = std::gcd(a, modulus);
    if (g != 1) throw InvalidArgument("mod_inverse: value is not a unit");
    // Extended Euclid.
    long long r0 = modulus, r1 = a, s0 = 0, s1 = 1;
    while (r1) {
        long long q = r0 / r1;
        r0 -= q * r1; std::swap(r0, r1);
        s0 -= q * s1; std::swap(s0, s1);
    }
    return mod_reduce(s0, modulus);
}

ResidueSet pm_unit_squares(long long n) {
    if (n <= 0) throw InvalidArgument("pm_unit_squares: n must be >= 1");
    ResidueSet out;
    out.modulus = n;
    if (n == 1) { out.members = {0}; return out; }
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (long long t = 1; t < n; ++t) {
        if (std::gcd(t, n) != 1) continue;
        long long sq = mod_mul(t, t, n);
        seen[static_cast<size_t>(sq)] = 1;
        seen[static_cast<size_t>(mod_reduce(-sq, n))] = 1;
    }
    for (long long v = 0; v < n; ++v)
        if (seen[static_cast<size_t>(v)]) out.members.push_back(v);
    return out;
}

namespace {

// Is v a unit square mod p^e? Requires gcd(v, p^e) = 1.
//  odd p: v^(phi/2) == 1 mod p^e (the unit group is cyclic of even order
//         phi = p^(e-1)(p-1), squares are the unique index-2 subgroup);
//  p = 2: e = 1 -> always; e = 2 -> v == 1 mod 4; e >= 3 -> v == 1 mod 8.
bool unit_square_mod_prime_power(long long v, long long p, int e) {
    long long pe = 1;
    for (int i = 0; i < e; ++i) pe *= p;
    v = mod_reduce(v, pe);
    if (p == 2) {
        if (e == 1) return true;
        if (e == 2) return v % 4 == 1;
        return v % 8 == 1;
    }
    long long phi = pe / p * (p - 1);
    return mod_pow(v, phi / 2, pe) == 1;
}

}  // namespace

bool is_pm_unit_square(const Residue& m) {
    if (m.modulus < 1) throw InvalidArgument("is_pm_unit_square: bad modulus");
    if (m.modulus == 1) return true;
    long long v = mod_reduce(m.value, m.modulus);
    if (std::gcd(v, m.modulus) != 1) return false;
    Factorization f = factorize(m.modulus);
    // The sign must be the same in every component: check +v everywhere,
    // then -v everywhere.
    for (long long sign : {1ll, -1ll}) {
        bool all = true;
        for (auto [p, e] : f)
            if (!unit_square_mod_prime_power(mod_reduce(sign * v, m.modulus), p, e)) { all = false; break; }
        if (all) return true;
    }
    return false;
}

bool is_unit_square(const Residue& m) {
    if (m.modulus < 1) throw InvalidArgument("is_unit_square: bad modulus");
    if (m.modulus == 1) return true;
    long long v = mod_reduce(m.value, m.modulus);
    if (std::gcd(v, m.modulus) != 1) return false;
    for (auto [p, e] : factorize(m.modulus))
        if (!unit_square_mod_prime_power(v, p, e)) return false;
    return true;
}

fgab::AbGroup unit_group_structure(long long n) {
    if (n <= 0) throw InvalidArgument("unit_group_structure: n must be >= 1");
    std::vector<long long> orders;
    for (auto [p, e] : factorize(n)) {
        long long pe = 1;
        for (int i = 0; i < e; ++i) pe *= p;
        if (p == 2) {
            if (e == 2) orders.push_back(2);
            if (e >= 3) {
                orders.push_back(2);
                orders.push_back(pe / 4);
            }
        } else {
            orders.push_back(pe / p * (p - 1));
        }
    }
    return fgab::AbGroup::from_cyclic_summands(orders, 0);
}

std::vector<Residue> crt_split(const Residue& m, const Factorization& f) {
    long long prod = 1;
    for (auto [p, e] : f) {
        for (int i = 0; i < e; ++i) prod = fgab::checked_mul(prod, p);
    }
    if (prod != m.modulus) throw InvalidArgument("crt_split: factorization does not match modulus");
    std::vector<Residue> out;
    for (auto [p, e] : f) {
        long long pe = 1;
        for (int i = 0; i < e; ++i) pe *= p;
        out.push_back(Residue{mod_reduce(m.value, pe), pe});
    }
    return out;
}

Residue crt_combine(const std::vector<Residue>& components) {
    long long mod = 1, val = 0;
    for (const Residue& c : components) {
        if (std::gcd(mod, c.modulus) != 1)
            throw InvalidArgument("crt_combine: moduli not pairwise coprime");
        // Solve x == val mod `mod`, x == c.value mod c.modulus.
        long long inv = mod_inverse(mod_reduce(mod, c.modulus), c.modulus);
        long long t = mod_mul(mod_reduce(c.value - val, c.modulus), inv, c.modulus);
        val = fgab::checked_add(val, fgab::checked_mul(mod, t));
        mod = fgab::checked_mul(mod, c.modulus);
        val = mod_reduce(val, mod);
    }
    return Residue{val, mod};
}

}  // namespace fiblab::modring
