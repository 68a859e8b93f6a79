//! Exact integer primitives: perfect powers, p-adic valuations, trial-division
//! factorization and the least exponent n with b^n ≡ ±1 (mod p).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{invalid, Result};

/// Trial division never goes past this bound; larger cofactors are reported as-is.
pub const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// `base^exponent` with `exponent` maximal, so `base` is not itself a perfect power.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerDecomposition {
    pub base: BigUint,
    pub exponent: u32,
}

/// Decomposes `n ≥ 2` as `base^exponent` with the largest possible exponent.
pub fn perfect_power(n: &BigUint) -> Result<PowerDecomposition> {
    if *n < BigUint::from(2u32) {
        return invalid(format!("perfect_power needs n >= 2, got {n}"));
    }
    let mut base = n.clone();
    let mut exponent = 1u32;
    'peel: loop {
        let bits = u32::try_from(base.bits()).unwrap_or(u32::MAX);
        for p in primes_up_to(u64::from(bits)) {
            let p = p as u32;
            let root = base.nth_root(p);
            if root > BigUint::one() && root.pow(p) == base {
                base = root;
                exponent *= p;
                continue 'peel;
            }
        }
        break;
    }
    Ok(PowerDecomposition { base, exponent })
}

pub fn is_perfect_power(n: &BigUint) -> bool {
    perfect_power(n).map(|d| d.exponent > 1).unwrap_or(false)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Prime factorization of a machine word by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct prime divisors of `n`, found by trial division up to
/// [`TRIAL_DIVISION_LIMIT`]. A leftover cofactor is included when it is
/// certainly prime (below the square of the limit); otherwise it is dropped.
pub fn distinct_prime_divisors(n: &BigUint) -> Vec<u64> {
    if let Some(small) = n.to_u64() {
        return factorize(small).into_iter().map(|(p, _)| p).collect();
    }
    let mut rest = n.clone();
    let mut out = Vec::new();
    for p in primes_up_to(TRIAL_DIVISION_LIMIT) {
        let bp = BigUint::from(p);
        if (&rest % &bp).is_zero() {
            out.push(p);
            while (&rest % &bp).is_zero() {
                rest /= &bp;
            }
        }
        if rest.is_one() {
            break;
        }
    }
    if let Some(q) = rest.to_u64() {
        if q > 1 && (q as u128) < (TRIAL_DIVISION_LIMIT as u128).pow(2) {
            out.push(q);
        }
    }
    out
}

/// Largest `t` with `p^t | n`.
pub fn padic_valuation(p: u64, n: &BigInt) -> Result<u32> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if n.is_zero() {
        return invalid("valuation of zero is undefined");
    }
    Ok(valuation(p, n.magnitude()))
}

/// Valuation of a nonzero natural number at `p ≥ 2` (primality not checked).
pub(crate) fn valuation(p: u64, n: &BigUint) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigUint::from(p);
    let mut t = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return t;
        }
        m = q;
        t += 1;
    }
}

fn mod_pow_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

/// Multiplicative order of `b` modulo the prime `p` (requires `p ∤ b`).
pub fn multiplicative_order(b: u64, p: u64) -> u64 {
    let b = b % p;
    let mut order = p - 1;
    for (q, _) in factorize(p - 1) {
        while order.is_multiple_of(q) && mod_pow_u64(b, order / q, p) == 1 {
            order /= q;
        }
    }
    order
}

/// Result of [`pm1_index`]: `n` is least with `b^n ≡ ±1 (mod p)` and
/// `p^g ∥ b^n + sign`, the sign chosen to maximize `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pm1Index {
    pub n: u64,
    pub g: u32,
    pub sign: i8,
}

/// Least `n ≥ 1` with `b^n ≡ ±1 (mod p)` together with the exact power of `p`
/// dividing `b^n + sign`.
///
/// For `p = 2` every odd `b` has `n = 1`; the sign is whichever of `b ± 1`
/// carries the larger power of two.
pub fn pm1_index(b: &BigUint, p: u64) -> Result<Pm1Index> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if *b < BigUint::from(2u32) {
        return invalid(format!("pm1_index needs b > 1, got {b}"));
    }
    let bp = BigUint::from(p);
    let residue = (b % &bp).to_u64().expect("residue below p");
    if residue == 0 {
        return invalid(format!("{p} divides {b}"));
    }

    if p == 2 {
        let plus = valuation(2, &(b + 1u32));
        let minus = valuation(2, &(b - 1u32));
        return Ok(if plus >= minus {
            Pm1Index { n: 1, g: plus, sign: 1 }
        } else {
            Pm1Index { n: 1, g: minus, sign: -1 }
        });
    }

    let order = multiplicative_order(residue, p);
    let (n, sign) = if order.is_multiple_of(2) && mod_pow_u64(residue, order / 2, p) == p - 1 {
        (order / 2, 1i8)
    } else {
        (order, -1i8)
    };
    let g = valuation_of_power_shift(b, n, sign, p);
    Ok(Pm1Index { n, g, sign })
}

/// `v_p(b^n + sign)` computed modulo growing powers of `p`, never forming `b^n`.
fn valuation_of_power_shift(b: &BigUint, n: u64, sign: i8, p: u64) -> u32 {
    let bp = BigUint::from(p);
    let exp = BigUint::from(n);
    let mut modulus = bp.clone();
    let mut g = 0u32;
    loop {
        let pw = b.modpow(&exp, &modulus);
        let shifted = if sign > 0 { (pw + 1u32) % &modulus } else { (pw + &modulus - 1u32) % &modulus };
        if !shifted.is_zero() {
            return g;
        }
        g += 1;
        modulus *= &bp;
    }
}
