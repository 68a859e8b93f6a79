//! Brute-force oracles shared by the integration tests. They recompute from
//! definitions and do not call into the library's own arithmetic.
#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

pub fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

/// Every sign choice `(u, v)` making `(x, y)` a solution.
pub fn sign_choices(a: &BigUint, b: &BigUint, c: &BigUint, r: &BigUint, s: &BigUint, x: u32, y: u32) -> Vec<(u8, u8)> {
    let l = BigInt::from(r * a.pow(x));
    let rt = BigInt::from(s * b.pow(y));
    let c = BigInt::from(c.clone());
    let mut out = Vec::new();
    for u in 0..2u8 {
        for v in 0..2u8 {
            let lv = if u == 0 { l.clone() } else { -l.clone() };
            let rv = if v == 0 { rt.clone() } else { -rt.clone() };
            if lv + rv == c {
                out.push((u, v));
            }
        }
    }
    out
}

/// Double loop over all `x, y ≤ cap`.
pub fn brute_pairs(a: u64, b: u64, c: u64, r: u64, s: u64, cap: u32) -> Vec<(u32, u32)> {
    let (a, b, c, r, s) = (big(a), big(b), big(c), big(r), big(s));
    let mut out = Vec::new();
    for x in 0..=cap {
        for y in 0..=cap {
            if !sign_choices(&a, &b, &c, &r, &s, x, y).is_empty() {
                out.push((x, y));
            }
        }
    }
    out
}

pub fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn valuation(p: u64, n: &BigUint) -> u32 {
    let p = big(p);
    let mut n = n.clone();
    let mut e = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        e += 1;
    }
    e
}

/// Per prime of `a`: the least `n` with `p | b^n ± 1`, and the larger of the
/// two valuations of `b^n − 1`, `b^n + 1`. Returns rows and `∏ p^g`.
pub fn sigma_oracle(a: u64, b: u64) -> (Vec<(u64, u64, u32)>, BigUint) {
    assert_eq!(a.gcd(&b), 1);
    let mut rows = Vec::new();
    let mut h = BigUint::one();
    for (p, _) in prime_factors(a) {
        let mut n = 1u64;
        loop {
            let bn = big(b).pow(n as u32);
            let minus = &bn - 1u32;
            let plus = &bn + 1u32;
            let pp = big(p);
            if (&minus % &pp).is_zero() || (&plus % &pp).is_zero() {
                let g = valuation(p, &minus).max(valuation(p, &plus));
                rows.push((p, n, g));
                h *= pp.pow(g);
                break;
            }
            n += 1;
        }
    }
    (rows, h)
}
