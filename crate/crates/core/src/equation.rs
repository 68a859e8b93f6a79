//! Instances and solutions of (−1)^u·r·a^x + (−1)^v·s·b^y = c.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{distinct_prime_divisors, valuation};
use crate::error::{invalid, Error, Result};

/// Interactive default for both exponent caps.
pub const DEFAULT_CAP: u32 = 64;

/// Coefficients `(a, b, c, r, s)` with `a, b > 1` and `c, r, s > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Instance {
    pub a: BigUint,
    pub b: BigUint,
    pub c: BigUint,
    pub r: BigUint,
    pub s: BigUint,
}

impl Instance {
    pub fn new(a: BigUint, b: BigUint, c: BigUint, r: BigUint, s: BigUint) -> Result<Self> {
        let one = BigUint::one();
        if a <= one || b <= one {
            return invalid(format!("bases must exceed 1 (a={a}, b={b})"));
        }
        if c.is_zero() || r.is_zero() || s.is_zero() {
            return invalid(format!("c, r, s must be positive (c={c}, r={r}, s={s})"));
        }
        Ok(Instance { a, b, c, r, s })
    }

    pub fn from_u64(a: u64, b: u64, c: u64, r: u64, s: u64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), r.into(), s.into())
    }

    /// The instance with `(a, r)` and `(b, s)` exchanged.
    pub fn associate(&self) -> Instance {
        Instance { a: self.b.clone(), b: self.a.clone(), c: self.c.clone(), r: self.s.clone(), s: self.r.clone() }
    }

    /// `r·a^x`
    pub fn left_term(&self, x: u32) -> BigUint {
        &self.r * self.a.pow(x)
    }

    /// `s·b^y`
    pub fn right_term(&self, y: u32) -> BigUint {
        &self.s * self.b.pow(y)
    }

    pub fn bases_coprime(&self) -> bool {
        self.a.gcd(&self.b).is_one()
    }

    /// `gcd(r·a, s·b) = 1`
    pub fn terms_coprime(&self) -> bool {
        (&self.r * &self.a).gcd(&(&self.s * &self.b)).is_one()
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.a, self.b, self.c, self.r, self.s)
    }
}

/// One solution `(x, y, u, v)`; ordering is by `(x, y)` first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution {
    pub x: u32,
    pub y: u32,
    pub u: u8,
    pub v: u8,
}

impl Solution {
    pub fn pair(&self) -> (u32, u32) {
        (self.x, self.y)
    }
}

/// Signed value of `(−1)^u·r·a^x + (−1)^v·s·b^y`.
pub fn evaluate(inst: &Instance, x: u32, y: u32, u: u8, v: u8) -> BigInt {
    let left = BigInt::from(inst.left_term(x));
    let right = BigInt::from(inst.right_term(y));
    let left = if u == 0 { left } else { -left };
    let right = if v == 0 { right } else { -right };
    left + right
}

/// The unique sign pair making `(x, y)` a solution, if any.
///
/// `(1, 1)` is impossible because `c > 0`, and at most one of the remaining
/// three identities can hold since `r·a^x` and `s·b^y` are positive.
pub fn determine_signs(inst: &Instance, x: u32, y: u32) -> Option<(u8, u8)> {
    let left = inst.left_term(x);
    let right = inst.right_term(y);
    if &left + &right == inst.c {
        Some((0, 0))
    } else if left > right && &left - &right == inst.c {
        Some((0, 1))
    } else if right > left && &right - &left == inst.c {
        Some((1, 0))
    } else {
        None
    }
}

/// Builds a verified [`Solution`] or reports that `(x, y)` does not solve `inst`.
pub fn solution_at(inst: &Instance, x: u32, y: u32) -> Result<Solution> {
    determine_signs(inst, x, y).map(|(u, v)| Solution { x, y, u, v }).ok_or_else(|| Error::NotASolution {
        instance: inst.to_string(),
        x,
        y,
    })
}

/// Output of [`enumerate_solutions`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub solutions: Vec<Solution>,
    /// True only when no solution can lie beyond the caps. This is provable
    /// here only for `gcd(a, b) > 1`, via the valuation cap on `min(x, y)`.
    pub complete: bool,
}

/// If `value = s·b^y` for some `y`, returns that `y`.
fn log_of_right(inst: &Instance, value: &BigUint, y_cap: u32) -> Option<u32> {
    if value.is_zero() {
        return None;
    }
    let (mut q, rem) = value.div_rem(&inst.s);
    if !rem.is_zero() {
        return None;
    }
    let mut y = 0u32;
    while !q.is_one() {
        let (next, rem) = q.div_rem(&inst.b);
        if !rem.is_zero() || y == y_cap {
            return None;
        }
        q = next;
        y += 1;
    }
    Some(y)
}

/// All solutions with `x ≤ x_cap` and `y ≤ y_cap`, sorted by `(x, y)`.
pub fn enumerate_solutions(inst: &Instance, x_cap: u32, y_cap: u32) -> Enumeration {
    let mut solutions = Vec::new();
    let mut ax = BigUint::one();
    for x in 0..=x_cap {
        let left = &inst.r * &ax;
        // s·b^y = c − r·a^x  (u = 0, v = 0)
        if left < inst.c {
            if let Some(y) = log_of_right(inst, &(&inst.c - &left), y_cap) {
                solutions.push(Solution { x, y, u: 0, v: 0 });
            }
        }
        // s·b^y = r·a^x − c  (u = 0, v = 1)
        if left > inst.c {
            if let Some(y) = log_of_right(inst, &(&left - &inst.c), y_cap) {
                solutions.push(Solution { x, y, u: 0, v: 1 });
            }
        }
        // s·b^y = c + r·a^x  (u = 1, v = 0)
        if let Some(y) = log_of_right(inst, &(&inst.c + &left), y_cap) {
            solutions.push(Solution { x, y, u: 1, v: 0 });
        }
        ax *= &inst.a;
    }
    solutions.sort();
    let complete = caps_are_complete(inst, x_cap, y_cap);
    Enumeration { solutions, complete }
}

/// Whether the caps provably cover every solution.
///
/// With `t` the valuation cap on `min(x, y)`, any solution with `x ≤ t` has
/// `s·b^y ≤ c + r·a^t`, which bounds `y`; symmetrically for `y ≤ t`.
pub fn caps_are_complete(inst: &Instance, x_cap: u32, y_cap: u32) -> bool {
    let Some(t) = gcd_exponent_cap(inst) else {
        return false;
    };
    if x_cap < t || y_cap < t {
        return false;
    }
    let need_y = max_exponent_below(&inst.s, &inst.b, &(&inst.c + inst.left_term(t)));
    let need_x = max_exponent_below(&inst.r, &inst.a, &(&inst.c + inst.right_term(t)));
    y_cap >= need_y && x_cap >= need_x
}

/// Largest `e` with `coef·base^e ≤ limit` (0 if even `coef > limit`).
fn max_exponent_below(coef: &BigUint, base: &BigUint, limit: &BigUint) -> u32 {
    let mut e = 0;
    let mut v = coef * base;
    while &v <= limit {
        e += 1;
        v *= base;
    }
    e
}

/// Cap on `min(x, y)` from primes dividing both `a` and `b`.
///
/// Every such prime `p` forces `min(x, y) ≤ v_p(c)`, so the sharpest cap is
/// the minimum over them. `None` when `gcd(a, b) = 1`.
pub fn gcd_exponent_cap(inst: &Instance) -> Option<u32> {
    let g = inst.a.gcd(&inst.b);
    if g.is_one() {
        return None;
    }
    distinct_prime_divisors(&g).into_iter().map(|p| valuation(p, &inst.c)).min()
}

/// Both sides of the identity relating two solutions:
/// `r·a^xmin·(a^t + (−1)^γ) = s·b^ymin·(b^w + (−1)^δ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairRelation {
    pub gamma: u8,
    pub delta: u8,
    pub common_value: BigUint,
    pub xmin: u32,
    pub ymin: u32,
    pub t_diff: u32,
    pub w_diff: u32,
}

fn shifted(base: &BigUint, e: u32, sign_exp: u8) -> Option<BigUint> {
    let p = base.pow(e);
    if sign_exp == 0 {
        Some(p + 1u32)
    } else if p.is_zero() || p.is_one() {
        // a^0 − 1 = 0: the side vanishes; impossible for distinct solutions
        None
    } else {
        Some(p - 1u32)
    }
}

/// Evaluates both sides for two distinct solutions and checks they agree.
pub fn pair_relation(inst: &Instance, s1: &Solution, s2: &Solution) -> Result<PairRelation> {
    if s1.pair() == s2.pair() {
        return invalid("pair_relation needs two distinct solutions");
    }
    for s in [s1, s2] {
        if determine_signs(inst, s.x, s.y) != Some((s.u, s.v)) {
            return Err(Error::NotASolution { instance: inst.to_string(), x: s.x, y: s.y });
        }
    }
    // Subtracting the two equations: the x-terms carry signs u1,u2 and the
    // y-terms v1,v2. Equal signs leave a difference, unequal signs a sum.
    let gamma = u8::from(s1.u == s2.u);
    let delta = u8::from(s1.v == s2.v);
    let xmin = s1.x.min(s2.x);
    let ymin = s1.y.min(s2.y);
    let t_diff = s1.x.abs_diff(s2.x);
    let w_diff = s1.y.abs_diff(s2.y);
    let lhs = shifted(&inst.a, t_diff, gamma).map(|f| inst.left_term(xmin) * f);
    let rhs = shifted(&inst.b, w_diff, delta).map(|f| inst.right_term(ymin) * f);
    match (lhs, rhs) {
        (Some(l), Some(r)) if l == r && !l.is_zero() => {
            Ok(PairRelation { gamma, delta, common_value: l, xmin, ymin, t_diff, w_diff })
        }
        (l, r) => Err(Error::InvalidArgument(format!(
            "pair identity fails for {inst}: {:?} vs {:?}",
            l.map(|v| v.to_string()),
            r.map(|v| v.to_string())
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(a: u64, b: u64, c: u64, r: u64, s: u64) -> Instance {
        Instance::from_u64(a, b, c, r, s).unwrap()
    }

    fn pairs(e: &Enumeration) -> Vec<(u32, u32)> {
        e.solutions.iter().map(Solution::pair).collect()
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(Instance::from_u64(1, 2, 3, 1, 1).is_err());
        assert!(Instance::from_u64(2, 2, 0, 1, 1).is_err());
        assert!(Instance::from_u64(2, 2, 3, 0, 1).is_err());
    }

    #[test]
    fn signs() {
        assert_eq!(determine_signs(&inst(3, 2, 1, 1, 2), 2, 2), Some((0, 1)));
        assert_eq!(determine_signs(&inst(5, 2, 3, 1, 2), 0, 0), Some((0, 0)));
        assert_eq!(determine_signs(&inst(3, 2, 1, 1, 2), 5, 5), None);
        assert_eq!(determine_signs(&inst(3, 2, 1, 1, 2), 1, 1), Some((1, 0)));
    }

    #[test]
    fn enumerate_known_sets() {
        let e = enumerate_solutions(&inst(5, 3, 2, 1, 1), 64, 64);
        assert_eq!(pairs(&e), vec![(0, 0), (0, 1), (1, 1), (2, 3)]);
        let signs: Vec<_> = e.solutions.iter().map(|s| (s.u, s.v)).collect();
        assert_eq!(signs, vec![(0, 0), (1, 0), (0, 1), (1, 0)]);
        assert!(!e.complete);

        let e = enumerate_solutions(&inst(6, 2, 8, 1, 7), 64, 64);
        assert_eq!(pairs(&e), vec![(0, 0), (1, 1), (2, 2), (3, 5)]);
        assert!(e.complete);
    }

    #[test]
    fn enumerate_anomalous() {
        let big = Instance::from_u64(56744, 1477, 83810889, 1478, 56743).unwrap();
        let e = enumerate_solutions(&big, 16, 16);
        assert_eq!(pairs(&e), vec![(0, 1), (1, 0), (3, 4)]);
    }

    #[test]
    fn y_zero_when_value_equals_s() {
        // 1 + 2 = 3 with y = 0
        let e = enumerate_solutions(&inst(5, 2, 3, 1, 2), 3, 6);
        assert!(pairs(&e).contains(&(0, 0)));
    }

    #[test]
    fn caps_respected() {
        let e = enumerate_solutions(&inst(5, 2, 3, 1, 2), 3, 5);
        assert_eq!(pairs(&e), vec![(0, 0), (0, 1), (1, 0), (1, 2)]);
    }

    #[test]
    fn exponent_cap() {
        assert_eq!(gcd_exponent_cap(&inst(6, 2, 8, 1, 7)), Some(3));
        assert_eq!(gcd_exponent_cap(&inst(3, 3, 3, 1, 2)), Some(1));
        assert_eq!(gcd_exponent_cap(&inst(5, 2, 3, 1, 2)), None);
        // 2 and 3 both divide a and b; 2^3 ∥ 24 but 3^1 ∥ 24
        assert_eq!(gcd_exponent_cap(&inst(6, 6, 24, 1, 1)), Some(1));
    }

    #[test]
    fn pair_relation_examples() {
        let i = inst(5, 2, 3, 1, 2);
        let s1 = solution_at(&i, 1, 0).unwrap();
        let s2 = solution_at(&i, 3, 6).unwrap();
        let p = pair_relation(&i, &s1, &s2).unwrap();
        assert_eq!((p.gamma, p.delta), (0, 0));
        assert_eq!(p.common_value, BigUint::from(130u32));

        let i = inst(3, 2, 1, 1, 2);
        let p = pair_relation(&i, &solution_at(&i, 0, 0).unwrap(), &solution_at(&i, 1, 1).unwrap()).unwrap();
        assert!(p.common_value > BigUint::zero());

        let i = inst(2, 2, 4, 3, 1);
        let p = pair_relation(&i, &solution_at(&i, 1, 1).unwrap(), &solution_at(&i, 2, 3).unwrap()).unwrap();
        assert!(p.common_value > BigUint::zero());

        let s = solution_at(&i, 1, 1).unwrap();
        assert!(pair_relation(&i, &s, &s).is_err());
    }
}
