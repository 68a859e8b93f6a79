//! The infinite three-solution constructions: two with a common base factor
//! (57, 58) and six with coprime terms (84 through 89).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::catalog::match_catalog;
use crate::equation::{enumerate_solutions, Instance, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::sets::{family_key, reduce_to_basic_form, FamilyKey, SolutionSet};

/// Family identifiers, numbered after their displays.
pub const FAMILY_IDS: [u32; 8] = [57, 58, 84, 85, 86, 87, 88, 89];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorParams {
    /// `t = (a^m + (−1)^v)/(a + (−1)^u)` must be integral.
    F57 {
        a: u64,
        m: u32,
        u: u8,
        v: u8,
    },
    /// `m1` odd, `m1 ≥ −1`.
    F58 {
        m1: i32,
    },
    /// `k = k_twice / 2`; odd `k_twice` only for `a = d = 2`, `(u, v) = (1, 1)`.
    F84 {
        a: u64,
        d: u32,
        k_twice: u32,
        u: u8,
        v: u8,
    },
    F85 {
        a: u64,
        d: u32,
        v: u8,
    },
    /// `a = 3`; the 2-adic shift α comes from [`alpha_86`].
    F86 {
        g: u32,
        v: u8,
    },
    /// `a = 2`.
    F87 {
        g: u32,
        v: u8,
    },
    /// `a` even; `upper` picks the top row of the ± / ∓ signs.
    F88 {
        a: u64,
        x: u32,
        upper: bool,
    },
    F89 {
        a: u64,
        x2: u32,
        x3: u32,
        t: u8,
        w: u8,
    },
}

impl GeneratorParams {
    pub fn family_id(&self) -> u32 {
        match self {
            GeneratorParams::F57 { .. } => 57,
            GeneratorParams::F58 { .. } => 58,
            GeneratorParams::F84 { .. } => 84,
            GeneratorParams::F85 { .. } => 85,
            GeneratorParams::F86 { .. } => 86,
            GeneratorParams::F87 { .. } => 87,
            GeneratorParams::F88 { .. } => 88,
            GeneratorParams::F89 { .. } => 89,
        }
    }

    /// Families built with `gcd(a, b) > 1`; the rest have `gcd(r·a, s·b) = 1`.
    pub fn common_base(&self) -> bool {
        matches!(self, GeneratorParams::F57 { .. } | GeneratorParams::F58 { .. })
    }
}

impl fmt::Display for GeneratorParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GeneratorParams::F57 { a, m, u, v } => write!(f, "57 a={a} m={m} u={u} v={v}"),
            GeneratorParams::F58 { m1 } => write!(f, "58 m1={m1}"),
            GeneratorParams::F84 { a, d, k_twice, u, v } => {
                if k_twice % 2 == 0 {
                    write!(f, "84 a={a} d={d} k={} u={u} v={v}", k_twice / 2)
                } else {
                    write!(f, "84 a={a} d={d} k={k_twice}/2 u={u} v={v}")
                }
            }
            GeneratorParams::F85 { a, d, v } => write!(f, "85 a={a} d={d} v={v}"),
            GeneratorParams::F86 { g, v } => write!(f, "86 g={g} v={v}"),
            GeneratorParams::F87 { g, v } => write!(f, "87 g={g} v={v}"),
            GeneratorParams::F88 { a, x, upper } => {
                write!(f, "88 a={a} x={x} signs={}", if upper { "upper" } else { "lower" })
            }
            GeneratorParams::F89 { a, x2, x3, t, w } => {
                write!(f, "89 a={a} x2={x2} x3={x3} t={t} w={w}")
            }
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}

/// `(−1)^k`
fn sgn(k: u32) -> BigInt {
    if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

fn pow(a: u64, e: u32) -> BigInt {
    BigInt::from(a).pow(e)
}

/// Exact quotient or an error naming `what`.
fn exact_div(num: &BigInt, den: &BigInt, what: &str) -> Result<BigInt> {
    if den.is_zero() {
        return Err(bad(format!("{what}: zero denominator")));
    }
    let (q, r) = num.div_rem(den);
    if !r.is_zero() {
        return Err(bad(format!("{what} = {num}/{den} is not an integer")));
    }
    Ok(q)
}

fn positive(v: BigInt, what: &str, min: u32) -> Result<BigUint> {
    if v < BigInt::from(min) {
        return Err(bad(format!("{what} = {v} must be at least {min}")));
    }
    Ok(v.to_biguint().expect("positive"))
}

fn check_sign(s: u8, name: &str) -> Result<()> {
    if s > 1 {
        return Err(bad(format!("{name} must be 0 or 1")));
    }
    Ok(())
}

/// α for the `a = 3` construction: 0 when `g − v` is even, 1 for `g` odd and
/// `v = 0`, 2 for `g` even and `v = 1`.
pub fn alpha_86(g: u32, v: u8) -> u32 {
    const TABLE: [[u32; 2]; 2] = [
        // v = 0, v = 1
        [0, 2], // g even
        [1, 0], // g odd
    ];
    TABLE[(g % 2) as usize][v as usize]
}

struct Raw {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    r: BigInt,
    s: BigInt,
    pairs: [(u32, u32); 3],
}

fn assemble(raw: Raw) -> Result<SolutionSet> {
    let inst = Instance::new(
        positive(raw.a, "a", 2)?,
        positive(raw.b, "b", 2)?,
        positive(raw.c, "c", 1)?,
        positive(raw.r, "r", 1)?,
        positive(raw.s, "s", 1)?,
    )?;
    SolutionSet::new(inst, &raw.pairs).map_err(|e| bad(format!("construction does not verify: {e}")))
}

/// Builds the raw set exactly as the construction displays it.
pub fn construct(params: &GeneratorParams) -> Result<SolutionSet> {
    match *params {
        GeneratorParams::F57 { a, m, u, v } => {
            check_sign(u, "u")?;
            check_sign(v, "v")?;
            if a < 2 {
                return Err(bad("a must exceed 1"));
            }
            let (su, sv) = (sgn(u.into()), sgn(v.into()));
            let t = exact_div(&(pow(a, m) + &sv), &(BigInt::from(a) + &su), "t")?;
            let ta = &t * a;
            let h = (&ta + &sv).gcd(&(BigInt::from(a) + &su));
            if h.is_zero() {
                return Err(bad("h = 0"));
            }
            assemble(Raw {
                a: a.into(),
                b: ta.clone(),
                c: exact_div(&(BigInt::from(a) * (&t + sgn(u32::from(u + v) + 1))), &h, "c")?,
                r: exact_div(&(&ta + &sv), &h, "r")?,
                s: exact_div(&(BigInt::from(a) + &su), &h, "s")?,
                pairs: [(0, 0), (1, 1), (m + 1, 2)],
            })
        }
        GeneratorParams::F58 { m1 } => {
            if m1 < -1 || m1 % 2 == 0 {
                return Err(bad(format!("m1 = {m1} must be odd and at least -1")));
            }
            // 4t = 4(2^m1 + 1)/3, rational when m1 = −1
            let two_m1 = if m1 >= 0 {
                Ratio::from_integer(pow(2, m1 as u32))
            } else {
                Ratio::new(BigInt::one(), BigInt::from(2))
            };
            let four_t = (two_m1 + BigInt::one()) * BigInt::from(4) / BigInt::from(3);
            if !four_t.is_integer() {
                return Err(bad(format!("4t = {four_t} is not an integer")));
            }
            let four_t = four_t.to_integer();
            let h1 = if m1.rem_euclid(6) == 5 { BigInt::from(3) } else { BigInt::one() };
            assemble(Raw {
                a: 2.into(),
                b: four_t.clone(),
                c: exact_div(&(&four_t + 4), &h1, "c")?,
                r: exact_div(&(&four_t + 1), &h1, "r")?,
                s: exact_div(&BigInt::from(3), &h1, "s")?,
                pairs: [(0, 0), (2, 1), ((m1 + 2) as u32, 2)],
            })
        }
        GeneratorParams::F84 { a, d, k_twice, u, v } => {
            check_sign(u, "u")?;
            check_sign(v, "v")?;
            if a < 2 || d == 0 || k_twice < 2 {
                return Err(bad("need a > 1, d > 0, k > 0"));
            }
            let half = k_twice % 2 == 1;
            let ad = pow(a, d);
            if half && !(a == 2 && d == 2 && u == 1 && v == 1) {
                return Err(bad("half-integer k needs a = d = 2 and (u, v) = (1, 1)"));
            }
            if !half && u == 0 && (k_twice / 2 + u32::from(v)) % 2 == 0 {
                return Err(bad("u = 0 needs k - v odd"));
            }
            if !half && u == 1 && v == 1 && ad > BigInt::from(3) {
                return Err(bad("(u, v) = (1, 1) needs a^d <= 3"));
            }
            let kd = (k_twice * d)
                .checked_div(2)
                .filter(|_| (k_twice * d) % 2 == 0)
                .ok_or_else(|| bad("kd is not an integer"))?;
            let b = exact_div(&(pow(a, kd) + sgn(u32::from(u + v))), &(&ad + sgn(u.into())), "b")?;
            let h = (&ad + sgn(u.into())).gcd(&(&b + sgn(v.into())));
            if h.is_zero() {
                return Err(bad("h = 0"));
            }
            assemble(Raw {
                a: a.into(),
                b: b.clone(),
                c: exact_div(&(&ad * &b + sgn(u32::from(u + v) + 1)), &h, "c")?,
                r: exact_div(&(&b + sgn(v.into())), &h, "r")?,
                s: exact_div(&(&ad + sgn(u.into())), &h, "s")?,
                pairs: [(0, 1), (d, 0), (kd, 2)],
            })
        }
        GeneratorParams::F85 { a, d, v } => {
            check_sign(v, "v")?;
            if a < 2 || d == 0 {
                return Err(bad("need a > 1, d > 0"));
            }
            let ad = pow(a, d);
            let sv = sgn(v.into());
            // h as in the k = 2, u = 1 − v case of the previous construction
            let h = (&ad - &sv).gcd(&(&ad + &sv * 2));
            if h.is_zero() {
                return Err(bad("h = 0"));
            }
            assemble(Raw {
                a: a.into(),
                b: &ad + &sv,
                c: exact_div(&(&ad * 2 + &sv), &h, "c")?,
                r: exact_div(&(&ad + &sv * 2), &h, "r")?,
                s: exact_div(&(&ad - &sv), &h, "s")?,
                pairs: [(0, 0), (d, 1), (3 * d, 3)],
            })
        }
        GeneratorParams::F86 { g, v } => {
            check_sign(v, "v")?;
            if g == 0 {
                return Err(bad("g must be positive"));
            }
            let sv = sgn(v.into());
            let alpha = alpha_86(g, v);
            let den = BigInt::from(2).pow(2 + u32::from(v) - alpha);
            assemble(Raw {
                a: 3.into(),
                b: exact_div(&(pow(3, g) + &sv), &BigInt::from(2), "b")?,
                c: exact_div(&(pow(3, g + 1) + &sv), &den, "c")?,
                r: exact_div(&((pow(3, g - 1) + &sv) * 3), &den, "r")?,
                s: BigInt::from(2).pow(1 - u32::from(v) + alpha),
                pairs: [(0, 1), (1, 0), (2 * g, 3)],
            })
        }
        GeneratorParams::F87 { g, v } => {
            check_sign(v, "v")?;
            if g == 0 {
                return Err(bad("g must be positive"));
            }
            assemble(Raw {
                a: 2.into(),
                b: pow(2, g) + sgn(v.into()),
                c: pow(2, g) + sgn(u32::from(v) + 1),
                r: 2.into(),
                s: 1.into(),
                pairs: [(0, 1), (g - 1, 0), (g, 1)],
            })
        }
        GeneratorParams::F88 { a, x, upper } => {
            if a < 2 || a % 2 != 0 || x == 0 {
                return Err(bad("need a even and x > 0"));
            }
            let pm = if upper { BigInt::one() } else { -BigInt::one() };
            let ax = pow(a, x);
            assemble(Raw {
                a: a.into(),
                b: &ax * 2 + &pm,
                c: &ax + &pm,
                r: 2.into(),
                s: &ax - &pm,
                pairs: [(0, 0), (x, 0), (2 * x, 1)],
            })
        }
        GeneratorParams::F89 { a, x2, x3, t, w } => {
            check_sign(t, "t")?;
            check_sign(w, "w")?;
            if a < 2 || x2 == 0 || x3 == 0 {
                return Err(bad("need a > 1, x2 > 0, x3 > 0"));
            }
            let m = u32::from(a % 2 == 1);
            let two_m = BigInt::from(2).pow(m);
            let ax2 = pow(a, x2);
            let s_num = &ax2 + sgn(u32::from(t) + 1);
            let s = exact_div(&s_num, &two_m, "s")?;
            if s.is_zero() {
                return Err(bad("s = 0"));
            }
            // a^x3 ≡ (−1)^w  (mod s)
            let residue = pow(a, x3).mod_floor(&s.abs());
            let target = sgn(w.into()).mod_floor(&s.abs());
            if residue != target {
                return Err(bad(format!("a^x3 is not congruent to (-1)^w mod {s}")));
            }
            let b_num = pow(a, x3) * 2 + sgn(u32::from(t + w) + 1) * &ax2 + sgn(u32::from(w) + 1);
            assemble(Raw {
                a: a.into(),
                b: exact_div(&b_num, &s_num, "b")?,
                c: exact_div(&(&ax2 + sgn(t.into())), &two_m, "c")?,
                r: BigInt::from(2).pow(1 - m),
                s,
                pairs: [(0, 0), (x2, 0), (x3, 1)],
            })
        }
    }
}

/// A constructed set with its solver and catalog cross-checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedSet {
    pub params: GeneratorParams,
    pub set: SolutionSet,
    /// Solutions found by the enumerator with both caps at 64.
    pub verified_n: usize,
    /// Label of a catalog entry the set falls under, if any.
    pub overlap: Option<String>,
    pub key: FamilyKey,
    pub terms_coprime: bool,
    pub bases_coprime: bool,
}

/// Constructs, enumerates, and matches against the catalog.
pub fn generate(params: &GeneratorParams) -> Result<GeneratedSet> {
    let set = construct(params)?;
    let found = enumerate_solutions(set.instance(), DEFAULT_CAP, DEFAULT_CAP);
    let listed = set.pairs();
    let pairs: Vec<_> = found.solutions.iter().map(|s| s.pair()).collect();
    if !listed.iter().all(|p| pairs.contains(p)) {
        return Err(Error::InvalidParameters(format!("{params}: solver misses a listed pair")));
    }
    let overlap = match_catalog(&set)?.map(|e| e.label.clone());
    Ok(GeneratedSet {
        params: *params,
        key: family_key(&set)?,
        verified_n: found.solutions.len(),
        overlap,
        terms_coprime: set.instance().terms_coprime(),
        bases_coprime: set.instance().bases_coprime(),
        set,
    })
}

/// Candidate values for each parameter; signs always range over both values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamRanges {
    pub a: Vec<u64>,
    pub d: Vec<u32>,
    /// Doubled `k` for the 84 construction.
    pub k_twice: Vec<u32>,
    /// `m` for 57, `m1` for 58.
    pub m: Vec<i32>,
    pub g: Vec<u32>,
    /// `x` for 88, `x2` for 89.
    pub x: Vec<u32>,
    pub x3: Vec<u32>,
}

impl ParamRanges {
    /// The desk-scale ranges used by the sweep checks.
    pub fn desk(family: u32) -> ParamRanges {
        let r = ParamRanges::default();
        match family {
            57 => ParamRanges { a: (2..=8).collect(), m: (0..=6).collect(), ..r },
            58 => ParamRanges { m: (-1..=19).step_by(2).collect(), ..r },
            84 => ParamRanges { a: (2..=6).collect(), d: (1..=3).collect(), k_twice: (3..=10).collect(), ..r },
            85 => ParamRanges { a: (2..=8).collect(), d: (1..=3).collect(), ..r },
            86 | 87 => ParamRanges { g: (1..=20).collect(), ..r },
            88 => ParamRanges { a: vec![2, 4, 6, 8, 10], x: (1..=5).collect(), ..r },
            89 => ParamRanges { a: vec![2, 4, 6], x: (1..=4).collect(), x3: (1..=8).collect(), ..r },
            _ => r,
        }
    }

    /// Every parameter tuple in the ranges, constraint-satisfying or not.
    pub fn tuples(&self, family: u32) -> Vec<GeneratorParams> {
        let bits = [0u8, 1];
        let mut out = Vec::new();
        match family {
            57 => {
                for &a in &self.a {
                    for &m in self.m.iter().filter(|m| **m >= 0) {
                        for u in bits {
                            for v in bits {
                                out.push(GeneratorParams::F57 { a, m: m as u32, u, v });
                            }
                        }
                    }
                }
            }
            58 => out.extend(self.m.iter().map(|&m1| GeneratorParams::F58 { m1 })),
            84 => {
                for &a in &self.a {
                    for &d in &self.d {
                        for &k_twice in &self.k_twice {
                            for u in bits {
                                for v in bits {
                                    out.push(GeneratorParams::F84 { a, d, k_twice, u, v });
                                }
                            }
                        }
                    }
                }
            }
            85 => {
                for &a in &self.a {
                    for &d in &self.d {
                        for v in bits {
                            out.push(GeneratorParams::F85 { a, d, v });
                        }
                    }
                }
            }
            86 | 87 => {
                for &g in &self.g {
                    for v in bits {
                        out.push(if family == 86 {
                            GeneratorParams::F86 { g, v }
                        } else {
                            GeneratorParams::F87 { g, v }
                        });
                    }
                }
            }
            88 => {
                for &a in &self.a {
                    for &x in &self.x {
                        for upper in [true, false] {
                            out.push(GeneratorParams::F88 { a, x, upper });
                        }
                    }
                }
            }
            89 => {
                for &a in &self.a {
                    for &x2 in &self.x {
                        for &x3 in &self.x3 {
                            for t in bits {
                                for w in bits {
                                    out.push(GeneratorParams::F89 { a, x2, x3, t, w });
                                }
                            }
                        }
                    }
                }
            }
            _ => {}
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub sets: Vec<GeneratedSet>,
    /// Rejected tuples counted by reason.
    pub skipped: BTreeMap<String, usize>,
}

impl SweepReport {
    pub fn skipped_total(&self) -> usize {
        self.skipped.values().sum()
    }
}

/// Short reason used for tallying: the message up to the first `=` or `:`.
fn reason_class(e: &Error) -> String {
    let msg = match e {
        Error::InvalidParameters(m) | Error::InvalidArgument(m) => m.clone(),
        other => other.to_string(),
    };
    let cut = msg.find([' ', '=', ':']).map(|i| &msg[..i]).unwrap_or(&msg);
    let cut = cut.trim();
    if msg.contains("not congruent") {
        "congruence fails".to_string()
    } else if msg.contains("not an integer") {
        format!("{cut} not integral")
    } else if msg.contains("must be at least") {
        format!("{cut} too small")
    } else {
        msg
    }
}

/// Generates every tuple of the ranges in parallel, keeping input order.
pub fn sweep(family: u32, ranges: &ParamRanges) -> SweepReport {
    let results: Vec<_> = ranges.tuples(family).par_iter().map(generate).collect();
    let mut report = SweepReport::default();
    for r in results {
        match r {
            Ok(g) => report.sets.push(g),
            Err(e) => *report.skipped.entry(reason_class(&e)).or_default() += 1,
        }
    }
    report
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Finds a construction producing the same family as a three-solution set by
/// reading candidate parameters off its basic form (and associate).
pub fn back_solve(set: &SolutionSet) -> Result<Option<GeneratorParams>> {
    if set.len() != 3 {
        return Ok(None);
    }
    let basic = reduce_to_basic_form(set)?.set;
    let key = family_key(&basic)?;
    let mut found = None;
    'outer: for orient in [basic.clone(), basic.associate()] {
        let Some(a0) = orient.instance().a.to_u64() else { continue };
        let xs: Vec<u32> = orient.solutions().iter().map(|s| s.x).collect();
        let gx = xs.iter().fold(0u32, |g, &x| g.gcd(&x));
        for j in divisors(gx.max(1)) {
            let Some(a) = a0.checked_pow(j).filter(|a| *a <= 1 << 40) else { continue };
            let raw: Vec<u32> = {
                let mut v: Vec<u32> = xs.iter().map(|x| x / j).filter(|x| *x > 0).collect();
                v.sort_unstable();
                v.dedup();
                v
            };
            for cand in candidates(a, &raw) {
                if let Ok(gen) = construct(&cand) {
                    if family_key(&gen).ok().as_ref() == Some(&key) {
                        found = Some(cand);
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(found)
}

fn candidates(a: u64, xs: &[u32]) -> Vec<GeneratorParams> {
    let bits = [0u8, 1];
    let mut out = Vec::new();
    for &x in xs {
        for u in bits {
            for v in bits {
                out.push(GeneratorParams::F57 { a, m: x - 1, u, v });
            }
        }
        if a == 2 && x % 2 == 1 {
            out.push(GeneratorParams::F58 { m1: x as i32 - 2 });
        }
    }
    for &d in xs {
        for &kd in xs.iter().filter(|&&kd| kd > d && (2 * kd) % d == 0) {
            for u in bits {
                for v in bits {
                    out.push(GeneratorParams::F84 { a, d, k_twice: 2 * kd / d, u, v });
                }
            }
        }
        for v in bits {
            out.push(GeneratorParams::F85 { a, d, v });
        }
    }
    for &x in xs {
        for v in bits {
            if a == 3 && x % 2 == 0 {
                out.push(GeneratorParams::F86 { g: x / 2, v });
            }
            if a == 2 {
                out.push(GeneratorParams::F87 { g: x, v });
            }
        }
        if a.is_multiple_of(2) {
            for upper in [true, false] {
                out.push(GeneratorParams::F88 { a, x, upper });
            }
        }
    }
    for &x2 in xs {
        for &x3 in xs {
            for t in bits {
                for w in bits {
                    out.push(GeneratorParams::F89 { a, x2, x3, t, w });
                }
            }
        }
    }
    out
}
