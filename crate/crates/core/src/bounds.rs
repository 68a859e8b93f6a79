//! Quantitative side: the four-solution and two-solution inequality checks,
//! the linear-forms bound and its fixed points, and the σ machinery.
//!
//! Real-valued work runs on `astro_float` at [`PRECISION`] bits. Integer
//! statements (σ against its ceiling, the divisibility consequence) are
//! decided exactly.

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{distinct_prime_divisors, pm1_index, valuation};
use crate::equation::{Instance, Solution};
use crate::error::{invalid, Error, Result};
use crate::sets::SolutionSet;

/// Working precision in bits (about 77 decimal digits).
pub const PRECISION: usize = 256;

/// Constant of the three-logarithm lower bound.
pub const K_THREE_LOGS: &str = "1.6901816335e10";
/// Bound on `G` in the two-logarithm alternative when `rs = 1`.
pub const G_TWO_LOGS: &str = "2409.08";
pub const C_TWO_LOGS: &str = "22.997";
pub const SHIFT_TWO_LOGS: &str = "2.405";

const RM: RoundingMode = RoundingMode::ToEven;

/// A precision plus the constants cache `astro_float` needs for logs.
pub struct Num {
    p: usize,
    cc: RefCell<Consts>,
}

impl Num {
    pub fn new(p: usize) -> Result<Num> {
        let cc = Consts::new().map_err(|e| Error::Numeric(format!("constants cache: {e:?}")))?;
        Ok(Num { p, cc: RefCell::new(cc) })
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    pub fn lit(&self, s: &str) -> BigFloat {
        BigFloat::parse(s, Radix::Dec, self.p, RM, &mut self.cc.borrow_mut())
    }

    pub fn int(&self, n: &BigUint) -> BigFloat {
        self.lit(&n.to_string())
    }

    pub fn small(&self, n: u64) -> BigFloat {
        BigFloat::from_u64(n, self.p)
    }

    pub fn ln(&self, x: &BigFloat) -> BigFloat {
        x.ln(self.p, RM, &mut self.cc.borrow_mut())
    }

    pub fn add(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.add(y, self.p, RM)
    }

    pub fn sub(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.sub(y, self.p, RM)
    }

    pub fn mul(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.mul(y, self.p, RM)
    }

    pub fn div(&self, x: &BigFloat, y: &BigFloat) -> BigFloat {
        x.div(y, self.p, RM)
    }

    pub fn e(&self) -> BigFloat {
        self.cc.borrow_mut().e(self.p, RM)
    }

    pub fn ln2(&self) -> BigFloat {
        self.cc.borrow_mut().ln_2(self.p, RM)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn decimal(&self, x: &BigFloat, digits: usize) -> String {
        let full = x.format(Radix::Dec, RM, &mut self.cc.borrow_mut()).unwrap_or_else(|_| "NaN".into());
        truncate_mantissa(&full, digits)
    }

    pub fn to_f64(&self, x: &BigFloat) -> f64 {
        self.decimal(x, 20).parse().unwrap_or(f64::NAN)
    }
}

/// Cuts a `d.ddddde±N` string down to `digits` significant digits and
/// normalizes the exponent so the result parses as `f64`.
fn truncate_mantissa(s: &str, digits: usize) -> String {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], &s[i + 1..]),
        None => (s, "0"),
    };
    let (sign, mant) = mant.strip_prefix('-').map(|m| ("-", m)).unwrap_or(("", mant));
    let mut kept = String::new();
    let mut count = 0;
    for ch in mant.chars() {
        if ch == '.' {
            kept.push(ch);
        } else if count < digits {
            kept.push(ch);
            count += 1;
        }
    }
    let kept = kept.trim_end_matches('.');
    let exp: i64 = exp.trim_start_matches('+').parse().unwrap_or(0);
    format!("{sign}{kept}e{exp}")
}

fn cmp_zero(x: &BigFloat) -> Option<i8> {
    if x.is_nan() {
        None
    } else if x.is_zero() {
        Some(0)
    } else if x.is_positive() {
        Some(1)
    } else {
        Some(-1)
    }
}

/// The transcendental inequalities `Z < RHS(Z)` whose largest solution is
/// the bound. Exact inputs are carried and converted at evaluation time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inequality {
    /// Three-logarithm form for one solution of a given instance.
    ThreeLogs {
        c: BigUint,
        d: BigUint,
        max_rs: BigUint,
        j: BigUint,
    },
    /// Two-logarithm form for one solution of a given instance.
    TwoLogs {
        c: BigUint,
        d: BigUint,
        j: BigUint,
    },
    /// Four solutions, `x` increasing, first case: parameters bounded by `Z`.
    Case1ThreeLogs,
    Case1TwoLogs,
    /// Second case with `log c ≤ 10^11·log(Z+1)`.
    Case2ThreeLogs,
    Case2TwoLogs,
    /// Second case once `c` is huge: `0.47Z < 1 + K·…`.
    Case2LargeC,
    /// Second case with `a ≤ 50`, through σ.
    Case2SmallBase,
}

impl Inequality {
    pub fn branch(&self) -> &'static str {
        match self {
            Inequality::ThreeLogs { .. } => "three-logs",
            Inequality::TwoLogs { .. } => "two-logs",
            Inequality::Case1ThreeLogs => "t2-case1-three-logs",
            Inequality::Case1TwoLogs => "t2-case1-two-logs",
            Inequality::Case2ThreeLogs => "t2-case2-three-logs",
            Inequality::Case2TwoLogs => "t2-case2-two-logs",
            Inequality::Case2LargeC => "t2-case2-large-c",
            Inequality::Case2SmallBase => "t2-case2-small-base",
        }
    }

    fn constants(&self) -> Vec<(&'static str, &'static str)> {
        let k = ("K", K_THREE_LOGS);
        let two = [("C", C_TWO_LOGS), ("shift", SHIFT_TWO_LOGS)];
        match self {
            Inequality::ThreeLogs { .. }
            | Inequality::Case1ThreeLogs
            | Inequality::Case2ThreeLogs
            | Inequality::Case2LargeC
            | Inequality::Case2SmallBase => vec![k],
            Inequality::TwoLogs { .. } | Inequality::Case1TwoLogs | Inequality::Case2TwoLogs => two.to_vec(),
        }
    }

    fn inputs(&self) -> Vec<(String, String)> {
        match self {
            Inequality::ThreeLogs { c, d, max_rs, j } => vec![
                ("c".into(), c.to_string()),
                ("d".into(), d.to_string()),
                ("max(r,s)".into(), max_rs.to_string()),
                ("J".into(), j.to_string()),
            ],
            Inequality::TwoLogs { c, d, j } => {
                vec![("c".into(), c.to_string()), ("d".into(), d.to_string()), ("J".into(), j.to_string())]
            }
            Inequality::Case1ThreeLogs | Inequality::Case1TwoLogs => vec![
                ("1+c/d".into(), "<= Z+3".into()),
                ("c".into(), "<= Z+3".into()),
                ("max(r,s)".into(), "<= Z+1".into()),
                ("J".into(), "<= 8Z/3+5/3".into()),
            ],
            Inequality::Case2ThreeLogs | Inequality::Case2TwoLogs => vec![
                ("log(1+c/d)/log 2".into(), "< 0.9".into()),
                ("log c".into(), "<= 1e11*log(Z+1)".into()),
                ("max(r,s)".into(), "<= Z+1".into()),
                ("a".into(), "<= Z".into()),
            ],
            Inequality::Case2LargeC => vec![("ratio".into(), "0.47".into())],
            Inequality::Case2SmallBase => vec![("a".into(), "<= 50".into())],
        }
    }

    /// Right-hand side at `z`.
    pub fn rhs(&self, n: &Num, z: &BigFloat) -> BigFloat {
        let one = n.small(1);
        let ln2 = n.ln2();
        let k = n.lit(K_THREE_LOGS);
        let zp1 = n.add(z, &one);
        let ln_z = n.ln(z);
        let ln_zp1 = n.ln(&zp1);
        let e = n.e();
        let onehalf_e = n.mul(&n.lit("1.5"), &e);
        let ln_15ez = {
            let t = n.mul(&onehalf_e, z);
            n.ln(&t)
        };
        // 22.997·(log(Z/log 2) + 2.405)²
        let two_logs_core = |n: &Num| {
            let t = n.div(z, &ln2);
            let t = n.ln(&t);
            let t = n.add(&t, &n.lit(SHIFT_TWO_LOGS));
            let t = n.mul(&t, &t);
            n.mul(&n.lit(C_TWO_LOGS), &t)
        };
        match self {
            Inequality::ThreeLogs { c, d, max_rs, j } => {
                let first = lead_term(n, c, d);
                let t = n.mul(&k, &{
                    let m = n.int(max_rs);
                    n.ln(&m)
                });
                let t = n.mul(&t, &{
                    let jj = n.int(j);
                    n.ln(&jj)
                });
                let t = n.mul(&t, &ln_15ez);
                n.add(&first, &t)
            }
            Inequality::TwoLogs { c, d, j } => {
                let first = lead_term(n, c, d);
                let core = two_logs_core(n);
                let jj = n.int(j);
                let t = n.mul(&core, &n.ln(&jj));
                n.add(&first, &t)
            }
            Inequality::Case1ThreeLogs | Inequality::Case1TwoLogs => {
                let zp3 = n.add(z, &n.small(3));
                let first = n.div(&n.mul(&n.small(2), &n.ln(&zp3)), &ln2);
                // J ≤ 8Z/3 + 5/3
                let j = n.div(&n.add(&n.mul(&n.small(8), z), &n.small(5)), &n.small(3));
                let ln_j = n.ln(&j);
                let t = if matches!(self, Inequality::Case1ThreeLogs) {
                    let t = n.mul(&k, &ln_zp1);
                    let t = n.mul(&t, &ln_j);
                    n.mul(&t, &ln_15ez)
                } else {
                    let core = two_logs_core(n);
                    n.mul(&core, &ln_j)
                };
                n.add(&first, &t)
            }
            Inequality::Case2ThreeLogs | Inequality::Case2TwoLogs => {
                let first = n.add(&n.lit("0.9"), &n.div(&n.mul(&n.lit("1e11"), &ln_zp1), &ln2));
                let t = if matches!(self, Inequality::Case2ThreeLogs) {
                    let t = n.mul(&k, &ln_zp1);
                    let t = n.mul(&t, &ln_z);
                    n.mul(&t, &ln_15ez)
                } else {
                    let core = two_logs_core(n);
                    n.mul(&core, &ln_z)
                };
                n.add(&first, &t)
            }
            Inequality::Case2LargeC => {
                let t = n.mul(&k, &ln_zp1);
                let t = n.mul(&t, &ln_z);
                let t = n.mul(&t, &ln_15ez);
                n.div(&n.add(&one, &t), &n.lit("0.47"))
            }
            Inequality::Case2SmallBase => {
                let t = n.mul(&k, &ln_z);
                let t = n.mul(&t, &ln_zp1);
                let t = n.mul(&t, &ln_15ez);
                let s = n.add(&n.small(143), &n.mul(&n.lit("1.443"), &ln_z));
                n.add(&s, &t)
            }
        }
    }

    /// `RHS(z) − z`
    pub fn gap(&self, n: &Num, z: &BigFloat) -> BigFloat {
        let r = self.rhs(n, z);
        n.sub(&r, z)
    }
}

/// `(log(1 + c/d) + log c)/log 2`
fn lead_term(n: &Num, c: &BigUint, d: &BigUint) -> BigFloat {
    let cf = n.int(c);
    let df = n.int(d);
    let ratio = n.add(&n.small(1), &n.div(&cf, &df));
    let s = n.add(&n.ln(&ratio), &n.ln(&cf));
    let ln2 = n.ln2();
    n.div(&s, &ln2)
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub branch: String,
    pub inputs: Vec<(String, String)>,
    pub constants: Vec<(&'static str, &'static str)>,
    /// Largest `Z` with `Z < RHS(Z)`, i.e. the crossing `RHS(Z) = Z`.
    pub z_star: BigFloat,
    pub z_star_f64: f64,
    /// 30 significant digits.
    pub z_star_text: String,
    pub precision: usize,
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "branch\t{}", self.branch)?;
        for (k, v) in &self.inputs {
            writeln!(f, "input\t{k}\t{v}")?;
        }
        for (k, v) in &self.constants {
            writeln!(f, "constant\t{k}\t{v}")?;
        }
        writeln!(f, "precision_bits\t{}", self.precision)?;
        write!(f, "z_star\t{}", self.z_star_text)
    }
}

const BISECTION_FLOOR: u64 = 1;
const BRACKET_CEILING_EXP: i32 = 60;

/// Largest `z ≥ 1` with `RHS(z) > z`, by bracketing and bisection.
pub fn crossing(ineq: &Inequality, n: &Num) -> Result<BigFloat> {
    let mut lo = n.small(BISECTION_FLOOR);
    match cmp_zero(&ineq.gap(n, &lo)) {
        None => return Err(Error::Numeric(format!("{}: NaN at z = 1", ineq.branch()))),
        Some(s) if s <= 0 => return Ok(lo),
        _ => {}
    }
    let thousand = n.small(1000);
    let mut hi = thousand.clone();
    let mut exp = 3;
    loop {
        match cmp_zero(&ineq.gap(n, &hi)) {
            None => return Err(Error::Numeric(format!("{}: NaN while bracketing", ineq.branch()))),
            Some(s) if s < 0 => break,
            _ => {}
        }
        lo = hi.clone();
        hi = n.mul(&hi, &thousand);
        exp += 3;
        if exp > BRACKET_CEILING_EXP {
            return Err(Error::Numeric(format!("{}: no crossing below 1e{exp}", ineq.branch())));
        }
    }
    let half = n.lit("0.5");
    for _ in 0..n.precision() + 8 {
        let mid = n.mul(&n.add(&lo, &hi), &half);
        match cmp_zero(&ineq.gap(n, &mid)) {
            None => return Err(Error::Numeric(format!("{}: NaN in bisection", ineq.branch()))),
            Some(s) if s > 0 => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(lo)
}

/// Sign changes of `RHS(z) − z` on a log grid over `[10^lo_exp, 10^hi_exp]`.
pub fn sign_changes(ineq: &Inequality, lo_exp: u32, hi_exp: u32, per_decade: u32) -> Result<usize> {
    let n = Num::new(PRECISION)?;
    let mut prev = None;
    let mut changes = 0;
    for i in 0..=(hi_exp - lo_exp) * per_decade {
        let z = n.lit(&format!("1e{}", f64::from(lo_exp) + f64::from(i) / f64::from(per_decade)));
        let s = cmp_zero(&ineq.gap(&n, &z)).ok_or_else(|| Error::Numeric(format!("{}: NaN on grid", ineq.branch())))?;
        if let Some(p) = prev {
            if p != s {
                changes += 1;
            }
        }
        prev = Some(s);
    }
    Ok(changes)
}

pub fn solve_bound(ineq: &Inequality, precision: usize) -> Result<BoundReport> {
    let n = Num::new(precision)?;
    let z = crossing(ineq, &n)?;
    Ok(BoundReport {
        branch: ineq.branch().to_string(),
        inputs: ineq.inputs(),
        constants: ineq.constants(),
        z_star_f64: n.to_f64(&z),
        z_star_text: n.decimal(&z, 30),
        z_star: z,
        precision,
    })
}

/// The linear-forms bound for one solution with `min(x, y) > 0`,
/// `(u, v) ≠ (0, 0)` and coprime terms.
#[derive(Clone, Debug)]
pub struct Lemma15Report {
    pub three_logs: BoundReport,
    pub two_logs: BoundReport,
    /// `2409.08·log J`, present when `rs = 1`.
    pub rs_one: Option<BoundReport>,
}

impl Lemma15Report {
    /// The bound implied by the alternatives.
    pub fn bound(&self) -> f64 {
        match &self.rs_one {
            Some(b) => b.z_star_f64.max(self.two_logs.z_star_f64),
            None => self.three_logs.z_star_f64.max(self.two_logs.z_star_f64),
        }
    }
}

/// `d` is `min(r·a^x, s·b^y)` or a proven lower bound for it.
pub fn lemma15_bound(
    r: &BigUint,
    s: &BigUint,
    a: &BigUint,
    b: &BigUint,
    c: &BigUint,
    d: &BigUint,
) -> Result<Lemma15Report> {
    for (name, v) in [("r", r), ("s", s), ("c", c), ("d", d)] {
        if v.is_zero() {
            return invalid(format!("{name} must be positive"));
        }
    }
    if *a < BigUint::from(2u32) || *b < BigUint::from(2u32) {
        return invalid("a and b must exceed 1");
    }
    let j = a.max(b).clone();
    let three = Inequality::ThreeLogs { c: c.clone(), d: d.clone(), max_rs: r.max(s).clone(), j: j.clone() };
    let two = Inequality::TwoLogs { c: c.clone(), d: d.clone(), j: j.clone() };
    let rs_one = if r.is_one() && s.is_one() { Some(rs_one_bound(&j, PRECISION)?) } else { None };
    Ok(Lemma15Report { three_logs: solve_bound(&three, PRECISION)?, two_logs: solve_bound(&two, PRECISION)?, rs_one })
}

/// `Z < 2409.08·log J`
pub fn rs_one_bound(j: &BigUint, precision: usize) -> Result<BoundReport> {
    let n = Num::new(precision)?;
    let jf = n.int(j);
    let z = n.mul(&n.lit(G_TWO_LOGS), &n.ln(&jf));
    Ok(BoundReport {
        branch: "rs-one".into(),
        inputs: vec![("J".into(), j.to_string())],
        constants: vec![("G", G_TWO_LOGS)],
        z_star_f64: n.to_f64(&z),
        z_star_text: n.decimal(&z, 30),
        z_star: z,
        precision,
    })
}

pub const THEOREM2_INEQUALITIES: [Inequality; 6] = [
    Inequality::Case1ThreeLogs,
    Inequality::Case1TwoLogs,
    Inequality::Case2ThreeLogs,
    Inequality::Case2TwoLogs,
    Inequality::Case2LargeC,
    Inequality::Case2SmallBase,
];

/// Crossings of every inequality used for the four-solution bound.
pub fn theorem2_fixed_points() -> Result<Vec<BoundReport>> {
    theorem2_fixed_points_at(PRECISION)
}

pub fn theorem2_fixed_points_at(precision: usize) -> Result<Vec<BoundReport>> {
    THEOREM2_INEQUALITIES.iter().map(|i| solve_bound(i, precision)).collect()
}

/// Overall bound of a case: either inequality may hold, so take the larger.
pub fn case_bound(reports: &[BoundReport], prefix: &str) -> Option<f64> {
    let vals: Vec<f64> = reports
        .iter()
        .filter(|r| {
            r.branch.starts_with(prefix) && (r.branch.ends_with("three-logs") || r.branch.ends_with("two-logs"))
        })
        .map(|r| r.z_star_f64)
        .collect();
    vals.into_iter().reduce(f64::max)
}

/// Per-prime data behind σ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaRow {
    pub p: u64,
    pub n: u64,
    pub g: u32,
    pub sign: i8,
}

#[derive(Clone, Debug)]
pub struct SigmaBreakdown {
    pub a: BigUint,
    pub b: BigUint,
    pub rows: Vec<SigmaRow>,
    /// `∏ p^g`, so that `σ = log H / log a`.
    pub h: BigUint,
    pub sigma: BigFloat,
    pub sigma_f64: f64,
    pub sigma_text: String,
}

impl fmt::Display for SigmaBreakdown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "a\t{}\nb\t{}", self.a, self.b)?;
        for r in &self.rows {
            let sign = if r.sign > 0 { '+' } else { '-' };
            writeln!(f, "prime\t{}\tn={}\tg={}\tsign={sign}", r.p, r.n, r.g)?;
        }
        writeln!(f, "H\t{}", self.h)?;
        write!(f, "sigma\t{}", self.sigma_text)
    }
}

pub fn sigma(a: &BigUint, b: &BigUint) -> Result<SigmaBreakdown> {
    if *a < BigUint::from(2u32) || *b < BigUint::from(2u32) {
        return invalid("a and b must exceed 1");
    }
    if !a.gcd(b).is_one() {
        return invalid(format!("gcd({a},{b}) > 1"));
    }
    let primes = distinct_prime_divisors(a);
    let mut rows = Vec::with_capacity(primes.len());
    let mut h = BigUint::one();
    for p in primes {
        let idx = pm1_index(b, p)?;
        h *= BigUint::from(p).pow(idx.g);
        rows.push(SigmaRow { p, n: idx.n, g: idx.g, sign: idx.sign });
    }
    let n = Num::new(PRECISION)?;
    let hf = n.int(&h);
    let af = n.int(a);
    let s = n.div(&n.ln(&hf), &n.ln(&af));
    Ok(SigmaBreakdown {
        a: a.clone(),
        b: b.clone(),
        rows,
        sigma_f64: n.to_f64(&s),
        sigma_text: n.decimal(&s, 30),
        sigma: s,
        h,
    })
}

/// Whether `σ < a·log b/(2·log a)`, decided exactly as `H² < b^a`; the
/// pair `(3, 2)`, where `σ = 1`, is accepted as the stated exception.
pub fn check_lemma18(a: &BigUint, b: &BigUint) -> Result<bool> {
    if *a <= BigUint::from(2u32) {
        return invalid("a must exceed 2");
    }
    if *a == BigUint::from(3u32) && *b == BigUint::from(2u32) {
        return Ok(true);
    }
    let br = sigma(a, b)?;
    let a_exp = a.to_u32().ok_or_else(|| Error::InvalidArgument("a too large".into()))?;
    Ok(&br.h * &br.h < b.pow(a_exp))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lemma17Report {
    /// Pairs `(x, y)` with `a^x | b^y ± 1`.
    pub checked: usize,
    pub violations: Vec<(u32, u32)>,
}

/// For every `x ≤ x_max`, `y ≤ y_max` with `a^x | b^y ± 1`, checks that
/// `∏ p^(x·α_p − g_p)` divides `y`, negative exponents counting as 1.
pub fn check_lemma17(a: &BigUint, b: &BigUint, x_max: u32, y_max: u32) -> Result<Lemma17Report> {
    let br = sigma(a, b)?;
    let alphas: Vec<u32> = br.rows.iter().map(|r| valuation(r.p, a)).collect();
    let mut report = Lemma17Report::default();
    for x in 1..=x_max {
        let ax = a.pow(x);
        let mut need = BigUint::one();
        for (row, alpha) in br.rows.iter().zip(&alphas) {
            let e = (x * alpha).saturating_sub(row.g);
            need *= BigUint::from(row.p).pow(e);
        }
        for y in 1..=y_max {
            let m = b.modpow(&BigUint::from(y), &ax);
            let divides = m.is_one() || (&m + 1u32) == ax || (ax.is_one());
            if !divides {
                continue;
            }
            report.checked += 1;
            if !(BigUint::from(y) % &need).is_zero() {
                report.violations.push((x, y));
            }
        }
    }
    Ok(report)
}

/// `k` with `x_1 < σ + k`.
pub fn lemma19_threshold(a: &BigUint) -> Result<f64> {
    if *a <= BigUint::from(2u32) {
        return invalid("a must exceed 2");
    }
    if *a >= BigUint::from(5346u32) {
        return Ok(1.19408);
    }
    let n = Num::new(PRECISION)?;
    let af = n.int(a);
    let la = n.ln(&af);
    let k = n.div(&n.add(&n.lit("8.1"), &n.ln(&la)), &la);
    Ok(n.to_f64(&k))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail(String),
    NotApplicable(String),
}

impl CheckOutcome {
    pub fn is_fail(&self) -> bool {
        matches!(self, CheckOutcome::Fail(_))
    }
}

/// Four solutions with strictly increasing `x` and coprime terms: checks
/// `a^(x3−x2) ≤ Z`, `s ≤ Z + 1`, and `x2·a^(x3−x2) ≤ Z` when `a > b`.
pub fn check_lemma13(set: &SolutionSet) -> CheckOutcome {
    if set.len() != 4 {
        return CheckOutcome::NotApplicable(format!("{} solutions, need 4", set.len()));
    }
    let inst = set.instance();
    if !inst.terms_coprime() {
        return CheckOutcome::NotApplicable("gcd(ra, sb) > 1".into());
    }
    let sols = set.solutions();
    if sols.windows(2).any(|w| w[0].x >= w[1].x) {
        return CheckOutcome::NotApplicable("x not strictly increasing".into());
    }
    let z = sols.iter().map(|s| s.y).chain([sols[3].x]).max().unwrap_or(0);
    let zb = BigUint::from(z);
    let jump = inst.a.pow(sols[2].x - sols[1].x);
    if jump > zb {
        return CheckOutcome::Fail(format!("a^(x3-x2) = {jump} > Z = {z}"));
    }
    if inst.s > &zb + 1u32 {
        return CheckOutcome::Fail(format!("s = {} > Z+1 = {}", inst.s, z + 1));
    }
    if inst.a > inst.b && &jump * sols[1].x > zb {
        return CheckOutcome::Fail(format!("x2*a^(x3-x2) = {} > Z = {z}", &jump * sols[1].x));
    }
    CheckOutcome::Pass
}

/// Two solutions with `x1 < x2` and coprime terms: `2r·a^x2 > c` when
/// `r > 1` or `x1 > 0`, otherwise `2a^x2 > c − 2`.
pub fn check_lemma14(inst: &Instance, s1: &Solution, s2: &Solution) -> CheckOutcome {
    if !inst.terms_coprime() {
        return CheckOutcome::NotApplicable("gcd(ra, sb) > 1".into());
    }
    let (s1, s2) = if s1.x <= s2.x { (s1, s2) } else { (s2, s1) };
    if s1.x == s2.x {
        return CheckOutcome::NotApplicable("x1 = x2".into());
    }
    let lhs = inst.left_term(s2.x) * 2u32;
    if !inst.r.is_one() || s1.x > 0 {
        if lhs <= inst.c {
            return CheckOutcome::Fail(format!("2r*a^x2 = {lhs} <= c = {}", inst.c));
        }
    } else if &lhs + 2u32 <= inst.c {
        return CheckOutcome::Fail(format!("2a^x2 = {lhs} <= c - 2"));
    }
    CheckOutcome::Pass
}

/// Runs the two-solution check on every pair and the four-solution check on
/// every four-subset of `set`; returns the failures.
pub fn check_set_inequalities(set: &SolutionSet) -> Vec<String> {
    let mut fails = Vec::new();
    for view in [set.clone(), set.associate()] {
        let inst = view.instance();
        let sols = view.solutions();
        for i in 0..sols.len() {
            for j in i + 1..sols.len() {
                if let CheckOutcome::Fail(m) = check_lemma14(inst, &sols[i], &sols[j]) {
                    fails.push(format!("{}: two-solution check: {m}", view.serialize()));
                }
            }
        }
        for sub in crate::catalog::subsets_of_size_at_least(&view, 4) {
            if sub.len() != 4 {
                continue;
            }
            if let CheckOutcome::Fail(m) = check_lemma13(&sub) {
                fails.push(format!("{}: four-solution check: {m}", sub.serialize()));
            }
        }
    }
    fails
}
