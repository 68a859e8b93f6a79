//! Solution sets, associates, subsets, reduction to basic form and family keys.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::arith::perfect_power;
use crate::equation::{solution_at, Instance, Solution};
use crate::error::{invalid, Error, Result};

/// An instance together with distinct verified solutions, sorted by `(x, y)`.
///
/// Two solutions are admitted (useful for reduction), although a genuine set
/// of solutions has at least three; see [`SolutionSet::is_proper`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SolutionSet {
    inst: Instance,
    sols: Vec<Solution>,
}

impl SolutionSet {
    /// Verifies every pair, determines its signs and sorts.
    pub fn new(inst: Instance, pairs: &[(u32, u32)]) -> Result<Self> {
        if pairs.len() < 2 {
            return invalid(format!("a solution set needs at least 2 pairs, got {}", pairs.len()));
        }
        let mut sols = pairs.iter().map(|&(x, y)| solution_at(&inst, x, y)).collect::<Result<Vec<_>>>()?;
        sols.sort();
        if sols.windows(2).any(|w| w[0].pair() == w[1].pair()) {
            return invalid("duplicate solution pair");
        }
        Ok(SolutionSet { inst, sols })
    }

    /// For already verified solutions (e.g. straight from the enumerator).
    pub(crate) fn from_verified(inst: Instance, mut sols: Vec<Solution>) -> Self {
        sols.sort();
        debug_assert!(sols.len() >= 2);
        SolutionSet { inst, sols }
    }

    pub fn instance(&self) -> &Instance {
        &self.inst
    }

    pub fn solutions(&self) -> &[Solution] {
        &self.sols
    }

    pub fn pairs(&self) -> Vec<(u32, u32)> {
        self.sols.iter().map(Solution::pair).collect()
    }

    pub fn len(&self) -> usize {
        self.sols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sols.is_empty()
    }

    /// At least three solutions.
    pub fn is_proper(&self) -> bool {
        self.sols.len() > 2
    }

    /// Swap `(a, r, x)` with `(b, s, y)`.
    pub fn associate(&self) -> SolutionSet {
        let sols = self.sols.iter().map(|s| Solution { x: s.y, y: s.x, u: s.v, v: s.u }).collect();
        SolutionSet::from_verified(self.inst.associate(), sols)
    }

    /// The subset keeping the solutions at the given indices.
    pub fn subset(&self, indices: &[usize]) -> Result<SolutionSet> {
        let pairs: Vec<_> = indices
            .iter()
            .map(|&i| self.sols.get(i).map(Solution::pair))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidArgument("subset index out of range".into()))?;
        SolutionSet::new(self.inst.clone(), &pairs)
    }

    /// Canonical `a,b,c,r,s;x1,y1,...` form.
    pub fn serialize(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (head, tail) = compact.split_once(';').ok_or_else(|| Error::Parse(format!("missing ';' in {text:?}")))?;
        let coeffs = head
            .split(',')
            .map(|t| t.parse::<BigUint>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let [a, b, c, r, s]: [BigUint; 5] =
            coeffs.try_into().map_err(|v: Vec<_>| Error::Parse(format!("expected 5 coefficients, got {}", v.len())))?;
        let exps = tail
            .split(',')
            .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if exps.len() % 2 != 0 {
            return Err(Error::Parse("odd number of exponents".into()));
        }
        let pairs: Vec<_> = exps.chunks(2).map(|p| (p[0], p[1])).collect();
        SolutionSet::new(Instance::new(a, b, c, r, s)?, &pairs)
    }
}

impl fmt::Display for SolutionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.inst)?;
        for (i, s) in self.sols.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{},{}", s.x, s.y)?;
        }
        Ok(())
    }
}

impl FromStr for SolutionSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SolutionSet::parse(s)
    }
}

/// True iff both sets share an instance and every pair of `small` is in `big`.
pub fn is_subset(small: &SolutionSet, big: &SolutionSet) -> bool {
    small.inst == big.inst && small.sols.iter().all(|s| big.sols.binary_search_by(|t| t.pair().cmp(&s.pair())).is_ok())
}

/// Result of [`reduce_to_basic_form`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicForm {
    pub set: SolutionSet,
    /// Every invariant was re-checked on the result.
    pub verified: bool,
    /// The input had only two solutions, so it is not a set of solutions
    /// in the strict sense.
    pub below_set_size: bool,
}

/// Constructive reduction: divide out `gcd(r·a^x0, s·b^y0)`, shift the
/// exponents to minimum zero, then replace perfect-power bases by their roots.
pub fn reduce_to_basic_form(set: &SolutionSet) -> Result<BasicForm> {
    let inst = &set.inst;
    let x0 = set.sols.iter().map(|s| s.x).min().expect("nonempty");
    let y0 = set.sols.iter().map(|s| s.y).min().expect("nonempty");
    let r0 = inst.left_term(x0);
    let s0 = inst.right_term(y0);
    let g = r0.gcd(&s0);
    if !(&inst.c % &g).is_zero() {
        return Err(Error::ReductionFailed(format!("{g} does not divide c in {set}")));
    }

    let pa = perfect_power(&inst.a)?;
    let pb = perfect_power(&inst.b)?;
    let reduced = Instance::new(pa.base, pb.base, &inst.c / &g, r0 / &g, s0 / &g)?;
    let pairs: Vec<_> = set.sols.iter().map(|s| ((s.x - x0) * pa.exponent, (s.y - y0) * pb.exponent)).collect();
    let out = SolutionSet::new(reduced, &pairs)
        .map_err(|e| Error::ReductionFailed(format!("reduced set of {set} does not verify: {e}")))?;
    if !is_basic_form(&out) {
        return Err(Error::ReductionFailed(format!(
            "{set} reduces to {out}, which violates the coprimality conditions"
        )));
    }
    Ok(BasicForm { below_set_size: !set.is_proper(), set: out, verified: true })
}

/// `gcd(r, s·b) = gcd(s, r·a) = 1`, both minimum exponents are zero, and
/// neither base is a perfect power.
pub fn is_basic_form(set: &SolutionSet) -> bool {
    let i = &set.inst;
    let coprime = i.r.gcd(&(&i.s * &i.b)).is_one() && i.s.gcd(&(&i.r * &i.a)).is_one();
    let min_x = set.sols.iter().map(|s| s.x).min();
    let min_y = set.sols.iter().map(|s| s.y).min();
    let root_free = |n: &BigUint| perfect_power(n).map(|d| d.exponent == 1).unwrap_or(false);
    coprime && min_x == Some(0) && min_y == Some(0) && root_free(&i.a) && root_free(&i.b)
}

/// Evidence that two sets lie in one family: `k·c = C` and a bijection of
/// solutions matching the scaled terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyWitness {
    pub k: Ratio<BigUint>,
    /// `pairing[i] = j` pairs solution `i` of the first set with `j` of the second.
    pub pairing: Vec<usize>,
}

/// Decides family membership through basic forms, then rebuilds and checks the
/// witness directly against the definition.
pub fn same_family(s1: &SolutionSet, s2: &SolutionSet) -> Result<Option<FamilyWitness>> {
    let b1 = reduce_to_basic_form(s1)?;
    let b2 = reduce_to_basic_form(s2)?;
    if b1.set != b2.set {
        return Ok(None);
    }
    let (i1, i2) = (&s1.inst, &s2.inst);
    let k = Ratio::new(i2.c.clone(), i1.c.clone());

    if perfect_power(&i1.a)?.base != perfect_power(&i2.a)?.base
        || perfect_power(&i1.b)?.base != perfect_power(&i2.b)?.base
    {
        return Err(Error::ReductionFailed("equal basic forms but unrelated bases".into()));
    }

    // k·t1 = t2  ⇔  C·t1 = c·t2
    let mut pairing = Vec::with_capacity(s1.len());
    let mut used = vec![false; s2.len()];
    for s in &s1.sols {
        let l1 = &i2.c * i1.left_term(s.x);
        let r1 = &i2.c * i1.right_term(s.y);
        let j = s2
            .sols
            .iter()
            .enumerate()
            .position(|(j, t)| !used[j] && l1 == &i1.c * i2.left_term(t.x) && r1 == &i1.c * i2.right_term(t.y));
        match j {
            Some(j) => {
                used[j] = true;
                pairing.push(j);
            }
            None => return Err(Error::ReductionFailed(format!("witness re-verification failed for {s1} and {s2}"))),
        }
    }
    Ok(Some(FamilyWitness { k, pairing }))
}

/// Canonical identifier of a family, folded over associates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyKey(pub String);

impl fmt::Display for FamilyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FamilyKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The basic form the key serializes.
    pub fn to_set(&self) -> SolutionSet {
        SolutionSet::parse(&self.0).expect("family keys are valid serializations")
    }
}

/// Smaller serialization of the basic form and of its associate.
pub fn family_key(set: &SolutionSet) -> Result<FamilyKey> {
    let basic = reduce_to_basic_form(set)?.set;
    Ok(key_of_basic(&basic))
}

pub(crate) fn key_of_basic(basic: &SolutionSet) -> FamilyKey {
    let own = basic.serialize();
    let other = basic.associate().serialize();
    FamilyKey(own.min(other))
}

/// Integer `k` scaling plus optional power substitution `a → a^i`, `b → b^j`
/// (exponents must then be divisible). Used for building family members.
pub fn scaled_member(set: &SolutionSet, k: u64, a_power: u32, b_power: u32) -> Result<SolutionSet> {
    if k == 0 || a_power == 0 || b_power == 0 {
        return invalid("scale and power indices must be positive");
    }
    if set.sols.iter().any(|s| s.x % a_power != 0 || s.y % b_power != 0) {
        return invalid("exponents not divisible by the substituted power");
    }
    let i = &set.inst;
    let inst = Instance::new(i.a.pow(a_power), i.b.pow(b_power), &i.c * k, &i.r * k, &i.s * k)?;
    let pairs: Vec<_> = set.sols.iter().map(|s| (s.x / a_power, s.y / b_power)).collect();
    SolutionSet::new(inst, &pairs)
}

/// Family member with every `x` raised by `dx` and every `y` by `dy`, scaled
/// by `k = m·a^dx·b^dy` so the coefficients stay integral.
pub fn shifted_member(set: &SolutionSet, dx: u32, dy: u32, m: u64) -> Result<SolutionSet> {
    if m == 0 {
        return invalid("multiplier must be positive");
    }
    let i = &set.inst;
    let adx = i.a.pow(dx);
    let bdy = i.b.pow(dy);
    let inst = Instance::new(i.a.clone(), i.b.clone(), &i.c * &adx * &bdy * m, &i.r * &bdy * m, &i.s * &adx * m)?;
    let pairs: Vec<_> = set.sols.iter().map(|s| (s.x + dx, s.y + dy)).collect();
    SolutionSet::new(inst, &pairs)
}
