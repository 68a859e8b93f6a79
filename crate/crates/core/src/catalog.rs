//! Registry of the known exceptional solution sets, with membership testing
//! up to family, subset and associate.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};

use crate::equation::Instance;
use crate::error::{Error, Result};
use crate::sets::{family_key, reduce_to_basic_form, FamilyKey, SolutionSet};

const CATALOG_TEXT: &str = include_str!("../data/catalog.txt");

/// Largest `g` tried when solving a parametric entry against a query.
const PARAM_G_LIMIT: u64 = 4096;

/// A set family indexed by `(e, g)`, `e ∈ {0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamFamily {
    template: String,
    constraint: String,
}

impl ParamFamily {
    pub fn template(&self) -> &str {
        &self.template
    }

    pub fn constraint(&self) -> &str {
        &self.constraint
    }

    pub fn admits(&self, e: u32, g: u64) -> Result<bool> {
        eval_constraint(&self.constraint, e, g)
    }

    /// Substitutes `(e, g)` and verifies every resulting pair.
    pub fn instantiate(&self, e: u32, g: u64) -> Result<SolutionSet> {
        if e > 1 {
            return Err(Error::InvalidParameters(format!("e must be 0 or 1, got {e}")));
        }
        if !self.admits(e, g)? {
            return Err(Error::InvalidParameters(format!("(e, g) = ({e}, {g}) violates {}", self.constraint)));
        }
        let (head, tail) =
            self.template.split_once(';').ok_or_else(|| Error::Parse(format!("bad template {}", self.template)))?;
        let coeffs =
            head.split(',').map(|t| eval_expr(t, e, g).and_then(|v| to_natural(&v, t))).collect::<Result<Vec<_>>>()?;
        let exps = tail
            .split(',')
            .map(|t| {
                eval_expr(t, e, g)?
                    .to_u32()
                    .ok_or_else(|| Error::InvalidParameters(format!("exponent {t} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        let [a, b, c, r, s]: [BigUint; 5] =
            coeffs.try_into().map_err(|_| Error::Parse("template needs five coefficients".into()))?;
        let pairs: Vec<_> = exps.chunks(2).map(|p| (p[0], p[1])).collect();
        SolutionSet::new(Instance::new(a, b, c, r, s)?, &pairs)
    }
}

fn to_natural(v: &BigInt, text: &str) -> Result<BigUint> {
    v.to_biguint().ok_or_else(|| Error::InvalidParameters(format!("{text} evaluates to {v}")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntrySet {
    Concrete(SolutionSet),
    Param(ParamFamily),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub label: String,
    pub source: String,
    pub set: EntrySet,
}

impl CatalogEntry {
    pub fn concrete(&self) -> Option<&SolutionSet> {
        match &self.set {
            EntrySet::Concrete(s) => Some(s),
            EntrySet::Param(_) => None,
        }
    }
}

struct Catalog {
    entries: Vec<CatalogEntry>,
    /// Family key of every subset (three or more pairs) of every concrete
    /// entry, mapped to the entry indices in catalog order.
    index: HashMap<FamilyKey, Vec<usize>>,
}

fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let entries = parse_catalog(CATALOG_TEXT).expect("embedded catalog parses");
        let mut index: HashMap<FamilyKey, Vec<usize>> = HashMap::new();
        for (i, entry) in entries.iter().enumerate() {
            if let EntrySet::Concrete(set) = &entry.set {
                for sub in subsets_of_size_at_least(set, 3) {
                    let key = family_key(&sub).expect("catalog subsets reduce");
                    let slot = index.entry(key).or_default();
                    if slot.last() != Some(&i) {
                        slot.push(i);
                    }
                }
            }
        }
        Catalog { entries, index }
    })
}

/// Parses the catalog text format (see the data file header).
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let mut entries = Vec::new();
    let mut pending: Option<(String, String)> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let at = |msg: String| Error::Parse(format!("catalog line {}: {msg}", n + 1));
        if let Some(rest) = line.strip_prefix("#@") {
            let (label, source) = rest.split_once('|').ok_or_else(|| at("missing '|'".into()))?;
            if pending.is_some() {
                return Err(at("label without a set".into()));
            }
            pending = Some((label.trim().to_string(), source.trim().to_string()));
        } else if line.is_empty() || line.starts_with('#') {
            continue;
        } else if let Some(rest) = line.strip_prefix("param:") {
            let parts: Vec<_> = rest.split('|').map(str::trim).collect();
            let [label, source, template, constraint] = parts[..] else {
                return Err(at("param lines need four fields".into()));
            };
            entries.push(CatalogEntry {
                label: label.into(),
                source: source.into(),
                set: EntrySet::Param(ParamFamily { template: template.into(), constraint: constraint.into() }),
            });
        } else {
            let (label, source) = pending.take().ok_or_else(|| at("set without a label".into()))?;
            let set = SolutionSet::parse(line).map_err(|e| at(e.to_string()))?;
            entries.push(CatalogEntry { label, source, set: EntrySet::Concrete(set) });
        }
    }
    if pending.is_some() {
        return Err(Error::Parse("catalog ends with a dangling label".into()));
    }
    Ok(entries)
}

/// Every entry, in file order.
pub fn catalog_entries() -> &'static [CatalogEntry] {
    &catalog().entries
}

pub fn entry_by_label(label: &str) -> Option<&'static CatalogEntry> {
    catalog_entries().iter().find(|e| e.label == label)
}

/// All subsets with at least `min` pairs (entries have at most five).
pub fn subsets_of_size_at_least(set: &SolutionSet, min: usize) -> Vec<SolutionSet> {
    let n = set.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if (mask.count_ones() as usize) < min {
            continue;
        }
        let idx: Vec<_> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        out.push(set.subset(&idx).expect("subset of a verified set"));
    }
    out
}

/// The first matching entry in catalog order.
pub fn match_catalog(set: &SolutionSet) -> Result<Option<&'static CatalogEntry>> {
    Ok(matching_entries(set)?.into_iter().next())
}

/// First matching entry whose label starts with `prefix`.
pub fn match_catalog_prefix(set: &SolutionSet, prefix: &str) -> Result<Option<&'static CatalogEntry>> {
    Ok(matching_entries(set)?.into_iter().find(|e| e.label.starts_with(prefix)))
}

/// Every entry of which `set` is, up to family, a subset or an associate of one.
pub fn matching_entries(set: &SolutionSet) -> Result<Vec<&'static CatalogEntry>> {
    if !set.is_proper() {
        return Err(Error::InvalidArgument("catalog matching needs at least 3 solutions".into()));
    }
    let cat = catalog();
    let basic = reduce_to_basic_form(set)?.set;
    let key = family_key(&basic)?;
    let mut hits: Vec<usize> = cat.index.get(&key).cloned().unwrap_or_default();
    for (i, entry) in cat.entries.iter().enumerate() {
        if let EntrySet::Param(p) = &entry.set {
            if param_matches(p, &basic, &key)? {
                hits.push(i);
            }
        }
    }
    hits.sort_unstable();
    hits.dedup();
    Ok(hits.into_iter().map(|i| &cat.entries[i]).collect())
}

/// Parametric members are all three-solution sets whose basic form keeps `c`,
/// so `(e, g)` is pinned by `2^g = c + (−1)^e`.
fn param_matches(p: &ParamFamily, basic: &SolutionSet, key: &FamilyKey) -> Result<bool> {
    if basic.len() != 3 {
        return Ok(false);
    }
    let c = BigInt::from(basic.instance().c.clone());
    for e in 0..=1u32 {
        let target = if e == 0 { &c + 1 } else { &c - 1 };
        let Some(g) = exact_log2(&target) else { continue };
        if g == 0 || g > PARAM_G_LIMIT || !p.admits(e, g)? {
            continue;
        }
        let inst = p.instantiate(e, g)?;
        if family_key(&inst)? == *key {
            return Ok(true);
        }
    }
    Ok(false)
}

fn exact_log2(n: &BigInt) -> Option<u64> {
    if !n.is_positive() {
        return None;
    }
    let m = n.magnitude();
    let g = m.bits() - 1;
    (BigUint::one() << g == *m).then_some(g)
}

/// Outcome of [`verify_catalog`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CatalogReport {
    pub concrete_checked: usize,
    pub instantiations_checked: usize,
    pub failures: Vec<String>,
}

impl CatalogReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-verifies every concrete entry pair by pair and every admissible
/// instantiation with `g ≤ g_max`.
pub fn verify_catalog(g_max: u64) -> CatalogReport {
    let mut report = CatalogReport::default();
    let entries = match parse_catalog(CATALOG_TEXT) {
        Ok(e) => e,
        Err(e) => {
            report.failures.push(e.to_string());
            return report;
        }
    };
    for entry in &entries {
        match &entry.set {
            EntrySet::Concrete(set) => {
                report.concrete_checked += 1;
                for s in set.solutions() {
                    if crate::equation::determine_signs(set.instance(), s.x, s.y) != Some((s.u, s.v)) {
                        report.failures.push(format!("{}: ({},{}) fails", entry.label, s.x, s.y));
                    }
                }
            }
            EntrySet::Param(p) => {
                for e in 0..=1 {
                    for g in 1..=g_max {
                        match p.admits(e, g) {
                            Ok(false) => continue,
                            Ok(true) => {}
                            Err(err) => {
                                report.failures.push(format!("{}: {err}", entry.label));
                                continue;
                            }
                        }
                        report.instantiations_checked += 1;
                        if let Err(err) = p.instantiate(e, g) {
                            report.failures.push(format!("{} at e={e}, g={g}: {err}", entry.label));
                        }
                    }
                }
            }
        }
    }
    report
}

// A tiny arithmetic language over e and g: integers, + - * ^, parentheses,
// unary minus. Constraints are `<expr> <op> <expr>` with op in > >= < <= =.

fn eval_constraint(text: &str, e: u32, g: u64) -> Result<bool> {
    for op in [">=", "<=", ">", "<", "="] {
        if let Some((l, r)) = text.split_once(op) {
            let (l, r) = (eval_expr(l, e, g)?, eval_expr(r, e, g)?);
            return Ok(match op {
                ">=" => l >= r,
                "<=" => l <= r,
                ">" => l > r,
                "<" => l < r,
                _ => l == r,
            });
        }
    }
    Err(Error::Parse(format!("no comparison in constraint {text:?}")))
}

pub(crate) fn eval_expr(text: &str, e: u32, g: u64) -> Result<BigInt> {
    let tokens: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = ExprParser { t: &tokens, i: 0, e, g };
    let v = p.sum()?;
    if p.i != tokens.len() {
        return Err(Error::Parse(format!("trailing input in {text:?}")));
    }
    Ok(v)
}

struct ExprParser<'a> {
    t: &'a [char],
    i: usize,
    e: u32,
    g: u64,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<char> {
        self.t.get(self.i).copied()
    }

    fn sum(&mut self) -> Result<BigInt> {
        let mut v = self.product()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.i += 1;
            let rhs = self.product()?;
            v = if c == '+' { v + rhs } else { v - rhs };
        }
        Ok(v)
    }

    fn product(&mut self) -> Result<BigInt> {
        let mut v = self.power()?;
        while self.peek() == Some('*') {
            self.i += 1;
            v *= self.power()?;
        }
        Ok(v)
    }

    fn power(&mut self) -> Result<BigInt> {
        let base = self.unary()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.i += 1;
        let exp = self.power()?;
        let exp = exp.to_u32().ok_or_else(|| Error::Parse(format!("bad exponent {exp}")))?;
        Ok(base.pow(exp))
    }

    fn unary(&mut self) -> Result<BigInt> {
        if self.peek() == Some('-') {
            self.i += 1;
            return Ok(-self.unary()?);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some('(') => {
                self.i += 1;
                let v = self.sum()?;
                if self.peek() != Some(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.i += 1;
                Ok(v)
            }
            Some('e') => {
                self.i += 1;
                Ok(BigInt::from(self.e))
            }
            Some('g') => {
                self.i += 1;
                Ok(BigInt::from(self.g))
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.i;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.i += 1;
                }
                let s: String = self.t[start..self.i].iter().collect();
                Ok(s.parse::<BigInt>().expect("digits"))
            }
            other => Err(Error::Parse(format!("unexpected {other:?}"))),
        }
    }
}

/// True if any entry has exactly this serialization as a concrete set.
pub fn contains_set(serialized: &str) -> bool {
    catalog_entries().iter().filter_map(CatalogEntry::concrete).any(|s| s.serialize() == serialized)
}

/// All concrete entries plus instantiations with `g ≤ g_max`, as plain sets.
pub fn corpus(g_max: u64) -> Vec<(String, SolutionSet)> {
    let mut out = Vec::new();
    for entry in catalog_entries() {
        match &entry.set {
            EntrySet::Concrete(s) => out.push((entry.label.clone(), s.clone())),
            EntrySet::Param(p) => {
                for e in 0..=1 {
                    for g in 1..=g_max {
                        if p.admits(e, g).unwrap_or(false) {
                            if let Ok(s) = p.instantiate(e, g) {
                                out.push((format!("{}[e={e},g={g}]", entry.label), s));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}
