//! Exhaustive box search with family-level dedup, classification, and
//! resumable checkpoints.
//!
//! Work is split into units `(a, b, r, s)` in lexicographic order; for one
//! unit every `c` in the box is handled at once by pairing the two term
//! sequences. Findings are keyed by family, sorted by key, and carry the
//! completeness flag OR-ed over all instances seen, so shard outputs merge
//! by plain union.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::catalog::match_catalog;
use crate::equation::{caps_are_complete, Instance, Solution};
use crate::error::{invalid, Error, Result};
use crate::generators::back_solve;
use crate::sets::{family_key, FamilyKey, SolutionSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GcdFilter {
    Any,
    /// `gcd(r·a, s·b) = 1`
    Coprime,
    /// `gcd(a, b) > 1`
    Common,
}

impl fmt::Display for GcdFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GcdFilter::Any => "any",
            GcdFilter::Coprime => "coprime",
            GcdFilter::Common => "common",
        })
    }
}

impl std::str::FromStr for GcdFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any" => Ok(GcdFilter::Any),
            "coprime" => Ok(GcdFilter::Coprime),
            "common" => Ok(GcdFilter::Common),
            _ => invalid(format!("unknown gcd filter {s:?}")),
        }
    }
}

pub type Range = (u64, u64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBox {
    pub a: Range,
    pub b: Range,
    pub r: Range,
    pub s: Range,
    pub c: Range,
    pub exp_cap: u32,
    pub min_n: usize,
    pub gcd_filter: GcdFilter,
}

pub const DEFAULT_EXP_CAP: u32 = 40;
pub const DEFAULT_MIN_N: usize = 3;

impl SearchBox {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi), min) in
            [("a", self.a, 2), ("b", self.b, 2), ("r", self.r, 1), ("s", self.s, 1), ("c", self.c, 1)]
        {
            if lo > hi {
                return invalid(format!("empty {name} range {lo}..{hi}"));
            }
            if lo < min {
                return invalid(format!("{name} must be at least {min}"));
            }
        }
        if self.exp_cap == 0 {
            return invalid("exp_cap must be positive");
        }
        if self.min_n < 3 {
            return invalid("min_n must be at least 3");
        }
        Ok(())
    }

    pub fn descriptor(&self) -> String {
        let r = |(lo, hi): Range| format!("{lo}..{hi}");
        format!(
            "a={};b={};r={};s={};c={};exp_cap={};min_n={};gcd={}",
            r(self.a),
            r(self.b),
            r(self.r),
            r(self.s),
            r(self.c),
            self.exp_cap,
            self.min_n,
            self.gcd_filter
        )
    }

    fn in_range((lo, hi): Range, v: u64) -> bool {
        lo <= v && v <= hi
    }

    /// `(a, b)` pairs of the box passing the base filter, in order.
    pub fn base_pairs(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for a in self.a.0..=self.a.1 {
            for b in self.b.0..=self.b.1 {
                if self.gcd_filter == GcdFilter::Common && a.gcd(&b) == 1 {
                    continue;
                }
                out.push((a, b));
            }
        }
        out
    }

    /// Pre-filter: `(r, s, c)` with a common factor `g` reduces to
    /// `(r/g, s/g, c/g)` with the same solutions; skip it when that smaller
    /// instance lies in the box too.
    fn reducible(&self, r: u64, s: u64, c: u64) -> bool {
        let g = r.gcd(&s).gcd(&c);
        g > 1 && Self::in_range(self.r, r / g) && Self::in_range(self.s, s / g) && Self::in_range(self.c, c / g)
    }
}

/// Shard `index` of `count`: takes every `count`-th base pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shard {
    pub index: usize,
    pub count: usize,
}

impl std::str::FromStr for Shard {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (i, n) = s.split_once('/').ok_or_else(|| Error::Parse(format!("shard {s:?}: want i/n")))?;
        let index = i.trim().parse().map_err(|_| Error::Parse(format!("shard index {i:?}")))?;
        let count: usize = n.trim().parse().map_err(|_| Error::Parse(format!("shard count {n:?}")))?;
        if count == 0 || index >= count {
            return invalid(format!("shard {index}/{count} out of range"));
        }
        Ok(Shard { index, count })
    }
}

impl fmt::Display for Shard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.index, self.count)
    }
}

/// Classification of a family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    Known(String),
    Generator(u32),
    AnomalousCandidate,
    Unexplained,
}

impl Classification {
    pub fn is_known(&self) -> bool {
        matches!(self, Classification::Known(_))
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Known(l) => write!(f, "known:{l}"),
            Classification::Generator(id) => write!(f, "generator:{id}"),
            Classification::AnomalousCandidate => f.write_str("anomalous-candidate"),
            Classification::Unexplained => f.write_str("unexplained"),
        }
    }
}

impl std::str::FromStr for Classification {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if let Some(l) = s.strip_prefix("known:") {
            return Ok(Classification::Known(l.to_string()));
        }
        if let Some(id) = s.strip_prefix("generator:") {
            return id.parse().map(Classification::Generator).map_err(|_| Error::Parse(format!("generator id {id:?}")));
        }
        match s {
            "anomalous-candidate" => Ok(Classification::AnomalousCandidate),
            "unexplained" => Ok(Classification::Unexplained),
            _ => Err(Error::Parse(format!("classification {s:?}"))),
        }
    }
}

/// Catalog first; three-solution sets then go to the generator back-solver.
pub fn classify(set: &SolutionSet) -> Result<Classification> {
    if set.len() < 3 {
        return Ok(Classification::Unexplained);
    }
    if let Some(e) = match_catalog(set)? {
        return Ok(Classification::Known(e.label.clone()));
    }
    if set.len() == 3 {
        if let Some(p) = back_solve(set)? {
            return Ok(Classification::Generator(p.family_id()));
        }
        return Ok(Classification::AnomalousCandidate);
    }
    Ok(Classification::Unexplained)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub key: FamilyKey,
    pub classification: Classification,
    /// Some instance of the family had provably complete caps.
    pub complete: bool,
    /// Lexicographically first `(a, b, r, s, c)` instance of the family.
    pub set: SolutionSet,
}

impl Finding {
    pub fn line(&self) -> String {
        let comp = if self.complete { "complete" } else { "incomplete" };
        format!("{}\t{}\t{comp}", self.key.as_str(), self.classification)
    }
}

fn position(set: &SolutionSet) -> [BigUint; 5] {
    let i = set.instance();
    [i.a.clone(), i.b.clone(), i.r.clone(), i.s.clone(), i.c.clone()]
}

/// Keeps the earlier representative and ORs completeness.
fn absorb(map: &mut BTreeMap<FamilyKey, Finding>, f: Finding) {
    match map.get_mut(&f.key) {
        None => {
            map.insert(f.key.clone(), f);
        }
        Some(old) => {
            old.complete |= f.complete;
            if position(&f.set) < position(&old.set) {
                old.set = f.set;
            }
        }
    }
}

/// Unions several finding lists (e.g. shards) into the canonical order.
pub fn merge_findings<I: IntoIterator<Item = Finding>>(parts: I) -> Vec<Finding> {
    let mut map = BTreeMap::new();
    for f in parts {
        absorb(&mut map, f);
    }
    map.into_values().collect()
}

/// Every solution with `x, y ≤ cap` of every instance `(a, b, c, r, s)`
/// with `c` in range, grouped by `c`.
pub fn group_solutions(a: u64, b: u64, r: u64, s: u64, c: Range, cap: u32) -> BTreeMap<u64, Vec<Solution>> {
    let terms = |coef: u64, base: u64| {
        let mut v = Vec::with_capacity(cap as usize + 1);
        let mut t = BigUint::from(coef);
        for _ in 0..=cap {
            v.push(t.clone());
            t *= base;
        }
        v
    };
    let left = terms(r, a);
    let right = terms(s, b);
    let (c_lo, c_hi) = (BigUint::from(c.0), BigUint::from(c.1));
    let mut out: BTreeMap<u64, Vec<Solution>> = BTreeMap::new();
    let mut push = |val: &BigUint, sol: Solution| {
        if *val >= c_lo && *val <= c_hi {
            let key = u64::try_from(val).expect("within c range");
            out.entry(key).or_default().push(sol);
        }
    };
    for (x, l) in left.iter().enumerate() {
        let x = x as u32;
        // r·a^x + s·b^y = c
        for (y, rt) in right.iter().enumerate() {
            let sum = l + rt;
            if sum > c_hi {
                break;
            }
            push(&sum, Solution { x, y: y as u32, u: 0, v: 0 });
        }
        // |r·a^x − s·b^y| = c: only terms within c_hi of r·a^x
        let floor = if *l > c_hi { l - &c_hi } else { BigUint::default() };
        let start = right.partition_point(|rt| *rt < floor);
        for (y, rt) in right.iter().enumerate().skip(start) {
            if *rt > l + &c_hi {
                break;
            }
            let y = y as u32;
            if rt < l {
                push(&(l - rt), Solution { x, y, u: 0, v: 1 });
            } else if rt > l {
                push(&(rt - l), Solution { x, y, u: 1, v: 0 });
            }
        }
    }
    for sols in out.values_mut() {
        sols.sort();
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub units: u64,
    pub instances: u64,
    pub prefiltered: u64,
    pub sets: u64,
}

impl SearchStats {
    fn add(&mut self, o: &SearchStats) {
        self.units += o.units;
        self.instances += o.instances;
        self.prefiltered += o.prefiltered;
        self.sets += o.sets;
    }
}

/// All candidate findings of one base pair, deduped locally.
fn search_pair(bx: &SearchBox, a: u64, b: u64) -> Result<(Vec<Finding>, SearchStats)> {
    let mut stats = SearchStats::default();
    let mut local = BTreeMap::new();
    let ab = BigUint::from(a).gcd(&BigUint::from(b));
    for r in bx.r.0..=bx.r.1 {
        for s in bx.s.0..=bx.s.1 {
            stats.units += 1;
            if bx.gcd_filter == GcdFilter::Coprime && !(r * a).gcd(&(s * b)).is_one() {
                continue;
            }
            let groups = group_solutions(a, b, r, s, bx.c, bx.exp_cap);
            stats.instances += bx.c.1 - bx.c.0 + 1;
            for (c, sols) in groups {
                if sols.len() < bx.min_n {
                    continue;
                }
                if bx.reducible(r, s, c) {
                    stats.prefiltered += 1;
                    continue;
                }
                stats.sets += 1;
                let inst = Instance::from_u64(a, b, c, r, s)?;
                let complete = !ab.is_one() && caps_are_complete(&inst, bx.exp_cap, bx.exp_cap);
                let set = SolutionSet::from_verified(inst, sols);
                let (key, classification) = match family_key(&set) {
                    Ok(k) => {
                        let cls = classify(&set)?;
                        (k, cls)
                    }
                    // no basic form: keep the smaller raw orientation
                    Err(Error::ReductionFailed(_)) => {
                        let (p, q) = (set.serialize(), set.associate().serialize());
                        (FamilyKey(p.min(q)), Classification::Unexplained)
                    }
                    Err(e) => return Err(e),
                };
                if local.contains_key(&key) {
                    absorb(&mut local, Finding { key, classification, complete, set });
                    continue;
                }
                local.insert(key.clone(), Finding { key, classification, complete, set });
            }
        }
    }
    Ok((local.into_values().collect(), stats))
}

/// Resume state; written after every completed batch of base pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    /// sha256 of the box descriptor plus shard.
    pub box_hash: String,
    /// Last completed unit `(a, b, r, s)`.
    pub cursor: Option<[u64; 4]>,
    /// sha256 over the finding lines accumulated so far.
    pub digest: String,
    pub findings: Vec<Finding>,
    pub stats: SearchStats,
}

pub fn box_hash(bx: &SearchBox, shard: Option<Shard>) -> String {
    let shard = shard.map(|s| s.to_string()).unwrap_or_else(|| "all".into());
    hex(&Sha256::digest(format!("{};shard={shard}", bx.descriptor()).as_bytes()))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// sha256 over the newline-terminated finding lines.
pub fn findings_digest(findings: &[Finding]) -> String {
    let mut h = Sha256::new();
    for f in findings {
        h.update(f.line().as_bytes());
        h.update(b"\n");
    }
    hex(&h.finalize())
}

impl Checkpoint {
    pub fn to_text(&self) -> String {
        let mut out = format!("box\t{}\n", self.box_hash);
        match self.cursor {
            Some([a, b, r, s]) => out.push_str(&format!("cursor\t{a},{b},{r},{s}\n")),
            None => out.push_str("cursor\tnone\n"),
        }
        let st = &self.stats;
        out.push_str(&format!("stats\t{},{},{},{}\n", st.units, st.instances, st.prefiltered, st.sets));
        out.push_str(&format!("digest\t{}\n", self.digest));
        for f in &self.findings {
            out.push_str(&format!("finding\t{}\t{}\n", f.line(), f.set.serialize()));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Checkpoint> {
        let bad = |m: &str| Error::InvalidCheckpoint(m.to_string());
        let mut box_hash = None;
        let mut cursor = None;
        let mut digest = None;
        let mut stats = SearchStats::default();
        let mut findings = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let mut parts = line.split('\t');
            match parts.next() {
                Some("box") => box_hash = parts.next().map(str::to_string),
                Some("cursor") => {
                    let v = parts.next().ok_or_else(|| bad("cursor"))?;
                    if v != "none" {
                        let n: Vec<u64> =
                            v.split(',').map(|t| t.parse().map_err(|_| bad("cursor value"))).collect::<Result<_>>()?;
                        cursor = Some(n.try_into().map_err(|_| bad("cursor arity"))?);
                    }
                }
                Some("stats") => {
                    let n: Vec<u64> = parts
                        .next()
                        .ok_or_else(|| bad("stats"))?
                        .split(',')
                        .map(|t| t.parse().map_err(|_| bad("stats value")))
                        .collect::<Result<_>>()?;
                    if n.len() != 4 {
                        return Err(bad("stats arity"));
                    }
                    stats = SearchStats { units: n[0], instances: n[1], prefiltered: n[2], sets: n[3] };
                }
                Some("digest") => digest = parts.next().map(str::to_string),
                Some("finding") => {
                    let cols: Vec<&str> = parts.collect();
                    let [key, cls, comp, set] = cols.as_slice() else {
                        return Err(bad("finding arity"));
                    };
                    findings.push(Finding {
                        key: FamilyKey(key.to_string()),
                        classification: cls.parse()?,
                        complete: *comp == "complete",
                        set: SolutionSet::parse(set)?,
                    });
                }
                _ => return Err(bad(&format!("unexpected line {line:?}"))),
            }
        }
        let cp = Checkpoint {
            box_hash: box_hash.ok_or_else(|| bad("missing box hash"))?,
            cursor,
            digest: digest.ok_or_else(|| bad("missing digest"))?,
            findings,
            stats,
        };
        if findings_digest(&cp.findings) != cp.digest {
            return Err(bad("findings digest mismatch"));
        }
        Ok(cp)
    }

    pub fn load(path: &Path) -> Result<Checkpoint> {
        Checkpoint::from_text(&fs::read_to_string(path)?)
    }

    /// Written to a sibling file and renamed, so a crash leaves the old one.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.to_text())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    pub shard: Option<Shard>,
    pub resume: Option<Checkpoint>,
    /// Stop after this many base pairs (for interruption tests).
    pub stop_after_pairs: Option<usize>,
    /// Base pairs handled per parallel batch; a checkpoint is cut after each.
    pub batch: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub findings: Vec<Finding>,
    pub finished: bool,
    pub checkpoint: Checkpoint,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn digest(&self) -> String {
        findings_digest(&self.findings)
    }
}

/// Runs (or resumes) a search; `on_checkpoint` sees the state after every
/// completed batch.
pub fn run_search_with(
    bx: &SearchBox,
    opts: &SearchOptions,
    mut on_checkpoint: impl FnMut(&Checkpoint) -> Result<()>,
) -> Result<SearchOutcome> {
    bx.validate()?;
    let hash = box_hash(bx, opts.shard);
    let mut map = BTreeMap::new();
    let mut stats = SearchStats::default();
    let mut cursor = None;
    if let Some(cp) = &opts.resume {
        if cp.box_hash != hash {
            return Err(Error::InvalidCheckpoint("checkpoint belongs to a different box".into()));
        }
        for f in &cp.findings {
            absorb(&mut map, f.clone());
        }
        stats = cp.stats.clone();
        cursor = cp.cursor;
    }
    let last_unit = |(a, b): (u64, u64)| [a, b, bx.r.1, bx.s.1];
    let pairs: Vec<(u64, u64)> = bx
        .base_pairs()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| opts.shard.is_none_or(|s| i % s.count == s.index))
        .map(|(_, p)| p)
        .filter(|p| cursor.is_none_or(|c| last_unit(*p) > c))
        .collect();

    let batch = opts.batch.unwrap_or_else(|| 2 * rayon::current_num_threads()).max(1);
    let limit = opts.stop_after_pairs.unwrap_or(usize::MAX);
    let mut done = 0usize;
    let mut finished = true;
    for chunk in pairs.chunks(batch) {
        if done >= limit {
            finished = false;
            break;
        }
        let take = chunk.len().min(limit - done);
        let chunk = &chunk[..take];
        let results: Vec<_> = chunk.par_iter().map(|&(a, b)| search_pair(bx, a, b)).collect();
        for res in results {
            let (found, st) = res?;
            stats.add(&st);
            for f in found {
                absorb(&mut map, f);
            }
        }
        done += take;
        cursor = chunk.last().map(|p| last_unit(*p));
        let findings: Vec<Finding> = map.values().cloned().collect();
        let cp = Checkpoint {
            box_hash: hash.clone(),
            cursor,
            digest: findings_digest(&findings),
            findings,
            stats: stats.clone(),
        };
        on_checkpoint(&cp)?;
    }
    if done < pairs.len() {
        finished = false;
    }
    let findings: Vec<Finding> = map.into_values().collect();
    let checkpoint = Checkpoint {
        box_hash: hash,
        cursor,
        digest: findings_digest(&findings),
        findings: findings.clone(),
        stats: stats.clone(),
    };
    Ok(SearchOutcome { findings, finished, checkpoint, stats })
}

pub fn run_search(bx: &SearchBox, opts: &SearchOptions) -> Result<SearchOutcome> {
    run_search_with(bx, opts, |_| Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::enumerate_solutions;

    fn small_box() -> SearchBox {
        SearchBox {
            a: (2, 6),
            b: (2, 6),
            r: (1, 7),
            s: (1, 7),
            c: (1, 20),
            exp_cap: 20,
            min_n: 4,
            gcd_filter: GcdFilter::Any,
        }
    }

    #[test]
    fn grouped_matches_enumerator() {
        for (a, b, r, s) in [(3, 2, 1, 2), (2, 2, 1, 1), (6, 2, 1, 7), (5, 3, 1, 1)] {
            let groups = group_solutions(a, b, r, s, (1, 30), 12);
            for c in 1..=30u64 {
                let inst = Instance::from_u64(a, b, c, r, s).unwrap();
                let direct = enumerate_solutions(&inst, 12, 12).solutions;
                let fast = groups.get(&c).cloned().unwrap_or_default();
                assert_eq!(direct, fast, "({a},{b},{c},{r},{s})");
            }
        }
    }

    #[test]
    fn box_validation() {
        let mut bx = small_box();
        assert!(bx.validate().is_ok());
        bx.a = (5, 4);
        assert!(bx.validate().is_err());
        let mut bx = small_box();
        bx.min_n = 2;
        assert!(bx.validate().is_err());
    }

    #[test]
    fn shard_parse() {
        assert_eq!("1/4".parse::<Shard>().unwrap(), Shard { index: 1, count: 4 });
        assert!("4/4".parse::<Shard>().is_err());
        assert!("x".parse::<Shard>().is_err());
    }

    #[test]
    fn checkpoint_round_trip() {
        let out = run_search(&small_box(), &SearchOptions::default()).unwrap();
        assert!(out.finished);
        let text = out.checkpoint.to_text();
        let back = Checkpoint::from_text(&text).unwrap();
        assert_eq!(back, out.checkpoint);
        let tampered = text.replacen("complete", "incomplete", 1);
        if tampered != text {
            assert!(Checkpoint::from_text(&tampered).is_err());
        }
    }

    #[test]
    fn classification_strings() {
        for c in [
            Classification::Known("TheoremA-1".into()),
            Classification::Generator(86),
            Classification::AnomalousCandidate,
            Classification::Unexplained,
        ] {
            assert_eq!(c.to_string().parse::<Classification>().unwrap(), c);
        }
    }
}
