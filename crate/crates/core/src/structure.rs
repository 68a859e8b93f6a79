//! Structural checks on a solution set: how many solutions touch a zero
//! exponent, repeated exponents, monotonicity, and the three admissible
//! orderings. A violation is fine when the set falls under a catalog entry
//! filed for that statement; otherwise it is reported as unmatched.

use std::fmt;

use crate::catalog::match_catalog_prefix;
use crate::error::{invalid, Result};
use crate::sets::{reduce_to_basic_form, SolutionSet};

/// Which statement a violation is against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// At most two solutions with `min(x, y) = 0`.
    ZeroCount,
    /// Only `(0, 0)` touches zero: all x distinct, all y distinct.
    DistinctOneZero,
    /// `(0, 0)` and `(x, 0)`: x distinct, y distinct apart from the two zeros.
    DistinctSharedZeroY,
    /// `(0, y)` and `(x, 0)`: x distinct, y distinct.
    DistinctSplitZeros,
    /// Positive x and positive y order each other.
    Monotone,
    /// Sorted by x, the ys follow one of three patterns.
    Ordering,
}

impl Rule {
    /// Catalog label prefix holding the exceptions to this rule.
    pub fn catalog_prefix(self) -> &'static str {
        match self {
            Rule::ZeroCount => "Lemma2-",
            Rule::DistinctOneZero => "Lemma4-",
            Rule::DistinctSharedZeroY => "Lemma6-",
            Rule::DistinctSplitZeros => "Lemma7-",
            Rule::Monotone => "Lemma11-",
            Rule::Ordering => "Lemma12-",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::ZeroCount => "zero-count",
            Rule::DistinctOneZero => "distinct-one-zero",
            Rule::DistinctSharedZeroY => "distinct-shared-zero-y",
            Rule::DistinctSplitZeros => "distinct-split-zeros",
            Rule::Monotone => "monotone",
            Rule::Ordering => "ordering",
        };
        f.write_str(s)
    }
}

/// Shape of the solutions with a zero coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroShape {
    /// `(0, 0)` alone.
    OneZero,
    /// `(0, 0)` and `(x, 0)` with `x > 0`.
    SharedZeroY,
    /// `(0, y)` and `(x, 0)`, both positive.
    SplitZeros,
    Other,
}

pub fn zero_shape(pairs: &[(u32, u32)]) -> ZeroShape {
    let zeros: Vec<_> = pairs.iter().filter(|(x, y)| *x == 0 || *y == 0).collect();
    match zeros.as_slice() {
        [(0, 0)] => ZeroShape::OneZero,
        [p, q] => {
            let has = |f: &dyn Fn(&(u32, u32)) -> bool| f(p) || f(q);
            if has(&|&(x, y)| x == 0 && y == 0) && has(&|&(x, y)| x > 0 && y == 0) {
                ZeroShape::SharedZeroY
            } else if has(&|&(x, y)| x == 0 && y > 0) && has(&|&(x, y)| x > 0 && y == 0) {
                ZeroShape::SplitZeros
            } else {
                ZeroShape::Other
            }
        }
        _ => ZeroShape::Other,
    }
}

fn has_repeat(mut v: Vec<u32>) -> bool {
    v.sort_unstable();
    v.windows(2).any(|w| w[0] == w[1])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    /// `basic` or `associate`.
    pub view: &'static str,
    pub detail: String,
    /// Catalog entry covering the violation, if any.
    pub matched: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub basic: SolutionSet,
    pub violations: Vec<Violation>,
}

impl StructureReport {
    pub fn unmatched(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.matched.is_none())
    }

    pub fn is_clean(&self) -> bool {
        self.unmatched().next().is_none()
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "basic\t{}", self.basic)?;
        for v in &self.violations {
            let m = v.matched.as_deref().unwrap_or("UNMATCHED");
            write!(f, "\n{}\t{}\t{}\t{m}", v.rule, v.view, v.detail)?;
        }
        Ok(())
    }
}

/// Raw violations of one view, before catalog matching.
fn view_violations(pairs: &[(u32, u32)]) -> Vec<(Rule, String)> {
    let mut out = Vec::new();
    let xs: Vec<u32> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<u32> = pairs.iter().map(|p| p.1).collect();

    match zero_shape(pairs) {
        ZeroShape::OneZero => {
            if has_repeat(xs.clone()) || has_repeat(ys.clone()) {
                out.push((Rule::DistinctOneZero, "repeated exponent".into()));
            }
        }
        ZeroShape::SharedZeroY => {
            let pos_y: Vec<u32> = ys.iter().copied().filter(|y| *y > 0).collect();
            if has_repeat(xs.clone()) || has_repeat(pos_y) {
                out.push((Rule::DistinctSharedZeroY, "repeated exponent".into()));
            }
        }
        ZeroShape::SplitZeros => {
            if has_repeat(xs.clone()) || has_repeat(ys.clone()) {
                out.push((Rule::DistinctSplitZeros, "repeated exponent".into()));
            }
        }
        ZeroShape::Other => {}
    }

    let min_zero = xs.iter().min() == Some(&0) && ys.iter().min() == Some(&0);
    let pos = |v: &[u32]| v.iter().copied().filter(|e| *e > 0).collect::<Vec<_>>();
    if min_zero && !has_repeat(pos(&xs)) && !has_repeat(pos(&ys)) {
        'pairs: for (i, &(xi, yi)) in pairs.iter().enumerate() {
            for &(xj, yj) in &pairs[i + 1..] {
                let bad_x = xi > 0 && xj > 0 && (xi < xj) != (yi < yj);
                let bad_y = yi > 0 && yj > 0 && (yi < yj) != (xi < xj);
                if bad_x || bad_y {
                    out.push((Rule::Monotone, format!("({xi},{yi}) vs ({xj},{yj})")));
                    break 'pairs;
                }
            }
        }
    }
    out
}

/// One of the three orderings, with `pairs` sorted by `x`.
pub fn admissible_ordering(pairs: &[(u32, u32)]) -> bool {
    let mut p = pairs.to_vec();
    p.sort_unstable();
    if p.windows(2).any(|w| w[0].0 >= w[1].0) {
        return false;
    }
    let ys: Vec<u32> = p.iter().map(|q| q.1).collect();
    let increasing_from = |k: usize| ys[k..].windows(2).all(|w| w[0] < w[1]);
    if ys.len() < 3 {
        return increasing_from(0) || ys.len() < 2 || ys[0] == ys[1] || ys[1] < ys[0];
    }
    // y1 = y2 < y3 < …, or y2 < y1 < y3 < …, or strictly increasing
    (ys[0] == ys[1] && increasing_from(1))
        || (ys[1] < ys[0] && ys[0] < ys[2] && increasing_from(2))
        || increasing_from(0)
}

/// Evaluates every rule on the basic form and on its associate.
pub fn check_structure(set: &SolutionSet) -> Result<StructureReport> {
    if !set.is_proper() {
        return invalid("structure checks need at least 3 solutions");
    }
    let basic = reduce_to_basic_form(set)?.set;
    let assoc = basic.associate();
    let mut raw: Vec<(Rule, &'static str, String)> = Vec::new();

    let zero_count = basic.pairs().iter().filter(|(x, y)| *x == 0 || *y == 0).count();
    if zero_count > 2 {
        raw.push((Rule::ZeroCount, "basic", format!("{zero_count} solutions touch zero")));
    }
    for (view, name) in [(&basic, "basic"), (&assoc, "associate")] {
        for (rule, detail) in view_violations(&view.pairs()) {
            raw.push((rule, name, detail));
        }
    }
    if !admissible_ordering(&basic.pairs()) && !admissible_ordering(&assoc.pairs()) {
        raw.push((Rule::Ordering, "both", "no admissible ordering".into()));
    }

    let mut violations = Vec::with_capacity(raw.len());
    for (rule, view, detail) in raw {
        let matched = match_catalog_prefix(&basic, rule.catalog_prefix())?.map(|e| e.label.clone());
        violations.push(Violation { rule, view, detail, matched });
    }
    Ok(StructureReport { basic, violations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(s: &str) -> StructureReport {
        check_structure(&SolutionSet::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn monotone_violation_is_cataloged() {
        let r = report("2,2,2,1,1;0,0,1,2,2,1");
        assert!(r.violations.iter().any(|v| v.rule == Rule::Monotone));
        assert!(r.is_clean(), "{r}");
    }

    #[test]
    fn increasing_set_is_clean() {
        let r = report("6,2,8,1,7;0,0,1,1,2,2,3,5");
        assert!(r.violations.is_empty(), "{r}");
    }

    #[test]
    fn ordering_failure_matched() {
        let r = report("3,2,1,1,2;0,0,1,0,1,1,2,2");
        let ord: Vec<_> = r.violations.iter().filter(|v| v.rule == Rule::Ordering).collect();
        assert_eq!(ord.len(), 1);
        assert!(ord[0].matched.is_some());
        assert!(r.is_clean());
    }

    #[test]
    fn orderings() {
        assert!(admissible_ordering(&[(0, 0), (1, 0), (2, 1), (3, 4)]));
        assert!(admissible_ordering(&[(0, 1), (1, 0), (2, 2)]));
        assert!(!admissible_ordering(&[(0, 0), (1, 2), (2, 1)]));
        assert!(!admissible_ordering(&[(0, 0), (1, 0), (1, 2)]));
    }

    #[test]
    fn zero_shapes() {
        assert_eq!(zero_shape(&[(0, 0), (1, 1), (2, 3)]), ZeroShape::OneZero);
        assert_eq!(zero_shape(&[(0, 0), (2, 0), (3, 3)]), ZeroShape::SharedZeroY);
        assert_eq!(zero_shape(&[(0, 1), (1, 0), (2, 2)]), ZeroShape::SplitZeros);
        assert_eq!(zero_shape(&[(0, 0), (0, 1), (2, 2)]), ZeroShape::Other);
    }
}
