//! Conway cuts `{L | R}` over dyadic options and the genetic field
//! operations defined by recursion on them.

use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, RwLock};

use crate::dyadic::{Dyadic, Sign, TreeCursor};
use crate::error::{Error, Result};

/// A cut with finite dyadic option sets, every left option below every right one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutExpr {
    left: Vec<Dyadic>,
    right: Vec<Dyadic>,
}

impl CutExpr {
    pub fn new(left: impl IntoIterator<Item = Dyadic>, right: impl IntoIterator<Item = Dyadic>) -> Result<Self> {
        let mut left: Vec<Dyadic> = left.into_iter().collect();
        let mut right: Vec<Dyadic> = right.into_iter().collect();
        left.sort();
        left.dedup();
        right.sort();
        right.dedup();
        if let (Some(l), Some(r)) = (left.last(), right.first()) {
            if l >= r {
                return Err(Error::CutViolation {
                    left: l.to_string(),
                    right: r.to_string(),
                });
            }
        }
        Ok(CutExpr { left, right })
    }

    pub fn empty() -> Self {
        CutExpr {
            left: Vec::new(),
            right: Vec::new(),
        }
    }

    pub fn left(&self) -> &[Dyadic] {
        &self.left
    }

    pub fn right(&self) -> &[Dyadic] {
        &self.right
    }

    pub fn max_left(&self) -> Option<&Dyadic> {
        self.left.last()
    }

    pub fn min_right(&self) -> Option<&Dyadic> {
        self.right.first()
    }

    /// Whether `x` lies strictly between the two option sets.
    pub fn contains(&self, x: &Dyadic) -> bool {
        self.max_left().is_none_or(|l| l < x) && self.min_right().is_none_or(|r| x < r)
    }
}

impl fmt::Display for CutExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Dyadic]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        match (self.left.is_empty(), self.right.is_empty()) {
            (true, true) => write!(f, "{{|}}"),
            (false, true) => write!(f, "{{{} |}}", join(&self.left)),
            (true, false) => write!(f, "{{| {}}}", join(&self.right)),
            (false, false) => write!(f, "{{{} | {}}}", join(&self.left), join(&self.right)),
        }
    }
}

/// Walks down from 0: right while the node is at or below some left option,
/// left while it is at or above some right option.
pub fn simplest_between(c: &CutExpr) -> Dyadic {
    let mut cursor = TreeCursor::root();
    loop {
        if c.max_left().is_some_and(|l| &cursor.value <= l) {
            cursor.step(Sign::Plus);
        } else if c.min_right().is_some_and(|r| &cursor.value >= r) {
            cursor.step(Sign::Minus);
        } else {
            return cursor.value;
        }
    }
}

/// `{L_a | R_a}`: the tree ancestors of `a`, split by which side of `a` they fall on.
pub fn canonical_cut(a: &Dyadic) -> CutExpr {
    let mut cursor = TreeCursor::root();
    let mut left = Vec::new();
    let mut right = Vec::new();
    while cursor.value != *a {
        let sign = if *a > cursor.value {
            left.push(cursor.value.clone());
            Sign::Plus
        } else {
            right.push(cursor.value.clone());
            Sign::Minus
        };
        cursor.step(sign);
    }
    left.sort();
    right.sort();
    CutExpr { left, right }
}

/// Gonshor cofinality: every `(a, b)` in `coarse` is refined by some `(a', b')`
/// in `fine` with `a <= a' < b' <= b`. An empty side acts as an infinite end.
pub fn is_cofinal(fine: &CutExpr, coarse: &CutExpr) -> bool {
    let ends = |xs: &[Dyadic]| -> Vec<Option<Dyadic>> {
        if xs.is_empty() {
            vec![None]
        } else {
            xs.iter().cloned().map(Some).collect()
        }
    };
    let fine_left = ends(&fine.left);
    let fine_right = ends(&fine.right);
    let le_lower = |a: &Option<Dyadic>, a2: &Option<Dyadic>| match (a, a2) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x <= y,
    };
    let le_upper = |b2: &Option<Dyadic>, b: &Option<Dyadic>| match (b2, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    };
    let lt = |a: &Option<Dyadic>, b: &Option<Dyadic>| match (a, b) {
        (Some(x), Some(y)) => x < y,
        _ => true,
    };
    ends(&coarse.left).iter().all(|a| {
        ends(&coarse.right).iter().all(|b| {
            fine_left.iter().any(|a2| {
                le_lower(a, a2) && fine_right.iter().any(|b2| lt(a2, b2) && le_upper(b2, b))
            })
        })
    })
}

/// Memoized evaluator for the cut-recursive operations.
///
/// Entries are write-once: a key is only ever filled with the value the
/// recursion determines, so racing fills agree.
#[derive(Default)]
pub struct GeneticEngine {
    leq: RwLock<HashMap<(Dyadic, Dyadic), bool>>,
    add: RwLock<HashMap<(Dyadic, Dyadic), Dyadic>>,
    mul: RwLock<HashMap<(Dyadic, Dyadic), Dyadic>>,
    neg: RwLock<HashMap<Dyadic, Dyadic>>,
    cuts: RwLock<HashMap<Dyadic, CutExpr>>,
    capacity: Option<usize>,
}

impl GeneticEngine {
    pub fn new() -> Self {
        Self::default()
    }

    /// Caps each memo table; once full, new results are computed but not stored.
    pub fn with_capacity_limit(limit: usize) -> Self {
        GeneticEngine {
            capacity: Some(limit),
            ..Self::default()
        }
    }

    pub fn cached_entries(&self) -> usize {
        self.leq.read().unwrap().len() + self.add.read().unwrap().len() + self.mul.read().unwrap().len()
    }

    fn lookup<K: std::hash::Hash + Eq, V: Clone>(table: &RwLock<HashMap<K, V>>, key: &K) -> Option<V> {
        table.read().unwrap().get(key).cloned()
    }

    fn store<K: std::hash::Hash + Eq, V>(&self, table: &RwLock<HashMap<K, V>>, key: K, value: V) {
        let mut guard = table.write().unwrap();
        if self.capacity.is_none_or(|cap| guard.len() < cap) {
            guard.entry(key).or_insert(value);
        }
    }

    fn cut(&self, a: &Dyadic) -> CutExpr {
        if let Some(c) = Self::lookup(&self.cuts, a) {
            return c;
        }
        let c = canonical_cut(a);
        self.store(&self.cuts, a.clone(), c.clone());
        c
    }

    /// `a <= b` iff no left option of `a` is `>= b` and no right option of `b` is `<= a`.
    pub fn leq(&self, a: &Dyadic, b: &Dyadic) -> bool {
        let key = (a.clone(), b.clone());
        if let Some(v) = Self::lookup(&self.leq, &key) {
            return v;
        }
        let ca = self.cut(a);
        let cb = self.cut(b);
        let result = !ca.left.iter().any(|al| self.leq(b, al)) && !cb.right.iter().any(|br| self.leq(br, a));
        self.store(&self.leq, key, result);
        result
    }

    pub fn neg(&self, a: &Dyadic) -> Dyadic {
        if let Some(v) = Self::lookup(&self.neg, a) {
            return v;
        }
        let c = self.cut(a);
        let left = c.right.iter().map(|r| self.neg(r)).collect();
        let right = c.left.iter().map(|l| self.neg(l)).collect();
        let result = self.resolve(left, right);
        self.store(&self.neg, a.clone(), result.clone());
        result
    }

    pub fn add(&self, a: &Dyadic, b: &Dyadic) -> Dyadic {
        // Addition is commutative; normalize the key to share entries.
        let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        if let Some(v) = Self::lookup(&self.add, &key) {
            return v;
        }
        let ca = self.cut(a);
        let cb = self.cut(b);
        let mut left = Vec::new();
        let mut right = Vec::new();
        for al in &ca.left {
            left.push(self.add(al, b));
        }
        for bl in &cb.left {
            left.push(self.add(a, bl));
        }
        for ar in &ca.right {
            right.push(self.add(ar, b));
        }
        for br in &cb.right {
            right.push(self.add(a, br));
        }
        let result = self.resolve(left, right);
        self.store(&self.add, key, result.clone());
        result
    }

    fn sub(&self, a: &Dyadic, b: &Dyadic) -> Dyadic {
        self.add(a, &self.neg(b))
    }

    // x' y + x y' - x' y'
    fn mul_option(&self, x: &Dyadic, y: &Dyadic, xo: &Dyadic, yo: &Dyadic) -> Dyadic {
        let first = self.mul(xo, y);
        let second = self.mul(x, yo);
        let third = self.mul(xo, yo);
        self.sub(&self.add(&first, &second), &third)
    }

    pub fn mul(&self, a: &Dyadic, b: &Dyadic) -> Dyadic {
        let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        if let Some(v) = Self::lookup(&self.mul, &key) {
            return v;
        }
        let ca = self.cut(a);
        let cb = self.cut(b);
        let mut left = Vec::new();
        let mut right = Vec::new();
        for al in &ca.left {
            for bl in &cb.left {
                left.push(self.mul_option(a, b, al, bl));
            }
            for br in &cb.right {
                right.push(self.mul_option(a, b, al, br));
            }
        }
        for ar in &ca.right {
            for br in &cb.right {
                left.push(self.mul_option(a, b, ar, br));
            }
            for bl in &cb.left {
                right.push(self.mul_option(a, b, ar, bl));
            }
        }
        let result = self.resolve(left, right);
        self.store(&self.mul, key, result.clone());
        result
    }

    fn resolve(&self, left: Vec<Dyadic>, right: Vec<Dyadic>) -> Dyadic {
        let cut = CutExpr::new(left, right).expect("genetic options always form a valid cut");
        simplest_between(&cut)
    }
}

static DEFAULT_ENGINE: LazyLock<GeneticEngine> = LazyLock::new(GeneticEngine::new);

pub fn genetic_leq(a: &Dyadic, b: &Dyadic) -> bool {
    DEFAULT_ENGINE.leq(a, b)
}

pub fn genetic_add(a: &Dyadic, b: &Dyadic) -> Dyadic {
    DEFAULT_ENGINE.add(a, b)
}

pub fn genetic_mul(a: &Dyadic, b: &Dyadic) -> Dyadic {
    DEFAULT_ENGINE.mul(a, b)
}

pub fn genetic_neg(a: &Dyadic) -> Dyadic {
    DEFAULT_ENGINE.neg(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    fn cut(l: &[&str], r: &[&str]) -> CutExpr {
        CutExpr::new(l.iter().map(|s| d(s)), r.iter().map(|s| d(s))).unwrap()
    }

    #[test]
    fn simplest_between_examples() {
        assert_eq!(simplest_between(&cut(&["-1"], &["1"])), d("0"));
        assert_eq!(simplest_between(&cut(&["-2"], &["1/2", "1", "2"])), d("0"));
        assert_eq!(simplest_between(&cut(&["0"], &["1"])), d("1/2"));
        assert_eq!(simplest_between(&cut(&["1"], &[])), d("2"));
        assert_eq!(simplest_between(&cut(&[], &[])), d("0"));
        assert_eq!(simplest_between(&cut(&[], &["-3"])), d("-4"));
        assert_eq!(simplest_between(&cut(&["1/4"], &["3/8"])), d("5/16"));
    }

    #[test]
    fn malformed_cut_is_rejected() {
        let err = CutExpr::new([d("1")], [d("1")]).unwrap_err();
        assert!(matches!(err, Error::CutViolation { .. }));
        assert!(CutExpr::new([d("2")], [d("1/2")]).is_err());
    }

    #[test]
    fn canonical_cut_examples() {
        assert_eq!(canonical_cut(&d("0")), CutExpr::empty());
        assert_eq!(canonical_cut(&d("1/2")), cut(&["0"], &["1"]));
        assert_eq!(canonical_cut(&d("2")), cut(&["0", "1"], &[]));
        assert_eq!(canonical_cut(&d("-3/2")), cut(&["-2"], &["-1", "0"]));
    }

    #[test]
    fn canonical_cut_resolves_to_itself() {
        for s in ["0", "1", "-1", "1/2", "3/4", "-5/8", "7", "13/16"] {
            assert_eq!(simplest_between(&canonical_cut(&d(s))), d(s));
        }
    }

    #[test]
    fn genetic_examples() {
        assert!(genetic_leq(&d("0"), &d("0")));
        assert!(genetic_leq(&d("-1/2"), &d("1/2")));
        assert!(!genetic_leq(&d("1/2"), &d("-1/2")));
        assert_eq!(genetic_add(&d("1/2"), &d("1/2")), d("1"));
        assert_eq!(genetic_mul(&d("1/2"), &d("2")), d("1"));
        assert_eq!(genetic_mul(&d("-3/4"), &d("3/2")), d("-9/8"));
        assert_eq!(genetic_neg(&d("0")), d("0"));
        assert_eq!(genetic_neg(&d("1/2")), d("-1/2"));
    }

    #[test]
    fn cofinality_examples() {
        assert!(is_cofinal(&cut(&["0"], &["1"]), &cut(&["-1"], &["2"])));
        assert!(!is_cofinal(&cut(&["-1"], &["1"]), &cut(&["0"], &["1"])));
        assert!(is_cofinal(&cut(&["3"], &[]), &cut(&["1"], &[])));
        assert!(is_cofinal(&cut(&["3"], &["4"]), &cut(&["1"], &[])));
        assert!(!is_cofinal(&cut(&["3"], &["4"]), &cut(&["1"], &["2"])));
    }

    #[test]
    fn capped_engine_still_computes() {
        let engine = GeneticEngine::with_capacity_limit(4);
        assert_eq!(engine.mul(&d("3/2"), &d("-3/2")), d("-9/4"));
        assert!(engine.cached_entries() <= 12);
    }
}
