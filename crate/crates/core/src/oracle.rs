//! Brute-force references and seeded samplers for the test suites.
//!
//! The dyadic oracles walk the sign tree with plain rational arithmetic and
//! never call into the cut machinery they are used to check.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::series::{coeff, Coeff, Exponent, Nf, SurrealNF, Term};

pub const MAX_ENUM_BIRTHDAY: usize = 16;

#[derive(Clone)]
struct Node {
    value: BigRational,
    lo: Option<BigRational>,
    hi: Option<BigRational>,
}

impl Node {
    fn root() -> Self {
        Node {
            value: BigRational::zero(),
            lo: None,
            hi: None,
        }
    }

    fn child(&self, plus: bool) -> Node {
        let two = BigRational::from_integer(BigInt::from(2));
        if plus {
            let value = match &self.hi {
                None => &self.value + BigRational::one(),
                Some(h) => (&self.value + h) / &two,
            };
            Node {
                value,
                lo: Some(self.value.clone()),
                hi: self.hi.clone(),
            }
        } else {
            let value = match &self.lo {
                None => &self.value - BigRational::one(),
                Some(l) => (&self.value + l) / &two,
            };
            Node {
                value,
                lo: self.lo.clone(),
                hi: Some(self.value.clone()),
            }
        }
    }

    fn dyadic(&self) -> Dyadic {
        Dyadic::from_rational(&self.value).expect("tree nodes are dyadic")
    }
}

fn in_order(node: &Node, depth_left: usize, out: &mut Vec<Dyadic>) {
    if depth_left > 0 {
        in_order(&node.child(false), depth_left - 1, out);
    }
    out.push(node.dyadic());
    if depth_left > 0 {
        in_order(&node.child(true), depth_left - 1, out);
    }
}

/// All dyadics of birthday at most `max_birthday`, left to right in the tree.
pub fn enumerate_dyadics(max_birthday: usize) -> Result<Vec<Dyadic>> {
    if max_birthday > MAX_ENUM_BIRTHDAY {
        return Err(Error::BoundExceeded(format!(
            "enumeration birthday {max_birthday} exceeds {MAX_ENUM_BIRTHDAY}"
        )));
    }
    let mut out = Vec::with_capacity((1 << (max_birthday + 1)) - 1);
    in_order(&Node::root(), max_birthday, &mut out);
    Ok(out)
}

/// Breadth-first search of the tree for the first node strictly between the
/// option sets.
pub fn tree_search_simplest(left: &[Dyadic], right: &[Dyadic], max_depth: usize) -> Result<Dyadic> {
    let lo = left.iter().map(Dyadic::to_rational).max();
    let hi = right.iter().map(Dyadic::to_rational).min();
    let inside = |v: &BigRational| lo.as_ref().is_none_or(|l| l < v) && hi.as_ref().is_none_or(|h| v < h);
    let mut level = vec![Node::root()];
    for depth in 0..=max_depth {
        if let Some(n) = level.iter().find(|n| inside(&n.value)) {
            return Ok(n.dyadic());
        }
        if depth < max_depth {
            level = level.iter().flat_map(|n| [n.child(false), n.child(true)]).collect();
        }
    }
    Err(Error::BoundExceeded(format!("no dyadic inside the cut within depth {max_depth}")))
}

/// The first pair, by increasing birthday, on which `agree` fails.
pub fn first_disagreement(
    max_birthday: usize,
    agree: impl Fn(&Dyadic, &Dyadic) -> bool,
) -> Result<Option<(Dyadic, Dyadic)>> {
    let mut by_birthday: Vec<Vec<Dyadic>> = vec![Vec::new(); max_birthday + 1];
    for d in enumerate_dyadics(max_birthday)? {
        by_birthday[d.birthday()].push(d);
    }
    for total in 0..=2 * max_birthday {
        for ba in 0..=total.min(max_birthday) {
            let bb = total - ba;
            if bb > max_birthday {
                continue;
            }
            for a in &by_birthday[ba] {
                for b in &by_birthday[bb] {
                    if !agree(a, b) {
                        return Ok(Some((a.clone(), b.clone())));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub max_terms: usize,
    pub max_exponent_depth: usize,
    pub coefficient_bound: i64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            max_terms: 4,
            max_exponent_depth: 2,
            coefficient_bound: 9,
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        SamplerConfig {
            seed,
            ..Default::default()
        }
    }
}

/// Deterministic normal forms over the part of the fragment where `exp`,
/// `log` and `∂` are defined: every exponent occurring at any nesting level
/// is a rational or a positive infinite value built the same way.
pub struct Sampler {
    cfg: SamplerConfig,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(cfg: SamplerConfig) -> Self {
        let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Sampler { cfg, rng }
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.cfg
    }

    fn ratio(&mut self, num: i64, den: i64) -> Coeff {
        Coeff::new(BigInt::from(num), BigInt::from(den))
    }

    /// A nonzero rational with bounded numerator and denominator.
    pub fn coefficient(&mut self) -> Coeff {
        let c = self.positive_coefficient();
        if self.rng.gen_bool(0.5) {
            -c
        } else {
            c
        }
    }

    pub fn positive_coefficient(&mut self) -> Coeff {
        let bound = self.cfg.coefficient_bound.max(1);
        let num = self.rng.gen_range(1..=bound);
        let den = self.rng.gen_range(1..=3);
        self.ratio(num, den)
    }

    /// Any rational in `[-3, 3]` with denominator 1, 2 or 4.
    pub fn rational_exponent(&mut self) -> Coeff {
        let den = [1, 2, 4][self.rng.gen_range(0..3)];
        let num = self.rng.gen_range(-3 * den..=3 * den);
        self.ratio(num, den)
    }

    fn positive_rational_exponent(&mut self) -> Coeff {
        let den = [1, 2, 4][self.rng.gen_range(0..3)];
        let num = self.rng.gen_range(1..=3 * den);
        self.ratio(num, den)
    }

    fn negative_rational_exponent(&mut self) -> Coeff {
        -self.positive_rational_exponent()
    }

    fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// An exponent of either sign.
    pub fn exponent(&mut self, depth: usize) -> Nf {
        if depth == 0 || self.coin(0.6) {
            return Nf::from_rational(self.rational_exponent());
        }
        let k = self.rng.gen_range(1..=2);
        let terms: Vec<Term> = (0..k)
            .map(|_| {
                let e = if self.coin(0.5) {
                    Nf::from_rational(self.rational_exponent())
                } else {
                    self.big(depth - 1)
                };
                Term::new(Exponent::from_nf(e), self.coefficient())
            })
            .collect();
        Nf::from_terms(terms)
    }

    /// A positive infinite exponent.
    pub fn big(&mut self, depth: usize) -> Nf {
        let lead = if depth == 0 || self.coin(0.6) {
            Nf::from_rational(self.positive_rational_exponent())
        } else {
            self.big(depth - 1)
        };
        let lead_e = Exponent::from_nf(lead);
        let mut terms = vec![Term::new(lead_e.clone(), self.positive_coefficient())];
        if self.coin(0.5) {
            let e = Exponent::from_nf(Nf::from_rational(self.rational_exponent()));
            if e < lead_e {
                terms.push(Term::new(e, self.coefficient()));
            }
        }
        Nf::from_terms(terms)
    }

    fn terms_with(&mut self, n: usize, mut exponent: impl FnMut(&mut Self) -> Nf) -> Nf {
        let terms: Vec<Term> = (0..n)
            .map(|_| {
                let e = exponent(self);
                Term::new(Exponent::from_nf(e), self.coefficient())
            })
            .collect();
        Nf::from_terms(terms)
    }

    fn term_count(&mut self) -> usize {
        self.rng.gen_range(1..=self.cfg.max_terms.max(1))
    }

    /// A nonzero value with infinite, constant and infinitesimal parts all possible.
    pub fn fragment(&mut self) -> Nf {
        let depth = self.cfg.max_exponent_depth;
        loop {
            let n = self.term_count();
            let mut x = self.terms_with(n, |s| s.exponent(depth));
            if self.coin(0.3) {
                x = &x + &Nf::from_rational(self.coefficient());
            }
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// A nonzero value without constant term whose infinitesimal exponents lie in `[-3, -1/4]`.
    pub fn constant_free(&mut self) -> Nf {
        let depth = self.cfg.max_exponent_depth;
        loop {
            let n_inf = self.rng.gen_range(0..=2usize.min(self.cfg.max_terms));
            let n_small = self.rng.gen_range(0..=2usize.min(self.cfg.max_terms));
            let p = self.terms_with(n_inf, |s| {
                if depth == 0 || s.coin(0.6) {
                    Nf::from_rational(s.positive_rational_exponent())
                } else {
                    s.big(depth - 1)
                }
            });
            let e = self.terms_with(n_small, |s| Nf::from_rational(s.negative_rational_exponent()));
            let x = &p + &e;
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// A nonzero infinitesimal.
    pub fn infinitesimal(&mut self) -> Nf {
        let depth = self.cfg.max_exponent_depth;
        let n = self.term_count();
        self.terms_with(n, |s| {
            if depth == 0 || s.coin(0.6) {
                Nf::from_rational(s.negative_rational_exponent())
            } else {
                -s.big(depth - 1)
            }
        })
    }

    /// A value larger than every rational.
    pub fn positive_infinite(&mut self) -> Nf {
        let depth = self.cfg.max_exponent_depth;
        let lead = self.big(depth);
        let lead_e = Exponent::from_nf(lead);
        let rest = self.fragment();
        let mut terms = vec![Term::new(lead_e.clone(), self.positive_coefficient())];
        terms.extend(rest.terms().iter().filter(|t| t.exponent() < &lead_e).cloned());
        Nf::from_terms(terms)
    }

    /// A nonzero value not asymptotic to a constant.
    pub fn non_unit(&mut self) -> Nf {
        loop {
            let x = self.fragment();
            if !x.leading().unwrap().exponent().is_zero() {
                return x;
            }
        }
    }

    pub fn rational(&mut self) -> Coeff {
        if self.coin(0.1) {
            return coeff(0);
        }
        self.coefficient()
    }

    /// A dyadic with birthday at most `max_birthday`.
    pub fn dyadic(&mut self, max_birthday: usize) -> Dyadic {
        let len = self.rng.gen_range(0..=max_birthday);
        let mut node = Node::root();
        for _ in 0..len {
            let plus = self.coin(0.5);
            node = node.child(plus);
        }
        node.dyadic()
    }
}

/// One value from a fresh sampler for `config`.
pub fn sample_fragment(config: &SamplerConfig) -> SurrealNF {
    SurrealNF::finite(Sampler::new(config.clone()).fragment())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::nf_json;

    fn d(n: i64, k: u32) -> Dyadic {
        Dyadic::new(n, k)
    }

    #[test]
    fn enumeration_levels() {
        assert_eq!(enumerate_dyadics(1).unwrap(), vec![d(-1, 0), d(0, 0), d(1, 0)]);
        assert_eq!(
            enumerate_dyadics(2).unwrap(),
            vec![d(-2, 0), d(-1, 0), d(-1, 1), d(0, 0), d(1, 1), d(1, 0), d(2, 0)]
        );
        let six = enumerate_dyadics(6).unwrap();
        assert_eq!(six.len(), 127);
        assert!(six.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(enumerate_dyadics(17), Err(Error::BoundExceeded(_))));
    }

    #[test]
    fn breadth_first_simplest() {
        assert_eq!(tree_search_simplest(&[d(0, 0)], &[d(1, 0)], 8).unwrap(), d(1, 1));
        assert_eq!(tree_search_simplest(&[d(-1, 0)], &[d(1, 0)], 8).unwrap(), d(0, 0));
        assert_eq!(tree_search_simplest(&[d(3, 0)], &[], 8).unwrap(), d(4, 0));
        assert!(tree_search_simplest(&[d(0, 0)], &[d(1, 9)], 4).is_err());
    }

    #[test]
    fn sampler_is_deterministic() {
        let cfg = SamplerConfig::with_seed(7);
        let a: Vec<String> = {
            let mut s = Sampler::new(cfg.clone());
            (0..20).map(|_| nf_json(&s.fragment()).to_string()).collect()
        };
        let mut s = Sampler::new(cfg);
        let b: Vec<String> = (0..20).map(|_| nf_json(&s.fragment()).to_string()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn sampler_covers_all_parts() {
        let mut s = Sampler::new(SamplerConfig::with_seed(3));
        let (mut inf, mut cst, mut small) = (0, 0, 0);
        for _ in 0..1000 {
            let x = s.fragment();
            inf += x.terms().iter().any(|t| t.exponent().signum() > 0) as usize;
            cst += x.terms().iter().any(|t| t.exponent().is_zero()) as usize;
            small += x.terms().iter().any(|t| t.exponent().signum() < 0) as usize;
        }
        assert!(inf > 0 && cst > 0 && small > 0, "{inf} {cst} {small}");
    }

    #[test]
    fn specialized_samplers_respect_their_shape() {
        let mut s = Sampler::new(SamplerConfig::with_seed(11));
        for _ in 0..200 {
            assert!(s.infinitesimal().is_infinitesimal());
            assert!(s.positive_infinite().is_positive_infinite());
            assert!(s.constant_free().constant_term().is_zero());
            assert!(s.dyadic(8).birthday() <= 8);
        }
    }
}
