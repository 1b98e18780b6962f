//! Finite Conway normal forms `Σ ω^{a_i}·r_i`.
//!
//! Exponents are themselves finite normal forms, so every value here has
//! hereditarily finite support and a decidable total order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::dyadic::Dyadic;
use crate::ordinal::{OrdExponent, OrdinalCnf};

/// Exact rational coefficient.
pub type Coeff = BigRational;

pub fn coeff(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Coeff {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// The exponent of a monomial. `Eps0` stands for ε₀, the fixed point of
/// `a ↦ ω^a`; it is kept as an atom because `ω^ε₀ = ε₀` has no finite
/// nesting otherwise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Exponent {
    Eps0,
    Nf(Nf),
}

impl Exponent {
    pub fn zero() -> Self {
        Exponent::Nf(Nf::zero())
    }

    pub fn int(n: i64) -> Self {
        Exponent::Nf(Nf::from_int(n))
    }

    pub fn from_nf(a: Nf) -> Self {
        if a.is_eps0() {
            Exponent::Eps0
        } else {
            Exponent::Nf(a)
        }
    }

    pub fn to_nf(&self) -> Nf {
        match self {
            Exponent::Eps0 => Nf::eps0(),
            Exponent::Nf(a) => a.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Exponent::Nf(a) if a.is_zero())
    }

    pub fn signum(&self) -> i32 {
        match self {
            Exponent::Eps0 => 1,
            Exponent::Nf(a) => a.signum(),
        }
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Nf(a), b) if a.is_zero() => b.clone(),
            (a, Exponent::Nf(b)) if b.is_zero() => a.clone(),
            _ => Exponent::from_nf(&self.to_nf() + &other.to_nf()),
        }
    }

    pub fn neg(&self) -> Exponent {
        Exponent::from_nf(-&self.to_nf())
    }

    pub fn sub(&self, other: &Exponent) -> Exponent {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Coeff) -> Exponent {
        Exponent::from_nf(self.to_nf().scale(c))
    }

    pub fn contains_eps0(&self) -> bool {
        match self {
            Exponent::Eps0 => true,
            Exponent::Nf(a) => a.contains_eps0(),
        }
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Exponent::Eps0, Exponent::Eps0) => Ordering::Equal,
            (Exponent::Eps0, Exponent::Nf(b)) => Nf::eps0().cmp(b),
            (Exponent::Nf(a), Exponent::Eps0) => a.cmp(&Nf::eps0()),
            (Exponent::Nf(a), Exponent::Nf(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Eps0 => f.write_str("eps0"),
            Exponent::Nf(a) => write!(f, "{a}"),
        }
    }
}

/// One term `ω^exponent · coefficient`, coefficient nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    exponent: Exponent,
    coefficient: Coeff,
}

impl Term {
    pub fn new(exponent: Exponent, coefficient: Coeff) -> Self {
        debug_assert!(!coefficient.is_zero(), "terms carry nonzero coefficients");
        Term {
            exponent,
            coefficient,
        }
    }

    pub fn exponent(&self) -> &Exponent {
        &self.exponent
    }

    pub fn coefficient(&self) -> &Coeff {
        &self.coefficient
    }

    pub fn to_nf(&self) -> Nf {
        Nf::monomial(self.exponent.clone(), self.coefficient.clone())
    }

    pub fn mul(&self, other: &Term) -> Term {
        Term::new(
            self.exponent.add(&other.exponent),
            &self.coefficient * &other.coefficient,
        )
    }
}

/// A finite normal form. Terms are kept in strictly decreasing exponent
/// order, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Nf {
    terms: Arc<[Term]>,
}

impl Nf {
    pub fn zero() -> Self {
        Nf::default()
    }

    pub fn one() -> Self {
        Nf::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Nf::from_rational(coeff(n))
    }

    pub fn from_rational(r: Coeff) -> Self {
        Nf::monomial(Exponent::zero(), r)
    }

    pub fn from_dyadic(d: &Dyadic) -> Self {
        Nf::from_rational(d.to_rational())
    }

    /// `ω^exponent · c`; zero when `c = 0`.
    pub fn monomial(exponent: Exponent, c: Coeff) -> Self {
        if c.is_zero() {
            return Nf::zero();
        }
        Nf {
            terms: Arc::from(vec![Term::new(exponent, c)]),
        }
    }

    /// The ω-map: `ω^a` with coefficient 1.
    pub fn omega_pow(a: Nf) -> Self {
        Nf::monomial(Exponent::from_nf(a), coeff(1))
    }

    pub fn omega() -> Self {
        Nf::omega_pow(Nf::one())
    }

    pub fn eps0() -> Self {
        Nf {
            terms: Arc::from(vec![Term::new(Exponent::Eps0, coeff(1))]),
        }
    }

    /// Collects terms in any order, merging equal exponents.
    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut acc: BTreeMap<Exponent, Coeff> = BTreeMap::new();
        for t in terms {
            let entry = acc.entry(t.exponent).or_insert_with(Coeff::zero);
            *entry += t.coefficient;
        }
        Nf::from_sorted_map(acc)
    }

    fn from_sorted_map(acc: BTreeMap<Exponent, Coeff>) -> Self {
        let terms: Vec<Term> = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| Term::new(e, c))
            .collect();
        Nf {
            terms: Arc::from(terms),
        }
    }

    /// Trusts the caller that `terms` is strictly decreasing with nonzero coefficients.
    pub(crate) fn from_sorted_unchecked(terms: Vec<Term>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].exponent > w[1].exponent));
        Nf {
            terms: Arc::from(terms),
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn signum(&self) -> i32 {
        match self.leading() {
            None => 0,
            Some(t) if t.coefficient.is_positive() => 1,
            Some(_) => -1,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(&*self.terms, [t] if t.exponent.is_zero() && t.coefficient.is_one())
    }

    pub fn is_eps0(&self) -> bool {
        matches!(&*self.terms, [t] if t.exponent == Exponent::Eps0 && t.coefficient.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// The value as a rational, if it has no infinite or infinitesimal part.
    pub fn as_rational(&self) -> Option<Coeff> {
        match &*self.terms {
            [] => Some(Coeff::zero()),
            [t] if t.exponent.is_zero() => Some(t.coefficient.clone()),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    pub fn constant_term(&self) -> Coeff {
        self.terms
            .iter()
            .find(|t| t.exponent.is_zero())
            .map(|t| t.coefficient.clone())
            .unwrap_or_else(Coeff::zero)
    }

    pub fn contains_eps0(&self) -> bool {
        self.terms.iter().any(|t| t.exponent.contains_eps0())
    }

    /// Positive and larger than every rational.
    pub fn is_positive_infinite(&self) -> bool {
        self.leading()
            .is_some_and(|t| t.exponent.signum() > 0 && t.coefficient.is_positive())
    }

    pub fn is_infinitesimal(&self) -> bool {
        self.leading().is_none_or(|t| t.exponent.signum() < 0)
    }

    pub fn scale(&self, c: &Coeff) -> Nf {
        if c.is_zero() {
            return Nf::zero();
        }
        Nf::from_sorted_unchecked(
            self.terms
                .iter()
                .map(|t| Term::new(t.exponent.clone(), &t.coefficient * c))
                .collect(),
        )
    }

    /// Multiplies by the monomial `ω^e · c`; exponent order is preserved.
    pub fn mul_monomial(&self, e: &Exponent, c: &Coeff) -> Nf {
        if c.is_zero() {
            return Nf::zero();
        }
        Nf::from_sorted_unchecked(
            self.terms
                .iter()
                .map(|t| Term::new(t.exponent.add(e), &t.coefficient * c))
                .collect(),
        )
    }

    /// Terms with exponent strictly above `floor`.
    pub fn above(&self, floor: &Exponent) -> Nf {
        Nf::from_sorted_unchecked(self.terms.iter().filter(|t| &t.exponent > floor).cloned().collect())
    }

    /// Embeds an ordinal; its Cantor normal form becomes the Conway normal form.
    pub fn from_ordinal(a: &OrdinalCnf) -> Nf {
        Nf::from_sorted_unchecked(
            a.terms()
                .iter()
                .map(|t| {
                    let e = match &t.exponent {
                        OrdExponent::Eps0 => Exponent::Eps0,
                        OrdExponent::Cnf(e) => Exponent::from_nf(Nf::from_ordinal(e)),
                    };
                    Term::new(e, BigRational::from_integer(BigInt::from(t.coefficient.clone())))
                })
                .collect(),
        )
    }
}

pub(crate) fn merge_add(a: &[Term], b: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].exponent.cmp(&b[j].exponent) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(b[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                let c = &a[i].coefficient + &b[j].coefficient;
                if !c.is_zero() {
                    out.push(Term::new(a[i].exponent.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Convolution of two decreasing term lists, keeping only exponents above `floor`.
pub(crate) fn convolve(a: &[Term], b: &[Term], floor: Option<&Exponent>) -> Vec<Term> {
    let mut acc: BTreeMap<Exponent, Coeff> = BTreeMap::new();
    for x in a {
        for y in b {
            let e = x.exponent.add(&y.exponent);
            if floor.is_some_and(|f| &e <= f) {
                // b is decreasing, so every later y is below the floor too.
                break;
            }
            let entry = acc.entry(e).or_insert_with(Coeff::zero);
            *entry += &x.coefficient * &y.coefficient;
        }
    }
    Nf::from_sorted_map(acc).terms.to_vec()
}

impl Ord for Nf {
    fn cmp(&self, other: &Self) -> Ordering {
        // The first place the two expansions differ decides the sign of the difference.
        for i in 0.. {
            match (self.terms.get(i), other.terms.get(i)) {
                (None, None) => return Ordering::Equal,
                (Some(x), None) => return sign_order(&x.coefficient),
                (None, Some(y)) => return sign_order(&y.coefficient).reverse(),
                (Some(x), Some(y)) => match x.exponent.cmp(&y.exponent) {
                    Ordering::Greater => return sign_order(&x.coefficient),
                    Ordering::Less => return sign_order(&y.coefficient).reverse(),
                    Ordering::Equal => match x.coefficient.cmp(&y.coefficient) {
                        Ordering::Equal => continue,
                        other => return other,
                    },
                },
            }
        }
        unreachable!()
    }
}

fn sign_order(c: &Coeff) -> Ordering {
    if c.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

impl PartialOrd for Nf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Nf {
    type Output = Nf;
    fn add(self, rhs: &Nf) -> Nf {
        Nf::from_sorted_unchecked(merge_add(&self.terms, &rhs.terms))
    }
}

impl Neg for &Nf {
    type Output = Nf;
    fn neg(self) -> Nf {
        self.scale(&coeff(-1))
    }
}

impl Sub for &Nf {
    type Output = Nf;
    fn sub(self, rhs: &Nf) -> Nf {
        self + &(-rhs)
    }
}

impl Mul for &Nf {
    type Output = Nf;
    fn mul(self, rhs: &Nf) -> Nf {
        Nf::from_sorted_unchecked(convolve(&self.terms, &rhs.terms, None))
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Nf {
            type Output = Nf;
            fn $m(self, rhs: Nf) -> Nf {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Nf {
    type Output = Nf;
    fn neg(self) -> Nf {
        -&self
    }
}

impl From<i64> for Nf {
    fn from(n: i64) -> Nf {
        Nf::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w() -> Nf {
        Nf::omega()
    }

    fn wpow(n: i64) -> Nf {
        Nf::omega_pow(Nf::from_int(n))
    }

    #[test]
    fn omega_times_inverse_is_one() {
        assert_eq!(&w() * &wpow(-1), Nf::one());
    }

    #[test]
    fn negative_powers_multiply() {
        for n in 0..=10 {
            for m in 0..=10 {
                assert_eq!(&wpow(-n) * &wpow(-m), wpow(-(n + m)));
            }
        }
    }

    #[test]
    fn order_examples() {
        assert!(w() > &w() - &Nf::one());
        assert!(wpow(-1) > Nf::zero());
        assert!(wpow(-1) < Nf::from_rational(ratio(1, 1000)));
        assert!(-&w() < Nf::from_int(-1_000_000));
        assert!(Nf::eps0() > Nf::omega_pow(Nf::omega_pow(w())));
        assert!(Nf::eps0() < &Nf::eps0() + &Nf::one());
    }

    #[test]
    fn eps0_is_a_fixed_point() {
        assert_eq!(Nf::omega_pow(Nf::eps0()), Nf::eps0());
        let e = &Nf::eps0() * &w();
        assert_eq!(e.leading().unwrap().exponent(), &Exponent::from_nf(&Nf::eps0() + &Nf::one()));
    }

    #[test]
    fn cancellation_drops_terms() {
        let x = &(&w() + &Nf::from_int(3)) - &w();
        assert_eq!(x, Nf::from_int(3));
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn convolution_respects_floor() {
        let x = &(&w() + &Nf::one()) + &wpow(-1);
        let sq = convolve(x.terms(), x.terms(), Some(&Exponent::int(0)));
        assert_eq!(Nf::from_sorted_unchecked(sq), &wpow(2) + &w().scale(&coeff(2)));
    }
}
