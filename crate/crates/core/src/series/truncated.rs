//! Series known exactly above an exponent floor, `Σ terms + O(ω^floor)`.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::nf::{coeff, convolve, merge_add, Coeff, Exponent, Nf, Term};
use crate::error::{Error, Result};

/// A materialized prefix of a value. Every term with exponent strictly above
/// `floor` is known exactly; nothing is known at or below it. A missing floor
/// means the value is exact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Truncated {
    terms: Vec<Term>,
    floor: Option<Exponent>,
}

/// The larger of two floors, where `None` is minus infinity.
pub fn max_floor(a: Option<&Exponent>, b: Option<&Exponent>) -> Option<Exponent> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => Some(if x >= y { x.clone() } else { y.clone() }),
    }
}

fn prune(mut terms: Vec<Term>, floor: Option<&Exponent>) -> Vec<Term> {
    if let Some(f) = floor {
        let keep = terms.partition_point(|t| t.exponent() > f);
        terms.truncate(keep);
    }
    terms
}

impl Truncated {
    pub fn exact(nf: Nf) -> Self {
        Truncated {
            terms: nf.terms().to_vec(),
            floor: None,
        }
    }

    /// `terms` must be strictly decreasing; terms at or below the floor are dropped.
    pub fn new(terms: Vec<Term>, floor: Option<Exponent>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].exponent() > w[1].exponent()));
        let terms = prune(terms, floor.as_ref());
        Truncated { terms, floor }
    }

    pub fn zero() -> Self {
        Truncated::exact(Nf::zero())
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn floor(&self) -> Option<&Exponent> {
        self.floor.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.is_exact() && self.terms.is_empty()
    }

    pub fn known(&self) -> Nf {
        Nf::from_sorted_unchecked(self.terms.clone())
    }

    pub fn into_exact(self) -> Option<Nf> {
        self.is_exact().then(|| Nf::from_sorted_unchecked(self.terms))
    }

    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    /// An exponent bounding the whole value from above: the leading known
    /// exponent, else the floor. `None` only for an exact zero.
    pub fn upper_exponent(&self) -> Option<&Exponent> {
        self.terms.first().map(|t| t.exponent()).or(self.floor.as_ref())
    }

    pub fn add(&self, other: &Truncated) -> Truncated {
        let floor = max_floor(self.floor(), other.floor());
        Truncated::new(merge_add(&self.terms, &other.terms), floor)
    }

    pub fn neg(&self) -> Truncated {
        self.scale(&coeff(-1))
    }

    pub fn sub(&self, other: &Truncated) -> Truncated {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Coeff) -> Truncated {
        if c.is_zero() {
            return Truncated::zero();
        }
        Truncated {
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(t.exponent().clone(), t.coefficient() * c))
                .collect(),
            floor: self.floor.clone(),
        }
    }

    pub fn mul_monomial(&self, e: &Exponent, c: &Coeff) -> Truncated {
        if c.is_zero() {
            return Truncated::zero();
        }
        Truncated {
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(t.exponent().add(e), t.coefficient() * c))
                .collect(),
            floor: self.floor.as_ref().map(|f| f.add(e)),
        }
    }

    pub fn mul(&self, other: &Truncated) -> Truncated {
        if self.is_exact_zero() || other.is_exact_zero() {
            return Truncated::zero();
        }
        // (A + O(a))(B + O(b)) = AB + O(max(a + v(B), b + v(A)))
        let from_self = self.floor().map(|f| f.add(other.upper_exponent().unwrap()));
        let from_other = other.floor().map(|f| f.add(self.upper_exponent().unwrap()));
        let floor = max_floor(from_self.as_ref(), from_other.as_ref());
        Truncated {
            terms: convolve(&self.terms, &other.terms, floor.as_ref()),
            floor,
        }
    }

    /// Lowers precision to `floor` if that is coarser than the current one.
    pub fn coarsen(&self, floor: &Exponent) -> Truncated {
        let f = max_floor(self.floor(), Some(floor));
        Truncated::new(self.terms.clone(), f)
    }

    /// Sign of the value if decided by the known terms.
    pub fn signum(&self) -> Option<i32> {
        match self.terms.first() {
            Some(t) => Some(if t.coefficient().is_positive() { 1 } else { -1 }),
            None if self.is_exact() => Some(0),
            None => None,
        }
    }

    /// Evaluates `Σ_{k≤order} c_k ε^k` with the `O(ε^{order+1})` remainder
    /// folded into the floor. `eps` must be infinitesimal.
    ///
    /// The functions expanded this way all have bounded derivative near 0, so an
    /// unknown tail of `eps` below its floor perturbs the result only below that
    /// same floor.
    pub fn power_series(
        eps: &Truncated,
        order: usize,
        coeffs: impl Fn(usize) -> Coeff,
    ) -> Result<Truncated> {
        let c0 = Truncated::exact(Nf::from_rational(coeffs(0)));
        let Some(ub) = eps.upper_exponent().cloned() else {
            return Ok(c0);
        };
        if ub.signum() >= 0 {
            return Err(Error::NotInfinitesimal(super::render::render_terms(eps.terms(), eps.floor.is_some())));
        }
        let remainder = ub.scale(&coeff(order as i64 + 1));
        let floor = max_floor(eps.floor(), Some(&remainder)).unwrap();
        let mut sum = c0.terms;
        let mut power = vec![Term::new(Exponent::zero(), Coeff::one())];
        for k in 1..=order {
            power = convolve(&power, &eps.terms, Some(&floor));
            if power.is_empty() {
                break;
            }
            let c = coeffs(k);
            if !c.is_zero() {
                let scaled: Vec<Term> = power
                    .iter()
                    .map(|t| Term::new(t.exponent().clone(), t.coefficient() * &c))
                    .collect();
                sum = merge_add(&sum, &scaled);
            }
        }
        Ok(Truncated::new(sum, Some(floor)))
    }

    /// Compares two prefixes on the part both know.
    pub fn compare(&self, other: &Truncated) -> Option<Ordering> {
        match self.sub(other).signum()? {
            1 => Some(Ordering::Greater),
            -1 => Some(Ordering::Less),
            _ => Some(Ordering::Equal),
        }
    }
}
