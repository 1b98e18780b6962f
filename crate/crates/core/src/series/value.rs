//! `SurrealNF`: a normal form that is either a finite term list or a
//! demand-driven stream re-evaluable at any depth.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use super::nf::{coeff, Coeff, Nf, Term};
use super::render::{render_text, terms_json};
use super::truncated::Truncated;
use crate::error::{Error, Result};
use crate::ordinal::OrdinalCnf;

/// Default number of terms shown and default expansion order.
pub const DEFAULT_DEPTH: usize = 20;

type Generator = dyn Fn(usize) -> Result<Truncated> + Send + Sync;

struct Stream {
    generate: Box<Generator>,
    cache: Mutex<HashMap<usize, Truncated>>,
    known_finite: bool,
}

#[derive(Clone)]
enum Repr {
    Finite(Nf),
    Stream(Arc<Stream>),
}

/// A Conway normal form over the fragment.
///
/// Stream values carry a recipe: `materialize(d)` expands every series in the
/// recipe to order `d` and returns the result with its exact-above floor.
/// Results are cached per depth, so materialization is idempotent.
#[derive(Clone)]
pub struct SurrealNF(Repr);

/// A rendered prefix of a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefix {
    pub terms: Vec<Term>,
    pub truncated: bool,
}

/// Depths tried when an answer needs more precision than the first attempt,
/// never exceeding `budget`.
pub(crate) fn schedule(budget: usize) -> Vec<usize> {
    let budget = budget.max(1);
    let mut d = budget.min(8);
    let mut out = Vec::new();
    while d < budget {
        out.push(d);
        d *= 2;
    }
    out.push(budget);
    out
}

impl SurrealNF {
    pub fn finite(nf: Nf) -> Self {
        SurrealNF(Repr::Finite(nf))
    }

    pub fn zero() -> Self {
        SurrealNF::finite(Nf::zero())
    }

    pub fn one() -> Self {
        SurrealNF::finite(Nf::one())
    }

    pub fn from_int(n: i64) -> Self {
        SurrealNF::finite(Nf::from_int(n))
    }

    pub fn from_rational(r: Coeff) -> Self {
        SurrealNF::finite(Nf::from_rational(r))
    }

    pub fn omega() -> Self {
        SurrealNF::finite(Nf::omega())
    }

    pub fn eps0() -> Self {
        SurrealNF::finite(Nf::eps0())
    }

    /// Wraps a depth-indexed recipe. `known_finite` records that the value is
    /// known to have finite support even though it is produced lazily.
    pub fn stream(
        known_finite: bool,
        generate: impl Fn(usize) -> Result<Truncated> + Send + Sync + 'static,
    ) -> Self {
        SurrealNF(Repr::Stream(Arc::new(Stream {
            generate: Box::new(generate),
            cache: Mutex::new(HashMap::new()),
            known_finite,
        })))
    }

    pub fn as_finite(&self) -> Option<&Nf> {
        match &self.0 {
            Repr::Finite(nf) => Some(nf),
            Repr::Stream(_) => None,
        }
    }

    pub fn is_stream(&self) -> bool {
        matches!(self.0, Repr::Stream(_))
    }

    pub fn known_finite(&self) -> bool {
        match &self.0 {
            Repr::Finite(_) => true,
            Repr::Stream(s) => s.known_finite,
        }
    }

    pub fn materialize(&self, depth: usize) -> Result<Truncated> {
        match &self.0 {
            Repr::Finite(nf) => Ok(Truncated::exact(nf.clone())),
            Repr::Stream(s) => {
                if let Some(t) = s.cache.lock().unwrap().get(&depth) {
                    return Ok(t.clone());
                }
                let t = (s.generate)(depth)?;
                s.cache.lock().unwrap().entry(depth).or_insert_with(|| t.clone());
                Ok(t)
            }
        }
    }

    /// The value as a finite normal form, if some materialization within
    /// `budget` turns out exact.
    pub fn to_exact(&self, budget: usize) -> Result<Nf> {
        if let Some(nf) = self.as_finite() {
            return Ok(nf.clone());
        }
        for d in schedule(budget) {
            if let Some(nf) = self.materialize(d)?.into_exact() {
                return Ok(nf);
            }
        }
        Err(Error::BudgetExhausted(budget))
    }

    /// The leading term, `None` for zero.
    pub fn leading_term(&self, budget: usize) -> Result<Option<Term>> {
        if let Some(nf) = self.as_finite() {
            return Ok(nf.leading().cloned());
        }
        for d in schedule(budget) {
            let t = self.materialize(d)?;
            if let Some(lead) = t.leading() {
                return Ok(Some(lead.clone()));
            }
            if t.is_exact() {
                return Ok(None);
            }
        }
        Err(Error::BudgetExhausted(budget))
    }

    /// The first `n` terms, refining the expansion up to order `4n` to find them.
    pub fn take_terms(&self, n: usize) -> Result<Prefix> {
        if let Some(nf) = self.as_finite() {
            let terms: Vec<Term> = nf.terms().iter().take(n).cloned().collect();
            return Ok(Prefix {
                truncated: nf.len() > n,
                terms,
            });
        }
        let n = n.max(1);
        let mut last = None;
        for d in [n, 2 * n, 4 * n] {
            let t = self.materialize(d)?;
            if t.is_exact() || t.terms().len() >= n {
                let truncated = !t.is_exact() || t.terms().len() > n;
                return Ok(Prefix {
                    terms: t.terms().iter().take(n).cloned().collect(),
                    truncated,
                });
            }
            last = Some(t);
        }
        Ok(Prefix {
            terms: last.map(|t| t.terms().to_vec()).unwrap_or_default(),
            truncated: true,
        })
    }

    pub fn render_text(&self, depth: usize) -> Result<String> {
        let p = self.take_terms(depth)?;
        Ok(render_text(&p.terms, p.truncated.then_some(depth)))
    }

    pub fn render_json(&self, depth: usize) -> Result<Value> {
        let p = self.take_terms(depth)?;
        Ok(terms_json(&p.terms, p.truncated))
    }
}

impl From<Nf> for SurrealNF {
    fn from(nf: Nf) -> Self {
        SurrealNF::finite(nf)
    }
}

impl From<i64> for SurrealNF {
    fn from(n: i64) -> Self {
        SurrealNF::from_int(n)
    }
}

impl fmt::Debug for SurrealNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Finite(nf) => write!(f, "SurrealNF({nf})"),
            Repr::Stream(_) => match self.render_text(8) {
                Ok(s) => write!(f, "SurrealNF(stream {s})"),
                Err(e) => write!(f, "SurrealNF(stream error: {e})"),
            },
        }
    }
}

fn lazy2(
    x: &SurrealNF,
    y: &SurrealNF,
    f: impl Fn(&Truncated, &Truncated) -> Result<Truncated> + Send + Sync + 'static,
) -> SurrealNF {
    let (x, y) = (x.clone(), y.clone());
    let known_finite = x.known_finite() && y.known_finite();
    SurrealNF::stream(known_finite, move |d| f(&x.materialize(d)?, &y.materialize(d)?))
}

pub fn nf_add(x: &SurrealNF, y: &SurrealNF) -> SurrealNF {
    match (x.as_finite(), y.as_finite()) {
        (Some(a), Some(b)) => SurrealNF::finite(a + b),
        _ => lazy2(x, y, |a, b| Ok(a.add(b))),
    }
}

pub fn nf_neg(x: &SurrealNF) -> SurrealNF {
    match x.as_finite() {
        Some(a) => SurrealNF::finite(-a),
        None => {
            let x = x.clone();
            let kf = x.known_finite();
            SurrealNF::stream(kf, move |d| Ok(x.materialize(d)?.neg()))
        }
    }
}

pub fn nf_sub(x: &SurrealNF, y: &SurrealNF) -> SurrealNF {
    nf_add(x, &nf_neg(y))
}

pub fn nf_mul(x: &SurrealNF, y: &SurrealNF) -> SurrealNF {
    match (x.as_finite(), y.as_finite()) {
        (Some(a), Some(b)) => SurrealNF::finite(a * b),
        _ => lazy2(x, y, |a, b| Ok(a.mul(b))),
    }
}

pub fn nf_scale(x: &SurrealNF, c: &Coeff) -> SurrealNF {
    nf_mul(x, &SurrealNF::from_rational(c.clone()))
}

/// Splits a materialized nonzero value as `lead · (1 + ε)`.
fn unit_split(t: &Truncated, depth: usize) -> Result<(Term, Truncated)> {
    let Some(lead) = t.leading().cloned() else {
        return Err(if t.is_exact() {
            Error::ZeroDivision
        } else {
            Error::BudgetExhausted(depth)
        });
    };
    let unit = t.mul_monomial(&lead.exponent().neg(), &lead.coefficient().recip());
    let eps = unit.sub(&Truncated::exact(Nf::one()));
    Ok((lead, eps))
}

fn invert_truncated(t: &Truncated, depth: usize) -> Result<Truncated> {
    let (lead, eps) = unit_split(t, depth)?;
    let geo = Truncated::power_series(&eps, depth, |k| coeff(if k % 2 == 0 { 1 } else { -1 }))?;
    Ok(geo.mul_monomial(&lead.exponent().neg(), &lead.coefficient().recip()))
}

/// `1/x` as `ω^{-a}·r⁻¹·Σ(−ε)^k`. Monomials invert exactly.
pub fn nf_invert(x: &SurrealNF, budget: usize) -> Result<SurrealNF> {
    match x.as_finite() {
        Some(a) if a.is_zero() => return Err(Error::ZeroDivision),
        Some(a) if a.is_monomial() => {
            let t = &a.terms()[0];
            return Ok(SurrealNF::finite(Nf::monomial(
                t.exponent().neg(),
                t.coefficient().recip(),
            )));
        }
        Some(_) => {}
        None => {
            if x.leading_term(budget)?.is_none() {
                return Err(Error::ZeroDivision);
            }
        }
    }
    let x = x.clone();
    Ok(SurrealNF::stream(false, move |d| invert_truncated(&x.materialize(d)?, d)))
}

/// Hahn long division; `Some` only when the remainder vanishes within `steps`.
fn long_division(x: &Nf, y: &Nf, steps: usize) -> Option<Nf> {
    let lead = y.leading()?;
    let mut q = Nf::zero();
    let mut r = x.clone();
    for _ in 0..steps {
        let Some(t) = r.leading() else {
            return Some(q);
        };
        let step = Nf::monomial(
            t.exponent().sub(lead.exponent()),
            t.coefficient() / lead.coefficient(),
        );
        r = &r - &(&step * y);
        q = &q + &step;
    }
    r.is_zero().then_some(q)
}

/// `x / y`. Exact finite quotients are detected by long division; anything
/// else becomes `x · invert(y)`.
pub fn nf_div(x: &SurrealNF, y: &SurrealNF, budget: usize) -> Result<SurrealNF> {
    if let (Some(a), Some(b)) = (x.as_finite(), y.as_finite()) {
        if b.is_zero() {
            return Err(Error::ZeroDivision);
        }
        if let Some(q) = long_division(a, b, 64 + budget) {
            return Ok(SurrealNF::finite(q));
        }
    }
    Ok(nf_mul(x, &nf_invert(y, budget)?))
}

/// `x^k` for an integer `k`; negative powers go through inversion.
pub fn nf_pow_int(x: &SurrealNF, k: i64, budget: usize) -> Result<SurrealNF> {
    if k < 0 {
        return nf_pow_int(&nf_invert(x, budget)?, -k, budget);
    }
    let mut result = SurrealNF::one();
    let mut base = x.clone();
    let mut k = k as u64;
    while k > 0 {
        if k & 1 == 1 {
            result = nf_mul(&result, &base);
        }
        k >>= 1;
        if k > 0 {
            base = nf_mul(&base, &base);
        }
    }
    Ok(result)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Comparison {
    Lt,
    Eq,
    Gt,
    Undecided,
}

/// Lexicographic comparison of normal forms. Streams are compared on the
/// part both know after expansion to order `budget`; agreement there without
/// both sides being exact is `Undecided`.
pub fn nf_compare(x: &SurrealNF, y: &SurrealNF, budget: usize) -> Result<Comparison> {
    if let (Some(a), Some(b)) = (x.as_finite(), y.as_finite()) {
        return Ok(match a.cmp(b) {
            std::cmp::Ordering::Less => Comparison::Lt,
            std::cmp::Ordering::Equal => Comparison::Eq,
            std::cmp::Ordering::Greater => Comparison::Gt,
        });
    }
    let diff = x.materialize(budget)?.sub(&y.materialize(budget)?);
    Ok(match diff.signum() {
        Some(1) => Comparison::Gt,
        Some(-1) => Comparison::Lt,
        Some(_) => Comparison::Eq,
        None => Comparison::Undecided,
    })
}

/// True when the two values agree on everything known after expansion to
/// order `depth`.
pub fn nf_agree(x: &SurrealNF, y: &SurrealNF, depth: usize) -> Result<bool> {
    let diff = x.materialize(depth)?.sub(&y.materialize(depth)?);
    Ok(diff.terms().is_empty())
}

/// The ω-map `a ↦ ω^a`. Exponents must have finite support.
pub fn omega_map(a: &SurrealNF, budget: usize) -> Result<SurrealNF> {
    let a = a.to_exact(budget).map_err(|_| {
        Error::OutsideFragment("exponent without a finite normal form".to_string())
    })?;
    Ok(SurrealNF::finite(Nf::omega_pow(a)))
}

pub fn embed_ordinal(a: &OrdinalCnf) -> SurrealNF {
    SurrealNF::finite(Nf::from_ordinal(a))
}

/// Purely infinite part + constant + infinitesimal part.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub purely_infinite: SurrealNF,
    pub constant: Coeff,
    pub infinitesimal: SurrealNF,
}

/// `ω^{leading_exponent} · leading_coeff · (1 + unit_tail)` with `unit_tail ≺ 1`.
#[derive(Clone, Debug)]
pub struct MultDecomposition {
    pub leading_exponent: Nf,
    pub leading_coeff: Coeff,
    pub unit_tail: SurrealNF,
}

fn split_nf(terms: &[Term]) -> (Nf, Coeff, Nf) {
    let mut inf = Vec::new();
    let mut c = Coeff::zero();
    let mut small = Vec::new();
    for t in terms {
        match t.exponent().signum() {
            1 => inf.push(t.clone()),
            0 => c = t.coefficient().clone(),
            _ => small.push(t.clone()),
        }
    }
    (Nf::from_sorted_unchecked(inf), c, Nf::from_sorted_unchecked(small))
}

pub fn additive_decompose(x: &SurrealNF, budget: usize) -> Result<Decomposition> {
    if let Some(nf) = x.as_finite() {
        let (p, c, e) = split_nf(nf.terms());
        return Ok(Decomposition {
            purely_infinite: p.into(),
            constant: c,
            infinitesimal: e.into(),
        });
    }
    for d in schedule(budget) {
        let t = x.materialize(d)?;
        if t.floor().is_none_or(|f| f.signum() < 0) {
            let (p, c, _) = split_nf(t.terms());
            let upper = SurrealNF::finite(&p + &Nf::from_rational(c.clone()));
            return Ok(Decomposition {
                purely_infinite: p.into(),
                constant: c,
                infinitesimal: nf_sub(x, &upper),
            });
        }
    }
    Err(Error::BudgetExhausted(budget))
}

pub fn multiplicative_decompose(x: &SurrealNF, budget: usize) -> Result<MultDecomposition> {
    let lead = x
        .leading_term(budget)?
        .ok_or(Error::ZeroInput("the multiplicative decomposition"))?;
    let inv = SurrealNF::finite(Nf::monomial(
        lead.exponent().neg(),
        lead.coefficient().recip(),
    ));
    Ok(MultDecomposition {
        leading_exponent: lead.exponent().to_nf(),
        leading_coeff: lead.coefficient().clone(),
        unit_tail: nf_sub(&nf_mul(x, &inv), &SurrealNF::one()),
    })
}

/// Valuation-level relation between two nonzero values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Asymptotic {
    /// `x ≺ y`
    Prec,
    /// `x ≍ y` with different leading coefficients
    AsympEq,
    /// `x ∼ y`
    Sim,
    /// `x ≻ y`
    Succ,
}

pub fn archimedean_relate(x: &SurrealNF, y: &SurrealNF, budget: usize) -> Result<Asymptotic> {
    let lx = x.leading_term(budget)?.ok_or(Error::ZeroInput("archimedean_relate"))?;
    let ly = y.leading_term(budget)?.ok_or(Error::ZeroInput("archimedean_relate"))?;
    Ok(match lx.exponent().cmp(ly.exponent()) {
        std::cmp::Ordering::Less => Asymptotic::Prec,
        std::cmp::Ordering::Greater => Asymptotic::Succ,
        std::cmp::Ordering::Equal if lx.coefficient() == ly.coefficient() => Asymptotic::Sim,
        std::cmp::Ordering::Equal => Asymptotic::AsympEq,
    })
}

/// Generalized binomial coefficient `C(α, k)`.
pub fn binomial(alpha: &Coeff, k: usize) -> Coeff {
    let mut c = Coeff::one();
    for i in 0..k {
        c = c * (alpha - coeff(i as i64)) / coeff(i as i64 + 1);
    }
    c
}

fn rational_root(c: &Coeff, n: u32) -> Result<Coeff> {
    let neg = c.is_negative();
    if neg && n.is_multiple_of(2) {
        return Err(Error::NegativeEvenRoot);
    }
    let a = c.abs();
    let exact = |v: &BigInt| {
        let r = v.nth_root(n);
        (r.pow(n) == *v).then_some(r)
    };
    match (exact(a.numer()), exact(a.denom())) {
        (Some(p), Some(q)) => {
            let r = Coeff::new(p, q);
            Ok(if neg { -r } else { r })
        }
        _ => Err(Error::IrrationalRoot(n, c.to_string())),
    }
}

/// `x^{1/n} = ω^{a/n} · r^{1/n} · (1 + ε)^{1/n}`, the last factor by the binomial series.
pub fn nth_root(x: &SurrealNF, n: u32, budget: usize) -> Result<SurrealNF> {
    if n == 0 {
        return Err(Error::OutsideFragment("0-th root".to_string()));
    }
    let Some(lead) = x.leading_term(budget)? else {
        return Ok(SurrealNF::zero());
    };
    let inv_n = Coeff::new(BigInt::one(), BigInt::from(n));
    let root_c = rational_root(lead.coefficient(), n)?;
    let root_e = lead.exponent().scale(&inv_n);
    if let Some(nf) = x.as_finite() {
        if nf.is_monomial() {
            return Ok(SurrealNF::finite(Nf::monomial(root_e, root_c)));
        }
    }
    let finite = x.as_finite().cloned();
    let x = x.clone();
    let root = SurrealNF::stream(false, move |d| {
        let (_, eps) = unit_split(&x.materialize(d)?, d)?;
        let series = Truncated::power_series(&eps, d, |k| binomial(&inv_n, k))?;
        Ok(series.mul_monomial(&root_e, &root_c))
    });
    if let Some(nf) = finite {
        let candidate = root.materialize(2 * nf.len() + 4)?.known();
        let mut p = Nf::one();
        for _ in 0..n {
            p = &p * &candidate;
        }
        if p == nf {
            return Ok(SurrealNF::finite(candidate));
        }
    }
    Ok(root)
}

struct Source {
    iter: Box<dyn Iterator<Item = Term> + Send>,
    emitted: Vec<Term>,
    done: bool,
    error: Option<Error>,
}

impl Source {
    fn fill(&mut self, n: usize) {
        while self.emitted.len() < n && !self.done && self.error.is_none() {
            match self.iter.next() {
                None => self.done = true,
                Some(t) => {
                    if t.coefficient().is_zero() {
                        self.error = Some(Error::MalformedStream(format!(
                            "zero coefficient at position {}",
                            self.emitted.len()
                        )));
                    } else if self.emitted.last().is_some_and(|p| p.exponent() <= t.exponent()) {
                        self.error = Some(Error::MalformedStream(format!(
                            "exponents not strictly decreasing at position {}",
                            self.emitted.len()
                        )));
                    } else {
                        self.emitted.push(t);
                    }
                }
            }
        }
    }
}

/// Wraps a term stream as a value. Terms are pulled on demand and kept, so
/// reading a prefix twice yields the same terms.
pub fn sum_of_stream<I>(terms: I) -> SurrealNF
where
    I: IntoIterator<Item = Term>,
    I::IntoIter: Send + 'static,
{
    let source = Mutex::new(Source {
        iter: Box::new(terms.into_iter()),
        emitted: Vec::new(),
        done: false,
        error: None,
    });
    SurrealNF::stream(false, move |d| {
        let mut s = source.lock().unwrap();
        s.fill(d + 1);
        if s.emitted.len() <= d {
            if let Some(e) = &s.error {
                return Err(e.clone());
            }
        }
        if s.done && s.emitted.len() <= d + 1 {
            return Ok(Truncated::exact(Nf::from_sorted_unchecked(s.emitted.clone())));
        }
        let floor = s.emitted[d].exponent().clone();
        Ok(Truncated::new(s.emitted[..d].to_vec(), Some(floor)))
    })
}

macro_rules! ops {
    ($($tr:ident $m:ident $f:ident),*) => {$(
        impl $tr for &SurrealNF {
            type Output = SurrealNF;
            fn $m(self, rhs: &SurrealNF) -> SurrealNF {
                $f(self, rhs)
            }
        }
        impl $tr for SurrealNF {
            type Output = SurrealNF;
            fn $m(self, rhs: SurrealNF) -> SurrealNF {
                $f(&self, &rhs)
            }
        }
    )*};
}
ops!(Add add nf_add, Sub sub nf_sub, Mul mul nf_mul);

impl Neg for &SurrealNF {
    type Output = SurrealNF;
    fn neg(self) -> SurrealNF {
        nf_neg(self)
    }
}

impl Neg for SurrealNF {
    type Output = SurrealNF;
    fn neg(self) -> SurrealNF {
        nf_neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::nf::{ratio, Exponent};

    fn w() -> SurrealNF {
        SurrealNF::omega()
    }

    fn wpow(n: i64) -> Nf {
        Nf::omega_pow(Nf::from_int(n))
    }

    #[test]
    fn omega_times_its_inverse() {
        let inv = nf_invert(&w(), 10).unwrap();
        assert_eq!((&w() * &inv).as_finite(), Some(&Nf::one()));
    }

    #[test]
    fn geometric_inverse_has_unit_terms() {
        let x = SurrealNF::finite(&Nf::one() - &wpow(-1));
        let inv = nf_invert(&x, 25).unwrap();
        let p = inv.take_terms(25).unwrap();
        assert!(p.truncated);
        for (n, t) in p.terms.iter().enumerate() {
            assert_eq!(t.exponent(), &Exponent::int(-(n as i64)));
            assert!(t.coefficient().is_one());
        }
    }

    #[test]
    fn invert_scaled_omega() {
        let x = SurrealNF::finite(Nf::omega().scale(&coeff(2)));
        let inv = nf_invert(&x, 10).unwrap();
        assert_eq!(inv.as_finite(), Some(&wpow(-1).scale(&ratio(1, 2))));
        assert_eq!(nf_invert(&SurrealNF::zero(), 10).unwrap_err(), Error::ZeroDivision);
    }

    #[test]
    fn compare_examples() {
        assert_eq!(nf_compare(&w(), &(&w() - &SurrealNF::one()), 10).unwrap(), Comparison::Gt);
        assert_eq!(nf_compare(&SurrealNF::finite(wpow(-1)), &SurrealNF::zero(), 10).unwrap(), Comparison::Gt);
        let geo = nf_invert(&SurrealNF::finite(&Nf::one() - &wpow(-1)), 10).unwrap();
        let partial = SurrealNF::finite(Nf::from_terms((0..=20).map(|n| Term::new(Exponent::int(-n), coeff(1)))));
        assert_eq!(nf_compare(&geo, &partial, 10).unwrap(), Comparison::Undecided);
    }

    #[test]
    fn long_division_detects_exact_quotients() {
        let num = SurrealNF::finite(&wpow(2) - &Nf::one());
        let den = SurrealNF::finite(&wpow(1) - &Nf::one());
        let q = nf_div(&num, &den, 10).unwrap();
        assert_eq!(q.as_finite(), Some(&(&wpow(1) + &Nf::one())));
    }

    #[test]
    fn decompositions() {
        let x = Nf::from_terms([
            Term::new(Exponent::int(2), coeff(3)),
            Term::new(Exponent::int(0), coeff(5)),
            Term::new(Exponent::int(-1), coeff(7)),
        ]);
        let d = additive_decompose(&x.clone().into(), 10).unwrap();
        assert_eq!(d.purely_infinite.as_finite(), Some(&wpow(2).scale(&coeff(3))));
        assert_eq!(d.constant, coeff(5));
        assert_eq!(d.infinitesimal.as_finite(), Some(&wpow(-1).scale(&coeff(7))));

        let y: SurrealNF = (&wpow(2).scale(&coeff(3)) + &Nf::from_int(5)).into();
        let m = multiplicative_decompose(&y, 10).unwrap();
        assert_eq!(m.leading_exponent, Nf::from_int(2));
        assert_eq!(m.leading_coeff, coeff(3));
        assert_eq!(m.unit_tail.as_finite(), Some(&wpow(-2).scale(&ratio(5, 3))));

        let five = additive_decompose(&SurrealNF::from_int(5), 10).unwrap();
        assert!(five.purely_infinite.as_finite().unwrap().is_zero());
        assert_eq!(five.constant, coeff(5));
    }

    #[test]
    fn archimedean_examples() {
        let one = SurrealNF::one();
        assert_eq!(archimedean_relate(&SurrealNF::finite(wpow(-1)), &one, 5).unwrap(), Asymptotic::Prec);
        assert_eq!(archimedean_relate(&(&w() + &SurrealNF::from_int(3)), &w(), 5).unwrap(), Asymptotic::Sim);
        let w2 = SurrealNF::finite(Nf::omega().scale(&coeff(2)));
        assert_eq!(archimedean_relate(&w2, &w(), 5).unwrap(), Asymptotic::AsympEq);
    }

    #[test]
    fn roots() {
        let r = nth_root(&SurrealNF::finite(wpow(2)), 2, 10).unwrap();
        assert_eq!(r.as_finite(), Some(&wpow(1)));
        let r = nth_root(&SurrealNF::finite(Nf::omega().scale(&coeff(4))), 2, 10).unwrap();
        let expect = Nf::monomial(Exponent::Nf(Nf::from_rational(ratio(1, 2))), coeff(2));
        assert_eq!(r.as_finite(), Some(&expect));
        let x = SurrealNF::finite(&Nf::one() + &wpow(-1));
        let s = nth_root(&x, 2, 20).unwrap();
        assert!(nf_agree(&(&s * &s), &x, 15).unwrap());
        assert!(matches!(nth_root(&SurrealNF::from_int(2), 2, 5), Err(Error::IrrationalRoot(2, _))));
        assert_eq!(nth_root(&SurrealNF::from_int(-4), 2, 5).unwrap_err(), Error::NegativeEvenRoot);
        assert_eq!(nth_root(&SurrealNF::from_int(-8), 3, 5).unwrap().as_finite(), Some(&Nf::from_int(-2)));
    }

    #[test]
    fn streams_of_terms() {
        let s = sum_of_stream((0..).map(|n| Term::new(Exponent::int(-n), coeff(1))));
        let geo = nf_invert(&SurrealNF::finite(&Nf::one() - &wpow(-1)), 30).unwrap();
        for d in [1, 5, 30] {
            assert!(nf_agree(&s, &geo, d).unwrap());
        }
        assert_eq!(s.materialize(7).unwrap(), s.materialize(7).unwrap());

        let empty = sum_of_stream(std::iter::empty());
        assert!(empty.materialize(5).unwrap().is_exact_zero());

        let bad = sum_of_stream([Term::new(Exponent::int(-1), coeff(1)), Term::new(Exponent::int(0), coeff(1))]);
        assert!(matches!(bad.materialize(5), Err(Error::MalformedStream(_))));
    }

    #[test]
    fn truncation_coherence() {
        let x = SurrealNF::finite(&(&Nf::one() + &wpow(-1)) + &wpow(-3).scale(&coeff(2)));
        let inv = nf_invert(&x, 40).unwrap();
        let small = inv.take_terms(6).unwrap();
        let big = inv.take_terms(30).unwrap();
        assert_eq!(&big.terms[..6], &small.terms[..]);
    }

    #[test]
    fn schedule_is_bounded() {
        assert_eq!(schedule(20), vec![8, 16, 20]);
        assert_eq!(schedule(3), vec![3]);
    }
}
