//! The derivation `∂` on the fragment: closed forms on the λ-ladder, the
//! recursion `∂(ω^a) = ω^a · ∂(log ω^a)`, logarithmic derivatives and
//! asymptotic integration.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{LazyLock, RwLock};

use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::explog::{exp_nf, log_monomial, LogAtomic};
use crate::oracle::{Sampler, SamplerConfig};
use crate::series::{
    nf_agree, nf_div, nf_mul, render_nf, Coeff, Exponent, Nf, SurrealNF, Term, Truncated,
};

const MAX_NESTING: usize = 64;

static MONOMIAL_CACHE: LazyLock<RwLock<HashMap<Exponent, Nf>>> = LazyLock::new(Default::default);

/// `∂λ_n` in closed form.
pub fn d_log_atomic(l: LogAtomic) -> SurrealNF {
    SurrealNF::finite(d_log_atomic_nf(l.level()))
}

fn d_log_atomic_nf(level: i64) -> Nf {
    let exponent_sum = |levels: &mut dyn Iterator<Item = i64>| {
        levels.fold(Nf::zero(), |acc, k| &acc + &LogAtomic::new(k).unwrap().exponent())
    };
    match level {
        0 => Nf::one(),
        n if n > 0 => Nf::omega_pow(exponent_sum(&mut (1..=n))),
        n => Nf::omega_pow(-exponent_sum(&mut (0..-n).map(|k| -k))),
    }
}

fn d_monomial(e: &Exponent, nesting: usize) -> Result<Nf> {
    if e.is_zero() {
        return Ok(Nf::zero());
    }
    if let Some(d) = MONOMIAL_CACHE.read().unwrap().get(e) {
        return Ok(d.clone());
    }
    if nesting > MAX_NESTING {
        return Err(Error::OutsideFragment("exponent nesting too deep to differentiate".to_string()));
    }
    let d = match (e, LogAtomic::from_exponent(e)) {
        (Exponent::Eps0, _) => {
            return Err(Error::OutsideFragment("the derivative of eps0".to_string()));
        }
        (_, Some(l)) if l.level() <= 0 => d_log_atomic_nf(l.level()),
        _ => {
            let log = log_monomial(&e.to_nf())?;
            d_nf(&log, nesting + 1)?.mul_monomial(e, &Coeff::one())
        }
    };
    MONOMIAL_CACHE.write().unwrap().insert(e.clone(), d.clone());
    Ok(d)
}

fn d_nf(x: &Nf, nesting: usize) -> Result<Nf> {
    let mut parts = Vec::new();
    for t in x.terms() {
        parts.extend(d_monomial(t.exponent(), nesting)?.scale(t.coefficient()).terms().iter().cloned());
    }
    Ok(Nf::from_terms(parts))
}

/// `∂` of a finite normal form, term by term.
pub fn derive_nf(x: &Nf) -> Result<Nf> {
    d_nf(x, 0)
}

/// `∂ω^a` for a single exponent.
pub fn derive_monomial(e: &Exponent) -> Result<Nf> {
    d_monomial(e, 0)
}

/// Differentiates a prefix. Unknown terms at or below a floor `F ≠ 0` have
/// derivatives at or below `v(∂ω^F)`; below `F = 0` they are constants and
/// infinitesimals, whose derivatives lie below `ω^{-1}`.
pub fn derive_truncated(t: &Truncated) -> Result<Truncated> {
    let known = derive_nf(&t.known())?;
    let floor = match t.floor() {
        None => None,
        Some(f) if f.is_zero() => Some(Exponent::int(-1)),
        Some(f) => Some(derive_monomial(f)?.leading().unwrap().exponent().clone()),
    };
    Ok(Truncated::new(known.terms().to_vec(), floor))
}

#[derive(Clone, Debug)]
pub struct DerivationResult {
    pub value: SurrealNF,
    pub budget_used: usize,
    pub exact: bool,
}

pub fn derive(x: &SurrealNF, budget: usize) -> Result<DerivationResult> {
    if let Some(nf) = x.as_finite() {
        return Ok(DerivationResult {
            value: SurrealNF::finite(derive_nf(nf)?),
            budget_used: 0,
            exact: true,
        });
    }
    let t = x.materialize(budget)?;
    if let Some(nf) = t.clone().into_exact() {
        return Ok(DerivationResult {
            value: SurrealNF::finite(derive_nf(&nf)?),
            budget_used: budget,
            exact: true,
        });
    }
    derive_truncated(&t)?;
    let src = x.clone();
    let value = SurrealNF::stream(false, move |d| derive_truncated(&src.materialize(d)?));
    Ok(DerivationResult {
        value,
        budget_used: budget,
        exact: false,
    })
}

/// `∂x / x`.
pub fn log_derivative(x: &SurrealNF, budget: usize) -> Result<SurrealNF> {
    if x.leading_term(budget)?.is_none() {
        return Err(Error::ZeroInput("the logarithmic derivative"));
    }
    nf_div(&derive(x, budget)?.value, x, budget)
}

const INTEGRATION_LADDER: i64 = 8;

fn lead_exponent(x: &Nf) -> Option<&Exponent> {
    x.leading().map(Term::exponent)
}

/// A monomial `m` with `∂m ≍ ω^θ`, and the ratio `c` with `∂m ∼ c·ω^θ`.
fn integral_monomial(theta: &Exponent) -> Result<(Exponent, Coeff)> {
    let try_candidate = |m: &Exponent| -> Result<Option<Coeff>> {
        let q = derive_monomial(m)?.mul_monomial(&theta.neg(), &Coeff::one());
        Ok(q.leading()
            .filter(|t| t.exponent().is_zero())
            .map(|t| t.coefficient().clone()))
    };
    // ω·log ω ⋯ log_k ω
    let mut m = theta.clone();
    for k in 0..INTEGRATION_LADDER {
        m = m.add(&Exponent::from_nf(LogAtomic::new(-k)?.exponent()));
        if let Some(c) = try_candidate(&m)? {
            return Ok((m, c));
        }
    }
    let ld = derive_monomial(theta)?.mul_monomial(&theta.neg(), &Coeff::one());
    if let Some(l) = lead_exponent(&ld) {
        let m = theta.sub(l);
        if let Some(c) = try_candidate(&m)? {
            return Ok((m, c));
        }
    }
    Err(Error::NoAsymptoticIntegral(render_nf(&Nf::omega_pow(theta.to_nf()))))
}

#[derive(Clone, Debug)]
pub struct Integral {
    pub value: SurrealNF,
    /// `∂value = a` exactly.
    pub exact: bool,
    pub rounds: usize,
}

/// Finds `b` with `∂b ∼ a`, then refines `b` against the residual `a − ∂b`
/// for up to `max_rounds` rounds, each of which must lower the residual's
/// leading exponent.
pub fn asymptotic_integrate(a: &SurrealNF, budget: usize, max_rounds: usize) -> Result<Integral> {
    let target = a.materialize(budget)?;
    if target.leading().is_none() {
        return Err(if target.is_exact() {
            Error::ZeroInput("asymptotic integration")
        } else {
            Error::BudgetExhausted(budget)
        });
    }
    let mut b = Nf::zero();
    let mut residual = target.clone();
    let mut last: Option<Exponent> = None;
    let mut rounds = 0;
    while rounds < max_rounds.max(1) {
        let Some(lead) = residual.leading().cloned() else {
            break;
        };
        if last.as_ref().is_some_and(|v| lead.exponent() >= v) {
            return Err(Error::NoProgress { round: rounds });
        }
        last = Some(lead.exponent().clone());
        let (m, c) = integral_monomial(lead.exponent())?;
        b = &b + &Nf::monomial(m, lead.coefficient() / c);
        residual = target.sub(&Truncated::exact(derive_nf(&b)?));
        rounds += 1;
    }
    Ok(Integral {
        value: SurrealNF::finite(b),
        exact: residual.is_exact_zero(),
        rounds,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: String,
    pub samples: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomReport {
    pub seed: u64,
    pub budget: usize,
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let status = if c.failures == 0 { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{:width$}  {status}  {}/{}", c.name, c.samples - c.failures, c.samples);
            if let Some(f) = &c.first_failure {
                let _ = writeln!(out, "{:width$}    first failure: {f}", "");
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

struct Tally {
    check: AxiomCheck,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally {
            check: AxiomCheck {
                name: name.to_string(),
                samples: 0,
                failures: 0,
                first_failure: None,
            },
        }
    }

    fn record(&mut self, outcome: Result<bool>, describe: impl FnOnce() -> String) {
        self.check.samples += 1;
        let failure = match outcome {
            Ok(true) => return,
            Ok(false) => describe(),
            Err(e) => format!("{} ({e})", describe()),
        };
        self.check.failures += 1;
        self.check.first_failure.get_or_insert(failure);
    }
}

/// Checks the derivation laws on `count` seeded samples per law.
pub fn check_derivation_axioms(seed: u64, count: usize, budget: usize) -> AxiomReport {
    let mut s = Sampler::new(SamplerConfig::with_seed(seed));
    let mut leibniz = Tally::new("leibniz");
    let mut additivity = Tally::new("strong_additivity");
    let mut exp_compat = Tally::new("exp_compatibility");
    let mut constants = Tally::new("constants");
    let mut positivity = Tally::new("h_positivity");
    let mut small = Tally::new("small_derivation");
    for _ in 0..count {
        let (x, y) = (s.fragment(), s.fragment());
        leibniz.record(
            (|| Ok(derive_nf(&(&x * &y))? == &(&x * &derive_nf(&y)?) + &(&y * &derive_nf(&x)?)))(),
            || format!("x = {x}, y = {y}"),
        );

        additivity.record(
            (|| {
                let mut sum = Nf::zero();
                for t in x.terms() {
                    sum = &sum + &derive_nf(&t.to_nf())?;
                }
                Ok(derive_nf(&x)? == sum)
            })(),
            || format!("x = {x}"),
        );

        let c = s.constant_free();
        exp_compat.record(
            (|| {
                let e = exp_nf(&SurrealNF::finite(c.clone()), budget)?;
                let lhs = derive(&e, budget)?.value;
                let rhs = nf_mul(&e, &SurrealNF::finite(derive_nf(&c)?));
                nf_agree(&lhs, &rhs, budget)
            })(),
            || format!("x = {c}"),
        );

        let r = s.rational();
        let nonconst = s.fragment();
        constants.record(
            (|| {
                let zero = derive_nf(&Nf::from_rational(r.clone()))?.is_zero();
                let nonconst_live = nonconst.as_rational().is_some() || !derive_nf(&nonconst)?.is_zero();
                Ok(zero && nonconst_live)
            })(),
            || format!("r = {r}, x = {nonconst}"),
        );

        let p = s.positive_infinite();
        positivity.record(
            (|| Ok(derive_nf(&p)?.signum() > 0))(),
            || format!("x = {p}"),
        );

        let e = s.infinitesimal();
        small.record(
            (|| Ok(derive_nf(&e)?.is_infinitesimal()))(),
            || format!("x = {e}"),
        );
    }
    AxiomReport {
        seed,
        budget,
        checks: [leibniz, additivity, exp_compat, constants, positivity, small]
            .into_iter()
            .map(|t| t.check)
            .collect(),
    }
}

/// Whether `x ≺ y`, compared by leading exponents.
pub fn dominated(x: &Nf, y: &Nf) -> bool {
    match (lead_exponent(x), lead_exponent(y)) {
        (None, Some(_)) => true,
        (Some(a), Some(b)) => a < b,
        _ => false,
    }
}

/// Whether the leading coefficient is positive.
pub fn leading_positive(x: &Nf) -> bool {
    x.leading().is_some_and(|t| t.coefficient().is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explog::{lambda_of_level, log_nf};
    use crate::series::{coeff, ratio, DEFAULT_DEPTH};

    fn w(e: Nf) -> Nf {
        Nf::omega_pow(e)
    }

    fn lam(n: i64) -> Nf {
        lambda_of_level(n).unwrap().value()
    }

    #[test]
    fn ladder_closed_forms() {
        assert_eq!(derive_nf(&Nf::omega()).unwrap(), Nf::one());
        assert_eq!(derive_nf(&lam(1)).unwrap(), lam(1));
        assert_eq!(derive_nf(&lam(-1)).unwrap(), w(Nf::from_int(-1)));
        let mut denom = Nf::one();
        for n in 1..=5 {
            denom = &denom * &lam(1 - n);
            let expected = w(-lead_exponent(&denom).unwrap().to_nf());
            assert_eq!(derive_nf(&lam(-n)).unwrap(), expected, "level -{n}");
        }
        for n in 1..=4 {
            let by_recursion = derive_nf(&lam(n)).unwrap();
            assert_eq!(by_recursion, d_log_atomic(lambda_of_level(n).unwrap()).as_finite().unwrap().clone());
        }
    }

    #[test]
    fn worked_examples() {
        assert_eq!(derive_nf(&w(Nf::omega())).unwrap(), w(Nf::omega()));
        assert!(derive_nf(&Nf::from_int(5)).unwrap().is_zero());
        let x = &w(Nf::from_int(2)) + &Nf::omega().scale(&coeff(3));
        assert_eq!(derive_nf(&x).unwrap(), &Nf::omega().scale(&coeff(2)) + &Nf::from_int(3));
        assert_eq!(derive_nf(&w(Nf::from_int(2))).unwrap().to_string(), "w*2");
        assert!(derive_nf(&Nf::eps0()).is_err());
    }

    #[test]
    fn log_derivatives() {
        let ld = log_derivative(&SurrealNF::omega(), 8).unwrap();
        assert_eq!(ld.as_finite().unwrap(), &w(Nf::from_int(-1)));
        let ld = log_derivative(&SurrealNF::finite(lam(1)), 8).unwrap();
        assert_eq!(ld.as_finite().unwrap(), &Nf::one());
        assert!(matches!(log_derivative(&SurrealNF::zero(), 8), Err(Error::ZeroInput(_))));
    }

    #[test]
    fn derivation_of_streams() {
        let x = &Nf::omega() + &w(Nf::from_int(-1));
        let e = exp_nf(&SurrealNF::finite(x.clone()), 12).unwrap();
        let d = derive(&e, 12).unwrap();
        assert!(!d.exact);
        let rhs = nf_mul(&e, &SurrealNF::finite(derive_nf(&x).unwrap()));
        assert!(nf_agree(&d.value, &rhs, 12).unwrap());
        let l = log_nf(&SurrealNF::finite(&Nf::omega() + &Nf::one()), 12).unwrap();
        let dl = derive(&l, 12).unwrap().value;
        let expected = nf_div(&SurrealNF::one(), &SurrealNF::finite(&Nf::omega() + &Nf::one()), 12).unwrap();
        assert!(nf_agree(&dl, &expected, 12).unwrap());
    }

    #[test]
    fn integration_closed_forms() {
        let i = asymptotic_integrate(&SurrealNF::one(), 8, 4).unwrap();
        assert_eq!(i.value.as_finite().unwrap(), &Nf::omega());
        assert!(i.exact);
        let i = asymptotic_integrate(&SurrealNF::finite(w(Nf::from_int(-1))), 8, 4).unwrap();
        assert_eq!(i.value.as_finite().unwrap(), &lam(-1));
        let i = asymptotic_integrate(&SurrealNF::omega(), 8, 4).unwrap();
        assert_eq!(i.value.as_finite().unwrap(), &Nf::monomial(Exponent::int(2), ratio(1, 2)));
        let i = asymptotic_integrate(&SurrealNF::finite(w(-Nf::omega())), 8, 4).unwrap();
        assert_eq!(i.value.as_finite().unwrap(), &-&w(-Nf::omega()));
        let i = asymptotic_integrate(&SurrealNF::finite(&Nf::omega() + &Nf::one()), 8, 4).unwrap();
        assert!(i.exact);
        assert!(matches!(asymptotic_integrate(&SurrealNF::zero(), 8, 4), Err(Error::ZeroInput(_))));
    }

    #[test]
    fn axiom_report_passes() {
        let r = check_derivation_axioms(1, 30, DEFAULT_DEPTH);
        assert!(r.all_passed(), "{}", r.to_text());
        assert_eq!(r.to_json()["checks"].as_array().unwrap().len(), 6);
    }
}
