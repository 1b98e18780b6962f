//! Exponential and logarithm on the fragment, the `g`/`h` exponent maps, and
//! the log-atomic ladder `λ_n`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cut::{canonical_cut, simplest_between, CutExpr};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::series::{
    additive_decompose, coeff, multiplicative_decompose, nf_add, nf_mul, nf_sub, render_nf, Coeff, Exponent, Nf,
    SurrealNF, Term, Truncated,
};

/// Largest |level| accepted by the λ-ladder.
pub const MAX_LEVEL: i64 = 32;

fn outside(msg: impl Into<String>) -> Error {
    Error::OutsideFragment(msg.into())
}

fn inv_factorials(n: usize) -> Vec<Coeff> {
    let mut out = Vec::with_capacity(n + 1);
    let mut c = Coeff::one();
    out.push(c.clone());
    for k in 1..=n {
        c /= coeff(k as i64);
        out.push(c.clone());
    }
    out
}

/// `exp(ε) = Σ ε^k / k!` for infinitesimal `ε`.
pub fn taylor_exp_infinitesimal(eps: &SurrealNF, budget: usize) -> Result<SurrealNF> {
    match eps.leading_term(budget)? {
        None => return Ok(SurrealNF::one()),
        Some(t) if t.exponent().signum() >= 0 => {
            return Err(Error::NotInfinitesimal(render_nf(&t.to_nf())));
        }
        Some(_) => {}
    }
    let eps = eps.clone();
    Ok(SurrealNF::stream(false, move |d| {
        let c = inv_factorials(d);
        Truncated::power_series(&eps.materialize(d)?, d, |k| c[k].clone())
    }))
}

fn log1p(eps: &SurrealNF) -> SurrealNF {
    let eps = eps.clone();
    SurrealNF::stream(false, move |d| {
        Truncated::power_series(&eps.materialize(d)?, d, |k| {
            if k == 0 {
                Coeff::zero()
            } else {
                let c = Coeff::new(BigInt::one(), BigInt::from(k));
                if k % 2 == 1 {
                    c
                } else {
                    -c
                }
            }
        })
    })
}

/// `log(1 + ε) = Σ (−1)^{k+1} ε^k / k` for `u = 1 + ε` with `ε ≺ 1`.
pub fn taylor_log_unit(u: &SurrealNF, budget: usize) -> Result<SurrealNF> {
    let eps = nf_sub(u, &SurrealNF::one());
    match eps.leading_term(budget)? {
        None => Ok(SurrealNF::zero()),
        Some(t) if t.exponent().signum() >= 0 => Err(Error::NotUnit(u.render_text(8)?)),
        Some(_) => Ok(log1p(&eps)),
    }
}

fn is_rational(a: &Nf) -> Option<Coeff> {
    a.as_rational()
}

/// `g` on a dyadic in `(0, 1)` by recursion on its canonical cut:
/// the simplest value above `0` and the images of the positive left options,
/// below the images of the right options.
pub fn g_dyadic(d: &Dyadic) -> Result<Dyadic> {
    if d.signum() <= 0 || *d >= Dyadic::one() {
        return Err(outside(format!("g_dyadic expects a dyadic in (0, 1), got {d}")));
    }
    let cut = canonical_cut(d);
    let mut left = vec![Dyadic::zero()];
    for l in cut.left() {
        if l.signum() > 0 {
            left.push(g_dyadic(l)?);
        }
    }
    let mut right = Vec::new();
    for r in cut.right() {
        right.push(if *r >= Dyadic::one() { r.clone() } else { g_dyadic(r)? });
    }
    Ok(simplest_between(&CutExpr::new(left, right)?))
}

/// Gonshor's `g`, with `ω^{ω^a} = ω^{ω^{g(a)}}`-style inversion of `h`:
/// identity on `[1, ∞)` and on rationals in `(0, 1)`,
/// `ω^{−(n+1)}·s ↦ s − n − 1` for `s ∈ (0, 1]`, and `ε₀ ↦ ε₀ + 1`.
pub fn g_map(a: &Nf) -> Result<Nf> {
    if a.signum() <= 0 {
        return Err(outside(format!("g is defined on positive values, got {a}")));
    }
    if a.is_eps0() {
        return Ok(&Nf::eps0() + &Nf::one());
    }
    if a.contains_eps0() {
        return Err(Error::UnsupportedOrdinal(a.to_string()));
    }
    if *a >= Nf::one() {
        return Ok(a.clone());
    }
    if let Some(r) = is_rational(a) {
        if let Ok(d) = Dyadic::from_rational(&r) {
            return Ok(Nf::from_dyadic(&g_dyadic(&d)?));
        }
        return Ok(a.clone());
    }
    if let [t] = a.terms() {
        if let Some(e) = t.exponent().to_nf().as_integer() {
            let s = t.coefficient();
            if e < BigInt::zero() && *s <= Coeff::one() {
                let n1 = Coeff::from(-e);
                return Ok(Nf::from_rational(s - n1));
            }
        }
    }
    Err(outside(format!("g is not available at {a}")))
}

/// Inverse of `g`: `ω^{h(b)}` is the logarithm of `ω^{ω^b}`.
pub fn h_map(b: &Nf) -> Result<Nf> {
    if b.contains_eps0() {
        if *b == &Nf::eps0() + &Nf::one() {
            return Ok(Nf::eps0());
        }
        return Err(Error::UnsupportedOrdinal(b.to_string()));
    }
    if *b >= Nf::one() {
        return Ok(b.clone());
    }
    let Some(r) = is_rational(b) else {
        return Err(outside(format!("h is not available at {b}")));
    };
    if r.is_positive() {
        return Ok(b.clone());
    }
    let n = (-&r).floor();
    let n1 = n + Coeff::one();
    Ok(Nf::monomial(Exponent::from_nf(Nf::from_rational(-&n1)), &r + &n1))
}

/// The purely infinite `log(ω^b) = Σ ω^{h(b_j)} s_j` for `b = Σ ω^{b_j} s_j`.
pub fn log_monomial(b: &Nf) -> Result<Nf> {
    let terms = b
        .terms()
        .iter()
        .map(|t| {
            let h = h_map(&t.exponent().to_nf())?;
            Ok(Term::new(Exponent::from_nf(h), t.coefficient().clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Nf::from_terms(terms))
}

/// `exp(P + c + ε) = ω^{Σ ω^{g(a_i)} r_i} · Σ ε^k/k!`; the constant must vanish.
pub fn exp_nf(x: &SurrealNF, budget: usize) -> Result<SurrealNF> {
    let parts = additive_decompose(x, budget)?;
    if !parts.constant.is_zero() {
        return Err(Error::TranscendentalConstant(format!("exp({})", parts.constant)));
    }
    let p = parts.purely_infinite.to_exact(budget)?;
    let exps = p
        .terms()
        .iter()
        .map(|t| {
            let g = g_map(&t.exponent().to_nf())?;
            Ok(Term::new(Exponent::from_nf(g), t.coefficient().clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mono = SurrealNF::finite(Nf::omega_pow(Nf::from_terms(exps)));
    if parts.infinitesimal.as_finite().is_some_and(Nf::is_zero) {
        return Ok(mono);
    }
    Ok(nf_mul(&mono, &taylor_exp_infinitesimal(&parts.infinitesimal, budget)?))
}

/// `log(ω^b · r · (1 + ε)) = log(ω^b) + log(1 + ε)`; `r` must be 1.
pub fn log_nf(x: &SurrealNF, budget: usize) -> Result<SurrealNF> {
    let lead = x.leading_term(budget)?.ok_or(Error::NonPositive("0".to_string()))?;
    if lead.coefficient().is_negative() {
        return Err(Error::NonPositive(x.render_text(8)?));
    }
    let m = multiplicative_decompose(x, budget)?;
    if !m.leading_coeff.is_one() {
        return Err(Error::TranscendentalConstant(format!("log({})", m.leading_coeff)));
    }
    let l = SurrealNF::finite(log_monomial(&m.leading_exponent)?);
    if m.unit_tail.as_finite().is_some_and(Nf::is_zero) {
        return Ok(l);
    }
    if m.unit_tail.leading_term(budget)?.is_none() {
        return Ok(l);
    }
    Ok(nf_add(&l, &log1p(&m.unit_tail)))
}

/// A log-atomic number `λ_n`: `λ_0 = ω`, `λ_{n+1} = exp(λ_n)`,
/// `λ_{−n} = log_n ω = ω^{ω^{−n}}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogAtomic {
    level: i64,
}

impl LogAtomic {
    pub fn new(level: i64) -> Result<Self> {
        if level.abs() > MAX_LEVEL {
            return Err(Error::LevelOutOfRange(level));
        }
        Ok(LogAtomic { level })
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn value(&self) -> Nf {
        match self.level {
            0 => Nf::omega(),
            n if n < 0 => Nf::omega_pow(Nf::omega_pow(Nf::from_int(n))),
            n => Nf::omega_pow(LogAtomic { level: n - 1 }.value()),
        }
    }

    /// The exponent `a` with `λ = ω^a`.
    pub fn exponent(&self) -> Nf {
        match self.level {
            0 => Nf::one(),
            n if n < 0 => Nf::omega_pow(Nf::from_int(n)),
            n => LogAtomic { level: n - 1 }.value(),
        }
    }

    /// Recognizes `x` as some `λ_n`.
    pub fn from_nf(x: &Nf) -> Option<LogAtomic> {
        let [t] = x.terms() else { return None };
        if !t.coefficient().is_one() {
            return None;
        }
        LogAtomic::from_exponent(t.exponent())
    }

    /// Recognizes `ω^e` as some `λ_n`.
    pub fn from_exponent(e: &Exponent) -> Option<LogAtomic> {
        let a = match e {
            Exponent::Eps0 => return None,
            Exponent::Nf(a) => a,
        };
        if a.is_one() {
            return Some(LogAtomic { level: 0 });
        }
        if let [t] = a.terms() {
            if t.coefficient().is_one() {
                if let Some(k) = t.exponent().to_nf().as_integer() {
                    let k: i64 = k.try_into().ok()?;
                    if (-MAX_LEVEL..0).contains(&k) {
                        return Some(LogAtomic { level: k });
                    }
                }
            }
        }
        let inner = LogAtomic::from_nf(a)?;
        (inner.level >= 0 && inner.level < MAX_LEVEL).then_some(LogAtomic { level: inner.level + 1 })
    }
}

impl fmt::Display for LogAtomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            0 => write!(f, "w"),
            n if n > 0 => write!(f, "exp_{n}(w)"),
            n => write!(f, "log_{}(w)", -n),
        }
    }
}

pub fn lambda_of_level(n: i64) -> Result<LogAtomic> {
    LogAtomic::new(n)
}

/// Whether the positive infinite `x` is log-atomic: every iterated logarithm is
/// a monomial `ω^b` with coefficient 1. Decided once the chain reaches a
/// `λ_n` or `ε₀`; more than `max_iter` logarithms is `Undecided`.
pub fn is_log_atomic(x: &SurrealNF, max_iter: usize) -> Result<bool> {
    let budget = crate::series::DEFAULT_DEPTH;
    let lead = x.leading_term(budget)?;
    if !lead.as_ref().is_some_and(|t| t.exponent().signum() > 0 && t.coefficient().is_positive()) {
        return Err(outside("is_log_atomic expects a positive infinite argument"));
    }
    let p = x.take_terms(2)?;
    if p.terms.len() != 1 || p.truncated {
        return Ok(false);
    }
    let mut cur = p.terms[0].to_nf();
    for _ in 0..=max_iter {
        let t = &cur.terms()[0];
        if !t.coefficient().is_one() {
            return Ok(false);
        }
        if cur.is_eps0() || LogAtomic::from_nf(&cur).is_some() {
            return Ok(true);
        }
        let next = log_monomial(&t.exponent().to_nf())?;
        if !next.is_monomial() {
            return Ok(false);
        }
        cur = next;
    }
    Err(Error::Undecided(format!("log-atomicity of {} after {max_iter} logarithms", x.render_text(8)?)))
}

fn positive_infinite_lead(x: &SurrealNF, what: &str) -> Result<Term> {
    let budget = crate::series::DEFAULT_DEPTH;
    match x.leading_term(budget)? {
        Some(t) if t.exponent().signum() > 0 && t.coefficient().is_positive() => Ok(t),
        _ => Err(outside(format!("{what} expects positive infinite arguments"))),
    }
}

/// Purely infinite parts `A_1, A_2, …` of `log x, log log x, …`. Each is the
/// logarithm of the leading monomial of the previous one, since the rest
/// only contributes constants and infinitesimals.
fn next_log_part(a: &Term) -> Result<Nf> {
    log_monomial(&a.exponent().to_nf())
}

/// `log_n x ∼ log_n y` for some `n ≤ max_n`.
pub fn same_level(x: &SurrealNF, y: &SurrealNF, max_n: usize) -> Result<bool> {
    let mut a = positive_infinite_lead(x, "same_level")?;
    let mut b = positive_infinite_lead(y, "same_level")?;
    for n in 0..=max_n {
        if a == b {
            return Ok(true);
        }
        if n == max_n {
            break;
        }
        a = next_log_part(&a)?.leading().cloned().unwrap();
        b = next_log_part(&b)?.leading().cloned().unwrap();
    }
    Ok(false)
}

fn log_parts(x: &SurrealNF, n: usize) -> Result<Vec<Nf>> {
    let mut lead = positive_infinite_lead(x, "same_explog_class")?;
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let a = next_log_part(&lead)?;
        lead = a.leading().cloned().unwrap();
        out.push(a);
    }
    Ok(out)
}

fn eps0_tier(lead: &Term) -> bool {
    let a = lead.exponent().to_nf();
    let t = a.leading().unwrap();
    t.exponent().signum() > 0 && t.exponent().contains_eps0()
}

/// `log_n(u) < v` decided by the sign of the purely infinite part of `v − A_n(u)`;
/// `None` when that part vanishes and the unknown constant of `log_n(u)` matters.
fn log_below(a_n: &Nf, v: &SurrealNF) -> Result<Option<bool>> {
    let budget = crate::series::DEFAULT_DEPTH;
    let pv = additive_decompose(v, budget)?.purely_infinite.to_exact(budget)?;
    let d = &pv - a_n;
    Ok(match d.signum() {
        0 => None,
        s => Some(s > 0),
    })
}

/// Whether `log_n x < y` and `log_n y < x` for some `1 ≤ n ≤ max_n`, i.e. `x`
/// and `y` lie in the same exponential class.
///
/// Values whose leading monomial is `ω^a` with an `ε₀`-sized exponent `a`
/// exceed every `exp_n(ω)`; against an `ε₀`-free value they are in a different
/// class, and among themselves they are decided only on equal leading terms.
pub fn same_explog_class(x: &SurrealNF, y: &SurrealNF, max_n: usize) -> Result<bool> {
    let (lx, ly) = (
        positive_infinite_lead(x, "same_explog_class")?,
        positive_infinite_lead(y, "same_explog_class")?,
    );
    match (eps0_tier(&lx), eps0_tier(&ly)) {
        (false, false) => {}
        (true, true) if lx.exponent() == ly.exponent() => return Ok(true),
        (true, true) => return Err(Error::Undecided("exponential class above epsilon_0".to_string())),
        _ => return Ok(false),
    }
    let ax = log_parts(x, max_n)?;
    let ay = log_parts(y, max_n)?;
    let mut undecided = false;
    for n in 0..max_n {
        match (log_below(&ax[n], y)?, log_below(&ay[n], x)?) {
            (Some(true), Some(true)) => return Ok(true),
            (None, _) | (_, None) => undecided = true,
            _ => {}
        }
    }
    if undecided {
        return Err(Error::Undecided(format!("exponential class within {max_n} logarithms")));
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{nf_agree, ratio, DEFAULT_DEPTH};

    fn w(e: Nf) -> Nf {
        Nf::omega_pow(e)
    }

    fn q(p: i64, d: i64) -> Nf {
        Nf::from_rational(ratio(p, d))
    }

    #[test]
    fn h_and_g_are_inverse() {
        for b in [q(-7, 3), q(-1, 1), q(0, 1), q(-1, 2), q(1, 3), q(1, 2), q(5, 1), Nf::omega(), &Nf::eps0() + &Nf::one()] {
            let h = h_map(&b).unwrap();
            assert_eq!(g_map(&h).unwrap(), b, "g(h({b}))");
        }
        assert_eq!(h_map(&q(0, 1)).unwrap(), w(Nf::from_int(-1)));
        assert_eq!(h_map(&q(-1, 1)).unwrap(), w(Nf::from_int(-2)));
        assert_eq!(h_map(&q(-1, 2)).unwrap(), Nf::monomial(Exponent::int(-1), ratio(1, 2)));
    }

    #[test]
    fn g_cut_recursion_on_dyadics() {
        for (p, k) in [(1, 1), (1, 2), (3, 2), (5, 3), (7, 3), (11, 4)] {
            let d = Dyadic::new(p, k);
            assert_eq!(g_dyadic(&d).unwrap(), d);
        }
    }

    #[test]
    fn exp_of_purely_infinite() {
        let x = SurrealNF::omega();
        assert_eq!(exp_nf(&x, DEFAULT_DEPTH).unwrap().as_finite().unwrap(), &w(Nf::omega()));
        let e = exp_nf(&SurrealNF::eps0(), DEFAULT_DEPTH).unwrap();
        assert_eq!(e.as_finite().unwrap().to_string(), "w^w^(eps0 + 1)");
        let s = SurrealNF::finite(w(q(1, 2)));
        assert_eq!(exp_nf(&s, DEFAULT_DEPTH).unwrap().as_finite().unwrap(), &w(w(q(1, 2))));
    }

    #[test]
    fn exp_log_constants() {
        assert!(matches!(exp_nf(&SurrealNF::one(), 8), Err(Error::TranscendentalConstant(_))));
        let x = SurrealNF::finite(Nf::monomial(Exponent::int(1), coeff(2)));
        assert!(matches!(log_nf(&x, 8), Err(Error::TranscendentalConstant(_))));
        assert!(matches!(log_nf(&SurrealNF::from_int(-1), 8), Err(Error::NonPositive(_))));
        assert!(matches!(log_nf(&SurrealNF::zero(), 8), Err(Error::NonPositive(_))));
        assert_eq!(exp_nf(&SurrealNF::zero(), 8).unwrap().as_finite().unwrap(), &Nf::one());
        assert_eq!(log_nf(&SurrealNF::one(), 8).unwrap().as_finite().unwrap(), &Nf::zero());
    }

    #[test]
    fn log_of_omega_powers() {
        let l = log_nf(&SurrealNF::omega(), 8).unwrap();
        assert_eq!(l.as_finite().unwrap(), &w(w(Nf::from_int(-1))));
        let l = log_nf(&SurrealNF::finite(w(Nf::omega())), 8).unwrap();
        assert_eq!(l.as_finite().unwrap(), &Nf::omega());
        assert!(log_nf(&SurrealNF::eps0(), 8).is_err());
        let e = exp_nf(&SurrealNF::eps0(), 8).unwrap();
        assert_eq!(log_nf(&e, 8).unwrap().as_finite().unwrap(), &Nf::eps0());
    }

    #[test]
    fn log_exp_roundtrip_with_infinitesimal() {
        let x = &(&Nf::omega() + &w(Nf::from_int(-1)).scale(&coeff(3))) - &w(Nf::from_int(-2));
        let x = SurrealNF::finite(x);
        let back = log_nf(&exp_nf(&x, 12).unwrap(), 12).unwrap();
        assert!(nf_agree(&back, &x, 12).unwrap());
        let t = back.materialize(12).unwrap();
        assert!(t.floor().unwrap() < &Exponent::int(-2));
    }

    #[test]
    fn exp_is_additive() {
        let a = SurrealNF::finite(&Nf::omega() + &w(Nf::from_int(-1)));
        let b = SurrealNF::finite(&w(q(1, 2)) - &w(q(-1, 2)));
        let lhs = exp_nf(&nf_add(&a, &b), 12).unwrap();
        let rhs = nf_mul(&exp_nf(&a, 12).unwrap(), &exp_nf(&b, 12).unwrap());
        assert!(nf_agree(&lhs, &rhs, 12).unwrap());
    }

    #[test]
    fn lambda_ladder() {
        assert_eq!(lambda_of_level(0).unwrap().value(), Nf::omega());
        assert_eq!(lambda_of_level(1).unwrap().value(), w(Nf::omega()));
        assert_eq!(lambda_of_level(2).unwrap().value(), w(w(Nf::omega())));
        assert_eq!(lambda_of_level(-1).unwrap().value(), w(w(Nf::from_int(-1))));
        assert!(matches!(lambda_of_level(MAX_LEVEL + 1), Err(Error::LevelOutOfRange(_))));
        for n in -5..=5 {
            let l = lambda_of_level(n).unwrap();
            assert_eq!(LogAtomic::from_nf(&l.value()), Some(l));
        }
        assert_eq!(lambda_of_level(2).unwrap().to_string(), "exp_2(w)");
        assert_eq!(lambda_of_level(-3).unwrap().to_string(), "log_3(w)");
        let mut x = SurrealNF::omega();
        for n in 1..=4 {
            x = log_nf(&x, 8).unwrap();
            assert_eq!(x.as_finite().unwrap(), &lambda_of_level(-n).unwrap().value());
        }
    }

    #[test]
    fn log_atomicity() {
        assert!(is_log_atomic(&SurrealNF::omega(), 8).unwrap());
        assert!(is_log_atomic(&SurrealNF::finite(w(Nf::omega())), 8).unwrap());
        assert!(is_log_atomic(&SurrealNF::eps0(), 8).unwrap());
        assert!(!is_log_atomic(&SurrealNF::finite(&Nf::omega() + &Nf::one()), 8).unwrap());
        assert!(!is_log_atomic(&SurrealNF::finite(w(Nf::from_int(2))), 8).unwrap());
        assert!(!is_log_atomic(&SurrealNF::finite(Nf::monomial(Exponent::int(1), coeff(2))), 8).unwrap());
    }

    #[test]
    fn levels_and_classes() {
        let om = SurrealNF::omega();
        let om2 = SurrealNF::finite(w(Nf::from_int(2)));
        let e = SurrealNF::finite(w(Nf::omega()));
        assert!(same_level(&om, &om2, 4).unwrap());
        assert!(!same_level(&om, &e, 4).unwrap());
        assert!(same_explog_class(&om, &om2, 4).unwrap());
        assert!(same_explog_class(&om, &e, 4).unwrap());
        let ee = SurrealNF::finite(w(w(Nf::omega())));
        assert!(same_explog_class(&om, &ee, 4).unwrap());
        assert!(!same_explog_class(&om, &SurrealNF::eps0(), 4).unwrap());
        assert!(same_explog_class(&SurrealNF::eps0(), &SurrealNF::finite(Nf::eps0().scale(&coeff(2))), 4).unwrap());
        assert!(same_level(&om, &om, 0).unwrap());
    }
}
