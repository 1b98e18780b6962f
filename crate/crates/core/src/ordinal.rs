//! Ordinals below ε₀, plus ε₀ itself as an atom, in Cantor normal form.
//!
//! Only the Hessenberg (natural) operations are provided: they treat a
//! Cantor normal form as a polynomial in ω and agree with surreal `+`/`·`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exponent of a Cantor-normal-form term. `Eps0` is the fixed point ω^ε₀ = ε₀,
/// so the term `ω^Eps0` *is* ε₀.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum OrdExponent {
    Eps0,
    Cnf(OrdinalCnf),
}

impl OrdExponent {
    fn normalized(a: OrdinalCnf) -> OrdExponent {
        if a.is_eps0() {
            OrdExponent::Eps0
        } else {
            OrdExponent::Cnf(a)
        }
    }

    pub fn to_cnf(&self) -> OrdinalCnf {
        match self {
            OrdExponent::Eps0 => OrdinalCnf::eps0(),
            OrdExponent::Cnf(a) => a.clone(),
        }
    }
}

impl Ord for OrdExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (OrdExponent::Eps0, OrdExponent::Eps0) => Ordering::Equal,
            (OrdExponent::Eps0, OrdExponent::Cnf(b)) => eps0_vs(b),
            (OrdExponent::Cnf(a), OrdExponent::Eps0) => eps0_vs(a).reverse(),
            (OrdExponent::Cnf(a), OrdExponent::Cnf(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for OrdExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// ε₀ compared against a form that is not literally ε₀: only its leading
// term matters, and ε₀ = ω^ε₀ with coefficient 1 and nothing after.
fn eps0_vs(b: &OrdinalCnf) -> Ordering {
    match b.terms.first() {
        None => Ordering::Greater,
        Some(t) => match &t.exponent {
            OrdExponent::Eps0 => {
                if t.coefficient > BigUint::one() || b.terms.len() > 1 {
                    Ordering::Less
                } else {
                    Ordering::Equal
                }
            }
            OrdExponent::Cnf(e) => eps0_vs(e),
        },
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrdTerm {
    pub exponent: OrdExponent,
    pub coefficient: BigUint,
}

/// `Σ ω^{e_i}·c_i` with strictly decreasing exponents and positive coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct OrdinalCnf {
    terms: Vec<OrdTerm>,
}

impl OrdinalCnf {
    pub fn zero() -> Self {
        OrdinalCnf::default()
    }

    pub fn from_natural(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        OrdinalCnf {
            terms: vec![OrdTerm {
                exponent: OrdExponent::Cnf(OrdinalCnf::zero()),
                coefficient: BigUint::from(n),
            }],
        }
    }

    pub fn omega() -> Self {
        omega_pow_ordinal(&OrdinalCnf::from_natural(1))
    }

    pub fn eps0() -> Self {
        OrdinalCnf {
            terms: vec![OrdTerm {
                exponent: OrdExponent::Eps0,
                coefficient: BigUint::one(),
            }],
        }
    }

    /// Builds from `(exponent, coefficient)` pairs in any order; equal
    /// exponents are merged and zero coefficients dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (OrdinalCnf, BigUint)>) -> Self {
        terms
            .into_iter()
            .fold(OrdinalCnf::zero(), |acc, (e, c)| {
                if c.is_zero() {
                    return acc;
                }
                let single = OrdinalCnf {
                    terms: vec![OrdTerm {
                        exponent: OrdExponent::normalized(e),
                        coefficient: c,
                    }],
                };
                natural_sum(&acc, &single)
            })
    }

    pub fn terms(&self) -> &[OrdTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_eps0(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].exponent == OrdExponent::Eps0
            && self.terms[0].coefficient.is_one()
    }

    pub fn as_natural(&self) -> Option<&BigUint> {
        match self.terms.as_slice() {
            [] => None,
            [t] if t.exponent == OrdExponent::Cnf(OrdinalCnf::zero()) => Some(&t.coefficient),
            _ => None,
        }
    }

    pub fn contains_eps0(&self) -> bool {
        self.terms.iter().any(|t| match &t.exponent {
            OrdExponent::Eps0 => true,
            OrdExponent::Cnf(e) => e.contains_eps0(),
        })
    }
}

impl Ord for OrdinalCnf {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_ordinal(self, other)
    }
}

impl PartialOrd for OrdinalCnf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn compare_ordinal(a: &OrdinalCnf, b: &OrdinalCnf) -> Ordering {
    for (x, y) in a.terms.iter().zip(&b.terms) {
        let ord = x
            .exponent
            .cmp(&y.exponent)
            .then_with(|| x.coefficient.cmp(&y.coefficient));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    a.terms.len().cmp(&b.terms.len())
}

/// Polynomial addition of normal forms.
pub fn natural_sum(a: &OrdinalCnf, b: &OrdinalCnf) -> OrdinalCnf {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() || j < b.terms.len() {
        let ord = match (a.terms.get(i), b.terms.get(j)) {
            (Some(x), Some(y)) => x.exponent.cmp(&y.exponent),
            (Some(_), None) => Ordering::Greater,
            _ => Ordering::Less,
        };
        match ord {
            Ordering::Greater => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(b.terms[j].clone());
                j += 1;
            }
            Ordering::Equal => {
                out.push(OrdTerm {
                    exponent: a.terms[i].exponent.clone(),
                    coefficient: &a.terms[i].coefficient + &b.terms[j].coefficient,
                });
                i += 1;
                j += 1;
            }
        }
    }
    OrdinalCnf { terms: out }
}

/// Polynomial multiplication, adding exponents with [`natural_sum`].
pub fn natural_product(a: &OrdinalCnf, b: &OrdinalCnf) -> OrdinalCnf {
    let mut acc = OrdinalCnf::zero();
    for x in &a.terms {
        for y in &b.terms {
            let exponent = natural_sum(&x.exponent.to_cnf(), &y.exponent.to_cnf());
            let term = OrdinalCnf {
                terms: vec![OrdTerm {
                    exponent: OrdExponent::normalized(exponent),
                    coefficient: &x.coefficient * &y.coefficient,
                }],
            };
            acc = natural_sum(&acc, &term);
        }
    }
    acc
}

/// `ω^a` as a single-term normal form; `ω^ε₀` collapses to ε₀.
pub fn omega_pow_ordinal(a: &OrdinalCnf) -> OrdinalCnf {
    OrdinalCnf {
        terms: vec![OrdTerm {
            exponent: OrdExponent::normalized(a.clone()),
            coefficient: BigUint::one(),
        }],
    }
}

fn exponent_is_atomic(e: &OrdinalCnf) -> bool {
    match e.terms.as_slice() {
        [] => true,
        [t] => t.coefficient.is_one() || e.as_natural().is_some(),
        _ => false,
    }
}

impl fmt::Display for OrdExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrdExponent::Eps0 => f.write_str("eps0"),
            OrdExponent::Cnf(e) if exponent_is_atomic(e) => write!(f, "{e}"),
            OrdExponent::Cnf(e) => write!(f, "({e})"),
        }
    }
}

impl fmt::Display for OrdinalCnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let base = match &t.exponent {
                OrdExponent::Eps0 => "eps0".to_string(),
                OrdExponent::Cnf(e) if e.is_zero() => {
                    write!(f, "{}", t.coefficient)?;
                    continue;
                }
                OrdExponent::Cnf(e) if e.as_natural().is_some_and(|n| n.is_one()) => "w".to_string(),
                exp => format!("w^{exp}"),
            };
            f.write_str(&base)?;
            if !t.coefficient.is_one() {
                write!(f, "*{}", t.coefficient)?;
            }
        }
        Ok(())
    }
}

/// Parses the text forms `w`, `w^w`, `w^2*3 + w + 4`, `eps0`.
impl FromStr for OrdinalCnf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = OrdParser {
            src: s.as_bytes(),
            pos: 0,
        };
        let v = p.sum()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(v)
    }
}

struct OrdParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl OrdParser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<OrdinalCnf> {
        let mut terms = vec![self.term()?];
        while self.eat(b'+') {
            terms.push(self.term()?);
        }
        let mut acc = OrdinalCnf::zero();
        for t in terms {
            if let (Some(last), Some(first)) = (acc.terms.last(), t.terms.first()) {
                if last.exponent <= first.exponent {
                    return Err(self.error("terms are not in Cantor normal form"));
                }
            }
            acc = natural_sum(&acc, &t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<OrdinalCnf> {
        let base = self.atom()?;
        if self.eat(b'*') {
            let n = self.natural()?;
            return Ok(natural_product(&base, &OrdinalCnf::from_natural(n)));
        }
        Ok(base)
    }

    fn natural(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a natural number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("natural number too large"))
    }

    fn atom(&mut self) -> Result<OrdinalCnf> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.first().is_some_and(|c| c.is_ascii_digit()) {
            return Ok(OrdinalCnf::from_natural(self.natural()?));
        }
        if rest.starts_with(b"eps") {
            self.pos += 3;
            let n = self.natural()?;
            if n != 0 {
                return Err(Error::UnsupportedOrdinal(format!("eps{n}")));
            }
            return Ok(OrdinalCnf::eps0());
        }
        if self.eat(b'(') {
            let v = self.sum()?;
            if !self.eat(b')') {
                return Err(self.error("expected ')'"));
            }
            return Ok(v);
        }
        if self.eat(b'w') {
            if self.eat(b'^') {
                let e = self.atom()?;
                return Ok(omega_pow_ordinal(&e));
            }
            return Ok(OrdinalCnf::omega());
        }
        Err(self.error("expected an ordinal"))
    }
}
