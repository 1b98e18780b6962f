//! Dyadic rationals: the surreal numbers with a finite birthday.
//!
//! A dyadic `n / 2^k` sits at depth `birthday` in the binary tree of
//! surreals; its path from the root is its sign sequence.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact `numerator / 2^log2_denominator`, always stored reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigInt,
    log2_denominator: u32,
}

impl Dyadic {
    pub fn new(numerator: impl Into<BigInt>, log2_denominator: u32) -> Self {
        let mut numerator = numerator.into();
        let mut log2_denominator = log2_denominator;
        if numerator.is_zero() {
            return Self::zero();
        }
        while log2_denominator > 0 && numerator.is_even() {
            numerator >>= 1;
            log2_denominator -= 1;
        }
        Dyadic {
            numerator,
            log2_denominator,
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            numerator: BigInt::zero(),
            log2_denominator: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic {
            numerator: BigInt::from(n),
            log2_denominator: 0,
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn log2_denominator(&self) -> u32 {
        self.log2_denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.log2_denominator == 0
    }

    pub fn signum(&self) -> i32 {
        if self.numerator.is_positive() {
            1
        } else if self.numerator.is_negative() {
            -1
        } else {
            0
        }
    }

    /// `self / 2`
    pub fn half(&self) -> Self {
        Dyadic::new(self.numerator.clone(), self.log2_denominator + 1)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(
            self.numerator.clone(),
            BigInt::one() << self.log2_denominator as usize,
        )
    }

    /// Converts a rational whose reduced denominator is a power of two.
    pub fn from_rational(r: &BigRational) -> Result<Self> {
        let denom = r.denom();
        let bits = denom.bits();
        if bits == 0 || (denom.clone() & (denom.clone() - BigInt::one())) != BigInt::zero() {
            return Err(Error::NotDyadic(r.to_string()));
        }
        Ok(Dyadic::new(r.numer().clone(), (bits - 1) as u32))
    }

    /// Length of the sign sequence, i.e. the day on which this number is born.
    pub fn birthday(&self) -> usize {
        // Integer part contributes |n| signs, each fractional bit one more.
        let int_part = self.floor_abs_part();
        if self.log2_denominator == 0 {
            int_part
        } else {
            int_part + 1 + self.log2_denominator as usize
        }
    }

    // |trunc(self)|, the number of signs spent before the fractional descent.
    fn floor_abs_part(&self) -> usize {
        let q = self.numerator.abs() >> self.log2_denominator as usize;
        q.to_usize().expect("integer part too large to have a sign sequence")
    }

    pub fn to_sign_seq(&self) -> SignSeq {
        encode_sign(self)
    }

    // Align both values to a common denominator.
    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u32) {
        let k = self.log2_denominator.max(other.log2_denominator);
        let a = &self.numerator << (k - self.log2_denominator) as usize;
        let b = &other.numerator << (k - other.log2_denominator) as usize;
        (a, b, k)
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::zero()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn dyadic_add(a: &Dyadic, b: &Dyadic) -> Dyadic {
    let (x, y, k) = a.aligned(b);
    Dyadic::new(x + y, k)
}

pub fn dyadic_mul(a: &Dyadic, b: &Dyadic) -> Dyadic {
    Dyadic::new(
        &a.numerator * &b.numerator,
        a.log2_denominator + b.log2_denominator,
    )
}

pub fn dyadic_neg(a: &Dyadic) -> Dyadic {
    Dyadic {
        numerator: -a.numerator.clone(),
        log2_denominator: a.log2_denominator,
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        dyadic_add(self, rhs)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        dyadic_add(self, &dyadic_neg(rhs))
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        dyadic_mul(self, rhs)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        dyadic_neg(self)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log2_denominator == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(
                f,
                "{}/{}",
                self.numerator,
                BigInt::one() << self.log2_denominator as usize
            )
        }
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p`, `p/q` with `q` a power of two, and `p/2^k`.
impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid dyadic literal {s:?}"));
        match s.split_once('/') {
            None => Ok(Dyadic::new(s.parse::<BigInt>().map_err(|_| bad())?, 0)),
            Some((p, q)) => {
                let p = p.trim().parse::<BigInt>().map_err(|_| bad())?;
                let q = q.trim();
                if let Some(k) = q.strip_prefix("2^") {
                    let k = k.parse::<u32>().map_err(|_| bad())?;
                    Ok(Dyadic::new(p, k))
                } else {
                    let q = q.parse::<BigInt>().map_err(|_| bad())?;
                    if q.is_zero() {
                        return Err(Error::ZeroDivision);
                    }
                    Dyadic::from_rational(&BigRational::new(p, q))
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    // Position in the order ⊖ < 0 < ⊕, with 0 standing for "no sign".
    fn rank(sign: Option<Sign>) -> i8 {
        match sign {
            Some(Sign::Minus) => -1,
            None => 0,
            Some(Sign::Plus) => 1,
        }
    }
}

/// A finite path in the binary tree of surreals, rendered over `+`/`-`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SignSeq {
    signs: Vec<Sign>,
}

impl SignSeq {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignSeq { signs }
    }

    pub fn empty() -> Self {
        SignSeq::default()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn flipped(&self) -> SignSeq {
        SignSeq::new(self.signs.iter().map(|s| s.flip()).collect())
    }

    pub fn decode(&self) -> Dyadic {
        decode_sign(self)
    }
}

impl fmt::Display for SignSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.signs {
            f.write_str(match s {
                Sign::Plus => "+",
                Sign::Minus => "-",
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SignSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignSeq({self})")
    }
}

impl FromStr for SignSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(Error::Parse(format!("invalid sign {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignSeq::new)
    }
}

/// Cursor for descending the tree: the current node and the open interval
/// its subtree occupies (`None` is an infinite end).
#[derive(Clone, Debug)]
pub(crate) struct TreeCursor {
    pub value: Dyadic,
    lower: Option<Dyadic>,
    upper: Option<Dyadic>,
}

impl TreeCursor {
    pub fn root() -> Self {
        TreeCursor {
            value: Dyadic::zero(),
            lower: None,
            upper: None,
        }
    }

    pub fn step(&mut self, sign: Sign) {
        let next = match sign {
            Sign::Plus => match &self.upper {
                None => &self.value + &Dyadic::one(),
                Some(hi) => (&self.value + hi).half(),
            },
            Sign::Minus => match &self.lower {
                None => &self.value - &Dyadic::one(),
                Some(lo) => (lo + &self.value).half(),
            },
        };
        let parent = std::mem::replace(&mut self.value, next);
        match sign {
            Sign::Plus => self.lower = Some(parent),
            Sign::Minus => self.upper = Some(parent),
        }
    }
}

pub fn encode_sign(d: &Dyadic) -> SignSeq {
    let mut cursor = TreeCursor::root();
    let mut signs = Vec::with_capacity(d.birthday());
    loop {
        let sign = match d.cmp(&cursor.value) {
            Ordering::Equal => break,
            Ordering::Greater => Sign::Plus,
            Ordering::Less => Sign::Minus,
        };
        signs.push(sign);
        cursor.step(sign);
    }
    SignSeq::new(signs)
}

pub fn decode_sign(s: &SignSeq) -> Dyadic {
    let mut cursor = TreeCursor::root();
    for &sign in s.signs() {
        cursor.step(sign);
    }
    cursor.value
}

/// Lexicographic order with ⊖ < (absent) < ⊕.
pub fn compare_lex(a: &SignSeq, b: &SignSeq) -> Ordering {
    let n = a.len().max(b.len());
    for i in 0..n {
        let x = Sign::rank(a.signs.get(i).copied());
        let y = Sign::rank(b.signs.get(i).copied());
        match x.cmp(&y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// True iff `a` is a proper initial segment of `b`.
pub fn is_simpler(a: &SignSeq, b: &SignSeq) -> bool {
    a.len() < b.len() && b.signs.starts_with(&a.signs)
}
