//! Evaluation of parsed expressions and rendering of the results.

use std::str::FromStr;

use num_traits::{Signed, ToPrimitive};
use surreal_core::derivation::derive;
use surreal_core::series::{nf_div, nf_mul, nf_pow_int, nth_root, omega_map};
use surreal_core::{encode_sign, exp_nf, log_nf, simplest_between, CutExpr, Dyadic, Error, Nf, SurrealNF};
use thiserror::Error as ThisError;

use crate::syntax::{parse, BinOp, Expr, Func, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Nf,
    Sign,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "nf" => Ok(Format::Nf),
            "sign" => Ok(Format::Sign),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format '{s}' (expected nf, sign or json)")),
        }
    }
}

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Eval(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Eval(_) => 1,
        }
    }
}

fn rational_of(x: &SurrealNF) -> Option<surreal_core::Coeff> {
    x.as_finite().and_then(Nf::as_rational)
}

fn dyadic_of(x: &SurrealNF) -> Result<Dyadic, Error> {
    let r = rational_of(x).ok_or_else(|| Error::NotDyadic(format!("{x:?}")))?;
    Dyadic::from_rational(&r)
}

fn power(base: &SurrealNF, exponent: &SurrealNF, depth: usize) -> Result<SurrealNF, Error> {
    if base.as_finite() == Some(&Nf::omega()) {
        return omega_map(exponent, depth);
    }
    let Some(q) = rational_of(exponent) else {
        return Err(Error::OutsideFragment(
            "powers need a rational exponent unless the base is w".to_string(),
        ));
    };
    let p = q.numer().to_i64().ok_or(Error::BoundExceeded("power exponent".to_string()))?;
    let n = q.denom().to_u32().ok_or(Error::BoundExceeded("root index".to_string()))?;
    let root = if n == 1 { base.clone() } else { nth_root(base, n, depth)? };
    nf_pow_int(&root, p, depth)
}

pub fn evaluate(e: &Expr, depth: usize) -> Result<SurrealNF, Error> {
    Ok(match e {
        Expr::Int(n) => SurrealNF::from_rational(surreal_core::Coeff::from_integer(n.clone())),
        Expr::Omega => SurrealNF::omega(),
        Expr::Eps0 => SurrealNF::eps0(),
        Expr::Neg(x) => -evaluate(x, depth)?,
        Expr::Bin(op, a, b) => {
            let (a, b) = (evaluate(a, depth)?, evaluate(b, depth)?);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => nf_mul(&a, &b),
                BinOp::Div => nf_div(&a, &b, depth)?,
                BinOp::Pow => power(&a, &b, depth)?,
            }
        }
        Expr::Call(f, args) => match f {
            Func::Exp => exp_nf(&evaluate(&args[0], depth)?, depth)?,
            Func::Log => log_nf(&evaluate(&args[0], depth)?, depth)?,
            Func::D => derive(&evaluate(&args[0], depth)?, depth)?.value,
            Func::Root => {
                let n = rational_of(&evaluate(&args[0], depth)?)
                    .filter(|r| r.is_integer() && r.is_positive())
                    .and_then(|r| r.to_integer().to_u32())
                    .ok_or_else(|| Error::OutsideFragment("root index must be a positive integer".to_string()))?;
                nth_root(&evaluate(&args[1], depth)?, n, depth)?
            }
        },
        Expr::Cut(l, r) => {
            let side = |xs: &[Expr]| -> Result<Vec<Dyadic>, Error> {
                xs.iter().map(|x| dyadic_of(&evaluate(x, depth)?)).collect()
            };
            let cut = CutExpr::new(side(l)?, side(r)?)?;
            SurrealNF::finite(Nf::from_dyadic(&simplest_between(&cut)))
        }
    })
}

pub fn render(x: &SurrealNF, format: Format, depth: usize) -> Result<String, Error> {
    match format {
        Format::Nf => x.render_text(depth),
        Format::Json => Ok(x.render_json(depth)?.to_string()),
        Format::Sign => {
            let r = rational_of(x).ok_or(Error::SignFormatOnSeries)?;
            let d = Dyadic::from_rational(&r).map_err(|_| Error::SignFormatOnSeries)?;
            Ok(encode_sign(&d).to_string())
        }
    }
}

/// Parses, evaluates and renders one line.
pub fn run(src: &str, format: Format, depth: usize) -> Result<String, CliError> {
    let e = parse(src)?;
    let v = evaluate(&e, depth)?;
    Ok(render(&v, format, depth)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(s: &str) -> String {
        run(s, Format::Nf, 20).unwrap()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(nf("w * (1/w)"), "1");
        assert_eq!(nf("exp(w)"), "w^w");
        assert_eq!(nf("d(w^2)"), "w*2");
        assert_eq!(nf("exp(eps0)"), "w^w^(eps0 + 1)");
        assert_eq!(nf("w^2*3 + 5 + w^-1*7"), "w^2*3 + 5 + w^-1*7");
        assert_eq!(nf("{0|1}"), "1/2");
        assert_eq!(nf("root(2, w^2 + w*2 + 1)"), "w + 1");
        assert_eq!(nf("(w^2)^(1/2)"), "w");
        assert_eq!(nf("log(w)"), "w^w^-1");
    }

    #[test]
    fn streams_are_marked() {
        assert_eq!(
            run("1/(1 - w^-1)", Format::Nf, 3).unwrap(),
            "1 + w^-1 + w^-2 + ... (truncated at depth 3)"
        );
    }

    #[test]
    fn sign_format() {
        assert_eq!(run("1/2", Format::Sign, 20).unwrap(), "+-");
        assert_eq!(run("0", Format::Sign, 20).unwrap(), "");
        assert!(matches!(run("w", Format::Sign, 20), Err(CliError::Eval(Error::SignFormatOnSeries))));
    }

    #[test]
    fn error_codes() {
        assert_eq!(run("1/0", Format::Nf, 20).unwrap_err().exit_code(), 1);
        assert_eq!(run("exp(1)", Format::Nf, 20).unwrap_err().exit_code(), 1);
        assert_eq!(run("1 +", Format::Nf, 20).unwrap_err().exit_code(), 2);
        assert_eq!(run("{1/3 | 1}", Format::Nf, 20).unwrap_err().exit_code(), 1);
    }
}
