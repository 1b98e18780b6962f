//! Text and JSON renderings of normal forms.
//!
//! Text uses the calculator grammar, so exact renderings parse back to the
//! same value: `w^2*3 + 5 + w^-1*7`, `w^(1/2)*2`, `w^w^(eps0 + 1)`.

use std::fmt;

use num_traits::{One, Signed};
use serde_json::{json, Value};

use super::nf::{Coeff, Exponent, Nf, Term};

fn coeff_text(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn exponent_text(e: &Exponent) -> String {
    match e {
        Exponent::Eps0 => "eps0".to_string(),
        Exponent::Nf(a) => {
            let s = render_nf(a);
            let atomic = a.as_integer().is_some()
                || (a.len() == 1 && a.terms()[0].coefficient().abs().is_one());
            if atomic {
                s
            } else {
                format!("({s})")
            }
        }
    }
}

fn monomial_text(e: &Exponent) -> String {
    match e {
        Exponent::Eps0 => "eps0".to_string(),
        Exponent::Nf(a) if a.is_one() => "w".to_string(),
        _ => format!("w^{}", exponent_text(e)),
    }
}

/// The term without its sign.
fn term_magnitude(t: &Term) -> String {
    let c = t.coefficient().abs();
    if t.exponent().is_zero() {
        return coeff_text(&c);
    }
    let m = monomial_text(t.exponent());
    if c.is_one() {
        m
    } else {
        format!("{m}*{}", coeff_text(&c))
    }
}

/// Renders a term list; `more` appends an ellipsis for an unknown tail.
pub fn render_terms(terms: &[Term], more: bool) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let neg = t.coefficient().is_negative();
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&term_magnitude(t));
    }
    if more {
        if out.is_empty() {
            out.push_str("...");
        } else {
            out.push_str(" + ...");
        }
    } else if out.is_empty() {
        out.push('0');
    }
    out
}

/// Renders a prefix, marking it when the value continues past `depth` terms.
pub fn render_text(terms: &[Term], truncated_at: Option<usize>) -> String {
    match truncated_at {
        None => render_terms(terms, false),
        Some(depth) => format!("{} (truncated at depth {depth})", render_terms(terms, true)),
    }
}

pub fn render_nf(nf: &Nf) -> String {
    render_terms(nf.terms(), false)
}

fn exponent_json(e: &Exponent) -> Value {
    match e {
        Exponent::Eps0 => Value::String("eps0".to_string()),
        Exponent::Nf(a) => terms_json(a.terms(), false),
    }
}

/// `{"terms": [{"exp": ..., "coef": "p/q"}, ...], "truncated": bool}`;
/// exponents nest the same shape, and the ε₀ atom is the string `"eps0"`.
pub fn terms_json(terms: &[Term], truncated: bool) -> Value {
    let terms: Vec<Value> = terms
        .iter()
        .map(|t| {
            json!({
                "exp": exponent_json(t.exponent()),
                "coef": format!("{}/{}", t.coefficient().numer(), t.coefficient().denom()),
            })
        })
        .collect();
    json!({ "terms": terms, "truncated": truncated })
}

pub fn nf_json(nf: &Nf) -> Value {
    terms_json(nf.terms(), false)
}

impl fmt::Display for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_nf(self))
    }
}

impl fmt::Debug for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Nf({self})")
    }
}
