//! Built-in self checks and the counterexample search behind `surcalc oracle`.

use std::fmt::Write as _;

use surreal_core::oracle::{first_disagreement, tree_search_simplest, Sampler, SamplerConfig};
use surreal_core::{
    check_derivation_axioms, dyadic_add, dyadic_mul, genetic_add, genetic_leq, genetic_mul, simplest_between, CutExpr,
    Dyadic, Result,
};

use crate::eval::{run, Format};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleOp {
    Add,
    Mul,
    Leq,
}

impl std::str::FromStr for OracleOp {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "add" => Ok(OracleOp::Add),
            "mul" => Ok(OracleOp::Mul),
            "leq" => Ok(OracleOp::Leq),
            _ => Err(format!("unknown operation '{s}' (expected add, mul or leq)")),
        }
    }
}

/// The smallest pair on which the genetic operation disagrees with rational arithmetic.
pub fn minimal_counterexample(op: OracleOp, max_birthday: usize) -> Result<Option<(Dyadic, Dyadic)>> {
    first_disagreement(max_birthday, |a, b| match op {
        OracleOp::Add => genetic_add(a, b) == dyadic_add(a, b),
        OracleOp::Mul => genetic_mul(a, b) == dyadic_mul(a, b),
        OracleOp::Leq => genetic_leq(a, b) == (a <= b),
    })
}

pub struct SelfTest {
    pub text: String,
    pub passed: bool,
}

pub fn selftest(seed: u64) -> SelfTest {
    let mut text = String::new();
    let mut passed = true;
    let mut line = |name: &str, ok: bool, detail: String| {
        passed &= ok;
        let _ = writeln!(text, "{:<24} {}  {detail}", name, if ok { "pass" } else { "FAIL" });
    };

    for op in [OracleOp::Add, OracleOp::Mul, OracleOp::Leq] {
        let r = minimal_counterexample(op, 4);
        let detail = match &r {
            Ok(None) => "birthday <= 4".to_string(),
            Ok(Some((a, b))) => format!("counterexample ({a}, {b})"),
            Err(e) => e.to_string(),
        };
        line(&format!("genetic_{op:?}").to_lowercase(), matches!(r, Ok(None)), detail);
    }

    let mut s = Sampler::new(SamplerConfig::with_seed(seed));
    let mut agree = 0;
    let mut total = 0;
    while total < 200 {
        let mut opts: Vec<Dyadic> = (0..4).map(|_| s.dyadic(8)).collect();
        opts.sort();
        opts.dedup();
        let (l, r) = opts.split_at(opts.len() / 2);
        let Ok(cut) = CutExpr::new(l.to_vec(), r.to_vec()) else { continue };
        total += 1;
        agree += (tree_search_simplest(l, r, 16).ok() == Some(simplest_between(&cut))) as usize;
    }
    line("simplest_between", agree == total, format!("{agree}/{total} cuts"));

    for (src, want) in [("w * (1/w)", "1"), ("exp(w)", "w^w"), ("d(w^2)", "w*2"), ("w^-2 * w^-3", "w^-5")] {
        let got = run(src, Format::Nf, 20).unwrap_or_else(|e| e.to_string());
        line(src, got == want, got);
    }

    let report = check_derivation_axioms(seed, 50, 12);
    for c in &report.checks {
        let detail = match &c.first_failure {
            None => format!("{}/{}", c.samples - c.failures, c.samples),
            Some(f) => format!("{}/{} first failure: {f}", c.samples - c.failures, c.samples),
        };
        line(&c.name, c.failures == 0, detail);
    }
    SelfTest { text, passed }
}
