use surreal_core::oracle::{enumerate_dyadics, first_disagreement, tree_search_simplest, Sampler, SamplerConfig};
use surreal_core::{dyadic_add, dyadic_mul, dyadic_neg, genetic_add, genetic_leq, genetic_mul, genetic_neg, simplest_between, CutExpr, Dyadic};

#[test]
fn genetic_ops_match_rational_arithmetic() {
    let none = first_disagreement(4, |a, b| {
        genetic_add(a, b) == dyadic_add(a, b)
            && genetic_mul(a, b) == dyadic_mul(a, b)
            && genetic_leq(a, b) == (a <= b)
            && genetic_neg(a) == dyadic_neg(a)
    })
    .unwrap();
    assert_eq!(none, None);
}

#[test]
fn disagreements_are_reported_smallest_first() {
    let (a, b) = first_disagreement(3, |a, b| a.birthday() + b.birthday() < 2).unwrap().unwrap();
    assert_eq!(a.birthday() + b.birthday(), 2);
}

#[test]
fn simplest_between_matches_tree_search() {
    let mut s = Sampler::new(SamplerConfig::with_seed(99));
    for _ in 0..300 {
        let mut opts: Vec<Dyadic> = (0..4).map(|_| s.dyadic(6)).collect();
        opts.sort();
        opts.dedup();
        let k = opts.len() / 2;
        let (l, r) = opts.split_at(k);
        let Ok(cut) = CutExpr::new(l.to_vec(), r.to_vec()) else { continue };
        assert_eq!(simplest_between(&cut), tree_search_simplest(l, r, 12).unwrap(), "{cut}");
    }
}

#[test]
fn enumeration_sorted_by_sign_sequence() {
    let ds = enumerate_dyadics(5).unwrap();
    let mut by_lex = ds.clone();
    by_lex.sort_by(|a, b| surreal_core::compare_lex(&a.to_sign_seq(), &b.to_sign_seq()));
    assert_eq!(ds, by_lex);
}
