mod oracles;

use indep::ramsey::{self, RamseyError};
use indep::trees::{self, FiniteTree, Indicator, SizeBound};
use rayon::prelude::*;

use oracles::SetKind;

const SPACE: u64 = 20_000;

#[test]
fn ph_arrow_matches_oracle() {
    let mut cases = Vec::new();
    for a1 in 0..=2u64 {
        for len in 1..=6u64 {
            for b in 1..=4 {
                for c in 1..=3 {
                    for d in 1..=3 {
                        cases.push((a1, a1 + len - 1, b, c, d));
                    }
                }
            }
        }
    }
    let checked: usize = cases
        .par_iter()
        .map(|&(a1, a2, b, c, d)| match ramsey::ph_arrow(a1, a2, b, c, d, SPACE) {
            Ok(out) => {
                let o = oracles::ph_arrow(a1, a2, b, c, d);
                assert_eq!(out.holds, o.holds, "{:?}", (a1, a2, b, c, d));
                if out.counterexample.is_some() {
                    assert_eq!(Some(out.explored - 1), o.first_failure);
                }
                1
            }
            Err(RamseyError::BudgetExceeded { .. }) => 0,
            Err(e) => panic!("{e}"),
        })
        .sum();
    assert!(checked > 400, "only {checked} instances decided");
}

#[test]
fn km_arrow_matches_oracle() {
    let mut cases = Vec::new();
    for a in 0..=3u64 {
        for len in 1..=6u64 {
            for n in 1..=3 {
                for k in n..=5 {
                    cases.push((a, a + len - 1, k, n));
                }
            }
        }
    }
    let checked: usize = cases
        .par_iter()
        .map(|&(a, b, k, n)| match ramsey::km_arrow(a, b, k, n, SPACE) {
            Ok(out) => {
                let o = oracles::km_arrow(a, b, k, n);
                assert_eq!(out.holds, o.holds, "{:?}", (a, b, k, n));
                if let Some(f) = &out.counterexample {
                    assert_eq!(Some(out.explored - 1), o.first_failure);
                    let h: Vec<u64> = (a..=b).collect();
                    assert!(!ramsey::is_min_homogeneous(&h[..k as usize], f).unwrap());
                }
                1
            }
            Err(RamseyError::BudgetExceeded { .. }) => 0,
            Err(e) => panic!("{e}"),
        })
        .sum();
    assert!(checked > 150, "only {checked} instances decided");
}

#[test]
fn enumeration_matches_labelings() {
    for n in 1..=8 {
        let ours: Vec<String> = trees::enumerate_trees(n)
            .unwrap()
            .iter()
            .map(|t| t.encoding().to_string())
            .collect();
        let reference: Vec<String> = oracles::trees_by_labelings(n).into_iter().collect();
        assert_eq!(ours, reference, "size {n}");
        assert_eq!(trees::count_trees(n).unwrap(), ours.len().into());
    }
}

#[test]
fn embedding_matches_injection_search() {
    let all: Vec<FiniteTree> = (1..=5).flat_map(|n| trees::enumerate_trees(n).unwrap()).collect();
    for s in &all {
        for t in &all {
            assert_eq!(
                trees::inf_embeds(s, t),
                oracles::inf_embeds(s.encoding(), t.encoding()),
                "{s} into {t}"
            );
        }
    }
}

#[test]
fn fkt_matches_sequence_search() {
    for k in 1..=3u64 {
        for m in 0..=3u64 {
            let ours = trees::fkt_check(k, &SizeBound::Zero, m, 1_000_000).unwrap();
            let bad = oracles::bad_sequence_exists(m as usize, |_| k as usize);
            assert_eq!(ours.holds, !bad, "K={k} M={m}");
        }
    }
    for m in 0..=3u64 {
        let ours = trees::fkt_check(1, &SizeBound::Identity, m, 1_000_000).unwrap();
        let bad = oracles::bad_sequence_exists(m as usize, |i| 1 + i);
        assert_eq!(ours.holds, !bad, "id M={m}");
    }
}

#[test]
fn regal_and_kiralic_match_reference() {
    let universe: Vec<u64> = (0..=6).collect();
    for mask in 1u32..1 << universe.len() {
        let x: Vec<u64> = universe.iter().copied().filter(|&v| mask >> v & 1 == 1).collect();
        if x.len() > 5 {
            continue;
        }
        for k in 0..=2 {
            assert_eq!(
                trees::is_regal(&x, k, 1_000_000).unwrap().holds,
                oracles::set_property(SetKind::Regal, &x, k),
                "regal {x:?} {k}"
            );
            assert_eq!(
                trees::is_kiralic(&x, k, 1_000_000).unwrap().holds,
                oracles::set_property(SetKind::Kiralic, &x, k),
                "kiralic {x:?} {k}"
            );
        }
    }
}

#[test]
fn indicators_match_reference() {
    let as_opt = |i: Indicator| match i {
        Indicator::NotEvenZero => None,
        Indicator::Value(k) => Some(k),
    };
    for a in 0..=2 {
        for b in a..=a + 5 {
            let z = trees::regal_indicator(a, b, 1_000_000).unwrap().value;
            let w = trees::kiralic_indicator(a, b, 1_000_000).unwrap().value;
            assert_eq!(as_opt(z), oracles::indicator(SetKind::Regal, a, b, 4), "Z({a},{b})");
            assert_eq!(as_opt(w), oracles::indicator(SetKind::Kiralic, a, b, 4), "W({a},{b})");
        }
    }
}
