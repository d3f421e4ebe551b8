//! Fuel-bounded evaluation of the Hardy hierarchy.
//!
//! `H_0(n) = n`, `H_{α+1}(n) = H_α(n+1)` and `H_λ(n) = H_{λ[n]}(n)` for limits.
//! The evaluator applies exactly one of these rules per step and never
//! memoizes, so a trace is the literal recursion.

use std::io::{self, Write};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::ordinal::{Cnf, Nat, Ordinal};

/// Tallest ε₀-tower the evaluator will build for `ε₀[n]`.
pub const MAX_TOWER: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HardyError {
    #[error("fuel must be at least 1")]
    ZeroFuel,
    #[error("e0[{0}] is a tower taller than {MAX_TOWER}")]
    TowerTooTall(Nat),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Value(Nat),
    FuelExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardyResult {
    pub outcome: Outcome,
    pub steps_used: u64,
}

impl HardyResult {
    pub fn value(&self) -> Option<&Nat> {
        match &self.outcome {
            Outcome::Value(v) => Some(v),
            Outcome::FuelExhausted => None,
        }
    }
}

/// Current `(α, n)` of a running evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardyState {
    pub ordinal: Ordinal,
    pub n: Nat,
}

enum Step {
    Continue,
    Done,
}

impl HardyState {
    pub fn new(ordinal: Ordinal, n: Nat) -> Self {
        HardyState { ordinal, n }
    }

    fn apply_rule(&mut self) -> Result<Step, HardyError> {
        match &mut self.ordinal {
            Ordinal::EpsilonZero => {
                let height = self
                    .n
                    .to_u64()
                    .filter(|h| *h <= MAX_TOWER)
                    .ok_or_else(|| HardyError::TowerTooTall(self.n.clone()))?;
                self.ordinal = Ordinal::Below(Cnf::tower(height as usize));
                Ok(Step::Continue)
            }
            Ordinal::Below(c) if c.is_zero() => Ok(Step::Done),
            Ordinal::Below(c) => {
                // `descend` ignores n on successors, so the branch only
                // decides whether n moves.
                let successor = c.is_successor();
                c.descend(&self.n);
                if successor {
                    self.n += 1u32;
                }
                Ok(Step::Continue)
            }
        }
    }
}

fn run(
    ordinal: &Ordinal,
    n: &Nat,
    fuel: u64,
    mut visit: impl FnMut(&HardyState),
) -> Result<HardyResult, HardyError> {
    if fuel == 0 {
        return Err(HardyError::ZeroFuel);
    }
    let mut state = HardyState::new(ordinal.clone(), n.clone());
    for step in 1..=fuel {
        visit(&state);
        if let Step::Done = state.apply_rule()? {
            return Ok(HardyResult {
                outcome: Outcome::Value(state.n),
                steps_used: step,
            });
        }
    }
    Ok(HardyResult {
        outcome: Outcome::FuelExhausted,
        steps_used: fuel,
    })
}

/// `H_α(n)`, or [`Outcome::FuelExhausted`] after `fuel` rule applications.
pub fn hardy_eval(ordinal: &Ordinal, n: &Nat, fuel: u64) -> Result<HardyResult, HardyError> {
    run(ordinal, n, fuel, |_| {})
}

/// Every `(α, n)` at which a rule was applied, in order. The final entry has
/// `α = 0` exactly when the evaluation finished within `fuel`.
pub fn hardy_trace(ordinal: &Ordinal, n: &Nat, fuel: u64) -> Result<Vec<HardyState>, HardyError> {
    let mut trace = Vec::new();
    run(ordinal, n, fuel, |s| trace.push(s.clone()))?;
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthCell {
    pub ordinal_index: usize,
    pub ordinal: Ordinal,
    pub n: u64,
    pub result: HardyResult,
}

/// `H_α(n)` for every listed α and `n ∈ [0, n_max]`, ordered by
/// `(ordinal index, n)` regardless of how cells were scheduled.
pub fn growth_table(
    ordinals: &[Ordinal],
    n_max: u64,
    fuel: u64,
) -> Result<Vec<GrowthCell>, HardyError> {
    let cells: Vec<(usize, u64)> = (0..ordinals.len())
        .flat_map(|i| (0..=n_max).map(move |n| (i, n)))
        .collect();
    cells
        .into_par_iter()
        .map(|(i, n)| {
            let result = hardy_eval(&ordinals[i], &BigUint::from(n), fuel)?;
            Ok(GrowthCell {
                ordinal_index: i,
                ordinal: ordinals[i].clone(),
                n,
                result,
            })
        })
        .collect()
}

pub const GROWTH_CSV_HEADER: &str = "ordinal,n,value,steps,status";

pub fn write_growth_csv<W: Write>(cells: &[GrowthCell], mut out: W) -> io::Result<()> {
    writeln!(out, "{GROWTH_CSV_HEADER}")?;
    for c in cells {
        let (value, status) = match &c.result.outcome {
            Outcome::Value(v) => (v.to_string(), "value"),
            Outcome::FuelExhausted => (String::new(), "fuel-exhausted"),
        };
        writeln!(
            out,
            "{},{},{},{},{}",
            c.ordinal, c.n, value, c.result.steps_used, status
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn n(v: u64) -> Nat {
        Nat::from(v)
    }

    fn value(a: &str, x: u64, fuel: u64) -> Option<Nat> {
        hardy_eval(&o(a), &n(x), fuel).unwrap().value().cloned()
    }

    #[test]
    fn eval_examples() {
        let r = hardy_eval(&o("0"), &n(5), 10).unwrap();
        assert_eq!(r.outcome, Outcome::Value(n(5)));
        assert_eq!(r.steps_used, 1);
        assert_eq!(value("w^(1)*1", 4, 100), Some(n(8)));
        assert_eq!(value("w^(1)*2", 3, 100), Some(n(12)));
        assert_eq!(value("e0", 2, 1000), Some(n(8)));
    }

    #[test]
    fn trace_examples() {
        let pairs = |a: &str, x: u64| -> Vec<(String, u64)> {
            hardy_trace(&o(a), &n(x), 10)
                .unwrap()
                .into_iter()
                .map(|s| (s.ordinal.to_string(), s.n.to_u64().unwrap()))
                .collect()
        };
        assert_eq!(pairs("1", 0), [("1".into(), 0), ("0".into(), 1)]);
        assert_eq!(
            pairs("w^(1)*1", 2),
            [
                ("w^(1)*1".into(), 2),
                ("2".into(), 2),
                ("1".into(), 3),
                ("0".into(), 4)
            ]
        );
        assert_eq!(pairs("0", 7), [("0".into(), 7)]);
    }

    #[test]
    fn fuel_exhaustion_is_a_value() {
        let r = hardy_eval(&o("w^(1)*1"), &n(4), 3).unwrap();
        assert_eq!(r.outcome, Outcome::FuelExhausted);
        assert_eq!(r.steps_used, 3);
        assert_eq!(hardy_trace(&o("w^(1)*1"), &n(4), 3).unwrap().len(), 3);
        // exactly enough fuel: limit step, four successor steps, base step
        assert_eq!(hardy_eval(&o("w^(1)*1"), &n(4), 6).unwrap().steps_used, 6);
        assert_eq!(hardy_eval(&o("0"), &n(0), 0), Err(HardyError::ZeroFuel));
    }

    #[test]
    fn closed_forms() {
        for k in 0..=20u64 {
            for x in 0..=20u64 {
                assert_eq!(value(&k.to_string(), x, 100), Some(n(x + k)));
            }
        }
        for k in 1..=6u64 {
            for x in 0..=8u64 {
                let a = format!("w^(1)*{k}");
                assert_eq!(value(&a, x, 1 << 20), Some(n((1 << k) * x)), "{a} at {x}");
            }
        }
        for x in 0..=5u64 {
            assert_eq!(value("w^(2)*1", x, 1 << 20), Some(n((1 << x) * x)));
        }
    }

    #[test]
    fn traces_descend_strictly() {
        for a in ["w^(2)*1+w^(1)*2+1", "w^(w^(1)*1)*1", "e0"] {
            let t = hardy_trace(&o(a), &n(2), 10_000).unwrap();
            assert!(t.windows(2).all(|w| w[1].ordinal < w[0].ordinal), "{a}");
        }
    }

    #[test]
    fn monotone_in_n() {
        for a in ["0", "1", "w^(1)*1", "w^(1)*1+1", "w^(1)*2", "w^(2)*1"] {
            let row: Vec<Nat> = (0..=8).map(|x| value(a, x, 1 << 20).unwrap()).collect();
            assert!(row.windows(2).all(|w| w[0] <= w[1]), "{a}");
        }
    }

    #[test]
    fn growth_rows() {
        let values = |a: &str, n_max, fuel| -> Vec<Option<Nat>> {
            growth_table(&[o(a)], n_max, fuel)
                .unwrap()
                .into_iter()
                .map(|c| c.result.value().cloned())
                .collect()
        };
        assert_eq!(values("0", 3, 10), (0..=3).map(|x| Some(n(x))).collect::<Vec<_>>());
        assert_eq!(
            values("w^(1)*1", 4, 100),
            [0, 2, 4, 6, 8].map(|x| Some(n(x)))
        );
        assert_eq!(values("w^(2)*1", 3, 1_000_000)[3], Some(n(24)));
    }

    #[test]
    fn csv_layout() {
        let cells = growth_table(&[o("0"), o("w^(1)*1")], 1, 2).unwrap();
        let mut buf = Vec::new();
        write_growth_csv(&cells, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "ordinal,n,value,steps,status\n0,0,0,1,value\n0,1,1,1,value\n\
             w^(1)*1,0,0,2,value\nw^(1)*1,1,,2,fuel-exhausted\n"
        );
    }
}
