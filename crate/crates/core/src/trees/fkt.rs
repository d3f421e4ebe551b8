//! Bad sequences under a size bound `|T_i| ≤ K + f(i)`.
//!
//! A sequence is bad when no earlier tree inf-embeds into a later one.
//! `FKT_f` says that for every K some M admits no bad sequence of length
//! M + 1.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;

use super::{trees_up_to, Embedder, FiniteTree, TreeError, DEFAULT_CAP};

/// Largest reduced numerator accepted for a log-shaped bound.
pub const MAX_LOG_NUMERATOR: u64 = 100_000;

/// The size-growth function f.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SizeBound {
    Zero,
    Identity,
    /// `f(i) = ⌊(num/den)·log₂ i⌋`, with `f(0) = 0`.
    Log { num: u64, den: u64 },
    /// Explicit values; past the end the last value repeats.
    Table(Vec<u64>),
}

impl SizeBound {
    pub fn log(num: u64, den: u64) -> Result<Self, TreeError> {
        if den == 0 {
            return Err(TreeError::Invalid("denominator must be positive".into()));
        }
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        if num > MAX_LOG_NUMERATOR {
            return Err(TreeError::Invalid(format!(
                "log coefficient numerator {num} exceeds {MAX_LOG_NUMERATOR}"
            )));
        }
        Ok(SizeBound::Log { num, den })
    }

    pub fn at(&self, i: u64) -> u64 {
        match self {
            SizeBound::Zero => 0,
            SizeBound::Identity => i,
            SizeBound::Log { num, den } => {
                if i <= 1 {
                    return 0;
                }
                // ⌊(p/q)·log₂ i⌋ = ⌊⌊log₂ i^p⌋ / q⌋
                let bits = BigUint::from(i).pow(*num as u32).bits();
                (bits - 1) / den
            }
            SizeBound::Table(t) => t
                .get(i as usize)
                .or(t.last())
                .copied()
                .unwrap_or(0),
        }
    }
}

impl fmt::Display for SizeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeBound::Zero => write!(f, "zero"),
            SizeBound::Identity => write!(f, "id"),
            SizeBound::Log { num, den } => write!(f, "log:{num}/{den}"),
            SizeBound::Table(t) => {
                let parts: Vec<String> = t.iter().map(u64::to_string).collect();
                write!(f, "table:{}", parts.join(","))
            }
        }
    }
}

/// `zero`, `id`, `log:P/Q`, `log:R` with R a decimal such as `0.64`, or
/// `table:V0,V1,…`.
impl FromStr for SizeBound {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TreeError::Invalid(format!("unknown size bound {s:?}"));
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        match s.trim() {
            "zero" => Ok(SizeBound::Zero),
            "id" => Ok(SizeBound::Identity),
            t if t.starts_with("log:") => {
                let r = &t[4..];
                if let Some((p, q)) = r.split_once('/') {
                    return SizeBound::log(num(p)?, num(q)?);
                }
                let (int, frac) = r.split_once('.').unwrap_or((r, ""));
                if frac.len() > 9 || (int.is_empty() && frac.is_empty()) {
                    return Err(bad());
                }
                let den = 10u64.pow(frac.len() as u32);
                let int = if int.is_empty() { 0 } else { num(int)? };
                let frac = if frac.is_empty() { 0 } else { num(frac)? };
                SizeBound::log(int * den + frac, den)
            }
            t if t.starts_with("table:") => {
                let vals = t[6..].split(',').map(num).collect::<Result<Vec<_>, _>>()?;
                Ok(SizeBound::Table(vals))
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FktOutcome {
    /// No bad sequence `T_0, …, T_M` exists.
    pub holds: bool,
    /// Search nodes (bad prefixes) visited.
    pub explored: u64,
    pub bad_sequence: Option<Vec<FiniteTree>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadSequence {
    pub sequence: Vec<FiniteTree>,
    pub explored: u64,
    /// The search space was exhausted, so the sequence is a longest one.
    pub complete: bool,
    /// Some size bound exceeded the enumeration cap and was clamped.
    pub size_capped: bool,
}

/// Trees of size ≤ `max` ordered by size, then encoding.
fn catalog(max: usize) -> (Vec<FiniteTree>, Vec<usize>) {
    let by_size = trees_up_to(max);
    // ends[s] = number of catalog trees with size ≤ s
    let mut ends = vec![0];
    let mut all = Vec::new();
    for trees in by_size {
        all.extend(trees);
        ends.push(all.len());
    }
    (all, ends)
}

struct Search<'a> {
    k: u64,
    f: &'a SizeBound,
    cap: usize,
    ends: Vec<usize>,
    emb: Embedder,
    explored: u64,
    budget: u64,
}

impl Search<'_> {
    /// Number of catalog trees allowed at position i.
    fn allowed(&self, i: u64) -> (usize, bool) {
        let bound = self.k.saturating_add(self.f.at(i));
        let capped = bound > self.cap as u64;
        (self.ends[bound.min(self.cap as u64) as usize], capped)
    }

    fn fits(&mut self, seq: &[usize], cand: usize) -> bool {
        seq.iter().all(|&j| !self.emb.embeds(j, cand))
    }

    fn tick(&mut self) -> bool {
        self.explored += 1;
        self.explored <= self.budget
    }

    fn find(&mut self, seq: &mut Vec<usize>, len: u64) -> Result<bool, TreeError> {
        if seq.len() as u64 == len {
            return Ok(true);
        }
        let (n, _) = self.allowed(seq.len() as u64);
        for cand in 0..n {
            if self.fits(seq, cand) {
                if !self.tick() {
                    return Err(TreeError::BudgetExceeded {
                        budget: self.budget,
                        explored: self.explored - 1,
                    });
                }
                seq.push(cand);
                if self.find(seq, len)? {
                    return Ok(true);
                }
                seq.pop();
            }
        }
        Ok(false)
    }

    /// Returns false once the budget is spent.
    fn longest(&mut self, seq: &mut Vec<usize>, best: &mut Vec<usize>, capped: &mut bool) -> bool {
        let (n, c) = self.allowed(seq.len() as u64);
        for cand in (0..n).rev() {
            if self.fits(seq, cand) {
                if !self.tick() {
                    return false;
                }
                *capped |= c;
                seq.push(cand);
                if seq.len() > best.len() {
                    best.clone_from(seq);
                }
                let go_on = self.longest(seq, best, capped);
                seq.pop();
                if !go_on {
                    return false;
                }
            }
        }
        true
    }
}

/// Decides whether every sequence `T_0, …, T_M` with `|T_i| ≤ K + f(i)`
/// has `i < j` with `T_i` embedding into `T_j`. Exceeding `budget` search
/// nodes is an error, never a verdict.
pub fn fkt_check(k: u64, f: &SizeBound, m: u64, budget: u64) -> Result<FktOutcome, TreeError> {
    let max = (0..=m).map(|i| k.saturating_add(f.at(i))).max().unwrap_or(0);
    if max > DEFAULT_CAP as u64 {
        return Err(TreeError::CapExceeded {
            size: max,
            cap: DEFAULT_CAP,
        });
    }
    let (all, ends) = catalog(max as usize);
    let mut search = Search {
        k,
        f,
        cap: DEFAULT_CAP,
        ends,
        emb: Embedder::new(&all),
        explored: 0,
        budget,
    };
    let mut seq = Vec::new();
    let found = search.find(&mut seq, m + 1)?;
    Ok(FktOutcome {
        holds: !found,
        explored: search.explored,
        bad_sequence: found.then(|| seq.iter().map(|&i| all[i].clone()).collect()),
    })
}

/// Depth-first search for a long bad sequence, trying larger trees first.
/// Sizes above `cap` are clamped; the result is always a bad sequence.
pub fn longest_bad_sequence(k: u64, f: &SizeBound, budget: u64, cap: usize) -> Result<BadSequence, TreeError> {
    if cap == 0 || cap > DEFAULT_CAP {
        return Err(TreeError::Invalid(format!("cap must lie in 1..={DEFAULT_CAP}")));
    }
    let (all, ends) = catalog(cap);
    let mut search = Search {
        k,
        f,
        cap,
        ends,
        emb: Embedder::new(&all),
        explored: 0,
        budget,
    };
    let (mut seq, mut best, mut capped) = (Vec::new(), Vec::new(), false);
    let complete = search.longest(&mut seq, &mut best, &mut capped);
    Ok(BadSequence {
        sequence: best.iter().map(|&i| all[i].clone()).collect(),
        explored: search.explored.min(budget),
        complete,
        size_capped: capped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::inf_embeds;

    fn is_bad(seq: &[FiniteTree]) -> bool {
        (0..seq.len()).all(|j| (0..j).all(|i| !inf_embeds(&seq[i], &seq[j])))
    }

    #[test]
    fn size_bounds() {
        let half = SizeBound::log(1, 2).unwrap();
        let vals: Vec<u64> = (0..10).map(|i| half.at(i)).collect();
        assert_eq!(vals, [0, 0, 0, 0, 1, 1, 1, 1, 1, 1]);
        assert_eq!(SizeBound::Log { num: 1, den: 1 }.at(1023), 9);
        assert_eq!(SizeBound::Log { num: 1, den: 1 }.at(1024), 10);
        assert_eq!(SizeBound::Identity.at(7), 7);
        assert_eq!(SizeBound::Table(vec![2, 1]).at(5), 1);
        assert_eq!("log:2/4".parse::<SizeBound>().unwrap(), half);
        assert_eq!("log:0.5".parse::<SizeBound>().unwrap(), half);
        assert_eq!("log:1/2".parse::<SizeBound>().unwrap(), half);
        assert_eq!("table:1,2".parse::<SizeBound>().unwrap().to_string(), "table:1,2");
        assert!("log:1/0".parse::<SizeBound>().is_err());
        assert!("nope".parse::<SizeBound>().is_err());
    }

    #[test]
    fn check_examples() {
        assert!(fkt_check(1, &SizeBound::Zero, 1, 100).unwrap().holds);
        let out = fkt_check(2, &SizeBound::Zero, 1, 100).unwrap();
        assert!(!out.holds);
        assert_eq!(out.bad_sequence.unwrap(), [FiniteTree::chain(2), FiniteTree::single()]);
        assert!(fkt_check(2, &SizeBound::Zero, 2, 100).unwrap().holds);
        assert!(matches!(
            fkt_check(13, &SizeBound::Zero, 0, 100),
            Err(TreeError::CapExceeded { .. })
        ));
        assert!(matches!(
            fkt_check(4, &SizeBound::Zero, 20, 3),
            Err(TreeError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn longest_examples() {
        let one = longest_bad_sequence(1, &SizeBound::Zero, 1000, 12).unwrap();
        assert_eq!(one.sequence, [FiniteTree::single()]);
        assert!(one.complete);
        let two = longest_bad_sequence(2, &SizeBound::Zero, 1000, 12).unwrap();
        assert_eq!(two.sequence.len(), 2);
        assert!(two.complete);
    }

    #[test]
    fn longest_agrees_with_check() {
        for k in 1..=4 {
            let best = longest_bad_sequence(k, &SizeBound::Zero, 1_000_000, 12).unwrap();
            assert!(best.complete);
            assert!(is_bad(&best.sequence));
            let len = best.sequence.len() as u64;
            assert!(!fkt_check(k, &SizeBound::Zero, len - 1, 1_000_000).unwrap().holds);
            assert!(fkt_check(k, &SizeBound::Zero, len, 1_000_000).unwrap().holds);
        }
    }

    #[test]
    fn found_sequences_are_bad() {
        for f in [SizeBound::Identity, SizeBound::log(1, 2).unwrap(), SizeBound::log(2, 1).unwrap()] {
            let out = longest_bad_sequence(2, &f, 20_000, 8).unwrap();
            assert!(is_bad(&out.sequence), "{f}");
            assert!(out.sequence.len() >= 2);
        }
    }
}
