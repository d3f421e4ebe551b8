//! Exhaustive deciders for Paris–Harrington and Kanamori–McAloon arrows.
//!
//! `[a₁,a₂] →* (b)^c_d` holds when every coloring of the c-subsets of the
//! interval with d colors has a homogeneous `X` with `|X| ≥ b` and
//! `|X| ≥ min X`. `[a,b] →* (k)^n` holds when every regressive function on
//! the n-subsets has a min-homogeneous set of size k.
//!
//! Both deciders enumerate the whole function space (colorings, resp.
//! regressive tables) in lexicographic order and fail fast on the first
//! function without a good set. The space size is checked against a budget
//! before any work is done; exceeding it is reported as
//! [`RamseyError::BudgetExceeded`], never as a negative answer.
//!
//! Regressive functions on a tuple whose least element is 0 take the value
//! 0 (the strict `f(s) < min s` is unsatisfiable there).
//!
//! Functions are tested in parallel on the current rayon pool; the reported
//! counterexample is always the least one in enumeration order, and
//! `explored` counts enumeration order up to it, so results do not depend
//! on the number of threads.

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Largest number of subsets a materialized [`Coloring`] or
/// [`RegressiveFn`] table may have.
pub const MAX_TABLE: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RamseyError {
    #[error("search space of {space} exceeds the budget of {budget}")]
    BudgetExceeded {
        /// Size of the space that could not be searched (saturating).
        space: u128,
        budget: u64,
        /// Functions examined by earlier, completed stages.
        explored: u64,
    },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("{0} lies outside the domain")]
    OutsideDomain(u64),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, RamseyError> {
    Err(RamseyError::Invalid(msg.into()))
}

/// `[lo, hi] = {lo, lo+1, …, hi}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: u64,
    hi: u64,
}

impl Interval {
    pub fn new(lo: u64, hi: u64) -> Result<Self, RamseyError> {
        if lo > hi {
            return invalid(format!("empty interval [{lo}, {hi}]"));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> u64 {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: u64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step; saturate once past any useful size
        acc = acc.saturating_mul(u128::from(n - i)) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u128::MAX;
        }
    }
    acc
}

/// The k-subsets of `{0, …, n-1}` in lexicographic order, with O(k) ranking.
#[derive(Debug)]
struct SubsetIndex {
    size: usize,
    subsets: Vec<Vec<usize>>,
    colex_to_lex: Vec<usize>,
    binom: Vec<Vec<usize>>,
}

impl SubsetIndex {
    fn new(n: usize, size: usize) -> Self {
        let binom: Vec<Vec<usize>> = (0..=n)
            .map(|m| (0..=size).map(|j| binomial(m as u64, j as u64) as usize).collect())
            .collect();
        let mut subsets = Vec::new();
        let items: Vec<usize> = (0..n).collect();
        for_each_combination(&items, size, |s| {
            subsets.push(s.to_vec());
            true
        });
        let mut index = SubsetIndex {
            size,
            subsets,
            colex_to_lex: Vec::new(),
            binom,
        };
        let mut colex_to_lex = vec![0; index.subsets.len()];
        for (lex, s) in index.subsets.iter().enumerate() {
            colex_to_lex[index.colex(s)] = lex;
        }
        index.colex_to_lex = colex_to_lex;
        index
    }

    fn colex(&self, sorted: &[usize]) -> usize {
        sorted
            .iter()
            .enumerate()
            .map(|(i, &p)| self.binom[p][i + 1])
            .sum()
    }

    /// Lexicographic rank of `prefix ∪ {last}` where `last` exceeds the prefix.
    fn rank_with(&self, prefix: &[usize], last: usize) -> usize {
        debug_assert_eq!(prefix.len() + 1, self.size);
        self.colex_to_lex[self.colex(prefix) + self.binom[last][self.size]]
    }

    fn rank(&self, sorted: &[usize]) -> usize {
        self.colex_to_lex[self.colex(sorted)]
    }

    fn len(&self) -> usize {
        self.subsets.len()
    }
}

/// Calls `f` on every `k`-combination of `items` in lexicographic order
/// until it returns `false`. Returns whether the enumeration ran to the end.
pub(crate) fn for_each_combination<T: Copy>(
    items: &[T],
    k: usize,
    mut f: impl FnMut(&[T]) -> bool,
) -> bool {
    if k > items.len() {
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<T> = idx.iter().map(|&i| items[i]).collect();
    loop {
        if !f(&buf) {
            return false;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + items.len() - k) else {
            return true;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
        for j in i..k {
            buf[j] = items[idx[j]];
        }
    }
}

fn checked_table(domain: Interval, arity: usize) -> Result<Arc<SubsetIndex>, RamseyError> {
    let count = binomial(domain.len(), arity as u64);
    if count > u128::from(MAX_TABLE) {
        return invalid(format!("{count} subsets is too many to tabulate"));
    }
    Ok(Arc::new(SubsetIndex::new(domain.len() as usize, arity)))
}

fn positions(domain: Interval, xs: &[u64]) -> Result<Vec<usize>, RamseyError> {
    let mut p = Vec::with_capacity(xs.len());
    for &x in xs {
        if !domain.contains(x) {
            return Err(RamseyError::OutsideDomain(x));
        }
        p.push((x - domain.lo) as usize);
    }
    p.sort_unstable();
    p.dedup();
    Ok(p)
}

/// A coloring of the `arity`-subsets of an interval with colors `1..=num_colors`.
#[derive(Debug, Clone)]
pub struct Coloring {
    arity: usize,
    domain: Interval,
    num_colors: u32,
    colors: Vec<u32>,
    index: Arc<SubsetIndex>,
}

impl PartialEq for Coloring {
    fn eq(&self, other: &Self) -> bool {
        (self.arity, self.domain, self.num_colors, &self.colors)
            == (other.arity, other.domain, other.num_colors, &other.colors)
    }
}

impl Eq for Coloring {}

impl Coloring {
    /// `colors` lists the color of each subset in lexicographic subset order.
    pub fn new(
        arity: usize,
        domain: Interval,
        num_colors: u32,
        colors: Vec<u32>,
    ) -> Result<Self, RamseyError> {
        if arity == 0 || num_colors == 0 {
            return invalid("arity and number of colors must be positive");
        }
        let index = checked_table(domain, arity)?;
        if colors.len() != index.len() {
            return invalid(format!(
                "expected {} colors, got {}",
                index.len(),
                colors.len()
            ));
        }
        if colors.iter().any(|&c| c == 0 || c > num_colors) {
            return invalid(format!("colors must lie in 1..={num_colors}"));
        }
        Ok(Coloring {
            arity,
            domain,
            num_colors,
            colors,
            index,
        })
    }

    pub fn from_fn(
        arity: usize,
        domain: Interval,
        num_colors: u32,
        f: impl Fn(&[u64]) -> u32,
    ) -> Result<Self, RamseyError> {
        let index = checked_table(domain, arity)?;
        let colors = index
            .subsets
            .iter()
            .map(|s| f(&s.iter().map(|&p| domain.lo + p as u64).collect::<Vec<_>>()))
            .collect();
        Self::new(arity, domain, num_colors, colors)
    }

    fn from_digits(arity: usize, domain: Interval, num_colors: u32, digits: &[u32], index: Arc<SubsetIndex>) -> Self {
        Coloring {
            arity,
            domain,
            num_colors,
            colors: digits.iter().map(|d| d + 1).collect(),
            index,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn num_colors(&self) -> u32 {
        self.num_colors
    }

    pub fn color(&self, subset: &[u64]) -> Result<u32, RamseyError> {
        let p = positions(self.domain, subset)?;
        if p.len() != self.arity {
            return invalid(format!("expected a {}-element subset", self.arity));
        }
        Ok(self.colors[self.index.rank(&p)])
    }

    /// `(subset, color)` in lexicographic subset order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<u64>, u32)> + '_ {
        self.index.subsets.iter().zip(&self.colors).map(|(s, &c)| {
            (s.iter().map(|&p| self.domain.lo + p as u64).collect(), c)
        })
    }
}

/// Whether `f` is constant on the c-subsets of `x`. Sets with fewer than c
/// elements are homogeneous vacuously.
pub fn is_homogeneous(x: &[u64], f: &Coloring) -> Result<bool, RamseyError> {
    let p = positions(f.domain, x)?;
    let mut seen = None;
    let all_same = for_each_combination(&p, f.arity, |s| {
        let c = f.colors[f.index.rank(s)];
        *seen.get_or_insert(c) == c
    });
    Ok(all_same)
}

/// A regressive function on the `arity`-subsets of an interval.
#[derive(Debug, Clone)]
pub struct RegressiveFn {
    arity: usize,
    domain: Interval,
    values: Vec<u64>,
    index: Arc<SubsetIndex>,
}

impl PartialEq for RegressiveFn {
    fn eq(&self, other: &Self) -> bool {
        (self.arity, self.domain, &self.values) == (other.arity, other.domain, &other.values)
    }
}

impl Eq for RegressiveFn {}

impl RegressiveFn {
    /// `values` in lexicographic subset order; each must be below the least
    /// element of its subset, or 0 when that element is 0.
    pub fn new(arity: usize, domain: Interval, values: Vec<u64>) -> Result<Self, RamseyError> {
        if arity == 0 {
            return invalid("arity must be positive");
        }
        let index = checked_table(domain, arity)?;
        if values.len() != index.len() {
            return invalid(format!("expected {} values, got {}", index.len(), values.len()));
        }
        for (s, &v) in index.subsets.iter().zip(&values) {
            if v >= (domain.lo + s[0] as u64).max(1) {
                return invalid("function is not regressive");
            }
        }
        Ok(RegressiveFn {
            arity,
            domain,
            values,
            index,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn value(&self, subset: &[u64]) -> Result<u64, RamseyError> {
        let p = positions(self.domain, subset)?;
        if p.len() != self.arity {
            return invalid(format!("expected a {}-element subset", self.arity));
        }
        Ok(self.values[self.index.rank(&p)])
    }

    pub fn entries(&self) -> impl Iterator<Item = (Vec<u64>, u64)> + '_ {
        self.index.subsets.iter().zip(&self.values).map(|(s, &v)| {
            (s.iter().map(|&p| self.domain.lo + p as u64).collect(), v)
        })
    }
}

/// Whether `h` is min-homogeneous for `f`.
pub fn is_min_homogeneous(h: &[u64], f: &RegressiveFn) -> Result<bool, RamseyError> {
    let p = positions(f.domain, h)?;
    for (i, &c0) in p.iter().enumerate() {
        let mut seen = None;
        let consistent = for_each_combination(&p[i + 1..], f.arity - 1, |rest| {
            let mut t = Vec::with_capacity(f.arity);
            t.push(c0);
            t.extend_from_slice(rest);
            let v = f.values[f.index.rank(&t)];
            *seen.get_or_insert(v) == v
        });
        if !consistent {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowOutcome<F> {
    pub holds: bool,
    /// Functions examined, in enumeration order, up to the verdict.
    pub explored: u64,
    /// Least function without a good set, when one was materialized.
    pub counterexample: Option<F>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessOutcome {
    pub witness: u64,
    pub explored: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndicatorOutcome {
    pub value: u64,
    pub explored: u64,
}

fn over_budget(space: u128, budget: u64, explored: u64) -> RamseyError {
    RamseyError::BudgetExceeded {
        space,
        budget,
        explored,
    }
}

fn add_explored(e: RamseyError, extra: u64) -> RamseyError {
    match e {
        RamseyError::BudgetExceeded {
            space,
            budget,
            explored,
        } => over_budget(space, budget, explored + extra),
        other => other,
    }
}

/// Searches for `X` with `|X| ≥ max(b, min X)` homogeneous for one coloring.
struct HomogeneousSearch<'a> {
    n: usize,
    lo: u64,
    b: u64,
    arity: usize,
    num_colors: u32,
    index: &'a SubsetIndex,
}

impl HomogeneousSearch<'_> {
    fn target(&self, first: usize) -> u64 {
        self.b.max(self.lo + first as u64).max(1)
    }

    fn exists(&self, colors: &[u32], chosen: &mut Vec<usize>) -> bool {
        for color in 0..self.num_colors {
            for first in 0..self.n {
                let target = self.target(first);
                if ((self.n - first) as u64) < target {
                    break;
                }
                chosen.clear();
                if !self.fits(colors, color, chosen, first) {
                    continue;
                }
                chosen.push(first);
                if self.extend(colors, color, target as usize, chosen) {
                    return true;
                }
            }
        }
        false
    }

    /// Every c-subset that `x` forms with `chosen` has `color`.
    fn fits(&self, colors: &[u32], color: u32, chosen: &[usize], x: usize) -> bool {
        for_each_combination(chosen, self.arity - 1, |s| {
            colors[self.index.rank_with(s, x)] == color
        })
    }

    fn extend(&self, colors: &[u32], color: u32, target: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() >= target {
            return true;
        }
        let need = target - chosen.len();
        let start = chosen.last().map_or(0, |&l| l + 1);
        for x in start..=self.n - need {
            if self.fits(colors, color, chosen, x) {
                chosen.push(x);
                if self.extend(colors, color, target, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
}

fn decode_uniform(mut index: u64, radix: u32, digits: &mut [u32]) {
    for d in digits.iter_mut().rev() {
        *d = (index % u64::from(radix)) as u32;
        index /= u64::from(radix);
    }
}

/// Decides `[a1, a2] →* (b)^c_d` within `budget` colorings.
pub fn ph_arrow(
    a1: u64,
    a2: u64,
    b: u64,
    c: u64,
    d: u64,
    budget: u64,
) -> Result<ArrowOutcome<Coloring>, RamseyError> {
    if c == 0 || d == 0 {
        return invalid("c and d must be positive");
    }
    let domain = Interval::new(a1, a2)?;
    let n = domain.len();
    // a valid X can always be shrunk to its first max(b, min X) elements,
    // and the best start is a1 itself
    if n < b.max(a1).max(1) {
        return Ok(ArrowOutcome {
            holds: false,
            explored: 0,
            counterexample: None,
        });
    }
    if d == 1 {
        return Ok(ArrowOutcome {
            holds: true,
            explored: 1,
            counterexample: None,
        });
    }
    let subsets = binomial(n, c);
    let space = u32::try_from(subsets)
        .ok()
        .and_then(|s| u128::from(d).checked_pow(s))
        .unwrap_or(u128::MAX);
    if space > u128::from(budget) {
        return Err(over_budget(space, budget, 0));
    }
    let total = space as u64;
    let index = Arc::new(SubsetIndex::new(n as usize, c as usize));
    let num_colors = d as u32;
    let search = HomogeneousSearch {
        n: n as usize,
        lo: a1,
        b,
        arity: c as usize,
        num_colors,
        index: &index,
    };
    let width = index.len();
    let failing = (0..total)
        .into_par_iter()
        .map_init(
            || (vec![0u32; width], Vec::new()),
            |(digits, chosen), i| {
                decode_uniform(i, num_colors, digits);
                (i, search.exists(digits, chosen))
            },
        )
        .find_first(|&(_, ok)| !ok)
        .map(|(i, _)| i);
    Ok(match failing {
        None => ArrowOutcome {
            holds: true,
            explored: total,
            counterexample: None,
        },
        Some(i) => {
            let mut digits = vec![0u32; width];
            decode_uniform(i, num_colors, &mut digits);
            ArrowOutcome {
                holds: false,
                explored: i + 1,
                counterexample: Some(Coloring::from_digits(
                    c as usize,
                    domain,
                    num_colors,
                    &digits,
                    index.clone(),
                )),
            }
        }
    })
}

/// Least `a2 ≥ a1` with `[a1, a2] →* (b)^c_d`.
pub fn ph_witness(a1: u64, b: u64, c: u64, d: u64, budget: u64) -> Result<WitnessOutcome, RamseyError> {
    let mut explored = 0u64;
    for a2 in a1.. {
        let out = ph_arrow(a1, a2, b, c, d, budget).map_err(|e| add_explored(e, explored))?;
        explored += out.explored;
        if out.holds {
            return Ok(WitnessOutcome {
                witness: a2,
                explored,
            });
        }
    }
    unreachable!("the budget stops the scan before a2 overflows")
}

/// `σ(n)`: least m with `[0, m] →* (n+1)^n_n`.
pub fn sigma(n: u64, budget: u64) -> Result<WitnessOutcome, RamseyError> {
    if n == 0 {
        return invalid("sigma is defined for n >= 1");
    }
    ph_witness(0, n + 1, n, n, budget)
}

/// `Y(x, y)`: the largest z ≥ 1 with `[x, y] →* (z+1)^z_z`, or 0 if none.
pub fn ph_indicator(x: u64, y: u64, budget: u64) -> Result<IndicatorOutcome, RamseyError> {
    let len = Interval::new(x, y)?.len();
    let mut value = 0;
    let mut explored = 0;
    for z in 1..len {
        let out = ph_arrow(x, y, z + 1, z, z, budget).map_err(|e| add_explored(e, explored))?;
        explored += out.explored;
        if out.holds {
            value = z;
        }
    }
    Ok(IndicatorOutcome { value, explored })
}

/// `g_n(x)`: least y with `Y(x, y) > n`.
pub fn indicator_g(x: u64, n: u64, budget: u64) -> Result<WitnessOutcome, RamseyError> {
    let mut explored = 0;
    for y in x.. {
        let len = y - x + 1;
        let mut undecided = None;
        for z in n + 1..len {
            match ph_arrow(x, y, z + 1, z, z, budget) {
                Ok(out) => {
                    explored += out.explored;
                    if out.holds {
                        return Ok(WitnessOutcome { witness: y, explored });
                    }
                }
                Err(e @ RamseyError::BudgetExceeded { .. }) => {
                    undecided.get_or_insert(e);
                }
                Err(e) => return Err(e),
            }
        }
        if let Some(e) = undecided {
            return Err(add_explored(e, explored));
        }
    }
    unreachable!("the budget stops the scan before y overflows")
}

/// Searches for a min-homogeneous set of size k for one regressive table.
struct MinHomogeneousSearch<'a> {
    n: usize,
    k: usize,
    arity: usize,
    index: &'a SubsetIndex,
}

impl MinHomogeneousSearch<'_> {
    fn exists(&self, values: &[u64], chosen: &mut Vec<usize>, tuple: &mut Vec<usize>) -> bool {
        chosen.clear();
        self.extend(values, chosen, tuple)
    }

    fn extend(&self, values: &[u64], chosen: &mut Vec<usize>, tuple: &mut Vec<usize>) -> bool {
        if chosen.len() == self.k {
            return true;
        }
        let need = self.k - chosen.len();
        let start = chosen.last().map_or(0, |&l| l + 1);
        for x in start..=self.n - need {
            if self.admits(values, chosen, x, tuple) {
                chosen.push(x);
                if self.extend(values, chosen, tuple) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    /// New tuples all end in `x`; each must agree with the first tuple that
    /// starts at the same least element.
    fn admits(&self, values: &[u64], chosen: &[usize], x: usize, tuple: &mut Vec<usize>) -> bool {
        if self.arity < 2 {
            return true;
        }
        for i in 0..chosen.len() {
            let above = &chosen[i + 1..];
            if above.len() < self.arity - 2 {
                break;
            }
            let reference = (above.len() >= self.arity - 1).then(|| {
                tuple.clear();
                tuple.push(chosen[i]);
                tuple.extend_from_slice(&above[..self.arity - 1]);
                values[self.index.rank(tuple)]
            });
            let mut first = reference;
            let ok = for_each_combination(above, self.arity - 2, |mid| {
                tuple.clear();
                tuple.push(chosen[i]);
                tuple.extend_from_slice(mid);
                let v = values[self.index.rank_with(tuple, x)];
                *first.get_or_insert(v) == v
            });
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Decides `[a, b] →* (k)^n` within `budget` regressive functions.
pub fn km_arrow(a: u64, b: u64, k: u64, n: u64, budget: u64) -> Result<ArrowOutcome<RegressiveFn>, RamseyError> {
    if n == 0 || k < n {
        return invalid("need n >= 1 and k >= n");
    }
    let domain = Interval::new(a, b)?;
    let len = domain.len();
    if len < k {
        return Ok(ArrowOutcome {
            holds: false,
            explored: 0,
            counterexample: None,
        });
    }
    if binomial(len, n) > u128::from(MAX_TABLE) {
        return Err(over_budget(u128::MAX, budget, 0));
    }
    let index = Arc::new(SubsetIndex::new(len as usize, n as usize));
    let radices: Vec<u64> = index
        .subsets
        .iter()
        .map(|s| (a + s[0] as u64).max(1))
        .collect();
    let space = radices
        .iter()
        .try_fold(1u128, |acc, &r| acc.checked_mul(u128::from(r)))
        .unwrap_or(u128::MAX);
    if space > u128::from(budget) {
        return Err(over_budget(space, budget, 0));
    }
    let total = space as u64;
    let search = MinHomogeneousSearch {
        n: len as usize,
        k: k as usize,
        arity: n as usize,
        index: &index,
    };
    let decode = |mut i: u64, values: &mut [u64]| {
        for (v, &r) in values.iter_mut().zip(&radices).rev() {
            *v = i % r;
            i /= r;
        }
    };
    let width = index.len();
    let failing = (0..total)
        .into_par_iter()
        .map_init(
            || (vec![0u64; width], Vec::new(), Vec::new()),
            |(values, chosen, tuple), i| {
                decode(i, values);
                (i, search.exists(values, chosen, tuple))
            },
        )
        .find_first(|&(_, ok)| !ok)
        .map(|(i, _)| i);
    Ok(match failing {
        None => ArrowOutcome {
            holds: true,
            explored: total,
            counterexample: None,
        },
        Some(i) => {
            let mut values = vec![0u64; width];
            decode(i, &mut values);
            ArrowOutcome {
                holds: false,
                explored: i + 1,
                counterexample: Some(RegressiveFn {
                    arity: n as usize,
                    domain,
                    values,
                    index: index.clone(),
                }),
            }
        }
    })
}

/// Least `b ≥ a` with `[a, b] →* (k)^n`.
pub fn km_witness(a: u64, k: u64, n: u64, budget: u64) -> Result<WitnessOutcome, RamseyError> {
    let mut explored = 0;
    for b in a.. {
        let out = km_arrow(a, b, k, n, budget).map_err(|e| add_explored(e, explored))?;
        explored += out.explored;
        if out.holds {
            return Ok(WitnessOutcome { witness: b, explored });
        }
    }
    unreachable!("the budget stops the scan before b overflows")
}
