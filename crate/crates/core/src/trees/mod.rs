//! Finite rooted trees.
//!
//! [`FiniteTree`] is an unordered rooted tree up to isomorphism, kept as its
//! canonical parenthesis encoding: a node is `(` followed by its children's
//! encodings in ascending order and `)`. The single node is `()`, the
//! 3-chain `((()))` and the cherry `(()())`.
//!
//! Trees are compared by inf-preserving embedding: an injection of nodes
//! that maps the meet of any two nodes to the meet of their images.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

mod fkt;
mod onset;

pub use fkt::{fkt_check, longest_bad_sequence, BadSequence, FktOutcome, SizeBound};
pub use onset::{
    is_kiralic, is_regal, kiralic_indicator, regal_indicator, Indicator, IndicatorReport,
    SetVerdict, TreeOnSet,
};

/// Largest tree size [`enumerate_trees`] will list by default.
pub const DEFAULT_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("cannot parse tree: {0}")]
    Parse(String),
    #[error("tree size {size} exceeds the enumeration cap {cap}")]
    CapExceeded { size: u64, cap: usize },
    #[error("search exceeded the budget of {budget} (explored {explored})")]
    BudgetExceeded { budget: u64, explored: u64 },
    #[error("invalid argument: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteTree {
    encoding: String,
}

impl FiniteTree {
    pub fn single() -> Self {
        FiniteTree {
            encoding: "()".into(),
        }
    }

    pub fn from_children(mut children: Vec<FiniteTree>) -> Self {
        children.sort();
        let mut encoding = String::from("(");
        for c in &children {
            encoding.push_str(&c.encoding);
        }
        encoding.push(')');
        FiniteTree { encoding }
    }

    /// A path with `n ≥ 1` nodes.
    pub fn chain(n: usize) -> Self {
        assert!(n >= 1);
        FiniteTree {
            encoding: "(".repeat(n) + &")".repeat(n),
        }
    }

    /// A root with `leaves` children.
    pub fn star(leaves: usize) -> Self {
        FiniteTree {
            encoding: format!("({})", "()".repeat(leaves)),
        }
    }

    pub fn encoding(&self) -> &str {
        &self.encoding
    }

    pub fn size(&self) -> usize {
        self.encoding.len() / 2
    }

    /// Root subtrees in canonical order.
    pub fn children(&self) -> Vec<FiniteTree> {
        let inner = &self.encoding[1..self.encoding.len() - 1];
        let mut out = Vec::new();
        let mut depth = 0;
        let mut start = 0;
        for (i, ch) in inner.bytes().enumerate() {
            depth += if ch == b'(' { 1 } else { -1 };
            if depth == 0 {
                out.push(FiniteTree {
                    encoding: inner[start..=i].to_string(),
                });
                start = i + 1;
            }
        }
        out
    }
}

impl fmt::Display for FiniteTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding)
    }
}

/// Accepts any child order and canonicalizes.
impl FromStr for FiniteTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes: Vec<u8> = s.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut pos = 0;
        let tree = parse_node(&bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(TreeError::Parse(format!("trailing input at {pos}")));
        }
        Ok(tree)
    }
}

fn parse_node(b: &[u8], pos: &mut usize) -> Result<FiniteTree, TreeError> {
    if b.get(*pos) != Some(&b'(') {
        return Err(TreeError::Parse(format!("expected '(' at {pos}")));
    }
    *pos += 1;
    let mut children = Vec::new();
    loop {
        match b.get(*pos) {
            Some(b'(') => children.push(parse_node(b, pos)?),
            Some(b')') => {
                *pos += 1;
                return Ok(FiniteTree::from_children(children));
            }
            _ => return Err(TreeError::Parse(format!("expected '(' or ')' at {pos}"))),
        }
    }
}

/// Nodes of a tree in preorder with child lists.
#[derive(Debug, Clone)]
pub(crate) struct Shape {
    children: Vec<Vec<usize>>,
    size: Vec<usize>,
}

impl Shape {
    pub(crate) fn new(t: &FiniteTree) -> Self {
        let mut children: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for ch in t.encoding.bytes() {
            if ch == b'(' {
                let id = children.len();
                children.push(Vec::new());
                if let Some(&p) = stack.last() {
                    children[p].push(id);
                }
                stack.push(id);
            } else {
                stack.pop();
            }
        }
        let mut size = vec![1; children.len()];
        for u in (0..children.len()).rev() {
            size[u] += children[u].iter().map(|&c| size[c]).sum::<usize>();
        }
        Shape { children, size }
    }

    fn len(&self) -> usize {
        self.children.len()
    }
}

/// `emb[u][v]`: the subtree at `u` embeds into the subtree at `v`.
fn embeds_shapes(a: &Shape, b: &Shape) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut emb = vec![vec![false; b.len()]; a.len()];
    // preorder puts children after parents, so reverse preorder is bottom-up
    for u in (0..a.len()).rev() {
        for v in (0..b.len()).rev() {
            if a.size[u] > b.size[v] {
                continue;
            }
            emb[u][v] = b.children[v].iter().any(|&w| emb[u][w])
                || (a.children[u].len() <= b.children[v].len()
                    && perfect_matching(&a.children[u], &b.children[v], |x, y| emb[x][y]));
        }
    }
    emb[0][0]
}

/// Whether every left vertex can be matched to a distinct right vertex.
fn perfect_matching(left: &[usize], right: &[usize], edge: impl Fn(usize, usize) -> bool) -> bool {
    fn augment(
        l: usize,
        left: &[usize],
        right: &[usize],
        edge: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for r in 0..right.len() {
            if seen[r] || !edge(left[l], right[r]) {
                continue;
            }
            seen[r] = true;
            if owner[r].is_none_or(|o| augment(o, left, right, edge, seen, owner)) {
                owner[r] = Some(l);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right.len()];
    (0..left.len()).all(|l| {
        let mut seen = vec![false; right.len()];
        augment(l, left, right, &edge, &mut seen, &mut owner)
    })
}

/// Whether `t1` has an inf-preserving embedding into `t2`.
pub fn inf_embeds(t1: &FiniteTree, t2: &FiniteTree) -> bool {
    embeds_shapes(&Shape::new(t1), &Shape::new(t2))
}

/// Caches shapes for repeated embedding queries over a fixed catalog.
#[derive(Debug)]
pub(crate) struct Embedder {
    shapes: Vec<Shape>,
    memo: std::collections::HashMap<(u32, u32), bool>,
}

impl Embedder {
    pub(crate) fn new(trees: &[FiniteTree]) -> Self {
        Embedder {
            shapes: trees.iter().map(Shape::new).collect(),
            memo: Default::default(),
        }
    }

    pub(crate) fn embeds(&mut self, i: usize, j: usize) -> bool {
        if self.shapes[i].len() > self.shapes[j].len() {
            return false;
        }
        let shapes = &self.shapes;
        *self
            .memo
            .entry((i as u32, j as u32))
            .or_insert_with(|| embeds_shapes(&shapes[i], &shapes[j]))
    }
}

/// All trees with exactly `size` nodes, sorted by encoding.
pub fn enumerate_trees(size: usize) -> Result<Vec<FiniteTree>, TreeError> {
    enumerate_trees_capped(size, DEFAULT_CAP)
}

pub fn enumerate_trees_capped(size: usize, cap: usize) -> Result<Vec<FiniteTree>, TreeError> {
    if size == 0 {
        return Err(TreeError::Invalid("trees have at least one node".into()));
    }
    if size > cap {
        return Err(TreeError::CapExceeded {
            size: size as u64,
            cap,
        });
    }
    Ok(trees_up_to(size).pop().unwrap())
}

/// `out[s - 1]` lists the trees of size `s`, sorted, for `s ≤ max`.
pub(crate) fn trees_up_to(max: usize) -> Vec<Vec<FiniteTree>> {
    let mut by_size: Vec<Vec<FiniteTree>> = Vec::new();
    for size in 1..=max {
        let smaller: Vec<&FiniteTree> = by_size.iter().flatten().collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        forests(&smaller, 0, size - 1, &mut chosen, &mut out);
        out.sort();
        by_size.push(out);
    }
    by_size
}

/// Root + every multiset of subtrees from `pool[from..]` with total size `rest`.
fn forests<'a>(
    pool: &[&'a FiniteTree],
    from: usize,
    rest: usize,
    chosen: &mut Vec<&'a FiniteTree>,
    out: &mut Vec<FiniteTree>,
) {
    if rest == 0 {
        out.push(FiniteTree::from_children(chosen.iter().map(|&t| t.clone()).collect()));
        return;
    }
    for i in from..pool.len() {
        let s = pool[i].size();
        if s <= rest {
            chosen.push(pool[i]);
            forests(pool, i, rest - s, chosen, out);
            chosen.pop();
        }
    }
}

/// `t_1, …, t_max`, the number of unordered rooted trees by size.
pub fn count_trees_table(max: usize) -> Vec<BigUint> {
    // a(n+1) = (1/n) Σ_{k=1..n} (Σ_{d|k} d·a(d)) · a(n−k+1)
    let mut a = vec![BigUint::zero(), BigUint::one()];
    let mut s = vec![BigUint::zero()];
    for n in 1..max {
        let sn: BigUint = (1..=n)
            .filter(|d| n % d == 0)
            .map(|d| &a[d] * BigUint::from(d))
            .sum();
        s.push(sn);
        let total: BigUint = (1..=n).map(|k| &s[k] * &a[n - k + 1]).sum();
        a.push(total / BigUint::from(n));
    }
    a.truncate(max + 1);
    a.remove(0);
    a
}

/// `t_size`.
pub fn count_trees(size: usize) -> Result<BigUint, TreeError> {
    if size == 0 {
        return Err(TreeError::Invalid("trees have at least one node".into()));
    }
    Ok(count_trees_table(size).pop().unwrap())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OtterRow {
    pub i: usize,
    /// `t_{i+1} / t_i`.
    pub ratio: f64,
    /// `ratio · ((i+1)/i)^{3/2}`.
    pub corrected: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OtterEstimate {
    pub alpha_hat: f64,
    /// `1 / log₂ α̂`.
    pub threshold_c: f64,
    pub history: Vec<OtterRow>,
}

fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    let shift = num.bits().max(den.bits()).saturating_sub(60);
    let n = (num >> shift).to_f64().unwrap();
    let d = (den >> shift).to_f64().unwrap();
    n / d
}

/// Estimates Otter's constant from `t_1, …, t_{max_i + 1}`, correcting the
/// ratio test for the `n^{-3/2}` factor in `t_n ~ C·αⁿ·n^{-3/2}`.
pub fn estimate_otter(max_i: usize) -> Result<OtterEstimate, TreeError> {
    if max_i < 10 {
        return Err(TreeError::Invalid("need at least 10 terms".into()));
    }
    let t = count_trees_table(max_i + 1);
    let history: Vec<OtterRow> = (1..=max_i)
        .map(|i| {
            let ratio = big_ratio(&t[i], &t[i - 1]);
            let corrected = ratio * ((i as f64 + 1.0) / i as f64).powf(1.5);
            OtterRow {
                i,
                ratio,
                corrected,
            }
        })
        .collect();
    let alpha_hat = history.last().unwrap().corrected;
    Ok(OtterEstimate {
        alpha_hat,
        threshold_c: 1.0 / alpha_hat.log2(),
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> FiniteTree {
        s.parse().unwrap()
    }

    #[test]
    fn encoding_is_canonical() {
        // '(' sorts before ')', so deeper subtrees come first
        assert_eq!(t("(()(()))").encoding(), "((())())");
        assert_eq!(t("(()(()))"), t("((())())"));
        assert_eq!(FiniteTree::chain(3).encoding(), "((()))");
        assert_eq!(FiniteTree::star(2).encoding(), "(()())");
        assert_eq!(t("(()(()))").size(), 4);
        assert_eq!(t("(()(()))").children(), [t("(())"), t("()")]);
        for bad in ["", "(", "())", "()()", "(x)"] {
            assert!(bad.parse::<FiniteTree>().is_err(), "{bad}");
        }
    }

    #[test]
    fn embedding_examples() {
        let single = FiniteTree::single();
        for s in 1..=5 {
            for x in enumerate_trees(s).unwrap() {
                assert!(inf_embeds(&single, &x));
            }
        }
        assert!(inf_embeds(&FiniteTree::chain(2), &FiniteTree::chain(3)));
        assert!(!inf_embeds(&FiniteTree::chain(2), &single));
        // a cherry needs a branching node
        assert!(!inf_embeds(&FiniteTree::star(2), &FiniteTree::chain(5)));
        assert!(inf_embeds(&FiniteTree::star(2), &t("((()())())")));
        // two branches must sit under one meet
        assert!(!inf_embeds(&t("((())(()))"), &t("(()(()()))")));
        assert!(inf_embeds(&t("((())(()))"), &t("(((()))((())))")));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_trees(1).unwrap(), [FiniteTree::single()]);
        assert_eq!(enumerate_trees(3).unwrap(), [t("((()))"), t("(()())")]);
        assert_eq!(enumerate_trees(5).unwrap().len(), 9);
        assert!(matches!(enumerate_trees(13), Err(TreeError::CapExceeded { .. })));
        assert!(enumerate_trees(0).is_err());
    }

    #[test]
    fn counts() {
        let expect = [1u32, 1, 2, 4, 9, 20, 48, 115, 286, 719, 1842, 4766];
        let table = count_trees_table(12);
        assert_eq!(table, expect.map(BigUint::from));
        for (i, trees) in trees_up_to(10).iter().enumerate() {
            assert_eq!(BigUint::from(trees.len()), table[i]);
        }
        assert_eq!(count_trees(4).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn otter_estimate() {
        let e = estimate_otter(60).unwrap();
        let at = |i: usize| e.history[i - 1].corrected;
        assert!((at(60) - at(50)).abs() < 0.01);
        assert!((e.alpha_hat - 2.955_669_435).abs() < 1e-6);
        assert!((at(50) - 2.955_622_934).abs() < 1e-6);
        assert_eq!(e.threshold_c, 1.0 / e.alpha_hat.log2());
        assert!((e.threshold_c - 0.639_596_828).abs() < 1e-6);
        let ratios: Vec<f64> = e.history[6..40].iter().map(|r| r.ratio).collect();
        assert!(ratios.windows(2).all(|w| w[0] < w[1]));
        assert!(estimate_otter(9).is_err());
    }
}
