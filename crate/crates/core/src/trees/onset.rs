//! Trees on finite sets of naturals and the regal/kiralic hierarchies.
//!
//! A tree on X gives every element but `min X` a parent that is a smaller
//! element of X. A branch is a root-to-leaf chain, a level is the set of
//! nodes at one depth (the root alone is level zero), and the immediate
//! successors of a node are its children.
//!
//! X is 0-regal (0-kiralic) when `2 + min X < |X|`. It is (k+1)-regal when
//! every tree on X has a k-regal branch or level, and (k+1)-kiralic when
//! every tree on X has a k-kiralic branch, zero level, or set of immediate
//! successors of some node.
//!
//! Every k-regal set is 0-regal (by induction on k, since candidates are
//! subsets of X and cannot have a smaller minimum), so sets failing the base
//! clause are discarded without recursion. The same holds for kiralic sets.

use std::collections::HashMap;
use std::fmt;

use super::TreeError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeOnSet {
    support: Vec<u64>,
    /// `parent[i]` indexes into `support`; `None` only at the root.
    parent: Vec<Option<usize>>,
}

impl TreeOnSet {
    /// `parents[i]` is the parent of `support[i + 1]` once the support is
    /// sorted; each must be a smaller member of the support.
    pub fn new(mut support: Vec<u64>, parents: &[u64]) -> Result<Self, TreeError> {
        support.sort_unstable();
        support.dedup();
        if support.is_empty() {
            return Err(TreeError::Invalid("a tree needs a nonempty support".into()));
        }
        if parents.len() + 1 != support.len() {
            return Err(TreeError::Invalid(format!(
                "expected {} parents, got {}",
                support.len() - 1,
                parents.len()
            )));
        }
        let mut parent = vec![None];
        for (i, &p) in parents.iter().enumerate() {
            let child = support[i + 1];
            match support[..=i].binary_search(&p) {
                Ok(j) => parent.push(Some(j)),
                Err(_) => {
                    return Err(TreeError::Invalid(format!(
                        "parent {p} of {child} is not a smaller element of the support"
                    )))
                }
            }
        }
        Ok(TreeOnSet { support, parent })
    }

    fn from_indices(support: &[u64], parent_idx: &[usize]) -> Self {
        let parent = std::iter::once(None)
            .chain(parent_idx.iter().map(|&p| Some(p)))
            .collect();
        TreeOnSet {
            support: support.to_vec(),
            parent,
        }
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    /// The least element, which order-compatibility forces to be the root.
    pub fn root(&self) -> u64 {
        self.support[0]
    }

    /// `(child, parent)` pairs in increasing child order.
    pub fn edges(&self) -> Vec<(u64, u64)> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (self.support[i], self.support[p])))
            .collect()
    }

    fn depths(&self) -> Vec<usize> {
        let mut d = vec![0; self.support.len()];
        for i in 1..d.len() {
            d[i] = d[self.parent[i].unwrap()] + 1;
        }
        d
    }

    fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.support.len()];
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                ch[*p].push(i);
            }
        }
        ch
    }

    /// Root-to-leaf chains.
    pub fn branches(&self) -> Vec<Vec<u64>> {
        let children = self.children();
        (0..self.support.len())
            .filter(|&i| children[i].is_empty())
            .map(|leaf| {
                let mut path = vec![self.support[leaf]];
                let mut cur = leaf;
                while let Some(p) = self.parent[cur] {
                    path.push(self.support[p]);
                    cur = p;
                }
                path.reverse();
                path
            })
            .collect()
    }

    /// Nodes grouped by depth, root level first.
    pub fn levels(&self) -> Vec<Vec<u64>> {
        let depths = self.depths();
        let mut levels = vec![Vec::new(); depths.iter().max().unwrap() + 1];
        for (i, &d) in depths.iter().enumerate() {
            levels[d].push(self.support[i]);
        }
        levels
    }

    /// Children of every node that has any.
    pub fn successor_sets(&self) -> Vec<Vec<u64>> {
        self.children()
            .into_iter()
            .filter(|c| !c.is_empty())
            .map(|c| c.into_iter().map(|i| self.support[i]).collect())
            .collect()
    }
}

impl fmt::Display for TreeOnSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root())?;
        for (c, p) in self.edges() {
            write!(f, " {p}<{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Regal,
    Kiralic,
}

impl Kind {
    fn candidates(self, t: &TreeOnSet) -> Vec<Vec<u64>> {
        let mut out = t.branches();
        match self {
            Kind::Regal => out.extend(t.levels()),
            Kind::Kiralic => {
                out.push(vec![t.root()]);
                out.extend(t.successor_sets());
            }
        }
        for y in &mut out {
            y.sort_unstable();
        }
        out.sort();
        out.dedup();
        out
    }
}

fn base(x: &[u64]) -> bool {
    (x.len() as u64) > x[0].saturating_add(2)
}

struct Decider {
    kind: Kind,
    memo: HashMap<(Vec<u64>, u64), bool>,
    explored: u64,
    budget: u64,
}

impl Decider {
    fn new(kind: Kind, budget: u64) -> Self {
        Decider {
            kind,
            memo: HashMap::new(),
            explored: 0,
            budget,
        }
    }

    /// The verdict, and for a failing step clause the least tree with no
    /// good candidate.
    fn decide(&mut self, x: &[u64], k: u64) -> Result<(bool, Option<TreeOnSet>), TreeError> {
        if !base(x) {
            return Ok((false, None));
        }
        if k == 0 {
            return Ok((true, None));
        }
        if let Some(&v) = self.memo.get(&(x.to_vec(), k)) {
            return Ok((v, None));
        }
        let n = x.len();
        // parent indices of x[1..], odometer with the last entry fastest
        let mut p = vec![0usize; n.saturating_sub(1)];
        let mut verdict = (true, None);
        'trees: loop {
            self.explored += 1;
            if self.explored > self.budget {
                return Err(TreeError::BudgetExceeded {
                    budget: self.budget,
                    explored: self.explored - 1,
                });
            }
            let tree = TreeOnSet::from_indices(x, &p);
            let mut good = false;
            for y in self.kind.candidates(&tree) {
                if base(&y) && self.decide(&y, k - 1)?.0 {
                    good = true;
                    break;
                }
            }
            if !good {
                verdict = (false, Some(tree));
                break;
            }
            let mut i = p.len();
            loop {
                if i == 0 {
                    break 'trees;
                }
                i -= 1;
                // entry i belongs to x[i + 1], whose parent ranges over 0..=i
                if p[i] < i {
                    p[i] += 1;
                    break;
                }
                p[i] = 0;
            }
        }
        self.memo.insert((x.to_vec(), k), verdict.0);
        Ok(verdict)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetVerdict {
    pub holds: bool,
    /// Trees examined, counting recursive checks but not memo hits.
    pub explored: u64,
    /// Least tree (by parent assignment) without a good candidate set, when
    /// the step clause failed.
    pub counterexample: Option<TreeOnSet>,
}

fn check_set(kind: Kind, x: &[u64], k: u64, budget: u64) -> Result<SetVerdict, TreeError> {
    let mut x = x.to_vec();
    x.sort_unstable();
    x.dedup();
    if x.is_empty() {
        return Err(TreeError::Invalid("the set must be nonempty".into()));
    }
    let mut d = Decider::new(kind, budget);
    let (holds, counterexample) = d.decide(&x, k)?;
    Ok(SetVerdict {
        holds,
        explored: d.explored,
        counterexample,
    })
}

pub fn is_regal(x: &[u64], k: u64, budget: u64) -> Result<SetVerdict, TreeError> {
    check_set(Kind::Regal, x, k, budget)
}

pub fn is_kiralic(x: &[u64], k: u64, budget: u64) -> Result<SetVerdict, TreeError> {
    check_set(Kind::Kiralic, x, k, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Indicator {
    /// `[a, b]` fails even the base clause.
    NotEvenZero,
    Value(u64),
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Indicator::NotEvenZero => write!(f, "not-even-zero"),
            Indicator::Value(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndicatorReport {
    pub value: Indicator,
    pub explored: u64,
}

fn indicator(kind: Kind, a: u64, b: u64, budget: u64) -> Result<IndicatorReport, TreeError> {
    if a > b {
        return Err(TreeError::Invalid(format!("empty interval [{a}, {b}]")));
    }
    let x: Vec<u64> = (a..=b).collect();
    if !base(&x) {
        return Ok(IndicatorReport {
            value: Indicator::NotEvenZero,
            explored: 0,
        });
    }
    let mut d = Decider::new(kind, budget);
    let mut k = 0;
    // candidates are proper subsets whenever |X| ≥ 3, so this stops by |X|
    while d.decide(&x, k + 1)?.0 {
        k += 1;
    }
    Ok(IndicatorReport {
        value: Indicator::Value(k),
        explored: d.explored,
    })
}

/// `Z(a, b)`: the greatest k with `[a, b]` k-regal.
pub fn regal_indicator(a: u64, b: u64, budget: u64) -> Result<IndicatorReport, TreeError> {
    indicator(Kind::Regal, a, b, budget)
}

/// `W(a, b)`: the greatest k with `[a, b]` k-kiralic.
pub fn kiralic_indicator(a: u64, b: u64, budget: u64) -> Result<IndicatorReport, TreeError> {
    indicator(Kind::Kiralic, a, b, budget)
}
