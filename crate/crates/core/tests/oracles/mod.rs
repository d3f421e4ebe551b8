//! Brute-force reference implementations.
//!
//! Nothing here shares code with the library beyond its public types: each
//! oracle enumerates its whole search space with no pruning, ordering trick
//! or memo. Shared by the core integration tests and the acceptance suite.
#![allow(dead_code)]

use std::collections::BTreeSet;

/// The `size`-subsets of `0..n` as bitmasks, in lexicographic order of the
/// sorted element lists.
pub fn lex_subsets(n: usize, size: usize) -> Vec<u32> {
    fn go(start: usize, n: usize, left: usize, cur: u32, out: &mut Vec<u32>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for x in start..n {
            go(x + 1, n, left - 1, cur | (1 << x), out);
        }
    }
    let mut out = Vec::new();
    go(0, n, size, 0, &mut out);
    out
}

fn rank_table(n: usize, size: usize) -> (Vec<u32>, Vec<usize>) {
    let subs = lex_subsets(n, size);
    let mut rank = vec![usize::MAX; 1 << n];
    for (i, &m) in subs.iter().enumerate() {
        rank[m as usize] = i;
    }
    (subs, rank)
}

/// Submasks of `x` with exactly `size` bits.
fn submasks(x: u32, size: u32) -> impl Iterator<Item = u32> {
    let mut sub = x;
    let mut done = false;
    std::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let cur = sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & x;
        }
        if cur.count_ones() == size {
            return Some(cur);
        }
    })
}

/// Outcome of an exhaustive arrow check: the verdict and, when false, the
/// index of the least failing function in lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleArrow {
    pub holds: bool,
    pub first_failure: Option<u64>,
    pub space: u64,
}

/// `[a1, a2] →* (b)^c_d` by trying every coloring against every subset.
pub fn ph_arrow(a1: u64, a2: u64, b: u64, c: u64, d: u64) -> OracleArrow {
    let n = (a2 - a1 + 1) as usize;
    assert!(n <= 16);
    let (subs, rank) = rank_table(n, c as usize);
    let space = d.pow(subs.len() as u32);
    let mut colors = vec![0u64; subs.len()];
    for idx in 0..space {
        let mut rest = idx;
        for slot in colors.iter_mut().rev() {
            *slot = rest % d;
            rest /= d;
        }
        let good = (1u32..1 << n).any(|x| {
            let size = u64::from(x.count_ones());
            let min = a1 + u64::from(x.trailing_zeros());
            if size < b || size < min {
                return false;
            }
            let mut seen = None;
            submasks(x, c as u32).all(|s| *seen.get_or_insert(colors[rank[s as usize]]) == colors[rank[s as usize]])
        });
        if !good {
            return OracleArrow {
                holds: false,
                first_failure: Some(idx),
                space,
            };
        }
    }
    OracleArrow {
        holds: true,
        first_failure: None,
        space,
    }
}

/// Number of regressive functions on the n-subsets of `[a, a + len - 1]`.
pub fn km_space(a: u64, len: usize, n: usize) -> u128 {
    lex_subsets(len, n)
        .iter()
        .map(|&s| u128::from((a + u64::from(s.trailing_zeros())).max(1)))
        .product()
}

/// `[a, b] →* (k)^n` by trying every regressive function against every set.
pub fn km_arrow(a: u64, b: u64, k: u64, n: u64) -> OracleArrow {
    let len = (b - a + 1) as usize;
    assert!(len <= 16);
    let (subs, rank) = rank_table(len, n as usize);
    let radix: Vec<u64> = subs
        .iter()
        .map(|&s| (a + u64::from(s.trailing_zeros())).max(1))
        .collect();
    let space: u64 = radix.iter().product();
    let mut vals = vec![0u64; subs.len()];
    for idx in 0..space {
        let mut rest = idx;
        for (slot, &r) in vals.iter_mut().zip(&radix).rev() {
            *slot = rest % r;
            rest /= r;
        }
        let good = (1u32..1 << len).any(|h| {
            if u64::from(h.count_ones()) < k {
                return false;
            }
            let tuples: Vec<u32> = submasks(h, n as u32).collect();
            tuples.iter().all(|&s| {
                tuples.iter().all(|&t| {
                    s.trailing_zeros() != t.trailing_zeros()
                        || vals[rank[s as usize]] == vals[rank[t as usize]]
                })
            })
        });
        if !good {
            return OracleArrow {
                holds: false,
                first_failure: Some(idx),
                space,
            };
        }
    }
    OracleArrow {
        holds: true,
        first_failure: None,
        space,
    }
}

/// Rooted tree as a parent array, node 0 the root, parents before children.
#[derive(Debug, Clone)]
pub struct PTree {
    pub parent: Vec<usize>,
}

impl PTree {
    pub fn parse(enc: &str) -> PTree {
        let mut parent = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        for ch in enc.chars() {
            match ch {
                '(' => {
                    parent.push(stack.last().copied().unwrap_or(usize::MAX));
                    stack.push(parent.len() - 1);
                }
                ')' => {
                    stack.pop();
                }
                _ => panic!("bad tree {enc}"),
            }
        }
        PTree { parent }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    fn ancestors(&self, mut v: usize) -> Vec<usize> {
        let mut out = vec![v];
        while v != 0 {
            v = self.parent[v];
            out.push(v);
        }
        out
    }

    pub fn meet(&self, u: usize, v: usize) -> usize {
        let au = self.ancestors(u);
        let av = self.ancestors(v);
        *au.iter().find(|x| av.contains(x)).unwrap()
    }

    /// Canonical encoding: children encodings sorted ascending.
    pub fn canonical(&self) -> String {
        fn enc(t: &PTree, v: usize) -> String {
            let mut kids: Vec<String> = (1..t.len()).filter(|&c| t.parent[c] == v).map(|c| enc(t, c)).collect();
            kids.sort();
            format!("({})", kids.concat())
        }
        enc(self, 0)
    }
}

/// Every canonical encoding of a rooted tree with `n` nodes, obtained from
/// all (n-1)! recursive labelings.
pub fn trees_by_labelings(n: usize) -> BTreeSet<String> {
    fn go(parent: &mut Vec<usize>, n: usize, out: &mut BTreeSet<String>) {
        if parent.len() == n {
            out.insert(PTree { parent: parent.clone() }.canonical());
            return;
        }
        for p in 0..parent.len() {
            parent.push(p);
            go(parent, n, out);
            parent.pop();
        }
    }
    let mut out = BTreeSet::new();
    go(&mut vec![usize::MAX], n, &mut out);
    out
}

/// Searches all injections for one that maps meets to meets.
pub fn inf_embeds(a: &str, b: &str) -> bool {
    let (s, t) = (PTree::parse(a), PTree::parse(b));
    fn go(s: &PTree, t: &PTree, h: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = h.len();
        if i == s.len() {
            return true;
        }
        for v in 0..t.len() {
            if used[v] {
                continue;
            }
            h.push(v);
            let ok = (0..i).all(|j| h[s.meet(i, j)] == t.meet(v, h[j]));
            if ok {
                used[v] = true;
                if go(s, t, h, used) {
                    return true;
                }
                used[v] = false;
            }
            h.pop();
        }
        false
    }
    s.len() <= t.len() && go(&s, &t, &mut Vec::new(), &mut vec![false; t.len()])
}

/// Whether some sequence `T_0..T_m` with `|T_i| ≤ bound(i)` has no `i < j`
/// with `T_i` embedding in `T_j`, trying every sequence.
pub fn bad_sequence_exists(m: usize, bound: impl Fn(usize) -> usize) -> bool {
    let pools: Vec<Vec<String>> = (0..=m)
        .map(|i| (1..=bound(i)).flat_map(trees_by_labelings).collect())
        .collect();
    fn go(pools: &[Vec<String>], seq: &mut Vec<String>) -> bool {
        if seq.len() == pools.len() {
            return (0..seq.len()).all(|j| (0..j).all(|i| !inf_embeds(&seq[i], &seq[j])));
        }
        for t in &pools[seq.len()] {
            seq.push(t.clone());
            let found = go(pools, seq);
            seq.pop();
            if found {
                return true;
            }
        }
        false
    }
    go(&pools, &mut Vec::new())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    Regal,
    Kiralic,
}

/// The k-regal / k-kiralic property by full recursion over every tree.
pub fn set_property(kind: SetKind, x: &[u64], k: u64) -> bool {
    if k == 0 {
        return x.len() as u64 > x[0] + 2;
    }
    let n = x.len();
    let mut parent = vec![0usize; n];
    loop {
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0usize; n];
        for i in 1..n {
            children[parent[i]].push(i);
            depth[i] = depth[parent[i]] + 1;
        }
        let mut cands: Vec<Vec<u64>> = Vec::new();
        for leaf in (0..n).filter(|&i| children[i].is_empty()) {
            let mut path = vec![x[leaf]];
            let mut v = leaf;
            while v != 0 {
                v = parent[v];
                path.push(x[v]);
            }
            path.sort();
            cands.push(path);
        }
        match kind {
            SetKind::Regal => {
                for d in 0..n {
                    let level: Vec<u64> = (0..n).filter(|&i| depth[i] == d).map(|i| x[i]).collect();
                    if !level.is_empty() {
                        cands.push(level);
                    }
                }
            }
            SetKind::Kiralic => {
                cands.push(vec![x[0]]);
                for ch in &children {
                    if !ch.is_empty() {
                        cands.push(ch.iter().map(|&i| x[i]).collect());
                    }
                }
            }
        }
        if !cands.iter().any(|y| set_property(kind, y, k - 1)) {
            return false;
        }
        // next parent assignment, parent[i] < i
        let mut i = n;
        loop {
            if i <= 1 {
                return true;
            }
            i -= 1;
            if parent[i] + 1 < i {
                parent[i] += 1;
                break;
            }
            parent[i] = 0;
        }
    }
}

/// Greatest k ≤ `k_max` with `[a, b]` k-regal (k-kiralic), `None` if not
/// even 0.
pub fn indicator(kind: SetKind, a: u64, b: u64, k_max: u64) -> Option<u64> {
    let x: Vec<u64> = (a..=b).collect();
    (0..=k_max).take_while(|&k| set_property(kind, &x, k)).last()
}
