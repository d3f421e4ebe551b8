//! The worm game.
//!
//! A worm is a list `f(0), …, f(n)` whose last entry is the head. At step m
//! a zero head is cut off; otherwise, with `k` the largest position below n
//! holding a value smaller than the head, the worm splits into a good part
//! `f(0..=k)` and a bad part `f(k+1..n)` followed by the decremented head,
//! and becomes the good part followed by `m + 1` copies of the bad part.
//! Every worm dies, though not provably so in PA.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Longest worm a run will build before giving up.
pub const MAX_LENGTH: usize = 1 << 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WormError {
    #[error("the empty worm has no successor")]
    Empty,
    #[error("step index must be at least 1")]
    ZeroStep,
    #[error("fuel must be at least 1")]
    ZeroFuel,
    #[error("cannot parse worm: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Worm {
    entries: Vec<u64>,
}

impl Worm {
    pub fn new(entries: Vec<u64>) -> Self {
        Worm { entries }
    }

    pub fn empty() -> Self {
        Worm::default()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn head(&self) -> Option<u64> {
        self.entries.last().copied()
    }

    /// Position of the last entry of the good part, if it is nonempty.
    pub fn good_part_end(&self) -> Option<usize> {
        let (&head, body) = self.entries.split_last()?;
        body.iter().rposition(|&v| v < head)
    }

    /// Length the worm would have after step `m`, without building it.
    pub fn next_len(&self, m: u64) -> Option<u128> {
        let head = self.head()?;
        if head == 0 {
            return Some(self.len() as u128 - 1);
        }
        let good = self.good_part_end().map_or(0, |k| k + 1);
        let bad = (self.len() - good) as u128;
        Some(good as u128 + bad * (u128::from(m) + 1))
    }

    fn step(&mut self, m: u64) {
        let head = self.entries.pop().expect("nonempty worm");
        if head == 0 {
            return;
        }
        let start = self.entries.iter().rposition(|&v| v < head).map_or(0, |k| k + 1);
        self.entries.push(head - 1);
        let bad_len = self.entries.len() - start;
        self.entries.reserve(bad_len * m as usize);
        for _ in 0..m {
            self.entries.extend_from_within(start..start + bad_len);
        }
    }
}

impl From<Vec<u64>> for Worm {
    fn from(entries: Vec<u64>) -> Self {
        Worm { entries }
    }
}

impl fmt::Display for Worm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Accepts `1,0,1`, `(1,0,1)`, and `()` or the empty string for the empty worm.
impl FromStr for Worm {
    type Err = WormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s)
            .trim();
        if inner.is_empty() {
            return Ok(Worm::empty());
        }
        inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| WormError::Parse(format!("bad entry {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Worm::new)
    }
}

/// The worm after step `m`.
pub fn next_worm(w: &Worm, m: u64) -> Result<Worm, WormError> {
    if w.is_empty() {
        return Err(WormError::Empty);
    }
    if m == 0 {
        return Err(WormError::ZeroStep);
    }
    let mut next = w.clone();
    next.step(m);
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WormStatus {
    /// Least n with `w_n = ∅`.
    Terminated(u64),
    /// Still alive after the whole fuel.
    Truncated,
    /// The next worm would exceed [`MAX_LENGTH`] entries.
    TooLong,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WormRun {
    pub status: WormStatus,
    /// Transitions performed.
    pub steps: u64,
    pub max_length: u64,
    pub final_length: u64,
}

impl WormRun {
    pub fn termination_step(&self) -> Option<u64> {
        match self.status {
            WormStatus::Terminated(n) => Some(n),
            _ => None,
        }
    }
}

/// Plays at most `fuel` steps from `w`, calling `visit(n, w_n)` on every
/// worm reached, starting with `w_0`.
pub fn worm_run_with(
    w: &Worm,
    fuel: u64,
    mut visit: impl FnMut(u64, &Worm),
) -> Result<WormRun, WormError> {
    if fuel == 0 {
        return Err(WormError::ZeroFuel);
    }
    let mut cur = w.clone();
    let mut max_length = cur.len() as u64;
    let mut n = 0;
    visit(0, &cur);
    let status = loop {
        if cur.is_empty() {
            break WormStatus::Terminated(n);
        }
        if n == fuel {
            break WormStatus::Truncated;
        }
        let m = n + 1;
        if cur.next_len(m).is_some_and(|l| l > MAX_LENGTH as u128) {
            break WormStatus::TooLong;
        }
        cur.step(m);
        n = m;
        max_length = max_length.max(cur.len() as u64);
        visit(n, &cur);
    };
    Ok(WormRun {
        status,
        steps: n,
        max_length,
        final_length: cur.len() as u64,
    })
}

pub fn worm_run(w: &Worm, fuel: u64) -> Result<WormRun, WormError> {
    worm_run_with(w, fuel, |_, _| {})
}

/// Every worm of a run, `w_0` first.
pub fn worm_trace(w: &Worm, fuel: u64) -> Result<(WormRun, Vec<Worm>), WormError> {
    let mut trace = Vec::new();
    let run = worm_run_with(w, fuel, |_, x| trace.push(x.clone()))?;
    Ok((run, trace))
}
