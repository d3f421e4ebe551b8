//! Hereditary base representations and generalized Goodstein sequences.
//!
//! A run never converts its values back and forth between integers and
//! representations. The base change is a relabelling of the hereditary
//! representation, and the decrement is done on the representation itself,
//! so the work per step is proportional to the size of the term tree rather
//! than to the size of the number (which for `m = 4` already reaches
//! hundreds of millions of bits). Integer values are materialized on request.

use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::ordinal::{Cnf, Nat, MAX_VALUE_BITS};

/// Most summands a single decrement may introduce.
pub const MAX_EXPANSION: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoodsteinError {
    #[error("base {0} must be at least 2")]
    InvalidBase(u64),
    #[error("target base {to} is smaller than source base {from}")]
    DecreasingBase { from: u64, to: u64 },
    #[error("value would exceed {MAX_VALUE_BITS} bits")]
    ValueTooLarge,
    #[error("decrement would expand into more than {MAX_EXPANSION} summands")]
    ExpansionTooLarge,
    #[error("base function overflowed at step {0}")]
    BaseOverflow(u64),
    #[error("invalid base function: {0}")]
    InvalidBaseFunction(String),
}

/// `base^exponent · digit` with the exponent itself hereditary.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RepTerm {
    pub exponent: Vec<RepTerm>,
    pub digit: u64,
}

/// Complete (hereditary) base-b representation of a natural number.
/// Summands are stored most significant first; the empty list is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseRep {
    base: u64,
    terms: Vec<RepTerm>,
}

impl BaseRep {
    /// The unique hereditary base-`base` representation of `n`.
    pub fn complete(n: &Nat, base: u64) -> Result<Self, GoodsteinError> {
        if base < 2 {
            return Err(GoodsteinError::InvalidBase(base));
        }
        Ok(BaseRep {
            base,
            terms: expand(n, base),
        })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn terms(&self) -> &[RepTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn value(&self) -> Result<Nat, GoodsteinError> {
        evaluate(&self.terms, self.base)
    }

    /// Same digits and shape read in a larger base: the map `S_b^a`.
    pub fn rebased(&self, base: u64) -> Result<Self, GoodsteinError> {
        if base < self.base {
            return Err(GoodsteinError::DecreasingBase {
                from: self.base,
                to: base,
            });
        }
        Ok(BaseRep {
            base,
            terms: self.terms.clone(),
        })
    }

    /// Subtracts one, leaving zero at zero.
    pub fn decrement(&mut self) -> Result<(), GoodsteinError> {
        let mut budget = MAX_EXPANSION;
        decrement(&mut self.terms, self.base, &mut budget)
    }

    /// The ordinal obtained by putting ω in place of the base.
    pub fn to_ordinal(&self) -> Cnf {
        to_cnf(&self.terms)
    }
}

impl fmt::Display for BaseRep {
    /// `b^(e)*d` summands joined by `+`, exponents printed recursively.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn terms(ts: &[RepTerm], b: u64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if ts.is_empty() {
                return f.write_str("0");
            }
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    f.write_str("+")?;
                }
                if t.exponent.is_empty() {
                    write!(f, "{}", t.digit)?;
                } else {
                    write!(f, "{b}^(")?;
                    terms(&t.exponent, b, f)?;
                    write!(f, ")*{}", t.digit)?;
                }
            }
            Ok(())
        }
        terms(&self.terms, self.base, f)
    }
}

// Greedy, most significant summand first.
fn expand(n: &Nat, base: u64) -> Vec<RepTerm> {
    let b = Nat::from(base);
    let log2_b = (base as f64).log2();
    let mut rest = n.clone();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let guess = ((rest.bits() - 1) as f64 / log2_b).floor() as u64;
        let mut e = guess.saturating_sub(1);
        let mut power = num_traits::pow::Pow::pow(&b, e);
        while &power * &b <= rest {
            power *= &b;
            e += 1;
        }
        while power > rest {
            power /= &b;
            e -= 1;
        }
        let (digit, r) = num_integer::Integer::div_rem(&rest, &power);
        rest = r;
        out.push(RepTerm {
            exponent: expand(&Nat::from(e), base),
            digit: digit.to_u64().expect("digit below base"),
        });
    }
    out
}

fn evaluate(terms: &[RepTerm], base: u64) -> Result<Nat, GoodsteinError> {
    let bits_per_digit = 64 - u64::from(base.leading_zeros());
    let b = Nat::from(base);
    let mut total = Nat::zero();
    for t in terms {
        let e = evaluate(&t.exponent, base)?
            .to_u64()
            .filter(|e| e.saturating_mul(bits_per_digit) <= MAX_VALUE_BITS)
            .ok_or(GoodsteinError::ValueTooLarge)?;
        total += num_traits::pow::Pow::pow(&b, e) * Nat::from(t.digit);
    }
    Ok(total)
}

// b^E·d - 1 = b^E·(d-1) + (b-1)·b^(E-1) + ... + (b-1)·b^0
fn decrement(
    terms: &mut Vec<RepTerm>,
    base: u64,
    budget: &mut u64,
) -> Result<(), GoodsteinError> {
    let Some(last) = terms.last_mut() else {
        return Ok(());
    };
    last.digit -= 1;
    let mut exponent = if last.digit == 0 {
        terms.pop().expect("nonempty").exponent
    } else {
        last.exponent.clone()
    };
    while !exponent.is_empty() {
        if *budget == 0 {
            return Err(GoodsteinError::ExpansionTooLarge);
        }
        *budget -= 1;
        decrement(&mut exponent, base, budget)?;
        terms.push(RepTerm {
            exponent: exponent.clone(),
            digit: base - 1,
        });
    }
    Ok(())
}

fn to_cnf(terms: &[RepTerm]) -> Cnf {
    Cnf::from_terms(terms.iter().map(|t| (to_cnf(&t.exponent), t.digit)))
        .expect("hereditary representations are normal forms")
}

/// The map `S_b^a`: write `n` hereditarily in base `a`, read it in base `b`.
pub fn base_shift(n: &Nat, from: u64, to: u64) -> Result<Nat, GoodsteinError> {
    BaseRep::complete(n, from)?.rebased(to)?.value()
}

/// Non-decreasing base schedule `i ↦ f(i)` with `f(0) ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseFunction {
    /// `i + 2`
    Classic,
    Constant(u64),
    /// `slope·i + offset`
    Affine { slope: u64, offset: u64 },
    /// Explicit values; the last entry repeats past the end.
    Table(Vec<u64>),
}

impl BaseFunction {
    pub fn validate(&self) -> Result<(), GoodsteinError> {
        let bad = |msg: &str| Err(GoodsteinError::InvalidBaseFunction(msg.to_string()));
        match self {
            BaseFunction::Classic => Ok(()),
            BaseFunction::Constant(b) | BaseFunction::Affine { offset: b, .. } if *b < 2 => {
                bad("f(0) must be at least 2")
            }
            BaseFunction::Constant(_) | BaseFunction::Affine { .. } => Ok(()),
            BaseFunction::Table(t) if t.is_empty() => bad("table is empty"),
            BaseFunction::Table(t) if t[0] < 2 => bad("f(0) must be at least 2"),
            BaseFunction::Table(t) if t.windows(2).any(|w| w[1] < w[0]) => {
                bad("table must be non-decreasing")
            }
            BaseFunction::Table(_) => Ok(()),
        }
    }

    pub fn at(&self, i: u64) -> Result<u64, GoodsteinError> {
        let overflow = || GoodsteinError::BaseOverflow(i);
        match self {
            BaseFunction::Classic => i.checked_add(2).ok_or_else(overflow),
            BaseFunction::Constant(b) => Ok(*b),
            BaseFunction::Affine { slope, offset } => slope
                .checked_mul(i)
                .and_then(|v| v.checked_add(*offset))
                .ok_or_else(overflow),
            BaseFunction::Table(t) => Ok(*t
                .get(i as usize)
                .or(t.last())
                .expect("validated nonempty")),
        }
    }
}

impl fmt::Display for BaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseFunction::Classic => f.write_str("classic"),
            BaseFunction::Constant(b) => write!(f, "const:{b}"),
            BaseFunction::Affine { slope, offset } => write!(f, "affine:{slope},{offset}"),
            BaseFunction::Table(t) => {
                let parts: Vec<String> = t.iter().map(u64::to_string).collect();
                write!(f, "table:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for BaseFunction {
    type Err = GoodsteinError;

    /// `classic`, `const:B`, `affine:Q,R` or `table:B0,B1,...`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || GoodsteinError::InvalidBaseFunction(s.to_string());
        let nums = |list: &str| -> Result<Vec<u64>, GoodsteinError> {
            list.split(',')
                .map(|x| x.trim().parse().map_err(|_| invalid()))
                .collect()
        };
        let f = match s.split_once(':') {
            None if s == "classic" => BaseFunction::Classic,
            Some(("const", b)) => BaseFunction::Constant(b.parse().map_err(|_| invalid())?),
            Some(("affine", qr)) => match nums(qr)?.as_slice() {
                [slope, offset] => BaseFunction::Affine {
                    slope: *slope,
                    offset: *offset,
                },
                _ => return Err(invalid()),
            },
            Some(("table", list)) => BaseFunction::Table(nums(list)?),
            _ => return Err(invalid()),
        };
        f.validate()?;
        Ok(f)
    }
}

/// One row `(i, f(i), m_i)`; the ordinal is `m_i` with ω for the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodsteinRow {
    pub i: u64,
    pub rep: BaseRep,
    pub ordinal: Cnf,
}

impl GoodsteinRow {
    fn new(i: u64, rep: BaseRep) -> Self {
        let ordinal = rep.to_ordinal();
        GoodsteinRow { i, rep, ordinal }
    }

    pub fn base(&self) -> u64 {
        self.rep.base()
    }

    pub fn value(&self) -> Result<Nat, GoodsteinError> {
        self.rep.value()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// First index with `m_i = 0`.
    Terminated(u64),
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodsteinRun {
    pub rows: Vec<GoodsteinRow>,
    pub status: RunStatus,
}

/// Lazily produces `m_0, m_1, …` and stops after the first zero.
pub struct GoodsteinIter<'f> {
    f: &'f BaseFunction,
    next: Option<GoodsteinRow>,
}

impl<'f> GoodsteinIter<'f> {
    pub fn new(m: &Nat, f: &'f BaseFunction) -> Result<Self, GoodsteinError> {
        f.validate()?;
        let rep = BaseRep::complete(m, f.at(0)?)?;
        Ok(GoodsteinIter {
            f,
            next: Some(GoodsteinRow::new(0, rep)),
        })
    }

    fn advance(&self, row: &GoodsteinRow) -> Result<GoodsteinRow, GoodsteinError> {
        let i = row.i + 1;
        let mut rep = row.rep.rebased(self.f.at(i)?)?;
        rep.decrement()?;
        Ok(GoodsteinRow::new(i, rep))
    }
}

impl Iterator for GoodsteinIter<'_> {
    type Item = Result<GoodsteinRow, GoodsteinError>;

    fn next(&mut self) -> Option<Self::Item> {
        let row = self.next.take()?;
        if !row.is_zero() {
            match self.advance(&row) {
                Ok(next) => self.next = Some(next),
                Err(e) => return Some(Err(e)),
            }
        }
        Some(Ok(row))
    }
}

/// `m_0 = m`, `m_{i+1} = S_{f(i+1)}^{f(i)}(m_i) ∸ 1`, for at most
/// `max_steps` transitions.
pub fn goodstein_run(
    m: &Nat,
    f: &BaseFunction,
    max_steps: u64,
) -> Result<GoodsteinRun, GoodsteinError> {
    let mut rows = Vec::new();
    for row in GoodsteinIter::new(m, f)?.take(max_steps.saturating_add(1) as usize) {
        rows.push(row?);
    }
    let last = rows.last().expect("at least the initial row");
    let status = if last.is_zero() {
        RunStatus::Terminated(last.i)
    } else {
        RunStatus::Truncated
    };
    Ok(GoodsteinRun { rows, status })
}

/// Least `i` with `m_i = 0`, if reached within `fuel` transitions.
pub fn termination_length(
    m: &Nat,
    f: &BaseFunction,
    fuel: u64,
) -> Result<Option<u64>, GoodsteinError> {
    for row in GoodsteinIter::new(m, f)?.take(fuel.saturating_add(1) as usize) {
        let row = row?;
        if row.is_zero() {
            return Ok(Some(row.i));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    Pass,
    /// Row `index + 1` does not lie strictly below row `index`.
    Fail { index: usize },
}

/// Checks strict ordinal descent between consecutive rows while `m_i > 0`.
pub fn descent_certificate(rows: &[GoodsteinRow]) -> Certificate {
    rows.windows(2)
        .position(|w| !w[0].is_zero() && w[1].ordinal >= w[0].ordinal)
        .map_or(Certificate::Pass, |index| Certificate::Fail { index })
}
