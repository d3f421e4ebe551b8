//! Ordinals up to epsilon-zero in complete Cantor normal form.
//!
//! Every ordinal below ε₀ is stored as `ω^e₁·k₁ + … + ω^eₙ·kₙ` with strictly
//! decreasing exponents and positive coefficients; exponents are again
//! normal forms, so the whole value is a finite term tree. ε₀ itself is a
//! separate variant of [`Ordinal`] and can never occur as an exponent.
//!
//! Text form (used everywhere, including the CLI):
//!
//! ```text
//! ord  := "0" | sum
//! sum  := part ("+" part)*
//! part := nat | "w^(" ord ")*" nat
//! ```
//!
//! Printing is canonical: explicit coefficients, no spaces, the finite tail as
//! a bare decimal, e.g. `w^(2)*3+w^(1)*1+5`. ε₀ prints as `e0`. The parser
//! accepts only canonical strings, so `parse(s).to_string() == s` whenever
//! parsing succeeds.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision natural number.
pub type Nat = BigUint;

/// Largest integer (in bits) that [`Cnf::to_integer`] will materialize.
pub const MAX_VALUE_BITS: u64 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("operation is undefined on epsilon-zero")]
    EpsilonZeroOperand,
    #[error("base {base} must be at least 2 and exceed the largest coefficient {bound}")]
    BaseTooSmall { base: u64, bound: Nat },
    #[error("base {0} must be at least 2")]
    InvalidBase(u64),
    #[error("value would exceed {MAX_VALUE_BITS} bits")]
    ValueTooLarge,
    #[error("not in normal form: {0}")]
    NotNormal(&'static str),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: &'static str },
}

/// One summand `ω^exponent · coefficient`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    exponent: Cnf,
    coefficient: Nat,
}

impl Term {
    pub fn exponent(&self) -> &Cnf {
        &self.exponent
    }

    pub fn coefficient(&self) -> &Nat {
        &self.coefficient
    }
}

/// An ordinal strictly below ε₀ in Cantor normal form. The empty sum is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Cnf {
    terms: Vec<Term>,
}

impl Cnf {
    pub fn zero() -> Self {
        Cnf { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::finite(1u32)
    }

    pub fn omega() -> Self {
        Self::omega_pow(Self::one())
    }

    pub fn finite(n: impl Into<Nat>) -> Self {
        let n = n.into();
        if n.is_zero() {
            Self::zero()
        } else {
            Cnf {
                terms: vec![Term {
                    exponent: Cnf::zero(),
                    coefficient: n,
                }],
            }
        }
    }

    /// `ω^exponent`.
    pub fn omega_pow(exponent: Cnf) -> Self {
        Cnf {
            terms: vec![Term {
                exponent,
                coefficient: Nat::one(),
            }],
        }
    }

    /// Builds `Σ ω^eᵢ·kᵢ`, checking the normal-form invariants.
    pub fn from_terms<I, K>(terms: I) -> Result<Self, OrdinalError>
    where
        I: IntoIterator<Item = (Cnf, K)>,
        K: Into<Nat>,
    {
        let terms: Vec<Term> = terms
            .into_iter()
            .map(|(exponent, k)| Term {
                exponent,
                coefficient: k.into(),
            })
            .collect();
        if terms.iter().any(|t| t.coefficient.is_zero()) {
            return Err(OrdinalError::NotNormal("coefficients must be positive"));
        }
        if terms.windows(2).any(|w| w[0].exponent <= w[1].exponent) {
            return Err(OrdinalError::NotNormal(
                "exponents must be strictly decreasing",
            ));
        }
        Ok(Cnf { terms })
    }

    /// `ω_h(1)`: the tower with `ω_0(1) = 1` and `ω_{h+1}(1) = ω^{ω_h(1)}`.
    pub fn tower(height: usize) -> Self {
        (0..height).fold(Self::one(), |acc, _| Self::omega_pow(acc))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_successor(&self) -> bool {
        self.terms.last().is_some_and(|t| t.exponent.is_zero())
    }

    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|t| !t.exponent.is_zero())
    }

    /// The value if the ordinal is finite.
    pub fn as_finite(&self) -> Option<&Nat> {
        match self.terms.as_slice() {
            [] => None,
            [t] if t.exponent.is_zero() => Some(&t.coefficient),
            _ => None,
        }
    }

    /// `self + n`.
    pub fn add_nat(&self, n: &Nat) -> Cnf {
        let mut out = self.clone();
        if n.is_zero() {
            return out;
        }
        match out.terms.last_mut() {
            Some(t) if t.exponent.is_zero() => t.coefficient += n,
            _ => out.terms.push(Term {
                exponent: Cnf::zero(),
                coefficient: n.clone(),
            }),
        }
        out
    }

    /// `β` for `self = β + 1`.
    pub fn predecessor(&self) -> Option<Cnf> {
        if !self.is_successor() {
            return None;
        }
        let mut out = self.clone();
        out.decrement_last();
        Some(out)
    }

    fn decrement_last(&mut self) {
        if let Some(last) = self.terms.last_mut() {
            last.coefficient -= 1u32;
            if last.coefficient.is_zero() {
                self.terms.pop();
            }
        }
    }

    /// The n-th member of the fundamental sequence.
    ///
    /// Zero maps to zero and `β + 1` to `β`. For a limit, one copy of the last
    /// summand `ω^e` is split off and replaced by `ω^{e-1}·n` when `e` is a
    /// successor, or by `ω^{e[n]}` when `e` is itself a limit.
    pub fn fundamental(&self, n: &Nat) -> Cnf {
        let mut out = self.clone();
        out.descend(n);
        out
    }

    /// In-place [`Cnf::fundamental`].
    pub fn descend(&mut self, n: &Nat) {
        let Some(last) = self.terms.last() else {
            return;
        };
        if last.exponent.is_zero() {
            self.decrement_last();
            return;
        }
        let exponent = last.exponent.clone();
        self.decrement_last();
        match exponent.predecessor() {
            Some(lower) => {
                if !n.is_zero() {
                    self.terms.push(Term {
                        exponent: lower,
                        coefficient: n.clone(),
                    });
                }
            }
            None => self.terms.push(Term {
                exponent: exponent.fundamental(n),
                coefficient: Nat::one(),
            }),
        }
    }

    /// Largest integer coefficient anywhere in the term tree; `C(0) = 0`.
    pub fn coefficient_bound(&self) -> Nat {
        self.terms
            .iter()
            .map(|t| {
                let inner = t.exponent.coefficient_bound();
                if inner > t.coefficient {
                    inner
                } else {
                    t.coefficient.clone()
                }
            })
            .max()
            .unwrap_or_default()
    }

    /// Replaces ω by `base` everywhere and evaluates over the naturals.
    pub fn to_integer(&self, base: u64) -> Result<Nat, OrdinalError> {
        let bound = self.coefficient_bound();
        if base < 2 || Nat::from(base) <= bound {
            return Err(OrdinalError::BaseTooSmall { base, bound });
        }
        self.eval_at(base)
    }

    fn eval_at(&self, base: u64) -> Result<Nat, OrdinalError> {
        let bits_per_digit = 64 - u64::from(base.leading_zeros());
        let b = Nat::from(base);
        let mut total = Nat::zero();
        for t in &self.terms {
            let e = t.exponent.eval_at(base)?;
            let e = e
                .to_u64()
                .filter(|e| e.saturating_mul(bits_per_digit) <= MAX_VALUE_BITS)
                .ok_or(OrdinalError::ValueTooLarge)?;
            total += num_traits::pow::Pow::pow(&b, e) * &t.coefficient;
        }
        Ok(total)
    }

    /// Reads the complete base-`base` representation of `n` with ω in place
    /// of the base.
    pub fn from_integer(n: &Nat, base: u64) -> Result<Cnf, OrdinalError> {
        if base < 2 {
            return Err(OrdinalError::InvalidBase(base));
        }
        let b = Nat::from(base);
        let mut digits = Vec::new();
        let mut rest = n.clone();
        let mut position = 0u64;
        while !rest.is_zero() {
            let (q, r) = num_integer::Integer::div_rem(&rest, &b);
            if !r.is_zero() {
                digits.push((position, r));
            }
            rest = q;
            position += 1;
        }
        let mut terms = Vec::with_capacity(digits.len());
        for (position, digit) in digits.into_iter().rev() {
            terms.push(Term {
                exponent: Cnf::from_integer(&Nat::from(position), base)?,
                coefficient: digit,
            });
        }
        Ok(Cnf { terms })
    }
}

impl Ord for Cnf {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a
                .exponent
                .cmp(&b.exponent)
                .then_with(|| a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for Cnf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            if t.exponent.is_zero() {
                write!(f, "{}", t.coefficient)?;
            } else {
                write!(f, "w^({})*{}", t.exponent, t.coefficient)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Cnf {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let ord = p.ord()?;
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(ord)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &'static str) -> OrdinalError {
        OrdinalError::Parse { pos: self.pos, msg }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, lit: &[u8], msg: &'static str) -> Result<(), OrdinalError> {
        if self.src[self.pos..].starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(self.error(msg))
        }
    }

    fn ord(&mut self) -> Result<Cnf, OrdinalError> {
        if self.peek() == Some(b'0') {
            self.pos += 1;
            return Ok(Cnf::zero());
        }
        let mut terms = Vec::new();
        loop {
            terms.push(self.part()?);
            if self.peek() == Some(b'+') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if terms.windows(2).any(|w| w[0].exponent <= w[1].exponent) {
            return Err(self.error("exponents must be strictly decreasing"));
        }
        Ok(Cnf { terms })
    }

    fn part(&mut self) -> Result<Term, OrdinalError> {
        if self.peek() == Some(b'w') {
            self.expect(b"w^(", "expected `w^(`")?;
            let exponent = self.ord()?;
            if exponent.is_zero() {
                return Err(self.error("finite summand must be a bare number"));
            }
            self.expect(b")*", "expected `)*`")?;
            let coefficient = self.positive()?;
            Ok(Term {
                exponent,
                coefficient,
            })
        } else {
            Ok(Term {
                exponent: Cnf::zero(),
                coefficient: self.positive()?,
            })
        }
    }

    fn positive(&mut self) -> Result<Nat, OrdinalError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits = &self.src[start..self.pos];
        match digits.first() {
            None => Err(self.error("expected a number")),
            Some(b'0') => Err(OrdinalError::Parse {
                pos: start,
                msg: "coefficient must be positive without leading zeros",
            }),
            Some(_) => Ok(Nat::parse_bytes(digits, 10).expect("ascii digits")),
        }
    }
}

/// An ordinal `≤ ε₀`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ordinal {
    Below(Cnf),
    EpsilonZero,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal::Below(Cnf::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Ordinal::Below(c) if c.is_zero())
    }

    pub fn as_cnf(&self) -> Result<&Cnf, OrdinalError> {
        match self {
            Ordinal::Below(c) => Ok(c),
            Ordinal::EpsilonZero => Err(OrdinalError::EpsilonZeroOperand),
        }
    }

    pub fn add_nat(&self, n: &Nat) -> Result<Ordinal, OrdinalError> {
        Ok(Ordinal::Below(self.as_cnf()?.add_nat(n)))
    }

    /// `λ[n]`; for ε₀ this is the tower `ω_n(1)`, with `ε₀[0] = 1`.
    pub fn fundamental(&self, n: u64) -> Ordinal {
        match self {
            Ordinal::Below(c) => Ordinal::Below(c.fundamental(&Nat::from(n))),
            Ordinal::EpsilonZero => Ordinal::Below(Cnf::tower(n as usize)),
        }
    }

    pub fn coefficient_bound(&self) -> Result<Nat, OrdinalError> {
        Ok(self.as_cnf()?.coefficient_bound())
    }

    pub fn to_integer(&self, base: u64) -> Result<Nat, OrdinalError> {
        self.as_cnf()?.to_integer(base)
    }

    pub fn from_integer(n: &Nat, base: u64) -> Result<Ordinal, OrdinalError> {
        Cnf::from_integer(n, base).map(Ordinal::Below)
    }
}

impl From<Cnf> for Ordinal {
    fn from(c: Cnf) -> Self {
        Ordinal::Below(c)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Ordinal::Below(a), Ordinal::Below(b)) => a.cmp(b),
            (Ordinal::Below(_), Ordinal::EpsilonZero) => Ordering::Less,
            (Ordinal::EpsilonZero, Ordinal::Below(_)) => Ordering::Greater,
            (Ordinal::EpsilonZero, Ordinal::EpsilonZero) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ordinal::Below(c) => c.fmt(f),
            Ordinal::EpsilonZero => f.write_str("e0"),
        }
    }
}

impl FromStr for Ordinal {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "e0" {
            Ok(Ordinal::EpsilonZero)
        } else {
            s.parse().map(Ordinal::Below)
        }
    }
}

#[cfg(test)]
pub(crate) mod strategy {
    use super::*;
    use proptest::prelude::*;

    /// Normal forms of bounded depth with coefficients in `1..=max_coeff`.
    pub fn cnf(depth: u32, max_coeff: u32) -> BoxedStrategy<Cnf> {
        let leaf = (0..=max_coeff).prop_map(Cnf::finite).boxed();
        leaf.prop_recursive(depth, 24, 4, move |inner| {
            prop::collection::vec((inner, 1..=max_coeff), 0..4)
                .prop_map(|mut parts| {
                    parts.sort_by(|a, b| b.0.cmp(&a.0));
                    parts.dedup_by(|a, b| a.0 == b.0);
                    Cnf::from_terms(parts).expect("sorted and deduplicated")
                })
                .boxed()
        })
        .boxed()
    }
}
