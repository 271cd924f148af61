//! Truncated noncommutative formal power series with exact rational
//! coefficients.
//!
//! A series lives inside a [`TruncationContext`] `(L, W)`: only words with
//! length `<= L` and weight `<= W` are represented. Both statistics are
//! additive under concatenation, so every operation below maps the finite
//! window to itself and agrees with the untruncated operation on it.
//!
//! Invariants:
//! - every stored word satisfies the context bounds,
//! - no stored coefficient is zero,
//! - iteration order is canonical: ascending `(length, weight, lex)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::word::Word;

/// Exact rational coefficient. `BigRational` keeps values in lowest terms
/// with a positive denominator.
pub type Coefficient = BigRational;

/// Coefficient from a machine integer.
pub fn coeff_int(n: i64) -> Coefficient {
    Coefficient::from_integer(BigInt::from(n))
}

/// Coefficient `p/q` from machine integers. Panics if `q == 0`.
pub fn coeff_ratio(p: i64, q: i64) -> Coefficient {
    Coefficient::new(BigInt::from(p), BigInt::from(q))
}

/// Bounds `(max_len, max_weight)` defining the finite window of words a
/// series is computed on. Since every letter index is at most the weight
/// bound, the window is finite.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TruncationContext {
    pub max_len: u32,
    pub max_weight: u32,
}

impl TruncationContext {
    pub fn new(max_len: u32, max_weight: u32) -> Self {
        TruncationContext {
            max_len,
            max_weight,
        }
    }

    /// Whether `w` fits inside the window.
    pub fn admits(&self, w: &Word) -> bool {
        w.len() <= self.max_len as usize && w.weight() <= u64::from(self.max_weight)
    }

    /// Componentwise minimum; the context binary operations result in.
    pub fn meet(&self, other: &Self) -> Self {
        TruncationContext {
            max_len: self.max_len.min(other.max_len),
            max_weight: self.max_weight.min(other.max_weight),
        }
    }

    /// `max_len + max_weight`, a bound on the `length + weight` filtration
    /// degree of any admissible word. Iterations indexed by this filtration
    /// terminate after at most this many steps.
    pub fn filtration_cap(&self) -> u32 {
        self.max_len + self.max_weight
    }
}

impl fmt::Display for TruncationContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(L={}, W={})", self.max_len, self.max_weight)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SeriesError {
    /// `inverse` needs a nonzero constant term.
    #[error("series has zero constant term and is not invertible")]
    ZeroConstantTerm,
    /// `geometric` needs a zero constant term.
    #[error("geometric sum requires a series with zero constant term")]
    NonzeroConstantTerm,
}

/// A noncommutative formal power series truncated to a context.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NCSeries {
    ctx: TruncationContext,
    terms: BTreeMap<Word, Coefficient>,
}

impl NCSeries {
    pub fn zero(ctx: TruncationContext) -> Self {
        NCSeries {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: TruncationContext) -> Self {
        Self::monomial(Word::empty(), Coefficient::one(), ctx)
    }

    /// The series consisting of the single term `c * w`, truncated.
    pub fn monomial(w: Word, c: Coefficient, ctx: TruncationContext) -> Self {
        let mut s = Self::zero(ctx);
        s.accumulate(w, c);
        s
    }

    /// The single-letter series `X_k`.
    pub fn letter(k: u32, ctx: TruncationContext) -> Self {
        Self::monomial(Word::letter(k), Coefficient::one(), ctx)
    }

    /// Builds a series from `(word, coefficient)` pairs: words outside the
    /// context are dropped, duplicates are merged, zero sums are removed.
    pub fn from_terms(
        pairs: impl IntoIterator<Item = (Word, Coefficient)>,
        ctx: TruncationContext,
    ) -> Self {
        let mut s = Self::zero(ctx);
        for (w, c) in pairs {
            s.accumulate(w, c);
        }
        s
    }

    /// Sum of the given words with coefficient 1 (the generating function of
    /// a language).
    pub fn from_words(words: impl IntoIterator<Item = Word>, ctx: TruncationContext) -> Self {
        Self::from_terms(words.into_iter().map(|w| (w, Coefficient::one())), ctx)
    }

    pub fn ctx(&self) -> TruncationContext {
        self.ctx
    }

    /// Terms in canonical `(length, weight, lex)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Coefficient)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `w`; zero when absent. Words outside the context are
    /// outside the computed window and also report zero.
    pub fn coeff(&self, w: &Word) -> Coefficient {
        self.terms.get(w).cloned().unwrap_or_else(Coefficient::zero)
    }

    /// Coefficient of the empty word.
    pub fn constant_term(&self) -> Coefficient {
        self.coeff(&Word::empty())
    }

    fn accumulate(&mut self, w: Word, c: Coefficient) {
        if c.is_zero() || !self.ctx.admits(&w) {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Re-truncates to `ctx`.
    pub fn restrict(&self, ctx: TruncationContext) -> Self {
        let mut s = Self::zero(ctx);
        for (w, c) in &self.terms {
            s.accumulate(w.clone(), c.clone());
        }
        s
    }

    /// Coefficientwise sum on the meet of the two contexts.
    pub fn add(&self, other: &Self) -> Self {
        let ctx = self.ctx.meet(&other.ctx);
        let mut s = self.restrict(ctx);
        for (w, c) in &other.terms {
            s.accumulate(w.clone(), c.clone());
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Coefficient::one())
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Coefficient) -> Self {
        if c.is_zero() {
            return Self::zero(self.ctx);
        }
        NCSeries {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    /// Concatenation (Cauchy) product: the coefficient of `w` in `R*S` is
    /// the sum of `<R,u><S,v>` over all splittings `w = uv`. Noncommutative.
    pub fn mul(&self, other: &Self) -> Self {
        let ctx = self.ctx.meet(&other.ctx);
        let max_len = ctx.max_len as usize;
        let max_weight = u64::from(ctx.max_weight);

        // Bucket the right factor by length; canonical order makes each
        // bucket ascend in weight, so the inner loop can break early.
        let mut right: Vec<Vec<(&Word, u64, &Coefficient)>> = vec![Vec::new(); max_len + 1];
        for (w, c) in &other.terms {
            if ctx.admits(w) {
                right[w.len()].push((w, w.weight(), c));
            }
        }

        let mut out = Self::zero(ctx);
        for (w1, c1) in &self.terms {
            let (l1, wt1) = w1.stats();
            if l1 > max_len || wt1 > max_weight {
                continue;
            }
            for bucket in &right[..=(max_len - l1)] {
                for &(w2, wt2, c2) in bucket {
                    if wt1 + wt2 > max_weight {
                        break;
                    }
                    out.accumulate(w1.concat(w2), c1 * c2);
                }
            }
        }
        out
    }

    /// Geometric sum `1 + B + B^2 + ...` of a series `B` with zero constant
    /// term; equals `inverse(1 - B)`. Every word of `B` has
    /// `length + weight >= 1`, so `B^n` vanishes once `n` exceeds the
    /// filtration cap; the loop certifies this instead of assuming it.
    pub fn geometric(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstantTerm);
        }
        let mut sum = Self::one(self.ctx);
        let mut power = Self::one(self.ctx);
        for _ in 0..=self.ctx.filtration_cap() {
            power = power.mul(self);
            if power.is_zero() {
                return Ok(sum);
            }
            sum = sum.add(&power);
        }
        unreachable!("power of a zero-constant-term series survived past the filtration cap");
    }

    /// Two-sided inverse via `R^{-1} = (1/a) sum_n (1 - R/a)^n` where
    /// `a` is the constant term.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let alpha = self.constant_term();
        if alpha.is_zero() {
            return Err(SeriesError::ZeroConstantTerm);
        }
        let inv_alpha = alpha.recip();
        let b = Self::one(self.ctx).sub(&self.scale(&inv_alpha));
        let geo = b.geometric().expect("1 - R/a has zero constant term");
        Ok(geo.scale(&inv_alpha))
    }

    /// The shift `X_i -> X_{i+s}` applied `s` times to every letter. Words
    /// whose shifted weight exceeds the bound are dropped. Multiplicative:
    /// `shift(R*S) = shift(R)*shift(S)`.
    pub fn shift(&self, s: u32) -> Self {
        let mut out = Self::zero(self.ctx);
        for (w, c) in &self.terms {
            out.accumulate(w.shift(s), c.clone());
        }
        out
    }

    /// Sign twist by length: the coefficient of `w` is multiplied by
    /// `(-1)^{len(w)}`. An involution and a ring map.
    pub fn sign_by_length(&self) -> Self {
        NCSeries {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| {
                    let v = if w.len() % 2 == 0 { c.clone() } else { -c };
                    (w.clone(), v)
                })
                .collect(),
        }
    }

    /// Equality on the meet of the two contexts.
    pub fn eq_trunc(&self, other: &Self) -> bool {
        let ctx = self.ctx.meet(&other.ctx);
        self.restrict(ctx).terms == other.restrict(ctx).terms
    }

    /// First word (in canonical order) within the meet context where the
    /// two series disagree, with both coefficients.
    pub fn first_difference(&self, other: &Self) -> Option<(Word, Coefficient, Coefficient)> {
        let ctx = self.ctx.meet(&other.ctx);
        let a = self.restrict(ctx);
        let b = other.restrict(ctx);
        let mut words: Vec<&Word> = a.terms.keys().chain(b.terms.keys()).collect();
        words.sort();
        words.dedup();
        for w in words {
            let ca = a.coeff(w);
            let cb = b.coeff(w);
            if ca != cb {
                return Some((w.clone(), ca, cb));
            }
        }
        None
    }

    pub fn to_json(&self) -> String {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| SeriesTermJson {
                word: w.letters().to_vec(),
                coeff: c.to_string(),
            })
            .collect();
        let doc = SeriesJson {
            context: self.ctx,
            terms,
        };
        serde_json::to_string(&doc).expect("series serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, JsonError> {
        let doc: SeriesJson = serde_json::from_str(s)?;
        let mut pairs = Vec::with_capacity(doc.terms.len());
        for t in doc.terms {
            let c = Coefficient::from_str(&t.coeff)
                .map_err(|_| JsonError::BadCoefficient(t.coeff.clone()))?;
            pairs.push((Word::new(t.word), c));
        }
        Ok(Self::from_terms(pairs, doc.context))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("malformed rational coefficient {0:?}")]
    BadCoefficient(String),
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    context: TruncationContext,
    terms: Vec<SeriesTermJson>,
}

#[derive(Serialize, Deserialize)]
struct SeriesTermJson {
    word: Vec<u32>,
    coeff: String,
}

/// Renders one coefficient-word pair without a leading sign.
fn fmt_term(w: &Word, c: &Coefficient, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if w.is_empty() {
        write!(f, "{c}")
    } else if c.is_one() {
        write!(f, "{w}")
    } else {
        write!(f, "{c} {w}")
    }
}

impl fmt::Display for NCSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            fmt_term(w, &c.abs(), f)?;
        }
        Ok(())
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &NCSeries {
            type Output = NCSeries;
            fn $method(self, rhs: &NCSeries) -> NCSeries {
                NCSeries::$method(self, rhs)
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);

impl Neg for &NCSeries {
    type Output = NCSeries;
    fn neg(self) -> NCSeries {
        NCSeries::neg(self)
    }
}
