//! Exact arithmetic in ambient groups of the form
//! `⊕ Z(p_i^∞) ⊕ (Z/2)^s ⊕ F^r`, where each `p_i` is an odd prime and `F` is
//! either the rationals or the integers.
//!
//! Elements are written `(d, t, q)`: `d` is a sparse map of Prüfer
//! coordinates, `t` the order-2 bits and `q` the free coordinates. The zero
//! element has a unique representation, so structural equality is group
//! equality.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("elements belong to different ambient signatures")]
    SignatureMismatch,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("prufer index {index} out of range ({len} factors)")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("denominator {den} is not a power of {prime}")]
    BadDenominator { den: BigInt, prime: u64 },
    #[error("expected {expected} {part} coordinates, got {got}")]
    Length {
        part: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("free coordinate {0} is not an integer (integer free mode)")]
    NonIntegerFree(BigRational),
    #[error("malformed signature `{text}`: {reason}")]
    SignatureSyntax { text: String, reason: String },
}

/// Whether the free coordinates range over the rationals or the integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreeMode {
    #[default]
    Rational,
    Integer,
}

impl fmt::Display for FreeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeMode::Rational => f.write_str("rational"),
            FreeMode::Integer => f.write_str("integer"),
        }
    }
}

impl FromStr for FreeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rational" => Ok(FreeMode::Rational),
            "integer" => Ok(FreeMode::Integer),
            other => Err(format!("unknown free mode `{other}`")),
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3u64;
    while f.saturating_mul(f) <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

/// Shape of an ambient group. Coordinates are linearly ordered: Prüfer
/// factors in declaration order, then the order-2 bits, then the free part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmbientSignature {
    prufer_factors: Vec<u64>,
    order_two: usize,
    free_rank: usize,
    free_mode: FreeMode,
}

impl AmbientSignature {
    pub fn new(
        prufer_factors: Vec<u64>,
        order_two: usize,
        free_rank: usize,
        free_mode: FreeMode,
    ) -> Result<Arc<Self>, GroupError> {
        if let Some(&p) = prufer_factors.iter().find(|&&p| p == 2 || !is_prime(p)) {
            return Err(GroupError::NotOddPrime(p));
        }
        Ok(Arc::new(AmbientSignature {
            prufer_factors,
            order_two,
            free_rank,
            free_mode,
        }))
    }

    /// Reads the `Display` form `prufer=[3,5];s=2;r=2;mode=rational`.
    /// Fields may come in any order; `mode` is optional and defaults to
    /// rational.
    pub fn parse(text: &str) -> Result<Arc<Self>, GroupError> {
        let err = |reason: String| GroupError::SignatureSyntax {
            text: text.to_string(),
            reason,
        };
        let (mut prufer, mut s, mut r, mut mode) = (None, None, None, None);
        for field in text.trim().split(';') {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| err(format!("field `{field}` has no `=`")))?;
            let (key, value) = (key.trim(), value.trim());
            let count = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| err(format!("`{key}` needs a count, got `{v}`")))
            };
            let duplicate = match key {
                "prufer" => {
                    let inner = value
                        .strip_prefix('[')
                        .and_then(|v| v.strip_suffix(']'))
                        .ok_or_else(|| err("`prufer` needs a bracketed list".into()))?;
                    let primes = inner
                        .split(',')
                        .map(str::trim)
                        .filter(|p| !p.is_empty())
                        .map(|p| {
                            p.parse::<u64>()
                                .map_err(|_| err(format!("`{p}` is not a prime")))
                        })
                        .collect::<Result<Vec<u64>, _>>()?;
                    prufer.replace(primes).is_some()
                }
                "s" => s.replace(count(value)?).is_some(),
                "r" => r.replace(count(value)?).is_some(),
                "mode" => mode
                    .replace(value.parse::<FreeMode>().map_err(err)?)
                    .is_some(),
                _ => return Err(err(format!("unknown field `{key}`"))),
            };
            if duplicate {
                return Err(err(format!("field `{key}` given twice")));
            }
        }
        let missing = |k: &str| err(format!("missing field `{k}`"));
        AmbientSignature::new(
            prufer.ok_or_else(|| missing("prufer"))?,
            s.ok_or_else(|| missing("s"))?,
            r.ok_or_else(|| missing("r"))?,
            mode.unwrap_or_default(),
        )
    }

    pub fn prufer_factors(&self) -> &[u64] {
        &self.prufer_factors
    }

    pub fn order_two_count(&self) -> usize {
        self.order_two
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn free_mode(&self) -> FreeMode {
        self.free_mode
    }

    /// Same shape, different free mode.
    pub fn with_free_mode(&self, free_mode: FreeMode) -> Arc<Self> {
        Arc::new(AmbientSignature {
            free_mode,
            ..self.clone()
        })
    }

    pub fn zero(self: &Arc<Self>) -> AmbientElement {
        AmbientElement {
            sig: Arc::clone(self),
            d: BTreeMap::new(),
            t: vec![false; self.order_two],
            q: vec![BigRational::zero(); self.free_rank],
        }
    }

    pub fn builder(self: &Arc<Self>) -> ElementBuilder {
        ElementBuilder {
            sig: Arc::clone(self),
            d: Vec::new(),
            t: vec![false; self.order_two],
            q: vec![BigRational::zero(); self.free_rank],
        }
    }
}

impl fmt::Display for AmbientSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let primes: Vec<String> = self.prufer_factors.iter().map(u64::to_string).collect();
        write!(
            f,
            "prufer=[{}];s={};r={};mode={}",
            primes.join(","),
            self.order_two,
            self.free_rank,
            self.free_mode
        )
    }
}

/// An element `num/den` of `Z(p^∞)`, i.e. a rational with `p`-power
/// denominator taken mod 1. Always fully reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PruferCoord {
    num: BigInt,
    den: BigInt,
}

impl PruferCoord {
    pub fn zero() -> Self {
        PruferCoord {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    /// Builds `num/den mod 1` in `Z(prime^∞)`; `den` must be a power of `prime`.
    pub fn new(
        num: impl Into<BigInt>,
        den: impl Into<BigInt>,
        prime: u64,
    ) -> Result<Self, GroupError> {
        let den = den.into();
        if !is_power_of(&den, prime) {
            return Err(GroupError::BadDenominator { den, prime });
        }
        Ok(Self::reduce(num.into(), den, &BigInt::from(prime)))
    }

    /// `den` is a positive power of `p`.
    fn reduce(num: BigInt, mut den: BigInt, p: &BigInt) -> Self {
        let mut num = num.mod_floor(&den);
        if num.is_zero() {
            return Self::zero();
        }
        while !den.is_one() && num.is_multiple_of(p) {
            num /= p;
            den /= p;
        }
        PruferCoord { num, den }
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    fn add(&self, other: &Self, p: &BigInt) -> Self {
        let den = self.den.clone().max(other.den.clone());
        let num = &self.num * (&den / &self.den) + &other.num * (&den / &other.den);
        Self::reduce(num, den, p)
    }

    fn scale(&self, n: &BigInt, p: &BigInt) -> Self {
        Self::reduce(&self.num * n, self.den.clone(), p)
    }
}

fn is_power_of(den: &BigInt, prime: u64) -> bool {
    if !den.is_positive() {
        return false;
    }
    let p = BigInt::from(prime);
    let mut d = den.clone();
    while d.is_multiple_of(&p) {
        d /= &p;
    }
    d.is_one()
}

/// Order of a group element: a positive integer or infinite.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(BigUint),
    Infinite,
}

impl Order {
    pub fn finite(n: u64) -> Self {
        Order::Finite(BigUint::from(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Ordered sequence of the nonzero coordinate values of a direct-sum
/// element, indices discarded.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    values: Vec<BigRational>,
}

impl Profile {
    pub fn new(values: Vec<BigRational>) -> Self {
        debug_assert!(values.iter().all(|v| !v.is_zero()));
        Profile { values }
    }

    pub fn of_prufer(part: &BTreeMap<usize, PruferCoord>) -> Self {
        Profile {
            values: part
                .values()
                .filter(|c| !c.is_zero())
                .map(PruferCoord::to_rational)
                .collect(),
        }
    }

    pub fn of_rationals(part: &[BigRational]) -> Self {
        Profile {
            values: part.iter().filter(|v| !v.is_zero()).cloned().collect(),
        }
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }
}

/// Strictly increasing indices of the nonzero coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Support {
    indices: Vec<usize>,
}

impl Support {
    pub fn of_prufer(part: &BTreeMap<usize, PruferCoord>) -> Self {
        Support {
            indices: part
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(&i, _)| i)
                .collect(),
        }
    }

    pub fn of_rationals(part: &[BigRational]) -> Self {
        Support {
            indices: part
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, _)| i)
                .collect(),
        }
    }

    pub fn of_bits(part: &[bool]) -> Self {
        Support {
            indices: part
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i)
                .collect(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

/// An element `(d, t, q)` of the ambient group described by its signature.
#[derive(Clone, Debug)]
pub struct AmbientElement {
    sig: Arc<AmbientSignature>,
    d: BTreeMap<usize, PruferCoord>,
    t: Vec<bool>,
    q: Vec<BigRational>,
}

impl PartialEq for AmbientElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_signature(other) && self.d == other.d && self.t == other.t && self.q == other.q
    }
}

impl Eq for AmbientElement {}

impl Hash for AmbientElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.d.hash(state);
        self.t.hash(state);
        self.q.hash(state);
    }
}

impl AmbientElement {
    /// Validating constructor. Zero Prüfer coordinates are dropped.
    pub fn new(
        sig: &Arc<AmbientSignature>,
        d: BTreeMap<usize, PruferCoord>,
        t: Vec<bool>,
        q: Vec<BigRational>,
    ) -> Result<Self, GroupError> {
        let len = sig.prufer_factors.len();
        for (&index, c) in &d {
            let prime = *sig
                .prufer_factors
                .get(index)
                .ok_or(GroupError::IndexOutOfRange { index, len })?;
            if !is_power_of(&c.den, prime) {
                return Err(GroupError::BadDenominator {
                    den: c.den.clone(),
                    prime,
                });
            }
        }
        if t.len() != sig.order_two {
            return Err(GroupError::Length {
                part: "t",
                expected: sig.order_two,
                got: t.len(),
            });
        }
        if q.len() != sig.free_rank {
            return Err(GroupError::Length {
                part: "q",
                expected: sig.free_rank,
                got: q.len(),
            });
        }
        if sig.free_mode == FreeMode::Integer {
            if let Some(v) = q.iter().find(|v| !v.is_integer()) {
                return Err(GroupError::NonIntegerFree(v.clone()));
            }
        }
        let d = d.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(AmbientElement {
            sig: Arc::clone(sig),
            d,
            t,
            q,
        })
    }

    pub fn signature(&self) -> &Arc<AmbientSignature> {
        &self.sig
    }

    pub fn d_part(&self) -> &BTreeMap<usize, PruferCoord> {
        &self.d
    }

    pub fn t_part(&self) -> &[bool] {
        &self.t
    }

    pub fn q_part(&self) -> &[BigRational] {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.d.is_empty() && !self.t.iter().any(|&b| b) && self.q.iter().all(Zero::is_zero)
    }

    pub fn same_signature(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig
    }

    fn prime(&self, index: usize) -> BigInt {
        BigInt::from(self.sig.prufer_factors[index])
    }

    pub fn add(&self, other: &Self) -> Result<Self, GroupError> {
        if !self.same_signature(other) {
            return Err(GroupError::SignatureMismatch);
        }
        let mut d = self.d.clone();
        for (&i, c) in &other.d {
            let p = self.prime(i);
            let sum = match d.get(&i) {
                Some(mine) => mine.add(c, &p),
                None => c.clone(),
            };
            if sum.is_zero() {
                d.remove(&i);
            } else {
                d.insert(i, sum);
            }
        }
        Ok(AmbientElement {
            sig: Arc::clone(&self.sig),
            d,
            t: self.t.iter().zip(&other.t).map(|(a, b)| a ^ b).collect(),
            q: self.q.iter().zip(&other.q).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn negate(&self) -> Self {
        self.scalar_mul(-1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, GroupError> {
        self.add(&other.negate())
    }

    /// `n·self` for any integer `n`, including negative ones.
    pub fn scalar_mul(&self, n: impl Into<BigInt>) -> Self {
        let n: BigInt = n.into();
        let odd = n.is_odd();
        let d = self
            .d
            .iter()
            .map(|(&i, c)| (i, c.scale(&n, &self.prime(i))))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let factor = BigRational::from_integer(n);
        AmbientElement {
            sig: Arc::clone(&self.sig),
            d,
            t: self.t.iter().map(|&b| b && odd).collect(),
            q: self.q.iter().map(|v| v * &factor).collect(),
        }
    }

    pub fn double(&self) -> Self {
        self.scalar_mul(2)
    }

    /// Least `n ≥ 1` with `n·self = 0`, the lcm of the coordinate orders.
    pub fn element_order(&self) -> Order {
        if self.q.iter().any(|v| !v.is_zero()) {
            return Order::Infinite;
        }
        let mut order = BigInt::one();
        for c in self.d.values() {
            order = order.lcm(&c.den);
        }
        if self.t.iter().any(|&b| b) {
            order = order.lcm(&BigInt::from(2));
        }
        Order::Finite(order.to_biguint().expect("orders are positive"))
    }

    pub fn d_profile(&self) -> Profile {
        Profile::of_prufer(&self.d)
    }

    pub fn d_support(&self) -> Support {
        Support::of_prufer(&self.d)
    }

    pub fn t_support(&self) -> Support {
        Support::of_bits(&self.t)
    }

    pub fn q_profile(&self) -> Profile {
        Profile::of_rationals(&self.q)
    }

    pub fn q_support(&self) -> Support {
        Support::of_rationals(&self.q)
    }

    /// Parses the canonical text form produced by `Display`. Only canonical
    /// text is accepted: reduced fractions, no zero Prüfer entries and
    /// strictly increasing indices.
    pub fn parse(text: &str, sig: &Arc<AmbientSignature>) -> Result<Self, ElementParseError> {
        text::parse_element(text.trim(), sig)
    }
}

/// Canonical text of a rational: `n` for integers, `n/m` otherwise.
pub(crate) fn fmt_rational(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

impl fmt::Display for AmbientElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("d:{")?;
        for (k, (i, c)) in self.d.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}={}/{}", c.num, c.den)?;
        }
        f.write_str("};t:")?;
        for &b in &self.t {
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str(";q:(")?;
        for (k, v) in self.q.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str(&fmt_rational(v))?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed element `{text}`: {reason}")]
pub struct ElementParseError {
    pub text: String,
    pub reason: String,
}

mod text {
    use super::*;

    fn err(text: &str, reason: impl Into<String>) -> ElementParseError {
        ElementParseError {
            text: text.to_string(),
            reason: reason.into(),
        }
    }

    fn int(s: &str) -> Option<BigInt> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if digits.len() > 1 && digits.starts_with('0') {
            return None;
        }
        if s == "-0" {
            return None;
        }
        s.parse().ok()
    }

    /// Canonical rational: `n` or `n/m` with `m > 1` and `gcd(n, m) = 1`.
    pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
        match s.split_once('/') {
            None => int(s).map(BigRational::from_integer),
            Some((n, m)) => {
                let n = int(n)?;
                let m = int(m)?;
                if m <= BigInt::one() || !n.gcd(&m).is_one() {
                    return None;
                }
                Some(BigRational::new_raw(n, m))
            }
        }
    }

    pub(super) fn parse_element(
        text: &str,
        sig: &Arc<AmbientSignature>,
    ) -> Result<AmbientElement, ElementParseError> {
        let mut parts = text.split(';');
        let (Some(d), Some(t), Some(q), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(err(
                text,
                "expected three `;`-separated parts d:..;t:..;q:..",
            ));
        };

        let d_body = d
            .strip_prefix("d:{")
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| err(text, "d part must look like d:{idx=num/den,...}"))?;
        let mut dmap = BTreeMap::new();
        let mut last: Option<usize> = None;
        if !d_body.is_empty() {
            for entry in d_body.split(',') {
                let (idx, frac) = entry
                    .split_once('=')
                    .ok_or_else(|| err(text, format!("d entry `{entry}` lacks `=`")))?;
                let idx: usize = idx
                    .parse()
                    .map_err(|_| err(text, format!("bad prufer index `{idx}`")))?;
                if last.is_some_and(|l| l >= idx) {
                    return Err(err(text, "prufer indices must be strictly increasing"));
                }
                last = Some(idx);
                let prime = *sig
                    .prufer_factors()
                    .get(idx)
                    .ok_or_else(|| err(text, format!("prufer index {idx} out of range")))?;
                let value = match frac.split_once('/') {
                    Some(_) => parse_rational(frac),
                    None => None,
                }
                .ok_or_else(|| err(text, format!("`{frac}` is not a reduced fraction num/den")))?;
                if !value.is_positive() || value >= BigRational::one() {
                    return Err(err(
                        text,
                        format!("prufer coordinate `{frac}` must lie strictly between 0 and 1"),
                    ));
                }
                let c = PruferCoord::new(value.numer().clone(), value.denom().clone(), prime)
                    .map_err(|e| err(text, e.to_string()))?;
                dmap.insert(idx, c);
            }
        }

        let bits = t
            .strip_prefix("t:")
            .ok_or_else(|| err(text, "t part must look like t:0101"))?;
        let tvec = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(err(text, format!("bad bit `{other}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;

        let q_body = q
            .strip_prefix("q:(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| err(text, "q part must look like q:(r1,...)"))?;
        let qvec = if q_body.is_empty() {
            Vec::new()
        } else {
            q_body
                .split(',')
                .map(|s| {
                    parse_rational(s)
                        .ok_or_else(|| err(text, format!("`{s}` is not a canonical rational")))
                })
                .collect::<Result<Vec<_>, _>>()?
        };

        AmbientElement::new(sig, dmap, tvec, qvec).map_err(|e| err(text, e.to_string()))
    }
}

pub(crate) use text::parse_rational;

/// Convenience construction of elements from small integers.
#[derive(Clone, Debug)]
pub struct ElementBuilder {
    sig: Arc<AmbientSignature>,
    d: Vec<(usize, BigInt, BigInt)>,
    t: Vec<bool>,
    q: Vec<BigRational>,
}

impl ElementBuilder {
    /// Adds `num/den` at Prüfer index `index`.
    pub fn prufer(mut self, index: usize, num: i64, den: i64) -> Self {
        self.d.push((index, num.into(), den.into()));
        self
    }

    pub fn bit(mut self, index: usize) -> Self {
        if let Some(b) = self.t.get_mut(index) {
            *b = !*b;
        }
        self
    }

    pub fn bits(mut self, bits: &[u8]) -> Self {
        self.t = bits.iter().map(|&b| b % 2 == 1).collect();
        self
    }

    pub fn free(mut self, index: usize, num: i64, den: i64) -> Self {
        if let Some(v) = self.q.get_mut(index) {
            *v = BigRational::new(num.into(), den.into());
        }
        self
    }

    pub fn build(self) -> Result<AmbientElement, GroupError> {
        let mut d: BTreeMap<usize, PruferCoord> = BTreeMap::new();
        let len = self.sig.prufer_factors.len();
        for (index, num, den) in self.d {
            let prime = *self
                .sig
                .prufer_factors
                .get(index)
                .ok_or(GroupError::IndexOutOfRange { index, len })?;
            let c = PruferCoord::new(num, den, prime)?;
            let p = BigInt::from(prime);
            let entry = d.entry(index).or_insert_with(PruferCoord::zero);
            *entry = entry.add(&c, &p);
        }
        AmbientElement::new(&self.sig, d, self.t, self.q)
    }
}
