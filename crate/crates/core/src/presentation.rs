//! Finitely presented abelian groups: Smith normal form, the canonical
//! (primary) decomposition, order-4 detection and divisor adjunction.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::group::{is_prime, Order};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("relation {row} has {got} entries, expected {expected}")]
    RelationLength {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("vector has {got} entries, expected {expected}")]
    VectorLength { expected: usize, got: usize },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("invalid prime power {prime}^{exponent}")]
    BadPrimePower { prime: u64, exponent: u32 },
    #[error("invariant factor {0} exceeds the factorable range")]
    FactorTooLarge(BigInt),
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a `rows × cols` matrix from row vectors; `cols` is needed for
    /// matrices with no rows.
    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !m[(r, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, r);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k·row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k·col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// `U·A·V = S` with `U`, `V` unimodular and `S` diagonal,
/// `d₁ | d₂ | …`, nonnegative.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.s.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form by repeated smallest-pivot elimination.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let e = &s[(i, j)];
                    if !e.is_zero() && pivot.is_none_or(|(pi, pj)| e.abs() < s[(pi, pj)].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return SnfResult { u, s, v };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let k = -(&s[(i, t)] / &s[(t, t)]);
                s.add_row(i, t, &k);
                u.add_row(i, t, &k);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let k = -(&s[(t, j)] / &s[(t, t)]);
                s.add_col(j, t, &k);
                v.add_col(j, t, &k);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            let piv = s[(t, t)].clone();
            let offending =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&piv)));
            match offending {
                Some(i) => {
                    s.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult { u, s, v }
}

/// Cyclic factor `Z/p^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

impl PrimePower {
    pub fn new(prime: u64, exponent: u32) -> Result<Self, PresentationError> {
        if !is_prime(prime) || exponent == 0 {
            return Err(PresentationError::BadPrimePower { prime, exponent });
        }
        Ok(PrimePower { prime, exponent })
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.prime).pow(self.exponent)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 1 {
            write!(f, "{}", self.prime)
        } else {
            write!(f, "{}^{}", self.prime, self.exponent)
        }
    }
}

/// `Z^free_rank ⊕ ⊕ Z/p^k`, factors sorted by `(prime, exponent)`.
///
/// Canonical coordinates list the primary factors first, in order, followed
/// by the free coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalDecomposition {
    free_rank: usize,
    primary_factors: Vec<PrimePower>,
}

impl CanonicalDecomposition {
    pub fn new(free_rank: usize, mut primary_factors: Vec<PrimePower>) -> Self {
        primary_factors.sort();
        CanonicalDecomposition {
            free_rank,
            primary_factors,
        }
    }

    /// Shorthand for tests and demos: factors given as `(prime, exponent)`.
    pub fn from_pairs(free_rank: usize, pairs: &[(u64, u32)]) -> Result<Self, PresentationError> {
        let factors = pairs
            .iter()
            .map(|&(p, k)| PrimePower::new(p, k))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(free_rank, factors))
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn primary_factors(&self) -> &[PrimePower] {
        &self.primary_factors
    }

    pub fn generator_count(&self) -> usize {
        self.primary_factors.len() + self.free_rank
    }

    pub fn torsion_order(&self) -> BigUint {
        self.primary_factors.iter().map(PrimePower::order).product()
    }

    /// Invariant factors `d₁ | d₂ | …` (all > 1) of the torsion part.
    pub fn invariant_factors(&self) -> Vec<BigUint> {
        let mut by_prime: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
        for f in &self.primary_factors {
            by_prime.entry(f.prime).or_default().push(f.exponent);
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![BigUint::one(); len];
        for (&p, exps) in &by_prime {
            // exponents ascend, so the largest power lands in the last factor
            for (slot, &k) in out.iter_mut().rev().zip(exps.iter().rev()) {
                *slot *= BigUint::from(p).pow(k);
            }
        }
        out
    }
}

impl fmt::Display for CanonicalDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .primary_factors
            .iter()
            .map(|p| format!("Z/{p}"))
            .collect();
        for _ in 0..self.free_rank {
            parts.push("Z".to_string());
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Integer relations on named generators: the group `Z^n / ⟨relations⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    n_generators: usize,
    relations: Vec<Vec<BigInt>>,
}

impl Presentation {
    pub fn new<T: Clone + Into<BigInt>>(
        n_generators: usize,
        relations: Vec<Vec<T>>,
    ) -> Result<Self, PresentationError> {
        let relations = relations
            .into_iter()
            .enumerate()
            .map(|(row, r)| {
                if r.len() != n_generators {
                    return Err(PresentationError::RelationLength {
                        row,
                        expected: n_generators,
                        got: r.len(),
                    });
                }
                Ok(r.into_iter().map(Into::into).collect())
            })
            .collect::<Result<Vec<Vec<BigInt>>, _>>()?;
        Ok(Presentation {
            n_generators,
            relations,
        })
    }

    /// `Z/o₁ ⊕ … ⊕ Z/oₖ` (an order of 0 gives a free factor).
    pub fn cyclic(orders: &[i64]) -> Self {
        let n = orders.len();
        let relations = orders
            .iter()
            .enumerate()
            .map(|(i, &o)| {
                let mut row = vec![BigInt::zero(); n];
                row[i] = o.into();
                row
            })
            .collect();
        Presentation {
            n_generators: n,
            relations,
        }
    }

    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    pub fn relations(&self) -> &[Vec<BigInt>] {
        &self.relations
    }

    pub fn relation_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.relations, self.n_generators)
    }

    pub fn smith_normal_form(&self) -> SnfResult {
        smith_normal_form(&self.relation_matrix())
    }

    /// Nonzero diagonal entries of the Smith form, units included.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.smith_normal_form()
            .s
            .diagonal()
            .into_iter()
            .filter(|d| !d.is_zero())
            .collect()
    }

    pub fn canonical_decomposition(&self) -> Result<CanonicalDecomposition, PresentationError> {
        let snf = self.smith_normal_form();
        let free_rank = self.n_generators - snf.rank();
        let mut factors = Vec::new();
        for d in snf.s.diagonal() {
            if d.is_zero() || d.is_one() {
                continue;
            }
            let n = d
                .to_u64()
                .ok_or_else(|| PresentationError::FactorTooLarge(d.clone()))?;
            for (prime, exponent) in factorize(n) {
                factors.push(PrimePower { prime, exponent });
            }
        }
        Ok(CanonicalDecomposition::new(free_rank, factors))
    }

    /// Adds a generator `y` with relation `prime·y = x`, so that `x` becomes
    /// divisible by `prime`. The original group embeds in the result.
    pub fn adjoin_divisor<T: Clone + Into<BigInt>>(
        &self,
        x: &[T],
        prime: u64,
    ) -> Result<Presentation, PresentationError> {
        if prime == 2 || !is_prime(prime) {
            return Err(PresentationError::NotOddPrime(prime));
        }
        if x.len() != self.n_generators {
            return Err(PresentationError::VectorLength {
                expected: self.n_generators,
                got: x.len(),
            });
        }
        let mut relations: Vec<Vec<BigInt>> = self
            .relations
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(BigInt::zero());
                r
            })
            .collect();
        let mut extra: Vec<BigInt> = x.iter().map(|v| -v.clone().into()).collect();
        extra.push(BigInt::from(prime));
        relations.push(extra);
        Ok(Presentation {
            n_generators: self.n_generators + 1,
            relations,
        })
    }
}

/// True iff some primary factor is `2^k` with `k ≥ 2`.
pub fn has_order_four(d: &CanonicalDecomposition) -> bool {
    d.primary_factors
        .iter()
        .any(|f| f.prime == 2 && f.exponent >= 2)
}

/// Order of the element with canonical coordinates `coords` (torsion
/// factors first, then free coordinates).
pub fn element_order_in<T: Clone + Into<BigInt>>(
    d: &CanonicalDecomposition,
    coords: &[T],
) -> Result<Order, PresentationError> {
    if coords.len() != d.generator_count() {
        return Err(PresentationError::VectorLength {
            expected: d.generator_count(),
            got: coords.len(),
        });
    }
    let coords: Vec<BigInt> = coords.iter().cloned().map(Into::into).collect();
    let (torsion, free) = coords.split_at(d.primary_factors.len());
    if free.iter().any(|c| !c.is_zero()) {
        return Ok(Order::Infinite);
    }
    let mut order = BigInt::one();
    for (f, c) in d.primary_factors.iter().zip(torsion) {
        let n = BigInt::from(f.order());
        order = order.lcm(&(&n / c.gcd(&n)));
    }
    Ok(Order::Finite(order.to_biguint().expect("positive")))
}

/// Trial-division factorization, ascending primes.
pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(entries: &[i64]) -> Vec<BigInt> {
        entries.iter().map(|&e| BigInt::from(e)).collect()
    }

    fn check_snf(rows: &[Vec<i64>], cols: usize) -> SnfResult {
        let a = IntMatrix::from_rows(rows, cols);
        let r = smith_normal_form(&a);
        assert_eq!(r.u.mul(&a).mul(&r.v), r.s);
        assert!(r.s.is_diagonal());
        assert_eq!(r.u.determinant().abs(), BigInt::one());
        assert_eq!(r.v.determinant().abs(), BigInt::one());
        r
    }

    #[test]
    fn snf_examples() {
        let r = check_snf(&[vec![1, 0], vec![0, 1]], 2);
        assert_eq!(r.s.diagonal(), diag(&[1, 1]));
        let r = check_snf(&[vec![2, 0], vec![0, 3]], 2);
        assert_eq!(r.s.diagonal(), diag(&[1, 6]));
        let r = check_snf(&[vec![4, 6], vec![2, 8]], 2);
        assert_eq!(r.s.diagonal(), diag(&[2, 10]));
        // empty and degenerate shapes
        let r = check_snf(&[], 3);
        assert_eq!(r.s.rows(), 0);
        assert_eq!(r.rank(), 0);
        let r = check_snf(&[vec![0, 0], vec![0, 0]], 2);
        assert_eq!(r.rank(), 0);
        let r = check_snf(&[vec![-4], vec![6]], 1);
        assert_eq!(r.s.diagonal(), diag(&[2]));
    }

    #[test]
    fn decomposition_examples() {
        let d = Presentation::new::<i64>(2, vec![])
            .unwrap()
            .canonical_decomposition()
            .unwrap();
        assert_eq!(d.free_rank(), 2);
        assert!(d.primary_factors().is_empty());

        let d = Presentation::cyclic(&[4])
            .canonical_decomposition()
            .unwrap();
        assert_eq!(d, CanonicalDecomposition::from_pairs(0, &[(2, 2)]).unwrap());
        assert!(has_order_four(&d));

        let d = Presentation::cyclic(&[2, 6])
            .canonical_decomposition()
            .unwrap();
        assert_eq!(
            d,
            CanonicalDecomposition::from_pairs(0, &[(2, 1), (2, 1), (3, 1)]).unwrap()
        );
        assert_eq!(d.torsion_order(), BigUint::from(12u32));
        assert_eq!(
            d.invariant_factors(),
            vec![BigUint::from(2u32), BigUint::from(6u32)]
        );
        assert_eq!(d.to_string(), "Z/2 + Z/2 + Z/3");

        let empty = Presentation::new::<i64>(0, vec![]).unwrap();
        let d = empty.canonical_decomposition().unwrap();
        assert_eq!(d.generator_count(), 0);
        assert_eq!(d.to_string(), "0");
    }

    #[test]
    fn order_four_examples() {
        let no = |free, f: &[(u64, u32)]| {
            !has_order_four(&CanonicalDecomposition::from_pairs(free, f).unwrap())
        };
        assert!(no(0, &[(2, 1), (2, 1)]));
        assert!(no(5, &[(2, 1), (2, 1)]));
        assert!(!no(0, &[(2, 2), (3, 1)]));
        assert!(no(7, &[(3, 5)]));
        assert!(CanonicalDecomposition::from_pairs(0, &[(4, 1)]).is_err());
        assert!(CanonicalDecomposition::from_pairs(0, &[(3, 0)]).is_err());
    }

    #[test]
    fn adjoin_examples() {
        let z = Presentation::new::<i64>(1, vec![]).unwrap();
        let r = z.adjoin_divisor(&[1], 3).unwrap();
        assert_eq!(r.n_generators(), 2);
        let d = r.canonical_decomposition().unwrap();
        assert_eq!((d.free_rank(), d.primary_factors().len()), (1, 0));

        let z3 = Presentation::cyclic(&[3]);
        let r = z3.adjoin_divisor(&[1], 3).unwrap();
        assert_eq!(r.relations(), &[diag(&[3, 0]), diag(&[-1, 3])]);
        assert_eq!(r.invariant_factors(), diag(&[1, 9]));

        assert_eq!(
            z3.adjoin_divisor(&[1], 2).unwrap_err(),
            PresentationError::NotOddPrime(2)
        );
        assert_eq!(
            z3.adjoin_divisor(&[1], 9).unwrap_err(),
            PresentationError::NotOddPrime(9)
        );
        assert!(matches!(
            z3.adjoin_divisor(&[1, 0], 3),
            Err(PresentationError::VectorLength { .. })
        ));
    }

    #[test]
    fn element_order_examples() {
        let z2z3 = CanonicalDecomposition::from_pairs(0, &[(2, 1), (3, 1)]).unwrap();
        assert_eq!(element_order_in(&z2z3, &[0, 0]).unwrap(), Order::finite(1));
        assert_eq!(element_order_in(&z2z3, &[1, 1]).unwrap(), Order::finite(6));
        let z9 = CanonicalDecomposition::from_pairs(0, &[(3, 2)]).unwrap();
        assert_eq!(element_order_in(&z9, &[3]).unwrap(), Order::finite(3));
        let z9z = CanonicalDecomposition::from_pairs(1, &[(3, 2)]).unwrap();
        assert_eq!(element_order_in(&z9z, &[3, 1]).unwrap(), Order::Infinite);
        assert_eq!(element_order_in(&z9z, &[1, 0]).unwrap(), Order::finite(9));
        assert!(element_order_in(&z9z, &[1]).is_err());
    }

    #[test]
    fn ragged_relations_rejected() {
        assert_eq!(
            Presentation::new(2, vec![vec![1, 2], vec![3]]).unwrap_err(),
            PresentationError::RelationLength {
                row: 1,
                expected: 2,
                got: 1
            }
        );
    }

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
    }
}
