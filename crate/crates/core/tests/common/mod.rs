//! Brute-force oracles shared by the integration tests. None of these go
//! through the library's closed forms.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use sumcol::IntMatrix;

/// Element of `Z/o₁ ⊕ … ⊕ Z/oₖ` as a coordinate vector.
pub fn add_coords(a: &[u64], b: &[u64], orders: &[u64]) -> Vec<u64> {
    a.iter()
        .zip(b)
        .zip(orders)
        .map(|((x, y), o)| (x + y) % o)
        .collect()
}

/// Order by repeated addition.
pub fn order_by_repeated_addition(a: &[u64], orders: &[u64]) -> u64 {
    let mut acc = a.to_vec();
    let mut n = 1;
    while acc.iter().any(|&c| c != 0) {
        acc = add_coords(&acc, a, orders);
        n += 1;
    }
    n
}

/// All coordinate vectors of the group, mixed radix.
pub fn all_elements(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for &o in orders {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..o).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out
}

/// Histogram of element orders, by repeated addition over every element.
pub fn order_census(orders: &[u64]) -> BTreeMap<u64, usize> {
    let mut h = BTreeMap::new();
    for e in all_elements(orders) {
        *h.entry(order_by_repeated_addition(&e, orders)).or_default() += 1;
    }
    h
}

/// Nondecreasing sequences of cyclic orders `≥ 2` with product at most
/// `limit`: every way of writing a group of order `≤ limit` as a direct sum
/// of cyclic groups, up to reordering.
pub fn cyclic_factorizations(limit: u64) -> Vec<Vec<u64>> {
    fn go(min: u64, remaining: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        out.push(prefix.clone());
        for o in min..=remaining {
            prefix.push(o);
            go(o, remaining / o, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(2, limit, &mut Vec::new(), &mut out);
    out
}

fn minor(a: &IntMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
    let sub: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| a[(i, j)].clone()).collect())
        .collect();
    IntMatrix::from_rows(&sub, cols.len()).determinant()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `Dₖ` = gcd of all `k × k` minors, for `k = 1..=min(m, n)`; zero once the
/// rank is exceeded. The Smith diagonal is `dₖ = Dₖ / Dₖ₋₁`.
pub fn determinantal_divisors(a: &IntMatrix) -> Vec<BigInt> {
    let kmax = a.rows().min(a.cols());
    (1..=kmax)
        .map(|k| {
            let mut g = BigInt::zero();
            for r in subsets(a.rows(), k) {
                for c in subsets(a.cols(), k) {
                    g = g.gcd(&minor(a, &r, &c));
                }
            }
            g.abs()
        })
        .collect()
}

/// Smith diagonal from determinantal divisors.
pub fn smith_diagonal_by_minors(a: &IntMatrix) -> Vec<BigInt> {
    let dets = determinantal_divisors(a);
    let mut prev = BigInt::from(1);
    dets.into_iter()
        .map(|d| {
            if d.is_zero() {
                return BigInt::zero();
            }
            let q = &d / &prev;
            prev = d;
            q
        })
        .collect()
}

/// Whether some colouring in `0..colours` of the group `orders` avoids every
/// monochromatic `{2x, 2y, x+y}`, by enumerating all `colours^|G|` tables.
/// Returns the first avoiding table in lexicographic order.
pub fn brute_force_avoiding(orders: &[u64], colours: u32) -> Option<Vec<u32>> {
    let elems = all_elements(orders);
    let n = elems.len();
    let index = |v: &[u64]| elems.iter().position(|e| e == v).unwrap();
    let mut triples = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            let dx = index(&add_coords(&elems[x], &elems[x], orders));
            let dy = index(&add_coords(&elems[y], &elems[y], orders));
            let s = index(&add_coords(&elems[x], &elems[y], orders));
            triples.push((dx, dy, s));
        }
    }
    let total = (colours as u64).pow(n as u32);
    for code in 0..total {
        let mut c = code;
        // most significant digit first, so codes run in lexicographic order
        let mut table = vec![0u32; n];
        for slot in table.iter_mut().rev() {
            *slot = (c % colours as u64) as u32;
            c /= colours as u64;
        }
        if triples
            .iter()
            .all(|&(a, b, s)| !(table[a] == table[b] && table[b] == table[s]))
        {
            return Some(table);
        }
    }
    None
}
