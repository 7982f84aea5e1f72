#![allow(dead_code)]

use semicover::enumeration::{enumerate_semigroups, EnumerationOptions};
use semicover::{CayleyTable, SubsetMask};

pub fn semigroups(order: usize) -> Vec<CayleyTable> {
    enumerate_semigroups(order, EnumerationOptions::up_to_iso())
        .unwrap()
        .collect()
}

/// All semigroups up to isomorphism of orders `1..=max`.
pub fn semigroups_up_to(max: usize) -> Vec<CayleyTable> {
    (1..=max).flat_map(semigroups).collect()
}

pub fn cyclic(n: usize) -> CayleyTable {
    CayleyTable::new(n, (0..n * n).map(|p| (p / n + p % n) % n).collect()).unwrap()
}

pub fn direct_product(a: &CayleyTable, b: &CayleyTable) -> CayleyTable {
    let (n, m) = (a.order(), b.order());
    let enc = |x: usize, y: usize| x * m + y;
    let mut products = vec![0; n * m * n * m];
    for p in 0..n * m {
        for q in 0..n * m {
            products[p * n * m + q] = enc(a.mul(p / m, q / m), b.mul(p % m, q % m));
        }
    }
    CayleyTable::new(n * m, products).unwrap()
}

/// `S` with a new element `order` adjoined as an identity.
pub fn adjoin_identity(s: &CayleyTable) -> CayleyTable {
    let n = s.order() + 1;
    let e = n - 1;
    let mut products = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            products[x * n + y] = if x == e {
                y
            } else if y == e {
                x
            } else {
                s.mul(x, y)
            };
        }
    }
    CayleyTable::new(n, products).unwrap()
}

/// `S` with a new element `order` adjoined as a two-sided zero.
pub fn adjoin_zero(s: &CayleyTable) -> CayleyTable {
    let n = s.order() + 1;
    let z = n - 1;
    let mut products = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            products[x * n + y] = if x == z || y == z { z } else { s.mul(x, y) };
        }
    }
    CayleyTable::new(n, products).unwrap()
}

/// Every subset of `0..order` as a mask.
pub fn all_subsets(order: usize) -> impl Iterator<Item = SubsetMask> {
    (0u64..1 << order).map(move |bits| SubsetMask::from_indices(order, (0..order).filter(|i| bits >> i & 1 == 1)))
}

/// Semigroups of order 6 to 8 built from smaller ones.
pub fn larger_semigroups() -> Vec<CayleyTable> {
    let mut out = vec![cyclic(6), cyclic(7), cyclic(8)];
    let small = semigroups(2);
    let three = semigroups(3);
    for a in &small {
        for b in &three {
            out.push(direct_product(a, b));
        }
    }
    for s in semigroups(4).iter().step_by(9) {
        out.push(direct_product(&small[1], s));
    }
    for s in semigroups(5).iter().step_by(97) {
        out.push(adjoin_identity(s));
        out.push(adjoin_zero(&adjoin_identity(s)));
    }
    for s in semigroups(6).into_iter().step_by(1500) {
        out.push(adjoin_zero(&s));
    }
    out
}
