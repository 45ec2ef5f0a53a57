//! Reference implementations that share no code with the library's
//! enumeration, closure or product-set routines. Elements are plain `usize`
//! and sets are `BTreeSet`s; the only library call is `GroupTable::mul`.
#![allow(dead_code)]

use std::collections::BTreeSet;

use iwasawa_core::GroupTable;

pub type Set = BTreeSet<usize>;

/// Multiplies every pair until nothing new appears.
pub fn naive_closure(g: &GroupTable, seed: &Set) -> Set {
    let mut s = seed.clone();
    s.insert(0);
    loop {
        let items: Vec<usize> = s.iter().copied().collect();
        let before = s.len();
        for &a in &items {
            for &b in &items {
                s.insert(g.mul(a, b));
            }
        }
        if s.len() == before {
            return s;
        }
    }
}

pub fn is_closed(g: &GroupTable, s: &Set) -> bool {
    s.contains(&0) && s.iter().all(|&a| s.iter().all(|&b| s.contains(&g.mul(a, b))))
}

/// Every subset containing the identity, tested for closure. Order ≤ 16.
pub fn subgroups_by_subsets(g: &GroupTable) -> BTreeSet<Set> {
    let n = g.order();
    assert!(n <= 16, "subset enumeration is exponential");
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << (n - 1)) {
        let s: Set = std::iter::once(0).chain((1..n).filter(|i| mask & (1 << (i - 1)) != 0)).collect();
        if is_closed(g, &s) {
            out.insert(s);
        }
    }
    out
}

/// Breadth-first search adding one element at a time to known subgroups.
pub fn subgroups_by_extension(g: &GroupTable) -> BTreeSet<Set> {
    let mut found: BTreeSet<Set> = BTreeSet::new();
    let mut frontier = vec![Set::from([0])];
    found.insert(Set::from([0]));
    while let Some(h) = frontier.pop() {
        for x in 0..g.order() {
            if h.contains(&x) {
                continue;
            }
            let mut seed = h.clone();
            seed.insert(x);
            let k = naive_closure(g, &seed);
            if found.insert(k.clone()) {
                frontier.push(k);
            }
        }
    }
    found
}

/// `{x : for every subgroup H, ⟨H, x⟩ = G implies H = G}`.
pub fn non_generators(g: &GroupTable, subgroups: &BTreeSet<Set>) -> Set {
    let n = g.order();
    (0..n)
        .filter(|&x| {
            subgroups.iter().all(|h| {
                let mut seed = h.clone();
                seed.insert(x);
                naive_closure(g, &seed).len() < n || h.len() == n
            })
        })
        .collect()
}

pub fn product(g: &GroupTable, h: &Set, k: &Set) -> Set {
    h.iter().flat_map(|&a| k.iter().map(move |&b| g.mul(a, b))).collect()
}

/// Ordered pairs `(H, K)` from `first x second` with `HK = KH`.
pub fn commuting_pairs(g: &GroupTable, first: &[Set], second: &[Set]) -> u64 {
    first.iter().map(|h| second.iter().filter(|k| product(g, h, k) == product(g, k, h)).count() as u64).sum()
}

/// `sd` as a reduced fraction `(num, den)`.
pub fn sd_fraction(g: &GroupTable, subgroups: &[Set]) -> (u64, u64) {
    let n = subgroups.len() as u64;
    reduce(commuting_pairs(g, subgroups, subgroups), n * n)
}

pub fn reduce(num: u64, den: u64) -> (u64, u64) {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    let d = gcd(num, den);
    (num / d, den / d)
}
