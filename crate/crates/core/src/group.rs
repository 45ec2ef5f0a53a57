//! Finite groups as multiplication tables.
//!
//! Every group in the crate is a [`GroupTable`] over element indices
//! `0..order` with the identity at index 0. Constructors either validate an
//! ingested table or build one from a structure that is a group by
//! construction (permutations, cyclic groups, products, semidirect products).

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::arith::{is_prime, pow_mod};
use crate::bitset::Bitset;
use crate::caps::Caps;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row,
    Column,
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row => f.write_str("row"),
            Line::Column => f.write_str("column"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty Cayley table")]
    Empty,
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry ({row}, {col}) = {value} is out of range for order {order}")]
    IndexOutOfRange { row: usize, col: usize, value: usize, order: usize },
    #[error("{line} {index} is not a permutation: value {value} repeats")]
    NotLatinSquare { line: Line, index: usize, value: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group order {order} exceeds the order cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
    #[error("generator {generator} has degree {found}, expected {expected}")]
    DegreeMismatch { generator: usize, expected: usize, found: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("action exponent t={t} does not have multiplicative order {q} modulo {p}")]
    InvalidAction { p: u64, q: u64, t: u64 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("subgroup is not normal: conjugating element {element} by {conjugator} leaves it")]
    NotNormal { element: usize, conjugator: usize },
    #[error("unknown group name {0:?}")]
    UnknownName(String),
}

/// A finite group given by its full multiplication table.
///
/// Immutable after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    name: Option<String>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable").field("order", &self.order).field("name", &self.name).finish_non_exhaustive()
    }
}

impl GroupTable {
    /// Builds a table from a product that is known to be a group law with
    /// identity 0. Only used by internal constructors.
    pub(crate) fn from_fn(order: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                table.push(mul(a, b) as u32);
            }
        }
        let inverse = compute_inverses(order, &table).expect("constructor produced a non-group");
        let g = GroupTable { order, table, inverse, name: None };
        debug_assert!(g.table[..order].iter().enumerate().all(|(i, &v)| i == v as usize));
        g
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `b^-1 a b`.
    #[inline]
    pub fn conjugate(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv(b), a), b)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// Least `k >= 1` with `a^k = 1`.
    pub fn element_order(&self, a: usize) -> usize {
        assert!(a < self.order, "element {a} out of range");
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.iter().map(|&v| v as usize).collect()).collect()
    }

    /// Sorted multiset of element orders; an isomorphism invariant.
    pub fn order_census(&self) -> Vec<usize> {
        let mut c: Vec<usize> = (0..self.order).map(|a| self.element_order(a)).collect();
        c.sort_unstable();
        c
    }

    /// Re-checks every table invariant, associativity on all triples included.
    pub fn validate(&self) -> Result<(), GroupError> {
        let rows = self.rows();
        from_cayley_table(&rows).map(|_| ())?;
        if (0..self.order).any(|a| self.mul(0, a) != a || self.mul(a, 0) != a) {
            return Err(GroupError::NoIdentity);
        }
        Ok(())
    }
}

fn compute_inverses(order: usize, table: &[u32]) -> Option<Vec<u32>> {
    let mut inverse = vec![u32::MAX; order];
    for a in 0..order {
        for b in 0..order {
            if table[a * order + b] == 0 {
                inverse[a] = b as u32;
                break;
            }
        }
        if inverse[a] == u32::MAX {
            return None;
        }
    }
    Some(inverse)
}

/// Validates a raw Cayley table and relabels it so the identity sits at index 0.
pub fn from_cayley_table(raw: &[Vec<usize>]) -> Result<GroupTable, GroupError> {
    let n = raw.len();
    if n == 0 {
        return Err(GroupError::Empty);
    }
    for (row, r) in raw.iter().enumerate() {
        if r.len() != n {
            return Err(GroupError::NotSquare { row, len: r.len(), expected: n });
        }
        if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(GroupError::IndexOutOfRange { row, col, value, order: n });
        }
    }
    let mut seen = vec![usize::MAX; n];
    for (index, r) in raw.iter().enumerate() {
        for &v in r {
            if seen[v] == index {
                return Err(GroupError::NotLatinSquare { line: Line::Row, index, value: v });
            }
            seen[v] = index;
        }
    }
    seen.fill(usize::MAX);
    for index in 0..n {
        for r in raw {
            let v = r[index];
            if seen[v] == index {
                return Err(GroupError::NotLatinSquare { line: Line::Column, index, value: v });
            }
            seen[v] = index;
        }
    }
    let e = (0..n).find(|&e| (0..n).all(|a| raw[e][a] == a && raw[a][e] == a)).ok_or(GroupError::NoIdentity)?;
    for a in 0..n {
        for b in 0..n {
            let ab = raw[a][b];
            for c in 0..n {
                if raw[ab][c] != raw[a][raw[b][c]] {
                    return Err(GroupError::NotAssociative { a, b, c });
                }
            }
        }
    }
    // swap labels 0 and e
    let relabel = |x: usize| {
        if x == e {
            0
        } else if x == 0 {
            e
        } else {
            x
        }
    };
    Ok(GroupTable::from_fn(n, |a, b| relabel(raw[relabel(a)][relabel(b)])))
}

/// A bijection on `0..degree`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, GroupError> {
        let k = images.len();
        if k == 0 {
            return Err(GroupError::InvalidPermutation("degree must be positive".into()));
        }
        let mut hit = vec![false; k];
        for &i in &images {
            if i >= k {
                return Err(GroupError::InvalidPermutation(format!("image {i} >= degree {k}")));
            }
            if std::mem::replace(&mut hit[i], true) {
                return Err(GroupError::InvalidPermutation(format!("image {i} repeats")));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree).collect() }
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[0, 1, 2], &[3, 4]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, GroupError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(GroupError::InvalidPermutation(format!("point {x} >= degree {degree}")));
                }
                if std::mem::replace(&mut touched[x], true) {
                    return Err(GroupError::InvalidPermutation(format!("point {x} in two cycles")));
                }
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::new(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&i| other.images[i]).collect() }
    }
}

/// Closes a list of permutations under composition.
///
/// Element 0 of the result is the identity permutation; the remaining
/// elements are numbered in breadth-first discovery order.
pub fn from_permutations(degree: usize, generators: &[Permutation], caps: &Caps) -> Result<GroupTable, GroupError> {
    if degree == 0 {
        return Err(GroupError::InvalidPermutation("degree must be positive".into()));
    }
    for (i, g) in generators.iter().enumerate() {
        if g.degree() != degree {
            return Err(GroupError::DegreeMismatch { generator: i, expected: degree, found: g.degree() });
        }
    }
    let mut elements = vec![Permutation::identity(degree)];
    let mut index: HashMap<Permutation, usize> = HashMap::new();
    index.insert(elements[0].clone(), 0);
    let mut next = 0;
    while next < elements.len() {
        for g in generators {
            let p = elements[next].then(g);
            if !index.contains_key(&p) {
                if elements.len() >= caps.order {
                    return Err(GroupError::OrderCapExceeded { order: elements.len() + 1, cap: caps.order });
                }
                index.insert(p.clone(), elements.len());
                elements.push(p);
            }
        }
        next += 1;
    }
    Ok(GroupTable::from_fn(elements.len(), |a, b| index[&elements[a].then(&elements[b])]))
}

/// `Z_n` with `a * b = (a + b) mod n`.
pub fn cyclic(n: usize) -> GroupTable {
    assert!(n >= 1, "cyclic group order must be positive");
    GroupTable::from_fn(n, |a, b| (a + b) % n).with_name(format!("Z_{n}"))
}

/// Pairs `(x, y)` indexed as `x * |b| + y`, multiplied componentwise.
pub fn direct_product(a: &GroupTable, b: &GroupTable, caps: &Caps) -> Result<GroupTable, GroupError> {
    let (na, nb) = (a.order(), b.order());
    let order = na * nb;
    if order > caps.order {
        return Err(GroupError::OrderCapExceeded { order, cap: caps.order });
    }
    let g = GroupTable::from_fn(order, |x, y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb));
    Ok(match (a.name(), b.name()) {
        (Some(l), Some(r)) => g.with_name(format!("{l} x {r}")),
        _ => g,
    })
}

/// Parameters of `Z_p ⋊ Z_{q^n}` where the generator of `Z_{q^n}` acts by
/// `x -> x^t` and `t` has multiplicative order exactly `q` modulo `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetacyclicParams {
    p: u64,
    q: u64,
    n: u32,
    t: u64,
}

impl MetacyclicParams {
    pub fn new(p: u64, q: u64, n: u32, t: u64) -> Result<Self, GroupError> {
        Self::check_primes(p, q, n)?;
        if !(t > 1 && t < p && pow_mod(t, q, p) == 1) {
            return Err(GroupError::InvalidAction { p, q, t });
        }
        Ok(MetacyclicParams { p, q, n, t })
    }

    /// Uses the least valid action exponent.
    pub fn auto(p: u64, q: u64, n: u32) -> Result<Self, GroupError> {
        Self::check_primes(p, q, n)?;
        let t = (2..p)
            .find(|&t| pow_mod(t, q, p) == 1)
            .ok_or_else(|| GroupError::InvalidParams(format!("{q} does not divide {p} - 1")))?;
        Self::new(p, q, n, t)
    }

    fn check_primes(p: u64, q: u64, n: u32) -> Result<(), GroupError> {
        if !is_prime(p) {
            return Err(GroupError::InvalidParams(format!("p = {p} is not prime")));
        }
        if !is_prime(q) {
            return Err(GroupError::InvalidParams(format!("q = {q} is not prime")));
        }
        if p == q {
            return Err(GroupError::InvalidParams("p and q must be distinct".into()));
        }
        if n == 0 {
            return Err(GroupError::InvalidParams("n must be at least 1".into()));
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn order(&self) -> u64 {
        self.p * self.q.pow(self.n)
    }
}

/// `(a, b)(a', b') = (a + t^b a' mod p, b + b' mod q^n)`, indexed `a * q^n + b`.
pub fn metacyclic(params: &MetacyclicParams, caps: &Caps) -> Result<GroupTable, GroupError> {
    let order = params.order() as usize;
    if order > caps.order {
        return Err(GroupError::OrderCapExceeded { order, cap: caps.order });
    }
    let p = params.p as usize;
    let m = params.q.pow(params.n) as usize;
    let twists: Vec<usize> = (0..params.q).map(|b| pow_mod(params.t, b, params.p) as usize).collect();
    let q = params.q as usize;
    let g = GroupTable::from_fn(order, |x, y| {
        let (a, b) = (x / m, x % m);
        let (a2, b2) = (y / m, y % m);
        ((a + twists[b % q] * a2) % p) * m + (b + b2) % m
    });
    Ok(g.with_name(format!("Z_{p}:Z_{m}(t={})", params.t)))
}

/// `G/N` on cosets, each labelled by its least element; cosets sorted by label.
pub fn quotient(g: &GroupTable, normal: &Bitset) -> Result<GroupTable, GroupError> {
    let members: Vec<usize> = normal.iter().collect();
    for &h in &members {
        for x in 0..g.order() {
            if !normal.contains(g.conjugate(h, x)) {
                return Err(GroupError::NotNormal { element: h, conjugator: x });
            }
        }
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let label = reps.len();
        reps.push(x);
        for &h in &members {
            coset_of[g.mul(x, h)] = label;
        }
    }
    let q = GroupTable::from_fn(reps.len(), |a, b| coset_of[g.mul(reps[a], reps[b])]);
    Ok(match g.name() {
        Some(n) => q.with_name(format!("{n}/N")),
        None => q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_rows() -> Vec<Vec<usize>> {
        let caps = Caps::default();
        let gens =
            [Permutation::from_cycles(3, &[&[0, 1]]).unwrap(), Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()];
        from_permutations(3, &gens, &caps).unwrap().rows()
    }

    #[test]
    fn trivial_and_z2_tables() {
        let t = from_cayley_table(&[vec![0]]).unwrap();
        assert_eq!(t.order(), 1);
        let z2 = from_cayley_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z2.order(), 2);
        assert_eq!(z2.element_order(1), 2);
    }

    #[test]
    fn identity_is_relabelled_to_zero() {
        // Z_3 with identity stored at index 2
        let raw = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = from_cayley_table(&raw).unwrap();
        assert!((0..3).all(|a| g.mul(0, a) == a && g.mul(a, 0) == a));
        assert_eq!(g.order_census(), vec![1, 3, 3]);
    }

    #[test]
    fn rejects_malformed_tables() {
        assert_eq!(from_cayley_table(&[]), Err(GroupError::Empty));
        assert!(matches!(from_cayley_table(&[vec![0, 1], vec![1]]), Err(GroupError::NotSquare { row: 1, .. })));
        assert!(matches!(
            from_cayley_table(&[vec![0, 2], vec![1, 0]]),
            Err(GroupError::IndexOutOfRange { row: 0, col: 1, value: 2, .. })
        ));
        assert!(matches!(
            from_cayley_table(&[vec![0, 1], vec![0, 1]]),
            Err(GroupError::NotLatinSquare { line: Line::Column, index: 0, value: 0 })
        ));
        // a * b = -a - b (mod 3): Latin, no identity
        let idempotent = vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]];
        assert_eq!(from_cayley_table(&idempotent), Err(GroupError::NoIdentity));
        // the same law as Z_2 with identity 1 is accepted
        assert_eq!(from_cayley_table(&[vec![1, 0], vec![0, 1]]).unwrap().order(), 2);
    }

    #[test]
    fn single_entry_mutation_of_s3_is_rejected() {
        let rows = s3_rows();
        for a in 0..6 {
            for b in 0..6 {
                let mut m = rows.clone();
                m[a][b] = (m[a][b] + 1) % 6;
                assert!(from_cayley_table(&m).is_err(), "mutation at ({a},{b}) accepted");
            }
        }
    }

    #[test]
    fn latin_but_non_associative_table_names_its_triple() {
        // Swap an intercalate of the S_3 table away from the identity row and
        // column: the result is still a Latin square with identity 0.
        let rows = s3_rows();
        let mut found = false;
        'outer: for a in 1..6 {
            for a2 in a + 1..6 {
                for b in 1..6 {
                    for b2 in b + 1..6 {
                        if rows[a][b] == rows[a2][b2] && rows[a][b2] == rows[a2][b] {
                            let mut m = rows.clone();
                            m[a][b] = rows[a][b2];
                            m[a][b2] = rows[a][b];
                            m[a2][b] = rows[a2][b2];
                            m[a2][b2] = rows[a2][b];
                            match from_cayley_table(&m) {
                                Err(GroupError::NotAssociative { a, b, c }) => {
                                    assert_ne!(m[m[a][b]][c], m[a][m[b][c]]);
                                    found = true;
                                    break 'outer;
                                }
                                other => panic!("expected NotAssociative, got {other:?}"),
                            }
                        }
                    }
                }
            }
        }
        assert!(found, "S_3 table has an intercalate off the identity row");
    }

    #[test]
    fn permutation_closure() {
        let caps = Caps::default();
        let g = from_permutations(
            3,
            &[Permutation::from_cycles(3, &[&[0, 1]]).unwrap(), Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()],
            &caps,
        )
        .unwrap();
        assert_eq!(g.order(), 6);
        let c3 =
            from_permutations(6, &[Permutation::from_cycles(6, &[&[0, 1, 2], &[3, 4, 5]]).unwrap()], &caps).unwrap();
        assert_eq!(c3.order(), 3);
        let v4 = from_permutations(
            4,
            &[
                Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap(),
                Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap(),
            ],
            &caps,
        )
        .unwrap();
        assert_eq!(v4.order_census(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn permutation_errors() {
        let caps = Caps { order: 5, ..Caps::default() };
        let gens =
            [Permutation::from_cycles(3, &[&[0, 1]]).unwrap(), Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()];
        assert!(matches!(from_permutations(3, &gens, &caps), Err(GroupError::OrderCapExceeded { cap: 5, .. })));
        assert!(matches!(
            from_permutations(4, &gens, &Caps::default()),
            Err(GroupError::DegreeMismatch { generator: 0, expected: 4, found: 3 })
        ));
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::from_cycles(3, &[&[0, 1], &[1, 2]]).is_err());
    }

    #[test]
    fn cyclic_groups() {
        assert_eq!(cyclic(1).order(), 1);
        let z3 = cyclic(3);
        assert!((0..3).all(|a| z3.pow(a, 3) == 0));
        assert_eq!(cyclic(8).element_order(1), 8);
    }

    #[test]
    fn products() {
        let caps = Caps::default();
        let z6 = direct_product(&cyclic(2), &cyclic(3), &caps).unwrap();
        assert_eq!(z6.order(), 6);
        assert!((0..6).any(|a| z6.element_order(a) == 6));
        let g = cyclic(5);
        let tg = direct_product(&cyclic(1), &g, &caps).unwrap();
        assert_eq!(tg.rows(), g.rows());
        let small = Caps { order: 10, ..Caps::default() };
        assert!(matches!(direct_product(&cyclic(4), &cyclic(3), &small), Err(GroupError::OrderCapExceeded { .. })));
    }

    #[test]
    fn metacyclic_census() {
        let caps = Caps::default();
        let s3 = metacyclic(&MetacyclicParams::new(3, 2, 1, 2).unwrap(), &caps).unwrap();
        assert_eq!(s3.order_census(), vec![1, 2, 2, 2, 3, 3]);
        let d10 = metacyclic(&MetacyclicParams::new(5, 2, 1, 4).unwrap(), &caps).unwrap();
        assert_eq!(d10.order_census(), vec![1, 2, 2, 2, 2, 2, 5, 5, 5, 5]);
        let dic3 = metacyclic(&MetacyclicParams::new(3, 2, 2, 2).unwrap(), &caps).unwrap();
        assert_eq!(dic3.order(), 12);
        assert!(!dic3.is_abelian());
        for g in [&s3, &d10, &dic3] {
            g.validate().unwrap();
        }
    }

    #[test]
    fn metacyclic_rejects_bad_parameters() {
        assert_eq!(MetacyclicParams::new(5, 2, 1, 2), Err(GroupError::InvalidAction { p: 5, q: 2, t: 2 }));
        assert!(matches!(MetacyclicParams::new(4, 2, 1, 3), Err(GroupError::InvalidParams(_))));
        assert!(matches!(MetacyclicParams::new(3, 2, 0, 2), Err(GroupError::InvalidParams(_))));
        assert!(matches!(MetacyclicParams::auto(5, 3, 1), Err(GroupError::InvalidParams(_))));
        assert_eq!(MetacyclicParams::auto(7, 3, 1).unwrap().t(), 2);
        assert_eq!(MetacyclicParams::auto(5, 2, 2).unwrap().t(), 4);
    }

    #[test]
    fn quotients() {
        let g = cyclic(6);
        let trivial = Bitset::from_indices(6, [0]);
        assert_eq!(quotient(&g, &trivial).unwrap().rows(), g.rows());
        assert_eq!(quotient(&g, &Bitset::full(6)).unwrap().order(), 1);
        let sub = Bitset::from_indices(6, [0, 2, 4]);
        let q = quotient(&g, &sub).unwrap();
        assert_eq!(q.order(), 2);
        q.validate().unwrap();

        let s3 = from_cayley_table(&s3_rows()).unwrap();
        let t = (1..6).find(|&a| s3.element_order(a) == 2).unwrap();
        let not_normal = Bitset::from_indices(6, [0, t]);
        assert!(matches!(quotient(&s3, &not_normal), Err(GroupError::NotNormal { .. })));
    }
}
