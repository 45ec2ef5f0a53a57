//! Subgroup lattices.
//!
//! [`enumerate_subgroups`] finds every subgroup by closing the set of cyclic
//! subgroups under joins. Subgroups are sorted by order, then by their member
//! bitset read as an integer, so each one has a stable index that every
//! report and diagram refers to.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::arith::factorize;
use crate::bitset::Bitset;
use crate::caps::Caps;
use crate::group::GroupTable;

/// Join and meet tables are precomputed up to this many subgroups.
pub const EAGER_TABLE_LIMIT: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("subgroup count exceeds the lattice cap {cap}")]
    LatticeCapExceeded { cap: usize },
    #[error("group order {order} exceeds the order cap {cap}")]
    OrderCapExceeded { order: usize, cap: usize },
}

/// A subgroup, stored as the set of its element indices.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subgroup {
    members: Bitset,
    order: usize,
}

impl Subgroup {
    fn new(members: Bitset) -> Self {
        let order = members.count();
        Subgroup { members, order }
    }

    pub fn members(&self) -> &Bitset {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(a)
    }

    pub fn elements(&self) -> Vec<usize> {
        self.members.iter().collect()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }
}

/// Closes `start ∪ gens` under right multiplication by `gens`.
///
/// `start` must already be closed (or contain only the identity); the result
/// is the subgroup generated by `start ∪ gens`.
fn close_from(g: &GroupTable, start: &Bitset, gens: &[usize]) -> Bitset {
    let mut set = start.clone();
    set.insert(0);
    let mut queue: Vec<usize> = set.iter().collect();
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        for &s in gens {
            let y = g.mul(x, s);
            if set.insert(y) {
                queue.push(y);
            }
        }
        i += 1;
    }
    set
}

/// Least subgroup containing `seed`.
pub fn generated_subgroup(g: &GroupTable, seed: &Bitset) -> Subgroup {
    let gens: Vec<usize> = seed.iter().collect();
    Subgroup::new(close_from(g, &Bitset::from_indices(g.order(), [0]), &gens))
}

/// `{a : ab = ba for all b}`.
pub fn center(g: &GroupTable) -> Subgroup {
    let n = g.order();
    Subgroup::new(Bitset::from_indices(n, (0..n).filter(|&a| (0..n).all(|b| g.mul(a, b) == g.mul(b, a)))))
}

/// Subgroup generated by all commutators `a^-1 b^-1 a b`.
pub fn derived_subgroup(g: &GroupTable) -> Subgroup {
    let n = g.order();
    let mut seed = Bitset::new(n);
    seed.insert(0);
    for a in 0..n {
        for b in 0..n {
            seed.insert(g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b)));
        }
    }
    generated_subgroup(g, &seed)
}

pub fn is_cyclic(g: &GroupTable) -> bool {
    (0..g.order()).any(|a| g.element_order(a) == g.order())
}

/// The multiplication table of a subgroup, on its elements in ascending
/// order, together with the embedding back into the ambient group.
pub fn subgroup_table(g: &GroupTable, h: &Subgroup) -> (GroupTable, Vec<usize>) {
    let embedding = h.elements();
    let mut local = vec![usize::MAX; g.order()];
    for (i, &x) in embedding.iter().enumerate() {
        local[x] = i;
    }
    let t = GroupTable::from_fn(embedding.len(), |a, b| local[g.mul(embedding[a], embedding[b])]);
    (t, embedding)
}

/// Maps a set of subgroup-local indices back to ambient indices.
pub fn lift(embedding: &[usize], ambient_order: usize, local: &Bitset) -> Bitset {
    Bitset::from_indices(ambient_order, local.iter().map(|i| embedding[i]))
}

/// Every subgroup of a group, with normality, conjugacy and covering data.
#[derive(Debug)]
pub struct SubgroupLattice {
    group: Arc<GroupTable>,
    subgroups: Vec<Subgroup>,
    generators: Vec<Vec<usize>>,
    index: HashMap<Bitset, usize>,
    normal: Vec<bool>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    maximal: Vec<bool>,
    covers: Vec<Vec<usize>>,
    joins: Option<Vec<u32>>,
    meets: Option<Vec<u32>>,
}

/// Enumerates all subgroups by joining cyclic subgroups until nothing new appears.
pub fn enumerate_subgroups(group: Arc<GroupTable>, caps: &Caps) -> Result<SubgroupLattice, LatticeError> {
    let g = &*group;
    let n = g.order();
    if n > caps.order {
        return Err(LatticeError::OrderCapExceeded { order: n, cap: caps.order });
    }
    let trivial = Bitset::from_indices(n, [0]);

    let mut found: HashMap<Bitset, Vec<usize>> = HashMap::new();
    let mut cyclics: Vec<(Bitset, usize)> = Vec::new();
    for a in 0..n {
        let c = close_from(g, &trivial, &[a]);
        if !found.contains_key(&c) {
            let gens = if a == 0 { vec![] } else { vec![a] };
            found.insert(c.clone(), gens);
            cyclics.push((c, a));
        }
    }
    if found.len() > caps.lattice {
        return Err(LatticeError::LatticeCapExceeded { cap: caps.lattice });
    }

    let mut work: Vec<Bitset> = found.keys().cloned().collect();
    work.sort();
    while let Some(h) = work.pop() {
        let h_gens = found[&h].clone();
        for (c, a) in &cyclics {
            if c.is_subset(&h) {
                continue;
            }
            let mut gens = h_gens.clone();
            gens.push(*a);
            let j = close_from(g, &h, &gens);
            if !found.contains_key(&j) {
                found.insert(j.clone(), gens);
                if found.len() > caps.lattice {
                    return Err(LatticeError::LatticeCapExceeded { cap: caps.lattice });
                }
                work.push(j);
            }
        }
    }

    let mut entries: Vec<(Subgroup, Vec<usize>)> =
        found.into_iter().map(|(b, gens)| (Subgroup::new(b), gens)).collect();
    entries.sort_by(|(x, _), (y, _)| x.order.cmp(&y.order).then_with(|| x.members.cmp(&y.members)));
    let (subgroups, generators): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
    let index: HashMap<Bitset, usize> = subgroups.iter().enumerate().map(|(i, s)| (s.members.clone(), i)).collect();

    let count = subgroups.len();
    let mut class_of = vec![usize::MAX; count];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..count {
        if class_of[i] != usize::MAX {
            continue;
        }
        let members = subgroups[i].elements();
        let mut orbit: Vec<usize> = (0..n)
            .map(|x| {
                let conj = Bitset::from_indices(n, members.iter().map(|&h| g.conjugate(h, x)));
                index[&conj]
            })
            .collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &j in &orbit {
            class_of[j] = classes.len();
        }
        classes.push(orbit);
    }
    let normal: Vec<bool> = (0..count).map(|i| classes[class_of[i]].len() == 1).collect();

    // covers[i]: subgroups covering i (immediate successors)
    let mut covers = vec![Vec::new(); count];
    for i in 0..count {
        let above: Vec<usize> =
            (i + 1..count).filter(|&j| subgroups[i].members.is_subset(&subgroups[j].members) && i != j).collect();
        for &j in &above {
            let between = above.iter().any(|&k| {
                k != j && subgroups[k].order < subgroups[j].order && subgroups[k].is_subgroup_of(&subgroups[j])
            });
            if !between {
                covers[i].push(j);
            }
        }
    }
    let top = count - 1;
    let maximal: Vec<bool> = (0..count).map(|i| i != top && covers[i].contains(&top)).collect();

    let mut lattice = SubgroupLattice {
        group,
        subgroups,
        generators,
        index,
        normal,
        class_of,
        classes,
        maximal,
        covers,
        joins: None,
        meets: None,
    };
    if count <= EAGER_TABLE_LIMIT {
        let mut joins = vec![0u32; count * count];
        let mut meets = vec![0u32; count * count];
        for h in 0..count {
            for k in h..count {
                let j = lattice.compute_join(h, k) as u32;
                let m = lattice.compute_meet(h, k) as u32;
                joins[h * count + k] = j;
                joins[k * count + h] = j;
                meets[h * count + k] = m;
                meets[k * count + h] = m;
            }
        }
        lattice.joins = Some(joins);
        lattice.meets = Some(meets);
    }
    Ok(lattice)
}

impl SubgroupLattice {
    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    /// A generating set of subgroup `i` found during enumeration.
    pub fn generators(&self, i: usize) -> &[usize] {
        &self.generators[i]
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn index_of(&self, members: &Bitset) -> Option<usize> {
        self.index.get(members).copied()
    }

    pub fn is_normal(&self, i: usize) -> bool {
        self.normal[i]
    }

    pub fn is_maximal(&self, i: usize) -> bool {
        self.maximal[i]
    }

    pub fn maximal_subgroups(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.maximal[i]).collect()
    }

    pub fn conjugacy_class(&self, i: usize) -> &[usize] {
        &self.classes[self.class_of[i]]
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Subgroups that cover `i` in the lattice.
    pub fn covers(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    pub fn leq(&self, h: usize, k: usize) -> bool {
        self.subgroups[h].is_subgroup_of(&self.subgroups[k])
    }

    /// Indices of the subgroups contained in `h`, i.e. `L(H)` inside `L(G)`.
    pub fn below(&self, h: usize) -> Vec<usize> {
        (0..=h).filter(|&k| self.leq(k, h)).collect()
    }

    pub fn meet(&self, h: usize, k: usize) -> usize {
        match &self.meets {
            Some(t) => t[h * self.len() + k] as usize,
            None => self.compute_meet(h, k),
        }
    }

    pub fn join(&self, h: usize, k: usize) -> usize {
        match &self.joins {
            Some(t) => t[h * self.len() + k] as usize,
            None => self.compute_join(h, k),
        }
    }

    fn compute_meet(&self, h: usize, k: usize) -> usize {
        let m = self.subgroups[h].members.intersection(&self.subgroups[k].members);
        self.index[&m]
    }

    fn compute_join(&self, h: usize, k: usize) -> usize {
        if self.leq(h, k) {
            return k;
        }
        if self.leq(k, h) {
            return h;
        }
        let mut gens = self.generators[h].clone();
        gens.extend_from_slice(&self.generators[k]);
        let j = close_from(&self.group, &self.subgroups[h].members, &gens);
        self.index[&j]
    }

    /// Subgroup generated by the union of several listed subgroups.
    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.trivial(), |acc, i| self.join(acc, i))
    }

    /// The listed index of the subgroup generated by `seed`.
    pub fn index_of_generated(&self, seed: &Bitset) -> usize {
        self.index[&generated_subgroup(&self.group, seed).members]
    }

    /// All subgroups of order `p^a` with `p^a || |G|`.
    pub fn sylow_subgroups(&self, p: u64) -> Vec<usize> {
        let order = self.group.order() as u64;
        let Some(&(_, e)) = factorize(order).iter().find(|(q, _)| *q == p) else {
            return Vec::new();
        };
        let target = p.pow(e) as usize;
        (0..self.len()).filter(|&i| self.subgroups[i].order == target).collect()
    }

    /// Every Sylow subgroup is normal.
    pub fn is_nilpotent(&self) -> bool {
        factorize(self.group.order() as u64).iter().all(|&(p, _)| self.sylow_subgroups(p).len() == 1)
    }

    /// Intersection of the maximal subgroups; the whole group when it is trivial.
    pub fn frattini(&self) -> Subgroup {
        let mut acc = self.subgroups[self.top()].members.clone();
        for i in self.maximal_subgroups() {
            acc = acc.intersection(&self.subgroups[i].members);
        }
        Subgroup::new(acc)
    }

    pub fn frattini_index(&self) -> usize {
        self.index[&self.frattini().members]
    }

    /// Hasse diagram in Graphviz DOT. Nodes are labelled `order:index`;
    /// normal subgroups are boxes.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let name = self.group.name().unwrap_or("G").replace('"', "'");
        writeln!(out, "digraph subgroup_lattice {{").unwrap();
        writeln!(out, "    label=\"L({name})\";").unwrap();
        writeln!(out, "    rankdir=BT;").unwrap();
        for (i, s) in self.subgroups.iter().enumerate() {
            let shape = if self.normal[i] { "box" } else { "ellipse" };
            writeln!(out, "    n{i} [label=\"{}:{i}\", shape={shape}];", s.order).unwrap();
        }
        for (i, ups) in self.covers.iter().enumerate() {
            for j in ups {
                writeln!(out, "    n{i} -> n{j};").unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, metacyclic, MetacyclicParams};
    use crate::named::named;

    fn lat(g: GroupTable) -> SubgroupLattice {
        enumerate_subgroups(Arc::new(g), &Caps::default()).unwrap()
    }

    #[test]
    fn generated_subgroups_of_s3() {
        let s3 = named("S_3").unwrap();
        assert_eq!(generated_subgroup(&s3, &Bitset::from_indices(6, [0])).order(), 1);
        let three_cycle = (0..6).find(|&a| s3.element_order(a) == 3).unwrap();
        assert_eq!(generated_subgroup(&s3, &Bitset::from_indices(6, [three_cycle])).order(), 3);
        let ts: Vec<usize> = (0..6).filter(|&a| s3.element_order(a) == 2).collect();
        assert_eq!(generated_subgroup(&s3, &Bitset::from_indices(6, [ts[0], ts[1]])).order(), 6);
    }

    #[test]
    fn s3_lattice() {
        let l = lat(named("S_3").unwrap());
        let orders: Vec<usize> = l.subgroups().iter().map(Subgroup::order).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
        assert_eq!(l.trivial(), 0);
        assert_eq!(l.top(), 5);
        assert_eq!(l.meet(1, 2), 0);
        assert_eq!(l.join(1, 2), 5);
        assert!(l.is_normal(4) && !l.is_normal(1));
        assert_eq!(l.conjugacy_class(1), &[1, 2, 3]);
        assert_eq!(l.maximal_subgroups(), vec![1, 2, 3, 4]);
        assert_eq!(l.sylow_subgroups(3).len(), 1);
        assert_eq!(l.sylow_subgroups(2).len(), 3);
        assert!(l.sylow_subgroups(5).is_empty());
        assert!(!l.is_nilpotent());
        assert_eq!(center(l.group()).order(), 1);
        assert_eq!(derived_subgroup(l.group()), *l.subgroup(4));
    }

    #[test]
    fn top_and_bottom_laws() {
        let l = lat(named("D_8").unwrap());
        for h in 0..l.len() {
            assert_eq!(l.meet(h, l.top()), h);
            assert_eq!(l.meet(h, 0), 0);
            assert_eq!(l.join(h, 0), h);
            assert_eq!(l.join(h, l.top()), l.top());
        }
    }

    #[test]
    fn cyclic_prime_power_is_a_chain() {
        for (p, k) in [(2usize, 4u32), (3, 2), (5, 1)] {
            let l = lat(cyclic(p.pow(k)));
            assert_eq!(l.len(), k as usize + 1);
            assert!((1..l.len()).all(|i| l.leq(i - 1, i)));
        }
        let l = lat(cyclic(8));
        assert_eq!(l.sylow_subgroups(2), vec![l.top()]);
    }

    #[test]
    fn dic3_has_eight_subgroups() {
        let g = metacyclic(&MetacyclicParams::new(3, 2, 2, 2).unwrap(), &Caps::default()).unwrap();
        assert_eq!(lat(g).len(), 8);
    }

    #[test]
    fn classical_subgroups() {
        let q8 = lat(named("Q_8").unwrap());
        assert_eq!(q8.frattini().order(), 2);
        assert_eq!(q8.frattini(), center(q8.group()));
        assert_eq!(derived_subgroup(q8.group()), center(q8.group()));

        let a4 = lat(named("A_4").unwrap());
        assert_eq!(a4.frattini().order(), 1);
        assert_eq!(lat(cyclic(7)).frattini().order(), 1);
        assert_eq!(lat(cyclic(1)).frattini().order(), 1);

        let z = cyclic(10);
        assert_eq!(center(&z).order(), 10);
        assert_eq!(derived_subgroup(&z).order(), 1);
        assert_eq!(center(&named("SL23").unwrap()).order(), 2);
    }

    #[test]
    fn nilpotency_and_cyclicity() {
        assert!(lat(named("D_8").unwrap()).is_nilpotent());
        let q8z3 = crate::group::direct_product(&named("Q_8").unwrap(), &cyclic(3), &Caps::default()).unwrap();
        assert!(lat(q8z3).is_nilpotent());
        assert!(lat(cyclic(1)).is_nilpotent());
        assert!(is_cyclic(&cyclic(6)));
        assert!(!is_cyclic(&named("S_3").unwrap()));
        let v4 = crate::group::direct_product(&cyclic(2), &cyclic(2), &Caps::default()).unwrap();
        assert!(!is_cyclic(&v4));
    }

    #[test]
    fn caps_are_enforced() {
        let caps = Caps { lattice: 5, ..Caps::default() };
        let r = enumerate_subgroups(Arc::new(named("S_4").unwrap()), &caps);
        assert_eq!(r.unwrap_err(), LatticeError::LatticeCapExceeded { cap: 5 });
        let caps = Caps { order: 5, ..Caps::default() };
        assert!(matches!(enumerate_subgroups(Arc::new(cyclic(6)), &caps), Err(LatticeError::OrderCapExceeded { .. })));
    }

    #[test]
    fn subgroup_table_embeds() {
        let l = lat(named("S_4").unwrap());
        assert_eq!(l.len(), 30);
        for h in l.subgroups() {
            let (t, emb) = subgroup_table(l.group(), h);
            assert_eq!(t.order(), h.order());
            assert_eq!(emb[0], 0);
            for a in 0..t.order() {
                for b in 0..t.order() {
                    assert_eq!(emb[t.mul(a, b)], l.group().mul(emb[a], emb[b]));
                }
            }
        }
    }

    #[test]
    fn dot_output_is_stable() {
        let l = lat(named("S_3").unwrap());
        let dot = l.to_dot();
        assert!(dot.starts_with("digraph subgroup_lattice {"));
        assert!(dot.contains("n0 [label=\"1:0\", shape=box];"));
        assert!(dot.contains("n1 [label=\"2:1\", shape=ellipse];"));
        assert!(dot.contains("n4 -> n5;"));
        assert!(!dot.contains("n0 -> n5;"));
        assert_eq!(dot, l.to_dot());
        // 3 transposition subgroups and one 3-cycle subgroup, each covering 1 and covered by G
        assert_eq!(dot.matches(" -> ").count(), 8);
    }
}
