//! A group together with its enumerated lattice and per-run caches.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::bitset::Bitset;
use crate::caps::Caps;
use crate::group::GroupTable;
use crate::lattice::{enumerate_subgroups, subgroup_table, LatticeError, SubgroupLattice};

/// The unit every classifier and degree computation works on.
///
/// Holds the subgroup lattice, the lazily built permutability matrix, and a
/// memo of subgroups materialised as groups in their own right (keyed by
/// member bitset). Safe to share across threads.
#[derive(Debug)]
pub struct Analysis {
    lattice: SubgroupLattice,
    caps: Caps,
    permutes: OnceLock<Vec<bool>>,
    subgroups: Mutex<HashMap<Bitset, Arc<Analysis>>>,
}

impl Analysis {
    pub fn new(group: GroupTable, caps: &Caps) -> Result<Self, LatticeError> {
        Self::from_arc(Arc::new(group), caps)
    }

    pub fn from_arc(group: Arc<GroupTable>, caps: &Caps) -> Result<Self, LatticeError> {
        Ok(Analysis {
            lattice: enumerate_subgroups(group, caps)?,
            caps: *caps,
            permutes: OnceLock::new(),
            subgroups: Mutex::new(HashMap::new()),
        })
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    pub fn group(&self) -> &GroupTable {
        self.lattice.group()
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    /// Subgroup `i` as a group of its own, with local element indices in
    /// ascending order of the ambient ones.
    pub fn subgroup(&self, i: usize) -> Result<Arc<Analysis>, LatticeError> {
        let key = self.lattice.subgroup(i).members().clone();
        if let Some(a) = self.subgroups.lock().expect("memo poisoned").get(&key) {
            return Ok(Arc::clone(a));
        }
        let (table, _) = subgroup_table(self.group(), self.lattice.subgroup(i));
        let table = match self.group().name() {
            Some(n) => table.with_name(format!("{n}[{i}]")),
            None => table,
        };
        let a = Arc::new(Analysis::new(table, &self.caps)?);
        let mut memo = self.subgroups.lock().expect("memo poisoned");
        Ok(Arc::clone(memo.entry(key).or_insert(a)))
    }

    /// Maps a bitset of local indices in subgroup `i` back to this group's
    /// lattice index.
    pub fn lift(&self, i: usize, local: &Bitset) -> usize {
        let emb = self.lattice.subgroup(i).elements();
        let b = crate::lattice::lift(&emb, self.group().order(), local);
        self.lattice.index_of(&b).expect("subgroup of a subgroup is listed")
    }

    /// `HK = KH` for every pair, computed once from product sets.
    pub(crate) fn permutability(&self) -> &[bool] {
        self.permutes.get_or_init(|| {
            let l = &self.lattice;
            let n = l.len();
            let mut m = vec![false; n * n];
            for h in 0..n {
                m[h * n + h] = true;
                for k in h + 1..n {
                    let v = crate::classify::permute(l, h, k);
                    m[h * n + k] = v;
                    m[k * n + h] = v;
                }
            }
            m
        })
    }

    pub fn permutes(&self, h: usize, k: usize) -> bool {
        self.permutability()[h * self.lattice.len() + k]
    }
}
