//! Permutability, modularity and the Iwasawa / Schmidt classification.
//!
//! Every characterisation is computed twice where a theorem relates two
//! descriptions of the same class: once from the definition and once from the
//! structural criterion. [`classify`] refuses to return a report when the two
//! disagree.

use serde::Serialize;
use thiserror::Error;

use crate::analysis::Analysis;
use crate::arith::{factorize, multiplicative_order, prime_power_base};
use crate::bitset::Bitset;
use crate::lattice::{center, derived_subgroup, is_cyclic, LatticeError, SubgroupLattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("group is not a Schmidt group")]
    NotSchmidt,
    #[error("Schmidt structure violated ({bullet}): {detail}")]
    StructureViolation { bullet: &'static str, detail: String },
    #[error("{theorem} violated: {detail}")]
    TheoremViolation { theorem: &'static str, detail: String },
}

/// A subgroup as it appears in reports: lattice index plus order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubgroupRef {
    pub index: usize,
    pub order: usize,
}

impl SubgroupRef {
    fn new(l: &SubgroupLattice, index: usize) -> Self {
        SubgroupRef { index, order: l.subgroup(index).order() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `HK != KH`.
    NonPermutingPair { h: SubgroupRef, k: SubgroupRef },
    /// A pentagon sublattice: `bottom < low < high < top`, `bottom < side < top`,
    /// `low ∧ side = high ∧ side = bottom`, `low ∨ side = high ∨ side = top`.
    Pentagon { bottom: SubgroupRef, low: SubgroupRef, high: SubgroupRef, side: SubgroupRef, top: SubgroupRef },
}

/// The set `HK = {hk}` as a bitset.
pub fn product_set(l: &SubgroupLattice, h: usize, k: usize) -> Bitset {
    let g = l.group();
    let mut out = Bitset::new(g.order());
    for a in l.subgroup(h).members().iter() {
        for b in l.subgroup(k).members().iter() {
            out.insert(g.mul(a, b));
        }
    }
    out
}

/// `HK = KH` as element sets.
pub fn permute(l: &SubgroupLattice, h: usize, k: usize) -> bool {
    h == k || product_set(l, h, k) == product_set(l, k, h)
}

/// `|H||K|/|H ∩ K| = |⟨H, K⟩|`, i.e. the product set is the join.
pub fn product_is_subgroup(l: &SubgroupLattice, h: usize, k: usize) -> bool {
    let (oh, ok) = (l.subgroup(h).order(), l.subgroup(k).order());
    let om = l.subgroup(l.meet(h, k)).order();
    oh * ok == om * l.subgroup(l.join(h, k)).order()
}

pub fn is_permutable_subgroup(a: &Analysis, h: usize) -> bool {
    (0..a.lattice().len()).all(|k| a.permutes(h, k))
}

/// Both modular-element conditions, quantified over the whole lattice:
/// `x ∨ (m ∧ z) = (x ∨ m) ∧ z` for `x ≤ z`, and `m ∨ (y ∧ z) = (m ∨ y) ∧ z` for `m ≤ z`.
pub fn is_modular_element(l: &SubgroupLattice, m: usize) -> bool {
    let n = l.len();
    for z in 0..n {
        for x in 0..n {
            if l.leq(x, z) && l.join(x, l.meet(m, z)) != l.meet(l.join(x, m), z) {
                return false;
            }
        }
        if l.leq(m, z) {
            for y in 0..n {
                if l.join(m, l.meet(y, z)) != l.meet(l.join(m, y), z) {
                    return false;
                }
            }
        }
    }
    true
}

/// First failure of the modular law, turned into a pentagon.
pub fn find_pentagon(l: &SubgroupLattice) -> Option<Witness> {
    let n = l.len();
    for z in 0..n {
        for x in 0..n {
            if !l.leq(x, z) {
                continue;
            }
            for y in 0..n {
                let low = l.join(x, l.meet(y, z));
                let high = l.meet(l.join(x, y), z);
                if low != high {
                    let r = |i| SubgroupRef::new(l, i);
                    return Some(Witness::Pentagon {
                        bottom: r(l.meet(y, z)),
                        low: r(low),
                        high: r(high),
                        side: r(y),
                        top: r(l.join(x, y)),
                    });
                }
            }
        }
    }
    None
}

/// The modular law holds on all triples.
pub fn is_modular_lattice(l: &SubgroupLattice) -> bool {
    find_pentagon(l).is_none()
}

pub fn find_non_permuting_pair(a: &Analysis) -> Option<Witness> {
    let l = a.lattice();
    let n = l.len();
    (0..n)
        .flat_map(|h| (h + 1..n).map(move |k| (h, k)))
        .find(|&(h, k)| !a.permutes(h, k))
        .map(|(h, k)| Witness::NonPermutingPair { h: SubgroupRef::new(l, h), k: SubgroupRef::new(l, k) })
}

/// Every pair of subgroups permutes.
pub fn is_iwasawa(a: &Analysis) -> bool {
    find_non_permuting_pair(a).is_none()
}

/// Not nilpotent, every maximal subgroup nilpotent.
pub fn is_schmidt(a: &Analysis) -> Result<bool, ClassifyError> {
    if a.lattice().is_nilpotent() {
        return Ok(false);
    }
    for m in a.lattice().maximal_subgroups() {
        if !a.subgroup(m)?.lattice().is_nilpotent() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Group classes usable with [`is_minimal_non`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Abelian,
    Cyclic,
    Nilpotent,
    Modular,
    Iwasawa,
}

impl Predicate {
    pub const ALL: [Predicate; 5] =
        [Predicate::Abelian, Predicate::Cyclic, Predicate::Nilpotent, Predicate::Modular, Predicate::Iwasawa];

    pub fn holds(self, a: &Analysis) -> bool {
        match self {
            Predicate::Abelian => a.group().is_abelian(),
            Predicate::Cyclic => is_cyclic(a.group()),
            Predicate::Nilpotent => a.lattice().is_nilpotent(),
            Predicate::Modular => is_modular_lattice(a.lattice()),
            Predicate::Iwasawa => is_iwasawa(a),
        }
    }

    /// Closed under taking subgroups. All built-in classes are.
    pub fn is_hereditary(self) -> bool {
        true
    }
}

/// `G` is outside the class but all proper subgroups are inside it. For
/// hereditary classes only maximal subgroups are inspected.
pub fn is_minimal_non(pred: Predicate, a: &Analysis) -> Result<bool, ClassifyError> {
    if pred.holds(a) {
        return Ok(false);
    }
    let l = a.lattice();
    let candidates: Vec<usize> = if pred.is_hereditary() { l.maximal_subgroups() } else { (0..l.top()).collect() };
    for h in candidates {
        if !pred.holds(&*a.subgroup(h)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// [`is_minimal_non`] evaluated on every proper subgroup, heredity not assumed.
pub fn is_minimal_non_exhaustive(pred: Predicate, a: &Analysis) -> Result<bool, ClassifyError> {
    if pred.holds(a) {
        return Ok(false);
    }
    for h in 0..a.lattice().top() {
        if !pred.holds(&*a.subgroup(h)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Prime-power order, non-modular, every proper subgroup modular.
pub fn is_minimal_non_modular_p_group(a: &Analysis) -> Result<bool, ClassifyError> {
    Ok(prime_power_base(a.group().order() as u64).is_some() && is_minimal_non(Predicate::Modular, a)?)
}

/// Decomposition `G = P ⋊ Q` of a Schmidt group with its characteristic subgroups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchmidtStructure {
    pub p: u64,
    pub q: u64,
    pub m: u32,
    pub n: u32,
    /// The normal Sylow p-subgroup.
    pub sylow_p: usize,
    /// Least-index Sylow q-subgroup (cyclic).
    pub sylow_q: usize,
    /// All Sylow q-subgroups; these are the conjugates of `sylow_q`.
    pub sylow_q_conjugates: Vec<usize>,
    /// Least element index generating `sylow_q`.
    pub y: usize,
    /// `⟨y^q⟩`.
    pub y_q: usize,
    /// Multiplicative order of p modulo q.
    pub r: u32,
    pub center: usize,
    pub frattini_g: usize,
    pub frattini_p: usize,
    pub derived_g: usize,
    pub derived_p: usize,
    pub center_p: usize,
    pub p_abelian: bool,
    pub p_order: usize,
}

fn violation(bullet: &'static str, detail: impl Into<String>) -> ClassifyError {
    ClassifyError::StructureViolation { bullet, detail: detail.into() }
}

/// Extracts `P`, `Q`, `y` and checks every structural property of a Schmidt group.
pub fn extract_schmidt_structure(a: &Analysis) -> Result<SchmidtStructure, ClassifyError> {
    if !is_schmidt(a)? {
        return Err(ClassifyError::NotSchmidt);
    }
    let l = a.lattice();
    let g = a.group();
    let primes = factorize(g.order() as u64);
    let [(p1, e1), (p2, e2)] = primes[..] else {
        return Err(violation("|G| = p^m q^n", format!("order {} has {} prime divisors", g.order(), primes.len())));
    };
    let (s1, s2) = (l.sylow_subgroups(p1), l.sylow_subgroups(p2));
    let (p, m, q, n, sylow_p, qs) = match (s1.len(), s2.len()) {
        (1, k) if k > 1 => (p1, e1, p2, e2, s1[0], s2),
        (k, 1) if k > 1 => (p2, e2, p1, e1, s2[0], s1),
        (a1, a2) => {
            return Err(violation("unique Sylow p-subgroup", format!("Sylow counts {a1} and {a2}")));
        }
    };
    let sylow_q = qs[0];
    let q_order = l.subgroup(sylow_q).order();
    let y = l
        .subgroup(sylow_q)
        .members()
        .iter()
        .find(|&x| g.element_order(x) == q_order)
        .ok_or_else(|| violation("cyclic Sylow q-subgroup", "no generator"))?;
    if l.conjugacy_class(sylow_q) != qs.as_slice() {
        return Err(violation("Sylow q-subgroups are conjugate", format!("{:?}", qs)));
    }
    let r = multiplicative_order(p, q).expect("distinct primes") as u32;
    let y_pow_q = g.pow(y, q);
    let y_q = l.index_of_generated(&Bitset::from_indices(g.order(), [y_pow_q]));

    let center_g = l.index_of(center(g).members()).expect("center is listed");
    let frattini_g = l.frattini_index();
    let derived_g = l.index_of(derived_subgroup(g).members()).expect("derived subgroup is listed");

    let pa = a.subgroup(sylow_p)?;
    let frattini_p = a.lift(sylow_p, pa.lattice().frattini().members());
    let derived_p = a.lift(sylow_p, derived_subgroup(pa.group()).members());
    let center_p = a.lift(sylow_p, center(pa.group()).members());
    let p_abelian = pa.group().is_abelian();
    let p_order = l.subgroup(sylow_p).order();
    let ord = |i: usize| l.subgroup(i).order();
    let p_r = (p as usize).pow(r);

    if !l.subgroup(center_g).contains(y_pow_q) {
        return Err(violation("y^q in Z(G)", format!("y = {y}, y^q = {y_pow_q}")));
    }
    if center_g != frattini_g {
        return Err(violation("Z(G) = Phi(G)", format!("Z(G) = #{center_g}, Phi(G) = #{frattini_g}")));
    }
    let product = l.join(frattini_p, y_q);
    if product != frattini_g || ord(frattini_p) * ord(y_q) != ord(frattini_g) {
        return Err(violation("Phi(G) = Phi(P) x <y^q>", format!("join = #{product}, Phi(G) = #{frattini_g}")));
    }
    if derived_g != sylow_p {
        return Err(violation("G' = P", format!("G' = #{derived_g}, P = #{sylow_p}")));
    }
    if derived_p != frattini_p {
        return Err(violation("P' = Phi(P)", format!("P' = #{derived_p}, Phi(P) = #{frattini_p}")));
    }
    if p_order / ord(derived_p) != p_r {
        return Err(violation("|P/P'| = p^r", format!("|P/P'| = {}, p^r = {p_r}", p_order / ord(derived_p))));
    }
    if p_abelian {
        if p_order != p_r {
            return Err(violation("abelian P has order p^r", format!("|P| = {p_order}")));
        }
        if let Some(nn) = (1..sylow_p).find(|&i| l.is_normal(i) && l.leq(i, sylow_p)) {
            return Err(violation("abelian P is minimal normal", format!("normal #{nn} inside P")));
        }
    } else {
        if center_p != derived_p || derived_p != frattini_p {
            return Err(violation("Z(P) = P' = Phi(P)", format!("Z(P) = #{center_p}, P' = #{derived_p}")));
        }
        if p_order / ord(center_p) != p_r {
            return Err(violation("|P/Z(P)| = p^r", format!("|P/Z(P)| = {}", p_order / ord(center_p))));
        }
    }

    Ok(SchmidtStructure {
        p,
        q,
        m,
        n,
        sylow_p,
        sylow_q,
        sylow_q_conjugates: qs,
        y,
        y_q,
        r,
        center: center_g,
        frattini_g,
        frattini_p,
        derived_g,
        derived_p,
        center_p,
        p_abelian,
        p_order,
    })
}

/// For a Schmidt group with modular `P`: the maximal subgroups are exactly
/// `P⟨y^q⟩` and the `Φ(P)Q_i`, and each `Φ(P)Q_i` is abelian.
pub fn check_schmidt_maximals(a: &Analysis, s: &SchmidtStructure) -> Result<(), ClassifyError> {
    let l = a.lattice();
    let mut expected = vec![l.join(s.sylow_p, s.y_q)];
    for &qi in &s.sylow_q_conjugates {
        let j = l.join(s.frattini_p, qi);
        if !a.subgroup(j)?.group().is_abelian() {
            return Err(ClassifyError::TheoremViolation {
                theorem: "theorem1",
                detail: format!("Phi(P)Q_i = #{j} is not abelian"),
            });
        }
        expected.push(j);
    }
    expected.sort_unstable();
    expected.dedup();
    let actual = l.maximal_subgroups();
    if actual != expected {
        return Err(ClassifyError::TheoremViolation {
            theorem: "theorem1",
            detail: format!("maximal subgroups {actual:?}, expected {expected:?}"),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonIwasawaCount {
    pub count: usize,
    pub witnesses: Vec<SubgroupRef>,
    /// When exactly one proper subgroup is non-Iwasawa: whether it is minimal non-Iwasawa.
    pub unique_is_minimal_non_iwasawa: Option<bool>,
}

/// Proper subgroups that are not Iwasawa groups.
pub fn count_non_iwasawa_proper(a: &Analysis) -> Result<NonIwasawaCount, ClassifyError> {
    let l = a.lattice();
    let mut witnesses = Vec::new();
    for h in 0..l.top() {
        if !is_iwasawa(&*a.subgroup(h)?) {
            witnesses.push(SubgroupRef::new(l, h));
        }
    }
    let unique_is_minimal_non_iwasawa = match witnesses.as_slice() {
        [w] => Some(is_minimal_non(Predicate::Iwasawa, &*a.subgroup(w.index)?)?),
        _ => None,
    };
    Ok(NonIwasawaCount { count: witnesses.len(), witnesses, unique_is_minimal_non_iwasawa })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub name: Option<String>,
    pub order: usize,
    pub lattice_size: usize,
    pub is_abelian: bool,
    pub is_nilpotent: bool,
    pub is_cyclic: bool,
    pub is_modular: bool,
    pub is_iwasawa: bool,
    pub is_schmidt: bool,
    pub is_minimal_non_iwasawa: bool,
    pub is_minimal_non_modular_p_group: bool,
    pub is_minimal_non_cyclic: bool,
    pub in_class_c: bool,
    pub non_iwasawa_proper: NonIwasawaCount,
    pub schmidt: Option<SchmidtStructure>,
    pub witness: Option<Witness>,
}

/// Full classification, with the two routes to "minimal non-Iwasawa" and to
/// class 𝒞 cross-checked.
pub fn classify(a: &Analysis) -> Result<ClassificationReport, ClassifyError> {
    let l = a.lattice();
    let g = a.group();
    let pentagon = find_pentagon(l);
    let pair = find_non_permuting_pair(a);
    let is_modular = pentagon.is_none();
    let is_iwasawa = pair.is_none();
    let is_schmidt = is_schmidt(a)?;
    let schmidt = if is_schmidt { Some(extract_schmidt_structure(a)?) } else { None };

    let by_definition = is_minimal_non_exhaustive(Predicate::Iwasawa, a)?;
    let is_minimal_non_modular_p_group = is_minimal_non_modular_p_group(a)?;
    let p_modular = match &schmidt {
        Some(s) => is_modular_lattice(a.subgroup(s.sylow_p)?.lattice()),
        None => false,
    };
    let by_structure = is_minimal_non_modular_p_group || (is_schmidt && p_modular);
    if by_definition != by_structure {
        return Err(ClassifyError::TheoremViolation {
            theorem: "theorem1",
            detail: format!("definition says {by_definition}, structure says {by_structure}"),
        });
    }
    if let (Some(s), true) = (&schmidt, p_modular) {
        check_schmidt_maximals(a, s)?;
    }

    let in_class_c = by_definition && is_modular;
    let criterion = schmidt.as_ref().is_some_and(|s| s.p_order as u64 == s.p);
    if in_class_c != criterion {
        return Err(ClassifyError::TheoremViolation {
            theorem: "corollary2",
            detail: format!("minimal non-Iwasawa and modular = {in_class_c}, Schmidt with |P| = p = {criterion}"),
        });
    }
    if let (true, Some(s)) = (in_class_c, &schmidt) {
        let quotient = s.p_order / l.subgroup(s.derived_p).order();
        if quotient as u64 != s.p || s.p_order as u64 != s.p {
            return Err(ClassifyError::TheoremViolation {
                theorem: "corollary2",
                detail: format!("|P/P'| = {quotient}, |P| = {}", s.p_order),
            });
        }
    }

    Ok(ClassificationReport {
        name: g.name().map(str::to_string),
        order: g.order(),
        lattice_size: l.len(),
        is_abelian: g.is_abelian(),
        is_nilpotent: l.is_nilpotent(),
        is_cyclic: is_cyclic(g),
        is_modular,
        is_iwasawa,
        is_schmidt,
        is_minimal_non_iwasawa: by_definition,
        is_minimal_non_modular_p_group,
        is_minimal_non_cyclic: is_minimal_non(Predicate::Cyclic, a)?,
        in_class_c,
        non_iwasawa_proper: count_non_iwasawa_proper(a)?,
        schmidt,
        witness: pentagon.or(pair),
    })
}
