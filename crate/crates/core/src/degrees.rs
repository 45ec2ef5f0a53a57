//! Subgroup commutativity degrees.
//!
//! `sd(G)` is the fraction of ordered pairs `(H, K)` of subgroups with
//! `HK = KH`; `sd(H, G)` restricts the first coordinate to subgroups of `H`.
//! All values are exact rationals.

use std::fmt;
use std::ops::Sub;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::analysis::Analysis;
use crate::arith::is_prime;
use crate::caps::Caps;
use crate::classify::{classify, ClassifyError};
use crate::group::{metacyclic, GroupError, MetacyclicParams};
use crate::lattice::LatticeError;
use crate::spec::ActionExponent;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("family member n={n}: {detail}")]
    FamilyAssertion { n: u32, detail: String },
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("subgroup index {index} out of range (lattice has {len} subgroups)")]
    BadIndex { index: usize, len: usize },
}

/// A rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// `None` when `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Option<Self> {
        let den = den.into();
        if den.is_zero() {
            return None;
        }
        Some(ExactRational(BigRational::new(num.into(), den)))
    }

    pub fn ratio(num: u64, den: u64) -> Self {
        Self::new(num, den).expect("non-zero denominator")
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Decimal expansion rounded half away from zero to `digits` places.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let (num, den) = (self.numer().abs(), self.denom().clone());
        let scaled = (num * &scale * 2u32 + &den).div_floor(&(den * 2u32));
        let (int, frac) = scaled.div_rem(&scale);
        let sign = if self.0.is_negative() && !scaled.is_zero() { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac:0>digits$}")
        }
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Sub for &ExactRational {
    type Output = ExactRational;
    fn sub(self, rhs: &ExactRational) -> ExactRational {
        ExactRational(&self.0 - &rhs.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub sd: ExactRational,
    pub sd_decimal: String,
    pub lattice_size: usize,
    pub commuting_pairs: u64,
    /// `|C(H)|` per subgroup index.
    pub c_counts: Vec<u64>,
    /// `f(H) = sd(H)` per subgroup index.
    pub f_values: Vec<ExactRational>,
    /// `g(H) = sd(H, G)` per subgroup index.
    pub g_values: Vec<ExactRational>,
    pub f_image: Vec<ExactRational>,
    pub g_image: Vec<ExactRational>,
}

/// `|C(H)| = |{K : HK = KH}|`.
pub fn c_counts(a: &Analysis) -> Vec<u64> {
    let n = a.lattice().len();
    (0..n).map(|h| (0..n).filter(|&k| a.permutes(h, k)).count() as u64).collect()
}

/// `sd(G)` alone, without the per-subgroup functions.
pub fn sd_value(a: &Analysis) -> ExactRational {
    let n = a.lattice().len() as u64;
    ExactRational::ratio(c_counts(a).iter().sum(), n * n)
}

/// `sd(H, G)` over `L(H) x L(G)`, with `L(H)` read off the ambient lattice.
pub fn relative_sd(a: &Analysis, h: usize) -> Result<ExactRational, DegreeError> {
    let l = a.lattice();
    if h >= l.len() {
        return Err(DegreeError::BadIndex { index: h, len: l.len() });
    }
    let below = l.below(h);
    let n = l.len();
    let pairs = below.iter().map(|&x| (0..n).filter(|&k| a.permutes(x, k)).count() as u64).sum();
    Ok(ExactRational::ratio(pairs, (below.len() * n) as u64))
}

fn image(values: &[ExactRational]) -> Vec<ExactRational> {
    let mut v = values.to_vec();
    v.sort();
    v.dedup();
    v
}

/// `sd(G)` with `|C(H)|` counts and the images of `f` and `g`.
pub fn sd(a: &Analysis) -> Result<DegreeReport, DegreeError> {
    let l = a.lattice();
    let n = l.len();
    let c = c_counts(a);
    let commuting_pairs: u64 = c.iter().sum();
    let sd = ExactRational::ratio(commuting_pairs, (n * n) as u64);

    let mut f_values = Vec::with_capacity(n);
    let mut g_values = Vec::with_capacity(n);
    for h in 0..n {
        f_values.push(if h == l.top() { sd.clone() } else { sd_value(&*a.subgroup(h)?) });
        g_values.push(relative_sd(a, h)?);
    }
    for class in l.conjugacy_classes() {
        let h0 = class[0];
        if let Some(&bad) = class.iter().find(|&&h| f_values[h] != f_values[h0] || g_values[h] != g_values[h0]) {
            return Err(DegreeError::InvariantViolated(format!(
                "f or g differs on conjugate subgroups #{h0} and #{bad}"
            )));
        }
    }
    Ok(DegreeReport {
        sd_decimal: sd.to_decimal(10),
        sd,
        lattice_size: n,
        commuting_pairs,
        c_counts: c,
        f_image: image(&f_values),
        g_image: image(&g_values),
        f_values,
        g_values,
    })
}

/// `(|Im f|, |Im g|)`.
pub fn image_sizes(a: &Analysis) -> Result<(usize, usize), DegreeError> {
    let r = sd(a)?;
    Ok((r.f_image.len(), r.g_image.len()))
}

fn check_family_hypothesis(p: u64, q: u64, n: u32) -> Result<(), DegreeError> {
    if !is_prime(p) || !is_prime(q) {
        return Err(DegreeError::HypothesisViolated(format!("p = {p} and q = {q} must be prime")));
    }
    if p % q != 1 {
        return Err(DegreeError::HypothesisViolated(format!("p = {p} is not 1 mod q = {q}")));
    }
    if n == 0 {
        return Err(DegreeError::HypothesisViolated("n must be at least 1".into()));
    }
    Ok(())
}

/// `1 - (p^2 - p) / (2n + 1 + p)^2`.
pub fn family_closed_form(p: u64, q: u64, n: u32) -> Result<ExactRational, DegreeError> {
    check_family_hypothesis(p, q, n)?;
    let size = 2 * n as u64 + 1 + p;
    Ok(&ExactRational::one() - &ExactRational::ratio(p * p - p, size * size))
}

/// `Σ |C(H)|` predicted for a lattice of `size` subgroups with exactly `p`
/// non-normal ones forming one conjugacy class: `(size - p) size + p (size - p + 1)`.
pub fn c_count_decomposition(size: u64, p: u64) -> u64 {
    (size - p) * size + p * (size - p + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyParams {
    pub p: u64,
    pub q: u64,
    pub t: ActionExponent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyRow {
    pub n: u32,
    pub order: u64,
    pub t: u64,
    pub lattice_size: usize,
    pub sd_bruteforce: ExactRational,
    pub sd_closed_form: ExactRational,
    pub gap_to_1: ExactRational,
}

fn family_row(params: &FamilyParams, n: u32, caps: &Caps) -> Result<FamilyRow, DegreeError> {
    let fail = |detail: String| DegreeError::FamilyAssertion { n, detail };
    let FamilyParams { p, q, t } = *params;
    let mp = match t {
        ActionExponent::Value(t) => MetacyclicParams::new(p, q, n, t)?,
        ActionExponent::Auto(_) => MetacyclicParams::auto(p, q, n)?,
    };
    let a = Analysis::new(metacyclic(&mp, caps)?, caps)?;
    let l = a.lattice();
    let report = classify(&a)?;
    if !report.in_class_c {
        return Err(fail("group is not in class C".into()));
    }
    let size = l.len();
    let expected_size = 2 * n as usize + 1 + p as usize;
    if size != expected_size {
        return Err(fail(format!("|L(G)| = {size}, expected 2n+1+p = {expected_size}")));
    }

    let non_normal: Vec<usize> = (0..size).filter(|&i| !l.is_normal(i)).collect();
    let sylow_q = l.sylow_subgroups(q);
    if non_normal != sylow_q || non_normal.len() != p as usize || l.conjugacy_class(non_normal[0]) != non_normal {
        return Err(fail(format!("non-normal subgroups {non_normal:?} are not the {p} conjugates of Q {sylow_q:?}")));
    }

    let c = c_counts(&a);
    for (h, &count) in c.iter().enumerate() {
        let expected = if l.is_normal(h) { size } else { size - p as usize + 1 };
        if count != expected as u64 {
            return Err(fail(format!("|C(#{h})| = {count}, expected {expected}")));
        }
    }
    let total: u64 = c.iter().sum();
    if total != c_count_decomposition(size as u64, p) {
        return Err(fail(format!("sum of |C(H)| = {total} does not match the decomposition")));
    }

    let sd_bruteforce = sd_value(&a);
    let sd_closed_form = family_closed_form(p, q, n)?;
    if sd_bruteforce != sd_closed_form {
        return Err(fail(format!("sd = {sd_bruteforce}, closed form = {sd_closed_form}")));
    }
    Ok(FamilyRow {
        n,
        order: mp.order(),
        t: mp.t(),
        lattice_size: size,
        gap_to_1: &ExactRational::one() - &sd_bruteforce,
        sd_bruteforce,
        sd_closed_form,
    })
}

/// Builds `G_1, ..., G_{n_max}` and checks every counting identity behind
/// the closed form on each of them.
pub fn family_report(params: &FamilyParams, n_max: u32, caps: &Caps) -> Result<Vec<FamilyRow>, DegreeError> {
    check_family_hypothesis(params.p, params.q, 1)?;
    let mut rows: Vec<FamilyRow> = Vec::new();
    for n in 1..=n_max {
        let row = family_row(params, n, caps)?;
        if let Some(prev) = rows.last() {
            if row.gap_to_1 >= prev.gap_to_1 {
                return Err(DegreeError::FamilyAssertion {
                    n,
                    detail: format!("gap {} is not below the previous gap {}", row.gap_to_1, prev.gap_to_1),
                });
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

pub const FAMILY_CSV_HEADER: &str = "n,lattice_size,sd_num,sd_den,sd_decimal,gap_to_1";

pub fn family_csv(rows: &[FamilyRow]) -> String {
    let mut out = String::from(FAMILY_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let s = &r.sd_bruteforce;
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n,
            r.lattice_size,
            s.numer(),
            s.denom(),
            s.to_decimal(10),
            r.gap_to_1
        ));
    }
    out
}
