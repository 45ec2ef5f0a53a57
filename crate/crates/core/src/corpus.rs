//! Corpus manifests and theorem verification over them.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::Analysis;
use crate::arith::factorize;
use crate::caps::Caps;
use crate::classify::{
    classify, is_minimal_non, is_minimal_non_exhaustive, is_modular_element, is_permutable_subgroup,
    product_is_subgroup, ClassificationReport, Predicate,
};
use crate::degrees::{sd, DegreeError};
use crate::spec::{GroupSpec, SpecError};

/// The corpus shipped with the crate.
pub const BUNDLED_MANIFEST: &str = include_str!("../corpus/manifest.json");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read manifest {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed manifest: {0}")]
    Json(#[from] serde_json::Error),
    #[error("duplicate corpus label {0:?}")]
    DuplicateLabel(String),
    #[error("entry {0:?} must give exactly one of \"spec\" or \"file\"")]
    BadEntry(String),
    #[error("unknown theorem id {0:?}")]
    UnknownTheorem(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<GroupSpec>,
    /// Path of a group file, relative to the manifest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(default)]
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusManifest {
    pub entries: Vec<CorpusEntry>,
    #[serde(skip)]
    base_dir: Option<std::path::PathBuf>,
}

impl CorpusManifest {
    pub fn parse(json: &str) -> Result<Self, CorpusError> {
        let m: CorpusManifest = serde_json::from_str(json)?;
        let mut seen = HashSet::new();
        for e in &m.entries {
            if !seen.insert(e.label.as_str()) {
                return Err(CorpusError::DuplicateLabel(e.label.clone()));
            }
            if e.spec.is_some() == e.file.is_some() {
                return Err(CorpusError::BadEntry(e.label.clone()));
            }
        }
        Ok(m)
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_MANIFEST).expect("bundled manifest is valid")
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, CorpusError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| CorpusError::Io { path: path.display().to_string(), source })?;
        let mut m = Self::parse(&text)?;
        m.base_dir = path.parent().map(Path::to_path_buf);
        Ok(m)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.label.as_str())
    }

    /// Resolves an entry to its group spec, loading `file` entries from disk.
    pub fn resolve(&self, entry: &CorpusEntry) -> Result<GroupSpec, SpecError> {
        match (&entry.spec, &entry.file) {
            (Some(s), _) => Ok(s.clone()),
            (None, Some(f)) => {
                let path = match &self.base_dir {
                    Some(d) => d.join(f),
                    None => f.into(),
                };
                GroupSpec::from_file(path)
            }
            (None, None) => unreachable!("validated at parse time"),
        }
    }
}

/// Checks run by [`verify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    /// Minimal non-Iwasawa by definition ⇔ minimal non-modular p-group or Schmidt with modular P.
    Theorem1,
    /// Minimal non-Iwasawa and modular ⇔ Schmidt with |P| = p.
    Corollary2,
    /// Class 𝒞 members are minimal non-cyclic.
    Corollary3,
    /// Structural properties of every detected Schmidt group.
    SchmidtStructure,
    /// Permutable subgroups are modular elements.
    PermutableModular,
    /// Iwasawa ⇔ nilpotent and modular.
    IwasawaNilpotentModular,
    /// sd(G) = 1 ⇔ Iwasawa.
    SdIwasawa,
    /// |Im f| = 1 ⇔ |Im g| = 1 ⇔ Iwasawa; minimal non-Iwasawa ⇒ |Im f| = 2.
    ImageSizes,
    /// f and g are constant on conjugacy classes of subgroups.
    ConjugacyConstant,
    /// Abelian, cyclic, nilpotent, modular and Iwasawa pass to subgroups.
    Heredity,
    /// n_p ≡ 1 (mod p) and n_p divides the p'-part of |G|.
    SylowCounts,
    /// HK = KH ⇔ HK is a subgroup.
    ProductSubgroup,
}

impl TheoremId {
    pub const ALL: [TheoremId; 12] = [
        TheoremId::Theorem1,
        TheoremId::Corollary2,
        TheoremId::Corollary3,
        TheoremId::SchmidtStructure,
        TheoremId::PermutableModular,
        TheoremId::IwasawaNilpotentModular,
        TheoremId::SdIwasawa,
        TheoremId::ImageSizes,
        TheoremId::ConjugacyConstant,
        TheoremId::Heredity,
        TheoremId::SylowCounts,
        TheoremId::ProductSubgroup,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Theorem1 => "theorem1",
            TheoremId::Corollary2 => "corollary2",
            TheoremId::Corollary3 => "corollary3",
            TheoremId::SchmidtStructure => "schmidt_structure",
            TheoremId::PermutableModular => "permutable_modular",
            TheoremId::IwasawaNilpotentModular => "iwasawa_nilpotent_modular",
            TheoremId::SdIwasawa => "sd_iwasawa",
            TheoremId::ImageSizes => "image_sizes",
            TheoremId::ConjugacyConstant => "conjugacy_constant",
            TheoremId::Heredity => "heredity",
            TheoremId::SylowCounts => "sylow_counts",
            TheoremId::ProductSubgroup => "product_subgroup",
        }
    }

    /// Parses `all` or a comma-separated list of ids.
    pub fn parse_list(s: &str) -> Result<Vec<TheoremId>, CorpusError> {
        if s.trim() == "all" {
            return Ok(Self::ALL.to_vec());
        }
        let mut ids = s.split(',').map(|p| p.trim().parse()).collect::<Result<Vec<_>, _>>()?;
        ids.sort();
        ids.dedup();
        Ok(ids)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = CorpusError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|t| t.as_str() == s).ok_or_else(|| CorpusError::UnknownTheorem(s.into()))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub label: String,
    pub theorem: String,
    pub witness: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerificationSummary {
    pub entries: usize,
    pub theorems: BTreeMap<String, Tally>,
    pub failures: Vec<Failure>,
}

impl VerificationSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    fn record(&mut self, label: &str, theorem: &str, outcome: Result<(), String>) {
        let tally = self.theorems.entry(theorem.to_string()).or_default();
        match outcome {
            Ok(()) => tally.passed += 1,
            Err(witness) => {
                tally.failed += 1;
                self.failures.push(Failure { label: label.into(), theorem: theorem.into(), witness });
            }
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn check(a: &Analysis, report: &Result<ClassificationReport, String>, theorem: TheoremId) -> Result<(), String> {
    let l = a.lattice();
    let err = |e: DegreeError| e.to_string();
    match theorem {
        TheoremId::Theorem1 | TheoremId::SchmidtStructure => report.as_ref().map(|_| ()).map_err(Clone::clone),
        TheoremId::Corollary2 => {
            let r = report.as_ref().map_err(Clone::clone)?;
            let criterion = r.schmidt.as_ref().is_some_and(|s| s.p_order as u64 == s.p);
            ensure(r.in_class_c == (r.is_minimal_non_iwasawa && r.is_modular) && r.in_class_c == criterion, || {
                format!("in_class_c = {}, Schmidt with |P| = p = {criterion}", r.in_class_c)
            })
        }
        TheoremId::Corollary3 => {
            let r = report.as_ref().map_err(Clone::clone)?;
            if !r.in_class_c {
                return Ok(());
            }
            let bad = l
                .maximal_subgroups()
                .into_iter()
                .find(|&m| a.subgroup(m).map(|s| !crate::lattice::is_cyclic(s.group())).unwrap_or(true));
            ensure(r.is_minimal_non_cyclic && bad.is_none(), || format!("maximal subgroup {bad:?} is not cyclic"))
        }
        TheoremId::PermutableModular => {
            let bad = (0..l.len()).find(|&h| is_permutable_subgroup(a, h) && !is_modular_element(l, h));
            ensure(bad.is_none(), || format!("subgroup #{} is permutable but not modular", bad.unwrap()))
        }
        TheoremId::IwasawaNilpotentModular => {
            let r = report.as_ref().map_err(Clone::clone)?;
            ensure(r.is_iwasawa == (r.is_nilpotent && r.is_modular), || {
                format!("iwasawa = {}, nilpotent = {}, modular = {}", r.is_iwasawa, r.is_nilpotent, r.is_modular)
            })
        }
        TheoremId::SdIwasawa => {
            let r = report.as_ref().map_err(Clone::clone)?;
            let s = crate::degrees::sd_value(a);
            ensure(s.is_one() == r.is_iwasawa, || format!("sd = {s}, iwasawa = {}", r.is_iwasawa))
        }
        TheoremId::ImageSizes => {
            let r = report.as_ref().map_err(Clone::clone)?;
            let d = sd(a).map_err(err)?;
            let (f, g) = (d.f_image.len(), d.g_image.len());
            ensure((f == 1) == r.is_iwasawa && (g == 1) == r.is_iwasawa, || {
                format!("|Im f| = {f}, |Im g| = {g}, iwasawa = {}", r.is_iwasawa)
            })?;
            ensure(!r.is_minimal_non_iwasawa || f == 2, || format!("minimal non-Iwasawa with |Im f| = {f}"))
        }
        TheoremId::ConjugacyConstant => sd(a).map(|_| ()).map_err(err),
        TheoremId::Heredity => {
            for pred in Predicate::ALL {
                let here = pred.holds(a);
                for h in 0..l.len() {
                    let sub = a.subgroup(h).map_err(|e| e.to_string())?;
                    if here && !pred.holds(&sub) {
                        return Err(format!("{pred:?} holds for G but not for subgroup #{h}"));
                    }
                }
                let fast = is_minimal_non(pred, a).map_err(|e| e.to_string())?;
                let slow = is_minimal_non_exhaustive(pred, a).map_err(|e| e.to_string())?;
                if fast != slow {
                    return Err(format!("minimal non-{pred:?}: maximal-only {fast}, exhaustive {slow}"));
                }
            }
            Ok(())
        }
        TheoremId::SylowCounts => {
            let order = a.group().order() as u64;
            for (p, e) in factorize(order) {
                let np = l.sylow_subgroups(p).len() as u64;
                let index = order / p.pow(e);
                if np % p != 1 % p || !index.is_multiple_of(np) {
                    return Err(format!("n_{p} = {np}"));
                }
            }
            Ok(())
        }
        TheoremId::ProductSubgroup => {
            for h in 0..l.len() {
                for k in 0..l.len() {
                    if a.permutes(h, k) != product_is_subgroup(l, h, k) {
                        return Err(format!("subgroups #{h}, #{k}"));
                    }
                }
            }
            Ok(())
        }
    }
}

/// Runs the selected checks on every entry. Entries that fail to build are
/// recorded under `parse` and skipped.
pub fn verify(manifest: &CorpusManifest, theorems: &[TheoremId], caps: &Caps) -> VerificationSummary {
    let mut summary = VerificationSummary { entries: manifest.entries.len(), ..Default::default() };
    for entry in &manifest.entries {
        let built = manifest
            .resolve(entry)
            .and_then(|spec| spec.build(caps))
            .map_err(|e| e.to_string())
            .and_then(|g| Analysis::new(g.with_name(entry.label.clone()), caps).map_err(|e| e.to_string()));
        let a = match built {
            Ok(a) => a,
            Err(e) => {
                summary.record(&entry.label, "parse", Err(e));
                continue;
            }
        };
        summary.record(&entry.label, "parse", Ok(()));
        let report = classify(&a).map_err(|e| e.to_string());
        for &t in theorems {
            summary.record(&entry.label, t.as_str(), check(&a, &report, t));
        }
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_manifest_parses() {
        let m = CorpusManifest::bundled();
        assert_eq!(m.entries.len(), 36);
        assert!(m.labels().any(|l| l == "QD16"));
    }

    #[test]
    fn manifest_validation() {
        let dup = r#"{"entries":[{"label":"a","spec":{"kind":"cyclic","n":2}},{"label":"a","spec":{"kind":"cyclic","n":3}}]}"#;
        assert!(matches!(CorpusManifest::parse(dup), Err(CorpusError::DuplicateLabel(_))));
        let neither = r#"{"entries":[{"label":"a"}]}"#;
        assert!(matches!(CorpusManifest::parse(neither), Err(CorpusError::BadEntry(_))));
        assert!(matches!(CorpusManifest::parse("[]"), Err(CorpusError::Json(_))));
    }

    #[test]
    fn theorem_lists() {
        assert_eq!(TheoremId::parse_list("all").unwrap().len(), TheoremId::ALL.len());
        assert_eq!(
            TheoremId::parse_list("corollary2, theorem1").unwrap(),
            vec![TheoremId::Theorem1, TheoremId::Corollary2]
        );
        assert!(matches!(TheoremId::parse_list("lemma9"), Err(CorpusError::UnknownTheorem(_))));
    }

    #[test]
    fn corrupted_entry_is_recorded_and_run_continues() {
        let json = r#"{"entries":[
            {"label":"S_3","spec":{"kind":"named","name":"S_3"}},
            {"label":"broken","spec":{"kind":"cayley","table":[[0,1],[1,1]]}},
            {"label":"Z_4","spec":{"kind":"cyclic","n":4}}
        ]}"#;
        let s = verify(&CorpusManifest::parse(json).unwrap(), &[TheoremId::Theorem1], &Caps::default());
        assert_eq!(s.failures.len(), 1);
        assert_eq!(s.failures[0].label, "broken");
        assert_eq!(s.failures[0].theorem, "parse");
        assert_eq!(s.theorems["theorem1"], Tally { passed: 2, failed: 0 });
        assert_eq!(s.exit_code(), 1);
    }
}
