//! The JSON group file format.
//!
//! ```json
//! {"kind":"cayley","table":[[0,1],[1,0]]}
//! {"kind":"perm","degree":3,"generators":[[1,0,2],[1,2,0]]}
//! {"kind":"named","name":"A_4"}
//! {"kind":"cyclic","n":12}
//! {"kind":"product","factors":[{"kind":"named","name":"S_3"},{"kind":"cyclic","n":5}]}
//! {"kind":"metacyclic","p":3,"q":2,"n":2,"t":"auto"}
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::caps::Caps;
use crate::group::{
    cyclic, direct_product, from_cayley_table, from_permutations, metacyclic, GroupError, GroupTable, MetacyclicParams,
    Permutation,
};
use crate::named::named;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed group spec: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionExponent {
    Value(u64),
    Auto(AutoTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

impl ActionExponent {
    pub const AUTO: ActionExponent = ActionExponent::Auto(AutoTag::Auto);
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupSpec {
    Cayley { table: Vec<Vec<usize>> },
    Perm { degree: usize, generators: Vec<Vec<usize>> },
    Named { name: String },
    Cyclic { n: usize },
    Product { factors: Vec<GroupSpec> },
    Metacyclic { p: u64, q: u64, n: u32, t: ActionExponent },
}

impl GroupSpec {
    pub fn parse(json: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, SpecError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| SpecError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("group specs always serialize")
    }

    pub fn build(&self, caps: &Caps) -> Result<GroupTable, SpecError> {
        let g = match self {
            GroupSpec::Cayley { table } => {
                if table.len() > caps.order {
                    return Err(GroupError::OrderCapExceeded { order: table.len(), cap: caps.order }.into());
                }
                from_cayley_table(table)?
            }
            GroupSpec::Perm { degree, generators } => {
                let gens =
                    generators.iter().map(|images| Permutation::new(images.clone())).collect::<Result<Vec<_>, _>>()?;
                from_permutations(*degree, &gens, caps)?
            }
            GroupSpec::Named { name } => named(name)?,
            GroupSpec::Cyclic { n } => {
                if *n == 0 {
                    return Err(GroupError::InvalidParams("cyclic order must be positive".into()).into());
                }
                if *n > caps.order {
                    return Err(GroupError::OrderCapExceeded { order: *n, cap: caps.order }.into());
                }
                cyclic(*n)
            }
            GroupSpec::Product { factors } => {
                let mut acc = cyclic(1).with_name("trivial");
                for (i, f) in factors.iter().enumerate() {
                    let next = f.build(caps)?;
                    acc = if i == 0 { next } else { direct_product(&acc, &next, caps)? };
                }
                acc
            }
            GroupSpec::Metacyclic { p, q, n, t } => {
                let params = match t {
                    ActionExponent::Value(t) => MetacyclicParams::new(*p, *q, *n, *t)?,
                    ActionExponent::Auto(_) => MetacyclicParams::auto(*p, *q, *n)?,
                };
                metacyclic(&params, caps)?
            }
        };
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        let caps = Caps::default();
        let cases = [
            (r#"{"kind":"cayley","table":[[0,1],[1,0]]}"#, 2),
            (r#"{"kind":"perm","degree":3,"generators":[[1,0,2],[1,2,0]]}"#, 6),
            (r#"{"kind":"named","name":"A_4"}"#, 12),
            (r#"{"kind":"cyclic","n":12}"#, 12),
            (r#"{"kind":"product","factors":[{"kind":"named","name":"S_3"},{"kind":"cyclic","n":5}]}"#, 30),
            (r#"{"kind":"metacyclic","p":3,"q":2,"n":2,"t":"auto"}"#, 12),
            (r#"{"kind":"metacyclic","p":7,"q":3,"n":1,"t":2}"#, 21),
            (r#"{"kind":"product","factors":[]}"#, 1),
        ];
        for (json, order) in cases {
            let spec = GroupSpec::parse(json).unwrap();
            assert_eq!(spec.build(&caps).unwrap().order(), order, "{json}");
            assert_eq!(GroupSpec::parse(&spec.to_json()).unwrap(), spec);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        let caps = Caps::default();
        assert!(matches!(GroupSpec::parse(r#"{"kind":"blob"}"#), Err(SpecError::Json(_))));
        assert!(matches!(
            GroupSpec::parse(r#"{"kind":"metacyclic","p":3,"q":2,"n":1,"t":"least"}"#),
            Err(SpecError::Json(_))
        ));
        let bad_t = GroupSpec::parse(r#"{"kind":"metacyclic","p":5,"q":2,"n":1,"t":2}"#).unwrap();
        assert!(matches!(bad_t.build(&caps), Err(SpecError::Group(GroupError::InvalidAction { .. }))));
        let big = GroupSpec::Cyclic { n: 50 };
        assert!(matches!(
            big.build(&Caps { order: 10, ..caps }),
            Err(SpecError::Group(GroupError::OrderCapExceeded { .. }))
        ));
    }
}
