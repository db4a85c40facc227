//! Weyl scenario files.
//!
//! A scenario names a progression, an orbit and the checks its closure must
//! pass. The orbit is either a standard Weyl system (`s`, `a0`, `base`) or an
//! explicit polynomial sequence `g_0, …, g_d` given by `sequence`. Expressions
//! may refer to entries of `[params]` by name.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use polyprog::weyl::{Dependency, PolySequence, SymReal, WeylSystem};

use crate::parse::{parse_progression, ProgressionExpr};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Checks {
    /// Expected dimension of `G̃`.
    pub dim: Option<usize>,
    pub gp_dim: Option<usize>,
    /// `G̃ = G^P`.
    pub equals_gp: Option<bool>,
    /// Expected size of the translate group.
    pub cosets: Option<usize>,
    /// Every sampled orbit tuple lies this close to the closure.
    pub max_distance: Option<f64>,
    /// Bound on `|average|` for characters not vanishing on `G̃`.
    pub max_nonannihilating: Option<f64>,
    /// Bound on `| |average| - predicted |` for characters vanishing on `G̃`.
    pub annihilating_tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DependencySpec {
    /// `lhs = rhs` with a rational right-hand side.
    pub relation: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub progression: String,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default = "default_radius")]
    pub radius: i64,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    pub s: Option<usize>,
    pub a0: Option<String>,
    pub base: Option<Vec<String>>,
    /// Rows `g_0, …, g_d` of an explicit sequence.
    pub sequence: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub dependencies: Vec<DependencySpec>,
    #[serde(default)]
    pub checks: Checks,
}

fn default_radius() -> i64 {
    3
}

/// A resolved scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub progression: ProgressionExpr,
    pub sequence: PolySequence,
    pub dependencies: Vec<Dependency>,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading scenario {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("scenario {}", path.display()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text)?;
        Self::resolve(file)
    }

    pub fn resolve(file: ScenarioFile) -> Result<Self> {
        if file.n == 0 {
            bail!("N must be positive");
        }
        if file.radius < 0 {
            bail!("radius must be nonnegative");
        }
        let progression = parse_progression(&file.progression)?;
        let sym = |e: &str| -> Result<SymReal> {
            let text = substitute(e, &file.params)?;
            SymReal::parse(&text).map_err(|err| anyhow!("{:?}: {}", e, err))
        };
        let sequence = match (&file.sequence, &file.a0) {
            (Some(_), Some(_)) => bail!("give either `sequence` or `a0`, not both"),
            (Some(rows), None) => {
                let coeffs = rows.iter().map(|r| r.iter().map(|e| sym(e)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
                PolySequence::new(coeffs)?
            }
            (None, Some(a0)) => {
                let s = file.s.ok_or_else(|| anyhow!("a standard system needs `s`"))?;
                let base = match &file.base {
                    Some(b) if b.len() == s => b.iter().map(|e| sym(e)).collect::<Result<Vec<_>>>()?,
                    Some(b) => bail!("base has {} entries, expected s = {}", b.len(), s),
                    None => vec![SymReal::zero(); s],
                };
                WeylSystem::new(sym(a0)?, base)?.sequence().clone()
            }
            (None, None) => bail!("missing orbit: give `sequence` or `a0`"),
        };
        let dependencies = file
            .dependencies
            .iter()
            .map(|d| {
                let (lhs, rhs) = d.relation.split_once('=').ok_or_else(|| anyhow!("dependency {:?} lacks '='", d.relation))?;
                let rhs = sym(rhs)?;
                if !rhs.is_rational() {
                    bail!("dependency {:?}: right-hand side must be rational", d.relation);
                }
                Ok(Dependency { text: d.relation.clone(), lhs: sym(lhs)?, rhs: rhs.rational_part().clone() })
            })
            .collect::<Result<_>>()?;
        Ok(Self { file, progression, sequence, dependencies })
    }
}

/// Replaces identifiers naming parameters with their parenthesised definitions.
fn substitute(expr: &str, params: &BTreeMap<String, String>) -> Result<String> {
    fn go(expr: &str, params: &BTreeMap<String, String>, depth: usize) -> Result<String> {
        if depth > params.len() {
            bail!("parameters refer to each other cyclically");
        }
        let mut out = String::new();
        let mut chars = expr.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            if c.is_ascii_alphabetic() || c == '_' {
                let mut end = i + c.len_utf8();
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        end = j + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let ident = &expr[i..end];
                match params.get(ident) {
                    Some(def) => {
                        out.push('(');
                        out.push_str(&go(def, params, depth + 1)?);
                        out.push(')');
                    }
                    None => out.push_str(ident),
                }
            } else {
                out.push(c);
            }
        }
        Ok(out)
    }
    go(expr, params, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DEPENDENT: &str = r#"
        name = "dep"
        progression = "x, x+y, x+2y, x+y^2"
        N = 50
        params = { a = "sqrt(2)", b = "a + 1/3" }
        sequence = [["0", "0"], ["a", "0"], ["0", "b"]]
        dependencies = [{ relation = "b - a = 1/3" }]
    "#;

    #[test]
    fn resolves_parameters() {
        let s = Scenario::from_toml(DEPENDENT).unwrap();
        assert_eq!(s.sequence.coeffs()[2][1], &SymReal::sqrt(2) + &SymReal::parse("1/3").unwrap());
        assert_eq!(s.dependencies.len(), 1);
        assert!(s.dependencies[0].lhs.is_rational());
    }

    #[test]
    fn standard_system() {
        let s = Scenario::from_toml("name = \"w\"\nprogression = \"x, x+y\"\nN = 5\ns = 2\na0 = \"sqrt(2)\"").unwrap();
        assert_eq!(s.sequence.dim(), 2);
        assert!(Scenario::from_toml("name = \"w\"\nprogression = \"x, x+y\"\nN = 5\na0 = \"sqrt(2)\"").is_err());
        assert!(Scenario::from_toml("name = \"w\"\nprogression = \"x, x+y\"\nN = 5").is_err());
    }

    #[test]
    fn cyclic_parameters_rejected() {
        let p: BTreeMap<String, String> = [("a".into(), "b".into()), ("b".into(), "a".into())].into();
        assert!(substitute("a", &p).is_err());
        assert_eq!(substitute("sqrt(2) + phi", &p).unwrap(), "sqrt(2) + phi");
    }
}
