//! Run configuration: an optional TOML file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

/// Keys accepted in a `--config` file. Every key is optional; a flag given
/// on the command line wins over the file.
///
/// ```toml
/// group = "free_product(abelian(2),free(1))"
/// radii = "2..8"
/// seed = 7
/// samples = 100000
/// ```
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub group: Option<String>,
    #[serde(alias = "n")]
    pub radii: Option<String>,
    pub rho: Option<f64>,
    #[serde(alias = "bigR", alias = "R")]
    pub big_r: Option<String>,
    pub t: Option<f64>,
    pub pairs: Option<u128>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Parses radius lists: `5`, `1..6` (inclusive), `2,4,8`, or a mix such as
/// `1..3,10`.
pub fn parse_list(text: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b): (u32, u32) = (
                    a.trim().parse().with_context(|| format!("bad range start in {part:?}"))?,
                    b.trim().trim_start_matches('=').parse().with_context(|| format!("bad range end in {part:?}"))?,
                );
                if a > b {
                    bail!("empty range {part:?}");
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().with_context(|| format!("bad radius {part:?}"))?),
        }
    }
    if out.is_empty() {
        bail!("no radii in {text:?}");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_lists() {
        assert_eq!(parse_list("1..6").unwrap(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(parse_list("1..=3, 10").unwrap(), vec![1, 2, 3, 10]);
        assert_eq!(parse_list("0").unwrap(), vec![0]);
        assert!(parse_list("").is_err());
        assert!(parse_list("5..2").is_err());
        assert!(parse_list("x").is_err());
    }

    #[test]
    fn file_keys() {
        let c: FileConfig = toml::from_str("group = \"free(2)\"\nn = \"1..4\"\nbigR = \"2,3\"\nseed = 3").unwrap();
        assert_eq!(c.group.as_deref(), Some("free(2)"));
        assert_eq!(c.radii.as_deref(), Some("1..4"));
        assert_eq!(c.big_r.as_deref(), Some("2,3"));
        assert_eq!(c.seed, Some(3));
        assert!(toml::from_str::<FileConfig>("colour = 1").is_err());
    }
}
