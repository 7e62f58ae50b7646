use std::path::{Path, PathBuf};

use clap::Args;
use schur_core::coupling::{CouplingTree, TreeSpec};
use schur_core::pqc::{balanced_tree, schur_tree, PqcTree};
use schur_core::HalfInt;
use serde::de::DeserializeOwned;

use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })
}

pub fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> CliResult<T> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::parse(format!("{what} {}", path.display()), e))
}

pub fn coupling_tree(path: &Path) -> CliResult<CouplingTree> {
    let spec: TreeSpec = read_json(path, "tree file")?;
    Ok(spec.build()?)
}

pub fn half(s: &str) -> CliResult<HalfInt> {
    Ok(s.parse::<HalfInt>()?)
}

/// Comma- or space-separated half-integers.
pub fn half_list(s: &str) -> CliResult<Vec<HalfInt>> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(half).collect()
}

pub fn int_list<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<Vec<T>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::parse(what, format!("`{t}` is not an integer"))))
        .collect()
}

/// A bit string such as `0110`; qubit 1 first.
pub fn bits(s: &str) -> CliResult<Vec<bool>> {
    s.chars()
        .filter(|c| !matches!(c, '_' | ' '))
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(CliError::parse("bit string", format!("`{s}` contains `{c}`"))),
        })
        .collect()
}

pub fn bit_string(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Basis string for a coupling tree: either m-values (`1/2,-1/2`) or, for all-qubit trees, bits
/// with 1 meaning m = +1/2.
pub fn basis_string(tree: &CouplingTree, s: &str) -> CliResult<Vec<HalfInt>> {
    let all_qubits = tree.leaves().iter().all(|l| l.j == HalfInt::HALF);
    if all_qubits && !s.is_empty() && s.chars().all(|c| c == '0' || c == '1') {
        let b = bits(s)?;
        return Ok(b.into_iter().map(|u| if u { HalfInt::HALF } else { -HalfInt::HALF }).collect());
    }
    half_list(s)
}

/// Where a PQC tree comes from.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct PqcSource {
    /// PQC tree file: {"n": 5, "subsets": [[1,2],[1,2,3],[4,5],[1,2,3,4,5]]}.
    #[arg(long)]
    pub tree: Option<PathBuf>,
    /// The sequential (Schur) tree on this many qubits.
    #[arg(long)]
    pub schur: Option<usize>,
    /// The balanced tree on this many qubits.
    #[arg(long)]
    pub balanced: Option<usize>,
}

impl PqcSource {
    pub fn load(&self) -> CliResult<PqcTree> {
        match (&self.tree, self.schur, self.balanced) {
            (Some(p), _, _) => read_json(p, "PQC tree file"),
            (_, Some(n), _) => Ok(schur_tree(n)?),
            (_, _, Some(n)) => Ok(balanced_tree(n)?),
            _ => Err(CliError::Usage("one of --tree, --schur, --balanced is required".into())),
        }
    }
}
