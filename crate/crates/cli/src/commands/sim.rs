use clap::{Args, ValueEnum};
use schur_core::sim::{block_structure, Family};
use serde_json::json;

use super::halves;
use crate::error::{CliError, CliResult};
use crate::inputs::{int_list, PqcSource};
use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Qubit permutations.
    #[value(name = "P")]
    P,
    /// Local unitaries u on every qubit.
    #[value(name = "Q")]
    Q,
    /// Permutations of the qubits named by --subset.
    Subgroup,
}

#[derive(Debug, Args)]
pub struct BlocksArgs {
    #[command(flatten)]
    pub source: PqcSource,
    #[arg(long, value_enum, ignore_case = true)]
    pub family: FamilyArg,
    /// Qubits permuted by the subgroup family, e.g. 1,2,3,4.
    #[arg(long)]
    pub subset: Option<String>,
}

pub fn blocks(a: &BlocksArgs) -> CliResult<Report> {
    let tree = a.source.load()?;
    let family = match (a.family, &a.subset) {
        (FamilyArg::P, None) => Family::Permutations,
        (FamilyArg::Q, None) => Family::Local,
        (FamilyArg::Subgroup, Some(s)) => Family::Subgroup(int_list(s, "subset")?),
        (FamilyArg::Subgroup, None) => return Err(CliError::Usage("--family subgroup needs --subset".into())),
        (_, Some(_)) => return Err(CliError::Usage("--subset only applies to --family subgroup".into())),
    };
    let s = block_structure(&tree, &family)?;
    let census = s.census();
    let blocks: Vec<_> = s
        .blocks
        .iter()
        .map(|b| {
            let l = &s.labels[b[0]];
            json!({ "size": b.len(), "J": l.total_j().to_string(), "indices": b })
        })
        .collect();
    let mut r = Report::new(
        json!({ "tree": tree, "family": format!("{family:?}"), "census": census, "blocks": blocks }),
        &["block", "size", "J", "first_labels"],
    );
    let summary: Vec<String> = census.iter().rev().map(|(size, count)| format!("{count} of size {size}")).collect();
    r.note(format!("{tree}, {family:?}: {}", summary.join(", ")));
    for (k, b) in s.blocks.iter().enumerate() {
        let l = &s.labels[b[0]];
        r.row(vec![k.to_string(), b.len().to_string(), l.total_j().to_string(), format!("{};{}", halves(&l.js), l.m)]);
    }
    Ok(r)
}
