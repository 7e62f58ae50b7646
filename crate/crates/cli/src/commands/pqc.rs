use clap::{Args, Subcommand};
use schur_core::coupling::TreeSpec;
use schur_core::pqc::{enumerate_labellings, pqc_state, spin_operator, PqcLabels, SpinKind};
use serde_json::json;

use super::{half_json, halves, scalar_json, scalar_text};
use crate::error::CliResult;
use crate::inputs::{half, half_list, PqcSource};
use crate::report::Report;

#[derive(Debug, Subcommand)]
pub enum PqcCommand {
    /// All labellings (j_1, ..., j_{n-1} = J, M) in canonical order.
    Enumerate(SourceArgs),
    /// The state with the given labels.
    State(StateArgs),
    /// Check that the subset S^2 operators and the total Z commute pairwise.
    CheckClaim1(SourceArgs),
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    #[command(flatten)]
    pub source: PqcSource,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub source: PqcSource,
    /// j-labels of the vertices v_1, ..., v_{n-1}, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub js: String,
    /// Total M.
    #[arg(long, allow_hyphen_values = true)]
    pub m: String,
    /// Print the coupling tree description instead of amplitudes.
    #[arg(long)]
    pub emit_tree: bool,
}

pub fn run(c: &PqcCommand) -> CliResult<Report> {
    match c {
        PqcCommand::Enumerate(a) => {
            let tree = a.source.load()?;
            let labels = enumerate_labellings(&tree);
            let doc = json!({
                "tree": tree,
                "labellings": labels.iter().map(|l| json!({ "js": half_json(&l.js), "m": l.m.to_string() })).collect::<Vec<_>>(),
            });
            let mut r = Report::new(doc, &["index", "js", "J", "M"]);
            r.note(format!("{tree}: {} labellings", labels.len()));
            for (k, l) in labels.iter().enumerate() {
                r.row(vec![k.to_string(), halves(&l.js), l.total_j().to_string(), l.m.to_string()]);
            }
            Ok(r)
        }
        PqcCommand::State(a) => {
            let tree = a.source.load()?;
            let labels = PqcLabels { js: half_list(&a.js)?, m: half(&a.m)? };
            let state = pqc_state(&tree, &labels)?;
            if a.emit_tree {
                let spec = TreeSpec::from_tree(&state)?;
                let mut r = Report::new(serde_json::to_value(&spec).expect("tree serializes"), &[]);
                r.note(serde_json::to_string(&spec).expect("tree serializes"));
                return Ok(r);
            }
            let dense = state.dense_state()?;
            let mut entries = vec![];
            let mut r = Report::new(json!(null), &["index", "bits", "amplitude", "re", "im"]);
            r.note(format!("{tree} with labels {labels}"));
            for (i, z) in dense.iter().enumerate() {
                if z.norm_sqr() == 0.0 {
                    continue;
                }
                let x = state.string_of(i);
                let amp = state.amplitude(&x)?;
                let bits: String = x.iter().map(|m| if m.doubled() > 0 { '1' } else { '0' }).collect();
                let mut e = scalar_json(&amp);
                e["index"] = json!(i);
                e["bits"] = json!(bits);
                entries.push(e);
                r.row(vec![i.to_string(), bits, scalar_text(&amp), z.re.to_string(), z.im.to_string()]);
            }
            r.json =
                json!({ "tree": tree, "js": half_json(&labels.js), "m": labels.m.to_string(), "amplitudes": entries });
            Ok(r)
        }
        PqcCommand::CheckClaim1(a) => {
            let tree = a.source.load()?;
            let n = tree.n();
            let mut ops = vec![];
            for s in tree.subsets() {
                ops.push((format!("S2{s:?}"), spin_operator(s, SpinKind::Total, n)?));
            }
            let all: Vec<usize> = (1..=n).collect();
            ops.push((format!("Z{all:?}"), spin_operator(&all, SpinKind::Z, n)?));
            let mut pairs = vec![];
            let mut r = Report::new(json!(null), &["a", "b", "commute"]);
            for i in 0..ops.len() {
                for k in i + 1..ops.len() {
                    let ok = ops[i].1.commutes_with(&ops[k].1);
                    pairs.push(json!({ "a": ops[i].0, "b": ops[k].0, "commute": ok }));
                    r.row(vec![ops[i].0.clone(), ops[k].0.clone(), ok.to_string()]);
                }
            }
            let all_commute = pairs.iter().all(|p| p["commute"] == json!(true));
            r.note(format!("{tree}: all pairs commute = {all_commute}"));
            r.json = json!({ "tree": tree, "all_commute": all_commute, "pairs": pairs });
            Ok(r)
        }
    }
}
