use std::path::PathBuf;

use clap::{Args, Subcommand};
use schur_core::circuit::{
    clifford_t_estimate, gate_counts, qubit_count_modified, qubit_count_original, synth_pqc, synth_schur,
    synth_schur_log_ancilla, synth_state_prep, CircuitPlan, Step,
};
use schur_core::sim::run_basis;
use serde_json::json;

use super::complex_json;
use crate::error::{CliError, CliResult};
use crate::inputs::{coupling_tree, read_text, PqcSource};
use crate::report::Report;

#[derive(Debug, Subcommand)]
pub enum SynthCommand {
    /// Schur transform on n qubits.
    Schur(SchurArgs),
    /// PQC unitary for a tree.
    Pqc(PqcArgs),
    /// Preparation circuit for one coupled state.
    Prep(PrepArgs),
}

#[derive(Debug, Args)]
pub struct SchurArgs {
    #[arg(long)]
    pub n: usize,
    /// Use the premap with Yamanouchi-compressed label registers.
    #[arg(long)]
    pub log_ancilla: bool,
}

#[derive(Debug, Args)]
pub struct PqcArgs {
    #[command(flatten)]
    pub source: PqcSource,
}

#[derive(Debug, Args)]
pub struct PrepArgs {
    /// Coupling tree file describing the state.
    #[arg(long)]
    pub tree: PathBuf,
}

fn plan_report(plan: &CircuitPlan) -> CliResult<Report> {
    let peak = plan.peak_qubits()?;
    let mut r = Report::new(plan.to_json_value(), &["step", "kind", "label", "registers", "dim", "nonzeros"]);
    r.note(format!("{}: {} steps, peak {peak} qubits", plan.name, plan.steps.len()));
    let name = |id: usize| plan.register(id).name.clone();
    for (k, s) in plan.steps.iter().enumerate() {
        let row = match s {
            Step::Alloc(id) => vec!["alloc".into(), String::new(), name(*id), String::new(), String::new()],
            Step::Release(id) => vec!["release".into(), String::new(), name(*id), String::new(), String::new()],
            Step::Unitary(u) => {
                let regs: Vec<String> = u.inputs.iter().map(|&i| name(i)).collect();
                let outs: Vec<String> = u.outputs.iter().map(|&i| name(i)).collect();
                vec![
                    "unitary".into(),
                    u.label.clone(),
                    format!("{} -> {}", regs.join(","), outs.join(",")),
                    u.matrix.dim().to_string(),
                    u.matrix.nnz().to_string(),
                ]
            }
        };
        r.row(std::iter::once(k.to_string()).chain(row).collect());
    }
    Ok(r)
}

pub fn synth(c: &SynthCommand) -> CliResult<Report> {
    let plan = match c {
        SynthCommand::Schur(a) if a.log_ancilla => synth_schur_log_ancilla(a.n)?,
        SynthCommand::Schur(a) => synth_schur(a.n)?,
        SynthCommand::Pqc(a) => synth_pqc(&a.source.load()?)?,
        SynthCommand::Prep(a) => synth_state_prep(&coupling_tree(&a.tree)?)?,
    };
    plan_report(&plan)
}

fn load_plan(path: &std::path::Path) -> CliResult<CircuitPlan> {
    Ok(CircuitPlan::from_json(&read_text(path)?)?)
}

#[derive(Debug, Args)]
pub struct CountsArgs {
    /// Plan file written by `synth`.
    pub plan: PathBuf,
    /// Target total error for the Clifford+T length estimate.
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
}

pub fn counts(a: &CountsArgs) -> CliResult<Report> {
    if !(a.eps > 0.0 && a.eps < 1.0) {
        return Err(CliError::Usage("--eps must lie in (0, 1)".into()));
    }
    let plan = load_plan(&a.plan)?;
    let peak = plan.peak_qubits()?;
    let counts = gate_counts(&plan)?;
    let total = counts.total();
    let estimate = clifford_t_estimate(total as u64, peak as u64, a.eps);
    let doc = json!({
        "plan": plan.name,
        "peak_qubits": peak,
        "two_level_total": total,
        "max_reconstruction_error": counts.max_reconstruction_error(),
        "bound_violations": counts.bound_violations().count(),
        "clifford_t_estimate": estimate,
        "eps": a.eps,
        "steps": counts.steps,
    });
    let mut r = Report::new(doc, &["label", "dim", "two_level", "diagonal_bound", "reconstruction_error"]);
    r.note(format!("{}: {total} two-level rotations, peak {peak} qubits, Clifford+T estimate {estimate}", plan.name));
    for s in &counts.steps {
        r.row(vec![
            s.label.clone(),
            s.dim.to_string(),
            s.two_level.to_string(),
            s.diagonal_bound.to_string(),
            format!("{:.3e}", s.reconstruction_error),
        ]);
    }
    Ok(r)
}

#[derive(Debug, Args)]
pub struct QubitTableArgs {
    #[arg(long, default_value_t = 4)]
    pub min_n: usize,
    #[arg(long, default_value_t = 15)]
    pub max_n: usize,
    /// Also synthesize both plans and report their measured peaks.
    #[arg(long)]
    pub measured: bool,
}

pub fn qubit_table(a: &QubitTableArgs) -> CliResult<Report> {
    if a.min_n < 3 || a.min_n > a.max_n {
        return Err(CliError::Usage("need 3 <= --min-n <= --max-n".into()));
    }
    let mut headers = vec!["n", "original", "modified"];
    if a.measured {
        headers.extend(["measured_original", "measured_modified"]);
    }
    let mut r = Report::new(json!(null), &headers);
    let mut rows = vec![];
    for n in a.min_n..=a.max_n {
        let (o, m) = (qubit_count_original(n), qubit_count_modified(n));
        let mut row = json!({ "n": n, "original": o, "modified": m });
        let mut cells = vec![n.to_string(), o.to_string(), m.to_string()];
        if a.measured {
            let mo = synth_schur(n)?.peak_qubits()?;
            let mm = synth_schur_log_ancilla(n)?.peak_qubits()?;
            row["measured_original"] = json!(mo);
            row["measured_modified"] = json!(mm);
            cells.extend([mo.to_string(), mm.to_string()]);
        }
        rows.push(row);
        r.row(cells);
    }
    r.json = json!(rows);
    Ok(r)
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Plan file written by `synth`.
    pub plan: PathBuf,
    /// Basis input: an index, or a bit string covering all input registers.
    #[arg(long)]
    pub input: String,
}

fn input_index(plan: &CircuitPlan, s: &str) -> CliResult<usize> {
    let width = plan.width(&plan.inputs) as usize;
    let bad = || CliError::parse("input", format!("`{s}` is neither an index nor a {width}-bit string"));
    if s.len() == width && s.chars().all(|c| c == '0' || c == '1') {
        return usize::from_str_radix(s, 2).map_err(|_| bad());
    }
    s.parse().map_err(|_| bad())
}

pub fn simulate(a: &SimulateArgs) -> CliResult<Report> {
    let plan = load_plan(&a.plan)?;
    let index = input_index(&plan, &a.input)?;
    let dense = run_basis(&plan, index)?.to_dense(&plan)?;
    let regs: Vec<_> = plan.outputs.iter().map(|&r| plan.register(r)).collect();
    let mut entries = vec![];
    let mut r = Report::new(json!(null), &["index", "registers", "re", "im"]);
    r.note(format!("{} on input {index}", plan.name));
    for (i, z) in dense.iter().enumerate() {
        if z.norm_sqr() < 1e-24 {
            continue;
        }
        let mut rest = i;
        let mut values = vec![String::new(); regs.len()];
        for (slot, reg) in values.iter_mut().zip(&regs).rev() {
            let k = reg.values.len();
            *slot = format!("{}={}", reg.name, reg.values[rest % k]);
            rest /= k;
        }
        entries.push(json!({ "index": i, "registers": values, "amplitude": complex_json(*z) }));
        r.row(vec![i.to_string(), values.join(" "), z.re.to_string(), z.im.to_string()]);
    }
    r.json = json!({
        "plan": plan.name,
        "input": index,
        "outputs": regs.iter().map(|g| g.name.clone()).collect::<Vec<_>>(),
        "amplitudes": entries,
    });
    Ok(r)
}
