use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Subcommand};
use nalgebra::Matrix2;
use num_complex::Complex64;
use schur_core::ct::{
    apply_basis_preserving, apply_one_qubit_gate, from_coupling_tree, hadamard, BasisPreservingOp, CtState,
    DEFAULT_COST_BUDGET,
};
use serde::Deserialize;
use serde_json::json;

use super::complex_json;
use crate::error::{CliError, CliResult};
use crate::inputs::{bit_string, bits, coupling_tree, read_json};
use crate::report::Report;
use crate::Ctx;

/// One entry of a gate file. Qubits are 1-based; qubit 1 is the leftmost bit.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum GateOp {
    H {
        qubit: usize,
    },
    X {
        qubit: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    /// Phases e^{i theta_y} indexed by the local value y of `qubits`.
    Phase {
        qubits: Vec<usize>,
        thetas: Vec<f64>,
    },
    /// Local value y of `qubits` goes to image[y].
    Permute {
        qubits: Vec<usize>,
        image: Vec<usize>,
    },
    /// Any one-qubit unitary as [[[re, im], [re, im]], [[re, im], [re, im]]].
    Gate {
        qubit: usize,
        matrix: [[[f64; 2]; 2]; 2],
    },
}

#[derive(Debug, Subcommand)]
pub enum CtCommand {
    /// Amplitude of a bit string after the gate sequence.
    Amplitude(AmplitudeArgs),
    /// Draw bit strings from the state after the gate sequence.
    Sample(SampleArgs),
    /// Exact outcome distribution of the sampler.
    Distribution(StateArgs),
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Coupling tree file for the initial state; every leaf must be a qubit.
    #[arg(long)]
    pub state: PathBuf,
    /// Gate file: a JSON list such as [{"op": "h", "qubit": 1}].
    #[arg(long)]
    pub gates: Option<PathBuf>,
    /// Largest cost factor allowed; each one-qubit gate doubles it.
    #[arg(long, default_value_t = DEFAULT_COST_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Args)]
pub struct AmplitudeArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Bit string, qubit 1 first.
    #[arg(long)]
    pub x: String,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, short = 'n', default_value_t = 1)]
    pub n: usize,
}

fn apply(state: Arc<dyn CtState>, op: &GateOp, budget: u64) -> CliResult<Arc<dyn CtState>> {
    let basis =
        |op: schur_core::Result<BasisPreservingOp>| -> CliResult<_> { Ok(apply_basis_preserving(state.clone(), op?)?) };
    match op {
        GateOp::H { qubit } => Ok(apply_one_qubit_gate(state.clone(), hadamard(), *qubit, budget)?),
        GateOp::X { qubit } => basis(BasisPreservingOp::bit_flip(*qubit)),
        GateOp::Cnot { control, target } => basis(BasisPreservingOp::cnot(*control, *target)),
        GateOp::Phase { qubits, thetas } => basis(BasisPreservingOp::phase(qubits.clone(), thetas.clone())),
        GateOp::Permute { qubits, image } => {
            let len = image.len();
            basis(BasisPreservingOp::from_fn(qubits.clone(), |y| (0.0, if y < len { image[y] } else { usize::MAX })))
        }
        GateOp::Gate { qubit, matrix } => {
            let z = |e: [f64; 2]| Complex64::new(e[0], e[1]);
            let g = Matrix2::new(z(matrix[0][0]), z(matrix[0][1]), z(matrix[1][0]), z(matrix[1][1]));
            Ok(apply_one_qubit_gate(state.clone(), g, *qubit, budget)?)
        }
    }
}

fn build(a: &StateArgs) -> CliResult<(Arc<dyn CtState>, usize)> {
    let mut state = from_coupling_tree(coupling_tree(&a.state)?)?;
    let ops: Vec<GateOp> = match &a.gates {
        Some(p) => read_json(p, "gate file")?,
        None => vec![],
    };
    for op in &ops {
        state = apply(state, op, a.budget)?;
    }
    Ok((state, ops.len()))
}

pub fn run(c: &CtCommand, ctx: &Ctx) -> CliResult<Report> {
    match c {
        CtCommand::Amplitude(a) => {
            let (state, ops) = build(&a.state)?;
            let x = bits(&a.x)?;
            if x.len() != state.n() {
                return Err(CliError::parse("bit string", format!("expected {} bits, got {}", state.n(), x.len())));
            }
            let amp = state.amplitude(&x)?;
            let doc =
                json!({ "x": a.x, "amplitude": complex_json(amp), "cost_factor": state.cost_factor(), "ops": ops });
            let mut r = Report::new(doc, &["x", "re", "im", "cost_factor"]);
            r.row(vec![bit_string(&x), amp.re.to_string(), amp.im.to_string(), state.cost_factor().to_string()]);
            Ok(r)
        }
        CtCommand::Sample(a) => {
            let (state, _) = build(&a.state)?;
            let mut rng = ctx.rng();
            let draws: Vec<String> =
                (0..a.n).map(|_| state.sample(&mut rng).map(|x| bit_string(&x))).collect::<Result<_, _>>()?;
            let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
            for d in &draws {
                *counts.entry(d.as_str()).or_insert(0) += 1;
            }
            let doc =
                json!({ "seed": ctx.seed(), "cost_factor": state.cost_factor(), "samples": draws, "counts": counts });
            let mut r = Report::new(doc, &["shot", "x"]);
            r.note(format!("seed {}", ctx.seed().unwrap_or_default()));
            for (k, d) in draws.iter().enumerate() {
                r.row(vec![k.to_string(), d.clone()]);
            }
            Ok(r)
        }
        CtCommand::Distribution(a) => {
            let (state, _) = build(a)?;
            let dist = state.sampler_distribution()?;
            let mut r = Report::new(json!(null), &["x", "probability"]);
            let mut out = BTreeMap::new();
            for (x, p) in &dist {
                out.insert(bit_string(x), *p);
                r.row(vec![bit_string(x), p.to_string()]);
            }
            r.json = json!({ "cost_factor": state.cost_factor(), "distribution": out });
            Ok(r)
        }
    }
}
