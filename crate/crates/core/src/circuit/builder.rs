use std::collections::BTreeMap;

use super::plan::{complete_unitary, CircuitPlan, MultiRegisterUnitary, RegId, Register, SparseUnitary, Step};
use super::two_level::{decompose, diagonal_bound};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::scalar::Scalar;

pub(crate) type Tuple = Vec<HalfInt>;
pub(crate) type Columns = Vec<(Tuple, Vec<(Tuple, Scalar)>)>;

/// Accumulates registers and steps, inserting ancillas when a step changes the qubit count.
#[derive(Debug, Default)]
pub(crate) struct PlanBuilder {
    registers: Vec<Register>,
    inputs: Vec<RegId>,
    steps: Vec<Step>,
    anc: usize,
}

impl PlanBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, reg: Register) -> RegId {
        if let Some(id) = self.registers.iter().position(|r| r.name == reg.name) {
            assert_eq!(self.registers[id], reg, "register {} redefined", reg.name);
            return id;
        }
        self.registers.push(reg);
        self.registers.len() - 1
    }

    pub fn input(&mut self, reg: Register) -> RegId {
        let id = self.register(reg);
        self.inputs.push(id);
        id
    }

    pub fn width(&self, id: RegId) -> u32 {
        self.registers[id].width
    }

    fn fresh_ancilla(&mut self, width: u32) -> RegId {
        self.anc += 1;
        let name = format!("anc{}", self.anc);
        self.register(Register::ancilla(name, width))
    }

    fn index(&self, regs: &[RegId], values: &[HalfInt]) -> Result<usize> {
        if regs.len() != values.len() {
            return Err(Error::MalformedPlan("tuple length differs from register count".into()));
        }
        let mut idx = 0usize;
        for (&r, &v) in regs.iter().zip(values) {
            let reg = &self.registers[r];
            let code = reg
                .code_of(v)
                .ok_or_else(|| Error::MalformedPlan(format!("value {v} is not encoded in register {}", reg.name)))?;
            idx = (idx << reg.width) | code;
        }
        Ok(idx)
    }

    pub fn codes(&self, regs: &[RegId], values: &[HalfInt]) -> Vec<usize> {
        regs.iter().zip(values).map(|(&r, &v)| self.registers[r].code_of(v).expect("encoded value")).collect()
    }

    /// Appends a unitary whose columns for the listed input tuples are given; the rest is completed.
    ///
    /// When the step changes the qubit count an ancilla is allocated or released. The order of the
    /// step's registers (ancilla included) is chosen among a fixed list of candidates to avoid
    /// two-level rotations beyond the diagonal-counting bound.
    pub fn map_step(&mut self, label: String, inputs: &[RegId], outputs: &[RegId], columns: Columns) -> Result<()> {
        let wi: u32 = inputs.iter().map(|&r| self.registers[r].width).sum();
        let wo: u32 = outputs.iter().map(|&r| self.registers[r].width).sum();
        let (mut ins, mut outs) = (inputs.to_vec(), outputs.to_vec());
        let anc = (wi != wo).then(|| self.fresh_ancilla(wi.abs_diff(wo)));
        let grow = wo > wi;
        if let Some(a) = anc {
            if grow {
                ins.push(a);
            } else {
                outs.push(a);
            }
        }
        let pad = |t: &Tuple, side_in: bool| -> Tuple {
            let mut t = t.clone();
            if anc.is_some() && grow == side_in {
                t.push(HalfInt::ZERO);
            }
            t
        };
        let columns: Columns = columns
            .into_iter()
            .map(|(tin, entries)| (pad(&tin, true), entries.into_iter().map(|(t, v)| (pad(&t, false), v)).collect()))
            .collect();

        let mut best: Option<(usize, usize, Vec<RegId>, Vec<RegId>, SparseUnitary)> = None;
        for (pi, po) in layout_candidates(ins.len(), outs.len(), anc.is_some(), grow) {
            let li: Vec<RegId> = pi.iter().map(|&k| ins[k]).collect();
            let lo: Vec<RegId> = po.iter().map(|&k| outs[k]).collect();
            let permuted: Columns = columns
                .iter()
                .map(|(tin, entries)| {
                    (
                        pi.iter().map(|&k| tin[k]).collect(),
                        entries.iter().map(|(t, v)| (po.iter().map(|&k| t[k]).collect(), v.clone())).collect(),
                    )
                })
                .collect();
            let matrix = self.step_matrix(&li, &lo, &permuted)?;
            let ops = decompose(&matrix).len();
            let excess = ops.saturating_sub(diagonal_bound(&matrix));
            if best.as_ref().is_none_or(|b| (excess, ops) < (b.0, b.1)) {
                best = Some((excess, ops, li, lo, matrix));
            }
            if excess == 0 {
                break;
            }
        }
        let (_, _, li, lo, matrix) = best.expect("at least one layout");
        if let (Some(a), true) = (anc, grow) {
            self.steps.push(Step::Alloc(a));
        }
        self.steps.push(Step::Unitary(MultiRegisterUnitary { label, inputs: li, outputs: lo, matrix }));
        if let (Some(a), false) = (anc, grow) {
            self.steps.push(Step::Release(a));
        }
        Ok(())
    }

    fn step_matrix(&self, ins: &[RegId], outs: &[RegId], columns: &Columns) -> Result<SparseUnitary> {
        let wi: u32 = ins.iter().map(|&r| self.registers[r].width).sum();
        let mut given = Vec::with_capacity(columns.len());
        for (tin, entries) in columns {
            let c = self.index(ins, tin)?;
            let col =
                entries.iter().map(|(tout, v)| Ok((self.index(outs, tout)?, v.clone()))).collect::<Result<Vec<_>>>()?;
            given.push((c, col));
        }
        complete_unitary(1usize << wi, given)
    }

    /// A basis permutation pairing, within each group, valid inputs with valid outputs in
    /// lexicographic order of their register codes.
    pub fn bijection_step(
        &mut self,
        label: String,
        inputs: &[RegId],
        outputs: &[RegId],
        groups: BTreeMap<Tuple, (Vec<Tuple>, Vec<Tuple>)>,
    ) -> Result<()> {
        let mut columns = Columns::new();
        for (key, (mut tin, mut tout)) in groups {
            if tin.len() != tout.len() {
                return Err(Error::MalformedPlan(format!(
                    "{label}: group {key:?} has {} inputs and {} outputs",
                    tin.len(),
                    tout.len()
                )));
            }
            tin.sort_by_cached_key(|t| self.codes(inputs, t));
            tout.sort_by_cached_key(|t| self.codes(outputs, t));
            columns.extend(tin.into_iter().zip(tout).map(|(a, b)| (a, vec![(b, Scalar::one())])));
        }
        self.map_step(label, inputs, outputs, columns)
    }

    pub fn finish(self, name: impl Into<String>, outputs: Vec<RegId>) -> Result<CircuitPlan> {
        let plan = CircuitPlan {
            name: name.into(),
            registers: self.registers,
            inputs: self.inputs,
            outputs,
            steps: self.steps,
        };
        plan.peak_qubits()?;
        Ok(plan)
    }
}

const MAX_LAYOUTS: usize = 2048;

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..k {
        for rest in permutations(k - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

/// Register orders to try: as given, then with the ancilla moved to the front, then every
/// reordering of both sides in lexicographic order.
fn layout_candidates(ni: usize, no: usize, anc: bool, grow: bool) -> Vec<(Vec<usize>, Vec<usize>)> {
    let id = |k: usize| (0..k).collect::<Vec<_>>();
    let front = |k: usize| std::iter::once(k - 1).chain(0..k - 1).collect::<Vec<_>>();
    let mut out = vec![(id(ni), id(no))];
    if anc {
        out.push(if grow { (front(ni), id(no)) } else { (id(ni), front(no)) });
    }
    for pi in permutations(ni) {
        for po in permutations(no) {
            if out.len() >= MAX_LAYOUTS {
                return out;
            }
            if !out.iter().any(|c| c.0 == pi && c.1 == po) {
                out.push((pi.clone(), po));
            }
        }
    }
    out
}
