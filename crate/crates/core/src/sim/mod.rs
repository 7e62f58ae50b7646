//! Dense simulation of circuit plans and Schur-Weyl block structure.

mod schur_weyl;

use std::collections::HashMap;

use num_complex::Complex64;

use crate::circuit::{CircuitPlan, RegId, Step};
use crate::error::{Error, Result};

pub use schur_weyl::{
    block_structure, local_rep, perm_rep, pqc_unitary, su2, u2_irrep_block, u2_irrep_blocks, u2_irrep_closed_form,
    BlockStructure, Family, IrrepBlock,
};

pub const LEAKAGE_TOL: f64 = 1e-10;

/// A sparse state over the live registers of a plan.
#[derive(Debug, Clone)]
pub struct SimState {
    pub registers: Vec<RegId>,
    pub amplitudes: HashMap<Vec<usize>, Complex64>,
}

impl SimState {
    /// The state over `plan.outputs`, as a dense vector in mixed radix of register value counts
    /// (first register most significant).
    pub fn to_dense(&self, plan: &CircuitPlan) -> Result<Vec<Complex64>> {
        let pos: Vec<usize> = plan
            .outputs
            .iter()
            .map(|r| self.registers.iter().position(|x| x == r).expect("outputs are live"))
            .collect();
        let radix: Vec<usize> = plan.outputs.iter().map(|&r| plan.register(r).values.len()).collect();
        let dim: usize = radix.iter().product();
        let mut out = vec![Complex64::default(); dim];
        let mut leaked = 0.0;
        for (key, amp) in &self.amplitudes {
            let mut idx = 0usize;
            let mut ok = true;
            for (&p, &rd) in pos.iter().zip(&radix) {
                ok &= key[p] < rd;
                idx = idx * rd + key[p].min(rd - 1);
            }
            if ok {
                out[idx] += amp;
            } else {
                leaked += amp.norm_sqr();
            }
        }
        if leaked > LEAKAGE_TOL {
            return Err(Error::Leakage { register: "outputs".into(), leakage: leaked });
        }
        Ok(out)
    }
}

/// Runs a plan on a state given as (input register codes, amplitude) pairs, checking that released
/// registers are back in code 0.
pub fn run(plan: &CircuitPlan, input: &[(Vec<usize>, Complex64)]) -> Result<SimState> {
    plan.peak_qubits()?;
    let mut registers = plan.inputs.clone();
    let mut amps: HashMap<Vec<usize>, Complex64> = HashMap::new();
    for (codes, a) in input {
        if codes.len() != registers.len()
            || codes.iter().zip(&registers).any(|(&c, &r)| c >> plan.register(r).width != 0)
        {
            return Err(Error::InvalidArgument("input codes do not match the input registers".into()));
        }
        *amps.entry(codes.clone()).or_default() += a;
    }
    for step in &plan.steps {
        match step {
            Step::Alloc(r) => {
                registers.push(*r);
                amps = amps
                    .into_iter()
                    .map(|(mut k, a)| {
                        k.push(0);
                        (k, a)
                    })
                    .collect();
            }
            Step::Release(r) => {
                let p = registers.iter().position(|x| x == r).expect("validated plan");
                let leakage: f64 = amps.iter().filter(|(k, _)| k[p] != 0).map(|(_, a)| a.norm_sqr()).sum();
                if leakage > LEAKAGE_TOL {
                    return Err(Error::Leakage { register: plan.register(*r).name.clone(), leakage });
                }
                registers.remove(p);
                let mut next = HashMap::with_capacity(amps.len());
                for (mut k, a) in amps {
                    if k[p] == 0 {
                        k.remove(p);
                        next.insert(k, a);
                    }
                }
                amps = next;
            }
            Step::Unitary(u) => {
                let pos: Vec<usize> =
                    u.inputs.iter().map(|r| registers.iter().position(|x| x == r).expect("validated plan")).collect();
                let keep: Vec<usize> = (0..registers.len()).filter(|i| !pos.contains(i)).collect();
                let widths_out: Vec<u32> = u.outputs.iter().map(|&r| plan.register(r).width).collect();
                let mut next: HashMap<Vec<usize>, Complex64> = HashMap::with_capacity(amps.len());
                for (k, a) in amps {
                    let mut col = 0usize;
                    for (&p, &r) in pos.iter().zip(&u.inputs) {
                        col = (col << plan.register(r).width) | k[p];
                    }
                    let base: Vec<usize> = keep.iter().map(|&i| k[i]).collect();
                    for (row, v) in u.matrix.column(col) {
                        let mut key = base.clone();
                        let mut rest = *row;
                        let mut outs = vec![0; widths_out.len()];
                        for (slot, &w) in outs.iter_mut().zip(&widths_out).rev() {
                            *slot = rest & ((1usize << w) - 1);
                            rest >>= w;
                        }
                        key.extend(outs);
                        *next.entry(key).or_default() += a * v.to_complex();
                    }
                }
                next.retain(|_, a| a.norm_sqr() > 1e-30);
                amps = next;
                registers = keep.iter().map(|&i| registers[i]).chain(u.outputs.iter().copied()).collect();
            }
        }
    }
    Ok(SimState { registers, amplitudes: amps })
}

/// Runs a plan on the computational basis state with the given input index.
pub fn run_basis(plan: &CircuitPlan, index: usize) -> Result<SimState> {
    let mut codes = vec![0; plan.inputs.len()];
    let mut rest = index;
    for (slot, &r) in codes.iter_mut().zip(&plan.inputs).rev() {
        let w = plan.register(r).width;
        *slot = rest & ((1usize << w) - 1);
        rest >>= w;
    }
    if rest != 0 {
        return Err(Error::InvalidArgument(format!("input index {index} exceeds the input width")));
    }
    run(plan, &[(codes, Complex64::new(1.0, 0.0))])
}
