use std::collections::BTreeMap;

use super::builder::{Columns, PlanBuilder, Tuple};
use super::plan::{CircuitPlan, RegId, Register};
use crate::angular::{clebsch_gordan, label_bound};
use crate::coupling::{Child, CouplingTree};
use crate::error::{Error, Result};
use crate::halfint::{valid_pair, HalfInt};
use crate::pqc::{schur_tree, Branch, PqcLabels, PqcTree};
use crate::scalar::Scalar;

const MAX_SYNTH_QUBITS: usize = 24;

/// Possible total spins of `s` qubits, larger first.
fn j_values(s: usize) -> Vec<HalfInt> {
    (0..=s as i64).rev().filter(|d| (s as i64 - d) % 2 == 0).map(HalfInt::from_doubled).collect()
}

/// Possible z-spins of `s` qubits, larger first.
fn m_values(s: usize) -> Vec<HalfInt> {
    (-(s as i64)..=s as i64).rev().step_by(2).map(HalfInt::from_doubled).collect()
}

fn x_register(q: usize) -> Register {
    Register::encoded(format!("x{q}"), vec![-HalfInt::HALF, HalfInt::HALF])
}

fn triangle_js(a: HalfInt, b: HalfInt) -> Vec<HalfInt> {
    ((a - b).abs().doubled()..=(a + b).doubled()).rev().step_by(2).map(HalfInt::from_doubled).collect()
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 qubits, got {n}")));
    }
    if n > MAX_SYNTH_QUBITS {
        return Err(Error::CapExceeded(format!("{n} qubits exceeds the synthesis cap of {MAX_SYNTH_QUBITS}")));
    }
    if n as i64 > label_bound() {
        return Err(Error::CapExceeded(format!("total spin {n}/2 exceeds the label bound")));
    }
    Ok(())
}

/// Registers for the PQC labels of a tree: j_i (the root's is "J") and m_i ("M").
struct PqcRegs {
    x: Vec<RegId>,
    j: Vec<RegId>,
    m: Vec<RegId>,
}

impl PqcRegs {
    /// With `premap_inputs` the x registers are the plan inputs, otherwise the label registers are.
    fn new(b: &mut PlanBuilder, tree: &PqcTree, premap_inputs: bool) -> Self {
        let n = tree.n();
        let add = |b: &mut PlanBuilder, reg: Register, input: bool| {
            if input {
                b.input(reg)
            } else {
                b.register(reg)
            }
        };
        let x = (1..=n).map(|q| add(b, x_register(q), premap_inputs)).collect();
        let name = |i: usize, root: &str, other: &str| {
            if i == n - 1 {
                root.to_string()
            } else {
                format!("{other}{i}")
            }
        };
        let j = (1..n)
            .map(|i| add(b, Register::encoded(name(i, "J", "j"), j_values(tree.subset(i).len())), !premap_inputs))
            .collect();
        let m = (1..n)
            .map(|i| {
                add(
                    b,
                    Register::encoded(name(i, "M", "m"), m_values(tree.subset(i).len())),
                    !premap_inputs && i == n - 1,
                )
            })
            .collect();
        PqcRegs { x, j, m }
    }

    fn branch_regs(&self, br: Branch) -> Vec<RegId> {
        match br {
            Branch::Qubit(q) => vec![self.x[q - 1]],
            Branch::Vertex(k) => vec![self.j[k - 1], self.m[k - 1]],
        }
    }

    /// Every (j, m) of a branch, as the tuple stored in its registers.
    fn branch_states(tree: &PqcTree, br: Branch) -> Vec<(HalfInt, Tuple)> {
        match br {
            Branch::Qubit(_) => vec![(HalfInt::HALF, vec![-HalfInt::HALF]), (HalfInt::HALF, vec![HalfInt::HALF])],
            Branch::Vertex(k) => {
                let s = tree.subset(k).len();
                j_values(s).into_iter().flat_map(|j| j.m_values().map(move |m| (j, vec![j, m]))).collect()
            }
        }
    }

    fn label_regs(&self, n: usize) -> Vec<RegId> {
        let mut v = self.j.clone();
        v.push(self.m[n - 2]);
        v
    }
}

fn js_of(br: Branch, j: HalfInt) -> Tuple {
    match br {
        Branch::Qubit(_) => vec![],
        Branch::Vertex(_) => vec![j],
    }
}

fn jreg(regs: &PqcRegs, br: Branch) -> Vec<RegId> {
    match br {
        Branch::Qubit(_) => vec![],
        Branch::Vertex(k) => vec![regs.j[k - 1]],
    }
}

/// [j_l?][j_r?][m_l or x_l][m_r or x_r] -> [j_l?][j_r?][j_i][m_i], a bijection for each (j_l, j_r).
fn premap_step(b: &mut PlanBuilder, tree: &PqcTree, regs: &PqcRegs, i: usize) -> Result<()> {
    let (l, r) = tree.branches(i);
    let mreg = |br: Branch| *regs.branch_regs(br).last().unwrap();
    let inputs: Vec<RegId> = [jreg(regs, l), jreg(regs, r), vec![mreg(l), mreg(r)]].concat();
    let outputs: Vec<RegId> = [jreg(regs, l), jreg(regs, r), vec![regs.j[i - 1], regs.m[i - 1]]].concat();
    let mut groups: BTreeMap<Tuple, (Vec<Tuple>, Vec<Tuple>)> = BTreeMap::new();
    for (jl, tl) in PqcRegs::branch_states(tree, l) {
        for (jr, tr) in PqcRegs::branch_states(tree, r) {
            let g = groups.entry(vec![jl, jr]).or_default();
            g.0.push([js_of(l, jl), js_of(r, jr), vec![*tl.last().unwrap(), *tr.last().unwrap()]].concat());
        }
    }
    for (key, g) in groups.iter_mut() {
        let (jl, jr) = (key[0], key[1]);
        for ji in triangle_js(jl, jr) {
            for mi in ji.m_values() {
                g.1.push([js_of(l, jl), js_of(r, jr), vec![ji, mi]].concat());
            }
        }
    }
    b.bijection_step(format!("premap v{i}"), &inputs, &outputs, groups)
}

/// [j_l?][j_r?][j_i][m_i] -> [branch l][branch r] with Clebsch-Gordan columns.
fn coupling_step(b: &mut PlanBuilder, tree: &PqcTree, regs: &PqcRegs, i: usize) -> Result<()> {
    let (l, r) = tree.branches(i);
    let inputs: Vec<RegId> = [jreg(regs, l), jreg(regs, r), vec![regs.j[i - 1], regs.m[i - 1]]].concat();
    let outputs: Vec<RegId> = [regs.branch_regs(l), regs.branch_regs(r)].concat();
    let ls = PqcRegs::branch_states(tree, l);
    let rs = PqcRegs::branch_states(tree, r);
    let mut columns = Columns::new();
    let jl_vals: Vec<HalfInt> = match l {
        Branch::Qubit(_) => vec![HalfInt::HALF],
        Branch::Vertex(k) => j_values(tree.subset(k).len()),
    };
    let jr_vals: Vec<HalfInt> = match r {
        Branch::Qubit(_) => vec![HalfInt::HALF],
        Branch::Vertex(k) => j_values(tree.subset(k).len()),
    };
    for &jl in &jl_vals {
        for &jr in &jr_vals {
            for ji in triangle_js(jl, jr) {
                for mi in ji.m_values() {
                    let mut col = Vec::new();
                    for (_, tl) in ls.iter().filter(|s| s.0 == jl) {
                        let ml = *tl.last().unwrap();
                        let mr = mi - ml;
                        if !valid_pair(jr, mr) {
                            continue;
                        }
                        let c = clebsch_gordan(jl, ml, jr, mr, ji, mi)?;
                        if c.is_zero() {
                            continue;
                        }
                        let tr = rs.iter().find(|s| s.0 == jr && *s.1.last().unwrap() == mr).unwrap().1.clone();
                        col.push(([tl.clone(), tr].concat(), Scalar::Exact(c)));
                    }
                    columns.push(([js_of(l, jl), js_of(r, jr), vec![ji, mi]].concat(), col));
                }
            }
        }
    }
    b.map_step(format!("couple v{i}"), &inputs, &outputs, columns)
}

fn pqc_premap_into(b: &mut PlanBuilder, tree: &PqcTree, regs: &PqcRegs) -> Result<()> {
    for i in 1..tree.n() {
        premap_step(b, tree, regs, i)?;
    }
    Ok(())
}

fn pqc_coupling_into(b: &mut PlanBuilder, tree: &PqcTree, regs: &PqcRegs) -> Result<()> {
    for i in (1..tree.n()).rev() {
        coupling_step(b, tree, regs, i)?;
    }
    Ok(())
}

/// Maps |x_1 ... x_n> to the label registers |j_1, ..., j_{n-2}, J, M> by a basis permutation.
pub fn synth_pqc_premap(tree: &PqcTree) -> Result<CircuitPlan> {
    check_n(tree.n())?;
    let mut b = PlanBuilder::new();
    let regs = PqcRegs::new(&mut b, tree, true);
    pqc_premap_into(&mut b, tree, &regs)?;
    b.finish(format!("pqc premap {tree}"), regs.label_regs(tree.n()))
}

/// Maps label registers to the coupled PQC state on x_1, ..., x_n.
pub fn synth_pqc_coupling(tree: &PqcTree) -> Result<CircuitPlan> {
    check_n(tree.n())?;
    let mut b = PlanBuilder::new();
    let regs = PqcRegs::new(&mut b, tree, false);
    pqc_coupling_into(&mut b, tree, &regs)?;
    b.finish(format!("pqc coupling {tree}"), regs.x.clone())
}

/// The full PQC transform |x> -> |psi(labels(x))>.
pub fn synth_pqc(tree: &PqcTree) -> Result<CircuitPlan> {
    check_n(tree.n())?;
    let mut b = PlanBuilder::new();
    let regs = PqcRegs::new(&mut b, tree, true);
    pqc_premap_into(&mut b, tree, &regs)?;
    pqc_coupling_into(&mut b, tree, &regs)?;
    b.finish(format!("pqc transform {tree}"), regs.x.clone())
}

pub fn synth_schur_premap(n: usize) -> Result<CircuitPlan> {
    synth_pqc_premap(&schur_tree(n)?)
}

pub fn synth_schur_coupling(n: usize) -> Result<CircuitPlan> {
    synth_pqc_coupling(&schur_tree(n)?)
}

pub fn synth_schur(n: usize) -> Result<CircuitPlan> {
    synth_pqc(&schur_tree(n)?)
}

/// The labelling assigned to each computational basis index by the premap.
pub fn pqc_assignment(tree: &PqcTree) -> Result<Vec<PqcLabels>> {
    let plan = synth_pqc_premap(tree)?;
    let n = tree.n();
    (0..1usize << n)
        .map(|x| {
            let codes = plan.permute_basis(x)?;
            let value = |k: usize| plan.register(plan.outputs[k]).values[codes[k]];
            Ok(PqcLabels { js: (0..n - 1).map(value).collect(), m: value(n - 1) })
        })
        .collect()
}

/// Columns [a, c, m_c] -> sum CG(a m_a; 1/2 m_x | c m_c) [a, m_a, m_x] for c = a +- 1/2.
fn add_half_columns(a_vals: &[HalfInt]) -> Result<Columns> {
    let half = HalfInt::HALF;
    let mut cols = Columns::new();
    for &a in a_vals {
        for c in triangle_js(a, half) {
            for mc in c.m_values() {
                let mut col = Vec::new();
                for ma in a.m_values() {
                    let mx = mc - ma;
                    if !valid_pair(half, mx) {
                        continue;
                    }
                    let v = clebsch_gordan(a, ma, half, mx, c, mc)?;
                    if !v.is_zero() {
                        col.push((vec![a, ma, mx], Scalar::Exact(v)));
                    }
                }
                cols.push((vec![a, c, mc], col));
            }
        }
    }
    Ok(cols)
}

/// Schur transform whose premap stores j_1, ..., j_{n-2} as one Yamanouchi bit each.
pub fn synth_schur_log_ancilla(n: usize) -> Result<CircuitPlan> {
    check_n(n)?;
    if n < 3 {
        return synth_schur(n);
    }
    let tree = schur_tree(n)?;
    let mut b = PlanBuilder::new();
    let regs = PqcRegs::new(&mut b, &tree, true);
    let bits = vec![HalfInt::ZERO, HalfInt::ONE];
    let lower: Vec<RegId> =
        (1..=n - 2).map(|p| b.register(Register::encoded(format!("lj{p}"), j_values(p + 1)))).collect();
    let y: Vec<RegId> = (1..=n - 2).map(|p| b.register(Register::encoded(format!("y{p}"), bits.clone()))).collect();
    let y_wide: Vec<RegId> = (1..=n - 2)
        .map(|p| {
            let w = b.width(regs.j[p - 1]);
            if p == 1 {
                y[0]
            } else {
                b.register(Register::with_width(format!("y{p}w"), bits.clone(), w))
            }
        })
        .collect();
    let one = |t: Tuple| vec![(t, Scalar::one())];
    let raised = |lo: HalfInt, hi: HalfInt| if hi > lo { HalfInt::ONE } else { HalfInt::ZERO };

    premap_step(&mut b, &tree, &regs, 1)?;
    for p in 1..=n - 2 {
        premap_step(&mut b, &tree, &regs, p + 1)?;
        let jp = regs.j[p - 1];
        let jv = j_values(p + 1);
        b.map_step(
            format!("copy j{p}"),
            &[jp],
            &[jp, lower[p - 1]],
            jv.iter().map(|&j| (vec![j], one(vec![j, j]))).collect(),
        )?;
        if p == 1 {
            b.map_step(
                "encode y1".into(),
                &[jp],
                &[y[0]],
                jv.iter().map(|&j| (vec![j], one(vec![raised(HalfInt::HALF, j)]))).collect(),
            )?;
            continue;
        }
        let pairs: Vec<(HalfInt, HalfInt)> = j_values(p)
            .into_iter()
            .flat_map(|a| jv.iter().copied().filter(move |&c| (c - a).abs() == HalfInt::HALF).map(move |c| (a, c)))
            .collect();
        b.map_step(
            format!("encode y{p}"),
            &[lower[p - 2], jp],
            &[lower[p - 2], y_wide[p - 1]],
            pairs.iter().map(|&(a, c)| (vec![a, c], one(vec![a, raised(a, c)]))).collect(),
        )?;
        b.map_step(
            format!("compress y{p}"),
            &[lower[p - 2], lower[p - 1], y_wide[p - 1]],
            &[lower[p - 1], y[p - 1]],
            pairs.iter().map(|&(a, c)| (vec![a, c, raised(a, c)], one(vec![c, raised(a, c)]))).collect(),
        )?;
    }

    // Coupling stage.
    let half = HalfInt::HALF;
    let top = lower[n - 3];
    b.map_step(
        format!("couple v{}", n - 1),
        &[top, regs.j[n - 2], regs.m[n - 2]],
        &[top, regs.m[n - 3], regs.x[n - 1]],
        add_half_columns(&j_values(n - 1))?,
    )?;
    for p in (2..=n - 2).rev() {
        let mut cols = Columns::new();
        for c in j_values(p + 1) {
            for bit in [HalfInt::ZERO, HalfInt::ONE] {
                let a = if bit == HalfInt::ONE { c - half } else { c + half };
                if j_values(p).contains(&a) {
                    cols.push((vec![c, bit], one(vec![c, a])));
                }
            }
        }
        b.map_step(format!("decode y{p}"), &[lower[p - 1], y[p - 1]], &[lower[p - 1], lower[p - 2]], cols)?;
        b.map_step(
            format!("couple v{p}"),
            &[lower[p - 2], lower[p - 1], regs.m[p - 1]],
            &[lower[p - 2], regs.m[p - 2], regs.x[p]],
            add_half_columns(&j_values(p))?,
        )?;
    }
    b.map_step(
        "decode y1".into(),
        &[lower[0], y[0]],
        &[lower[0]],
        j_values(2).into_iter().map(|j| (vec![j, raised(half, j)], one(vec![j]))).collect(),
    )?;
    let first = add_half_columns(&[half])?
        .into_iter()
        .map(|(k, col)| (k[1..].to_vec(), col.into_iter().map(|(t, v)| (t[1..].to_vec(), v)).collect()))
        .collect();
    b.map_step("couple v1".into(), &[lower[0], regs.m[0]], &[regs.x[0], regs.x[1]], first)?;
    b.finish(format!("schur transform n={n} (log ancilla)"), regs.x.clone())
}

/// A circuit preparing the state of a coupling tree from its label registers, one vertex at a
/// time from the root. Every register except the leaves' has a single value.
pub fn synth_state_prep(tree: &CouplingTree) -> Result<CircuitPlan> {
    let bound = label_bound();
    let too_big = |j: HalfInt| j.doubled() > bound;
    if tree.vertices().iter().any(|v| too_big(v.j)) || tree.leaves().iter().any(|l| too_big(l.j)) {
        return Err(Error::CapExceeded(format!("a j-label exceeds the bound {bound}/2")));
    }
    let mut b = PlanBuilder::new();
    let nv = tree.vertices().len();
    let root = tree.root();
    let j_reg = |v: usize| Register::encoded(format!("j{}", v + 1), vec![tree.vertices()[v].j]);
    let m_reg = |v: usize| Register::encoded(format!("m{}", v + 1), tree.reachable_ms(v).to_vec());
    let mut j_regs = vec![0; nv];
    let mut m_regs = vec![0; nv];
    j_regs[root] = b.input(j_reg(root));
    m_regs[root] = b.input(m_reg(root));
    for v in (0..nv).filter(|&v| v != root) {
        j_regs[v] = b.input(j_reg(v));
    }
    for v in (0..nv).filter(|&v| v != root) {
        m_regs[v] = b.register(m_reg(v));
    }
    let x_regs: Vec<RegId> = tree
        .leaves()
        .iter()
        .enumerate()
        .map(|(l, leaf)| b.register(Register::encoded(format!("x{}", l + 1), leaf.ms.clone())))
        .collect();
    for &v in tree.post_order().iter().rev() {
        let vert = &tree.vertices()[v];
        let child_vertex_js: Vec<(RegId, HalfInt)> = vert
            .children
            .iter()
            .filter_map(|c| match *c {
                Child::Vertex(w) => Some((j_regs[w], tree.vertices()[w].j)),
                Child::Leaf(_) => None,
            })
            .collect();
        let mut ins = vec![j_regs[v], m_regs[v]];
        ins.extend(child_vertex_js.iter().map(|p| p.0));
        let mut outs = Vec::new();
        for c in &vert.children {
            match *c {
                Child::Leaf(l) => outs.push(x_regs[l]),
                Child::Vertex(w) => outs.extend([j_regs[w], m_regs[w]]),
            }
        }
        let mut columns = Columns::new();
        for &m in tree.reachable_ms(v) {
            let mut col = Vec::new();
            for (ms, amp) in tree.weighted_support(v, m)? {
                let mut t = Tuple::new();
                for (c, &mc) in vert.children.iter().zip(&ms) {
                    match *c {
                        Child::Leaf(l) => {
                            if tree.leaves()[l].code(mc).is_none() {
                                return Err(Error::InvalidArgument(format!(
                                    "leaf {} has no basis state m = {mc}",
                                    l + 1
                                )));
                            }
                            t.push(mc);
                        }
                        Child::Vertex(w) => t.extend([tree.vertices()[w].j, mc]),
                    }
                }
                col.push((t, amp));
            }
            let mut key = vec![vert.j, m];
            key.extend(child_vertex_js.iter().map(|p| p.1));
            columns.push((key, col));
        }
        b.map_step(format!("prepare v{}", v + 1), &ins, &outs, columns)?;
    }
    b.finish("state preparation", x_regs)
}
