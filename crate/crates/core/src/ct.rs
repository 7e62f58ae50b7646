//! Computationally tractable states: amplitude and sampling oracles, closed under basis-preserving
//! operations and (at a doubling cost) under one-qubit gates.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, RngCore};

use crate::coupling::CouplingTree;
use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// Computational basis string, qubit 1 first; `true` is |1> (m = +1/2).
pub type Bits = Vec<bool>;

/// Cost factor at which further one-qubit gates are refused unless a larger budget is given.
pub const DEFAULT_COST_BUDGET: u64 = 1 << 16;

/// Largest qubit subset a basis-preserving operation may act on.
pub const MAX_OP_QUBITS: usize = 20;

const UNITARY_TOL: f64 = 1e-10;

/// A state whose amplitudes can be computed and whose outcome distribution can be sampled.
pub trait CtState: fmt::Debug + Send + Sync {
    fn n(&self) -> usize;

    /// <x|psi>.
    fn amplitude(&self, x: &[bool]) -> Result<Complex64>;

    /// Draws x with probability |<x|psi>|^2.
    fn sample(&self, rng: &mut dyn RngCore) -> Result<Bits>;

    /// Outcome probabilities of `sample`, from its decision rules rather than from amplitudes.
    fn sampler_distribution(&self) -> Result<BTreeMap<Bits, f64>>;

    /// Relative cost of one amplitude evaluation, 1 for a coupled state.
    fn cost_factor(&self) -> u64;
}

fn check_len(n: usize, x: &[bool]) -> Result<()> {
    if x.len() != n {
        return Err(Error::InvalidArgument(format!("basis string has {} bits, state has {n} qubits", x.len())));
    }
    Ok(())
}

/// Every basis string of n qubits, in index order.
pub fn all_strings(n: usize) -> impl Iterator<Item = Bits> {
    (0..1usize << n).map(move |v| (0..n).map(|q| v >> (n - 1 - q) & 1 == 1).collect())
}

/// |<x|psi>|^2 for every x, by calling the amplitude oracle.
pub fn amplitude_distribution(state: &dyn CtState) -> Result<BTreeMap<Bits, f64>> {
    all_strings(state.n()).map(|x| Ok((x.clone(), state.amplitude(&x)?.norm_sqr()))).collect()
}

#[derive(Debug)]
struct TreeState {
    tree: CouplingTree,
}

fn to_m(b: bool) -> HalfInt {
    if b {
        HalfInt::HALF
    } else {
        -HalfInt::HALF
    }
}

/// Wraps a qubit coupling tree whose providers all name a unique output m.
pub fn from_coupling_tree(tree: CouplingTree) -> Result<Arc<dyn CtState>> {
    if !tree.all_gc4_capable() {
        return Err(Error::Unsupported("a provider in the tree lacks unique output m-values".into()));
    }
    if tree.leaves().iter().any(|l| l.j != HalfInt::HALF) {
        return Err(Error::InvalidArgument("tractable states here are over qubit leaves".into()));
    }
    Ok(Arc::new(TreeState { tree }))
}

impl CtState for TreeState {
    fn n(&self) -> usize {
        self.tree.leaves().len()
    }

    fn amplitude(&self, x: &[bool]) -> Result<Complex64> {
        check_len(self.n(), x)?;
        let ms: Vec<HalfInt> = x.iter().map(|&b| to_m(b)).collect();
        Ok(self.tree.amplitude(&ms)?.to_complex())
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Result<Bits> {
        Ok(self.tree.sample(rng)?.into_iter().map(|m| m.doubled() > 0).collect())
    }

    fn sampler_distribution(&self) -> Result<BTreeMap<Bits, f64>> {
        let exact = self.tree.sampler_distribution()?;
        Ok(exact
            .into_iter()
            .map(|(x, p)| {
                let p = num_traits::ToPrimitive::to_f64(&p).unwrap_or(0.0);
                (x.into_iter().map(|m| m.doubled() > 0).collect(), p)
            })
            .collect())
    }

    fn cost_factor(&self) -> u64 {
        1
    }
}

/// U|y> = e^{i theta(y)} |image(y)> on a qubit subset; local codes put the first listed qubit
/// in the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisPreservingOp {
    qubits: Vec<usize>,
    phases: Vec<f64>,
    image: Vec<usize>,
    preimage: Vec<usize>,
}

impl BasisPreservingOp {
    /// `map(y) = (theta, image)` for every local code y of the 1-based `qubits`.
    pub fn from_fn(qubits: Vec<usize>, map: impl Fn(usize) -> (f64, usize)) -> Result<Self> {
        let k = qubits.len();
        if k == 0 || k > MAX_OP_QUBITS {
            return Err(Error::InvalidArgument(format!("operation must act on 1..={MAX_OP_QUBITS} qubits")));
        }
        let mut sorted = qubits.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != k || sorted[0] == 0 {
            return Err(Error::InvalidArgument(format!("bad qubit list {qubits:?}")));
        }
        let dim = 1usize << k;
        let mut phases = Vec::with_capacity(dim);
        let mut image = Vec::with_capacity(dim);
        let mut preimage = vec![usize::MAX; dim];
        for y in 0..dim {
            let (theta, x) = map(y);
            if x >= dim || preimage[x] != usize::MAX || !theta.is_finite() {
                return Err(Error::InvalidArgument(format!("map is not a phased bijection at input {y}")));
            }
            preimage[x] = y;
            phases.push(theta);
            image.push(x);
        }
        Ok(BasisPreservingOp { qubits, phases, image, preimage })
    }

    pub fn identity(qubit: usize) -> Result<Self> {
        Self::from_fn(vec![qubit], |y| (0.0, y))
    }

    /// Pauli X.
    pub fn bit_flip(qubit: usize) -> Result<Self> {
        Self::from_fn(vec![qubit], |y| (0.0, y ^ 1))
    }

    /// Diagonal e^{i thetas[y]}.
    pub fn phase(qubits: Vec<usize>, thetas: Vec<f64>) -> Result<Self> {
        if thetas.len() != 1usize.checked_shl(qubits.len() as u32).unwrap_or(0) {
            return Err(Error::InvalidArgument("one phase per local basis state is needed".into()));
        }
        Self::from_fn(qubits, |y| (thetas[y], y))
    }

    /// CNOT with the given control and target.
    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        Self::from_fn(vec![control, target], |y| (0.0, if y & 2 == 2 { y ^ 1 } else { y }))
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    fn local(&self, x: &[bool]) -> usize {
        self.qubits.iter().fold(0, |acc, &q| acc << 1 | x[q - 1] as usize)
    }

    fn with_local(&self, x: &[bool], code: usize) -> Bits {
        let mut out = x.to_vec();
        let k = self.qubits.len();
        for (i, &q) in self.qubits.iter().enumerate() {
            out[q - 1] = code >> (k - 1 - i) & 1 == 1;
        }
        out
    }
}

#[derive(Debug)]
struct BasisPreserved {
    inner: Arc<dyn CtState>,
    op: BasisPreservingOp,
}

/// U applied to the state, at constant overhead per call.
pub fn apply_basis_preserving(state: Arc<dyn CtState>, op: BasisPreservingOp) -> Result<Arc<dyn CtState>> {
    if op.qubits.iter().any(|&q| q > state.n()) {
        return Err(Error::InvalidArgument(format!("{:?} is out of range for {} qubits", op.qubits, state.n())));
    }
    Ok(Arc::new(BasisPreserved { inner: state, op }))
}

impl CtState for BasisPreserved {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn amplitude(&self, x: &[bool]) -> Result<Complex64> {
        check_len(self.n(), x)?;
        let y = self.op.preimage[self.op.local(x)];
        let a = self.inner.amplitude(&self.op.with_local(x, y))?;
        Ok(a * Complex64::from_polar(1.0, self.op.phases[y]))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Result<Bits> {
        let y = self.inner.sample(rng)?;
        Ok(self.op.with_local(&y, self.op.image[self.op.local(&y)]))
    }

    fn sampler_distribution(&self) -> Result<BTreeMap<Bits, f64>> {
        let mut out = BTreeMap::new();
        for (y, p) in self.inner.sampler_distribution()? {
            *out.entry(self.op.with_local(&y, self.op.image[self.op.local(&y)])).or_insert(0.0) += p;
        }
        Ok(out)
    }

    fn cost_factor(&self) -> u64 {
        self.inner.cost_factor()
    }
}

#[derive(Debug)]
struct OneQubitGated {
    inner: Arc<dyn CtState>,
    gate: Matrix2<Complex64>,
    qubit: usize,
    cost: u64,
}

/// A gate on one qubit. Each amplitude needs two amplitudes of the input state, so the cost
/// factor doubles; a cost beyond `budget` is refused.
pub fn apply_one_qubit_gate(
    state: Arc<dyn CtState>,
    gate: Matrix2<Complex64>,
    qubit: usize,
    budget: u64,
) -> Result<Arc<dyn CtState>> {
    if qubit == 0 || qubit > state.n() {
        return Err(Error::InvalidArgument(format!("qubit {qubit} out of range for {} qubits", state.n())));
    }
    let dev = (gate.adjoint() * gate - Matrix2::identity()).norm();
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    let cost = state.cost_factor().saturating_mul(2);
    if cost > budget {
        return Err(Error::BudgetExceeded { cost, budget });
    }
    Ok(Arc::new(OneQubitGated { inner: state, gate, qubit, cost }))
}

/// Hadamard matrix.
pub fn hadamard() -> Matrix2<Complex64> {
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    Matrix2::new(r, r, r, -r)
}

impl OneQubitGated {
    fn pair(&self, x: &[bool]) -> [Bits; 2] {
        let mut lo = x.to_vec();
        let mut hi = x.to_vec();
        lo[self.qubit - 1] = false;
        hi[self.qubit - 1] = true;
        [lo, hi]
    }

    fn pair_amplitudes(&self, x: &[bool]) -> Result<([Bits; 2], [Complex64; 2])> {
        let pair = self.pair(x);
        let inner = [self.inner.amplitude(&pair[0])?, self.inner.amplitude(&pair[1])?];
        let out = [0, 1].map(|b| self.gate[(b, 0)] * inner[0] + self.gate[(b, 1)] * inner[1]);
        Ok((pair, out))
    }

    /// Given an input sample, the two possible outputs and their conditional probabilities.
    fn resample(&self, y: &[bool]) -> Result<[(Bits, f64); 2]> {
        let (pair, out) = self.pair_amplitudes(y)?;
        let total = out[0].norm_sqr() + out[1].norm_sqr();
        let p1 = if total > 0.0 { out[1].norm_sqr() / total } else { 0.5 };
        let [lo, hi] = pair;
        Ok([(lo, 1.0 - p1), (hi, p1)])
    }
}

impl CtState for OneQubitGated {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn amplitude(&self, x: &[bool]) -> Result<Complex64> {
        check_len(self.n(), x)?;
        let (_, out) = self.pair_amplitudes(x)?;
        Ok(out[x[self.qubit - 1] as usize])
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Result<Bits> {
        let y = self.inner.sample(rng)?;
        let [(lo, _), (hi, p1)] = self.resample(&y)?;
        Ok(if rng.random::<f64>() < p1 { hi } else { lo })
    }

    fn sampler_distribution(&self) -> Result<BTreeMap<Bits, f64>> {
        let mut out = BTreeMap::new();
        for (y, p) in self.inner.sampler_distribution()? {
            for (x, q) in self.resample(&y)? {
                *out.entry(x).or_insert(0.0) += p * q;
            }
        }
        out.retain(|_, p| *p > 0.0);
        Ok(out)
    }

    fn cost_factor(&self) -> u64 {
        self.cost
    }
}

/// Forwards to another state and counts amplitude calls.
#[derive(Debug)]
pub struct CountingState {
    inner: Arc<dyn CtState>,
    calls: AtomicU64,
}

impl CountingState {
    pub fn new(inner: Arc<dyn CtState>) -> Arc<Self> {
        Arc::new(CountingState { inner, calls: AtomicU64::new(0) })
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }
}

impl CtState for CountingState {
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn amplitude(&self, x: &[bool]) -> Result<Complex64> {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.amplitude(x)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Result<Bits> {
        self.inner.sample(rng)
    }

    fn sampler_distribution(&self) -> Result<BTreeMap<Bits, f64>> {
        self.inner.sampler_distribution()
    }

    fn cost_factor(&self) -> u64 {
        self.inner.cost_factor()
    }
}
