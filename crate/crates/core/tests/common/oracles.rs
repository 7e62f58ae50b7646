//! Reference computations that share no code with the coefficient engine under test.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use schur_core::{clebsch_gordan, HalfInt, RadicalRational};

/// Coupled states |J, M> of two spins built by lowering from the stretched state, with the
/// Condon-Shortley choice that <j1 j1; j2 J-j1 | J J> is positive.
///
/// Returns a map (J, M) -> amplitudes indexed by (m1, m2) codes, where code k means m = -j + k.
pub fn coupled_states_by_lowering(dj1: i64, dj2: i64) -> BTreeMap<(i64, i64), Vec<f64>> {
    let n1 = (dj1 + 1) as usize;
    let n2 = (dj2 + 1) as usize;
    let dim = n1 * n2;
    let idx = |k1: usize, k2: usize| k1 * n2 + k2;
    let m_of = |dj: i64, k: usize| (-dj + 2 * k as i64) as f64 / 2.0;
    let lower = |v: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; dim];
        let j1 = dj1 as f64 / 2.0;
        let j2 = dj2 as f64 / 2.0;
        for k1 in 0..n1 {
            for k2 in 0..n2 {
                let a = v[idx(k1, k2)];
                if a == 0.0 {
                    continue;
                }
                if k1 > 0 {
                    let m = m_of(dj1, k1);
                    out[idx(k1 - 1, k2)] += a * (j1 * (j1 + 1.0) - m * (m - 1.0)).sqrt();
                }
                if k2 > 0 {
                    let m = m_of(dj2, k2);
                    out[idx(k1, k2 - 1)] += a * (j2 * (j2 + 1.0) - m * (m - 1.0)).sqrt();
                }
            }
        }
        out
    };
    let mut states: BTreeMap<(i64, i64), Vec<f64>> = BTreeMap::new();
    let mut dj = dj1 + dj2;
    while dj >= (dj1 - dj2).abs() {
        // Highest weight: orthogonal complement inside the M = J sector.
        let sector: Vec<(usize, usize)> = (0..n1)
            .flat_map(|k1| (0..n2).map(move |k2| (k1, k2)))
            .filter(|&(k1, k2)| (-dj1 + 2 * k1 as i64) + (-dj2 + 2 * k2 as i64) == dj)
            .collect();
        let mut top = vec![0.0; dim];
        for seed in &sector {
            let mut v = vec![0.0; dim];
            v[idx(seed.0, seed.1)] = 1.0;
            for (&(_, dm), w) in states.iter().filter(|((_, dm), _)| *dm == dj) {
                let _ = dm;
                let p: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                for (x, y) in v.iter_mut().zip(w) {
                    *x -= p * y;
                }
            }
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-9 {
                top = v.iter().map(|x| x / norm).collect();
                break;
            }
        }
        let lead = top[idx(n1 - 1, sector.iter().find(|s| s.0 == n1 - 1).map(|s| s.1).unwrap_or(0))];
        if lead < 0.0 {
            top.iter_mut().for_each(|x| *x = -*x);
        }
        let mut current = top;
        let mut dm = dj;
        loop {
            states.insert((dj, dm), current.clone());
            if dm == -dj {
                break;
            }
            let j = dj as f64 / 2.0;
            let m = dm as f64 / 2.0;
            let c = (j * (j + 1.0) - m * (m - 1.0)).sqrt();
            current = lower(&current).into_iter().map(|x| x / c).collect();
            dm -= 2;
        }
        dj -= 2;
    }
    states
}

fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    // n = s^2 * f with f square-free.
    let mut s = BigInt::one();
    let mut f = BigInt::one();
    let mut rest = n.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            s *= &p;
        }
        if e % 2 == 1 {
            f *= &p;
        }
        p += 1;
    }
    f *= rest;
    (s, f)
}

/// Exact sums of signed square roots, grouped by square-free part.
#[derive(Default, Debug, Clone)]
pub struct RadicalSum {
    terms: BTreeMap<BigInt, BigRational>,
}

impl RadicalSum {
    pub fn add(&mut self, r: &RadicalRational) {
        if r.is_zero() {
            return;
        }
        let q = r.radicand();
        // sqrt(a/b) = sqrt(a b) / b
        let (s, f) = square_free_split(&(q.numer() * q.denom()));
        let coeff = BigRational::new(s * BigInt::from(r.sign()), q.denom().clone());
        let entry = self.terms.entry(f).or_insert_with(BigRational::zero);
        *entry += coeff;
        let zero_keys: Vec<_> = self.terms.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
        for k in zero_keys {
            self.terms.remove(&k);
        }
    }

    /// The sum as a single signed radical, if it is one.
    pub fn as_radical(&self) -> Option<RadicalRational> {
        match self.terms.len() {
            0 => Some(RadicalRational::zero()),
            1 => {
                let (f, c) = self.terms.iter().next().unwrap();
                let sign = if c.is_negative() { -1 } else { 1 };
                Some(RadicalRational::new(sign, c * c * BigRational::from_integer(f.clone())))
            }
            _ => None,
        }
    }
}

fn h(d: i64) -> HalfInt {
    HalfInt::from_doubled(d)
}

/// {j1 j2 j12; j3 j j23} from the overlap of the two coupling orders of three spins.
pub fn six_j_by_contraction(d: [i64; 6]) -> RadicalRational {
    let [j1, j2, j12, j3, j, j23] = d;
    let tri = |a: i64, b: i64, c: i64| a >= (b - c).abs() && a <= b + c && (a + b + c) % 2 == 0;
    if !(tri(j1, j2, j12) && tri(j12, j3, j) && tri(j2, j3, j23) && tri(j1, j23, j)) {
        return RadicalRational::zero();
    }
    let m = j;
    let mut sum = RadicalSum::default();
    for m1 in (-j1..=j1).step_by(2) {
        for m2 in (-j2..=j2).step_by(2) {
            let m3 = m - m1 - m2;
            if m3.abs() > j3 || (j3 - m3) % 2 != 0 {
                continue;
            }
            let m12 = m1 + m2;
            let m23 = m2 + m3;
            if m12.abs() > j12 || m23.abs() > j23 {
                continue;
            }
            let a = clebsch_gordan(h(j1), h(m1), h(j2), h(m2), h(j12), h(m12)).unwrap();
            let b = clebsch_gordan(h(j12), h(m12), h(j3), h(m3), h(j), h(m)).unwrap();
            let c = clebsch_gordan(h(j2), h(m2), h(j3), h(m3), h(j23), h(m23)).unwrap();
            let e = clebsch_gordan(h(j1), h(m1), h(j23), h(m23), h(j), h(m)).unwrap();
            sum.add(&(&(&a * &b) * &(&c * &e)));
        }
    }
    let overlap = sum.as_radical().expect("overlap of coupled states is a single radical");
    let phase = if ((j1 + j2 + j3 + j) / 2) % 2 == 0 { 1 } else { -1 };
    let norm = BigRational::new(BigInt::one(), BigInt::from((j12 + 1) * (j23 + 1)));
    overlap * RadicalRational::new(phase, norm)
}
