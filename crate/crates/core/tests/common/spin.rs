//! Dense spin operators built from single-qubit ladder actions, independent of the library.

use num_complex::Complex64;

fn bit(n: usize, q: usize) -> usize {
    n - q
}

/// S_z on the subset (qubits 1-based, qubit 1 most significant, bit 1 = +1/2).
pub fn sz(n: usize, subset: &[usize], v: &[Complex64]) -> Vec<Complex64> {
    (0..v.len())
        .map(|x| {
            let m: f64 = subset.iter().map(|&q| if x >> bit(n, q) & 1 == 1 { 0.5 } else { -0.5 }).sum();
            v[x] * m
        })
        .collect()
}

/// S_+ (raise = true) or S_- on the subset.
pub fn ladder(n: usize, subset: &[usize], raise: bool, v: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); v.len()];
    for (x, &a) in v.iter().enumerate() {
        for &q in subset {
            let b = x >> bit(n, q) & 1;
            if (raise && b == 0) || (!raise && b == 1) {
                out[x ^ (1 << bit(n, q))] += a;
            }
        }
    }
    out
}

/// S^2 = S_- S_+ + S_z^2 + S_z.
pub fn s2(n: usize, subset: &[usize], v: &[Complex64]) -> Vec<Complex64> {
    let a = ladder(n, subset, false, &ladder(n, subset, true, v));
    let z = sz(n, subset, v);
    let zz = sz(n, subset, &z);
    (0..v.len()).map(|i| a[i] + zz[i] + z[i]).collect()
}

pub fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}
