#![allow(dead_code)]

use faer::Mat;
use pbits::qlinalg::{conjugate_by, DensityMatrix};
use pbits::randmat::{haar_unitary, random_density, RandomStream};
use pbits::{ComplexMatrix, C64};
use rand::Rng;

pub fn stream(label: &str, k: u64) -> RandomStream {
    RandomStream::new(20240611, label, k)
}

pub fn cx(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn diag(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    Mat::from_fn(n, n, |i, j| if i == j { cx(values[i]) } else { cx(0.0) })
}

/// Random probability vector with strictly positive entries.
pub fn probs(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.05).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

/// `V diag(p) V†`.
pub fn rotated(p: &[f64], v: &ComplexMatrix) -> DensityMatrix {
    DensityMatrix::new(conjugate_by(v.as_ref(), diag(p).as_ref()), vec![p.len()]).unwrap()
}

/// Two states diagonal in a shared random basis, with their spectra.
pub fn commuting_pair(label: &str, k: u64, n: usize) -> (DensityMatrix, DensityMatrix, Vec<f64>, Vec<f64>) {
    let s = stream(label, k);
    let mut rng = s.child("probs").rng();
    let p = probs(&mut rng, n);
    let q = probs(&mut rng, n);
    let v = haar_unitary(n, &s.child("basis")).unwrap();
    (rotated(&p, &v), rotated(&q, &v), p, q)
}

pub fn random_pair(label: &str, k: u64, n: usize) -> (DensityMatrix, DensityMatrix) {
    let s = stream(label, k);
    (
        random_density(n, 1, &s.child("rho")).unwrap(),
        random_density(n, 2, &s.child("sigma")).unwrap(),
    )
}

/// Partial trace by explicit index contraction over a multi-index.
pub fn brute_partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> ComplexMatrix {
    let n: usize = dims.iter().product();
    let digits = |mut idx: usize| {
        let mut out = vec![0; dims.len()];
        for k in (0..dims.len()).rev() {
            out[k] = idx % dims[k];
            idx /= dims[k];
        }
        out
    };
    let nk: usize = keep.iter().map(|&k| dims[k]).product();
    let kept_index = |d: &[usize]| keep.iter().fold(0, |acc, &k| acc * dims[k] + d[k]);
    let mut out = Mat::<C64>::zeros(nk, nk);
    for i in 0..n {
        let di = digits(i);
        for j in 0..n {
            let dj = digits(j);
            let traced_equal = (0..dims.len()).all(|k| keep.contains(&k) || di[k] == dj[k]);
            if traced_equal {
                out[(kept_index(&di), kept_index(&dj))] += m[(i, j)];
            }
        }
    }
    out
}

pub fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    pbits::qlinalg::max_abs_diff(a, b)
}

/// `Σ p log₂(p/q)`.
pub fn kl(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).filter(|(a, _)| **a > 0.0).map(|(a, b)| a * (a / b).log2()).sum()
}

/// `log₂(Σ p^α q^{1−α}) / (α − 1)`.
pub fn classical_renyi(p: &[f64], q: &[f64], alpha: f64) -> f64 {
    let s: f64 = p.iter().zip(q).map(|(a, b)| a.powf(alpha) * b.powf(1.0 - alpha)).sum();
    s.log2() / (alpha - 1.0)
}

/// Optimal diagonal test by greedy filling in decreasing likelihood ratio:
/// `min Σ tᵢqᵢ` subject to `Σ tᵢpᵢ ≥ 1 − ε`, `0 ≤ t ≤ 1`. Returns `−log₂ β`.
pub fn lp_hypothesis_testing(p: &[f64], q: &[f64], eps: f64) -> f64 {
    let mut idx: Vec<usize> = (0..p.len()).filter(|&i| p[i] > 0.0).collect();
    idx.sort_by(|&a, &b| (p[b] * q[a]).total_cmp(&(p[a] * q[b])));
    let mut need = 1.0 - eps;
    let mut beta = 0.0;
    for i in idx {
        if need <= 0.0 {
            break;
        }
        let t = (need / p[i]).min(1.0);
        beta += t * q[i];
        need -= t * p[i];
    }
    if beta <= 0.0 {
        f64::INFINITY
    } else {
        -beta.log2()
    }
}
