use super::density::{check_dims, DensityMatrix};
use crate::{ComplexMatrix, Error, Result, C64};

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    let mut out = ComplexMatrix::zeros(ar * br, ac * bc);
    for ja in 0..ac {
        for ia in 0..ar {
            let x = a[(ia, ja)];
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            for jb in 0..bc {
                for ib in 0..br {
                    out[(ia * br + ib, ja * bc + jb)] = x * b[(ib, jb)];
                }
            }
        }
    }
    out
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Linear offsets of every multi-index over `subset` (row-major within the
/// subset), in the full system's index space.
fn offsets(dims: &[usize], subset: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let mut out = vec![0usize];
    for &k in subset {
        let mut next = Vec::with_capacity(out.len() * dims[k]);
        for &base in &out {
            for i in 0..dims[k] {
                next.push(base + i * st[k]);
            }
        }
        out = next;
    }
    out
}

fn normalize_subset(subset: &[usize], n_sub: usize, what: &str) -> Result<Vec<usize>> {
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != subset.len() {
        return Err(Error::dim(format!("{what} lists a subsystem twice: {subset:?}")));
    }
    if let Some(&bad) = s.iter().find(|&&k| k >= n_sub) {
        return Err(Error::dim(format!("{what}: subsystem {bad} out of range for {n_sub} subsystems")));
    }
    Ok(s)
}

fn complement(subset: &[usize], n_sub: usize) -> Vec<usize> {
    (0..n_sub).filter(|k| !subset.contains(k)).collect()
}

/// Reduced state on the subsystems in `keep` (kept in their original order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let (mat, dims) = partial_trace_op(rho.matrix(), rho.dims(), keep)?;
    Ok(DensityMatrix::new_unchecked(mat, dims))
}

/// Partial trace of an arbitrary square operator. Returns the reduced
/// operator and its dims.
pub fn partial_trace_op(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<(ComplexMatrix, Vec<usize>)> {
    if m.nrows() != m.ncols() {
        return Err(Error::dim("partial trace needs a square operator"));
    }
    check_dims(dims, m.nrows())?;
    let keep = normalize_subset(keep, dims.len(), "partial trace")?;
    if keep.is_empty() {
        return Err(Error::dim("partial trace must keep at least one subsystem"));
    }
    let traced = complement(&keep, dims.len());
    let ok = offsets(dims, &keep);
    let ot = offsets(dims, &traced);
    let nk = ok.len();
    let mut out = ComplexMatrix::zeros(nk, nk);
    for j in 0..nk {
        for i in 0..nk {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &ot {
                acc += m[(ok[i] + t, ok[j] + t)];
            }
            out[(i, j)] = acc;
        }
    }
    let kept_dims = keep.iter().map(|&k| dims[k]).collect();
    Ok((out, kept_dims))
}

/// `Tr_rest(l r†)` without forming the product. `l` and `r` have one row per
/// basis state of the full system and any number of columns.
pub fn partial_trace_of_product(
    l: faer::MatRef<'_, C64>,
    r: faer::MatRef<'_, C64>,
    dims: &[usize],
    keep: &[usize],
) -> Result<ComplexMatrix> {
    if l.nrows() != r.nrows() || l.ncols() != r.ncols() {
        return Err(Error::dim("factor shapes differ"));
    }
    check_dims(dims, l.nrows())?;
    let keep = normalize_subset(keep, dims.len(), "partial trace")?;
    if keep.is_empty() {
        return Err(Error::dim("partial trace must keep at least one subsystem"));
    }
    let traced = complement(&keep, dims.len());
    let ok = offsets(dims, &keep);
    let ot = offsets(dims, &traced);
    let (nk, m) = (ok.len(), l.ncols());
    let mut out = ComplexMatrix::zeros(nk, nk);
    let mut lt = ComplexMatrix::zeros(nk, m);
    let mut rt = ComplexMatrix::zeros(nk, m);
    for &t in &ot {
        for c in 0..m {
            for (i, &o) in ok.iter().enumerate() {
                lt[(i, c)] = l[(o + t, c)];
                rt[(i, c)] = r[(o + t, c)];
            }
        }
        faer::linalg::matmul::matmul(
            out.as_mut(),
            faer::Accum::Add,
            lt.as_ref(),
            rt.adjoint(),
            C64::new(1.0, 0.0),
            faer::get_global_parallelism(),
        );
    }
    Ok(out)
}

/// Transpose on one tensor factor.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<ComplexMatrix> {
    partial_transpose_op(rho.matrix(), rho.dims(), &[subsystem])
}

/// Transpose on every subsystem in `subsystems`.
pub fn partial_transpose_op(m: &ComplexMatrix, dims: &[usize], subsystems: &[usize]) -> Result<ComplexMatrix> {
    if m.nrows() != m.ncols() {
        return Err(Error::dim("partial transpose needs a square operator"));
    }
    check_dims(dims, m.nrows())?;
    let tr = normalize_subset(subsystems, dims.len(), "partial transpose")?;
    let rest = complement(&tr, dims.len());
    let ot = offsets(dims, &tr);
    let or = offsets(dims, &rest);
    let n = m.nrows();
    let mut out = ComplexMatrix::zeros(n, n);
    for &y in &or {
        for &u in &ot {
            for &x in &or {
                for &t in &ot {
                    out[(x + t, y + u)] = m[(x + u, y + t)];
                }
            }
        }
    }
    Ok(out)
}

/// Reorders subsystems: output subsystem `k` is input subsystem `perm[k]`.
pub fn permute_subsystems(rho: &DensityMatrix, perm: &[usize]) -> Result<DensityMatrix> {
    let (mat, dims) = permute_op(rho.matrix(), rho.dims(), perm)?;
    Ok(DensityMatrix::new_unchecked(mat, dims))
}

pub fn permute_op(m: &ComplexMatrix, dims: &[usize], perm: &[usize]) -> Result<(ComplexMatrix, Vec<usize>)> {
    check_dims(dims, m.nrows())?;
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..dims.len()).collect::<Vec<_>>() {
        return Err(Error::dim(format!("{perm:?} is not a permutation of {} subsystems", dims.len())));
    }
    // Offsets enumerated in the new order give the old linear index of each new basis state.
    let map = offsets(dims, perm);
    let n = m.nrows();
    let out = ComplexMatrix::from_fn(n, n, |a, b| m[(map[a], map[b])]);
    let new_dims = perm.iter().map(|&k| dims[k]).collect();
    Ok((out, new_dims))
}
