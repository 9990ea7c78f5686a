//! Matrix persistence.
//!
//! Both formats store the subsystem dims and the row-major entries as pairs
//! of `f64` (real, imaginary).
//!
//! JSON: `{"dims": [..], "rows": r, "cols": c, "entries": [[re, im], ...]}`.
//!
//! Binary (little endian): magic `PBMX`, `u32` version (1), `u32` number of
//! dims, the dims as `u64`, `u64` rows, `u64` cols, then `rows * cols` pairs
//! of `f64`.

use crate::qlinalg::DensityMatrix;
use crate::{ComplexMatrix, Error, Result, C64};
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

const MAGIC: &[u8; 4] = b"PBMX";
const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub dims: Vec<usize>,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixRecord {
    pub fn from_matrix(m: &ComplexMatrix, dims: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        Self { dims: dims.to_vec(), rows: m.nrows(), cols: m.ncols(), entries }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::invalid(format!(
                "{} entries for a {}x{} matrix",
                self.entries.len(),
                self.rows,
                self.cols
            )));
        }
        if self.entries.iter().any(|e| !e[0].is_finite() || !e[1].is_finite()) {
            return Err(Error::invalid("non-finite matrix entry"));
        }
        let prod: usize = self.dims.iter().product();
        if self.dims.is_empty() || (prod != self.rows && prod != self.cols) {
            return Err(Error::dim(format!("dims {:?} do not match a {}x{} matrix", self.dims, self.rows, self.cols)));
        }
        let cols = self.cols;
        Ok(ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            let e = self.entries[i * cols + j];
            C64::new(e[0], e[1])
        }))
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.to_matrix()?, self.dims.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(self.dims.len() as u32).to_le_bytes())?;
        for &d in &self.dims {
            w.write_all(&(d as u64).to_le_bytes())?;
        }
        w.write_all(&(self.rows as u64).to_le_bytes())?;
        w.write_all(&(self.cols as u64).to_le_bytes())?;
        for e in &self.entries {
            w.write_all(&e[0].to_le_bytes())?;
            w.write_all(&e[1].to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::invalid("not a matrix file (bad magic)"));
        }
        let version = read_u32(&mut r)?;
        if version != VERSION {
            return Err(Error::invalid(format!("unsupported matrix format version {version}")));
        }
        let ndims = read_u32(&mut r)? as usize;
        let dims = (0..ndims).map(|_| read_u64(&mut r).map(|d| d as usize)).collect::<Result<Vec<_>>>()?;
        let rows = read_u64(&mut r)? as usize;
        let cols = read_u64(&mut r)? as usize;
        let mut entries = Vec::with_capacity(rows.saturating_mul(cols).min(1 << 24));
        for _ in 0..rows * cols {
            entries.push([read_f64(&mut r)?, read_f64(&mut r)?]);
        }
        Ok(Self { dims, rows, cols, entries })
    }
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(f64::from_le_bytes(b))
}

impl From<&DensityMatrix> for MatrixRecord {
    fn from(rho: &DensityMatrix) -> Self {
        Self::from_matrix(rho.matrix(), rho.dims())
    }
}
