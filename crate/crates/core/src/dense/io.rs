//! Debug dumps of dense matrices.
//!
//! Binary: the d² entries in row-major order, each written as two
//! little-endian `f64` values (real, imaginary). No header; the qubit count
//! follows from the byte length `16·4^N`.
//!
//! CSV: a `row,col,re,im` header, then one line per entry in row-major order.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::DenseHermitian;
use crate::error::{Error, Result};

pub fn write_binary<W: Write>(m: &DenseHermitian, mut w: W) -> Result<()> {
    for z in m.entries() {
        w.write_all(&z.re.to_le_bytes())?;
        w.write_all(&z.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<DenseHermitian> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let entries = bytes.len() / 16;
    if bytes.len() % 16 != 0 || entries == 0 {
        return Err(Error::Parse(format!(
            "{} bytes is not a whole number of complex entries",
            bytes.len()
        )));
    }
    let dim = (entries as f64).sqrt().round() as usize;
    if dim * dim != entries || !dim.is_power_of_two() || dim < 2 {
        return Err(Error::Parse(format!(
            "{entries} entries is not a 2^N x 2^N matrix"
        )));
    }
    let data = bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    DenseHermitian::from_entries(dim.trailing_zeros() as usize, data)
}

pub fn write_csv<W: Write>(m: &DenseHermitian, mut w: W) -> Result<()> {
    writeln!(w, "row,col,re,im")?;
    let d = m.dim();
    for r in 0..d {
        for c in 0..d {
            let z = m.get(r, c);
            writeln!(w, "{r},{c},{},{}", z.re, z.im)?;
        }
    }
    Ok(())
}
