//! CSV and binary (`PBSG`) serialization of grid functions and sinograms.
//!
//! Binary layout, all little-endian:
//!
//! ```text
//! "PBSG"  u8 version (=1)  u8 kind (0 = grid function, 1 = sinogram)
//! kind 0: u32 n, n × f64 origin, n × f64 spacing, n × u64 shape,
//!         then (re, im) f64 pairs in row-major order
//! kind 1: u32 n, u8 parity, u32 direction count,
//!         per direction: n × f64 components, f64 weight, u32 antipode,
//!         f64 t_min, f64 t_max, u64 t_count,
//!         then (re, im) f64 pairs, direction-major
//! ```

use std::io::{Read, Write};
use std::sync::Arc;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grids::{BoxGrid, DirectionGrid, GridFunction, Parity, Sinogram, TAxis};

const MAGIC: &[u8; 4] = b"PBSG";
const VERSION: u8 = 1;
const KIND_GRID: u8 = 0;
const KIND_SINO: u8 = 1;

/// One row per sample: `x0,..,x{n-1},re,im`.
pub fn write_grid_csv<W: Write>(u: &GridFunction, mut out: W) -> Result<()> {
    let n = u.dim();
    let header: Vec<String> = (0..n).map(|k| format!("x{k}")).chain(["re".into(), "im".into()]).collect();
    writeln!(out, "{}", header.join(","))?;
    for (i, v) in u.values.iter().enumerate() {
        let p = u.grid.point(i);
        for x in &p {
            write!(out, "{x:.17e},")?;
        }
        writeln!(out, "{:.17e},{:.17e}", v.re, v.im)?;
    }
    Ok(())
}

/// One row per sample: `dir,omega0,..,t,re,im`.
pub fn write_sinogram_csv<W: Write>(s: &Sinogram, mut out: W) -> Result<()> {
    let n = s.n();
    let header: Vec<String> = std::iter::once("dir".to_string())
        .chain((0..n).map(|k| format!("omega{k}")))
        .chain(["t".into(), "re".into(), "im".into()])
        .collect();
    writeln!(out, "{}", header.join(","))?;
    let ts = s.t.values();
    for (i, omega) in s.dirs.directions.iter().enumerate() {
        for (j, t) in ts.iter().enumerate() {
            write!(out, "{i},")?;
            for c in omega {
                write!(out, "{c:.17e},")?;
            }
            let v = s.at(i, j);
            writeln!(out, "{t:.17e},{:.17e},{:.17e}", v.re, v.im)?;
        }
    }
    Ok(())
}

fn write_values<W: Write>(values: &[Complex64], out: &mut W) -> Result<()> {
    for v in values {
        out.write_f64::<LittleEndian>(v.re)?;
        out.write_f64::<LittleEndian>(v.im)?;
    }
    Ok(())
}

fn read_values<R: Read>(count: usize, input: &mut R) -> Result<Vec<Complex64>> {
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        let re = input.read_f64::<LittleEndian>()?;
        let im = input.read_f64::<LittleEndian>()?;
        values.push(Complex64::new(re, im));
    }
    Ok(values)
}

fn write_header<W: Write>(kind: u8, out: &mut W) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_u8(VERSION)?;
    out.write_u8(kind)?;
    Ok(())
}

fn read_header<R: Read>(input: &mut R) -> Result<u8> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!("bad magic {magic:?}")));
    }
    let version = input.read_u8()?;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    Ok(input.read_u8()?)
}

fn read_dim<R: Read>(input: &mut R) -> Result<usize> {
    let n = input.read_u32::<LittleEndian>()? as usize;
    if n == 0 || n > 16 {
        return Err(Error::Format(format!("implausible dimension {n}")));
    }
    Ok(n)
}

pub fn write_grid_binary<W: Write>(u: &GridFunction, mut out: W) -> Result<()> {
    write_header(KIND_GRID, &mut out)?;
    out.write_u32::<LittleEndian>(u.dim() as u32)?;
    for &o in &u.grid.origin {
        out.write_f64::<LittleEndian>(o)?;
    }
    for &s in &u.grid.spacing {
        out.write_f64::<LittleEndian>(s)?;
    }
    for &m in &u.grid.shape {
        out.write_u64::<LittleEndian>(m as u64)?;
    }
    write_values(&u.values, &mut out)
}

pub fn read_grid_binary<R: Read>(mut input: R) -> Result<GridFunction> {
    let kind = read_header(&mut input)?;
    if kind != KIND_GRID {
        return Err(Error::Format(format!("expected a grid function, found kind {kind}")));
    }
    let n = read_dim(&mut input)?;
    let mut origin = Vec::with_capacity(n);
    for _ in 0..n {
        origin.push(input.read_f64::<LittleEndian>()?);
    }
    let mut spacing = Vec::with_capacity(n);
    for _ in 0..n {
        spacing.push(input.read_f64::<LittleEndian>()?);
    }
    let mut shape = Vec::with_capacity(n);
    for _ in 0..n {
        shape.push(input.read_u64::<LittleEndian>()? as usize);
    }
    let grid = BoxGrid::new(origin, spacing, shape)?;
    let values = read_values(grid.len(), &mut input)?;
    GridFunction::new(grid, values)
}

pub fn write_sinogram_binary<W: Write>(s: &Sinogram, mut out: W) -> Result<()> {
    write_header(KIND_SINO, &mut out)?;
    out.write_u32::<LittleEndian>(s.n() as u32)?;
    out.write_u8(s.parity.code())?;
    out.write_u32::<LittleEndian>(s.dirs.len() as u32)?;
    for i in 0..s.dirs.len() {
        for &c in &s.dirs.directions[i] {
            out.write_f64::<LittleEndian>(c)?;
        }
        out.write_f64::<LittleEndian>(s.dirs.weights[i])?;
        out.write_u32::<LittleEndian>(s.dirs.antipode[i] as u32)?;
    }
    out.write_f64::<LittleEndian>(s.t.t_min)?;
    out.write_f64::<LittleEndian>(s.t.t_max)?;
    out.write_u64::<LittleEndian>(s.t.count as u64)?;
    write_values(&s.values, &mut out)
}

pub fn read_sinogram_binary<R: Read>(mut input: R) -> Result<Sinogram> {
    let kind = read_header(&mut input)?;
    if kind != KIND_SINO {
        return Err(Error::Format(format!("expected a sinogram, found kind {kind}")));
    }
    let n = read_dim(&mut input)?;
    let parity = Parity::from_code(input.read_u8()?)?;
    let count = input.read_u32::<LittleEndian>()? as usize;
    let mut directions = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    let mut antipode = Vec::with_capacity(count);
    for _ in 0..count {
        let mut d = Vec::with_capacity(n);
        for _ in 0..n {
            d.push(input.read_f64::<LittleEndian>()?);
        }
        directions.push(d);
        weights.push(input.read_f64::<LittleEndian>()?);
        let a = input.read_u32::<LittleEndian>()? as usize;
        if a >= count {
            return Err(Error::Format(format!("antipode index {a} out of range")));
        }
        antipode.push(a);
    }
    let t_min = input.read_f64::<LittleEndian>()?;
    let t_max = input.read_f64::<LittleEndian>()?;
    let t_count = input.read_u64::<LittleEndian>()? as usize;
    let t = TAxis::new(t_min, t_max, t_count).map_err(|e| Error::Format(e.to_string()))?;
    let values = read_values(count * t_count, &mut input)?;
    let dirs = DirectionGrid { n, directions, weights, antipode };
    Sinogram::new(Arc::new(dirs), t, values, parity)
}
