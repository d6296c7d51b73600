use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::field::Field;
use super::mesh::Grid;
use crate::error::{Error, Result};

/// CSV with columns `x1, …, xd, value`, one row per node in row-major order.
pub fn write_csv(field: &Field<f64>, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let header: Vec<String> = (1..=field.grid.dim).map(|i| format!("x{i}")).collect();
    writeln!(w, "{},value", header.join(","))?;
    for (i, v) in field.values.iter().enumerate() {
        for x in field.grid.point(i) {
            write!(w, "{x:?},")?;
        }
        writeln!(w, "{v:?}")?;
    }
    w.flush()?;
    Ok(())
}

/// Little-endian binary: `d: u64, N: u64, R_box: f64`, then `N^d` values as `f64`, row-major.
pub fn write_binary(field: &Field<f64>, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&(field.grid.dim as u64).to_le_bytes())?;
    w.write_all(&(field.grid.n as u64).to_le_bytes())?;
    w.write_all(&field.grid.r_box.to_le_bytes())?;
    for v in &field.values {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_binary(path: &Path, label: &str) -> Result<Field<f64>> {
    let mut r = BufReader::new(File::open(path)?);
    let mut word = [0u8; 8];
    let mut next = |r: &mut BufReader<File>| -> Result<[u8; 8]> {
        r.read_exact(&mut word)?;
        Ok(word)
    };
    let dim = u64::from_le_bytes(next(&mut r)?) as usize;
    let n = u64::from_le_bytes(next(&mut r)?) as usize;
    let r_box = f64::from_le_bytes(next(&mut r)?);
    let grid = Grid::new(dim, r_box, n)?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        values.push(f64::from_le_bytes(next(&mut r)?));
    }
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(Error::Io(format!(
            "{} trailing bytes in field dump",
            rest.len()
        )));
    }
    Field::new(grid, values, label)
}
