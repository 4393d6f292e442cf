//! Binary snapshot files.
//!
//! Layout (little endian):
//!
//! ```text
//! "APEV1"                          5 bytes
//! N1, N2, N3                       u32 each
//! field count                      u32
//! t                                f64
//! per field: name length (u16), UTF-8 name, kind (u8: 0 = Ω, 1 = Γ0, 2 = Γ1)
//! per field: values as f64, row-major in (i1, i2[, i3])
//! ```

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::field::{BoundaryField, ScalarField, Side};
use crate::grid::Grid;

pub const MAGIC: &[u8; 5] = b"APEV1";

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("I/O: {0}")]
    Io(#[from] io::Error),
    #[error("not a snapshot (bad magic)")]
    Magic,
    #[error("unknown field kind {0}")]
    Kind(u8),
    #[error("field name is not UTF-8")]
    Name,
    #[error("snapshot grid {found:?} does not match {expected:?}")]
    GridMismatch { found: (usize, usize, usize), expected: (usize, usize, usize) },
    #[error("missing field `{0}`")]
    Missing(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum FieldData {
    Interior(ScalarField),
    Boundary(BoundaryField),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub dims: (usize, usize, usize),
    pub t: f64,
    pub fields: Vec<(String, FieldData)>,
}

impl Snapshot {
    pub fn new(grid: &Grid, t: f64) -> Self {
        Self { dims: (grid.n1, grid.n2, grid.n3), t, fields: Vec::new() }
    }

    pub fn push_interior(&mut self, name: &str, f: &ScalarField) {
        self.fields.push((name.to_string(), FieldData::Interior(f.clone())));
    }

    pub fn push_boundary(&mut self, name: &str, f: &BoundaryField) {
        self.fields.push((name.to_string(), FieldData::Boundary(f.clone())));
    }

    pub fn interior(&self, name: &str) -> Result<&ScalarField, SnapshotError> {
        self.fields
            .iter()
            .find_map(|(n, d)| match d {
                FieldData::Interior(f) if n == name => Some(f),
                _ => None,
            })
            .ok_or_else(|| SnapshotError::Missing(name.to_string()))
    }

    pub fn boundary(&self, name: &str) -> Result<&BoundaryField, SnapshotError> {
        self.fields
            .iter()
            .find_map(|(n, d)| match d {
                FieldData::Boundary(f) if n == name => Some(f),
                _ => None,
            })
            .ok_or_else(|| SnapshotError::Missing(name.to_string()))
    }

    pub fn check_grid(&self, grid: &Grid) -> Result<(), SnapshotError> {
        let expected = (grid.n1, grid.n2, grid.n3);
        if self.dims != expected {
            return Err(SnapshotError::GridMismatch { found: self.dims, expected });
        }
        Ok(())
    }

    pub fn write(&self, mut out: impl Write) -> Result<(), SnapshotError> {
        let (n1, n2, n3) = self.dims;
        out.write_all(MAGIC)?;
        for v in [n1, n2, n3, self.fields.len()] {
            out.write_all(&(v as u32).to_le_bytes())?;
        }
        out.write_all(&self.t.to_le_bytes())?;
        for (name, data) in &self.fields {
            out.write_all(&(name.len() as u16).to_le_bytes())?;
            out.write_all(name.as_bytes())?;
            let kind: u8 = match data {
                FieldData::Interior(_) => 0,
                FieldData::Boundary(b) if b.side == Side::Bottom => 1,
                FieldData::Boundary(_) => 2,
            };
            out.write_all(&[kind])?;
        }
        let mut buf = Vec::new();
        for (_, data) in &self.fields {
            match data {
                FieldData::Interior(f) => {
                    for i1 in 0..n1 {
                        for i2 in 0..n2 {
                            for i3 in 0..n3 {
                                buf.extend_from_slice(&f.data[(i3 * n1 + i1) * n2 + i2].to_le_bytes());
                            }
                        }
                    }
                }
                FieldData::Boundary(b) => {
                    for v in &b.data {
                        buf.extend_from_slice(&v.to_le_bytes());
                    }
                }
            }
        }
        out.write_all(&buf)?;
        Ok(())
    }

    pub fn read(mut input: impl Read) -> Result<Self, SnapshotError> {
        let mut magic = [0u8; 5];
        input.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(SnapshotError::Magic);
        }
        let mut u32s = [0usize; 4];
        for v in u32s.iter_mut() {
            let mut b = [0u8; 4];
            input.read_exact(&mut b)?;
            *v = u32::from_le_bytes(b) as usize;
        }
        let [n1, n2, n3, count] = u32s;
        let mut tb = [0u8; 8];
        input.read_exact(&mut tb)?;
        let t = f64::from_le_bytes(tb);
        let mut headers = Vec::with_capacity(count);
        for _ in 0..count {
            let mut lb = [0u8; 2];
            input.read_exact(&mut lb)?;
            let mut name = vec![0u8; u16::from_le_bytes(lb) as usize];
            input.read_exact(&mut name)?;
            let name = String::from_utf8(name).map_err(|_| SnapshotError::Name)?;
            let mut kind = [0u8; 1];
            input.read_exact(&mut kind)?;
            headers.push((name, kind[0]));
        }
        let mut read_f64s = |n: usize| -> Result<Vec<f64>, SnapshotError> {
            let mut raw = vec![0u8; 8 * n];
            input.read_exact(&mut raw)?;
            Ok(raw.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
        };
        let mut fields = Vec::with_capacity(count);
        for (name, kind) in headers {
            let data = match kind {
                0 => {
                    let raw = read_f64s(n1 * n2 * n3)?;
                    let mut data = vec![0.0; raw.len()];
                    let mut it = raw.into_iter();
                    for i1 in 0..n1 {
                        for i2 in 0..n2 {
                            for i3 in 0..n3 {
                                data[(i3 * n1 + i1) * n2 + i2] = it.next().unwrap();
                            }
                        }
                    }
                    FieldData::Interior(ScalarField::from_vec(data))
                }
                1 | 2 => {
                    let side = if kind == 1 { Side::Bottom } else { Side::Top };
                    FieldData::Boundary(BoundaryField::from_vec(side, read_f64s(n1 * n2)?))
                }
                k => return Err(SnapshotError::Kind(k)),
            };
            fields.push((name, data));
        }
        Ok(Self { dims: (n1, n2, n3), t, fields })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_preserves_bits() {
        let g = Grid::new(4, 6, 5).unwrap();
        let mut s = Snapshot::new(&g, 0.125);
        s.push_interior("R", &g.scalar(|x, y, z| x + 10.0 * y + 100.0 * z));
        s.push_boundary("w", &g.boundary(Side::Top, |x, y| x * y));
        let mut bytes = Vec::new();
        s.write(&mut bytes).unwrap();
        assert_eq!(&bytes[..5], MAGIC);
        let back = Snapshot::read(&bytes[..]).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn interior_values_are_written_with_x3_fastest() {
        let g = Grid::new(4, 4, 5).unwrap();
        let mut s = Snapshot::new(&g, 0.0);
        s.push_interior("z", &g.scalar(|_, _, z| z));
        let mut bytes = Vec::new();
        s.write(&mut bytes).unwrap();
        let header = 5 + 16 + 8 + 2 + 1 + 1;
        let first: Vec<f64> = bytes[header..header + 40]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        assert_eq!(first, g.x3);
    }

    #[test]
    fn bad_magic_is_rejected() {
        assert!(matches!(Snapshot::read(&b"NOPE1xxxxxxxxxxxxxxxxxxxxxx"[..]), Err(SnapshotError::Magic)));
    }
}
