//! Flat binary container for fields and integer lattices.
//!
//! Layout, all little-endian:
//!
//! | offset | size | content                                            |
//! |--------|------|----------------------------------------------------|
//! | 0      | 8    | magic `MXFIELD\0`                                  |
//! | 8      | 2    | format version, currently 1                        |
//! | 10     | 1    | dimension `d`                                      |
//! | 11     | 1    | tag: 0 physical, 1 frequency, 2 index map          |
//! | 12     | 4    | samples per axis `N` (u32)                         |
//! | 16     | 8    | half width `L` (f64)                               |
//! | 24     | 8    | number of points `N^d` (u64)                       |
//! | 32     | ...  | payload, row-major with the last axis fastest      |
//!
//! Field payloads store each point as two f64 (real, imaginary). Index maps
//! store one u32 per point.

use std::io::{Read, Write};

use super::{Domain, Field, Grid};
use crate::error::{Error, Result};
use crate::C64;

pub const MAGIC: &[u8; 8] = b"MXFIELD\0";
const VERSION: u16 = 1;
const TAG_INDEX: u8 = 2;

fn write_header<W: Write>(w: &mut W, grid: &Grid, tag: u8) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&[grid.dim() as u8, tag])?;
    w.write_all(&(grid.samples_per_axis() as u32).to_le_bytes())?;
    w.write_all(&grid.half_width().to_le_bytes())?;
    w.write_all(&(grid.len() as u64).to_le_bytes())?;
    Ok(())
}

fn read_header<R: Read>(r: &mut R) -> Result<(Grid, u8)> {
    let mut head = [0u8; 32];
    r.read_exact(&mut head)?;
    if &head[0..8] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = u16::from_le_bytes([head[8], head[9]]);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let dim = head[10] as usize;
    let tag = head[11];
    let n = u32::from_le_bytes(head[12..16].try_into().unwrap()) as usize;
    let l = f64::from_le_bytes(head[16..24].try_into().unwrap());
    let count = u64::from_le_bytes(head[24..32].try_into().unwrap()) as usize;
    let grid = Grid::new(dim, n, l).map_err(|e| Error::Format(e.to_string()))?;
    if count != grid.len() {
        return Err(Error::Format(format!("point count {count} does not match {n}^{dim}")));
    }
    Ok((grid, tag))
}

pub fn write_field<W: Write>(mut w: W, f: &Field) -> Result<()> {
    write_header(&mut w, f.grid(), f.domain().tag())?;
    let mut buf = Vec::with_capacity(16 * f.values().len());
    for v in f.values() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_field<R: Read>(mut r: R) -> Result<Field> {
    let (grid, tag) = read_header(&mut r)?;
    let domain = match tag {
        0 => Domain::Physical,
        1 => Domain::Frequency,
        t => return Err(Error::Format(format!("tag {t} is not a field"))),
    };
    let mut buf = vec![0u8; 16 * grid.len()];
    r.read_exact(&mut buf)?;
    let values = buf
        .chunks_exact(16)
        .map(|c| {
            C64::new(
                f64::from_le_bytes(c[0..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..16].try_into().unwrap()),
            )
        })
        .collect();
    Field::new(grid, domain, values)
}

pub fn write_index_map<W: Write>(mut w: W, grid: &Grid, indices: &[u32]) -> Result<()> {
    if indices.len() != grid.len() {
        return Err(Error::Contract(format!(
            "index map has {} entries, grid needs {}",
            indices.len(),
            grid.len()
        )));
    }
    write_header(&mut w, grid, TAG_INDEX)?;
    let buf: Vec<u8> = indices.iter().flat_map(|i| i.to_le_bytes()).collect();
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_index_map<R: Read>(mut r: R) -> Result<(Grid, Vec<u32>)> {
    let (grid, tag) = read_header(&mut r)?;
    if tag != TAG_INDEX {
        return Err(Error::Format(format!("tag {tag} is not an index map")));
    }
    let mut buf = vec![0u8; 4 * grid.len()];
    r.read_exact(&mut buf)?;
    let idx = buf
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((grid, idx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout_is_fixed() {
        let g = Grid::new(1, 4, 2.0).unwrap();
        let f = Field::new(
            g,
            Domain::Frequency,
            vec![
                C64::new(1.0, -1.0),
                C64::new(0.5, 0.0),
                C64::new(0.0, 2.0),
                C64::new(-3.0, 0.25),
            ],
        )
        .unwrap();
        let mut bytes = Vec::new();
        write_field(&mut bytes, &f).unwrap();
        assert_eq!(bytes.len(), 32 + 4 * 16);
        assert_eq!(&bytes[0..8], b"MXFIELD\0");
        assert_eq!(&bytes[8..12], &[1, 0, 1, 1]);
        assert_eq!(&bytes[12..16], &4u32.to_le_bytes());
        assert_eq!(&bytes[16..24], &2.0f64.to_le_bytes());
        assert_eq!(&bytes[24..32], &4u64.to_le_bytes());
        assert_eq!(&bytes[32..40], &1.0f64.to_le_bytes());
        assert_eq!(&bytes[40..48], &(-1.0f64).to_le_bytes());
        assert_eq!(read_field(&bytes[..]).unwrap(), f);
    }

    #[test]
    fn rejects_truncated_and_foreign_input() {
        assert!(read_field(&b"NOTAFIELD"[..]).is_err());
        let g = Grid::new(1, 4, 1.0).unwrap();
        let mut bytes = Vec::new();
        write_field(&mut bytes, &Field::zeros(g, Domain::Physical)).unwrap();
        assert!(read_field(&bytes[..bytes.len() - 1]).is_err());
        let mut idx = Vec::new();
        write_index_map(&mut idx, &g, &[0, 1, 2, 3]).unwrap();
        assert!(read_field(&idx[..]).is_err());
        assert_eq!(read_index_map(&idx[..]).unwrap().1, vec![0, 1, 2, 3]);
    }
}
