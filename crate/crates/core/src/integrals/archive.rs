//! Binary tensor archive.
//!
//! Layout: the magic bytes `ALCH1`, then records until end of file. Each
//! record is a u64 name length, the UTF-8 name, a u64 rank, `rank` u64
//! dimensions and the row-major f64 payload. All integers and floats are
//! little-endian.

use std::io::{Read, Write};
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 5] = b"ALCH1";

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub name: String,
    pub dims: Vec<usize>,
    pub data: Vec<f64>,
}

impl Tensor {
    pub fn new(name: impl Into<String>, dims: Vec<usize>, data: Vec<f64>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), data.len());
        Tensor {
            name: name.into(),
            dims,
            data,
        }
    }

    pub fn from_matrix(name: impl Into<String>, m: &DMatrix<f64>) -> Self {
        let (r, c) = m.shape();
        let data = (0..r)
            .flat_map(|i| (0..c).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)])
            .collect();
        Tensor::new(name, vec![r, c], data)
    }

    pub fn to_matrix(&self) -> Result<DMatrix<f64>> {
        if self.dims.len() != 2 {
            return Err(Error::Shape {
                name: self.name.clone(),
                expected: vec![0, 0],
                found: self.dims.clone(),
            });
        }
        Ok(DMatrix::from_row_slice(self.dims[0], self.dims[1], &self.data))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TensorArchive {
    pub tensors: Vec<Tensor>,
}

impl TensorArchive {
    pub fn push(&mut self, t: Tensor) {
        self.tensors.push(t);
    }

    pub fn get(&self, name: &str) -> Option<&Tensor> {
        self.tensors.iter().find(|t| t.name == name)
    }

    pub fn require(&self, name: &str) -> Result<&Tensor> {
        self.get(name)
            .ok_or_else(|| Error::Archive(format!("missing tensor `{name}`")))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_to(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        w.write_all(MAGIC)?;
        for t in &self.tensors {
            w.write_all(&(t.name.len() as u64).to_le_bytes())?;
            w.write_all(t.name.as_bytes())?;
            w.write_all(&(t.dims.len() as u64).to_le_bytes())?;
            for &d in &t.dims {
                w.write_all(&(d as u64).to_le_bytes())?;
            }
            for &x in &t.data {
                w.write_all(&x.to_le_bytes())?;
            }
        }
        Ok(())
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
            return Err(Error::MagicMismatch);
        }
        let mut cursor = &bytes[MAGIC.len()..];
        let mut archive = TensorArchive::default();
        while !cursor.is_empty() {
            let name_len = read_u64(&mut cursor)? as usize;
            if name_len > cursor.len() {
                return Err(Error::Archive("truncated record name".into()));
            }
            let name = std::str::from_utf8(&cursor[..name_len])
                .map_err(|_| Error::Archive("record name is not UTF-8".into()))?
                .to_string();
            cursor = &cursor[name_len..];
            let rank = read_u64(&mut cursor)? as usize;
            if rank > 8 {
                return Err(Error::Archive(format!("implausible rank {rank} for `{name}`")));
            }
            let dims = (0..rank)
                .map(|_| read_u64(&mut cursor).map(|d| d as usize))
                .collect::<Result<Vec<_>>>()?;
            let count = dims
                .iter()
                .try_fold(1usize, |acc, &d| acc.checked_mul(d))
                .filter(|&c| c.checked_mul(8).is_some_and(|b| b <= cursor.len()))
                .ok_or_else(|| Error::Archive(format!("truncated payload for `{name}`")))?;
            let data = cursor[..count * 8]
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect();
            cursor = &cursor[count * 8..];
            archive.tensors.push(Tensor { name, dims, data });
        }
        Ok(archive)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut buf = std::io::BufWriter::new(&mut file);
        self.write_to(&mut buf).map_err(|e| Error::io(path, e))?;
        buf.flush().map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut bytes = Vec::new();
        std::fs::File::open(path)
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| Error::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

fn read_u64(cursor: &mut &[u8]) -> Result<u64> {
    if cursor.len() < 8 {
        return Err(Error::Archive("unexpected end of archive".into()));
    }
    let v = u64::from_le_bytes(cursor[..8].try_into().unwrap());
    *cursor = &cursor[8..];
    Ok(v)
}
