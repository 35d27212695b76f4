use std::io::{Read, Write};
use std::path::Path;

use ndarray::Array2;

use super::NnError;

pub const CHECKPOINT_MAGIC: &[u8; 8] = b"EDVCKPT1";

/// Writes named arrays as: magic, array count, then per array the name,
/// rank, dimensions and row-major little-endian f64 values. Integers are
/// little-endian u64.
pub fn write_checkpoint(path: impl AsRef<Path>, arrays: &[(String, &Array2<f64>)]) -> Result<(), NnError> {
    let mut buf = Vec::new();
    buf.extend_from_slice(CHECKPOINT_MAGIC);
    buf.extend_from_slice(&(arrays.len() as u64).to_le_bytes());
    for (name, a) in arrays {
        buf.extend_from_slice(&(name.len() as u64).to_le_bytes());
        buf.extend_from_slice(name.as_bytes());
        buf.extend_from_slice(&2u64.to_le_bytes());
        for d in a.shape() {
            buf.extend_from_slice(&(*d as u64).to_le_bytes());
        }
        for v in a.iter() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    std::fs::File::create(path)?.write_all(&buf)?;
    Ok(())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8], NnError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| NnError::Checkpoint("truncated".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u64(&mut self) -> Result<u64, NnError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn read_checkpoint(path: impl AsRef<Path>) -> Result<Vec<(String, Array2<f64>)>, NnError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    let mut c = Cursor { bytes: &bytes, pos: 0 };
    if c.take(8)? != CHECKPOINT_MAGIC {
        return Err(NnError::Checkpoint("bad magic".into()));
    }
    let count = c.u64()?;
    let mut out = Vec::new();
    for _ in 0..count {
        let len = c.u64()? as usize;
        let name = String::from_utf8(c.take(len)?.to_vec()).map_err(|_| NnError::Checkpoint("name is not UTF-8".into()))?;
        if c.u64()? != 2 {
            return Err(NnError::Checkpoint(format!("{name}: only rank-2 arrays are stored")));
        }
        let (r, k) = (c.u64()? as usize, c.u64()? as usize);
        let n = r.checked_mul(k).ok_or_else(|| NnError::Checkpoint("size overflow".into()))?;
        let raw = c.take(n.checked_mul(8).ok_or_else(|| NnError::Checkpoint("size overflow".into()))?)?;
        let data: Vec<f64> = raw.chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().unwrap())).collect();
        out.push((name, Array2::from_shape_vec((r, k), data).expect("length checked")));
    }
    if c.pos != bytes.len() {
        return Err(NnError::Checkpoint("trailing bytes".into()));
    }
    Ok(out)
}
