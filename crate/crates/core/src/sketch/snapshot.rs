//! `FDC1` snapshot of sketch state.
//!
//! Layout, all little-endian:
//!
//! ```text
//! magic "FDC1" | d: u64 | ell: u64 | steps: u64
//! packed upper triangle of C̃, d(d+1)/2 × f64, row by row
//! shrinkage_total: f64
//! ```

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::scalar::Scalar;

use super::FdSketch;

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"FDC1";

impl<T: Scalar> FdSketch<T> {
    pub fn to_snapshot_bytes(&self) -> Vec<u8> {
        let packed = self.current.packed_upper();
        let mut out = Vec::with_capacity(4 + 24 + 8 * (packed.len() + 1));
        out.extend_from_slice(SNAPSHOT_MAGIC);
        for v in [self.dim as u64, self.ell as u64, self.steps] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for v in packed {
            out.extend_from_slice(&v.as_f64().to_le_bytes());
        }
        out.extend_from_slice(&self.shrinkage_total.as_f64().to_le_bytes());
        out
    }

    /// Parses a snapshot. Rejects a bad magic, truncated or trailing bytes,
    /// `ell` outside `1..=d`, and non-finite entries.
    pub fn from_snapshot_bytes(bytes: &[u8]) -> Result<Self> {
        let mut cur = Cursor { bytes, pos: 0 };
        if cur.take(4)? != SNAPSHOT_MAGIC {
            return Err(Error::Format("bad magic, expected \"FDC1\"".into()));
        }
        let dim = to_usize(cur.u64()?)?;
        let ell = to_usize(cur.u64()?)?;
        let steps = cur.u64()?;
        let len = dim
            .checked_add(1)
            .and_then(|n| n.checked_mul(dim))
            .map(|n| n / 2)
            .filter(|n| n.checked_mul(8).is_some_and(|b| b <= bytes.len()))
            .ok_or_else(|| Error::Format("truncated snapshot".into()))?;
        let packed = (0..len)
            .map(|_| cur.f64().map(T::of))
            .collect::<Result<Vec<T>>>()?;
        let shrinkage_total = T::of(cur.f64()?);
        if cur.pos != bytes.len() {
            return Err(Error::Format(format!(
                "{} trailing bytes after snapshot",
                bytes.len() - cur.pos
            )));
        }
        let current = SymMatrix::from_packed_upper(dim, &packed)?;
        Self::from_parts(dim, ell, current, steps, shrinkage_total)
    }

    pub fn write_snapshot<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(&self.to_snapshot_bytes())
    }

    pub fn read_snapshot<R: Read>(mut r: R) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)
            .map_err(|e| Error::Format(e.to_string()))?;
        Self::from_snapshot_bytes(&bytes)
    }
}

fn to_usize(v: u64) -> Result<usize> {
    usize::try_from(v).map_err(|_| Error::Format(format!("value {v} does not fit in usize")))
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Format("truncated snapshot".into()))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::Batch;

    fn sample() -> FdSketch<f64> {
        let mut sk = FdSketch::new(3, 2).unwrap();
        for col in [[1.0, 0.5, -0.25], [0.1, 2.0, 0.3], [-0.7, 0.2, 1.1]] {
            sk.update(&Batch::from_columns(3, &[col.to_vec()]).unwrap())
                .unwrap();
        }
        sk
    }

    #[test]
    fn layout() {
        let sk = FdSketch::<f64>::new(2, 1).unwrap();
        let bytes = sk.to_snapshot_bytes();
        assert_eq!(&bytes[..4], b"FDC1");
        assert_eq!(&bytes[4..12], &2u64.to_le_bytes());
        assert_eq!(&bytes[12..20], &1u64.to_le_bytes());
        assert_eq!(&bytes[20..28], &0u64.to_le_bytes());
        assert_eq!(bytes.len(), 28 + 8 * 3 + 8);
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let sk = sample();
        let bytes = sk.to_snapshot_bytes();
        let back = FdSketch::<f64>::from_snapshot_bytes(&bytes).unwrap();
        assert_eq!(back.to_snapshot_bytes(), bytes);
        for (a, b) in back
            .covariance_estimate()
            .as_slice()
            .iter()
            .zip(sk.covariance_estimate().as_slice())
        {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(back.shrinkage_total().to_bits(), sk.shrinkage_total().to_bits());
        assert_eq!(back.steps(), 3);
    }

    #[test]
    fn f32_round_trip() {
        let mut sk = FdSketch::<f32>::new(2, 2).unwrap();
        sk.update(&Batch::from_columns(2, &[vec![0.3, 0.7]]).unwrap())
            .unwrap();
        let back = FdSketch::<f32>::from_snapshot_bytes(&sk.to_snapshot_bytes()).unwrap();
        assert_eq!(back, sk);
    }

    #[test]
    fn malformed_input_rejected() {
        let bytes = sample().to_snapshot_bytes();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(FdSketch::<f64>::from_snapshot_bytes(&bad).is_err());
        assert!(FdSketch::<f64>::from_snapshot_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut long = bytes.clone();
        long.push(0);
        assert!(FdSketch::<f64>::from_snapshot_bytes(&long).is_err());
        let mut bad_ell = bytes.clone();
        bad_ell[12..20].copy_from_slice(&9u64.to_le_bytes());
        assert!(FdSketch::<f64>::from_snapshot_bytes(&bad_ell).is_err());
        let mut huge = bytes;
        huge[4..12].copy_from_slice(&u64::MAX.to_le_bytes());
        assert!(FdSketch::<f64>::from_snapshot_bytes(&huge).is_err());
    }
}
