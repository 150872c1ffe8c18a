//! On-disk cache for two-body tensors.
//!
//! Little-endian layout:
//!
//! ```text
//! magic            4 bytes  "Q1DT"
//! version          u32      TENSOR_FORMAT_VERSION
//! kind             u32      0 = smooth, 1 = antisymmetrized Coulomb
//! epsilon          f64      anisotropy (0.0 for the Coulomb kind)
//! n_max            u32
//! quadrature_order u32
//! mass             f64
//! frequency        f64
//! values           n_max⁴ × f64, row-major (i, j, k, l)
//! ```

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use super::{antisymmetrized_coulomb_tensor, smooth_tensor, OrbitalBasis, TensorKind, TwoBodyTensor};
use crate::error::{Error, Result};
use crate::model::EffectivePotential;

pub const TENSOR_MAGIC: &[u8; 4] = b"Q1DT";
pub const TENSOR_FORMAT_VERSION: u32 = 1;

/// Identity of a cached tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorKey {
    pub kind: TensorKind,
    pub n_max: usize,
    pub quadrature_order: usize,
    pub mass: f64,
    pub frequency: f64,
}

impl TensorKey {
    pub fn new(kind: TensorKind, basis: &OrbitalBasis) -> Self {
        Self {
            kind,
            n_max: basis.n_max(),
            quadrature_order: basis.quadrature_order(),
            mass: basis.mass(),
            frequency: basis.frequency(),
        }
    }

    fn kind_code(&self) -> (u32, f64) {
        match self.kind {
            TensorKind::Smooth { eps } => (0, eps),
            TensorKind::AntisymmetrizedCoulomb => (1, 0.0),
        }
    }

    fn file_name(&self) -> String {
        let (code, eps) = self.kind_code();
        format!(
            "tensor_k{code}_e{:016x}_n{}_q{}_m{:016x}_w{:016x}.q1dt",
            eps.to_bits(),
            self.n_max,
            self.quadrature_order,
            self.mass.to_bits(),
            self.frequency.to_bits()
        )
    }
}

pub fn write_tensor(mut w: impl Write, tensor: &TwoBodyTensor) -> Result<()> {
    let key = TensorKey::new(tensor.kind(), tensor.basis());
    let (code, eps) = key.kind_code();
    let mut header = Vec::with_capacity(44);
    header.extend_from_slice(TENSOR_MAGIC);
    header.extend_from_slice(&TENSOR_FORMAT_VERSION.to_le_bytes());
    header.extend_from_slice(&code.to_le_bytes());
    header.extend_from_slice(&eps.to_le_bytes());
    header.extend_from_slice(&(key.n_max as u32).to_le_bytes());
    header.extend_from_slice(&(key.quadrature_order as u32).to_le_bytes());
    header.extend_from_slice(&key.mass.to_le_bytes());
    header.extend_from_slice(&key.frequency.to_le_bytes());
    w.write_all(&header)?;
    let mut body = Vec::with_capacity(tensor.elements().len() * 8);
    for v in tensor.elements() {
        body.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&body)?;
    Ok(())
}

pub fn read_tensor(mut r: impl Read) -> Result<TwoBodyTensor> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let mut cur = Cursor { bytes: &bytes, pos: 0 };
    if cur.take(4)? != TENSOR_MAGIC {
        return Err(Error::Format("not a tensor file (bad magic)".into()));
    }
    let version = cur.u32()?;
    if version != TENSOR_FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported tensor format version {version}")));
    }
    let code = cur.u32()?;
    let eps = cur.f64()?;
    let n_max = cur.u32()? as usize;
    let quadrature_order = cur.u32()? as usize;
    let mass = cur.f64()?;
    let frequency = cur.f64()?;
    let kind = match code {
        0 => TensorKind::Smooth { eps },
        1 => TensorKind::AntisymmetrizedCoulomb,
        other => return Err(Error::Format(format!("unknown tensor kind {other}"))),
    };
    let count = n_max.pow(4);
    if bytes.len() - cur.pos != count * 8 {
        return Err(Error::Format(format!(
            "expected {count} values, found {} bytes",
            bytes.len() - cur.pos
        )));
    }
    let elements = (0..count).map(|_| cur.f64()).collect::<Result<Vec<_>>>()?;
    let basis = OrbitalBasis::with_params(n_max, mass, frequency, quadrature_order)?;
    Ok(TwoBodyTensor::from_parts(kind, basis, elements))
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos + n;
        let s = self.bytes.get(self.pos..end).ok_or_else(|| Error::Format("truncated tensor file".into()))?;
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Directory-backed tensor cache.
#[derive(Debug, Clone)]
pub struct TensorCache {
    dir: PathBuf,
}

impl TensorCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn path_for(&self, key: &TensorKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    pub fn smooth(&self, basis: &OrbitalBasis, potential: &EffectivePotential) -> Result<TwoBodyTensor> {
        let key = TensorKey::new(TensorKind::Smooth { eps: potential.anisotropy() }, basis);
        self.get_or_build(&key, || smooth_tensor(basis, potential))
    }

    pub fn coulomb(&self, basis: &OrbitalBasis) -> Result<TwoBodyTensor> {
        let key = TensorKey::new(TensorKind::AntisymmetrizedCoulomb, basis);
        self.get_or_build(&key, || antisymmetrized_coulomb_tensor(basis))
    }

    fn get_or_build(&self, key: &TensorKey, build: impl FnOnce() -> Result<TwoBodyTensor>) -> Result<TwoBodyTensor> {
        let path = self.path_for(key);
        if path.exists() {
            let tensor = read_tensor(fs::File::open(&path)?)?;
            if TensorKey::new(tensor.kind(), tensor.basis()) == *key {
                return Ok(tensor);
            }
        }
        let tensor = build()?;
        store_atomically(&path, &tensor)?;
        Ok(tensor)
    }
}

fn store_atomically(path: &Path, tensor: &TwoBodyTensor) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::io::BufWriter::new(fs::File::create(&tmp)?);
        write_tensor(&mut f, tensor)?;
        f.flush()?;
    }
    fs::rename(tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let basis = OrbitalBasis::new(2).unwrap();
        let t = antisymmetrized_coulomb_tensor(&basis).unwrap();
        let mut buf = Vec::new();
        write_tensor(&mut buf, &t).unwrap();
        assert_eq!(&buf[..4], b"Q1DT");
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(buf[8..12].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(buf[20..24].try_into().unwrap()), 2);
        assert_eq!(buf.len(), 44 + 16 * 8);
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_tensor(&b"Q1DX\x01\x00\x00\x00"[..]).is_err());
        assert!(read_tensor(&b"Q1DT"[..]).is_err());
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TensorCache::new(dir.path()).unwrap();
        let basis = OrbitalBasis::new(4).unwrap();
        let pot = EffectivePotential::new(30.0).unwrap();
        let a = cache.smooth(&basis, &pot).unwrap();
        let path = cache.path_for(&TensorKey::new(a.kind(), &basis));
        assert!(path.exists());
        let b = cache.smooth(&basis, &pot).unwrap();
        assert_eq!(a.elements(), b.elements());
    }
}
