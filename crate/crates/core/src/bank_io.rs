//! Binary filter-bank files and an on-disk cache keyed by wavelet and size.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "AWTB"                 magic
//! u32                    format version (1)
//! u32, [u8]              wavelet name length, UTF-8 name
//! u32                    dimension count (1 or 2)
//! u64 * dims             sizes (n, or height then width)
//! u32                    k
//! f64 * (k+1) * prod     kernels, DC first, each row-major
//! u32                    CRC-32 (IEEE) of the kernel bytes
//! ```

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{AwtError, Result};
use crate::filterbank::{derive_filter_bank_2d_levels, filter_bank_for_levels, AwtFilterBank, FilterBank2D};
use crate::scalar::Real;
use crate::wavelet::{WaveletKind, WaveletSpec};

pub const MAGIC: [u8; 4] = *b"AWTB";
pub const VERSION: u32 = 1;

/// A bank as read back from disk.
#[derive(Debug, Clone)]
pub enum StoredBank<T: Real> {
    OneD(AwtFilterBank<T>),
    TwoD(FilterBank2D<T>),
}

impl<T: Real> StoredBank<T> {
    pub fn wavelet(&self) -> WaveletKind {
        match self {
            StoredBank::OneD(b) => b.wavelet(),
            StoredBank::TwoD(b) => b.wavelet(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            StoredBank::OneD(b) => b.k(),
            StoredBank::TwoD(b) => b.k(),
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        match self {
            StoredBank::OneD(b) => vec![b.n()],
            StoredBank::TwoD(b) => vec![b.height(), b.width()],
        }
    }
}

fn write_common<'a, T: Real, W: Write>(
    out: &mut W,
    wavelet: WaveletKind,
    dims: &[usize],
    kernels: impl Iterator<Item = &'a [T]>,
    k: usize,
) -> Result<()> {
    let name = wavelet.name().as_bytes();
    out.write_all(&MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(name.len() as u32).to_le_bytes())?;
    out.write_all(name)?;
    out.write_all(&(dims.len() as u32).to_le_bytes())?;
    for &d in dims {
        out.write_all(&(d as u64).to_le_bytes())?;
    }
    out.write_all(&(k as u32).to_le_bytes())?;
    let mut payload = Vec::new();
    for kernel in kernels {
        for v in kernel {
            payload.extend_from_slice(&v.to_f64_lossless().to_le_bytes());
        }
    }
    out.write_all(&payload)?;
    out.write_all(&crc32fast::hash(&payload).to_le_bytes())?;
    Ok(())
}

/// Serialises a 1-D bank.
pub fn write_bank<T: Real, W: Write>(bank: &AwtFilterBank<T>, out: &mut W) -> Result<()> {
    write_common(out, bank.wavelet(), &[bank.n()], bank.kernels(), bank.k())
}

/// Serialises a 2-D bank.
pub fn write_bank_2d<T: Real, W: Write>(bank: &FilterBank2D<T>, out: &mut W) -> Result<()> {
    write_common(
        out,
        bank.wavelet(),
        &[bank.height(), bank.width()],
        bank.all_kernels(),
        bank.k(),
    )
}

fn corrupt(msg: impl Into<String>) -> AwtError {
    AwtError::CorruptBank(msg.into())
}

fn read_exact<R: Read>(input: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    input.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => corrupt(format!("truncated while reading {what}")),
        _ => AwtError::Io(e),
    })
}

fn read_u32<R: Read>(input: &mut R, what: &str) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(input, &mut b, what)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(input: &mut R, what: &str) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(input, &mut b, what)?;
    Ok(u64::from_le_bytes(b))
}

/// Parses a bank file of either dimensionality.
pub fn read_bank<T: Real, R: Read>(input: &mut R) -> Result<StoredBank<T>> {
    let mut magic = [0u8; 4];
    read_exact(input, &mut magic, "magic")?;
    if magic != MAGIC {
        return Err(corrupt("bad magic"));
    }
    let version = read_u32(input, "version")?;
    if version != VERSION {
        return Err(corrupt(format!("unsupported format version {version}")));
    }
    let name_len = read_u32(input, "name length")? as usize;
    if name_len > 64 {
        return Err(corrupt(format!("implausible wavelet name length {name_len}")));
    }
    let mut name = vec![0u8; name_len];
    read_exact(input, &mut name, "wavelet name")?;
    let name = String::from_utf8(name).map_err(|_| corrupt("wavelet name is not UTF-8"))?;
    let wavelet: WaveletKind = name
        .parse()
        .map_err(|_| corrupt(format!("unknown wavelet `{name}`")))?;
    let dim_count = read_u32(input, "dimension count")?;
    if dim_count != 1 && dim_count != 2 {
        return Err(corrupt(format!("dimension count {dim_count}")));
    }
    let mut dims = Vec::with_capacity(dim_count as usize);
    for _ in 0..dim_count {
        let d = read_u64(input, "dimensions")?;
        dims.push(usize::try_from(d).map_err(|_| corrupt("dimension overflows usize"))?);
    }
    let k = read_u32(input, "k")? as usize;
    let max_k = match dims.as_slice() {
        [n] => crate::wavelet::max_levels(*n),
        [h, w] => crate::dwt::max_levels_2d(*h, *w),
        _ => unreachable!(),
    }
    .map_err(|e| corrupt(format!("invalid dimensions: {e}")))?;
    if k == 0 || k > max_k {
        return Err(corrupt(format!("k = {k} outside 1..={max_k} for this size")));
    }
    let plane = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| corrupt("dimensions overflow"))?;
    let bytes = plane
        .checked_mul(k + 1)
        .and_then(|v| v.checked_mul(8))
        .ok_or_else(|| corrupt("payload size overflows"))?;
    let mut payload = Vec::new();
    input
        .by_ref()
        .take(bytes as u64)
        .read_to_end(&mut payload)?;
    if payload.len() != bytes {
        return Err(corrupt(format!(
            "truncated payload: {} of {bytes} bytes",
            payload.len()
        )));
    }
    let crc = read_u32(input, "checksum")?;
    if crc != crc32fast::hash(&payload) {
        return Err(corrupt("checksum mismatch"));
    }
    let mut rest = [0u8; 1];
    if input.read(&mut rest)? != 0 {
        return Err(corrupt("trailing bytes after checksum"));
    }
    let values: Vec<T> = payload
        .chunks_exact(8)
        .map(|c| T::lit(f64::from_le_bytes(c.try_into().expect("8-byte chunk"))))
        .collect();
    let mut kernels = values.chunks_exact(plane).map(<[T]>::to_vec);
    let dc = kernels.next().expect("k + 1 >= 1 kernels");
    let rest: Vec<Vec<T>> = kernels.collect();
    let bank = match dims.as_slice() {
        [n] => StoredBank::OneD(AwtFilterBank::from_parts(wavelet, *n, dc, rest)?),
        [h, w] => StoredBank::TwoD(FilterBank2D::from_parts(wavelet, *h, *w, dc, rest)?),
        _ => unreachable!(),
    };
    Ok(bank)
}

pub fn save_bank<T: Real>(bank: &AwtFilterBank<T>, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_bank(bank, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn save_bank_2d<T: Real>(bank: &FilterBank2D<T>, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_bank_2d(bank, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

/// Loads a 1-D bank and checks it is the one expected.
pub fn load_bank<T: Real>(path: &Path, wavelet: WaveletKind, n: usize, k: usize) -> Result<AwtFilterBank<T>> {
    let mut file = io::BufReader::new(fs::File::open(path)?);
    match read_bank(&mut file)? {
        StoredBank::OneD(b) if b.wavelet() == wavelet && b.n() == n && b.k() == k => Ok(b),
        other => Err(corrupt(format!(
            "expected a {wavelet} bank of size [{n}] with {k} scales, found {} {:?} with {} scales",
            other.wavelet(),
            other.dims(),
            other.k()
        ))),
    }
}

/// Loads a 2-D bank and checks it is the one expected.
pub fn load_bank_2d<T: Real>(
    path: &Path,
    wavelet: WaveletKind,
    height: usize,
    width: usize,
    k: usize,
) -> Result<FilterBank2D<T>> {
    let mut file = io::BufReader::new(fs::File::open(path)?);
    match read_bank(&mut file)? {
        StoredBank::TwoD(b) if b.wavelet() == wavelet && (b.height(), b.width(), b.k()) == (height, width, k) => Ok(b),
        other => Err(corrupt(format!(
            "expected a {wavelet} bank of size [{height}, {width}] with {k} scales, found {} {:?} with {} scales",
            other.wavelet(),
            other.dims(),
            other.k()
        ))),
    }
}

/// Directory of bank files, one per `(wavelet, size)`; missing entries are
/// derived and written back.
#[derive(Debug, Clone)]
pub struct BankCache {
    dir: PathBuf,
}

impl BankCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_1d(&self, wavelet: WaveletKind, n: usize, k: usize) -> PathBuf {
        self.dir
            .join(format!("{}_{n}_k{k}.awtb", wavelet.name().to_ascii_lowercase()))
    }

    pub fn path_2d(&self, wavelet: WaveletKind, height: usize, width: usize, k: usize) -> PathBuf {
        self.dir.join(format!(
            "{}_{height}x{width}_k{k}.awtb",
            wavelet.name().to_ascii_lowercase()
        ))
    }

    /// Existing files that fail to parse are reported, not silently replaced.
    pub fn get_or_derive<T: Real>(&self, wavelet: &WaveletSpec<T>, n: usize, k: usize) -> Result<AwtFilterBank<T>> {
        let path = self.path_1d(wavelet.kind(), n, k);
        if path.exists() {
            return load_bank(&path, wavelet.kind(), n, k);
        }
        let bank = filter_bank_for_levels(wavelet, n, k)?;
        fs::create_dir_all(&self.dir)?;
        save_bank(&bank, &path)?;
        Ok(bank)
    }

    pub fn get_or_derive_2d<T: Real>(
        &self,
        wavelet: &WaveletSpec<T>,
        height: usize,
        width: usize,
        k: usize,
    ) -> Result<FilterBank2D<T>> {
        let path = self.path_2d(wavelet.kind(), height, width, k);
        if path.exists() {
            return load_bank_2d(&path, wavelet.kind(), height, width, k);
        }
        let bank = derive_filter_bank_2d_levels(wavelet, height, width, k)?;
        fs::create_dir_all(&self.dir)?;
        save_bank_2d(&bank, &path)?;
        Ok(bank)
    }
}
