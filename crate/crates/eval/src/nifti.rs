//! NIfTI-1 single-file label volumes (`.nii`, `.nii.gz`).
//!
//! Only the fields needed for label grids are decoded. Orientation is
//! ignored: ground truth and predictions are compared in index space.

use std::fs;
use std::io::Read;
use std::path::Path;

use flate2::read::MultiGzDecoder;
use msd_core::volume::{Extents, LabelVolume, Spacing};
use thiserror::Error;

pub const HEADER_SIZE: usize = 348;
/// Header plus the 4-byte extension flag; first voxel offset written by [`write_synthetic`].
pub const DATA_OFFSET: usize = 352;
pub const MAGIC_SINGLE: [u8; 4] = *b"n+1\0";
pub const MAGIC_PAIR: [u8; 4] = *b"ni1\0";

/// Labels must round to integers within this residual.
pub const LABEL_ROUNDING_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum NiftiError {
    #[error("header needs {HEADER_SIZE} bytes, got {0}")]
    TruncatedHeader(usize),
    #[error("bad magic {0:?}")]
    BadMagic([u8; 4]),
    #[error("sizeof_hdr reads {0} in either byte order")]
    UnsupportedEndianness(i32),
    #[error("two-file NIfTI (.hdr/.img) is not supported")]
    DualFileUnsupported,
    #[error("unsupported datatype code {0}")]
    UnsupportedDatatype(i16),
    #[error("bitpix {bitpix} does not match datatype {datatype}")]
    BitpixMismatch { datatype: i16, bitpix: i16 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid voxel spacing {0:?}")]
    InvalidSpacing([f64; 3]),
    #[error("vox_offset {0} is invalid")]
    BadVoxOffset(f32),
    #[error("voxel data truncated: need {expected} bytes, found {actual}")]
    TruncatedData { expected: usize, actual: usize },
    #[error("voxel {index} holds non-integral label {value}")]
    NonIntegralLabel { index: usize, value: f64 },
    #[error("voxel {index} holds out-of-range label {value}")]
    LabelOutOfRange { index: usize, value: f64 },
    #[error("label {label} does not fit datatype {datatype:?}")]
    LabelOverflow { label: u32, datatype: Datatype },
    #[error("extent {0} exceeds the NIfTI-1 limit")]
    ExtentTooLarge(usize),
    #[error("gzip stream: {0}")]
    Decompress(std::io::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endian {
    Little,
    Big,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Datatype {
    Uint8,
    Int16,
    Int32,
    Float32,
    Float64,
    Uint16,
}

impl Datatype {
    pub fn code(self) -> i16 {
        match self {
            Datatype::Uint8 => 2,
            Datatype::Int16 => 4,
            Datatype::Int32 => 8,
            Datatype::Float32 => 16,
            Datatype::Float64 => 64,
            Datatype::Uint16 => 512,
        }
    }

    pub fn from_code(code: i16) -> Result<Self, NiftiError> {
        Ok(match code {
            2 => Datatype::Uint8,
            4 => Datatype::Int16,
            8 => Datatype::Int32,
            16 => Datatype::Float32,
            64 => Datatype::Float64,
            512 => Datatype::Uint16,
            other => return Err(NiftiError::UnsupportedDatatype(other)),
        })
    }

    pub fn bytes(self) -> usize {
        match self {
            Datatype::Uint8 => 1,
            Datatype::Int16 | Datatype::Uint16 => 2,
            Datatype::Int32 | Datatype::Float32 => 4,
            Datatype::Float64 => 8,
        }
    }

    /// Largest label the type stores exactly.
    pub fn max_label(self) -> u32 {
        match self {
            Datatype::Uint8 => u8::MAX as u32,
            Datatype::Int16 => i16::MAX as u32,
            Datatype::Uint16 => u16::MAX as u32,
            Datatype::Int32 => i32::MAX as u32,
            Datatype::Float32 => 1 << 24,
            Datatype::Float64 => u32::MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NiftiHeader {
    pub endian: Endian,
    pub sizeof_hdr: i32,
    pub dim: [i16; 8],
    pub datatype: i16,
    pub bitpix: i16,
    pub pixdim: [f32; 8],
    pub vox_offset: f32,
    pub scl_slope: f32,
    pub scl_inter: f32,
    pub magic: [u8; 4],
}

impl NiftiHeader {
    /// Extents after squeezing a singleton 4th dimension.
    pub fn extents(&self) -> Result<Extents, NiftiError> {
        match self.dim[0] {
            3 => {}
            4 if self.dim[4] == 1 => {}
            4 => {
                return Err(NiftiError::DimensionMismatch(format!(
                    "4D volume with {} frames",
                    self.dim[4]
                )))
            }
            n => return Err(NiftiError::DimensionMismatch(format!("rank {n}, expected 3"))),
        }
        Ok(Extents::new(self.dim[1] as usize, self.dim[2] as usize, self.dim[3] as usize))
    }

    pub fn spacing(&self) -> Result<Spacing, NiftiError> {
        let s = Spacing([self.pixdim[1] as f64, self.pixdim[2] as f64, self.pixdim[3] as f64]);
        if !s.is_valid() {
            return Err(NiftiError::InvalidSpacing(s.0));
        }
        Ok(s)
    }

    fn scaling(&self) -> Option<(f64, f64)> {
        let slope = self.scl_slope as f64;
        let inter = self.scl_inter as f64;
        if (slope == 0.0 || slope == 1.0) && inter == 0.0 {
            None
        } else if slope == 0.0 {
            Some((1.0, inter))
        } else {
            Some((slope, inter))
        }
    }
}

struct Fields<'a> {
    bytes: &'a [u8],
    endian: Endian,
}

impl Fields<'_> {
    fn take<const N: usize>(&self, at: usize) -> [u8; N] {
        let mut b = [0u8; N];
        b.copy_from_slice(&self.bytes[at..at + N]);
        b
    }

    fn i16(&self, at: usize) -> i16 {
        match self.endian {
            Endian::Little => i16::from_le_bytes(self.take(at)),
            Endian::Big => i16::from_be_bytes(self.take(at)),
        }
    }

    fn f32(&self, at: usize) -> f32 {
        match self.endian {
            Endian::Little => f32::from_le_bytes(self.take(at)),
            Endian::Big => f32::from_be_bytes(self.take(at)),
        }
    }
}

/// Decompresses when the bytes start with the gzip magic.
pub fn maybe_gunzip(bytes: &[u8]) -> Result<std::borrow::Cow<'_, [u8]>, NiftiError> {
    if bytes.len() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b {
        let mut out = Vec::new();
        MultiGzDecoder::new(bytes)
            .read_to_end(&mut out)
            .map_err(NiftiError::Decompress)?;
        Ok(std::borrow::Cow::Owned(out))
    } else {
        Ok(std::borrow::Cow::Borrowed(bytes))
    }
}

/// Decodes the header from (possibly gzip-compressed) file bytes.
pub fn parse_header(bytes: &[u8]) -> Result<NiftiHeader, NiftiError> {
    let raw = maybe_gunzip(bytes)?;
    parse_raw_header(&raw)
}

fn parse_raw_header(raw: &[u8]) -> Result<NiftiHeader, NiftiError> {
    if raw.len() < HEADER_SIZE {
        return Err(NiftiError::TruncatedHeader(raw.len()));
    }
    let size: [u8; 4] = raw[0..4].try_into().expect("4 bytes");
    let endian = if i32::from_le_bytes(size) == HEADER_SIZE as i32 {
        Endian::Little
    } else if i32::from_be_bytes(size) == HEADER_SIZE as i32 {
        Endian::Big
    } else {
        return Err(NiftiError::UnsupportedEndianness(i32::from_le_bytes(size)));
    };
    let f = Fields { bytes: raw, endian };
    let magic: [u8; 4] = f.take(344);
    if magic == MAGIC_PAIR {
        return Err(NiftiError::DualFileUnsupported);
    }
    if magic != MAGIC_SINGLE {
        return Err(NiftiError::BadMagic(magic));
    }
    let mut dim = [0i16; 8];
    for (i, d) in dim.iter_mut().enumerate() {
        *d = f.i16(40 + 2 * i);
    }
    if !(1..=7).contains(&dim[0]) {
        return Err(NiftiError::DimensionMismatch(format!("dim[0] = {}", dim[0])));
    }
    if let Some(bad) = (1..=dim[0] as usize).find(|&i| dim[i] < 1) {
        return Err(NiftiError::DimensionMismatch(format!("dim[{bad}] = {}", dim[bad])));
    }
    let mut pixdim = [0f32; 8];
    for (i, p) in pixdim.iter_mut().enumerate() {
        *p = f.f32(76 + 4 * i);
    }
    Ok(NiftiHeader {
        endian,
        sizeof_hdr: HEADER_SIZE as i32,
        dim,
        datatype: f.i16(70),
        bitpix: f.i16(72),
        pixdim,
        vox_offset: f.f32(108),
        scl_slope: f.f32(112),
        scl_inter: f.f32(116),
        magic,
    })
}

fn to_label(index: usize, value: f64) -> Result<u32, NiftiError> {
    if !value.is_finite() {
        return Err(NiftiError::NonIntegralLabel { index, value });
    }
    let rounded = value.round();
    if (value - rounded).abs() > LABEL_ROUNDING_TOL {
        return Err(NiftiError::NonIntegralLabel { index, value });
    }
    if rounded < 0.0 || rounded > u32::MAX as f64 {
        return Err(NiftiError::LabelOutOfRange { index, value });
    }
    Ok(rounded as u32)
}

/// Decodes a whole file image into a label volume.
pub fn decode_label_volume(bytes: &[u8], source: &str) -> Result<LabelVolume, NiftiError> {
    let raw = maybe_gunzip(bytes)?;
    let header = parse_raw_header(&raw)?;
    let datatype = Datatype::from_code(header.datatype)?;
    if header.bitpix as usize != datatype.bytes() * 8 {
        return Err(NiftiError::BitpixMismatch {
            datatype: header.datatype,
            bitpix: header.bitpix,
        });
    }
    let extents = header.extents()?;
    let spacing = header.spacing()?;
    let offset = header.vox_offset;
    if !(offset.is_finite() && offset >= HEADER_SIZE as f32 && offset.fract() == 0.0) {
        return Err(NiftiError::BadVoxOffset(offset));
    }
    let offset = offset as usize;
    let n = extents.len();
    let expected = n
        .checked_mul(datatype.bytes())
        .and_then(|b| b.checked_add(offset))
        .ok_or_else(|| NiftiError::DimensionMismatch("voxel count overflows".into()))?;
    if raw.len() < expected {
        return Err(NiftiError::TruncatedData {
            expected,
            actual: raw.len(),
        });
    }
    let data = &raw[offset..expected];
    let f = Fields {
        bytes: data,
        endian: header.endian,
    };
    let w = datatype.bytes();
    let sample = |i: usize| -> f64 {
        let at = i * w;
        match datatype {
            Datatype::Uint8 => data[at] as f64,
            Datatype::Int16 => f.i16(at) as f64,
            Datatype::Uint16 => f.i16(at) as u16 as f64,
            Datatype::Int32 => match header.endian {
                Endian::Little => i32::from_le_bytes(f.take(at)) as f64,
                Endian::Big => i32::from_be_bytes(f.take(at)) as f64,
            },
            Datatype::Float32 => f.f32(at) as f64,
            Datatype::Float64 => match header.endian {
                Endian::Little => f64::from_le_bytes(f.take(at)),
                Endian::Big => f64::from_be_bytes(f.take(at)),
            },
        }
    };
    let scaling = header.scaling();
    let labels = (0..n)
        .map(|i| {
            let v = sample(i);
            let v = match scaling {
                Some((slope, inter)) => v * slope + inter,
                None => v,
            };
            to_label(i, v)
        })
        .collect::<Result<Vec<u32>, _>>()?;
    LabelVolume::new(extents, spacing, labels, source)
        .map_err(|e| NiftiError::DimensionMismatch(e.to_string()))
}

/// Reads a `.nii` or `.nii.gz` label file.
pub fn load_label_volume(path: &Path) -> Result<LabelVolume, NiftiError> {
    let bytes = fs::read(path).map_err(|source| NiftiError::Io {
        path: path.display().to_string(),
        source,
    })?;
    decode_label_volume(&bytes, &path.display().to_string())
}

/// Reads just the header of a label file.
pub fn load_header(path: &Path) -> Result<NiftiHeader, NiftiError> {
    let bytes = fs::read(path).map_err(|source| NiftiError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_header(&bytes)
}

struct Writer {
    buf: Vec<u8>,
    endian: Endian,
}

impl Writer {
    fn put(&mut self, at: usize, le: &[u8], be: &[u8]) {
        let src = match self.endian {
            Endian::Little => le,
            Endian::Big => be,
        };
        self.buf[at..at + src.len()].copy_from_slice(src);
    }

    fn i16(&mut self, at: usize, v: i16) {
        self.put(at, &v.to_le_bytes(), &v.to_be_bytes());
    }

    fn i32(&mut self, at: usize, v: i32) {
        self.put(at, &v.to_le_bytes(), &v.to_be_bytes());
    }

    fn f32(&mut self, at: usize, v: f32) {
        self.put(at, &v.to_le_bytes(), &v.to_be_bytes());
    }
}

/// Serializes a label volume as an uncompressed single-file NIfTI-1 image.
pub fn write_synthetic(volume: &LabelVolume, datatype: Datatype, endian: Endian) -> Result<Vec<u8>, NiftiError> {
    let max = volume.max_label();
    if max > datatype.max_label() {
        return Err(NiftiError::LabelOverflow { label: max, datatype });
    }
    let e = volume.extents();
    for d in e.as_array() {
        if d > i16::MAX as usize {
            return Err(NiftiError::ExtentTooLarge(d));
        }
    }
    let n = e.len();
    let mut w = Writer {
        buf: vec![0u8; DATA_OFFSET + n * datatype.bytes()],
        endian,
    };
    w.i32(0, HEADER_SIZE as i32);
    // regular = 'r'
    w.buf[38] = b'r';
    let dim = [3, e.nx as i16, e.ny as i16, e.nz as i16, 1, 1, 1, 1];
    for (i, d) in dim.into_iter().enumerate() {
        w.i16(40 + 2 * i, d);
    }
    w.i16(70, datatype.code());
    w.i16(72, (datatype.bytes() * 8) as i16);
    let s = volume.spacing().0;
    let pixdim = [1.0, s[0] as f32, s[1] as f32, s[2] as f32, 0.0, 0.0, 0.0, 0.0];
    for (i, p) in pixdim.into_iter().enumerate() {
        w.f32(76 + 4 * i, p);
    }
    w.f32(108, DATA_OFFSET as f32);
    w.f32(112, 1.0);
    w.f32(116, 0.0);
    // xyzt_units: millimeters
    w.buf[123] = 2;
    w.buf[344..348].copy_from_slice(&MAGIC_SINGLE);
    let width = datatype.bytes();
    for (i, &label) in volume.labels().iter().enumerate() {
        let at = DATA_OFFSET + i * width;
        match datatype {
            Datatype::Uint8 => w.buf[at] = label as u8,
            Datatype::Int16 => w.i16(at, label as i16),
            Datatype::Uint16 => w.i16(at, label as u16 as i16),
            Datatype::Int32 => w.i32(at, label as i32),
            Datatype::Float32 => w.f32(at, label as f32),
            Datatype::Float64 => {
                let v = label as f64;
                w.put(at, &v.to_le_bytes(), &v.to_be_bytes());
            }
        }
    }
    Ok(w.buf)
}

/// Gzip-compresses file bytes deterministically (no timestamp, no name).
pub fn gzip(bytes: &[u8]) -> Vec<u8> {
    use flate2::write::GzEncoder;
    use flate2::Compression;
    use std::io::Write;
    let mut enc = GzEncoder::new(Vec::new(), Compression::default());
    enc.write_all(bytes).expect("in-memory write");
    enc.finish().expect("in-memory write")
}
