//! IDX tensors (the MNIST container): big-endian header, unsigned-byte payload.

use thiserror::Error;
use voronoi_cur_core::DenseMatrix;

pub const TYPE_U8: u8 = 0x08;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdxError {
    #[error("truncated at byte {offset}: need {needed} more byte(s) for {what}")]
    Truncated {
        offset: usize,
        needed: usize,
        what: &'static str,
    },
    #[error("bad magic at byte {offset}: expected 00 00, found {found:02x?}")]
    BadMagic { offset: usize, found: [u8; 2] },
    #[error("unsupported type code 0x{code:02x} at byte {offset} (only 0x08 unsigned byte)")]
    UnsupportedType { offset: usize, code: u8 },
    #[error("dimension count at byte {offset} is zero")]
    NoDimensions { offset: usize },
    #[error("dimension {index} at byte {offset} is zero")]
    ZeroDimension { offset: usize, index: usize },
    #[error("dimensions starting at byte {offset} overflow the address space")]
    Overflow { offset: usize },
    #[error("{extra} trailing byte(s) after the payload at byte {offset}")]
    TrailingBytes { offset: usize, extra: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxTensor {
    pub dims: Vec<usize>,
    pub data: Vec<u8>,
}

impl IdxTensor {
    /// First dimension as rows, the rest flattened row-major into columns,
    /// scaled by 1/255. `transpose` puts samples into columns.
    pub fn to_matrix(&self, transpose: bool) -> DenseMatrix {
        let rows = self.dims[0];
        let cols = self.dims[1..].iter().product::<usize>();
        let v = |i: usize, j: usize| f64::from(self.data[i * cols + j]) / 255.0;
        if transpose {
            DenseMatrix::from_fn(cols, rows, |i, j| v(j, i))
        } else {
            DenseMatrix::from_fn(rows, cols, v)
        }
    }
}

fn take<'a>(bytes: &'a [u8], at: usize, n: usize, what: &'static str) -> Result<&'a [u8], IdxError> {
    bytes.get(at..at + n).ok_or_else(|| IdxError::Truncated {
        offset: bytes.len(),
        needed: at + n - bytes.len(),
        what,
    })
}

pub fn parse_idx(bytes: &[u8]) -> Result<IdxTensor, IdxError> {
    let head = take(bytes, 0, 4, "header")?;
    if head[..2] != [0, 0] {
        return Err(IdxError::BadMagic {
            offset: 0,
            found: [head[0], head[1]],
        });
    }
    if head[2] != TYPE_U8 {
        return Err(IdxError::UnsupportedType {
            offset: 2,
            code: head[2],
        });
    }
    let ndims = head[3] as usize;
    if ndims == 0 {
        return Err(IdxError::NoDimensions { offset: 3 });
    }
    let raw = take(bytes, 4, 4 * ndims, "dimensions")?;
    let mut dims = Vec::with_capacity(ndims);
    let mut total = 1usize;
    for (index, chunk) in raw.chunks_exact(4).enumerate() {
        let d = u32::from_be_bytes(chunk.try_into().unwrap()) as usize;
        if d == 0 {
            return Err(IdxError::ZeroDimension {
                offset: 4 + 4 * index,
                index,
            });
        }
        total = total.checked_mul(d).ok_or(IdxError::Overflow { offset: 4 })?;
        dims.push(d);
    }
    let start = 4 + 4 * ndims;
    let end = start.checked_add(total).ok_or(IdxError::Overflow { offset: 4 })?;
    if bytes.len() < end {
        return Err(IdxError::Truncated {
            offset: bytes.len(),
            needed: end - bytes.len(),
            what: "payload",
        });
    }
    if bytes.len() > end {
        return Err(IdxError::TrailingBytes {
            offset: end,
            extra: bytes.len() - end,
        });
    }
    Ok(IdxTensor {
        dims,
        data: bytes[start..end].to_vec(),
    })
}

/// Encodes an unsigned-byte tensor; the inverse of [`parse_idx`].
pub fn encode_idx(dims: &[u32], data: &[u8]) -> Vec<u8> {
    let mut out = vec![0, 0, TYPE_U8, dims.len() as u8];
    for d in dims {
        out.extend_from_slice(&d.to_be_bytes());
    }
    out.extend_from_slice(data);
    out
}
