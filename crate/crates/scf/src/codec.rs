//! Little-endian byte encoding helpers and the CRC-32 used by the
//! checkpoint and dataset file formats.

use crate::error::{Error, Result};

/// CRC-32 (IEEE 802.3, reflected, init/xorout `0xFFFFFFFF`).
pub fn crc32(bytes: &[u8]) -> u32 {
    let mut crc = 0xFFFF_FFFFu32;
    for &b in bytes {
        crc ^= b as u32;
        for _ in 0..8 {
            let mask = (crc & 1).wrapping_neg();
            crc = (crc >> 1) ^ (0xEDB8_8320 & mask);
        }
    }
    !crc
}

/// Append-only little-endian writer.
#[derive(Default)]
pub struct ByteWriter {
    buf: Vec<u8>,
}

impl ByteWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bytes(&self) -> &[u8] {
        &self.buf
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf
    }

    pub fn put_bytes(&mut self, b: &[u8]) {
        self.buf.extend_from_slice(b);
    }

    pub fn put_u8(&mut self, v: u8) {
        self.buf.push(v);
    }

    pub fn put_u16(&mut self, v: u16) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_u32(&mut self, v: u32) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_u64(&mut self, v: u64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    pub fn put_f64(&mut self, v: f64) {
        self.buf.extend_from_slice(&v.to_le_bytes());
    }

    /// `u32` length prefix followed by the raw values.
    pub fn put_f64_block(&mut self, values: &[f64]) {
        self.put_u32(values.len() as u32);
        for &v in values {
            self.put_f64(v);
        }
    }

    /// Append the CRC-32 of everything written so far.
    pub fn finish_with_checksum(mut self) -> Vec<u8> {
        let crc = crc32(&self.buf);
        self.put_u32(crc);
        self.buf
    }
}

/// Cursor over a byte buffer; every read names the field it was after so
/// corruption errors point at the failing part of the file.
pub struct ByteReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn remaining(&self) -> usize {
        self.data.len() - self.pos
    }

    pub fn take_bytes(&mut self, n: usize, field: &'static str) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(Error::Format {
                field,
                detail: format!(
                    "needs {n} bytes at offset {}, file has {} left",
                    self.pos,
                    self.remaining()
                ),
            });
        }
        let out = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn take_u8(&mut self, field: &'static str) -> Result<u8> {
        Ok(self.take_bytes(1, field)?[0])
    }

    pub fn take_u16(&mut self, field: &'static str) -> Result<u16> {
        let b = self.take_bytes(2, field)?;
        Ok(u16::from_le_bytes([b[0], b[1]]))
    }

    pub fn take_u32(&mut self, field: &'static str) -> Result<u32> {
        let b = self.take_bytes(4, field)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    pub fn take_u64(&mut self, field: &'static str) -> Result<u64> {
        let b = self.take_bytes(8, field)?;
        Ok(u64::from_le_bytes(b.try_into().unwrap()))
    }

    pub fn take_f64(&mut self, field: &'static str) -> Result<f64> {
        let b = self.take_bytes(8, field)?;
        Ok(f64::from_le_bytes(b.try_into().unwrap()))
    }

    /// Counterpart of [`ByteWriter::put_f64_block`].
    pub fn take_f64_block(&mut self, field: &'static str) -> Result<Vec<f64>> {
        let len = self.take_u32(field)? as usize;
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(self.take_f64(field)?);
        }
        Ok(out)
    }

    /// Verify the trailing CRC-32 against everything before it. Call after
    /// all fields have been consumed.
    pub fn verify_checksum(&mut self) -> Result<()> {
        let body_end = self.pos;
        let stored = self.take_u32("checksum")?;
        let actual = crc32(&self.data[..body_end]);
        if stored != actual {
            return Err(Error::Format {
                field: "checksum",
                detail: format!("stored {stored:#010x}, computed {actual:#010x}"),
            });
        }
        if self.remaining() != 0 {
            return Err(Error::Format {
                field: "checksum",
                detail: format!("{} trailing bytes after checksum", self.remaining()),
            });
        }
        Ok(())
    }
}
