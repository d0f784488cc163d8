//! Little-endian base-128 varints.
//!
//! All integers on the wire are unsigned, below 2^32, and at most five bytes.
//! Encodings must be minimal: a multi-byte varint whose last group is zero is
//! rejected.

use alloc::vec::Vec;

pub const MAX_VARINT_LEN: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarintError {
    /// The buffer ended before the final group. In a streaming decoder this
    /// just means more input is needed.
    Truncated,
    /// Non-minimal encoding.
    Overlong,
    /// The value does not fit in 32 bits.
    Overflow,
}

/// Appends the minimal encoding of `value`.
pub fn write_varint(value: u32, out: &mut Vec<u8>) {
    let mut v = value;
    loop {
        let group = (v & 0x7F) as u8;
        v >>= 7;
        if v == 0 {
            out.push(group);
            return;
        }
        out.push(group | 0x80);
    }
}

/// Reads one varint from the front of `buf`, returning the value and the
/// number of bytes consumed.
pub fn read_varint(buf: &[u8]) -> Result<(u32, usize), VarintError> {
    let mut value: u32 = 0;
    for i in 0..MAX_VARINT_LEN {
        let Some(&byte) = buf.get(i) else {
            return Err(VarintError::Truncated);
        };
        let group = byte & 0x7F;
        if i == MAX_VARINT_LEN - 1 && (byte & 0x80 != 0 || group > 0x0F) {
            return Err(VarintError::Overflow);
        }
        value |= u32::from(group) << (7 * i);
        if byte & 0x80 == 0 {
            if i > 0 && group == 0 {
                return Err(VarintError::Overlong);
            }
            return Ok((value, i + 1));
        }
    }
    unreachable!("loop returns by the fifth byte");
}
