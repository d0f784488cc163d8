//! Per-stream options, declared once in the options row.

use alloc::vec::Vec;

use crate::wire::varint::write_varint;

/// Version number carried in the options row.
pub const FORMAT_VERSION: u32 = 1;

/// Sanity cap on declared table capacities, so a hostile stream cannot make
/// the decoder reserve absurd amounts of slot storage.
pub const MAX_TABLE_CAPACITY: u32 = 1 << 20;

const FLAG_QUADS: u32 = 1;
const FLAG_RDF_STAR: u32 = 1 << 1;
const FLAG_GENERALIZED: u32 = 1 << 2;
pub(crate) const KNOWN_FLAGS: u32 = FLAG_QUADS | FLAG_RDF_STAR | FLAG_GENERALIZED;

/// Tuning knobs fixed for the lifetime of one stream. The encoder writes them
/// into the first row; the decoder adopts whatever a stream declares (within
/// the validation rules here).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamOptions {
    /// Slots in the name table. Floor of 8: IRIs cannot be written at all
    /// without somewhere to put their names.
    pub name_table_capacity: u32,
    /// Slots in the prefix table. Zero disables prefix splitting; whole IRIs
    /// then go through the name table.
    pub prefix_table_capacity: u32,
    /// Slots in the datatype table. Zero makes datatyped literals
    /// unencodable, which is an encode-time error.
    pub datatype_table_capacity: u32,
    /// Maximum rows per frame, at least 1.
    pub frame_row_limit: u32,
    /// Statements may use named graphs.
    pub allows_quads: bool,
    /// Statements may contain quoted triples.
    pub allows_rdf_star: bool,
    /// Statements may use term kinds outside plain RDF positional rules.
    pub allows_generalized: bool,
}

impl Default for StreamOptions {
    fn default() -> Self {
        StreamOptions {
            name_table_capacity: 4000,
            prefix_table_capacity: 1024,
            datatype_table_capacity: 32,
            frame_row_limit: 512,
            allows_quads: true,
            allows_rdf_star: true,
            allows_generalized: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum OptionsError {
    #[error("name table capacity {0} is below the floor of 8")]
    NameCapacityTooSmall(u32),
    #[error("frame row limit must be at least 1")]
    ZeroFrameRowLimit,
    #[error("table capacity {0} exceeds the supported maximum of {MAX_TABLE_CAPACITY}")]
    CapacityTooLarge(u32),
}

impl StreamOptions {
    pub fn validate(&self) -> Result<(), OptionsError> {
        if self.name_table_capacity < 8 {
            return Err(OptionsError::NameCapacityTooSmall(self.name_table_capacity));
        }
        if self.frame_row_limit == 0 {
            return Err(OptionsError::ZeroFrameRowLimit);
        }
        for cap in [
            self.name_table_capacity,
            self.prefix_table_capacity,
            self.datatype_table_capacity,
        ] {
            if cap > MAX_TABLE_CAPACITY {
                return Err(OptionsError::CapacityTooLarge(cap));
            }
        }
        Ok(())
    }

    pub(crate) fn flag_bits(&self) -> u32 {
        let mut bits = 0;
        if self.allows_quads {
            bits |= FLAG_QUADS;
        }
        if self.allows_rdf_star {
            bits |= FLAG_RDF_STAR;
        }
        if self.allows_generalized {
            bits |= FLAG_GENERALIZED;
        }
        bits
    }

    pub(crate) fn from_fields(
        name_table_capacity: u32,
        prefix_table_capacity: u32,
        datatype_table_capacity: u32,
        frame_row_limit: u32,
        flags: u32,
    ) -> Self {
        StreamOptions {
            name_table_capacity,
            prefix_table_capacity,
            datatype_table_capacity,
            frame_row_limit,
            allows_quads: flags & FLAG_QUADS != 0,
            allows_rdf_star: flags & FLAG_RDF_STAR != 0,
            allows_generalized: flags & FLAG_GENERALIZED != 0,
        }
    }

    /// Appends the options row payload: version, the three capacities, the
    /// frame row limit, and the flag bits, all as varints.
    pub(crate) fn write_payload(&self, out: &mut Vec<u8>) {
        write_varint(FORMAT_VERSION, out);
        write_varint(self.name_table_capacity, out);
        write_varint(self.prefix_table_capacity, out);
        write_varint(self.datatype_table_capacity, out);
        write_varint(self.frame_row_limit, out);
        write_varint(self.flag_bits(), out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let o = StreamOptions::default();
        assert_eq!(o.name_table_capacity, 4000);
        assert_eq!(o.prefix_table_capacity, 1024);
        assert_eq!(o.datatype_table_capacity, 32);
        assert_eq!(o.frame_row_limit, 512);
        assert!(o.validate().is_ok());
    }

    #[test]
    fn validation_catches_bad_values() {
        let mut o = StreamOptions { name_table_capacity: 7, ..Default::default() };
        assert_eq!(o.validate(), Err(OptionsError::NameCapacityTooSmall(7)));
        o.name_table_capacity = 8;
        o.frame_row_limit = 0;
        assert_eq!(o.validate(), Err(OptionsError::ZeroFrameRowLimit));
        o.frame_row_limit = 1;
        o.prefix_table_capacity = MAX_TABLE_CAPACITY + 1;
        assert!(matches!(o.validate(), Err(OptionsError::CapacityTooLarge(_))));
        o.prefix_table_capacity = 0;
        o.datatype_table_capacity = 0;
        assert!(o.validate().is_ok());
    }

    #[test]
    fn flag_bits_round_trip() {
        for quads in [false, true] {
            for star in [false, true] {
                for general in [false, true] {
                    let o = StreamOptions {
                        allows_quads: quads,
                        allows_rdf_star: star,
                        allows_generalized: general,
                        ..Default::default()
                    };
                    let back = StreamOptions::from_fields(
                        o.name_table_capacity,
                        o.prefix_table_capacity,
                        o.datatype_table_capacity,
                        o.frame_row_limit,
                        o.flag_bits(),
                    );
                    assert_eq!(back, o);
                }
            }
        }
    }
}
