//! Decoding for inputs that hold one stream or several back to back.
//!
//! Concatenating encoded files is a natural shell operation, so the binary
//! readers here accept it: at every frame boundary the next bytes are probed
//! for the stream magic, and a match starts a fresh decoder (lookup tables
//! and registers reset, as the new stream's encoder did). The probe is
//! unambiguous because the magic's first byte, read as a frame length,
//! would declare a frame starting with an unassigned row tag.

use std::collections::VecDeque;

use jpt_core::wire::{DecodeError, StreamDecoder, StreamOptions, MAGIC};
use jpt_core::PatchOp;

enum Boundary {
    /// At a potential stream start; `got` magic bytes matched and held back.
    Probe { got: usize },
    /// Mirroring the frame length varint (bytes already forwarded).
    FrameLen { value: u64, shift: u32 },
    /// Inside a frame body with this many bytes still to forward.
    Body { left: u64 },
    /// Structure lost; forward everything and let the decoder report.
    Dead,
}

pub struct MultiDecoder {
    decoder: StreamDecoder,
    state: Boundary,
    /// Nothing has been fed to the current decoder yet.
    fresh: bool,
    /// Ops drained out of a finished stream during rollover.
    pending: VecDeque<PatchOp>,
    /// Error found while draining a finished stream, surfaced after pending.
    failed: Option<DecodeError>,
    streams_done: u32,
    bytes_done: u64,
    entries_done: u64,
    evictions_done: u64,
}

impl MultiDecoder {
    pub fn new() -> Self {
        MultiDecoder {
            decoder: StreamDecoder::new(),
            state: Boundary::Probe { got: 0 },
            fresh: true,
            pending: VecDeque::new(),
            failed: None,
            streams_done: 0,
            bytes_done: 0,
            entries_done: 0,
            evictions_done: 0,
        }
    }

    /// Streams seen so far, counting the one in progress.
    pub fn streams(&self) -> u32 {
        self.streams_done + u32::from(!self.fresh)
    }

    pub fn bytes_consumed(&self) -> u64 {
        self.bytes_done + self.decoder.stream_offset()
    }

    pub fn table_entries(&self) -> u64 {
        self.entries_done + self.decoder.table_entries()
    }

    pub fn table_evictions(&self) -> u64 {
        self.evictions_done + self.decoder.table_evictions()
    }

    /// Options of the stream currently being decoded.
    pub fn options(&self) -> Option<&StreamOptions> {
        self.decoder.options()
    }

    pub fn feed(&mut self, chunk: &[u8]) {
        let mut i = 0;
        while i < chunk.len() {
            match self.state {
                Boundary::Body { ref mut left } => {
                    let take = (*left).min((chunk.len() - i) as u64) as usize;
                    self.decoder.feed(&chunk[i..i + take]);
                    i += take;
                    *left -= take as u64;
                    if *left == 0 {
                        self.state = Boundary::Probe { got: 0 };
                    }
                }
                Boundary::Dead => {
                    self.decoder.feed(&chunk[i..]);
                    return;
                }
                _ => {
                    self.step_byte(chunk[i]);
                    i += 1;
                }
            }
        }
    }

    pub fn poll_op(&mut self) -> Result<Option<PatchOp>, DecodeError> {
        if let Some(op) = self.pending.pop_front() {
            return Ok(Some(op));
        }
        if let Some(err) = &self.failed {
            return Err(err.clone());
        }
        match self.decoder.poll_op() {
            Ok(op) => Ok(op),
            Err(err) => Err(self.rebase(err)),
        }
    }

    /// Checks that input ended cleanly: between streams, with the current
    /// stream complete.
    pub fn finish(&mut self) -> Result<(), DecodeError> {
        if let Boundary::Probe { got } = self.state {
            if got > 0 {
                if self.fresh {
                    // The whole input was a partial magic; hand it over so
                    // the decoder reports the early end.
                    self.fresh = false;
                    self.decoder.feed(&MAGIC[..got]);
                    self.state = Boundary::Dead;
                } else {
                    // A partial magic mid-input is a truncated next frame;
                    // replaying it as frame-length bytes lets the decoder
                    // locate the truncation itself.
                    self.state = Boundary::FrameLen { value: 0, shift: 0 };
                    for &byte in &MAGIC[..got] {
                        self.len_byte(byte);
                    }
                }
            }
        }
        if let Some(err) = &self.failed {
            return Err(err.clone());
        }
        self.decoder.finish().map_err(|err| self.rebase(err))
    }

    /// Shifts a per-stream error offset to the whole-input offset.
    fn rebase(&self, mut err: DecodeError) -> DecodeError {
        err.offset += self.bytes_done;
        err
    }

    fn step_byte(&mut self, b: u8) {
        match &mut self.state {
            Boundary::Probe { got } => {
                if b == MAGIC[*got] {
                    *got += 1;
                    if *got == MAGIC.len() {
                        if !self.fresh {
                            self.rollover();
                        }
                        self.fresh = false;
                        self.decoder.feed(&MAGIC);
                        self.state = Boundary::FrameLen { value: 0, shift: 0 };
                    }
                } else {
                    // Not a stream start: the held bytes belong to a frame
                    // length varint (or are garbage the decoder will flag).
                    let held = *got;
                    self.state = Boundary::FrameLen { value: 0, shift: 0 };
                    for &byte in &MAGIC[..held] {
                        self.len_byte(byte);
                    }
                    self.len_byte(b);
                }
            }
            Boundary::FrameLen { .. } => self.len_byte(b),
            // Body and Dead are handled in feed.
            Boundary::Body { .. } | Boundary::Dead => unreachable!(),
        }
    }

    fn len_byte(&mut self, b: u8) {
        self.decoder.feed(&[b]);
        if let Boundary::FrameLen { value, shift } = &mut self.state {
            if *shift >= 35 {
                // Over any legal varint; the decoder reports the error.
                self.state = Boundary::Dead;
                return;
            }
            *value |= u64::from(b & 0x7F) << *shift;
            if b & 0x80 == 0 {
                let len = *value;
                self.state =
                    if len == 0 { Boundary::Probe { got: 0 } } else { Boundary::Body { left: len } };
            } else {
                *shift += 7;
            }
        }
    }

    /// Retires the finished stream and starts a fresh decoder for the next.
    fn rollover(&mut self) {
        loop {
            match self.decoder.poll_op() {
                Ok(Some(op)) => self.pending.push_back(op),
                Ok(None) => break,
                Err(err) => {
                    let err = self.rebase(err);
                    self.failed.get_or_insert(err);
                    break;
                }
            }
        }
        if self.failed.is_none() {
            if let Err(err) = self.decoder.finish() {
                self.failed = Some(self.rebase(err));
            }
        }
        self.streams_done += 1;
        self.bytes_done += self.decoder.stream_offset();
        self.entries_done += self.decoder.table_entries();
        self.evictions_done += self.decoder.table_evictions();
        self.decoder = StreamDecoder::new();
    }
}

impl Default for MultiDecoder {
    fn default() -> Self {
        Self::new()
    }
}
