//! Stream statistics: operation counts, patch spans, and table activity.

use crate::patch::PatchOp;
use crate::wire::decode::{DecodeError, StreamDecoder};

/// Summary of one stream.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StatsReport {
    /// Patch spans: transaction count, or one for a stream with operations
    /// but no transaction markers.
    pub patches: u64,
    /// Every operation, transaction markers and headers included.
    pub operations: u64,
    pub adds: u64,
    pub deletes: u64,
    pub prefix_ops: u64,
    pub headers: u64,
    /// Encoded size in bytes (for binary input; callers measuring text set
    /// this to the text length).
    pub bytes: u64,
    /// Lookup entry rows (binary streams only).
    pub entry_rows: u64,
    /// Lookup entry rows that displaced a resident value.
    pub evictions: u64,
}

impl StatsReport {
    pub fn bytes_per_op(&self) -> f64 {
        if self.operations == 0 {
            0.0
        } else {
            self.bytes as f64 / self.operations as f64
        }
    }
}

/// Operation counter shared by both formats: feed it ops from any source and
/// turn it into a report.
#[derive(Debug, Clone, Default)]
pub struct OpCounter {
    operations: u64,
    adds: u64,
    deletes: u64,
    prefix_ops: u64,
    headers: u64,
    tx_begins: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, op: &PatchOp) {
        self.operations += 1;
        match op {
            PatchOp::Header { .. } => self.headers += 1,
            PatchOp::TxBegin => self.tx_begins += 1,
            PatchOp::TxCommit | PatchOp::TxAbort => {}
            PatchOp::Add(_) => self.adds += 1,
            PatchOp::Delete(_) => self.deletes += 1,
            PatchOp::PrefixAdd { .. } | PatchOp::PrefixDelete { .. } => self.prefix_ops += 1,
        }
    }

    pub fn into_report(self, bytes: u64) -> StatsReport {
        let patches = if self.tx_begins > 0 {
            self.tx_begins
        } else if self.operations > 0 {
            1
        } else {
            0
        };
        StatsReport {
            patches,
            operations: self.operations,
            adds: self.adds,
            deletes: self.deletes,
            prefix_ops: self.prefix_ops,
            headers: self.headers,
            bytes,
            entry_rows: 0,
            evictions: 0,
        }
    }
}

/// Streaming stats over binary input: decodes and counts without keeping any
/// operations around.
#[derive(Debug, Default)]
pub struct StatsCollector {
    decoder: StreamDecoder,
    counter: OpCounter,
}

impl StatsCollector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn feed(&mut self, chunk: &[u8]) -> Result<(), DecodeError> {
        self.decoder.feed(chunk);
        while let Some(op) = self.decoder.poll_op()? {
            self.counter.push(&op);
        }
        Ok(())
    }

    pub fn finish(self) -> Result<StatsReport, DecodeError> {
        self.decoder.finish()?;
        let mut report = self.counter.into_report(self.decoder.stream_offset());
        report.entry_rows = self.decoder.table_entries();
        report.evictions = self.decoder.table_evictions();
        Ok(report)
    }
}

/// Stats for a complete in-memory binary stream.
pub fn collect_stats(bytes: &[u8]) -> Result<StatsReport, DecodeError> {
    let mut collector = StatsCollector::new();
    collector.feed(bytes)?;
    collector.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patch::Patch;
    use crate::term::{Statement, Term};
    use crate::wire::encode::encode_patch;
    use crate::wire::options::StreamOptions;
    use alloc::vec;

    #[test]
    fn counts_ops_by_kind() {
        let patch = Patch::from(vec![
            PatchOp::TxBegin,
            PatchOp::Add(Statement::triple(
                Term::bnode("s"),
                Term::iri("http://example.org/p"),
                Term::literal("23"),
            )),
            PatchOp::Delete(Statement::triple(
                Term::bnode("s"),
                Term::iri("http://example.org/p"),
                Term::literal("22"),
            )),
            PatchOp::TxCommit,
        ]);
        let bytes = encode_patch(&patch, StreamOptions::default()).unwrap();
        let report = collect_stats(&bytes).unwrap();
        assert_eq!(report.patches, 1);
        assert_eq!(report.operations, 4);
        assert_eq!(report.adds, 1);
        assert_eq!(report.deletes, 1);
        assert_eq!(report.bytes, bytes.len() as u64);
        // Entry rows: the shared prefix and name, nothing else.
        assert_eq!(report.entry_rows, 2);
        assert_eq!(report.evictions, 0);
        assert!(report.bytes_per_op() > 0.0);
    }

    #[test]
    fn untransacted_ops_count_as_one_patch() {
        let mut counter = OpCounter::new();
        counter.push(&PatchOp::Add(Statement::triple(
            Term::iri("urn:s"),
            Term::iri("urn:p"),
            Term::literal("x"),
        )));
        let report = counter.into_report(10);
        assert_eq!(report.patches, 1);
        assert_eq!(OpCounter::new().into_report(0).patches, 0);
    }
}
