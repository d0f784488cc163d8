//! Patch operations and transaction-structure validation.

use core::fmt;

use alloc::string::String;
use alloc::vec::Vec;

use crate::term::{Statement, Term};

/// One operation in a patch stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatchOp {
    /// Stream metadata: `H key value .`. Keys are non-empty tokens without
    /// whitespace; values are arbitrary terms except the default-graph marker.
    Header { key: String, value: Term },
    /// `TX .` opens a transaction.
    TxBegin,
    /// `TC .` commits the open transaction.
    TxCommit,
    /// `TA .` aborts the open transaction.
    TxAbort,
    /// `A s p o [g] .` asserts a statement.
    Add(Statement),
    /// `D s p o [g] .` retracts a statement.
    Delete(Statement),
    /// `PA "label" <iri> .` binds a prefix label. The graph qualifier is kept
    /// in the model for completeness but both codecs in this crate omit it.
    PrefixAdd { label: String, iri: String, graph: Option<Term> },
    /// `PD "label" .` removes a prefix binding. The dialect written here
    /// carries only the label; `iri` is empty when parsed back.
    PrefixDelete { label: String, iri: String, graph: Option<Term> },
}

impl PatchOp {
    /// Two-letter opcode used by the text format.
    pub fn opcode(&self) -> &'static str {
        match self {
            PatchOp::Header { .. } => "H",
            PatchOp::TxBegin => "TX",
            PatchOp::TxCommit => "TC",
            PatchOp::TxAbort => "TA",
            PatchOp::Add(_) => "A",
            PatchOp::Delete(_) => "D",
            PatchOp::PrefixAdd { .. } => "PA",
            PatchOp::PrefixDelete { .. } => "PD",
        }
    }

    pub fn statement(&self) -> Option<&Statement> {
        match self {
            PatchOp::Add(s) | PatchOp::Delete(s) => Some(s),
            _ => None,
        }
    }
}

/// An ordered sequence of patch operations.
///
/// A patch stream may hold any number of transactions; the boundaries are the
/// `TxBegin`/`TxCommit`/`TxAbort` operations themselves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Patch {
    pub ops: Vec<PatchOp>,
}

impl Patch {
    pub fn new() -> Self {
        Patch { ops: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: PatchOp) {
        self.ops.push(op);
    }

    pub fn iter(&self) -> core::slice::Iter<'_, PatchOp> {
        self.ops.iter()
    }
}

impl From<Vec<PatchOp>> for Patch {
    fn from(ops: Vec<PatchOp>) -> Self {
        Patch { ops }
    }
}

impl FromIterator<PatchOp> for Patch {
    fn from_iter<I: IntoIterator<Item = PatchOp>>(iter: I) -> Self {
        Patch { ops: iter.into_iter().collect() }
    }
}

impl IntoIterator for Patch {
    type Item = PatchOp;
    type IntoIter = alloc::vec::IntoIter<PatchOp>;
    fn into_iter(self) -> Self::IntoIter {
        self.ops.into_iter()
    }
}

impl<'a> IntoIterator for &'a Patch {
    type Item = &'a PatchOp;
    type IntoIter = core::slice::Iter<'a, PatchOp>;
    fn into_iter(self) -> Self::IntoIter {
        self.ops.iter()
    }
}

/// Whether a string can serve as a header key: one non-empty token with no
/// whitespace or comment character, not a lone dot, and not starting like a
/// term. Both the text writer and the binary encoder enforce this so headers
/// survive conversion in either direction.
pub fn header_key_is_valid(key: &str) -> bool {
    !key.is_empty()
        && key != "."
        && !key.starts_with('"')
        && !key.starts_with('<')
        && !key.chars().any(|c| c.is_whitespace() || c == '#')
}

/// Whether a string is a well-formed language tag (`[A-Za-z]+` subtags of
/// `[A-Za-z0-9]+` joined by `-`). Writers reject anything else since it
/// could not be parsed back.
pub fn language_tag_is_valid(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let Some(first) = parts.next() else { return false };
    if first.is_empty() || !first.bytes().all(|b| b.is_ascii_alphabetic()) {
        return false;
    }
    parts.all(|p| !p.is_empty() && p.bytes().all(|b| b.is_ascii_alphanumeric()))
}

/// Whether a blank node label round-trips through the text syntax:
/// alphanumerics, `_`, `-`, characters beyond ASCII, and interior dots.
pub fn bnode_label_is_valid(label: &str) -> bool {
    if label.is_empty() || label.starts_with('.') || label.ends_with('.') {
        return false;
    }
    label
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.' || (c as u32) >= 0x80)
}

/// Number of patch spans in an operation sequence: the count of `TxBegin`
/// operations, or one when the sequence is non-empty but never opens a
/// transaction, or zero when it is empty.
pub fn patch_span_count(ops: &[PatchOp]) -> u64 {
    let begins = ops.iter().filter(|op| matches!(op, PatchOp::TxBegin)).count() as u64;
    if begins == 0 && !ops.is_empty() {
        1
    } else {
        begins
    }
}

/// A transaction-structure problem found by [`validate_transactions`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TxViolation {
    /// Index into the operation sequence the violation is reported against.
    pub op_index: usize,
    pub kind: TxViolationKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TxViolationKind {
    /// `TxBegin` while a transaction is already open.
    NestedBegin,
    /// `TxCommit` with no open transaction.
    CommitOutsideTx,
    /// `TxAbort` with no open transaction.
    AbortOutsideTx,
    /// Data or prefix operation outside a transaction (strict mode only).
    OpOutsideTx,
    /// A transaction was still open at the end of the sequence; the index
    /// points at its `TxBegin`.
    UnclosedTx,
}

impl fmt::Display for TxViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TxViolationKind::NestedBegin => "transaction begun while another is open",
            TxViolationKind::CommitOutsideTx => "commit outside a transaction",
            TxViolationKind::AbortOutsideTx => "abort outside a transaction",
            TxViolationKind::OpOutsideTx => "operation outside a transaction",
            TxViolationKind::UnclosedTx => "transaction never committed or aborted",
        })
    }
}

impl fmt::Display for TxViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "op {}: {}", self.op_index, self.kind)
    }
}

/// Validates transaction structure over a patch.
///
/// Every violation is reported with the index of the offending operation. A
/// nested `TxBegin` both reports a violation and restarts the open span, so a
/// sequence of two `TxBegin` ops yields a nesting violation and an unclosed
/// one, both at the second op's index. In strict mode, data and prefix
/// operations outside any transaction are violations too; headers are exempt
/// either way. An empty patch is valid.
pub fn validate_transactions(patch: &Patch, strict: bool) -> Vec<TxViolation> {
    let mut violations = Vec::new();
    let mut open: Option<usize> = None;
    for (i, op) in patch.ops.iter().enumerate() {
        match op {
            PatchOp::TxBegin => {
                if open.is_some() {
                    violations.push(TxViolation { op_index: i, kind: TxViolationKind::NestedBegin });
                }
                open = Some(i);
            }
            PatchOp::TxCommit => {
                if open.is_none() {
                    violations
                        .push(TxViolation { op_index: i, kind: TxViolationKind::CommitOutsideTx });
                }
                open = None;
            }
            PatchOp::TxAbort => {
                if open.is_none() {
                    violations
                        .push(TxViolation { op_index: i, kind: TxViolationKind::AbortOutsideTx });
                }
                open = None;
            }
            PatchOp::Add(_)
            | PatchOp::Delete(_)
            | PatchOp::PrefixAdd { .. }
            | PatchOp::PrefixDelete { .. } => {
                if strict && open.is_none() {
                    violations
                        .push(TxViolation { op_index: i, kind: TxViolationKind::OpOutsideTx });
                }
            }
            PatchOp::Header { .. } => {}
        }
    }
    if let Some(i) = open {
        violations.push(TxViolation { op_index: i, kind: TxViolationKind::UnclosedTx });
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;

    fn add() -> PatchOp {
        PatchOp::Add(Statement::triple(
            Term::iri("s"),
            Term::iri("p"),
            Term::literal("o"),
        ))
    }

    #[test]
    fn empty_patch_is_valid() {
        assert!(validate_transactions(&Patch::new(), true).is_empty());
    }

    #[test]
    fn well_formed_transaction_is_valid() {
        let p = Patch::from(alloc::vec![PatchOp::TxBegin, add(), PatchOp::TxCommit]);
        assert!(validate_transactions(&p, true).is_empty());
    }

    #[test]
    fn double_begin_reports_nesting_and_unclosed() {
        let p = Patch::from(alloc::vec![PatchOp::TxBegin, PatchOp::TxBegin]);
        let v = validate_transactions(&p, false);
        assert_eq!(
            v,
            alloc::vec![
                TxViolation { op_index: 1, kind: TxViolationKind::NestedBegin },
                TxViolation { op_index: 1, kind: TxViolationKind::UnclosedTx },
            ]
        );
    }

    #[test]
    fn commit_without_begin() {
        let p = Patch::from(alloc::vec![PatchOp::TxCommit]);
        let v = validate_transactions(&p, false);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, TxViolationKind::CommitOutsideTx);
    }

    #[test]
    fn strict_flags_loose_ops_but_not_headers() {
        let p = Patch::from(alloc::vec![
            PatchOp::Header { key: "id".into(), value: Term::bnode("b") },
            add(),
        ]);
        assert!(validate_transactions(&p, false).is_empty());
        let v = validate_transactions(&p, true);
        assert_eq!(v, alloc::vec![TxViolation { op_index: 1, kind: TxViolationKind::OpOutsideTx }]);
    }

    #[test]
    fn span_counting() {
        assert_eq!(patch_span_count(&[]), 0);
        assert_eq!(patch_span_count(&[add()]), 1);
        assert_eq!(
            patch_span_count(&[
                PatchOp::TxBegin,
                add(),
                PatchOp::TxCommit,
                PatchOp::TxBegin,
                PatchOp::TxAbort
            ]),
            2
        );
    }
}
