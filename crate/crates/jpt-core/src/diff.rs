//! Set difference between datasets and patch application.

use core::fmt;

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::patch::{Patch, PatchOp};
use crate::term::Statement;

/// Shape of the patch produced by [`diff`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOptions {
    /// Wrap the operations in `TxBegin` / `TxCommit`.
    pub emit_transaction: bool,
    /// Emit all deletes before all adds.
    pub deletes_first: bool,
    /// Sort each group lexicographically by rendered term text, making the
    /// output deterministic regardless of set iteration order.
    pub canonical_order: bool,
}

impl Default for DiffOptions {
    fn default() -> Self {
        DiffOptions { emit_transaction: true, deletes_first: true, canonical_order: true }
    }
}

/// Sort key used for canonical statement order: the rendered text of the four
/// positions. The default graph renders as the empty string and sorts first.
pub fn statement_sort_key(st: &Statement) -> (String, String, String, String) {
    (
        st.subject.to_string(),
        st.predicate.to_string(),
        st.object.to_string(),
        st.graph.to_string(),
    )
}

/// Sorts statements into canonical order in place.
pub fn sort_statements(statements: &mut [Statement]) {
    statements.sort_by_cached_key(statement_sort_key);
}

/// Computes the minimal patch turning `before` into `after`: one delete per
/// statement only in `before`, one add per statement only in `after`, and
/// nothing else. Membership is plain set membership over whole statements.
pub fn diff(before: &Dataset, after: &Dataset, options: &DiffOptions) -> Patch {
    let mut deletes: Vec<Statement> =
        before.iter().filter(|st| !after.contains(st)).cloned().collect();
    let mut adds: Vec<Statement> =
        after.iter().filter(|st| !before.contains(st)).cloned().collect();
    if options.canonical_order {
        sort_statements(&mut deletes);
        sort_statements(&mut adds);
    }

    let mut ops = Vec::with_capacity(deletes.len() + adds.len() + 2);
    if options.emit_transaction {
        ops.push(PatchOp::TxBegin);
    }
    let (first, second): (Vec<Statement>, Vec<Statement>) =
        if options.deletes_first { (deletes, adds) } else { (adds, deletes) };
    let first_is_delete = options.deletes_first;
    for st in first {
        ops.push(if first_is_delete { PatchOp::Delete(st) } else { PatchOp::Add(st) });
    }
    for st in second {
        ops.push(if first_is_delete { PatchOp::Add(st) } else { PatchOp::Delete(st) });
    }
    if options.emit_transaction {
        ops.push(PatchOp::TxCommit);
    }
    Patch::from(ops)
}

/// Applies a patch to a dataset, returning the new dataset. Adds of present
/// statements and deletes of absent ones are silently ignored; transaction
/// markers, headers, and prefix operations do not touch the data.
pub fn apply(dataset: &Dataset, patch: &Patch) -> Dataset {
    let mut out = dataset.clone();
    for op in &patch.ops {
        match op {
            PatchOp::Add(st) => {
                out.insert(st.clone());
            }
            PatchOp::Delete(st) => {
                out.remove(st);
            }
            _ => {}
        }
    }
    out
}

/// A no-op data operation found by [`apply_strict`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub op_index: usize,
    pub kind: ConflictKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConflictKind {
    /// An add whose statement was already present.
    AddAlreadyPresent,
    /// A delete whose statement was absent.
    DeleteNotPresent,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ConflictKind::AddAlreadyPresent => {
                write!(f, "op {}: add of a statement already present", self.op_index)
            }
            ConflictKind::DeleteNotPresent => {
                write!(f, "op {}: delete of a statement not present", self.op_index)
            }
        }
    }
}

/// All conflicts from a strict application, in operation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApplyConflicts {
    pub conflicts: Vec<Conflict>,
}

impl fmt::Display for ApplyConflicts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} conflicting operation(s)", self.conflicts.len())?;
        for c in &self.conflicts {
            write!(f, "\n  {c}")?;
        }
        Ok(())
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ApplyConflicts {}

/// Like [`apply`], but every add of a present statement and delete of an
/// absent one is a conflict. The whole patch is scanned so the error lists
/// every conflicting operation index, not just the first.
pub fn apply_strict(dataset: &Dataset, patch: &Patch) -> Result<Dataset, ApplyConflicts> {
    let mut out = dataset.clone();
    let mut conflicts = Vec::new();
    for (i, op) in patch.ops.iter().enumerate() {
        let kind = match op {
            PatchOp::Add(st) => (!out.insert(st.clone())).then_some(ConflictKind::AddAlreadyPresent),
            PatchOp::Delete(st) => (!out.remove(st)).then_some(ConflictKind::DeleteNotPresent),
            _ => None,
        };
        if let Some(kind) = kind {
            conflicts.push(Conflict { op_index: i, kind });
        }
    }
    if conflicts.is_empty() {
        Ok(out)
    } else {
        Err(ApplyConflicts { conflicts })
    }
}

/// Diffs each consecutive pair of snapshots. The first patch describes the
/// first snapshot as adds from an empty dataset; an empty slice yields no
/// patches. Folding the result with [`apply`] from an empty dataset
/// reproduces every snapshot in turn.
pub fn rolling_diff(snapshots: &[Dataset], options: &DiffOptions) -> Vec<Patch> {
    let mut patches = Vec::with_capacity(snapshots.len());
    let empty = Dataset::new();
    let mut prev = &empty;
    for snap in snapshots {
        patches.push(diff(prev, snap, options));
        prev = snap;
    }
    patches
}
