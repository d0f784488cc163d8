//! Streaming lookup tables.
//!
//! Both ends keep the same mapping of small integer ids to strings. Ids are
//! 1-based; id 0 in an entry row's id field means "last assigned id plus
//! one", which keeps sequential fills to a single byte. The encoder fills
//! unused ids first and then reuses the least-recently-touched slot; the
//! decoder does whatever the entry rows say, so the two stay in lockstep
//! without any negotiation.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use hashbrown::HashMap;

/// Byte cap for strings stored in lookup tables.
pub const MAX_ENTRY_LEN: usize = 1 << 20;

const NONE: u32 = u32::MAX;

/// Value too long to live in a lookup table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("lookup entry of {len} bytes exceeds the {MAX_ENTRY_LEN}-byte cap")]
pub struct EntryTooLong {
    pub len: usize,
}

/// Outcome of [`EncoderTable::get_or_assign`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acquired {
    /// The value was resident; no entry row is needed.
    Hit { id: u32 },
    /// The value was assigned a slot; the caller must emit an entry row with
    /// `id_field` (0 when the id continues the sequential run).
    Assigned { id: u32, id_field: u32, evicted: bool },
}

impl Acquired {
    pub fn id(&self) -> u32 {
        match *self {
            Acquired::Hit { id } | Acquired::Assigned { id, .. } => id,
        }
    }
}

/// Encoder-side table: value-to-id map with exact least-recently-used
/// replacement. Hits count as touches. The recency order is an intrusive
/// doubly-linked list over slots, so touches are O(1) even at large
/// capacities.
#[derive(Debug, Clone)]
pub struct EncoderTable {
    capacity: u32,
    index: HashMap<String, u32>,
    values: Vec<String>,
    prev: Vec<u32>,
    next: Vec<u32>,
    head: u32,
    tail: u32,
    pinned: Vec<bool>,
    pinned_slots: Vec<u32>,
    last_set_id: u32,
    entries: u64,
    evictions: u64,
}

impl EncoderTable {
    pub fn new(capacity: u32) -> Self {
        EncoderTable {
            capacity,
            index: HashMap::new(),
            values: Vec::new(),
            prev: Vec::new(),
            next: Vec::new(),
            head: NONE,
            tail: NONE,
            pinned: Vec::new(),
            pinned_slots: Vec::new(),
            last_set_id: 0,
            entries: 0,
            evictions: 0,
        }
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    /// Occupied slots.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entry rows emitted so far (assignments, including evictions).
    pub fn entries(&self) -> u64 {
        self.entries
    }

    /// Assignments that displaced a resident value.
    pub fn evictions(&self) -> u64 {
        self.evictions
    }

    pub fn last_set_id(&self) -> u32 {
        self.last_set_id
    }

    /// Id for `value` without touching recency. Test and inspection hook.
    pub fn peek(&self, value: &str) -> Option<u32> {
        self.index.get(value).map(|slot| slot + 1)
    }

    /// Ids and values from most to least recently used.
    pub fn iter_mru(&self) -> impl Iterator<Item = (u32, &str)> {
        let mut slot = self.head;
        core::iter::from_fn(move || {
            if slot == NONE {
                return None;
            }
            let cur = slot;
            slot = self.next[cur as usize];
            Some((cur + 1, self.values[cur as usize].as_str()))
        })
    }

    fn unlink(&mut self, slot: u32) {
        let p = self.prev[slot as usize];
        let n = self.next[slot as usize];
        if p == NONE {
            self.head = n;
        } else {
            self.next[p as usize] = n;
        }
        if n == NONE {
            self.tail = p;
        } else {
            self.prev[n as usize] = p;
        }
    }

    fn link_front(&mut self, slot: u32) {
        self.prev[slot as usize] = NONE;
        self.next[slot as usize] = self.head;
        if self.head != NONE {
            self.prev[self.head as usize] = slot;
        }
        self.head = slot;
        if self.tail == NONE {
            self.tail = slot;
        }
    }

    fn touch(&mut self, slot: u32) {
        if self.head == slot {
            return;
        }
        self.unlink(slot);
        self.link_front(slot);
    }

    /// Resolves `value` to an id, assigning (and possibly evicting) when it
    /// is not resident. Every call counts as a use for recency purposes.
    pub fn get_or_assign(&mut self, value: &str) -> Result<Acquired, EntryTooLong> {
        if value.len() > MAX_ENTRY_LEN {
            return Err(EntryTooLong { len: value.len() });
        }
        if let Some(&slot) = self.index.get(value) {
            self.touch(slot);
            return Ok(Acquired::Hit { id: slot + 1 });
        }
        Ok(self.assign(value, self.tail))
    }

    /// [`Self::get_or_assign`] for ids referenced by a row still being
    /// built. The resolved slot is held until [`Self::end_row`] and eviction
    /// skips held slots: the decoder applies entry rows before the row that
    /// references them, so an id handed out for the current row must not be
    /// reassigned until that row is finished.
    ///
    /// Held slots are always the most recently touched ones, so the victim
    /// only differs from plain LRU when every slot is held, and the caller
    /// must bound per-row demand by the capacity before acquiring.
    pub fn row_acquire(&mut self, value: &str) -> Result<Acquired, EntryTooLong> {
        if value.len() > MAX_ENTRY_LEN {
            return Err(EntryTooLong { len: value.len() });
        }
        if let Some(&slot) = self.index.get(value) {
            self.touch(slot);
            self.pin(slot);
            return Ok(Acquired::Hit { id: slot + 1 });
        }
        let victim = self.unpinned_tail();
        let acquired = self.assign(value, victim);
        self.pin(acquired.id() - 1);
        Ok(acquired)
    }

    /// Releases the slots held by [`Self::row_acquire`].
    pub fn end_row(&mut self) {
        for slot in self.pinned_slots.drain(..) {
            self.pinned[slot as usize] = false;
        }
    }

    fn pin(&mut self, slot: u32) {
        if !core::mem::replace(&mut self.pinned[slot as usize], true) {
            self.pinned_slots.push(slot);
        }
    }

    fn unpinned_tail(&self) -> u32 {
        let mut slot = self.tail;
        while slot != NONE && self.pinned[slot as usize] {
            slot = self.prev[slot as usize];
        }
        slot
    }

    fn assign(&mut self, value: &str, victim: u32) -> Acquired {
        assert!(self.capacity > 0, "lookup assignment into a zero-capacity table");
        let (slot, evicted) = if (self.values.len() as u32) < self.capacity {
            let slot = self.values.len() as u32;
            self.values.push(value.to_string());
            self.prev.push(NONE);
            self.next.push(NONE);
            self.pinned.push(false);
            (slot, false)
        } else {
            assert!(victim != NONE, "lookup eviction with every slot held by the current row");
            self.unlink(victim);
            let old = core::mem::replace(&mut self.values[victim as usize], value.to_string());
            self.index.remove(&old);
            self.evictions += 1;
            (victim, true)
        };
        self.index.insert(value.to_string(), slot);
        self.link_front(slot);
        self.entries += 1;
        let id = slot + 1;
        let id_field = if id == self.last_set_id + 1 { 0 } else { id };
        self.last_set_id = id;
        Acquired::Assigned { id, id_field, evicted }
    }
}

/// Which table an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Name,
    Prefix,
    Datatype,
}

impl core::fmt::Display for TableKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            TableKind::Name => "name",
            TableKind::Prefix => "prefix",
            TableKind::Datatype => "datatype",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableError {
    /// Id 0 where a concrete reference is required.
    ZeroId,
    /// Id beyond the declared capacity.
    IdOutOfRange { id: u32, capacity: u32 },
    /// Id inside the capacity but never assigned.
    IdUnset { id: u32 },
}

/// Decoder-side table: a plain id-to-value array driven entirely by entry
/// rows. It grows on demand up to the declared capacity and never decides
/// anything on its own, which is what keeps it in lockstep with whatever
/// replacement policy the encoder ran.
#[derive(Debug, Clone)]
pub struct DecoderTable {
    capacity: u32,
    values: Vec<Option<String>>,
    occupied: usize,
    last_set_id: u32,
    entries: u64,
    evictions: u64,
}

impl DecoderTable {
    pub fn new(capacity: u32) -> Self {
        DecoderTable {
            capacity,
            values: Vec::new(),
            occupied: 0,
            last_set_id: 0,
            entries: 0,
            evictions: 0,
        }
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    /// Occupied slots.
    pub fn len(&self) -> usize {
        self.occupied
    }

    pub fn is_empty(&self) -> bool {
        self.occupied == 0
    }

    pub fn entries(&self) -> u64 {
        self.entries
    }

    /// Entry rows that overwrote an occupied slot.
    pub fn evictions(&self) -> u64 {
        self.evictions
    }

    pub fn last_set_id(&self) -> u32 {
        self.last_set_id
    }

    /// Applies one entry row, returning the id that was assigned.
    pub fn apply_entry(&mut self, id_field: u32, value: String) -> Result<u32, TableError> {
        let id = if id_field == 0 { self.last_set_id + 1 } else { id_field };
        if id > self.capacity {
            return Err(TableError::IdOutOfRange { id, capacity: self.capacity });
        }
        let slot = (id - 1) as usize;
        if slot >= self.values.len() {
            self.values.resize_with(slot + 1, || None);
        }
        if self.values[slot].is_some() {
            self.evictions += 1;
        } else {
            self.occupied += 1;
        }
        self.values[slot] = Some(value);
        self.last_set_id = id;
        self.entries += 1;
        Ok(id)
    }

    pub fn resolve(&self, id: u32) -> Result<&str, TableError> {
        if id == 0 {
            return Err(TableError::ZeroId);
        }
        if id > self.capacity {
            return Err(TableError::IdOutOfRange { id, capacity: self.capacity });
        }
        self.values
            .get((id - 1) as usize)
            .and_then(Option::as_deref)
            .ok_or(TableError::IdUnset { id })
    }

    /// Occupied ids and their values, in id order.
    pub fn iter_set(&self) -> impl Iterator<Item = (u32, &str)> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.as_deref().map(|s| (i as u32 + 1, s)))
    }
}
