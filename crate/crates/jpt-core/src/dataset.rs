//! In-memory quad set with value semantics.

use hashbrown::HashSet;

use crate::term::Statement;

/// An unordered set of statements. Duplicate inserts collapse; blank nodes
/// are distinguished purely by label.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Dataset {
    statements: HashSet<Statement>,
}

impl Dataset {
    pub fn new() -> Self {
        Dataset { statements: HashSet::new() }
    }

    pub fn with_capacity(capacity: usize) -> Self {
        Dataset { statements: HashSet::with_capacity(capacity) }
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    /// Inserts a statement, returning true when it was not already present.
    pub fn insert(&mut self, statement: Statement) -> bool {
        self.statements.insert(statement)
    }

    /// Removes a statement, returning true when it was present.
    pub fn remove(&mut self, statement: &Statement) -> bool {
        self.statements.remove(statement)
    }

    pub fn contains(&self, statement: &Statement) -> bool {
        self.statements.contains(statement)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Statement> {
        self.statements.iter()
    }
}

impl FromIterator<Statement> for Dataset {
    fn from_iter<I: IntoIterator<Item = Statement>>(iter: I) -> Self {
        Dataset { statements: iter.into_iter().collect() }
    }
}

impl Extend<Statement> for Dataset {
    fn extend<I: IntoIterator<Item = Statement>>(&mut self, iter: I) {
        self.statements.extend(iter);
    }
}

impl IntoIterator for Dataset {
    type Item = Statement;
    type IntoIter = <HashSet<Statement> as IntoIterator>::IntoIter;
    fn into_iter(self) -> Self::IntoIter {
        self.statements.into_iter()
    }
}

impl<'a> IntoIterator for &'a Dataset {
    type Item = &'a Statement;
    type IntoIter = <&'a HashSet<Statement> as IntoIterator>::IntoIter;
    fn into_iter(self) -> Self::IntoIter {
        self.statements.iter()
    }
}
