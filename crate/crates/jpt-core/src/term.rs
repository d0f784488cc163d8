//! RDF terms and statements.
//!
//! Terms are generalized: any term kind may appear in any statement position
//! except [`Term::DefaultGraph`], which is only meaningful in the graph
//! position. Writers and encoders reject misplaced default-graph markers;
//! stricter positional rules (plain RDF) are available as an opt-in check.

use core::fmt::{self, Write as _};
use core::hash::{Hash, Hasher};

use alloc::boxed::Box;
use alloc::string::String;

/// A single RDF term in a generalized RDF-star data model.
///
/// Language tags compare and hash ASCII-case-insensitively but are stored as
/// written. All other comparisons are exact.
#[derive(Debug, Clone)]
pub enum Term {
    /// An IRI reference, stored unescaped.
    Iri(String),
    /// A blank node with an explicit label. Labels are compared verbatim;
    /// there is no isomorphism handling anywhere in this crate.
    BlankNode(String),
    /// A literal with no language tag or datatype annotation.
    LiteralSimple(String),
    /// A language-tagged literal.
    LiteralLang { lexical: String, lang: String },
    /// A literal with an explicit datatype IRI.
    LiteralDt { lexical: String, datatype: String },
    /// A quoted (embedded) triple.
    QuotedTriple(Box<QuotedTriple>),
    /// Marker for the default graph. Valid only in the graph position of a
    /// [`Statement`].
    DefaultGraph,
}

/// The three inner positions of a quoted triple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuotedTriple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

/// A quad. Triples carry [`Term::DefaultGraph`] in the graph position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Statement {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
    pub graph: Term,
}

/// Positions of a statement, used in error reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Position {
    Subject,
    Predicate,
    Object,
    Graph,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Position::Subject => "subject",
            Position::Predicate => "predicate",
            Position::Object => "object",
            Position::Graph => "graph",
        })
    }
}

impl Term {
    /// Convenience constructor for [`Term::Iri`].
    pub fn iri(value: impl Into<String>) -> Self {
        Term::Iri(value.into())
    }

    /// Convenience constructor for [`Term::BlankNode`].
    pub fn bnode(label: impl Into<String>) -> Self {
        Term::BlankNode(label.into())
    }

    /// Convenience constructor for [`Term::LiteralSimple`].
    pub fn literal(lexical: impl Into<String>) -> Self {
        Term::LiteralSimple(lexical.into())
    }

    /// Convenience constructor for [`Term::LiteralLang`].
    pub fn literal_lang(lexical: impl Into<String>, lang: impl Into<String>) -> Self {
        Term::LiteralLang { lexical: lexical.into(), lang: lang.into() }
    }

    /// Convenience constructor for [`Term::LiteralDt`].
    pub fn literal_dt(lexical: impl Into<String>, datatype: impl Into<String>) -> Self {
        Term::LiteralDt { lexical: lexical.into(), datatype: datatype.into() }
    }

    /// Convenience constructor for [`Term::QuotedTriple`].
    pub fn quoted(subject: Term, predicate: Term, object: Term) -> Self {
        Term::QuotedTriple(Box::new(QuotedTriple { subject, predicate, object }))
    }

    pub fn is_default_graph(&self) -> bool {
        matches!(self, Term::DefaultGraph)
    }

    pub fn is_literal(&self) -> bool {
        matches!(
            self,
            Term::LiteralSimple(_) | Term::LiteralLang { .. } | Term::LiteralDt { .. }
        )
    }

    /// True when the term may appear outside the graph position: everything
    /// except the default-graph marker, applied recursively through quoted
    /// triples.
    pub fn usable_outside_graph(&self) -> bool {
        match self {
            Term::DefaultGraph => false,
            Term::QuotedTriple(t) => {
                t.subject.usable_outside_graph()
                    && t.predicate.usable_outside_graph()
                    && t.object.usable_outside_graph()
            }
            _ => true,
        }
    }

    /// Maximum nesting depth of quoted triples inside this term. A plain term
    /// has depth 0, `<< s p o >>` has depth 1, and so on.
    pub fn nesting_depth(&self) -> usize {
        match self {
            Term::QuotedTriple(t) => {
                let inner = t
                    .subject
                    .nesting_depth()
                    .max(t.predicate.nesting_depth())
                    .max(t.object.nesting_depth());
                inner + 1
            }
            _ => 0,
        }
    }
}

impl Statement {
    pub fn new(subject: Term, predicate: Term, object: Term, graph: Term) -> Self {
        Statement { subject, predicate, object, graph }
    }

    /// Triple constructor; the graph position gets the default-graph marker.
    pub fn triple(subject: Term, predicate: Term, object: Term) -> Self {
        Statement::new(subject, predicate, object, Term::DefaultGraph)
    }

    pub fn term_at(&self, position: Position) -> &Term {
        match position {
            Position::Subject => &self.subject,
            Position::Predicate => &self.predicate,
            Position::Object => &self.object,
            Position::Graph => &self.graph,
        }
    }

    /// Position of the first misplaced default-graph marker, if any. The graph
    /// position itself admits the marker but not nested inside a quoted triple.
    pub fn misplaced_default_graph(&self) -> Option<Position> {
        for pos in [Position::Subject, Position::Predicate, Position::Object] {
            if !self.term_at(pos).usable_outside_graph() {
                return Some(pos);
            }
        }
        match &self.graph {
            Term::DefaultGraph => None,
            g if !g.usable_outside_graph() => Some(Position::Graph),
            _ => None,
        }
    }

    /// Checks the statement against plain (non-generalized) RDF positional
    /// rules: subject an IRI, blank node, or quoted triple; predicate an IRI;
    /// graph an IRI, blank node, or the default graph. Quoted triples are
    /// checked recursively. The check is off by default everywhere; callers
    /// opt in.
    pub fn strict_rdf_violation(&self) -> Option<Position> {
        if !strict_subject(&self.subject) {
            return Some(Position::Subject);
        }
        if !matches!(self.predicate, Term::Iri(_)) {
            return Some(Position::Predicate);
        }
        if !strict_object(&self.object) {
            return Some(Position::Object);
        }
        if !matches!(
            self.graph,
            Term::Iri(_) | Term::BlankNode(_) | Term::DefaultGraph
        ) {
            return Some(Position::Graph);
        }
        None
    }
}

fn strict_subject(t: &Term) -> bool {
    match t {
        Term::Iri(_) | Term::BlankNode(_) => true,
        Term::QuotedTriple(q) => strict_quoted(q),
        _ => false,
    }
}

fn strict_object(t: &Term) -> bool {
    match t {
        Term::Iri(_) | Term::BlankNode(_) => true,
        _ if t.is_literal() => true,
        Term::QuotedTriple(q) => strict_quoted(q),
        _ => false,
    }
}

fn strict_quoted(q: &QuotedTriple) -> bool {
    strict_subject(&q.subject) && matches!(q.predicate, Term::Iri(_)) && strict_object(&q.object)
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Term::Iri(a), Term::Iri(b)) => a == b,
            (Term::BlankNode(a), Term::BlankNode(b)) => a == b,
            (Term::LiteralSimple(a), Term::LiteralSimple(b)) => a == b,
            (
                Term::LiteralLang { lexical: la, lang: ta },
                Term::LiteralLang { lexical: lb, lang: tb },
            ) => la == lb && ta.eq_ignore_ascii_case(tb),
            (
                Term::LiteralDt { lexical: la, datatype: da },
                Term::LiteralDt { lexical: lb, datatype: db },
            ) => la == lb && da == db,
            (Term::QuotedTriple(a), Term::QuotedTriple(b)) => a == b,
            (Term::DefaultGraph, Term::DefaultGraph) => true,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        core::mem::discriminant(self).hash(state);
        match self {
            Term::Iri(s) | Term::BlankNode(s) | Term::LiteralSimple(s) => s.hash(state),
            Term::LiteralLang { lexical, lang } => {
                lexical.hash(state);
                // Match the case-insensitive equality above.
                lang.len().hash(state);
                for b in lang.bytes() {
                    b.to_ascii_lowercase().hash(state);
                }
            }
            Term::LiteralDt { lexical, datatype } => {
                lexical.hash(state);
                datatype.hash(state);
            }
            Term::QuotedTriple(t) => t.hash(state),
            Term::DefaultGraph => {}
        }
    }
}

/// Renders the term in N-Quads-compatible syntax. IRIs escape control and
/// forbidden characters as `\uXXXX`; literals escape the backslash, the
/// quote, and line breaks. The default-graph marker renders as the empty
/// string, which is also its spelling in statement rows (the graph field is
/// simply omitted).
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(s) => write_iri(f, s),
            Term::BlankNode(label) => {
                f.write_str("_:")?;
                f.write_str(label)
            }
            Term::LiteralSimple(lexical) => write_quoted(f, lexical),
            Term::LiteralLang { lexical, lang } => {
                write_quoted(f, lexical)?;
                f.write_char('@')?;
                f.write_str(lang)
            }
            Term::LiteralDt { lexical, datatype } => {
                write_quoted(f, lexical)?;
                f.write_str("^^")?;
                write_iri(f, datatype)
            }
            Term::QuotedTriple(t) => {
                write!(f, "<< {} {} {} >>", t.subject, t.predicate, t.object)
            }
            Term::DefaultGraph => Ok(()),
        }
    }
}

/// Depth cap for quoted-triple nesting, shared by the parsers and codecs so
/// hostile input cannot exhaust the stack.
pub const MAX_NESTING_DEPTH: usize = 100;

/// Displays a string with IRI escaping, including the angle brackets.
pub(crate) struct IriStr<'a>(pub &'a str);

impl fmt::Display for IriStr<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_iri(f, self.0)
    }
}

/// Displays a string with literal escaping, including the quotes.
pub(crate) struct QuotedStr<'a>(pub &'a str);

impl fmt::Display for QuotedStr<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_quoted(f, self.0)
    }
}

fn write_iri(f: &mut fmt::Formatter<'_>, iri: &str) -> fmt::Result {
    f.write_char('<')?;
    for c in iri.chars() {
        match c {
            '\u{0}'..='\u{20}' | '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\' => {
                write!(f, "\\u{:04X}", c as u32)?;
            }
            _ => f.write_char(c)?,
        }
    }
    f.write_char('>')
}

fn write_quoted(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        match c {
            '\\' => f.write_str("\\\\")?,
            '"' => f.write_str("\\\"")?,
            '\n' => f.write_str("\\n")?,
            '\r' => f.write_str("\\r")?,
            _ => f.write_char(c)?,
        }
    }
    f.write_char('"')
}
