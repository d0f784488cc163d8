//! Seeded random patches and statements shared by the test suites.
//!
//! The generator covers every operation kind, named graphs, quoted triples
//! to depth two, generalized term positions, and non-ASCII content. Each
//! statement draws its IRIs from a per-statement pool of at most six
//! distinct values and datatypes from a global pool of four, so any row
//! fits the smallest table configurations the suites use (name capacity 8,
//! datatype capacity 4, prefix capacity 0).

use jpt_core::{Patch, PatchOp, QuotedTriple, Statement, Term};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub const DATATYPES: [&str; 4] = [
    "http://www.w3.org/2001/XMLSchema#integer",
    "http://www.w3.org/2001/XMLSchema#decimal",
    "http://example.org/dt#пример",
    "urn:dt:x",
];

const LANGS: [&str; 4] = ["en", "en-US", "de", "ja-JP-x1"];

const LEXICALS: [&str; 9] = [
    "22",
    "23.5",
    "plain words",
    "line\nbreak and\ttab",
    "quote \" and backslash \\",
    "🦀 emoji and 日本語",
    "Ω≈ç√∫",
    "",
    "trailing space ",
];

const HEADER_KEYS: [&str; 4] = ["id", "prev", "creator", "k-1"];

const PREFIX_LABELS: [&str; 4] = ["ex", "p1", "名前", ""];

pub struct PatchGen {
    rng: ChaCha8Rng,
    iris: Vec<String>,
    prev_subject: Option<Term>,
    prev_graph: Option<Term>,
}

impl PatchGen {
    pub fn new(seed: u64) -> Self {
        let mut iris = Vec::new();
        for i in 0..18 {
            iris.push(format!("http://example.org/res/{i}"));
        }
        for i in 0..12 {
            iris.push(format!("http://example.org/vocab#p{i}"));
        }
        for i in 0..8 {
            iris.push(format!("urn:item:{i}"));
        }
        for i in 0..6 {
            iris.push(format!("http://example.org/名前/{i}"));
        }
        // Characters the text form must escape inside <...>.
        for i in 0..4 {
            iris.push(format!("urn:odd:sp ace<{i}>"));
        }
        PatchGen { rng: ChaCha8Rng::seed_from_u64(seed), iris, prev_subject: None, prev_graph: None }
    }

    /// One random patch of 5 to 40 operations.
    pub fn patch(&mut self) -> Patch {
        let len = self.rng.gen_range(5..=40);
        let mut ops = Vec::with_capacity(len);
        ops.push(PatchOp::TxBegin);
        while ops.len() < len {
            ops.push(self.op());
        }
        ops.push(PatchOp::TxCommit);
        Patch { ops }
    }

    fn op(&mut self) -> PatchOp {
        match self.rng.gen_range(0..100) {
            0..=44 => PatchOp::Add(self.statement()),
            45..=64 => PatchOp::Delete(self.statement()),
            65..=72 => PatchOp::Header {
                key: self.pick(&HEADER_KEYS).to_string(),
                value: {
                    let pool = self.statement_pool();
                    self.term(&pool, 0)
                },
            },
            73..=77 => {
                let pool = self.statement_pool();
                PatchOp::PrefixAdd {
                    label: self.pick(&PREFIX_LABELS).to_string(),
                    iri: self.iri(&pool),
                    graph: None,
                }
            }
            78..=81 => PatchOp::PrefixDelete {
                label: self.pick(&PREFIX_LABELS).to_string(),
                iri: String::new(),
                graph: None,
            },
            82..=88 => PatchOp::TxBegin,
            89..=95 => PatchOp::TxCommit,
            _ => PatchOp::TxAbort,
        }
    }

    /// A random statement honoring the per-statement IRI budget.
    pub fn statement(&mut self) -> Statement {
        let pool = self.statement_pool();
        let subject = if self.prev_subject.is_some() && self.rng.gen_bool(0.3) {
            self.prev_subject.clone().unwrap()
        } else {
            self.term(&pool, 0)
        };
        let predicate = self.term(&pool, 1);
        let object = self.term(&pool, 0);
        let graph = if self.prev_graph.is_some() && self.rng.gen_bool(0.4) {
            self.prev_graph.clone().unwrap()
        } else {
            self.graph_term(&pool)
        };
        self.prev_subject = Some(subject.clone());
        self.prev_graph = Some(graph.clone());
        Statement { subject, predicate, object, graph }
    }

    /// At most six distinct IRIs for one statement (or header row).
    fn statement_pool(&mut self) -> Vec<String> {
        let n = self.rng.gen_range(1..=6);
        rand::seq::index::sample(&mut self.rng, self.iris.len(), n)
            .iter()
            .map(|i| self.iris[i].clone())
            .collect()
    }

    fn iri(&mut self, pool: &[String]) -> String {
        pool[self.rng.gen_range(0..pool.len())].clone()
    }

    fn term(&mut self, pool: &[String], depth: u32) -> Term {
        match self.rng.gen_range(0..100) {
            0..=39 => Term::Iri(self.iri(pool)),
            40..=54 => Term::BlankNode(self.bnode_label()),
            55..=66 => Term::LiteralSimple(self.pick(&LEXICALS).to_string()),
            67..=76 => Term::LiteralLang {
                lexical: self.pick(&LEXICALS).to_string(),
                lang: self.pick(&LANGS).to_string(),
            },
            77..=89 => Term::LiteralDt {
                lexical: self.pick(&LEXICALS).to_string(),
                datatype: self.pick(&DATATYPES).to_string(),
            },
            _ if depth < 2 => Term::QuotedTriple(Box::new(QuotedTriple {
                subject: self.term(pool, depth + 1),
                predicate: self.term(pool, depth + 1),
                object: self.term(pool, depth + 1),
            })),
            _ => Term::Iri(self.iri(pool)),
        }
    }

    fn graph_term(&mut self, pool: &[String]) -> Term {
        match self.rng.gen_range(0..100) {
            0..=49 => Term::DefaultGraph,
            50..=84 => Term::Iri(self.iri(pool)),
            _ => Term::BlankNode(self.bnode_label()),
        }
    }

    fn bnode_label(&mut self) -> String {
        match self.rng.gen_range(0..3) {
            0 => format!("b{}", self.rng.gen_range(0..12)),
            1 => format!("節{}", self.rng.gen_range(0..6)),
            _ => format!("x_y-z.{}", self.rng.gen_range(0..6)),
        }
    }

    fn pick<'a>(&mut self, list: &[&'a str]) -> &'a str {
        list[self.rng.gen_range(0..list.len())]
    }
}
