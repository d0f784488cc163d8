//! Randomized invariants over the codecs, the diff engine, and the lookup
//! tables.

use std::collections::BTreeSet;

use proptest::prelude::*;

use jpt_core::diff::{apply, apply_strict, diff, rolling_diff, DiffOptions};
use jpt_core::text::{parse_patch_text, write_patch_text};
use jpt_core::wire::lookup::{Acquired, DecoderTable, EncoderTable};
use jpt_core::wire::varint::{read_varint, write_varint};
use jpt_core::wire::{
    decode_patch, encode_patch, split_iri, EncodeError, StreamDecoder, StreamOptions,
};
use jpt_core::{Dataset, Patch, PatchOp, Statement, Term};

fn iri_string() -> impl Strategy<Value = String> {
    prop_oneof![
        (0..40u32).prop_map(|i| format!("http://example.org/vocab#p{i}")),
        (0..120u32).prop_map(|i| format!("http://data.example.com/items/item{i}")),
        (0..40u32).prop_map(|i| format!("urn:uuid:0000-{i:04}")),
        "[a-z]{1,6}:[a-zA-Z0-9/#._-]{0,16}",
        // Characters the text syntax must escape inside angle brackets.
        (0..20u32).prop_map(|i| format!("http://example.org/odd path<{i}>`")),
    ]
}

fn bnode_label() -> impl Strategy<Value = String> {
    prop_oneof![
        "[A-Za-z0-9_][A-Za-z0-9_-]{0,10}",
        // Interior dots and non-ASCII label characters are legal.
        "[A-Za-z0-9_]{1,3}(\\.[A-Za-z0-9_]{1,3}){0,2}",
        "[a-zé-ü]{1,6}",
    ]
}

fn lexical() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-zA-Z0-9 .,;:!?-]{0,18}",
        // Escapable content: quotes, backslashes, line breaks, tabs.
        "[\"\\\\\n\r\ta-z]{0,10}",
        prop::collection::vec(any::<char>(), 0..8).prop_map(String::from_iter),
    ]
}

fn lang_tag() -> impl Strategy<Value = String> {
    "[a-zA-Z]{2,5}(-[a-zA-Z0-9]{1,6}){0,2}"
}

/// Datatypes come from a small pool, mirroring real data where a handful of
/// types dominate; one member carries characters the text syntax escapes.
fn datatype_iri() -> impl Strategy<Value = String> {
    prop_oneof![
        Just("http://www.w3.org/2001/XMLSchema#integer".to_string()),
        Just("http://www.w3.org/2001/XMLSchema#string".to_string()),
        Just("http://www.w3.org/2001/XMLSchema#dateTime".to_string()),
        Just("http://www.w3.org/2001/XMLSchema#boolean".to_string()),
        Just("http://www.w3.org/2001/XMLSchema#double".to_string()),
        (0..4u32).prop_map(|i| format!("http://example.org/dt{i}")),
        (0..3u32).prop_map(|i| format!("http://example.org/odd dt<{i}>")),
    ]
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        4 => iri_string().prop_map(Term::iri),
        2 => bnode_label().prop_map(Term::bnode),
        3 => lexical().prop_map(Term::literal),
        1 => (lexical(), lang_tag()).prop_map(|(l, t)| Term::literal_lang(l, t)),
        2 => (lexical(), datatype_iri()).prop_map(|(l, d)| Term::literal_dt(l, d)),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        (inner.clone(), inner.clone(), inner).prop_map(|(s, p, o)| Term::quoted(s, p, o))
    })
}

fn graph_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        4 => Just(Term::DefaultGraph),
        3 => iri_string().prop_map(Term::iri),
        1 => bnode_label().prop_map(Term::bnode),
        1 => lexical().prop_map(Term::literal),
    ]
}

fn statement() -> impl Strategy<Value = Statement> {
    (term(), term(), term(), graph_term())
        .prop_map(|(s, p, o, g)| Statement::new(s, p, o, g))
}

fn header_key() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z0-9_-]{0,8}"
}

fn patch_op() -> impl Strategy<Value = PatchOp> {
    prop_oneof![
        5 => statement().prop_map(PatchOp::Add),
        3 => statement().prop_map(PatchOp::Delete),
        1 => Just(PatchOp::TxBegin),
        1 => Just(PatchOp::TxCommit),
        1 => Just(PatchOp::TxAbort),
        1 => (header_key(), term()).prop_map(|(key, value)| PatchOp::Header { key, value }),
        1 => (bnode_label(), iri_string())
            .prop_map(|(label, iri)| PatchOp::PrefixAdd { label, iri, graph: None }),
        1 => bnode_label()
            .prop_map(|label| PatchOp::PrefixDelete { label, iri: String::new(), graph: None }),
    ]
}

fn patch() -> impl Strategy<Value = Patch> {
    prop::collection::vec(patch_op(), 0..32).prop_map(Patch::from)
}

fn small_options() -> impl Strategy<Value = StreamOptions> {
    (8u32..48, 0u32..12, 1u32..10, 1u32..24).prop_map(|(name, prefix, datatype, frame)| {
        StreamOptions {
            name_table_capacity: name,
            prefix_table_capacity: prefix,
            datatype_table_capacity: datatype,
            frame_row_limit: frame,
            ..Default::default()
        }
    })
}

/// Statements drawn from a small pool so independent datasets overlap and
/// diffs contain both adds and deletes.
fn pooled_statement() -> impl Strategy<Value = Statement> {
    (0..18u32, 0..6u32, 0..12u32, 0..4u32).prop_map(|(s, p, o, g)| {
        Statement::new(
            Term::iri(format!("http://example.org/s{s}")),
            Term::iri(format!("http://example.org/p{p}")),
            Term::literal(format!("{o}")),
            if g == 0 {
                Term::DefaultGraph
            } else {
                Term::iri(format!("http://example.org/g{g}"))
            },
        )
    })
}

fn dataset() -> impl Strategy<Value = Dataset> {
    prop::collection::vec(pooled_statement(), 0..50).prop_map(Dataset::from_iter)
}

proptest! {
    #[test]
    fn binary_round_trip_with_default_options(p in patch()) {
        let bytes = encode_patch(&p, StreamOptions::default()).unwrap();
        prop_assert_eq!(decode_patch(&bytes).unwrap(), p);
    }

    #[test]
    fn binary_round_trip_with_tight_tables(p in patch(), options in small_options()) {
        // A single row can legitimately demand more distinct names or
        // datatypes than these tiny tables hold; such rows are rejected up
        // front (one row's ids must all be live at once). Anything the
        // encoder accepts must survive the round trip exactly.
        match encode_patch(&p, options) {
            Ok(bytes) => prop_assert_eq!(decode_patch(&bytes).unwrap(), p),
            Err(EncodeError::RowNeedsMoreSlots { .. }) => {}
            Err(other) => prop_assert!(false, "unexpected encode error: {other}"),
        }
    }

    #[test]
    fn chunked_decoding_matches_one_shot(p in patch(), chunk in 1usize..48) {
        let bytes = encode_patch(&p, StreamOptions::default()).unwrap();
        let mut dec = StreamDecoder::new();
        let mut ops = Vec::new();
        for piece in bytes.chunks(chunk) {
            dec.feed(piece);
            while let Some(op) = dec.poll_op().unwrap() {
                ops.push(op);
            }
        }
        dec.finish().unwrap();
        prop_assert_eq!(Patch::from(ops), p);
    }

    #[test]
    fn text_round_trip_is_identity_and_deterministic(p in patch()) {
        let text = write_patch_text(&p).unwrap();
        let back = parse_patch_text(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(write_patch_text(&back).unwrap(), text);
    }

    #[test]
    fn text_and_binary_agree(p in patch()) {
        let via_text = parse_patch_text(&write_patch_text(&p).unwrap()).unwrap();
        let via_binary =
            decode_patch(&encode_patch(&p, StreamOptions::default()).unwrap()).unwrap();
        prop_assert_eq!(via_text, via_binary);
    }

    #[test]
    fn diff_then_apply_recovers_target(before in dataset(), after in dataset()) {
        let patch = diff(&before, &after, &DiffOptions::default());
        prop_assert_eq!(&apply(&before, &patch), &after);
        // A diff never conflicts against the dataset it was computed from.
        prop_assert_eq!(&apply_strict(&before, &patch).unwrap(), &after);
    }

    #[test]
    fn diff_of_identical_datasets_changes_nothing(d in dataset()) {
        let patch = diff(&d, &d, &DiffOptions::default());
        prop_assert!(patch.ops.iter().all(|op| op.statement().is_none()));
        prop_assert_eq!(apply(&d, &patch), d);
    }

    #[test]
    fn diff_round_trips_through_both_codecs(before in dataset(), after in dataset()) {
        let patch = diff(&before, &after, &DiffOptions::default());
        let via_binary =
            decode_patch(&encode_patch(&patch, StreamOptions::default()).unwrap()).unwrap();
        prop_assert_eq!(apply(&before, &via_binary), after);
    }

    #[test]
    fn rolling_diff_replays_every_snapshot(snaps in prop::collection::vec(dataset(), 0..5)) {
        let patches = rolling_diff(&snaps, &DiffOptions::default());
        prop_assert_eq!(patches.len(), snaps.len());
        let mut current = Dataset::new();
        for (patch, snap) in patches.iter().zip(&snaps) {
            current = apply(&current, patch);
            prop_assert_eq!(&current, snap);
        }
    }

    #[test]
    fn lookup_tables_track_an_exact_lru_reference(
        seq in prop::collection::vec(0..14u32, 0..90),
        cap in 1u32..6,
    ) {
        let mut enc = EncoderTable::new(cap);
        let mut dec = DecoderTable::new(cap);
        // Reference: most recent first, evict from the back.
        let mut reference: Vec<String> = Vec::new();
        let mut evictions = 0u64;
        for value in seq.iter().map(|i| format!("v{i}")) {
            let got = enc.get_or_assign(&value).unwrap();
            if let Acquired::Assigned { id_field, evicted, .. } = got {
                if evicted {
                    evictions += 1;
                }
                dec.apply_entry(id_field, value.clone()).unwrap();
            }
            if let Some(at) = reference.iter().position(|v| v == &value) {
                reference.remove(at);
            } else if reference.len() as u32 == cap {
                reference.pop();
            }
            reference.insert(0, value.clone());
            prop_assert_eq!(dec.resolve(got.id()).unwrap(), value);
        }
        let resident: Vec<&str> = enc.iter_mru().map(|(_, v)| v).collect();
        prop_assert_eq!(resident, reference.iter().map(String::as_str).collect::<Vec<_>>());
        prop_assert_eq!(enc.evictions(), evictions);
        prop_assert_eq!(dec.evictions(), evictions);
        // The decoder resolves exactly the ids the encoder considers live.
        for (id, value) in enc.iter_mru() {
            prop_assert_eq!(dec.resolve(id).unwrap(), value);
        }
        let dec_ids: BTreeSet<u32> = dec.iter_set().map(|(id, _)| id).collect();
        let enc_ids: BTreeSet<u32> = enc.iter_mru().map(|(id, _)| id).collect();
        prop_assert_eq!(dec_ids, enc_ids);
    }

    #[test]
    fn varint_round_trips_minimally(v in any::<u32>()) {
        let mut buf = Vec::new();
        write_varint(v, &mut buf);
        prop_assert!(buf.len() <= 5);
        let (back, used) = read_varint(&buf).unwrap();
        prop_assert_eq!(back, v);
        prop_assert_eq!(used, buf.len());
    }

    #[test]
    fn split_iri_concatenates_back(iri in "\\PC{0,24}") {
        let (prefix, name) = split_iri(&iri);
        prop_assert_eq!(format!("{prefix}{name}"), iri);
    }
}
