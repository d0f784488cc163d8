//! Seeded synthetic workloads for the bench command.
//!
//! Both generators are deterministic in (ops, seed) and produce exactly the
//! requested number of rows, truncating mid-transaction if necessary.

use std::collections::HashMap;

use jpt_core::{Patch, PatchOp, Statement, Term};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

const SENSORS: usize = 30;

const MEASUREMENTS: [&str; 10] = [
    "temperature",
    "humidity",
    "pressure",
    "windSpeed",
    "windDirection",
    "batteryLevel",
    "signalStrength",
    "dewPoint",
    "rainRate",
    "solarRadiation",
];

/// Predicates whose values are whole numbers rather than decimals.
const INTEGER_MEASUREMENTS: [usize; 3] = [4, 5, 6];

/// Telemetry updates: a small fleet of sensors repeatedly replaces its last
/// reading per measurement, grouped into commit batches inside a rolling
/// window graph. Vocabulary stays tiny, so nearly every row reuses tables
/// and registers.
pub fn iot(ops: u64, seed: u64) -> Patch {
    let ops = ops as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(ops + 16);

    let sensors: Vec<String> =
        (0..SENSORS).map(|i| format!("http://example.org/device/sensor{i:03}")).collect();
    let preds: Vec<String> =
        MEASUREMENTS.iter().map(|m| format!("http://example.org/vocab#{m}")).collect();
    let observed_at = "http://example.org/vocab#observedAt".to_string();

    // (sensor, measurement) -> last reported value and its window.
    let mut last: HashMap<(usize, usize), (String, u64)> = HashMap::new();
    let mut tick: u64 = 0;

    while out.len() < ops {
        let window = tick / 50;
        let graph = Term::Iri(format!("http://example.org/window/{window}"));
        out.push(PatchOp::TxBegin);
        let updates = rng.gen_range(6..=10);
        for pair in rand::seq::index::sample(&mut rng, SENSORS * preds.len(), updates) {
            let (s, p) = (pair / preds.len(), pair % preds.len());
            let value = if INTEGER_MEASUREMENTS.contains(&p) {
                format!("{}", rng.gen_range(-90..1100))
            } else {
                format!("{:.1}", rng.gen_range(-40.0..1100.0))
            };
            let dt = if INTEGER_MEASUREMENTS.contains(&p) { XSD_INTEGER } else { XSD_DECIMAL };
            if let Some((old, old_window)) = last.insert((s, p), (value.clone(), window)) {
                out.push(PatchOp::Delete(Statement {
                    subject: Term::Iri(sensors[s].clone()),
                    predicate: Term::Iri(preds[p].clone()),
                    object: Term::LiteralDt { lexical: old, datatype: dt.to_string() },
                    graph: Term::Iri(format!("http://example.org/window/{old_window}")),
                }));
            }
            out.push(PatchOp::Add(Statement {
                subject: Term::Iri(sensors[s].clone()),
                predicate: Term::Iri(preds[p].clone()),
                object: Term::LiteralDt { lexical: value, datatype: dt.to_string() },
                graph: graph.clone(),
            }));
        }
        out.push(PatchOp::Add(Statement {
            subject: Term::Iri(sensors[rng.gen_range(0..SENSORS)].clone()),
            predicate: Term::Iri(observed_at.clone()),
            object: Term::LiteralDt { lexical: timestamp(tick), datatype: XSD_DATETIME.to_string() },
            graph: graph.clone(),
        }));
        out.push(PatchOp::TxCommit);
        tick += 1;
    }

    out.truncate(ops);
    Patch { ops: out }
}

const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
const XSD_DATETIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";

fn timestamp(tick: u64) -> String {
    let secs = tick % 60;
    let mins = (tick / 60) % 60;
    let hours = (tick / 3600) % 24;
    let days = 1 + (tick / 86_400) % 28;
    format!("2026-01-{days:02}T{hours:02}:{mins:02}:{secs:02}Z")
}

const OFFER_FIELDS: [&str; 25] = [
    "title",
    "description",
    "price",
    "currency",
    "sku",
    "gtin",
    "brand",
    "category",
    "availability",
    "condition",
    "seller",
    "rating",
    "reviewCount",
    "imageUrl",
    "weight",
    "width",
    "height",
    "depth",
    "color",
    "material",
    "shippingCost",
    "deliveryTime",
    "warranty",
    "energyClass",
    "countryOfOrigin",
];

/// Change-feed updates: each commit introduces a batch of fresh offer
/// resources with descriptive property blocks, plus a few retractions of
/// earlier statements. Subjects never repeat across batches and a third of
/// the values are long prose literals, so the table caps keep churning.
pub fn cdc(ops: u64, seed: u64) -> Patch {
    let ops = ops as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(ops + 96);

    let preds: Vec<String> =
        OFFER_FIELDS.iter().map(|f| format!("http://example.org/schema#{f}")).collect();

    let mut offer_counter: u64 = 0;
    let mut prev_id = "urn:uuid:00000000-0000-0000-0000-000000000000".to_string();
    // Reservoir of earlier additions to retract from.
    let mut seen: Vec<Statement> = Vec::new();
    let mut seen_total: u64 = 0;

    while out.len() < ops {
        let id = uuid(&mut rng);
        out.push(PatchOp::Header { key: "id".into(), value: Term::Iri(id.clone()) });
        out.push(PatchOp::Header {
            key: "prev".into(),
            value: Term::Iri(core::mem::replace(&mut prev_id, id)),
        });
        out.push(PatchOp::TxBegin);

        let mut adds = 0usize;
        while adds < 77 {
            offer_counter += 1;
            let subject = Term::Iri(format!("http://example.org/offer/{offer_counter:08x}"));
            let graph = if rng.gen_ratio(1, 8) {
                Term::Iri(format!("http://example.org/feed/s{}", rng.gen_range(0..7)))
            } else {
                Term::DefaultGraph
            };
            let block = rng.gen_range(5..=8);
            let long_values = rng.gen_range(2..=3);
            for (slot, p) in
                rand::seq::index::sample(&mut rng, preds.len(), block).iter().enumerate()
            {
                let object = if slot < long_values {
                    prose(&mut rng)
                } else {
                    short_value(&mut rng, p)
                };
                let st = Statement {
                    subject: subject.clone(),
                    predicate: Term::Iri(preds[p].clone()),
                    object,
                    graph: graph.clone(),
                };
                reservoir_push(&mut seen, &mut seen_total, &mut rng, st.clone());
                out.push(PatchOp::Add(st));
                adds += 1;
            }
        }
        for _ in 0..4 {
            if seen.is_empty() {
                break;
            }
            let pick = rng.gen_range(0..seen.len());
            out.push(PatchOp::Delete(seen.swap_remove(pick)));
        }
        out.push(PatchOp::TxCommit);
    }

    out.truncate(ops);
    Patch { ops: out }
}

fn uuid(rng: &mut ChaCha8Rng) -> String {
    let bits: u128 = rng.gen();
    let hex = format!("{bits:032x}");
    format!(
        "urn:uuid:{}-{}-{}-{}-{}",
        &hex[0..8],
        &hex[8..12],
        &hex[12..16],
        &hex[16..20],
        &hex[20..32]
    )
}

const WORDS: [&str; 48] = [
    "premium", "quality", "durable", "lightweight", "compact", "ergonomic", "versatile",
    "reliable", "eficiente", "moderne", "classic", "portable", "wireless", "rechargeable",
    "adjustable", "waterproof", "stainless", "organic", "handcrafted", "certified", "warranty",
    "shipping", "available", "edition", "limited", "bundle", "accessory", "replacement",
    "original", "genuine", "performance", "capacity", "battery", "display", "comfort", "design",
    "material", "finish", "texture", "package", "includes", "features", "supports", "optimized",
    "enhanced", "improved", "seasonal", "exclusive",
];

/// A space-joined word string between roughly 40 and 180 characters.
fn prose(rng: &mut ChaCha8Rng) -> Term {
    let target = rng.gen_range(40..=180);
    let mut text = String::with_capacity(target + 12);
    while text.len() < target {
        if !text.is_empty() {
            text.push(' ');
        }
        text.push_str(WORDS[rng.gen_range(0..WORDS.len())]);
    }
    if rng.gen_ratio(1, 4) {
        Term::LiteralLang { lexical: text, lang: "en".into() }
    } else {
        Term::LiteralSimple(text)
    }
}

fn short_value(rng: &mut ChaCha8Rng, field: usize) -> Term {
    match field % 5 {
        0 => Term::LiteralDt {
            lexical: format!("{:.2}", rng.gen_range(0.5..2500.0)),
            datatype: XSD_DECIMAL.to_string(),
        },
        1 => Term::LiteralDt {
            lexical: format!("{}", rng.gen_range(0..100_000)),
            datatype: XSD_INTEGER.to_string(),
        },
        2 => Term::LiteralSimple(format!("SKU-{:06}", rng.gen_range(0..1_000_000))),
        3 => Term::LiteralSimple(WORDS[rng.gen_range(0..WORDS.len())].to_string()),
        _ => Term::Iri(format!("http://example.org/ref/{:06x}", rng.gen_range(0..0x100_0000))),
    }
}

fn reservoir_push(
    seen: &mut Vec<Statement>,
    total: &mut u64,
    rng: &mut ChaCha8Rng,
    st: Statement,
) {
    const CAP: usize = 1000;
    *total += 1;
    if seen.len() < CAP {
        seen.push(st);
    } else {
        let slot = rng.gen_range(0..*total);
        if (slot as usize) < CAP {
            seen[slot as usize] = st;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic_and_exact() {
        for gen in [iot, cdc] {
            let a = gen(5000, 7);
            let b = gen(5000, 7);
            assert_eq!(a, b);
            assert_eq!(a.ops.len(), 5000);
            assert_ne!(a, gen(5000, 8));
        }
    }

    #[test]
    fn telemetry_round_trips_through_both_codecs() {
        let p = iot(2000, 1);
        let bytes = jpt_core::wire::encode_patch(&p, jpt_core::wire::StreamOptions::default())
            .expect("encode");
        assert_eq!(jpt_core::wire::decode_patch(&bytes).expect("decode"), p);
        let text = jpt_core::text::write_patch_text(&p).expect("write");
        assert_eq!(jpt_core::text::parse_patch_text(&text).expect("parse"), p);
    }

    #[test]
    fn change_feed_round_trips_through_both_codecs() {
        let p = cdc(2000, 1);
        let bytes = jpt_core::wire::encode_patch(&p, jpt_core::wire::StreamOptions::default())
            .expect("encode");
        assert_eq!(jpt_core::wire::decode_patch(&bytes).expect("decode"), p);
        let text = jpt_core::text::write_patch_text(&p).expect("write");
        assert_eq!(jpt_core::text::parse_patch_text(&text).expect("parse"), p);
    }
}
