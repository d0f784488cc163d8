//! Prefix/name splitting for IRI compression.

/// Splits an IRI into a shareable prefix and a local name.
///
/// The split point is one past the last `/` or `#` at or after the scheme
/// separator (the first `:`, or the start when there is none), so the scheme
/// itself never ends up in the name. When no such character exists the whole
/// IRI is the name and the prefix is empty. Concatenating the two halves
/// always reproduces the input.
pub fn split_iri(iri: &str) -> (&str, &str) {
    let from = iri.find(':').unwrap_or(0);
    match iri[from..].rfind(['/', '#']) {
        Some(rel) => iri.split_at(from + rel + 1),
        None => ("", iri),
    }
}
