//! End-to-end runs of the `jpt` binary: exit codes, stdin/stdout handling,
//! and agreement between what the subcommands report and what lands on disk.

use std::fs;
use std::io::Write as _;
use std::process::{Command, Stdio};

use jpt_core::text::parse::parse_nquads;
use jpt_core::wire::MAGIC;

const LISTING: &str = "TX .\n\
    A _:sensor001 <http://example.org/hasTemperature> \"23\" .\n\
    D _:sensor001 <http://example.org/hasTemperature> \"22\" .\n\
    TC .\n";

fn jpt(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_jpt"));
    cmd.args(args);
    cmd
}

/// Runs the binary with the given stdin bytes, returning (exit code, stdout,
/// stderr).
fn run(args: &[&str], stdin: &[u8]) -> (i32, Vec<u8>, String) {
    let mut child = jpt(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child.stdin.take().expect("stdin piped").write_all(stdin).expect("stdin accepts input");
    let out = child.wait_with_output().expect("binary finishes");
    (
        out.status.code().expect("exit code"),
        out.stdout,
        String::from_utf8(out.stderr).expect("stderr is UTF-8"),
    )
}

fn machine_value<'a>(output: &'a str, key: &str) -> &'a str {
    output
        .lines()
        .find_map(|line| line.strip_prefix(key).and_then(|rest| rest.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key}= line in:\n{output}"))
}

#[test]
fn text_to_binary_to_text_reproduces_the_canonical_form() {
    let (code, binary, err) = run(&["convert", "--from", "text", "--to", "binary"], LISTING.as_bytes());
    assert_eq!(code, 0, "to binary failed: {err}");
    assert!(binary.starts_with(&MAGIC), "output does not start with the magic");
    assert!(err.contains("4 operations"), "diagnostics missing the op count: {err}");

    let (code, text, err) = run(&["convert", "--from", "binary", "--to", "text"], &binary);
    assert_eq!(code, 0, "back to text failed: {err}");
    assert_eq!(String::from_utf8(text).unwrap(), LISTING);
}

#[test]
fn second_binary_conversion_is_byte_identical() {
    let (_, b1, _) = run(&["convert", "--from", "text", "--to", "binary"], LISTING.as_bytes());
    let (_, t1, _) = run(&["convert", "--from", "binary", "--to", "text"], &b1);
    let (_, b2, _) = run(&["convert", "--from", "text", "--to", "binary"], &t1);
    assert_eq!(b1, b2, "text -> binary -> text -> binary drifted");
}

#[test]
fn empty_text_input_yields_a_valid_empty_stream() {
    let (code, binary, _) = run(&["convert", "--from", "text", "--to", "binary"], b"");
    assert_eq!(code, 0);
    // Magic, one frame, the options row declaring the defaults: 15 bytes.
    assert_eq!(binary.len(), 15, "empty stream is {} bytes", binary.len());
    assert!(binary.starts_with(&MAGIC));

    let (code, stdout, err) = run(&["stats", "--machine", "--format", "binary"], &binary);
    assert_eq!(code, 0, "stats on the empty stream failed: {err}");
    let stdout = String::from_utf8(stdout).unwrap();
    assert_eq!(machine_value(&stdout, "operations"), "0");
}

#[test]
fn sparql_update_rendering_carries_both_change_kinds() {
    let (code, sparql, err) =
        run(&["convert", "--from", "text", "--to", "sparql-update"], LISTING.as_bytes());
    assert_eq!(code, 0, "sparql conversion failed: {err}");
    let sparql = String::from_utf8(sparql).unwrap();
    assert!(sparql.contains("INSERT DATA"), "no insert block:\n{sparql}");
    assert!(sparql.contains("DELETE DATA"), "no delete block:\n{sparql}");
}

#[test]
fn corrupt_stream_exits_1_and_names_the_byte_offset() {
    let (_, mut binary, _) = run(&["convert", "--from", "text", "--to", "binary"], LISTING.as_bytes());
    binary.truncate(binary.len() - 3);
    let (code, _, err) = run(&["convert", "--from", "binary", "--to", "text"], &binary);
    assert_eq!(code, 1, "truncated stream should be a format error: {err}");
    assert!(err.contains("byte"), "diagnostic does not locate the fault: {err}");
}

#[test]
fn diff_then_apply_restores_the_target_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let before = dir.path().join("before.nq");
    let after = dir.path().join("after.nq");
    fs::write(
        &before,
        "<urn:s1> <urn:p> \"kept\" .\n<urn:s2> <urn:p> \"dropped\" <urn:g> .\n",
    )
    .unwrap();
    fs::write(
        &after,
        "<urn:s1> <urn:p> \"kept\" .\n<urn:s3> <urn:p> \"added\" .\n_:b0 <urn:p> \"new\" <urn:g> .\n",
    )
    .unwrap();

    let patch = dir.path().join("change.rdp");
    let (code, _, err) =
        run(&["diff", before.to_str().unwrap(), after.to_str().unwrap(), "-o", patch.to_str().unwrap()], b"");
    assert_eq!(code, 0, "diff failed: {err}");

    let (code, stdout, err) =
        run(&["apply", before.to_str().unwrap(), patch.to_str().unwrap()], b"");
    assert_eq!(code, 0, "apply failed: {err}");
    let got = parse_nquads(&String::from_utf8(stdout).unwrap()).unwrap();
    let want = parse_nquads(&fs::read_to_string(&after).unwrap()).unwrap();
    assert_eq!(got, want, "applying the diff did not restore the target");
}

#[test]
fn strict_apply_exits_3_and_lists_the_conflicting_ops() {
    let dir = tempfile::tempdir().unwrap();
    let dataset = dir.path().join("data.nq");
    fs::write(&dataset, "<urn:s> <urn:p> \"present\" .\n").unwrap();
    let patch = dir.path().join("bad.rdp");
    fs::write(&patch, "TX .\nD <urn:s> <urn:p> \"absent\" .\nTC .\n").unwrap();

    let (code, _, err) =
        run(&["apply", "--strict", dataset.to_str().unwrap(), patch.to_str().unwrap()], b"");
    assert_eq!(code, 3, "conflict should exit 3: {err}");
    assert!(err.contains("op 1"), "conflict report does not index the op: {err}");

    // The same apply without --strict ignores the no-op delete.
    let (code, stdout, _) =
        run(&["apply", dataset.to_str().unwrap(), patch.to_str().unwrap()], b"");
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(stdout).unwrap(), "<urn:s> <urn:p> \"present\" .\n");
}

#[test]
fn stats_counts_the_minimal_listing() {
    let (code, stdout, err) = run(&["stats", "--machine"], LISTING.as_bytes());
    assert_eq!(code, 0, "stats failed: {err}");
    let stdout = String::from_utf8(stdout).unwrap();
    assert_eq!(machine_value(&stdout, "operations"), "4");
    assert_eq!(machine_value(&stdout, "adds"), "1");
    assert_eq!(machine_value(&stdout, "deletes"), "1");
    assert_eq!(machine_value(&stdout, "patches"), "1");
}

#[test]
fn stats_sees_two_concatenated_streams() {
    let (_, first, _) = run(&["convert", "--from", "text", "--to", "binary"], LISTING.as_bytes());
    let (_, second, _) = run(
        &["convert", "--from", "text", "--to", "binary"],
        b"TX .\nA <urn:s> <urn:p> <urn:o> .\nTC .\n",
    );
    let mut joined = first;
    joined.extend_from_slice(&second);

    let (code, stdout, err) = run(&["stats", "--machine"], &joined);
    assert_eq!(code, 0, "stats on concatenated streams failed: {err}");
    let stdout = String::from_utf8(stdout).unwrap();
    assert_eq!(machine_value(&stdout, "streams"), "2");
    assert_eq!(machine_value(&stdout, "patches"), "2");
    assert_eq!(machine_value(&stdout, "operations"), "7");
}

#[test]
fn bench_reports_the_sizes_conversion_writes() {
    let dir = tempfile::tempdir().unwrap();
    let source = dir.path().join("source.rdp");
    fs::write(&source, LISTING).unwrap();

    let text_out = dir.path().join("out.rdp");
    let (code, _, _) = run(
        &["convert", "--from", "text", "--to", "text", source.to_str().unwrap(), "-o", text_out.to_str().unwrap()],
        b"",
    );
    assert_eq!(code, 0);
    let binary_out = dir.path().join("out.rdpb");
    let (code, _, _) = run(
        &["convert", "--from", "text", "--to", "binary", source.to_str().unwrap(), "-o", binary_out.to_str().unwrap()],
        b"",
    );
    assert_eq!(code, 0);

    let (code, stdout, err) = run(
        &[
            "bench", "--input", source.to_str().unwrap(), "--formats", "text,binary",
            "--reps", "1", "--warmups", "0", "--machine",
        ],
        b"",
    );
    assert_eq!(code, 0, "bench failed: {err}");
    let stdout = String::from_utf8(stdout).unwrap();
    let text_size: u64 = machine_value(&stdout, "text.size_bytes").parse().unwrap();
    let binary_size: u64 = machine_value(&stdout, "binary.size_bytes").parse().unwrap();
    assert_eq!(text_size, fs::metadata(&text_out).unwrap().len(), "text sizes disagree");
    assert_eq!(binary_size, fs::metadata(&binary_out).unwrap().len(), "binary sizes disagree");
    assert_eq!(machine_value(&stdout, "text.pct_of_text"), "100.00");
}

#[test]
fn bench_rejects_an_unknown_format() {
    let (code, _, err) = run(
        &["bench", "--gen", "iot", "--ops", "10", "--formats", "text,protobuf", "--machine"],
        b"",
    );
    assert_eq!(code, 1, "unknown format should be a usage-level format error");
    assert!(err.contains("protobuf"), "error does not name the format: {err}");
}

#[test]
fn missing_input_file_exits_2() {
    let (code, _, err) = run(&["stats", "/nonexistent/input.rdp"], b"");
    assert_eq!(code, 2, "I/O failures should exit 2");
    assert!(err.contains("/nonexistent/input.rdp"), "error does not name the path: {err}");
}

#[test]
fn stdin_to_stdout_chain_round_trips() {
    let (code, binary, _) =
        run(&["convert", "--from", "text", "--to", "binary", "-", "-o", "-"], LISTING.as_bytes());
    assert_eq!(code, 0);
    let (code, text, _) = run(&["convert", "--from", "binary", "--to", "text", "-"], &binary);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(text).unwrap(), LISTING);
}
