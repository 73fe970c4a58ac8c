use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;

use crate::ctx::{sha256_hex, CliError, Ctx};

/// One JSON line per completed run, appended to the manifest file.
#[derive(Serialize)]
struct RunManifest<'a> {
    cmd: &'a [String],
    seed: Option<u64>,
    config_hash: String,
    versions: BTreeMap<&'static str, &'static str>,
    inputs: &'a BTreeMap<String, String>,
    outputs: &'a BTreeMap<String, String>,
    wall_ms: u64,
}

/// The config hash covers the argv tokens and the resolved seed, so a re-run
/// of the same command line with the same seed hashes identically.
fn config_hash(cmd: &[String], seed: Option<u64>) -> String {
    let mut canon = cmd.join("\u{1f}");
    canon.push('\u{1f}');
    match seed {
        Some(s) => canon.push_str(&s.to_string()),
        None => canon.push('-'),
    }
    sha256_hex(canon.as_bytes())
}

pub fn append(path: &Path, cmd: &[String], ctx: &Ctx, wall: Duration) -> Result<(), CliError> {
    let record = RunManifest {
        cmd,
        seed: ctx.seed_used(),
        config_hash: config_hash(cmd, ctx.seed_used()),
        versions: BTreeMap::from([("bohrlab", env!("CARGO_PKG_VERSION"))]),
        inputs: &ctx.inputs.borrow(),
        outputs: &ctx.outputs.borrow(),
        wall_ms: wall.as_millis() as u64,
    };
    let line = serde_json::to_string(&record).expect("manifest record serializes");
    let mut file = std::fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    writeln!(file, "{line}")?;
    Ok(())
}
