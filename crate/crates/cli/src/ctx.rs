use std::cell::{Cell, RefCell};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use bohrlab_core::ZnSet;
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] bohrlab_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.name(),
            CliError::Io(_) => "Io",
            CliError::Csv(_) => "Csv",
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Per-run state: lazily resolved seed plus digests of every file the run
/// reads or writes, for the manifest record.
pub struct Ctx {
    seed_flag: Option<u64>,
    resolved: Cell<Option<u64>>,
    pub inputs: RefCell<BTreeMap<String, String>>,
    pub outputs: RefCell<BTreeMap<String, String>>,
}

impl Ctx {
    pub fn new(seed_flag: Option<u64>) -> Ctx {
        Ctx {
            seed_flag,
            resolved: Cell::new(None),
            inputs: RefCell::new(BTreeMap::new()),
            outputs: RefCell::new(BTreeMap::new()),
        }
    }

    /// The run seed. Drawn lazily so deterministic commands record none; a
    /// drawn seed is printed, never silent.
    pub fn seed(&self) -> u64 {
        if let Some(s) = self.resolved.get() {
            return s;
        }
        let s = self.seed_flag.unwrap_or_else(|| {
            let s = rand::random::<u64>();
            println!("seed: {s}");
            s
        });
        self.resolved.set(Some(s));
        s
    }

    pub fn seed_used(&self) -> Option<u64> {
        self.resolved.get()
    }

    /// A set argument is inline text when it starts with `n:`, otherwise the
    /// path of a file holding the same format.
    pub fn load_set(&self, arg: &str) -> Result<ZnSet, CliError> {
        if arg.trim_start().starts_with("n:") {
            return Ok(ZnSet::from_text(arg)?);
        }
        let bytes = std::fs::read(arg)?;
        self.inputs
            .borrow_mut()
            .insert(arg.to_string(), sha256_hex(&bytes));
        let text = String::from_utf8(bytes)
            .map_err(|e| bohrlab_core::Error::Parse(format!("{arg} is not UTF-8: {e}")))?;
        Ok(ZnSet::from_text(&text)?)
    }

    pub fn write_atomic(&self, path: &Path, bytes: &[u8]) -> Result<(), CliError> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(bytes)?;
        tmp.flush()?;
        tmp.persist(path).map_err(|e| e.error)?;
        self.outputs
            .borrow_mut()
            .insert(path.display().to_string(), sha256_hex(bytes));
        Ok(())
    }

    /// CSV goes to the path atomically when given, to stdout otherwise.
    pub fn emit(&self, out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
        match out {
            Some(path) => self.write_atomic(path, bytes),
            None => {
                std::io::stdout().write_all(bytes)?;
                Ok(())
            }
        }
    }
}

/// RFC 4180 body: header row, CRLF terminators, `.` decimal separator by
/// construction (Rust float Display is locale-independent).
pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok(w.into_inner()
        .expect("flushing an in-memory writer cannot fail"))
}
