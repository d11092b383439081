//! File plumbing shared by the subcommands.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::args::OUT_DIR_ENV;

#[derive(Debug)]
pub struct CliError(pub String);

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<spotvol_core::Error> for CliError {
    fn from(e: spotvol_core::Error) -> Self {
        CliError(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn fail<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError(msg.into()))
}

/// Where a command writes its main CSV.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Stdout,
    File(PathBuf),
}

impl Target {
    /// `--out`, else `$SPOTVOL_OUT_DIR/<default_name>`, else `./<default_name>`.
    pub fn resolve(out: Option<PathBuf>, default_name: &str) -> Self {
        match out {
            Some(p) if p.as_os_str() == "-" => Target::Stdout,
            Some(p) => Target::File(p),
            None => Target::File(out_dir(None).join(default_name)),
        }
    }

    pub fn write(&self, contents: &str) -> CliResult<()> {
        match self {
            Target::Stdout => {
                let mut out = io::stdout().lock();
                out.write_all(contents.as_bytes()).map_err(|e| CliError(format!("stdout: {e}")))
            }
            Target::File(p) => write_text(p, contents),
        }
    }

    /// `<out><suffix>`; `None` when writing to stdout.
    pub fn sidecar(&self, suffix: &str) -> Option<PathBuf> {
        match self {
            Target::Stdout => None,
            Target::File(p) => {
                let mut s = p.clone().into_os_string();
                s.push(suffix);
                Some(PathBuf::from(s))
            }
        }
    }
}

pub fn out_dir(out: Option<PathBuf>) -> PathBuf {
    out.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("."))
}

pub fn write_text(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError(format!("output directory `{}`: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError(format!("output file `{}`: {e}", path.display())))
}

/// `key = value` pairs, one per line; `#` starts a comment.
pub fn read_kv(path: &Path) -> CliResult<Vec<(String, String)>> {
    let text = fs::read_to_string(path).map_err(|e| CliError(format!("config file `{}`: {e}", path.display())))?;
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return fail(format!("config file `{}` line {}: expected key = value", path.display(), lineno + 1));
        };
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

/// Observations from a CSV whose header names a `y` column, or from a
/// single-column CSV with any header.
pub fn read_series(path: &Path) -> CliResult<Vec<f64>> {
    let name = path.display();
    let file = fs::File::open(path).map_err(|e| CliError(format!("input file `{name}`: {e}")))?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(file);
    let mut records = reader.records();
    let first = match records.next() {
        Some(r) => r.map_err(|e| CliError(format!("input file `{name}`: malformed CSV: {e}")))?,
        None => return fail(format!("input file `{name}`: no rows")),
    };
    if first.iter().all(|f| f.parse::<f64>().is_ok()) {
        return fail(format!("input file `{name}`: missing header row (expected a `y` column)"));
    }
    let column = match first.iter().position(|f| f == "y") {
        Some(c) => c,
        None if first.len() == 1 => 0,
        None => {
            let header = first.iter().collect::<Vec<_>>().join(",");
            return fail(format!("input file `{name}`: no `y` column in header `{header}`"));
        }
    };
    let field = first[column].to_string();

    let mut y = Vec::new();
    let mut parse = |record: &csv::StringRecord, line: u64| -> CliResult<()> {
        let Some(raw) = record.get(column) else {
            return fail(format!("input file `{name}` line {line}: missing field `{field}`"));
        };
        let v = raw
            .parse::<f64>()
            .map_err(|_| CliError(format!("input file `{name}` line {line}: field `{field}` is not a number: `{raw}`")))?;
        if !v.is_finite() {
            return fail(format!("input file `{name}` line {line}: field `{field}` is not finite"));
        }
        y.push(v);
        Ok(())
    };
    for record in records {
        let record = record.map_err(|e| CliError(format!("input file `{name}`: malformed CSV: {e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        parse(&record, line)?;
    }
    Ok(y)
}
