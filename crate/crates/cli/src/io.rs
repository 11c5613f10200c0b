//! Input parsing, output-path checks and atomic writes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use qradius_core::{ComplexMatrix, QParameter, StructuredSpec};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, CliResult};

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn read_matrix(path: &Path) -> CliResult<ComplexMatrix> {
    read_json(path)
}

pub fn read_spec(path: &Path) -> CliResult<StructuredSpec> {
    read_json(path)
}

/// A `q` flag after reduction to `|q|`, keeping what the user typed.
#[derive(Clone, Debug, Serialize)]
pub struct QInput {
    pub input: String,
    pub modulus: f64,
    pub reduced: bool,
    #[serde(skip)]
    pub param: QParameter,
}

impl QInput {
    pub fn describe(&self) -> String {
        if self.reduced {
            format!("{} (reduced from {})", self.modulus, self.input)
        } else {
            self.modulus.to_string()
        }
    }
}

/// `"0.5"` or `"re,im"`. Only `|q|` matters for radii and bounds, so complex
/// input is replaced by its modulus straight away.
pub fn parse_q(text: &str) -> CliResult<QInput> {
    let bad = || CliError::Usage(format!("invalid q `{text}`: expected a number or `re,im`"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let q = match parts.as_slice() {
        [re] => Complex64::new(re.parse().map_err(|_| bad())?, 0.0),
        [re, im] => Complex64::new(re.parse().map_err(|_| bad())?, im.parse().map_err(|_| bad())?),
        _ => return Err(bad()),
    };
    if !q.re.is_finite() || !q.im.is_finite() {
        return Err(bad());
    }
    let param = QParameter::new(q)
        .map_err(|_| CliError::Usage(format!("|q| = {} is outside [0, 1]", q.norm())))?
        .reduced();
    Ok(QInput {
        input: if q.im == 0.0 && q.re >= 0.0 { q.re.to_string() } else { format!("{}{:+}i", q.re, q.im) },
        modulus: param.modulus(),
        reduced: q.im != 0.0 || q.re < 0.0,
        param,
    })
}

/// `a:b:step`, inclusive of `b`; every point must lie in `(0, 1]`.
pub fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::Usage(format!("invalid q grid `{text}`: {why}"));
    let nums: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad("expected a:b:step"))?;
    let [a, b, step] = nums[..] else {
        return Err(bad("expected a:b:step"));
    };
    if !(a.is_finite() && b.is_finite() && step.is_finite()) || step <= 0.0 || b < a {
        return Err(bad("need finite a <= b and step > 0"));
    }
    if a <= 0.0 || b > 1.0 {
        return Err(bad("points must lie in (0, 1]"));
    }
    let count = ((b - a) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(bad("more than a million points"));
    }
    // a + i*step drifts (0.1 + 2*0.1 != 0.3); snap to 12 decimals so the q
    // column prints as typed.
    Ok((0..count)
        .map(|i| (((a + i as f64 * step) * 1e12).round() / 1e12).min(b))
        .collect())
}

/// Fails early when `path` cannot be written: missing parent directory, or
/// the path names a directory.
pub fn check_output(path: &Path) -> CliResult<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    if !parent.is_dir() {
        return Err(CliError::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "parent directory does not exist"),
        ));
    }
    if path.is_dir() {
        return Err(CliError::io(path, std::io::Error::other("is a directory")));
    }
    Ok(())
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// CSV from a header and rows of floats. `Display` for `f64` is the shortest
/// text that parses back to the same bits.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(f64::to_string).collect();
        let _ = writeln!(out, "{}", fields.join(","));
    }
    out
}
