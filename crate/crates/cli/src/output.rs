//! Locale-independent CSV emission.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

/// `x` with 15 significant digits: fixed notation for exponents in
/// `[−5, 15)`, scientific otherwise.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.14e}");
    let exp: i32 = sci
        .rsplit_once('e')
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    if (-5..15).contains(&exp) {
        format!("{:.*}", (14 - exp) as usize, x)
    } else {
        sci
    }
}

/// Rows of text cells written as CSV with `\n` line endings.
pub struct Table {
    header: &'static str,
    rows: Vec<String>,
}

impl Table {
    pub fn new(header: &'static str) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let line: Vec<String> = cells.into_iter().map(|c| c.as_ref().to_string()).collect();
        self.rows.push(line.join(","));
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn render(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(self.header);
        out.push('\n');
        for r in &self.rows {
            out.push_str(r);
            out.push('\n');
        }
        out
    }

    /// Writes to `path`, or to stdout when `path` is `None`.
    pub fn emit(&self, path: Option<&Path>) -> Result<(), OutputError> {
        let text = self.render();
        match path {
            Some(p) => {
                let wrap = |source| OutputError {
                    path: p.to_path_buf(),
                    source,
                };
                let mut w = BufWriter::new(File::create(p).map_err(wrap)?);
                w.write_all(text.as_bytes()).map_err(wrap)?;
                w.flush().map_err(wrap)
            }
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(text.as_bytes())
                    .and_then(|_| lock.flush())
                    .map_err(|source| OutputError {
                        path: PathBuf::from("<stdout>"),
                        source,
                    })
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("cannot write {}: {source}", path.display())]
pub struct OutputError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}
