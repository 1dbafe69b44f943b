//! CSV output: 17 significant digits in scientific notation, `,` separator,
//! LF line endings. Run metadata goes to a `.meta` sidecar so the data files
//! stay byte-identical between runs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cqed_core::scattering::{Wavefunction1D, Wavefunction2D};

use crate::error::Result;

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Column-labelled rows of text cells.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn push_numbers(&mut self, row: &[f64]) {
        self.push(row.iter().map(|&x| num(x)).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

pub fn wavefunction_1d(w: &Wavefunction1D) -> Table {
    let mut t = Table::new(&["r", "re", "im"]);
    for (i, v) in w.values.iter().enumerate() {
        t.push_numbers(&[w.grid.x(i), v.re, v.im]);
    }
    t
}

/// Row-major over `(r1, r2)`.
pub fn wavefunction_2d(w: &Wavefunction2D) -> Table {
    let mut t = Table::new(&["r1", "r2", "re", "im"]);
    let n = w.grid.n;
    for i in 0..n {
        for j in 0..n {
            let v = w.at(i, j);
            t.push_numbers(&[w.grid.x(i), w.grid.x(j), v.re, v.im]);
        }
    }
    t
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

/// `key = value` lines next to a data file.
pub fn write_sidecar(path: &Path, entries: &[(&str, String)]) -> Result<()> {
    let mut s = String::new();
    for (k, v) in entries {
        let _ = writeln!(s, "{k} = {v}");
    }
    std::fs::write(sidecar_path(path), s)?;
    Ok(())
}
