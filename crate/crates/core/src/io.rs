//! Snapshot serialization: vorticity fields as plain CSV (`i,j,x1,x2,value`,
//! row-major, 17 significant digits — enough to round-trip f64 exactly)
//! with a JSON sidecar carrying the grid, model, time, and the hash of the
//! generating configuration.

use crate::error::{Error, Result};
use crate::fields::{Grid, ScalarField, TopBc};
use crate::solver::Model;
use serde::{Deserialize, Serialize};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

/// Grid constructor parameters, enough to rebuild the node layout exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridMeta {
    pub nx: usize,
    pub ny: usize,
    pub length_x1: f64,
    pub height_x2: f64,
    pub top_bc: TopBc,
    pub grading: f64,
}

impl GridMeta {
    pub fn of(grid: &Grid) -> GridMeta {
        GridMeta {
            nx: grid.nx,
            ny: grid.ny,
            length_x1: grid.length_x1,
            height_x2: grid.height_x2,
            top_bc: grid.top_bc,
            grading: grid.grading,
        }
    }

    pub fn build(&self) -> Result<Arc<Grid>> {
        Grid::graded(self.nx, self.ny, self.length_x1, self.height_x2, self.top_bc, self.grading)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub grid: GridMeta,
    pub model: Model,
    pub t: f64,
    pub u_top: f64,
    /// FNV-1a hash of the configuration text that produced the run.
    pub config_hash: String,
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}

fn bad(path: &Path, msg: impl Into<String>) -> Error {
    Error::Snapshot { path: path.display().to_string(), msg: msg.into() }
}

/// Write one scalar field as CSV.
pub fn write_field_csv(path: &Path, field: &ScalarField) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    let g = &field.grid;
    writeln!(w, "i,j,x1,x2,value").map_err(|e| io_err(path, e))?;
    for i in 0..g.nx {
        for j in 0..g.ny {
            writeln!(w, "{i},{j},{:.16e},{:.16e},{:.16e}", g.x1(i), g.x2(j), field.at(i, j))
                .map_err(|e| io_err(path, e))?;
        }
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Read a field written by `write_field_csv` onto `grid`, validating the
/// node layout row by row.
pub fn read_field_csv(path: &Path, grid: &Arc<Grid>) -> Result<ScalarField> {
    let file = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut lines = reader.lines();
    match lines.next() {
        Some(Ok(h)) if h.trim() == "i,j,x1,x2,value" => {}
        Some(Ok(h)) => return Err(bad(path, format!("unexpected header {h:?}"))),
        Some(Err(e)) => return Err(io_err(path, e)),
        None => return Err(bad(path, "empty file")),
    }
    let mut field = ScalarField::zeros(grid);
    let mut seen = vec![false; grid.nx * grid.ny];
    for (lineno, line) in lines.enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 5 {
            return Err(bad(path, format!("line {}: expected 5 fields", lineno + 2)));
        }
        let i: usize = parts[0].trim().parse().map_err(|_| bad(path, format!("line {}: bad i", lineno + 2)))?;
        let j: usize = parts[1].trim().parse().map_err(|_| bad(path, format!("line {}: bad j", lineno + 2)))?;
        if i >= grid.nx || j >= grid.ny {
            return Err(bad(path, format!("line {}: index ({i},{j}) outside {}x{}", lineno + 2, grid.nx, grid.ny)));
        }
        let x1: f64 = parts[2].trim().parse().map_err(|_| bad(path, format!("line {}: bad x1", lineno + 2)))?;
        let x2: f64 = parts[3].trim().parse().map_err(|_| bad(path, format!("line {}: bad x2", lineno + 2)))?;
        let v: f64 = parts[4].trim().parse().map_err(|_| bad(path, format!("line {}: bad value", lineno + 2)))?;
        if (x1 - grid.x1(i)).abs() > 1e-12 * (1.0 + grid.length_x1)
            || (x2 - grid.x2(j)).abs() > 1e-12 * (1.0 + grid.height_x2)
        {
            return Err(bad(path, format!("line {}: coordinates do not match the grid", lineno + 2)));
        }
        if seen[i * grid.ny + j] {
            return Err(bad(path, format!("line {}: duplicate node ({i},{j})", lineno + 2)));
        }
        seen[i * grid.ny + j] = true;
        field.set(i, j, v);
    }
    if !seen.iter().all(|&s| s) {
        return Err(bad(path, "missing nodes"));
    }
    Ok(field)
}

/// Write vorticity plus sidecar metadata: `<base>.csv`, `<base>.meta.json`.
pub fn save_snapshot(base: &Path, omega: &ScalarField, meta: &SnapshotMeta) -> Result<()> {
    let csv = base.with_extension("csv");
    let meta_path = base.with_extension("meta.json");
    write_field_csv(&csv, omega)?;
    let text = serde_json::to_string_pretty(meta)
        .map_err(|e| bad(&meta_path, format!("serialize: {e}")))?;
    std::fs::write(&meta_path, text + "\n").map_err(|e| io_err(&meta_path, e))
}

/// Load a snapshot pair written by `save_snapshot`.
pub fn load_snapshot(base: &Path) -> Result<(ScalarField, SnapshotMeta)> {
    let meta_path = base.with_extension("meta.json");
    let text = std::fs::read_to_string(&meta_path).map_err(|e| io_err(&meta_path, e))?;
    let meta: SnapshotMeta =
        serde_json::from_str(&text).map_err(|e| bad(&meta_path, format!("parse: {e}")))?;
    let grid = meta.grid.build()?;
    let omega = read_field_csv(&base.with_extension("csv"), &grid)?;
    Ok((omega, meta))
}

/// FNV-1a, the configuration fingerprint used in sidecars and reports.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub fn fnv1a_hex(bytes: &[u8]) -> String {
    format!("{:016x}", fnv1a(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sample() -> (Arc<Grid>, ScalarField) {
        let g = Grid::new(8, 9, 2.0 * PI, 1.0, TopBc::FreeSlip).unwrap();
        let f = ScalarField::from_fn(&g, |x1, x2| (x1.sin() + 1.0) * (x2 - 0.3) * 1e-7 + 1.0 / 3.0);
        (g, f)
    }

    #[test]
    fn field_csv_roundtrip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("field.csv");
        let (g, f) = sample();
        write_field_csv(&path, &f).unwrap();
        let back = read_field_csv(&path, &g).unwrap();
        for (a, b) in f.values.iter().zip(back.values.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn snapshot_roundtrip_preserves_metadata() {
        let dir = tempfile::tempdir().unwrap();
        let base = dir.path().join("snap");
        let (g, f) = sample();
        let meta = SnapshotMeta {
            grid: GridMeta::of(&g),
            model: Model::NavierStokes { nu: 1.25e-4 },
            t: 0.7,
            u_top: 0.99,
            config_hash: fnv1a_hex(b"example"),
        };
        save_snapshot(&base, &f, &meta).unwrap();
        let (omega, back) = load_snapshot(&base).unwrap();
        assert_eq!(back.t, 0.7);
        assert_eq!(back.u_top, 0.99);
        assert_eq!(back.config_hash, meta.config_hash);
        assert!(matches!(back.model, Model::NavierStokes { nu } if nu == 1.25e-4));
        assert!(omega.grid.same_layout(&g));
        for (a, b) in f.values.iter().zip(omega.values.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn rejects_corrupt_rows() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("field.csv");
        let (g, f) = sample();
        write_field_csv(&path, &f).unwrap();
        let mut text = std::fs::read_to_string(&path).unwrap();
        text = text.replace("i,j,x1,x2,value", "a,b,c");
        std::fs::write(&path, &text).unwrap();
        assert!(matches!(read_field_csv(&path, &g), Err(Error::Snapshot { .. })));
    }

    #[test]
    fn rejects_missing_nodes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("field.csv");
        let (g, f) = sample();
        write_field_csv(&path, &f).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let truncated: Vec<&str> = text.lines().take(20).collect();
        std::fs::write(&path, truncated.join("\n")).unwrap();
        assert!(matches!(read_field_csv(&path, &g), Err(Error::Snapshot { .. })));
    }

    #[test]
    fn fnv1a_reference_values() {
        // standard FNV-1a test vectors
        assert_eq!(fnv1a(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a(b"foobar"), 0x85944171f73967e8);
    }
}
