//! Plain-text exports: point sets, neighbour edge lists and symbol grids.
//!
//! Point sets are one point per line, coordinates separated by spaces,
//! after a `# window lo hi` header where `lo` and `hi` are comma
//! separated corners. Lines starting with `#` are comments.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rotfactor_core::generators::Configuration;
use rotfactor_core::{Point, Window};

use crate::error::{Error, Result};

fn coords(p: &Point, sep: &str) -> String {
    p.coords().iter().map(i64::to_string).collect::<Vec<_>>().join(sep)
}

fn parse_coords(s: &str, sep: char) -> std::result::Result<Point, String> {
    let v = s
        .split(sep)
        .filter(|t| !t.is_empty())
        .map(|t| t.trim().parse::<i64>().map_err(|_| format!("bad coordinate '{t}'")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Point::new(&v).map_err(|e| e.to_string())
}

pub fn format_point_set(points: &[Point], window: &Window, comment: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(c) = comment {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "# window {} {}", coords(&window.lo(), ","), coords(&window.hi(), ","));
    for p in points {
        let _ = writeln!(out, "{}", coords(p, " "));
    }
    out
}

/// Inverse of [`format_point_set`]; the window header is optional.
pub fn parse_point_set(text: &str) -> std::result::Result<(Vec<Point>, Option<Window>), String> {
    let mut points = Vec::new();
    let mut window = None;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(w) = rest.trim().strip_prefix("window") {
                let mut parts = w.split_whitespace();
                let (Some(lo), Some(hi)) = (parts.next(), parts.next()) else {
                    return Err(format!("line {}: window header needs two corners", i + 1));
                };
                let lo = parse_coords(lo, ',').map_err(|e| format!("line {}: {e}", i + 1))?;
                let hi = parse_coords(hi, ',').map_err(|e| format!("line {}: {e}", i + 1))?;
                window = Some(Window::new(lo, hi).map_err(|e| format!("line {}: {e}", i + 1))?);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        points.push(parse_coords(line, ' ').map_err(|e| format!("line {}: {e}", i + 1))?);
    }
    Ok((points, window))
}

/// One unordered pair per line: `x1,..,xd y1,..,yd`.
pub fn format_edges<'a>(pairs: impl IntoIterator<Item = &'a (Point, Point)>) -> String {
    let mut out = String::new();
    for (a, b) in pairs {
        let _ = writeln!(out, "{} {}", coords(a, ","), coords(b, ","));
    }
    out
}

/// Symbol grid: one row per line, each row running along the last axis;
/// for `d = 3` the layers (first axis) are separated by blank lines.
/// Symbols are written without separators when all names are one
/// character long.
pub fn format_grid(config: &Configuration, alphabet: &[String]) -> String {
    let compact = alphabet.iter().all(|a| a.chars().count() == 1);
    let name = |s: u32| alphabet.get(s as usize).cloned().unwrap_or_else(|| s.to_string());
    let shape = config.shape();
    let d = shape.len();
    let row_len = shape[d - 1];
    let mut out = String::new();
    let _ = writeln!(out, "# offset {}", coords(&config.offset(), ","));
    let rows_per_layer = if d == 3 { shape[1] } else { 1 };
    for (r, row) in config.cells().chunks(row_len).enumerate() {
        if d == 3 && r > 0 && r % rows_per_layer == 0 {
            out.push('\n');
        }
        let cells: Vec<String> = row.iter().map(|&s| name(s)).collect();
        out.push_str(&cells.join(if compact { "" } else { " " }));
        out.push('\n');
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| Error::Write { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, text).map_err(|source| Error::Write { path: path.to_path_buf(), source })
}
