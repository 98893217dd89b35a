//! Phase tables, operator kernels and spectra on disk.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{QhaError, Result};
use crate::grid::{LineGrid, PhaseFunction, PhaseGrid};
use crate::operator::{OperatorMatrix, SingularSpectrum};

pub const PHASE_MAGIC: &[u8; 8] = b"QHAPHF01";
pub const OPERATOR_MAGIC: &[u8; 8] = b"QHAOPK01";

/// `re+imj`, shortest round-trip decimal for both parts.
pub fn format_complex(z: Complex64) -> String {
    format!("{}{:+}j", z.re, z.im)
}

pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let bad = || QhaError::Format(format!("cannot parse complex value {s:?}"));
    let Some(body) = s.strip_suffix('j') else {
        return Ok(Complex64::new(s.parse().map_err(|_| bad())?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let re = body[..split].parse().map_err(|_| bad())?;
    let im = body[split..].parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

pub fn phase_to_csv(f: &PhaseFunction) -> String {
    let g = &f.grid;
    let n = g.n();
    let mut out = String::from("x\\xi");
    for k in 0..n {
        out.push(',');
        out.push_str(&g.xi.point(k).to_string());
    }
    out.push('\n');
    for j in 0..n {
        out.push_str(&g.x.point(j).to_string());
        for k in 0..n {
            out.push(',');
            out.push_str(&format_complex(f.at(j, k)));
        }
        out.push('\n');
    }
    out
}

pub fn write_phase_csv(path: impl AsRef<Path>, f: &PhaseFunction) -> Result<()> {
    fs::write(path, phase_to_csv(f))?;
    Ok(())
}

/// Reads a CSV phase table; the grid is recovered from the coordinate row
/// and column and must be a lattice (`dxi = 1 / (n dx)`).
pub fn phase_from_csv(text: &str) -> Result<PhaseFunction> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| QhaError::Format("empty phase table".into()))?;
    let xi: Vec<f64> = header
        .split(',')
        .skip(1)
        .map(|c| c.trim().parse().map_err(|_| QhaError::Format(format!("bad xi coordinate {c:?}"))))
        .collect::<Result<_>>()?;
    let n = xi.len();
    let mut xs = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n * n);
    for (row, line) in lines.enumerate() {
        let mut cells = line.split(',');
        let x = cells.next().unwrap_or("");
        xs.push(x.trim().parse::<f64>().map_err(|_| QhaError::Format(format!("bad x coordinate {x:?}")))?);
        let before = values.len();
        for c in cells {
            values.push(parse_complex(c)?);
        }
        if values.len() - before != n {
            return Err(QhaError::Format(format!("row {row} has {} cells, expected {n}", values.len() - before)));
        }
    }
    if xs.len() != n || n < 2 {
        return Err(QhaError::Format(format!("table is {}x{n}, expected square with n >= 2", xs.len())));
    }
    let h = xs[1] - xs[0];
    let grid = PhaseGrid::new(LineGrid::new(n, h)?);
    let tol = 1e-9;
    for j in 0..n {
        if (grid.x.point(j) - xs[j]).abs() > tol * (1.0 + xs[j].abs())
            || (grid.xi.point(j) - xi[j]).abs() > tol * (1.0 + xi[j].abs())
        {
            return Err(QhaError::GridMismatch(format!(
                "coordinates at index {j} do not match a lattice with n = {n}, h = {h}"
            )));
        }
    }
    PhaseFunction::new(grid, values)
}

pub fn read_phase_csv(path: impl AsRef<Path>) -> Result<PhaseFunction> {
    phase_from_csv(&fs::read_to_string(path)?)
}

fn push_complex(buf: &mut Vec<u8>, values: &[Complex64]) {
    for z in values {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
}

fn read_complex(bytes: &[u8]) -> Vec<Complex64> {
    bytes
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
            Complex64::new(re, im)
        })
        .collect()
}

pub fn phase_to_bytes(f: &PhaseFunction) -> Vec<u8> {
    let mut buf = Vec::with_capacity(8 + 16 * f.values.len());
    buf.extend_from_slice(PHASE_MAGIC);
    push_complex(&mut buf, &f.values);
    buf
}

/// The dump carries no grid; the caller supplies it.
pub fn phase_from_bytes(bytes: &[u8], grid: &PhaseGrid) -> Result<PhaseFunction> {
    let n = grid.n();
    if bytes.len() < 8 || &bytes[..8] != PHASE_MAGIC {
        return Err(QhaError::Format("missing QHAPHF01 magic".into()));
    }
    if bytes.len() != 8 + 16 * n * n {
        return Err(QhaError::Format(format!(
            "phase dump holds {} bytes of data, expected {} for n = {n}",
            bytes.len() - 8,
            16 * n * n
        )));
    }
    PhaseFunction::new(grid.clone(), read_complex(&bytes[8..]))
}

pub fn write_phase_binary(path: impl AsRef<Path>, f: &PhaseFunction) -> Result<()> {
    fs::write(path, phase_to_bytes(f))?;
    Ok(())
}

pub fn read_phase_binary(path: impl AsRef<Path>, grid: &PhaseGrid) -> Result<PhaseFunction> {
    phase_from_bytes(&fs::read(path)?, grid)
}

pub fn operator_to_bytes(t: &OperatorMatrix) -> Vec<u8> {
    let n = t.n();
    let mut buf = Vec::with_capacity(16 + 16 * n * n);
    buf.extend_from_slice(OPERATOR_MAGIC);
    buf.extend_from_slice(&(n as u64).to_le_bytes());
    push_complex(&mut buf, &t.kernel);
    buf
}

pub fn operator_from_bytes(bytes: &[u8], grid: &LineGrid) -> Result<OperatorMatrix> {
    if bytes.len() < 16 || &bytes[..8] != OPERATOR_MAGIC {
        return Err(QhaError::Format("missing QHAOPK01 magic".into()));
    }
    let n = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    if n != grid.n() {
        return Err(QhaError::GridMismatch(format!("dump has n = {n}, grid has n = {}", grid.n())));
    }
    if bytes.len() != 16 + 16 * n * n {
        return Err(QhaError::Format(format!("operator dump has {} bytes, expected {}", bytes.len(), 16 + 16 * n * n)));
    }
    OperatorMatrix::new(grid.clone(), read_complex(&bytes[16..]))
}

pub fn write_operator_binary(path: impl AsRef<Path>, t: &OperatorMatrix) -> Result<()> {
    fs::write(path, operator_to_bytes(t))?;
    Ok(())
}

pub fn read_operator_binary(path: impl AsRef<Path>, grid: &LineGrid) -> Result<OperatorMatrix> {
    operator_from_bytes(&fs::read(path)?, grid)
}

/// `index,singular_value`, largest first.
pub fn spectrum_to_csv(s: &SingularSpectrum) -> String {
    let mut out = String::from("index,singular_value\n");
    for (i, v) in s.values.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, v));
    }
    out
}

pub fn write_spectrum_csv(path: impl AsRef<Path>, s: &SingularSpectrum) -> Result<()> {
    fs::write(path, spectrum_to_csv(s))?;
    Ok(())
}

/// One column per series, padded with empty cells.
pub fn series_to_csv<'a>(series: impl IntoIterator<Item = (&'a String, &'a Vec<f64>)>) -> String {
    let cols: Vec<_> = series.into_iter().collect();
    let rows = cols.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let mut out = cols.iter().map(|(k, _)| k.as_str()).collect::<Vec<_>>().join(",");
    out.push('\n');
    for r in 0..rows {
        let line: Vec<String> = cols.iter().map(|(_, v)| v.get(r).map(|x| x.to_string()).unwrap_or_default()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}
