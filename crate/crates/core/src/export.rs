//! CSV and plain-PGM writers.
//!
//! Header lines are written as `# ...` comments in both formats. Numbers use
//! Rust's shortest round-trip `Display`, so files are byte-stable for fixed
//! inputs.

use std::io::{self, Write};

use crate::propagation::FieldMap;
use crate::scalar::Scalar;

/// Dynamic range of log-scaled heatmaps below the map maximum.
pub const HEATMAP_RANGE_DB: f64 = 60.0;

pub fn write_comments<W: Write>(w: &mut W, lines: &[String]) -> io::Result<()> {
    for line in lines {
        for part in line.lines() {
            writeln!(w, "# {part}")?;
        }
    }
    Ok(())
}

/// Columns `x,z,re,im,power_density`, z-outer. Samples flagged invalid are
/// omitted; their count is recorded in the header.
pub fn write_field_csv<W: Write, T: Scalar>(w: &mut W, map: &FieldMap<T>, header: &[String]) -> io::Result<()> {
    write_comments(w, header)?;
    let invalid = map.valid.iter().filter(|&&v| !v).count();
    writeln!(w, "# invalid_samples: {invalid}")?;
    writeln!(w, "x,z,re,im,power_density")?;
    let grid = &map.grid;
    for jz in 0..grid.nz() {
        let z = grid.z(jz);
        for ix in 0..grid.nx() {
            let idx = grid.index(ix, jz);
            if !map.valid[idx] {
                continue;
            }
            let e = map.values[idx];
            writeln!(w, "{},{},{},{},{}", grid.x(ix), z, e.re, e.im, map.power[idx])?;
        }
    }
    Ok(())
}

/// Maps power to 0..=65535 on a log scale spanning `range_db` below the
/// maximum valid sample. Invalid samples map to 0.
pub fn log_levels<T: Scalar>(power: &[T], valid: &[bool], range_db: f64) -> Vec<u16> {
    let max = power
        .iter()
        .zip(valid)
        .filter(|(_, &v)| v)
        .fold(0.0f64, |m, (p, _)| m.max(p.as_f64()));
    power
        .iter()
        .zip(valid)
        .map(|(&p, &v)| {
            let p = p.as_f64();
            if !v || max <= 0.0 || p <= 0.0 {
                return 0;
            }
            let db = 10.0 * (p / max).log10();
            scale_unit((db + range_db) / range_db)
        })
        .collect()
}

/// Maps `values` linearly from `[lo, hi]` to 0..=65535, clamping outside.
pub fn linear_levels<T: Scalar>(values: &[T], valid: &[bool], lo: f64, hi: f64) -> Vec<u16> {
    values
        .iter()
        .zip(valid)
        .map(|(&v, &ok)| if ok { scale_unit((v.as_f64() - lo) / (hi - lo)) } else { 0 })
        .collect()
}

fn scale_unit(u: f64) -> u16 {
    (u.clamp(0.0, 1.0) * 65535.0).round() as u16
}

/// Plain (ASCII, `P2`) 16-bit graymap; `levels` is row-major with
/// `width` samples per row.
pub fn write_pgm<W: Write>(w: &mut W, width: usize, height: usize, levels: &[u16], header: &[String]) -> io::Result<()> {
    assert_eq!(levels.len(), width * height, "level count must match image size");
    writeln!(w, "P2")?;
    write_comments(w, header)?;
    writeln!(w, "{width} {height}")?;
    writeln!(w, "65535")?;
    for row in levels.chunks(width) {
        // keep lines under 70 characters
        for chunk in row.chunks(11) {
            let line: Vec<String> = chunk.iter().map(u16::to_string).collect();
            writeln!(w, "{}", line.join(" "))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propagation::ObservationGrid;
    use num_complex::Complex;

    #[test]
    fn log_levels_span_sixty_decibels() {
        let power = [1.0, 1e-3, 1e-6, 1e-9, 5.0];
        let valid = [true, true, true, true, false];
        let lv = log_levels(&power, &valid, HEATMAP_RANGE_DB);
        assert_eq!(lv, vec![65535, 32768, 0, 0, 0]);
    }

    #[test]
    fn pgm_layout() {
        let mut out = Vec::new();
        write_pgm(&mut out, 3, 2, &[0, 1, 2, 3, 4, 65535], &["preset: test".into()]).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "P2\n# preset: test\n3 2\n65535\n0 1 2\n3 4 65535\n");
    }

    #[test]
    fn field_csv_skips_invalid_samples() {
        let grid = ObservationGrid::new(0.0, 1.0, 1.0, 2.0, 2, 2).unwrap();
        let map = FieldMap {
            grid,
            values: vec![Complex::new(1.0, -2.0); 4],
            power: vec![0.5; 4],
            valid: vec![true, false, true, true],
        };
        let mut out = Vec::new();
        write_field_csv(&mut out, &map, &[]).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# invalid_samples: 1");
        assert_eq!(lines[1], "x,z,re,im,power_density");
        assert_eq!(lines[2], "0,1,1,-2,0.5");
        assert_eq!(lines.len(), 5);
    }
}
