//! Frame file format shared repo-wide: CSV with header `x,y` holding one
//! polyline per file; profiles use header `x,u`. Floats are written with
//! shortest round-trip formatting so files reload bit-exactly.

use crate::error::{Error, Result};
use crate::geometry::point::Point2;
use crate::geometry::polyline::PolyCurve;
use crate::geometry::profile::{Contact, Profile};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

pub fn write_curve(path: &Path, curve: &PolyCurve) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "x,y")?;
    for p in &curve.points {
        writeln!(f, "{},{}", p.x, p.y)?;
    }
    Ok(())
}

pub fn read_curve(path: &Path, closed: bool) -> Result<PolyCurve> {
    let rows = read_csv_pairs(path, "x,y")?;
    let pts: Vec<Point2> = rows.into_iter().map(|(x, y)| Point2::new(x, y)).collect();
    PolyCurve::new(pts, closed)
}

pub fn write_profile(path: &Path, profile: &Profile) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "x,u")?;
    for &(x, u) in &profile.samples {
        writeln!(f, "{},{}", x, u)?;
    }
    Ok(())
}

pub fn read_profile(path: &Path) -> Result<Profile> {
    let samples = read_csv_pairs(path, "x,u")?;
    Profile::new(samples, Contact::Vertical, Contact::Vertical)
}

fn read_csv_pairs(path: &Path, expected_header: &str) -> Result<Vec<(f64, f64)>> {
    let file = std::fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| parse_err(path, "empty file"))??;
    if header.trim() != expected_header {
        return Err(parse_err(
            path,
            &format!("expected header `{expected_header}`, got `{}`", header.trim()),
        ));
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split(',');
        let parse = |s: Option<&str>| -> Result<f64> {
            s.ok_or_else(|| parse_err(path, &format!("row {}: missing field", i + 2)))?
                .trim()
                .parse::<f64>()
                .map_err(|e| parse_err(path, &format!("row {}: {e}", i + 2)))
        };
        let x = parse(it.next())?;
        let y = parse(it.next())?;
        out.push((x, y));
    }
    Ok(out)
}

fn parse_err(path: &Path, msg: &str) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        msg: msg.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::profile::{make_initial_curve, CurveFamily};

    #[test]
    fn profile_roundtrip_is_bit_exact() {
        let p = make_initial_curve(&CurveFamily::Semicircle { b0: 1.0 }).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        write_profile(&path, &p).unwrap();
        let q = read_profile(&path).unwrap();
        assert_eq!(p.samples, q.samples);
    }

    #[test]
    fn curve_roundtrip_is_bit_exact() {
        let c = PolyCurve::circle(Point2::new(0.1, -0.2), 1.5, 64);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        write_curve(&path, &c).unwrap();
        let d = read_curve(&path, true).unwrap();
        assert_eq!(c.points, d.points);
    }
}
