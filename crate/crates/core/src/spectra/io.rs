//! Spectrum file format v1.
//!
//! ```text
//! # nlspec-spectrum v1
//! # domain=disk:1
//! # bc=dirichlet
//! # mu=1
//! # lambda=1
//! # method=bessel
//! index,eigenvalue,multiplicity
//! 1,1.4681971649834042e1,1
//! ```
//!
//! Eigenvalues are written with 17 significant digits so the round trip is
//! lossless. A legacy `index,eigenvalue` header (no multiplicity column) is
//! accepted on import with multiplicity defaulting to one.

use super::{BoundaryCondition, Domain, SolveMethod, Spectrum, SpectrumEntry};
use crate::error::Error;
use crate::geometry::LameParameters;
use crate::Result;
use std::io::Write;
use std::path::Path;

const MAGIC: &str = "# nlspec-spectrum v1";

/// Serializes a spectrum to the v1 format.
pub fn spectrum_to_string(spectrum: &Spectrum) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    out.push_str(&format!("# domain={}\n", spectrum.domain()));
    out.push_str(&format!("# bc={}\n", spectrum.bc()));
    out.push_str(&format!("# mu={}\n", spectrum.params().mu()));
    out.push_str(&format!("# lambda={}\n", spectrum.params().lambda()));
    out.push_str(&format!("# method={}\n", spectrum.method()));
    if let SolveMethod::FiniteDifference { grid_n } = spectrum.method() {
        out.push_str(&format!("# grid={grid_n}\n"));
    }
    out.push_str("index,eigenvalue,multiplicity\n");
    for (i, e) in spectrum.entries().iter().enumerate() {
        out.push_str(&format!("{},{:.16e},{}\n", i + 1, e.value, e.multiplicity));
    }
    out
}

/// Writes the v1 file atomically (temp file in the same directory, then
/// rename).
pub fn spectrum_export(spectrum: &Spectrum, path: &Path) -> Result<()> {
    let text = spectrum_to_string(spectrum);
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Parses the v1 format from a string.
pub fn spectrum_from_str(text: &str) -> Result<Spectrum> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines
        .next()
        .ok_or(Error::MalformedFile { line: 1, reason: "empty file".into() })?;
    if first.trim_end() != MAGIC {
        return Err(Error::MalformedFile {
            line: 1,
            reason: format!("expected {MAGIC:?}, found {first:?}"),
        });
    }

    let mut domain: Option<Domain> = None;
    let mut bc: Option<BoundaryCondition> = None;
    let mut mu: Option<f64> = None;
    let mut lambda: Option<f64> = None;
    let mut method: Option<String> = None;
    let mut grid: Option<usize> = None;
    let mut has_multiplicity = true;
    let mut header_line = 0usize;

    for (idx, raw) in lines.by_ref() {
        let lineno = idx + 1;
        let line = raw.trim_end();
        if let Some(meta) = line.strip_prefix("# ") {
            let (key, value) = meta.split_once('=').ok_or(Error::MalformedFile {
                line: lineno,
                reason: format!("metadata line without key=value: {line:?}"),
            })?;
            let bad = |what: &str| Error::MalformedFile {
                line: lineno,
                reason: format!("bad {what} value {value:?}"),
            };
            match key {
                "domain" => domain = Some(value.parse().map_err(|_| bad("domain"))?),
                "bc" => bc = Some(value.parse().map_err(|_| bad("bc"))?),
                "mu" => mu = Some(value.parse().map_err(|_| bad("mu"))?),
                "lambda" => lambda = Some(value.parse().map_err(|_| bad("lambda"))?),
                "method" => method = Some(value.to_string()),
                "grid" => grid = Some(value.parse().map_err(|_| bad("grid"))?),
                _ => {
                    return Err(Error::MalformedFile {
                        line: lineno,
                        reason: format!("unknown metadata key {key:?}"),
                    })
                }
            }
        } else if line == "index,eigenvalue,multiplicity" {
            header_line = lineno;
            break;
        } else if line == "index,eigenvalue" {
            has_multiplicity = false;
            header_line = lineno;
            break;
        } else {
            return Err(Error::MalformedFile {
                line: lineno,
                reason: format!("expected metadata or column header, found {line:?}"),
            });
        }
    }
    if header_line == 0 {
        return Err(Error::MalformedFile { line: 1, reason: "missing column header".into() });
    }

    let missing = |what: &str| Error::MalformedFile {
        line: header_line,
        reason: format!("missing required metadata key {what:?}"),
    };
    let domain = domain.ok_or_else(|| missing("domain"))?;
    let bc = bc.ok_or_else(|| missing("bc"))?;
    let params = LameParameters::new(
        mu.ok_or_else(|| missing("mu"))?,
        lambda.ok_or_else(|| missing("lambda"))?,
    )?;
    let method = match method.ok_or_else(|| missing("method"))?.as_str() {
        "analytic" => SolveMethod::Analytic,
        "bessel" => SolveMethod::BesselRoots,
        "fd" => SolveMethod::FiniteDifference { grid_n: grid.ok_or_else(|| missing("grid"))? },
        other => {
            return Err(Error::MalformedFile {
                line: header_line,
                reason: format!("unknown method {other:?}"),
            })
        }
    };

    let mut entries: Vec<SpectrumEntry> = Vec::new();
    let mut prev = f64::NEG_INFINITY;
    for (idx, raw) in lines {
        let lineno = idx + 1;
        let line = raw.trim_end();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let expected = if has_multiplicity { 3 } else { 2 };
        if fields.len() != expected {
            return Err(Error::MalformedFile {
                line: lineno,
                reason: format!("expected {expected} fields, found {}", fields.len()),
            });
        }
        fields[0].parse::<usize>().map_err(|_| Error::MalformedFile {
            line: lineno,
            reason: format!("bad index {:?}", fields[0]),
        })?;
        let value: f64 = fields[1].parse().map_err(|_| Error::MalformedFile {
            line: lineno,
            reason: format!("bad eigenvalue {:?}", fields[1]),
        })?;
        if !value.is_finite() || value < 0.0 {
            return Err(Error::MalformedFile {
                line: lineno,
                reason: format!("eigenvalue must be finite and nonnegative, got {value}"),
            });
        }
        if value < prev {
            return Err(Error::SortedViolation { line: lineno });
        }
        prev = value;
        let multiplicity: u32 = if has_multiplicity {
            fields[2].parse().map_err(|_| Error::MalformedFile {
                line: lineno,
                reason: format!("bad multiplicity {:?}", fields[2]),
            })?
        } else {
            1
        };
        entries.push(SpectrumEntry { value, multiplicity });
    }
    Spectrum::new(entries, bc, params, domain, method)
}

/// Reads a v1 file.
pub fn spectrum_import(path: &Path) -> Result<Spectrum> {
    let text = std::fs::read_to_string(path)?;
    spectrum_from_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::interval_spectrum;

    fn sample() -> Spectrum {
        let params = LameParameters::new(1.0, 0.5).unwrap();
        interval_spectrum(2.0, &params, BoundaryCondition::Dirichlet, 12).unwrap()
    }

    #[test]
    fn round_trip_is_lossless() {
        let s = sample();
        let text = spectrum_to_string(&s);
        let back = spectrum_from_str(&text).unwrap();
        assert_eq!(s.entries(), back.entries());
        assert_eq!(s.bc(), back.bc());
        assert_eq!(s.domain(), back.domain());
        assert_eq!(s.method(), back.method());
        assert_eq!(s.params(), back.params());
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("spec.csv");
        let s = sample();
        spectrum_export(&s, &path).unwrap();
        let back = spectrum_import(&path).unwrap();
        assert_eq!(s.entries(), back.entries());
    }

    #[test]
    fn unsorted_rows_rejected() {
        let s = sample();
        let mut text = spectrum_to_string(&s);
        text.push_str("13,1.0e0,1\n");
        let err = spectrum_from_str(&text).unwrap_err();
        assert!(matches!(err, Error::SortedViolation { .. }));
    }

    #[test]
    fn legacy_two_column_defaults_multiplicity() {
        let text = "\
# nlspec-spectrum v1
# domain=interval:1
# bc=dirichlet
# mu=1
# lambda=0
# method=analytic
index,eigenvalue
1,9.8696044010893586e0
2,3.9478417604357434e1
";
        let s = spectrum_from_str(text).unwrap();
        assert_eq!(s.count(), 2);
        assert!(s.entries().iter().all(|e| e.multiplicity == 1));
    }

    #[test]
    fn malformed_lines_carry_diagnostics() {
        let err = spectrum_from_str("nonsense\n").unwrap_err();
        assert!(matches!(err, Error::MalformedFile { line: 1, .. }));

        let mut text = spectrum_to_string(&sample());
        text.push_str("oops\n");
        let err = spectrum_from_str(&text).unwrap_err();
        match err {
            Error::MalformedFile { line, .. } => assert_eq!(line, 20),
            other => panic!("unexpected error {other:?}"),
        }

        let text = "# nlspec-spectrum v1\n# unknown=3\nindex,eigenvalue,multiplicity\n";
        assert!(matches!(
            spectrum_from_str(text).unwrap_err(),
            Error::MalformedFile { line: 2, .. }
        ));
    }
}
