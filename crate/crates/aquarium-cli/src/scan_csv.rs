//! Reader for the `scan` CSV format (lambda,rot,lo,hi,plateau_flag):
//! tolerant of comments and blank lines, strict about field shape. Feeds
//! `diophantine --from-scan`.

/// One parsed scan row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanCsvRow {
    pub lambda: f64,
    pub rot: f64,
    pub lo: f64,
    pub hi: f64,
    pub plateau: bool,
}

/// Parse scan CSV text. Rows with `nan` rotation numbers (skipped scan
/// rows) are dropped; malformed rows are errors.
pub fn parse_scan_csv(text: &str) -> Result<Vec<ScanCsvRow>, String> {
    let mut out = Vec::new();
    let mut saw_header = false;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if !saw_header {
            // the first non-comment line must be the header
            if line != "lambda,rot,lo,hi,plateau_flag" {
                return Err(format!("line {}: unexpected header {line:?}", lineno + 1));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(format!(
                "line {}: expected 5 fields, got {}",
                lineno + 1,
                fields.len()
            ));
        }
        let num = |i: usize| -> Result<f64, String> {
            fields[i]
                .parse::<f64>()
                .map_err(|e| format!("line {}, field {}: {e}", lineno + 1, i + 1))
        };
        let lambda = num(0)?;
        let rot = num(1)?;
        if !lambda.is_finite() {
            return Err(format!("line {}: non-finite lambda", lineno + 1));
        }
        if rot.is_nan() {
            continue; // skipped row
        }
        let (lo, hi) = (num(2)?, num(3)?);
        let plateau = match fields[4] {
            "0" => false,
            "1" => true,
            other => return Err(format!("line {}: bad plateau flag {other:?}", lineno + 1)),
        };
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(format!("line {}: bad interval", lineno + 1));
        }
        out.push(ScanCsvRow {
            lambda,
            rot,
            lo,
            hi,
            plateau,
        });
    }
    if !saw_header {
        return Err("no header row found".into());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_well_formed() {
        let text = "# config: {}\nlambda,rot,lo,hi,plateau_flag\n5e-1,4.2e-1,4.1e-1,4.3e-1,0\n6e-1,nan,nan,nan,0\n7e-1,5e-1,4.9e-1,5.1e-1,1\n";
        let rows = parse_scan_csv(text).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[1].plateau);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(parse_scan_csv("lambda,rot\n").is_err());
        assert!(parse_scan_csv("lambda,rot,lo,hi,plateau_flag\n1,2,3\n").is_err());
        assert!(parse_scan_csv("lambda,rot,lo,hi,plateau_flag\n1,2,3,4,x\n").is_err());
        assert!(parse_scan_csv("lambda,rot,lo,hi,plateau_flag\ninf,2,3,4,0\n").is_err());
        assert!(parse_scan_csv("").is_err());
    }
}
