//! Delimited-text ingestion: column resolution, value parsing, grouping.

use std::collections::BTreeMap;
use std::path::PathBuf;

use qineq::{Error, Result, Sample};

/// Where a value column lives in a delimited file.
#[derive(Debug, Clone)]
pub struct DataColumnSpec {
    pub path: PathBuf,
    /// Column name (needs a header) or 1-based position.
    pub column: String,
    pub delimiter: u8,
    pub has_header: bool,
    /// Optional second column for per-group analysis.
    pub group_by: Option<String>,
    /// Skip unparseable rows instead of failing.
    pub skip_bad: bool,
}

/// A resolved group of observations.
#[derive(Debug)]
pub struct DataGroup {
    pub name: String,
    pub sample: Sample,
}

/// Rows read from the data file, grouped when `group_by` is set. The overall
/// sample is named `All` and always present (last).
pub struct LoadedData {
    pub groups: Vec<DataGroup>,
    pub skipped_rows: usize,
}

fn resolve_column(spec: &str, headers: Option<&csv::StringRecord>) -> Result<usize> {
    if let Ok(pos) = spec.parse::<usize>() {
        if pos == 0 {
            return Err(Error::Parse("column positions are 1-based".into()));
        }
        return Ok(pos - 1);
    }
    let headers = headers.ok_or_else(|| {
        Error::Parse(format!(
            "column `{spec}` is a name but the file has no header (use a 1-based position or drop --no-header)"
        ))
    })?;
    headers
        .iter()
        .position(|h| h == spec)
        .ok_or_else(|| Error::Parse(format!("no column named `{spec}` in the header")))
}

pub fn load(spec: &DataColumnSpec) -> Result<LoadedData> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .has_headers(spec.has_header)
        .flexible(true)
        .from_path(&spec.path)
        .map_err(|e| Error::Parse(format!("{}: {e}", spec.path.display())))?;

    let headers = if spec.has_header {
        Some(
            reader
                .headers()
                .map_err(|e| Error::Parse(e.to_string()))?
                .clone(),
        )
    } else {
        None
    };
    let value_idx = resolve_column(&spec.column, headers.as_ref())?;
    let group_idx = spec
        .group_by
        .as_ref()
        .map(|g| resolve_column(g, headers.as_ref()))
        .transpose()?;

    let mut by_group: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut all = Vec::new();
    let mut bad: Vec<String> = Vec::new();
    let mut skipped = 0usize;

    for (i, record) in reader.records().enumerate() {
        // 1-based data row number, after the header if any.
        let row = i + 1 + usize::from(spec.has_header);
        let mut fail = |msg: String| -> Result<()> {
            if spec.skip_bad {
                skipped += 1;
                Ok(())
            } else {
                bad.push(format!("row {row}: {msg}"));
                Ok(())
            }
        };
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                fail(e.to_string())?;
                continue;
            }
        };
        let raw = match record.get(value_idx) {
            Some(r) => r.trim(),
            None => {
                fail(format!("missing column {}", value_idx + 1))?;
                continue;
            }
        };
        let value: f64 = match raw.parse() {
            Ok(v) => v,
            Err(_) => {
                fail(format!("`{raw}` is not a number"))?;
                continue;
            }
        };
        if !value.is_finite() {
            fail(format!("non-finite value {value}"))?;
            continue;
        }
        if value < 0.0 {
            // Negative observations are invalid regardless of --skip-bad.
            return Err(Error::InvalidSample(format!(
                "{} row {row}: negative observation {value}",
                spec.path.display()
            )));
        }
        if let Some(g) = group_idx {
            let name = record
                .get(g)
                .map(|s| s.trim().to_string())
                .unwrap_or_default();
            if name.is_empty() {
                fail("empty group label".into())?;
                continue;
            }
            by_group.entry(name).or_default().push(value);
        }
        all.push(value);
    }

    if !bad.is_empty() {
        let shown = bad.iter().take(8).cloned().collect::<Vec<_>>().join("; ");
        let suffix = if bad.len() > 8 {
            format!(" (and {} more)", bad.len() - 8)
        } else {
            String::new()
        };
        return Err(Error::Parse(format!(
            "{}: {shown}{suffix}; pass --skip-bad to ignore such rows",
            spec.path.display()
        )));
    }
    if all.len() < 2 {
        return Err(Error::InvalidSample(format!(
            "{}: need at least 2 observations, found {}",
            spec.path.display(),
            all.len()
        )));
    }

    let mut groups = Vec::new();
    for (name, values) in by_group {
        if values.len() < 2 {
            return Err(Error::InvalidSample(format!(
                "group `{name}` has fewer than 2 observations"
            )));
        }
        groups.push(DataGroup {
            name,
            sample: Sample::new(values)?,
        });
    }
    groups.push(DataGroup {
        name: "All".into(),
        sample: Sample::new(all)?,
    });
    Ok(LoadedData {
        groups,
        skipped_rows: skipped,
    })
}
