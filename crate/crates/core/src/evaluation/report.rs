//! Plain-text renderings of reports: TSV tables with a header row and LF line
//! endings, and pretty-printed JSON. Doubles use shortest round-trip decimals.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::experiment::{ExperimentRecord, SweepResult};
use super::metrics::EvalReport;
use crate::{Error, Result};

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

/// Header plus a single row: `tp fp fn tn accuracy precision recall f1`.
pub fn eval_tsv(r: &EvalReport) -> String {
    format!(
        "tp\tfp\tfn\ttn\taccuracy\tprecision\trecall\tf1\n{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
        r.tp, r.fp, r.fn_, r.tn, r.accuracy, r.precision, r.recall, r.f1
    )
}

/// One row per fold.
pub fn folds_tsv(record: &ExperimentRecord) -> String {
    let mut out = String::from(
        "fold\ttrain_size\ttest_size\tvocab_size\tb0\ttp\tfp\tfn\ttn\taccuracy\tprecision\trecall\tf1\n",
    );
    for f in &record.folds {
        let r = &f.report;
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            f.fold,
            f.train_size,
            f.test_size,
            f.vocab_size,
            opt(f.chosen_b0),
            r.tp,
            r.fp,
            r.fn_,
            r.tn,
            r.accuracy,
            r.precision,
            r.recall,
            r.f1
        ));
    }
    out
}

/// One row per axis value: `<axis> <metric> status`.
pub fn sweep_tsv(s: &SweepResult) -> String {
    let mut out = format!("{}\t{}\tstatus\n", s.axis, s.metric);
    for (i, row) in s.rows.iter().enumerate() {
        let status = match (&row.error, row.metric) {
            (Some(e), _) => format!("failed: {}", e.replace(['\t', '\n'], " ")),
            (None, None) => "skipped".to_string(),
            (None, Some(_)) if s.optimum == Some(i) => "best".to_string(),
            (None, Some(_)) => "ok".to_string(),
        };
        out.push_str(&format!("{}\t{}\t{}\n", row.value, opt(row.metric), status));
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Writes through a temporary file in the same directory, then renames it
/// over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidParameter(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_table_shape() {
        let r = EvalReport::from_counts(8, 2, 1, 9).unwrap();
        let t = eval_tsv(&r);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[1].split('\t').count(), 8);
        assert!(lines[1].starts_with("8\t2\t1\t9\t0.85\t0.8\t"));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.tsv");
        write_atomic(&p, "a\n").unwrap();
        write_atomic(&p, "b\n").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "b\n");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        assert!(write_atomic(&dir.path().join("missing/x.tsv"), "c").is_err());
    }
}
