//! JSON Lines and CSV emission.

use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::Path;

/// Per-step record emitted by `run`.
#[derive(Debug, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub update: serde_json::Value,
    pub true_g: f64,
    pub output: f64,
    pub acc: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub copy_fraction: Option<f64>,
    pub work: u64,
}

pub fn write_jsonl<T: Serialize>(path: &Path, records: &[T]) -> std::io::Result<()> {
    let mut f = fs::File::create(path)?;
    for r in records {
        writeln!(f, "{}", serde_json::to_string(r).expect("serializable record"))?;
    }
    Ok(())
}

pub fn write_csv(path: &Path, records: &[StepRecord]) -> std::io::Result<()> {
    let mut f = fs::File::create(path)?;
    writeln!(f, "step,true_g,output,acc,copy_fraction,work")?;
    for r in records {
        writeln!(
            f,
            "{},{},{},{},{},{}",
            r.step,
            r.true_g,
            r.output,
            r.acc as u8,
            r.copy_fraction.map_or(String::new(), |v| v.to_string()),
            r.work
        )?;
    }
    Ok(())
}
