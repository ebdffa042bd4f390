use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};

use permuton_lab_core::bwx::{BwxStep, PipelineTrace};

use crate::error::LabResult;

/// Version tag written as the first CSV column and into every JSONL object.
pub const SCHEMA_VERSION: u32 = 1;

/// A file, or stdout for `None` and `-`.
pub fn open_output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    match path {
        Some(p) if p != Path::new("-") => Ok(Box::new(BufWriter::new(File::create(p)?))),
        _ => Ok(Box::new(io::stdout().lock())),
    }
}

/// Runs `work` for every index in `0..count` on the rayon pool, one chunk at
/// a time, and hands the results to `sink` in index order.
pub fn for_each_ordered<T, W, S>(count: usize, work: W, mut sink: S) -> LabResult<()>
where
    T: Send,
    W: Fn(usize) -> T + Sync,
    S: FnMut(usize, T) -> LabResult<()>,
{
    let chunk = (2 * rayon::current_num_threads()).max(1);
    let mut start = 0;
    while start < count {
        let end = (start + chunk).min(count);
        let results: Vec<T> = (start..end).into_par_iter().map(&work).collect();
        for (offset, r) in results.into_iter().enumerate() {
            sink(start + offset, r)?;
        }
        start = end;
    }
    Ok(())
}

fn boxes_json(boxes: &[(u32, u32)]) -> Value {
    Value::Array(boxes.iter().map(|(i, j)| Value::String(format!("({i},{j})"))).collect())
}

fn step_json(name: &str, k: usize, step: &BwxStep) -> Value {
    json!({
        "step": name,
        "k": k,
        "tau": step.coloring.tau().to_string(),
        "input_blue": boxes_json(&step.coloring.blue_boxes()),
        "lambda": step.extraction.shape().to_string(),
        "row_map": step.extraction.row_map(),
        "col_map": step.extraction.col_map(),
        "traversal": step.extraction.traversal().to_string(),
        "image": step.image.to_string(),
    })
}

/// One JSON object describing every stage of the pipeline.
pub fn trace_json(trace: &PipelineTrace) -> Value {
    let spec = trace.spec;
    let mut steps = Vec::new();
    if let Some(s) = &trace.first {
        steps.push(step_json("first", spec.k1(), s));
    }
    if let Some(s) = &trace.second {
        steps.push(step_json("second", spec.k3(), s));
    }
    json!({
        "schema_version": SCHEMA_VERSION,
        "spec": [spec.k1(), spec.k2(), spec.k3()],
        "sigma": trace.sigma.to_string(),
        "rho": trace.rho.to_string(),
        "rho_rc": trace.rho_rc.to_string(),
        "pi_rc": trace.pi_rc.to_string(),
        "pi": trace.pi.to_string(),
        "steps": steps,
    })
}

pub fn write_json_line(out: &mut dyn Write, value: &Value) -> LabResult<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}
