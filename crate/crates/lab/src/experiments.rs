//! Sample sweeps shared by the CLI and the acceptance tests.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde_json::json;
use statrs::statistics::{Data, Median, OrderStatistics};

use permuton_lab_core::bwx::{InnerStrategy, PairingCache};
use permuton_lab_core::layers::{goodness, paths};
use permuton_lab_core::measure::{mu_w, rect_sup_distance, EmpiricalPermuton, Side, WRegionSpec};
use permuton_lab_core::sampler::{sample_with, SeededRng, ShapeDistribution, TargetSampler};
use permuton_lab_core::{ClassSpec, Permutation};

use crate::config::ExperimentConfig;
use crate::error::LabResult;
use crate::output::{for_each_ordered, trace_json, write_json_line, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub n: usize,
    pub sample: usize,
    pub seed: u64,
    pub stream: u64,
    /// `mu(W_eps)` for each configured epsilon, in order.
    pub w_both: Vec<f64>,
    pub rect_sup: f64,
    pub good: bool,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quartiles {
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
}

impl Quartiles {
    pub fn of(values: &[f64]) -> Self {
        let mut data = Data::new(values.to_vec());
        Self { q25: data.lower_quartile(), median: data.median(), q75: data.upper_quartile() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSummary {
    pub n: usize,
    pub samples: usize,
    pub w_both: Vec<Quartiles>,
    pub rect_sup: Quartiles,
    pub good_fraction: f64,
}

fn sampler_for(
    n: usize,
    spec: ClassSpec,
    n_bound: usize,
    cache_dir: Option<&Path>,
    strategy: InnerStrategy,
) -> LabResult<TargetSampler> {
    let dist = ShapeDistribution::load_or_build(n, spec.d(), n_bound, cache_dir)?;
    let cache = PairingCache::resolve(cache_dir.map(Path::to_path_buf));
    Ok(TargetSampler::with_parts(spec, dist, strategy, cache)?)
}

fn eps_label(e: f64) -> String {
    format!("{e}")
}

/// Runs the convergence sweep. Sample `s` of the `k`-th size uses stream
/// `k * samples + s`, so results do not depend on scheduling.
pub fn converge(
    cfg: &ExperimentConfig,
    strategy: InnerStrategy,
    records: Option<&mut dyn Write>,
    summary: Option<&mut dyn Write>,
) -> LabResult<Vec<ConvergenceSummary>> {
    cfg.validate()?;
    let mut rec_csv = records.map(csv::Writer::from_writer);
    if let Some(w) = rec_csv.as_mut() {
        let mut header =
            vec!["schema_version".to_string(), "n".into(), "sample".into(), "seed".into(), "stream".into()];
        header.extend(cfg.epsilons.iter().map(|&e| format!("w_both_{}", eps_label(e))));
        header.extend([format!("rect_sup_m{}", cfg.grid), "good".into(), "wall_ms".into()]);
        w.write_record(&header)?;
        w.flush()?;
    }
    let mut sum_csv = summary.map(csv::Writer::from_writer);
    if let Some(w) = sum_csv.as_mut() {
        let mut header = vec!["schema_version".to_string(), "n".into(), "samples".into()];
        for &e in &cfg.epsilons {
            for q in ["q25", "median", "q75"] {
                header.push(format!("w_both_{}_{q}", eps_label(e)));
            }
        }
        for q in ["q25", "median", "q75"] {
            header.push(format!("rect_sup_m{}_{q}", cfg.grid));
        }
        header.push("good_fraction".into());
        w.write_record(&header)?;
        w.flush()?;
    }

    let d = cfg.spec.d();
    let mut out = Vec::new();
    for (k, &n) in cfg.ns.iter().enumerate() {
        let sampler = sampler_for(n, cfg.spec, cfg.n_bound, cfg.cache_dir.as_deref(), strategy)?;
        let mut rows: Vec<ConvergenceRecord> = Vec::with_capacity(cfg.samples);
        for_each_ordered(
            cfg.samples,
            |s| -> LabResult<ConvergenceRecord> {
                let start = Instant::now();
                let stream = (k * cfg.samples + s) as u64;
                let trace = sampler.sample_trace(&mut SeededRng::new(cfg.seed, stream))?;
                let mu = EmpiricalPermuton::new(trace.pi)?;
                let w_both = cfg.epsilons.iter().map(|&e| mu_w(&mu, WRegionSpec::new(e, Side::Both))).collect();
                let rect_sup = rect_sup_distance(&mu, cfg.grid);
                let good = goodness(&trace.sigma, cfg.good_epsilon, d)?.all_good();
                Ok(ConvergenceRecord {
                    n,
                    sample: s,
                    seed: cfg.seed,
                    stream,
                    w_both,
                    rect_sup,
                    good,
                    wall_ms: start.elapsed().as_secs_f64() * 1e3,
                })
            },
            |_, r| {
                let r = r?;
                if let Some(w) = rec_csv.as_mut() {
                    let mut row = vec![
                        SCHEMA_VERSION.to_string(),
                        r.n.to_string(),
                        r.sample.to_string(),
                        r.seed.to_string(),
                        r.stream.to_string(),
                    ];
                    row.extend(r.w_both.iter().map(|x| x.to_string()));
                    row.extend([r.rect_sup.to_string(), u8::from(r.good).to_string(), format!("{:.3}", r.wall_ms)]);
                    w.write_record(&row)?;
                    w.flush()?;
                }
                rows.push(r);
                Ok(())
            },
        )?;
        let col = |j: usize| rows.iter().map(|r| r.w_both[j]).collect::<Vec<_>>();
        let s = ConvergenceSummary {
            n,
            samples: rows.len(),
            w_both: (0..cfg.epsilons.len()).map(|j| Quartiles::of(&col(j))).collect(),
            rect_sup: Quartiles::of(&rows.iter().map(|r| r.rect_sup).collect::<Vec<_>>()),
            good_fraction: rows.iter().filter(|r| r.good).count() as f64 / rows.len() as f64,
        };
        if let Some(w) = sum_csv.as_mut() {
            let mut row = vec![SCHEMA_VERSION.to_string(), n.to_string(), s.samples.to_string()];
            for q in s.w_both.iter().chain([&s.rect_sup]) {
                row.extend([q.q25.to_string(), q.median.to_string(), q.q75.to_string()]);
            }
            row.push(s.good_fraction.to_string());
            w.write_record(&row)?;
            w.flush()?;
        }
        out.push(s);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoodnessRow {
    pub n: usize,
    pub seed: u64,
    pub stream: u64,
    pub epsilon: f64,
    pub flags: [bool; 5],
}

impl GoodnessRow {
    pub fn all_good(&self) -> bool {
        self.flags.iter().all(|&f| f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoodnessSweep<'a> {
    pub ns: &'a [usize],
    pub d: usize,
    pub samples: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub n_bound: usize,
    pub cache_dir: Option<&'a Path>,
}

/// Goodness of uniform samples from `Av_n(I_{d+1})`; returns the fraction
/// of good samples per `n`. Streams are numbered as in [`converge`].
pub fn goodness_sweep(
    sweep: GoodnessSweep<'_>,
    rows_out: Option<&mut dyn Write>,
    mut paths_out: Option<&mut dyn Write>,
) -> LabResult<Vec<(usize, f64)>> {
    let mut csv_out = rows_out.map(csv::Writer::from_writer);
    if let Some(w) = csv_out.as_mut() {
        w.write_record(["schema_version", "n", "seed", "stream", "eps", "c1", "c2", "c3", "c4", "c5", "all_good"])?;
        w.flush()?;
    }
    let mut fractions = Vec::new();
    for (k, &n) in sweep.ns.iter().enumerate() {
        let dist = ShapeDistribution::load_or_build(n, sweep.d, sweep.n_bound, sweep.cache_dir)?;
        let mut good = 0usize;
        for_each_ordered(
            sweep.samples,
            |s| -> LabResult<(GoodnessRow, Permutation)> {
                let stream = (k * sweep.samples + s) as u64;
                let sigma = sample_with(&dist, &mut SeededRng::new(sweep.seed, stream));
                let report = goodness(&sigma, sweep.epsilon, sweep.d)?;
                let row = GoodnessRow { n, seed: sweep.seed, stream, epsilon: sweep.epsilon, flags: report.flags };
                Ok((row, sigma))
            },
            |_, r| {
                let (row, sigma) = r?;
                good += usize::from(row.all_good());
                if let Some(w) = csv_out.as_mut() {
                    let mut rec = vec![
                        SCHEMA_VERSION.to_string(),
                        row.n.to_string(),
                        row.seed.to_string(),
                        row.stream.to_string(),
                        row.epsilon.to_string(),
                    ];
                    rec.extend(row.flags.iter().map(|&f| u8::from(f).to_string()));
                    rec.push(u8::from(row.all_good()).to_string());
                    w.write_record(&rec)?;
                    w.flush()?;
                }
                if let Some(out) = paths_out.as_deref_mut() {
                    let fam = paths(&sigma, sweep.d)?;
                    let value = json!({
                        "schema_version": SCHEMA_VERSION,
                        "n": row.n,
                        "seed": row.seed,
                        "stream": row.stream,
                        "paths": fam.paths(),
                    });
                    write_json_line(out, &value)?;
                }
                Ok(())
            },
        )?;
        fractions.push((n, good as f64 / sweep.samples as f64));
    }
    Ok(fractions)
}

/// Draws `samples` permutations of the target class and writes one JSONL
/// object per draw; with `trace` also the full pipeline trace.
#[allow(clippy::too_many_arguments)]
pub fn sample_batch(
    n: usize,
    spec: ClassSpec,
    samples: usize,
    seed: u64,
    strategy: InnerStrategy,
    n_bound: usize,
    cache_dir: Option<&Path>,
    out: &mut dyn Write,
    mut trace: Option<&mut dyn Write>,
) -> LabResult<()> {
    let sampler = sampler_for(n, spec, n_bound, cache_dir, strategy)?;
    for_each_ordered(
        samples,
        |s| sampler.sample_trace(&mut SeededRng::new(seed, s as u64)),
        |s, t| {
            let t = t?;
            let value = json!({
                "schema_version": SCHEMA_VERSION,
                "n": n,
                "spec": [spec.k1(), spec.k2(), spec.k3()],
                "seed": seed,
                "stream": s,
                "perm": t.pi.to_string(),
            });
            write_json_line(out, &value)?;
            if let Some(tr) = trace.as_deref_mut() {
                write_json_line(tr, &trace_json(&t))?;
            }
            Ok(())
        },
    )
}

/// A permutation to measure plus where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureInput {
    pub perm: Permutation,
    pub seed: Option<u64>,
    pub stream: Option<u64>,
}

/// Reads the JSONL written by [`sample_batch`].
pub fn read_sample_lines(text: &str) -> LabResult<Vec<MeasureInput>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let v: serde_json::Value = serde_json::from_str(line)?;
            let perm = v["perm"]
                .as_str()
                .ok_or_else(|| crate::error::LabError::Usage(format!("no perm field in {line:?}")))?
                .parse()?;
            Ok(MeasureInput { perm, seed: v["seed"].as_u64(), stream: v["stream"].as_u64() })
        })
        .collect()
}

pub fn measure_rows(inputs: &[MeasureInput], epsilons: &[f64], grid: usize, out: &mut dyn Write) -> LabResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "schema_version".to_string(),
        "n".into(),
        "seed".into(),
        "stream".into(),
        "epsilon".into(),
        "w_plus".into(),
        "w_minus".into(),
        "w_both".into(),
        format!("rect_sup_m{grid}"),
    ])?;
    w.flush()?;
    let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
    for_each_ordered(
        inputs.len(),
        |i| -> LabResult<Vec<Vec<String>>> {
            let input = &inputs[i];
            let mu = EmpiricalPermuton::new(input.perm.clone())?;
            let sup = rect_sup_distance(&mu, grid);
            Ok(epsilons
                .iter()
                .map(|&e| {
                    let plus = mu_w(&mu, WRegionSpec::new(e, Side::Plus));
                    let minus = mu_w(&mu, WRegionSpec::new(e, Side::Minus));
                    vec![
                        SCHEMA_VERSION.to_string(),
                        mu.n().to_string(),
                        opt(input.seed),
                        opt(input.stream),
                        e.to_string(),
                        plus.to_string(),
                        minus.to_string(),
                        (plus + minus).to_string(),
                        sup.to_string(),
                    ]
                })
                .collect())
        },
        |_, rows| {
            for row in rows? {
                w.write_record(&row)?;
            }
            w.flush()?;
            Ok(())
        },
    )
}
