//! Worker-pool execution and output serialization. Every parallel path
//! reproduces the serial aggregation exactly — chunk boundaries and batch
//! sizes are fixed constants, so the worker count never changes a result.

use rayon::prelude::*;
use rayon::ThreadPool;
use serde::Serialize;

use polarlat_core::decode::DecoderConfig;
use polarlat_core::lattice::{LatticeKind, LatticeSpec};
use polarlat_core::reliability::{
    estimate_reliabilities_with, genie_error_counts, ReliabilityTable,
};
use polarlat_core::sim::{run_chunk, run_point_with, SimRecord, StopRule, CHUNK};
use polarlat_core::Error;

/// Chunks evaluated per early-stop check. Fixed: it shapes the trial
/// count, so it must not track the worker count.
pub const BATCH_CHUNKS: u64 = 8;

pub fn make_pool(workers: usize) -> Result<ThreadPool, String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| format!("thread pool: {e}"))
}

/// One operating point with trial chunks spread over the pool. The chunk
/// tallies are collected in submission order and merged by integer
/// addition, matching `run_point` trial for trial.
pub fn run_point_parallel(
    spec: &LatticeSpec,
    sigma: f64,
    config: &DecoderConfig,
    seed: u64,
    point_index: u64,
    stop: StopRule,
    pool: &ThreadPool,
) -> Result<SimRecord, Error> {
    run_point_with(spec, sigma, seed, point_index, stop, BATCH_CHUNKS, |ranges| {
        pool.install(|| {
            ranges
                .par_iter()
                .map(|rg| run_chunk(spec, sigma, config, seed, point_index, rg.clone()))
                .collect()
        })
    })
}

pub fn sweep_parallel(
    spec: &LatticeSpec,
    sigmas: &[f64],
    config: &DecoderConfig,
    seed: u64,
    stop: StopRule,
    pool: &ThreadPool,
) -> Result<Vec<SimRecord>, Error> {
    if sigmas.is_empty() {
        return Err(Error::EmptyGrid);
    }
    sigmas
        .iter()
        .enumerate()
        .map(|(i, &s)| run_point_parallel(spec, s, config, seed, i as u64, stop, pool))
        .collect()
}

/// Genie reliability estimation with trials split over the pool. Counts
/// over disjoint ranges add commutatively, so the split is invisible.
pub fn estimate_reliabilities_parallel(
    sigma: f64,
    n: usize,
    r: usize,
    trials: u64,
    seed: u64,
    pool: &ThreadPool,
) -> Result<ReliabilityTable, Error> {
    estimate_reliabilities_with(sigma, n, r, trials, seed, |level, range| {
        let ranges: Vec<std::ops::Range<u64>> = (range.start..range.end)
            .step_by(CHUNK as usize)
            .map(|lo| lo..(lo + CHUNK).min(range.end))
            .collect();
        pool.install(|| {
            ranges
                .par_iter()
                .map(|rg| genie_error_counts(sigma, n, level, seed, rg.clone()))
                .reduce(
                    || vec![0u32; n],
                    |mut acc, counts| {
                        for (a, c) in acc.iter_mut().zip(&counts) {
                            *a += c;
                        }
                        acc
                    },
                )
        })
    })
}

pub fn kind_str(kind: LatticeKind) -> &'static str {
    match kind {
        LatticeKind::Polar => "polar",
        LatticeKind::Pac => "pac",
    }
}

/// CSV column header for a lattice with r coded levels. Stable; columns
/// are only ever appended.
pub fn csv_header(r: usize) -> String {
    let mut cols = vec![
        "spec_hash".to_string(),
        "kind".into(),
        "N".into(),
        "r".into(),
        "decoder".into(),
        "list_size".into(),
        "sigma".into(),
        "nvnr_db".into(),
        "trials".into(),
        "errors".into(),
        "p_e".into(),
        "ci_low".into(),
        "ci_high".into(),
    ];
    for l in 1..=r {
        cols.push(format!("level{l}_errors"));
    }
    cols.push("laststage_errors".into());
    cols.push("seed".into());
    cols.join(",")
}

pub fn csv_line(
    spec_hash: &str,
    kind: LatticeKind,
    n: usize,
    r: usize,
    decoder: &DecoderConfig,
    rec: &SimRecord,
) -> String {
    let mut cols = vec![
        spec_hash.to_string(),
        kind_str(kind).into(),
        n.to_string(),
        r.to_string(),
        decoder.name().into(),
        decoder.list_size().to_string(),
        rec.sigma.to_string(),
        rec.nvnr_db.to_string(),
        rec.trials.to_string(),
        rec.errors.to_string(),
        rec.p_e.to_string(),
        rec.ci_low.to_string(),
        rec.ci_high.to_string(),
    ];
    for e in &rec.level_errors {
        cols.push(e.to_string());
    }
    cols.push(rec.seed.to_string());
    cols.join(",")
}

pub fn records_to_csv(
    spec_hash: &str,
    kind: LatticeKind,
    n: usize,
    r: usize,
    decoder: &DecoderConfig,
    records: &[SimRecord],
) -> String {
    let mut out = csv_header(r);
    out.push('\n');
    for rec in records {
        out.push_str(&csv_line(spec_hash, kind, n, r, decoder, rec));
        out.push('\n');
    }
    out
}

/// JSON mirror of one CSV row, plus fields CSV cannot carry.
#[derive(Debug, Serialize)]
pub struct JsonRecord<'a> {
    pub tool_version: &'a str,
    pub spec_hash: &'a str,
    pub kind: &'a str,
    pub n: usize,
    pub r: usize,
    pub decoder: &'a str,
    pub list_size: usize,
    pub sigma: f64,
    pub nvnr_db: f64,
    pub trials: u64,
    pub errors: u64,
    pub p_e: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub level_errors: &'a [u64],
    pub seed: u64,
    pub point_index: u64,
    pub stopped_early: bool,
}

pub fn records_to_json(
    spec_hash: &str,
    kind: LatticeKind,
    n: usize,
    r: usize,
    decoder: &DecoderConfig,
    records: &[SimRecord],
) -> String {
    let rows: Vec<JsonRecord> = records
        .iter()
        .map(|rec| JsonRecord {
            tool_version: env!("CARGO_PKG_VERSION"),
            spec_hash,
            kind: kind_str(kind),
            n,
            r,
            decoder: decoder.name(),
            list_size: decoder.list_size(),
            sigma: rec.sigma,
            nvnr_db: rec.nvnr_db,
            trials: rec.trials,
            errors: rec.errors,
            p_e: rec.p_e,
            ci_low: rec.ci_low,
            ci_high: rec.ci_high,
            level_errors: &rec.level_errors,
            seed: rec.seed,
            point_index: rec.point_index,
            stopped_early: rec.stopped_early,
        })
        .collect();
    serde_json::to_string_pretty(&rows).expect("record serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use polarlat_core::lattice::build_generator;
    use polarlat_core::profile::RateProfile;
    use polarlat_core::sim::run_point;

    fn spec() -> LatticeSpec {
        build_generator(&RateProfile::new(4, vec![vec![4], vec![2, 3, 4]]).unwrap())
    }

    #[test]
    fn parallel_matches_serial_exactly() {
        let spec = spec();
        let cfg = DecoderConfig::Sc;
        let stop = StopRule::until_errors(5 * CHUNK, 40);
        let serial = {
            // serial baseline must use the same batch size as the pool path
            run_point_with(&spec, 0.45, 77, 0, stop, BATCH_CHUNKS, |ranges| {
                ranges
                    .iter()
                    .map(|rg| run_chunk(&spec, 0.45, &cfg, 77, 0, rg.clone()))
                    .collect()
            })
            .unwrap()
        };
        for workers in [1, 3, 8] {
            let pool = make_pool(workers).unwrap();
            let par = run_point_parallel(&spec, 0.45, &cfg, 77, 0, stop, &pool).unwrap();
            assert_eq!(serial, par, "workers={workers}");
        }
    }

    #[test]
    fn serial_without_early_stop_is_batch_independent() {
        let spec = spec();
        let cfg = DecoderConfig::Sc;
        let stop = StopRule::fixed(3 * CHUNK);
        let a = run_point(&spec, 0.4, &cfg, 5, 0, stop).unwrap();
        let pool = make_pool(4).unwrap();
        let b = run_point_parallel(&spec, 0.4, &cfg, 5, 0, stop, &pool).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parallel_reliability_matches_serial() {
        use polarlat_core::reliability::estimate_reliabilities;
        let serial = estimate_reliabilities(0.5, 8, 2, 2048, 3).unwrap();
        for workers in [1, 4] {
            let pool = make_pool(workers).unwrap();
            let par = estimate_reliabilities_parallel(0.5, 8, 2, 2048, 3, &pool).unwrap();
            assert_eq!(serial, par, "workers={workers}");
        }
    }

    #[test]
    fn csv_shape() {
        let spec = spec();
        let cfg = DecoderConfig::Sc;
        let rec = run_point(&spec, 0.4, &cfg, 5, 0, StopRule::fixed(CHUNK)).unwrap();
        let text = records_to_csv("abc", spec.kind(), 4, 2, &cfg, &[rec]);
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert_eq!(
            header,
            "spec_hash,kind,N,r,decoder,list_size,sigma,nvnr_db,trials,errors,p_e,ci_low,ci_high,level1_errors,level2_errors,laststage_errors,seed"
        );
        let row = lines.next().unwrap();
        assert_eq!(row.split(',').count(), header.split(',').count());
        assert!(row.starts_with("abc,polar,4,2,sc,1,0.4,"));
    }
}
