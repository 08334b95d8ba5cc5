//! Plain-text cache for reliability tables so expensive genie runs are
//! done once per (sigma, N, r, trials, seed) and reused byte-identically.
//!
//! Format: one header line
//!     relcache-v1 <N> <r> <sigma> <method> <trials> <seed>
//! followed by r lines of N decimal scores each.

use std::path::Path;

use polarlat_core::reliability::ReliabilityTable;

pub const FORMAT_VERSION: &str = "relcache-v1";

pub fn to_string(table: &ReliabilityTable) -> String {
    let mut out = format!(
        "{FORMAT_VERSION} {} {} {} {} {} {}\n",
        table.n, table.r, table.sigma, table.method, table.trials, table.seed
    );
    for row in &table.scores {
        let line: Vec<String> = row.iter().map(|s| format!("{s}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn save(table: &ReliabilityTable, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, to_string(table))
}

/// Parse a cache file, validating every header field against the request.
/// Any mismatch is refused: a cache is only valid for the exact run that
/// produced it.
pub fn load(
    path: &Path,
    n: usize,
    r: usize,
    sigma: f64,
    trials: u64,
    seed: u64,
) -> Result<ReliabilityTable, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text, n, r, sigma, trials, seed).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse(
    text: &str,
    n: usize,
    r: usize,
    sigma: f64,
    trials: u64,
    seed: u64,
) -> Result<ReliabilityTable, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty cache file")?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 7 {
        return Err(format!("malformed header: {header:?}"));
    }
    if fields[0] != FORMAT_VERSION {
        return Err(format!("unsupported format {:?}, expected {FORMAT_VERSION}", fields[0]));
    }
    let h_n: usize = fields[1].parse().map_err(|_| "bad N field")?;
    let h_r: usize = fields[2].parse().map_err(|_| "bad r field")?;
    let h_sigma: f64 = fields[3].parse().map_err(|_| "bad sigma field")?;
    let h_method = fields[4].to_string();
    let h_trials: u64 = fields[5].parse().map_err(|_| "bad trials field")?;
    let h_seed: u64 = fields[6].parse().map_err(|_| "bad seed field")?;
    if h_n != n || h_r != r || h_sigma != sigma || h_trials != trials || h_seed != seed {
        return Err(format!(
            "cache header (N={h_n}, r={h_r}, sigma={h_sigma}, trials={h_trials}, seed={h_seed}) \
             does not match the request (N={n}, r={r}, sigma={sigma}, trials={trials}, seed={seed})"
        ));
    }
    let mut scores = Vec::with_capacity(r);
    for level in 1..=r {
        let line = lines.next().ok_or_else(|| format!("missing score row for level {level}"))?;
        let row: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse).collect();
        let row = row.map_err(|_| format!("non-numeric score in level {level} row"))?;
        if row.len() != n {
            return Err(format!("level {level} row has {} scores, expected {n}", row.len()));
        }
        scores.push(row);
    }
    Ok(ReliabilityTable { n, r, sigma, method: h_method, trials, seed, scores })
}
