//! Run configuration: a single JSON file with strict unknown-field
//! rejection. Every seed lives here; nothing is taken from the clock or
//! the environment.

use serde::{Deserialize, Serialize};

use polarlat_core::decode::DecoderConfig;
use polarlat_core::lattice::LatticeSpec;
use polarlat_core::profile::{ConvolutionProfile, RateProfile};
use polarlat_core::reliability::SelectPolicy;

use crate::specfile::SpecFile;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub lattice: LatticeBlock,
    #[serde(default)]
    pub channel: Option<ChannelBlock>,
    #[serde(default)]
    pub decoder: Option<DecoderBlock>,
    #[serde(default)]
    pub sim: Option<SimBlock>,
    #[serde(default)]
    pub output: Option<OutputBlock>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeBlock {
    pub n: usize,
    pub r: usize,
    /// "polar" or "pac".
    #[serde(default = "default_kind")]
    pub kind: String,
    /// Profile source 1: explicit nested 1-based index sets.
    #[serde(default)]
    pub sets: Option<Vec<Vec<usize>>>,
    /// Profile source 2: derive sets from genie reliability estimates.
    #[serde(default)]
    pub derive: Option<DeriveBlock>,
    /// Profile source 3: a previously written spec file.
    #[serde(default)]
    pub spec_file: Option<String>,
    /// Expected content hash of `spec_file`; mismatch aborts the run.
    #[serde(default)]
    pub spec_hash: Option<String>,
    /// Convolution taps for kind = "pac".
    #[serde(default)]
    pub taps: Option<Vec<usize>>,
    /// Random dense convolution for kind = "pac" (alternative to taps).
    #[serde(default)]
    pub conv_seed: Option<u64>,
    #[serde(default)]
    pub conv_density: Option<f64>,
}

fn default_kind() -> String {
    "polar".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeriveBlock {
    pub sigma: f64,
    pub trials: u64,
    pub seed: u64,
    /// Per-level information-set sizes K_1 <= ... <= K_r.
    #[serde(default)]
    pub targets: Option<Vec<usize>>,
    /// Per-level score thresholds (alternative to targets).
    #[serde(default)]
    pub thresholds: Option<Vec<f64>>,
    /// Optional reliability-cache path; written on miss, validated on hit.
    #[serde(default)]
    pub cache: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelBlock {
    pub sigmas: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderBlock {
    /// "sc", "scl", or "pac-scl".
    pub kind: String,
    #[serde(default = "default_list")]
    pub list_size: usize,
}

fn default_list() -> usize {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimBlock {
    pub trials: u64,
    pub seed: u64,
    /// Stop a grid point early once this many word errors are seen
    /// (0 = never stop early).
    #[serde(default)]
    pub stop_at_errors: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    /// Basename for files written under --out.
    #[serde(default)]
    pub stem: Option<String>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Structural checks that do not require building anything.
    pub fn validate(&self) -> Result<(), String> {
        let l = &self.lattice;
        let sources =
            l.sets.is_some() as u8 + l.derive.is_some() as u8 + l.spec_file.is_some() as u8;
        if sources != 1 {
            return Err(format!(
                "lattice block must give exactly one profile source (sets, derive, or spec_file); got {sources}"
            ));
        }
        match l.kind.as_str() {
            "polar" => {
                if l.taps.is_some() || l.conv_seed.is_some() {
                    return Err("polar lattice must not carry convolution fields".into());
                }
            }
            "pac" => {
                let conv_sources = l.taps.is_some() as u8 + l.conv_seed.is_some() as u8;
                if l.spec_file.is_none() && conv_sources != 1 {
                    return Err("pac lattice needs exactly one of taps, conv_seed".into());
                }
            }
            k => return Err(format!("unknown lattice kind {k:?}")),
        }
        if let Some(d) = &l.derive {
            let policy_sources = d.targets.is_some() as u8 + d.thresholds.is_some() as u8;
            if policy_sources != 1 {
                return Err("derive block needs exactly one of targets, thresholds".into());
            }
            if d.sigma <= 0.0 {
                return Err("derive.sigma must be positive".into());
            }
        }
        if let Some(ch) = &self.channel {
            if ch.sigmas.is_empty() {
                return Err("channel.sigmas must be nonempty".into());
            }
            if ch.sigmas.iter().any(|&s| s.is_nan() || s <= 0.0) {
                return Err("channel.sigmas must all be positive".into());
            }
        }
        if let Some(d) = &self.decoder {
            match d.kind.as_str() {
                "sc" | "scl" | "pac-scl" => {}
                k => return Err(format!("unknown decoder kind {k:?}")),
            }
            if d.list_size == 0 {
                return Err("decoder.list_size must be at least 1".into());
            }
        }
        if let Some(s) = &self.sim {
            if s.trials == 0 {
                return Err("sim.trials must be at least 1".into());
            }
        }
        Ok(())
    }

    pub fn stem(&self) -> &str {
        self.output
            .as_ref()
            .and_then(|o| o.stem.as_deref())
            .unwrap_or("run")
    }

    /// The convolution described by the lattice block, if kind is "pac".
    pub fn convolution(&self) -> Result<Option<ConvolutionProfile>, String> {
        let l = &self.lattice;
        match l.kind.as_str() {
            "polar" => Ok(None),
            "pac" => {
                if let Some(taps) = &l.taps {
                    ConvolutionProfile::taps(taps).map(Some).map_err(|e| e.to_string())
                } else if let Some(seed) = l.conv_seed {
                    let density = l.conv_density.unwrap_or(0.5);
                    Ok(Some(ConvolutionProfile::random(l.n, density, seed)))
                } else {
                    Err("pac lattice needs taps or conv_seed".into())
                }
            }
            k => Err(format!("unknown lattice kind {k:?}")),
        }
    }

    pub fn select_policy(&self) -> Option<SelectPolicy> {
        let d = self.lattice.derive.as_ref()?;
        if let Some(t) = &d.targets {
            Some(SelectPolicy::Targets(t.clone()))
        } else {
            d.thresholds.clone().map(SelectPolicy::Thresholds)
        }
    }

    /// The decoder to run, wiring a pac-scl decoder to the spec's own
    /// convolution so decode and encode always agree.
    pub fn decoder(&self, spec: &LatticeSpec) -> Result<DecoderConfig, String> {
        let block = self.decoder.as_ref().ok_or("config has no decoder block")?;
        match block.kind.as_str() {
            "sc" => Ok(DecoderConfig::Sc),
            "scl" => DecoderConfig::scl(block.list_size).map_err(|e| e.to_string()),
            "pac-scl" => {
                let conv = spec
                    .conv()
                    .ok_or("pac-scl decoder requires a pac lattice")?
                    .clone();
                DecoderConfig::pac_scl(block.list_size, conv).map_err(|e| e.to_string())
            }
            k => Err(format!("unknown decoder kind {k:?}")),
        }
    }
}

/// Build the spec file record (not yet the generator) from a resolved
/// profile, carrying the convolution description verbatim.
pub fn spec_record(cfg: &RunConfig, profile: &RateProfile) -> Result<SpecFile, String> {
    match cfg.convolution()? {
        None => Ok(SpecFile::polar(profile)),
        Some(conv) => Ok(SpecFile::pac(profile, &conv, cfg.lattice.conv_seed)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal(extra: &str) -> String {
        format!(
            r#"{{"lattice": {{"n": 4, "r": 2, "sets": [[4], [2, 3, 4]]{extra}}}}}"#
        )
    }

    #[test]
    fn accepts_minimal_config() {
        let cfg: RunConfig = serde_json::from_str(&minimal("")).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.stem(), "run");
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = r#"{"lattice": {"n": 4, "r": 2, "sets": [[4],[2,3,4]]}, "bogus": 1}"#;
        assert!(serde_json::from_str::<RunConfig>(text).is_err());
        let text = r#"{"lattice": {"n": 4, "r": 2, "sets": [[4],[2,3,4]], "bogus": 1}}"#;
        assert!(serde_json::from_str::<RunConfig>(text).is_err());
    }

    #[test]
    fn rejects_two_profile_sources() {
        let text = r#"{"lattice": {"n": 4, "r": 2, "sets": [[4],[2,3,4]],
            "derive": {"sigma": 0.5, "trials": 1000, "seed": 1, "targets": [1, 3]}}}"#;
        let cfg: RunConfig = serde_json::from_str(text).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn rejects_polar_with_taps() {
        let cfg: RunConfig =
            serde_json::from_str(&minimal(r#", "taps": [1]"#)).unwrap();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn pac_needs_one_convolution_source() {
        let text = r#"{"lattice": {"n": 4, "r": 2, "kind": "pac", "sets": [[4],[2,3,4]]}}"#;
        let cfg: RunConfig = serde_json::from_str(text).unwrap();
        assert!(cfg.validate().is_err());
        let text = r#"{"lattice": {"n": 4, "r": 2, "kind": "pac", "sets": [[4],[2,3,4]], "taps": [1]}}"#;
        let cfg: RunConfig = serde_json::from_str(text).unwrap();
        cfg.validate().unwrap();
        assert!(cfg.convolution().unwrap().is_some());
    }
}
