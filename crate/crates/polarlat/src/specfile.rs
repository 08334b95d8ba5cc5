//! On-disk lattice description: a small JSON record whose SHA-256 content
//! hash labels every downstream artifact.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use polarlat_core::lattice::{build_generator, pac_generator, LatticeKind, LatticeSpec};
use polarlat_core::profile::{ConvolutionProfile, RateProfile};

/// Serialized lattice description. Field order is fixed by declaration
/// order so the canonical JSON (and therefore the hash) is stable.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub n: usize,
    pub r: usize,
    /// 1-based sorted index sets, innermost first.
    pub sets: Vec<Vec<usize>>,
    /// "polar" or "pac".
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub taps: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dense_t: Option<Vec<Vec<u8>>>,
    /// Seed for a randomly drawn convolution, recorded for provenance.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub conv_seed: Option<u64>,
}

impl SpecFile {
    pub fn polar(profile: &RateProfile) -> Self {
        SpecFile {
            n: profile.n(),
            r: profile.levels(),
            sets: profile.sets().to_vec(),
            kind: "polar".into(),
            taps: None,
            dense_t: None,
            conv_seed: None,
        }
    }

    pub fn pac(profile: &RateProfile, conv: &ConvolutionProfile, conv_seed: Option<u64>) -> Self {
        let (taps, dense_t) = match conv {
            ConvolutionProfile::Taps(t) => (Some(t.clone()), None),
            ConvolutionProfile::Dense(d) => (None, Some(d.clone())),
        };
        SpecFile {
            n: profile.n(),
            r: profile.levels(),
            sets: profile.sets().to_vec(),
            kind: "pac".into(),
            taps,
            dense_t,
            conv_seed,
        }
    }

    pub fn profile(&self) -> Result<RateProfile, polarlat_core::Error> {
        RateProfile::new(self.n, self.sets.clone())
    }

    pub fn convolution(&self) -> Result<Option<ConvolutionProfile>, String> {
        match (self.kind.as_str(), &self.taps, &self.dense_t) {
            ("polar", None, None) => Ok(None),
            ("pac", Some(t), None) => Ok(Some(ConvolutionProfile::Taps(t.clone()))),
            ("pac", None, Some(d)) => Ok(Some(ConvolutionProfile::Dense(d.clone()))),
            ("pac", None, None) => Err("pac spec needs taps or dense_t".into()),
            ("pac", Some(_), Some(_)) => Err("pac spec must give exactly one of taps, dense_t".into()),
            ("polar", _, _) => Err("polar spec must not carry a convolution".into()),
            (k, _, _) => Err(format!("unknown lattice kind {k:?}")),
        }
    }

    pub fn build(&self) -> Result<LatticeSpec, String> {
        let profile = self.profile().map_err(|e| e.to_string())?;
        match self.convolution()? {
            None => Ok(build_generator(&profile)),
            Some(conv) => pac_generator(&conv, &profile).map_err(|e| e.to_string()),
        }
    }

    pub fn kind(&self) -> Result<LatticeKind, String> {
        match self.kind.as_str() {
            "polar" => Ok(LatticeKind::Polar),
            "pac" => Ok(LatticeKind::Pac),
            k => Err(format!("unknown lattice kind {k:?}")),
        }
    }

    /// Canonical JSON (serde field order, no whitespace).
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("spec serialization cannot fail")
    }

    /// Hex SHA-256 of the canonical JSON.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.canonical_json().as_bytes());
        let out = h.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn save(&self, path: &std::path::Path) -> std::io::Result<()> {
        std::fs::write(path, self.canonical_json() + "\n")
    }

    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> SpecFile {
        let profile = RateProfile::new(4, vec![vec![4], vec![2, 3, 4]]).unwrap();
        SpecFile::polar(&profile)
    }

    #[test]
    fn hash_is_stable_and_content_sensitive() {
        let a = example();
        assert_eq!(a.hash(), example().hash());
        let mut b = example();
        b.sets[0] = vec![3];
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn round_trip_via_file() {
        let dir = std::env::temp_dir().join("polarlat-specfile-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("spec.json");
        let a = example();
        a.save(&path).unwrap();
        let b = SpecFile::load(&path).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pac_spec_builds() {
        let profile = RateProfile::new(4, vec![vec![4], vec![2, 3, 4]]).unwrap();
        let conv = ConvolutionProfile::Taps(vec![2, 3]);
        let sf = SpecFile::pac(&profile, &conv, None);
        let spec = sf.build().unwrap();
        assert_eq!(spec.kind(), LatticeKind::Pac);
    }

    #[test]
    fn rejects_ambiguous_convolution() {
        let mut sf = example();
        sf.kind = "pac".into();
        sf.taps = Some(vec![1]);
        sf.dense_t = Some(vec![vec![1, 0], vec![0, 1]]);
        assert!(sf.convolution().is_err());
    }
}
