//! Exact minimum-distance and minimal-vector counts on the N=16 reference
//! profile, for a polar lattice and six precoded variants. The polar count
//! matches the independently published value for this construction; the
//! precoded counts are pinned regression values, each verified by a second
//! standalone exact-membership implementation.

use polarlat_core::analysis::{lattice_min_vectors, multilevel_dmin_of_spec};
use polarlat_core::lattice::{build_generator, pac_generator};
use polarlat_core::profile::{ConvolutionProfile, RateProfile};
use polarlat_core::LatticeSpec;

fn reference_profile() -> RateProfile {
    RateProfile::new(
        16,
        vec![vec![8, 12, 14, 15, 16], vec![4, 6, 7, 8, 12, 14, 15, 16]],
    )
    .unwrap()
}

fn pac_spec(taps: &[usize]) -> LatticeSpec {
    let profile = reference_profile();
    let conv = ConvolutionProfile::Taps(taps.to_vec());
    pac_generator(&conv, &profile).unwrap()
}

#[test]
fn polar_reference_distance() {
    let spec = build_generator(&reference_profile());
    let rep = lattice_min_vectors(&spec).unwrap();
    assert_eq!(rep.d2_min, 8);
    assert_eq!(rep.n_min, 128);
}

#[test]
fn precoded_reference_distances() {
    let cases: &[(&[usize], u64)] = &[
        (&[1, 4], 56),
        (&[2, 4], 88),
        (&[3, 4], 64),
        (&[1, 2, 4], 36),
        (&[1, 3, 4], 44),
        (&[2, 3, 4], 48),
    ];
    for &(taps, want) in cases {
        let spec = pac_spec(taps);
        let rep = lattice_min_vectors(&spec).unwrap();
        assert_eq!(rep.d2_min, 8, "taps {taps:?}");
        assert_eq!(rep.n_min, want, "taps {taps:?}");
    }
}

#[test]
fn precoding_never_hurts_dmin_here() {
    let polar = multilevel_dmin_of_spec(&build_generator(&reference_profile())).unwrap();
    for taps in [&[1usize, 4][..], &[2, 4], &[3, 4], &[1, 2, 4], &[1, 3, 4], &[2, 3, 4]] {
        let d = multilevel_dmin_of_spec(&pac_spec(taps)).unwrap();
        assert!(d >= polar, "taps {taps:?}: {d} < {polar}");
    }
}
