//! Shared fixtures for the benchmark suite.

use flagvar_core::conjugacy::{witness_curve, find_perturbation_pairs, Condition5Mode};
use flagvar_core::{FlagSpace, PerturbationPair, VariationCurve};

/// The smallest projective flag with its canonical pair and witness curve.
pub fn cp3_fixture() -> (FlagSpace, PerturbationPair, VariationCurve) {
    let flag = FlagSpace::projective_space(1).expect("projective flag");
    let alpha = flag
        .algebra()
        .root_system()
        .parse_label("a11")
        .expect("root");
    let pair = find_perturbation_pairs(&flag, &alpha, Condition5Mode::Symmetric)
        .expect("pairs")
        .remove(0);
    let q0 = witness_curve(&flag, &pair, 1.0, 1.0).expect("witness curve");
    (flag, pair, q0)
}
