//! Geodesic-vector and equigeodesic-vector criteria, and the energy of
//! homogeneous curves.

use crate::algebra::LieElement;
use crate::error::{Error, Result};
use crate::flag::{FlagSpace, InvariantMetric, MVector};

/// Default tolerance on Killing-normalized residuals.
pub const GEODESIC_TOL: f64 = 1e-10;

/// A homogeneous curve t ↦ exp(tX)·o on [0, a].
#[derive(Debug, Clone)]
pub struct HomogeneousCurve {
    /// Candidate geodesic vector.
    pub x: MVector,
    /// Right endpoint of the parameter interval.
    pub a: f64,
}

impl HomogeneousCurve {
    /// Build a curve; the endpoint must be positive.
    pub fn new(x: MVector, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Usage(format!("curve endpoint must be positive, got {a}")));
        }
        Ok(HomogeneousCurve { x, a })
    }
}

/// Whether X generates a geodesic for the metric Λ:
/// B_Λ(X_𝔪, [X, Z]_𝔪) = 0 for every Z in the tangent basis.
///
/// X may have an isotropy part; it is projected where the criterion requires.
pub fn is_geodesic_vector(
    flag: &FlagSpace,
    metric: &InvariantMetric,
    x: &LieElement,
    tol: f64,
) -> Result<bool> {
    Ok(max_geodesic_residual(flag, metric, x)? < tol)
}

/// Largest residual |B_Λ(X_𝔪, [X, Z]_𝔪)| over the tangent basis.
pub fn max_geodesic_residual(
    flag: &FlagSpace,
    metric: &InvariantMetric,
    x: &LieElement,
) -> Result<f64> {
    let alg = flag.algebra();
    let xm = flag.project_m(x);
    let mut worst = 0.0f64;
    for &idx in flag.m_indices() {
        let z = alg.basis_element(idx);
        let br = alg.bracket(x, &z)?;
        let val = flag.metric_product(metric, &xm, &flag.project_m(&br));
        worst = worst.max(val.abs());
    }
    Ok(worst)
}

/// Whether X is geodesic for every invariant metric: [X, X_{𝔪_i}]_𝔪 = 0 for
/// each isotropy component (the criterion is linear in the metric weights, so
/// one bracket test per component is exhaustive).
pub fn is_equigeodesic_vector(flag: &FlagSpace, x: &MVector, tol: f64) -> Result<bool> {
    let alg = flag.algebra();
    let full = flag.embed(x);
    for comp in flag.components() {
        // Restriction of X to this component.
        let mut part = flag.zero_m();
        for (k, &(a, b)) in x.pairs().iter().enumerate() {
            if flag.component_of_m_slot(2 * k) == comp.index {
                part.pairs[k] = (a, b);
            }
        }
        let br = alg.bracket(&full, &flag.embed(&part))?;
        let m_norm = flag
            .m_indices()
            .iter()
            .map(|&i| br.coeffs()[i] * br.coeffs()[i])
            .sum::<f64>()
            .sqrt();
        if m_norm >= tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Energy of the homogeneous curve: E = 2a Σ_α λ_{σ(α)} (a_α² + b_α²).
pub fn curve_energy(flag: &FlagSpace, metric: &InvariantMetric, x: &MVector, a: f64) -> f64 {
    a * flag.metric_product(metric, x, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::flag::FlagSpace;
    use crate::roots::Family;

    fn c3_flag() -> FlagSpace {
        let alg = Algebra::shared(Family::C, 3).unwrap();
        let rs = alg.root_system().clone();
        let theta = [rs.parse_label("a23").unwrap(), rs.parse_label("a33").unwrap()];
        FlagSpace::new(alg, &theta).unwrap()
    }

    fn pseudo_vector(flag: &FlagSpace, seed: usize) -> MVector {
        let pairs = (0..flag.complement().len())
            .map(|k| {
                (
                    (((k + seed) * 97) % 41) as f64 / 41.0 - 0.5,
                    (((k + seed) * 61) % 43) as f64 / 43.0 - 0.5,
                )
            })
            .collect();
        MVector::from_pairs(pairs)
    }

    #[test]
    fn normal_metric_makes_every_tangent_vector_geodesic() {
        let flag = c3_flag();
        let normal = flag.normal_metric();
        for seed in 0..5 {
            let x = flag.embed(&pseudo_vector(&flag, seed));
            assert!(is_geodesic_vector(&flag, &normal, &x, GEODESIC_TOL).unwrap());
        }
    }

    #[test]
    fn single_root_vectors_are_equigeodesic() {
        let flag = c3_flag();
        let rs = flag.algebra().root_system();
        let a11 = flag.a_vector(&rs.parse_label("a11").unwrap()).unwrap();
        assert!(is_equigeodesic_vector(&flag, &a11, GEODESIC_TOL).unwrap());
        // Equigeodesic vectors are geodesic for arbitrary metrics.
        let metric = flag.metric(vec![0.7, 2.3]).unwrap();
        let x = flag.embed(&a11);
        assert!(is_geodesic_vector(&flag, &metric, &x, GEODESIC_TOL).unwrap());

        let su3 = FlagSpace::su3_maximal().unwrap();
        let a13 = su3
            .a_vector(&su3.algebra().root_system().parse_label("a13").unwrap())
            .unwrap();
        assert!(is_equigeodesic_vector(&su3, &a13, GEODESIC_TOL).unwrap());
    }

    #[test]
    fn mixed_vector_fails_for_generic_metric() {
        let flag = c3_flag();
        let rs = flag.algebra().root_system();
        let x = flag
            .a_vector(&rs.parse_label("a12").unwrap())
            .unwrap()
            .add(&flag.a_vector(&rs.parse_label("a11").unwrap()).unwrap());
        assert!(!is_equigeodesic_vector(&flag, &x, GEODESIC_TOL).unwrap());

        let metric = flag.metric(vec![1.0, 2.0]).unwrap();
        let full = flag.embed(&x);
        assert!(!is_geodesic_vector(&flag, &metric, &full, GEODESIC_TOL).unwrap());
        // The residual is carried by the A_12+/A_11 brackets; its size is the
        // structure constant m_{α12,α12+} = 1/√8 scaled by 2(λ₂ − λ₁).
        let resid = max_geodesic_residual(&flag, &metric, &full).unwrap();
        let expect = 2.0 / 8.0_f64.sqrt();
        assert!(
            (resid - expect).abs() < 1e-10,
            "residual {resid}, expected {expect}"
        );
    }

    #[test]
    fn equigeodesic_implies_geodesic_for_random_metrics() {
        let flag = c3_flag();
        let rs = flag.algebra().root_system();
        let x = flag.a_vector(&rs.parse_label("a11").unwrap()).unwrap();
        let full = flag.embed(&x);
        for k in 0..100 {
            let l1 = 0.1 + ((k * 467) % 100) as f64 / 25.0;
            let l2 = 0.1 + ((k * 331) % 100) as f64 / 25.0;
            let metric = flag.metric(vec![l1, l2]).unwrap();
            assert!(is_geodesic_vector(&flag, &metric, &full, GEODESIC_TOL).unwrap());
        }
    }

    #[test]
    fn energy_values() {
        let flag = c3_flag();
        let rs = flag.algebra().root_system();
        let a11 = rs.parse_label("a11").unwrap();
        let normal = flag.normal_metric();
        // Single unit coefficient: E = 2a.
        let u = flag.a_vector(&a11).unwrap();
        assert!((curve_energy(&flag, &normal, &u, 1.0) - 2.0).abs() < 1e-12);
        assert_eq!(curve_energy(&flag, &normal, &flag.zero_m(), 3.0), 0.0);
        // X = A_11 + S_11 under Λ = (λ₁, λ₂): E = 4aλ₂.
        let x = u.add(&flag.s_vector(&a11).unwrap());
        let metric = flag.metric(vec![0.4, 1.7]).unwrap();
        let a = 2.25;
        assert!((curve_energy(&flag, &metric, &x, a) - 4.0 * a * 1.7).abs() < 1e-12);
    }

    #[test]
    fn curve_requires_positive_endpoint() {
        let flag = c3_flag();
        assert!(HomogeneousCurve::new(flag.zero_m(), 0.0).is_err());
        assert!(HomogeneousCurve::new(flag.zero_m(), 1.0).is_ok());
    }
}
