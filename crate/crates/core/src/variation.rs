//! Adjoint transport along homogeneous curves and the variational calculus
//! built on it: energy of variations E(s), first variation E′(0), the index
//! form E″(0) with its bilinear polarization, and the perturbation-formula
//! evaluator comparing index forms across metric perturbations.
//!
//! Transport convention: Ad(exp −tX) := exp(t·ad X), matching the
//! right-invariant-field setup of the underlying variation formulas. The
//! defining-representation cross-check therefore conjugates by exp(tX) on
//! the left.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::algebra::{Algebra, CMat, LieElement};
use crate::error::{Error, Result};
use crate::flag::{FlagSpace, InvariantMetric, MVector};
use crate::geodesic::{curve_energy, is_geodesic_vector, GEODESIC_TOL};
use crate::linalg::{expm, SkewRotation};
use crate::quad::QuadratureConfig;
use crate::trigpoly::TrigPoly;

/// Agreement tolerance between the two transport paths.
pub const TRANSPORT_TOL: f64 = 1e-10;

/// Default truncation order of the exponential-differential series.
pub const SERIES_TERMS: usize = 30;

/// A variation generator: finitely many algebra directions, each with a
/// closed-form coefficient function. Derivatives are analytic.
#[derive(Debug, Clone)]
pub struct VariationCurve {
    terms: Vec<(LieElement, TrigPoly)>,
    derivs: Vec<TrigPoly>,
    a: f64,
}

impl VariationCurve {
    /// Build a curve on [0, a].
    pub fn new(terms: Vec<(LieElement, TrigPoly)>, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Usage(format!("domain endpoint must be positive, got {a}")));
        }
        if terms.is_empty() {
            return Err(Error::Usage("variation curve needs at least one term".into()));
        }
        let id = terms[0].0.id();
        if terms.iter().any(|(e, _)| e.id() != id) {
            return Err(Error::Usage("variation terms must share one algebra".into()));
        }
        let derivs = terms.iter().map(|(_, c)| c.derivative()).collect();
        Ok(VariationCurve { terms, derivs, a })
    }

    /// Right endpoint of the domain.
    pub fn domain_end(&self) -> f64 {
        self.a
    }

    /// The directions and coefficient functions.
    pub fn terms(&self) -> &[(LieElement, TrigPoly)] {
        &self.terms
    }

    /// q(t) as coefficients over the compact basis.
    pub fn eval_coeffs(&self, t: f64) -> DVector<f64> {
        let mut acc = DVector::zeros(self.terms[0].0.coeffs().len());
        for (el, c) in &self.terms {
            acc.axpy(c.eval(t), el.coeffs(), 1.0);
        }
        acc
    }

    /// q′(t) as coefficients over the compact basis.
    pub fn eval_derivative_coeffs(&self, t: f64) -> DVector<f64> {
        let mut acc = DVector::zeros(self.terms[0].0.coeffs().len());
        for ((el, _), dc) in self.terms.iter().zip(&self.derivs) {
            acc.axpy(dc.eval(t), el.coeffs(), 1.0);
        }
        acc
    }

    /// Largest deviation of the stored derivative from a centered difference
    /// over the sample grid (an O(h²) self-check).
    pub fn derivative_self_check(&self, samples: usize) -> f64 {
        let h = 1e-6 * self.a;
        let mut worst = 0.0f64;
        for k in 0..=samples {
            let t = self.a * k as f64 / samples as f64;
            let fd = (self.eval_coeffs(t + h) - self.eval_coeffs(t - h)) / (2.0 * h);
            worst = worst.max((fd - self.eval_derivative_coeffs(t)).norm());
        }
        worst
    }

    /// Properness of the variation along exp(tX): q(0) ∈ 𝔨_Θ and
    /// Ad(exp −aX)q(a) ∈ 𝔨_Θ.
    pub fn is_proper(&self, flag: &FlagSpace, x: &MVector, tol: f64) -> Result<bool> {
        let alg = flag.algebra();
        let q0 = alg.element(self.eval_coeffs(0.0))?;
        if flag.project_m(&q0).pairs().iter().any(|&(a, b)| a.abs() > tol || b.abs() > tol) {
            return Ok(false);
        }
        let transport = Transport::new(flag.algebra_arc(), &flag.embed(x))?;
        let qa = transport.apply_coeffs(self.a, &self.eval_coeffs(self.a));
        Ok(flag
            .m_indices()
            .iter()
            .all(|&i| qa[i].abs() <= tol))
    }
}

/// Adjoint transport exp(t·ad X) along a fixed X, evaluated through the
/// rotation-plane decomposition of ad X in a Killing-orthonormal frame.
#[derive(Debug, Clone)]
pub struct Transport {
    alg: Arc<Algebra>,
    x_mat: CMat,
    rot: SkewRotation,
    p: DMatrix<f64>,
    p_inv: DMatrix<f64>,
}

impl Transport {
    /// Prepare transport along X.
    pub fn new(alg: Arc<Algebra>, x: &LieElement) -> Result<Self> {
        let ad = alg.ad_matrix(x)?;
        let (p, p_inv) = killing_orthonormal_frame(&alg)?;
        let mut skew = &p * ad * &p_inv;
        // Clean the antisymmetrization roundoff before decomposing.
        let skew_t = skew.transpose();
        skew = (&skew - skew_t) * 0.5;
        let rot = SkewRotation::new(&skew)?;
        Ok(Transport {
            x_mat: alg.matrix_of(x),
            alg,
            rot,
            p,
            p_inv,
        })
    }

    /// exp(t·ad X) applied to a coefficient vector.
    pub fn apply_coeffs(&self, t: f64, v: &DVector<f64>) -> DVector<f64> {
        &self.p_inv * self.rot.apply(t, &(&self.p * v))
    }

    /// exp(t·ad X) applied to an element.
    pub fn apply(&self, t: f64, a: &LieElement) -> LieElement {
        self.alg
            .element(self.apply_coeffs(t, a.coeffs()))
            .expect("transport preserves the algebra")
    }

    /// Second path: conjugation exp(tX)·A·exp(−tX) in the defining
    /// representation, re-expanded over the compact basis.
    pub fn apply_via_conjugation(&self, t: f64, a: &LieElement) -> Result<LieElement> {
        let u = expm(&(&self.x_mat * nalgebra::Complex::new(t, 0.0)));
        let u_inv = expm(&(&self.x_mat * nalgebra::Complex::new(-t, 0.0)));
        let y = &u * self.alg.matrix_of(a) * u_inv;
        self.alg.element_from_matrix(&y)
    }

    /// Run both paths and fail on disagreement.
    pub fn apply_checked(&self, t: f64, a: &LieElement, tol: f64) -> Result<LieElement> {
        let fast = self.apply(t, a);
        let slow = self.apply_via_conjugation(t, a)?;
        let diff = fast.sub(&slow).coeff_norm();
        let scale = 1.0_f64.max(a.coeff_norm());
        if diff > tol * scale {
            return Err(Error::Internal(format!(
                "transport paths disagree by {diff:.3e} at t = {t}"
            )));
        }
        Ok(fast)
    }

    /// Rotation rates of ad X (one per invariant plane).
    pub fn rates(&self) -> &[f64] {
        self.rot.rates()
    }
}

/// Transport of A along the homogeneous curve generated by X, with both
/// evaluation paths compared at the stated tolerance.
pub fn transport(flag: &FlagSpace, x: &MVector, t: f64, a: &LieElement) -> Result<LieElement> {
    Transport::new(flag.algebra_arc(), &flag.embed(x))?.apply_checked(t, a, TRANSPORT_TOL)
}

/// P with P² = (the −Killing Gram) and its inverse. The A/S block is √2·Id;
/// the Cartan block uses a symmetric square root.
fn killing_orthonormal_frame(alg: &Algebra) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let dim = alg.dim();
    let ell = alg.root_system().rank();
    let n_as = dim - ell;
    let mut p = DMatrix::zeros(dim, dim);
    let mut p_inv = DMatrix::zeros(dim, dim);
    let s = 2.0_f64.sqrt();
    for i in 0..n_as {
        p[(i, i)] = s;
        p_inv[(i, i)] = 1.0 / s;
    }
    let block = alg
        .minus_killing_gram()
        .view((n_as, n_as), (ell, ell))
        .into_owned();
    let eig = nalgebra::SymmetricEigen::new(block);
    for a in 0..ell {
        for b in 0..ell {
            let mut root = 0.0;
            let mut inv_root = 0.0;
            for k in 0..ell {
                let lam = eig.eigenvalues[k];
                if lam <= 0.0 {
                    return Err(Error::Internal(
                        "Cartan Gram block lost positive definiteness".into(),
                    ));
                }
                let prod = eig.eigenvectors[(a, k)] * eig.eigenvectors[(b, k)];
                root += prod * lam.sqrt();
                inv_root += prod / lam.sqrt();
            }
            p[(n_as + a, n_as + b)] = root;
            p_inv[(n_as + a, n_as + b)] = inv_root;
        }
    }
    Ok((p, p_inv))
}

/// Energy of the varied curve f(s, t) = exp(s q(t))·exp(tX)·o.
///
/// Evaluates E(s) = E(γ) + ∫ B_Λ((Ad(exp −tX)C_s)_𝔪, (Ad(exp −tX)C_s)_𝔪 + 2X) dt
/// with C_s the exponential-differential series of s·q, truncated at
/// `SERIES_TERMS` terms with a tail check.
pub fn variation_energy(
    flag: &FlagSpace,
    metric: &InvariantMetric,
    x: &MVector,
    q: &VariationCurve,
    a: f64,
    s: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let alg = flag.algebra();
    let x_full = flag.embed(x);
    let transport = Transport::new(flag.algebra_arc(), &x_full)?;
    let base = curve_energy(flag, metric, x, a);

    let mut worst_tail = 0.0f64;
    let mut integral = 0.0;
    for (t, w) in quad.points(0.0, a) {
        let q_mat = alg.matrix_of(&alg.element(q.eval_coeffs(t))?);
        let dq_mat = alg.matrix_of(&alg.element(q.eval_derivative_coeffs(t))?);
        // C_s = Σ_{n≥0} s^{n+1} ad(q)ⁿ(q′) / (n+1)!.
        let mut u = dq_mat.clone();
        let mut c_s = &u * nalgebra::Complex::new(s, 0.0);
        let mut s_pow = s;
        let mut factorial = 1.0;
        let mut tail = 0.0;
        for n in 1..=SERIES_TERMS {
            u = &q_mat * &u - &u * &q_mat;
            s_pow *= s;
            factorial *= (n + 1) as f64;
            let coeff = s_pow / factorial;
            let term = &u * nalgebra::Complex::new(coeff, 0.0);
            tail = term.norm();
            c_s += term;
            if tail < 1e-16 * (1.0 + c_s.norm()) {
                tail = 0.0;
                break;
            }
        }
        worst_tail = worst_tail.max(tail / (1.0 + c_s.norm()));
        let c_el = alg.element_from_matrix(&c_s)?;
        let v = transport.apply_coeffs(t, c_el.coeffs());
        let b_vv = flag.metric_product_coeffs(metric, &v, &v);
        let b_vx = flag.metric_product_coeffs(metric, &v, x_full.coeffs());
        integral += w * (b_vv + 2.0 * b_vx);
    }
    if worst_tail > 1e-12 {
        return Err(Error::Accuracy(format!(
            "exponential-differential series tail {worst_tail:.3e} after {SERIES_TERMS} terms; \
             reduce |s|"
        )));
    }
    Ok(base + integral)
}

/// First variation E′(0) = 2 ∫ B_Λ((Ad(exp −tX)q′(t))_𝔪, X) dt.
pub fn first_variation(
    flag: &FlagSpace,
    metric: &InvariantMetric,
    x: &MVector,
    q: &VariationCurve,
    a: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let x_full = flag.embed(x);
    let transport = Transport::new(flag.algebra_arc(), &x_full)?;
    let mut acc = 0.0;
    for (t, w) in quad.points(0.0, a) {
        let v = transport.apply_coeffs(t, &q.eval_derivative_coeffs(t));
        acc += w * flag.metric_product_coeffs(metric, &v, x_full.coeffs());
    }
    Ok(2.0 * acc)
}

/// The index form I_Λ(q) = E″(0); X must be a geodesic vector for Λ.
pub fn index_form(
    flag: &FlagSpace,
    metric: &InvariantMetric,
    x: &MVector,
    q: &VariationCurve,
    a: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    index_bilinear(flag, metric, x, q, q, a, quad)
}

/// Symmetric bilinear polarization of the index form:
/// I(q₁, q₂) = ∫ B_Λ([q₁, q₂′]_𝔪 + [q₂, q₁′]_𝔪, X) dt
///           + 2 ∫ B_Λ((Ad(exp −tX)q₁′)_𝔪, (Ad(exp −tX)q₂′)_𝔪) dt.
pub fn index_bilinear(
    flag: &FlagSpace,
    metric: &InvariantMetric,
    x: &MVector,
    q1: &VariationCurve,
    q2: &VariationCurve,
    a: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let x_full = flag.embed(x);
    if !is_geodesic_vector(flag, metric, &x_full, GEODESIC_TOL)? {
        return Err(Error::Usage(
            "index form requires a geodesic vector for the supplied metric".into(),
        ));
    }
    let transport = Transport::new(flag.algebra_arc(), &x_full)?;
    index_bilinear_with(flag, metric, &transport, &x_full, q1, q2, a, quad)
}

/// Inner evaluator reusing a prepared transport (no geodesic re-check).
#[allow(clippy::too_many_arguments)]
pub(crate) fn index_bilinear_with(
    flag: &FlagSpace,
    metric: &InvariantMetric,
    transport: &Transport,
    x_full: &LieElement,
    q1: &VariationCurve,
    q2: &VariationCurve,
    a: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    let alg = flag.algebra();
    // Bracket pairings B_Λ([e_i, f_j]_𝔪, X) are t-independent; precompute.
    let n1 = q1.terms().len();
    let n2 = q2.terms().len();
    let mut c12 = DMatrix::zeros(n1, n2);
    let mut c21 = DMatrix::zeros(n2, n1);
    for (i, (e1, _)) in q1.terms().iter().enumerate() {
        for (j, (e2, _)) in q2.terms().iter().enumerate() {
            let br = alg.bracket(e1, e2)?;
            let v = flag.metric_product_coeffs(metric, br.coeffs(), x_full.coeffs());
            c12[(i, j)] = v;
            c21[(j, i)] = -v;
        }
    }
    let mut acc = 0.0;
    for (t, w) in quad.points(0.0, a) {
        // Coefficient values of the two curves and their derivatives.
        let mut bracket_part = 0.0;
        for (i, (_, ci)) in q1.terms().iter().enumerate() {
            for (j, (_, cj)) in q2.terms().iter().enumerate() {
                let q1_i = ci.eval(t);
                let dq2_j = q2.derivs[j].eval(t);
                let q2_j = cj.eval(t);
                let dq1_i = q1.derivs[i].eval(t);
                bracket_part += q1_i * dq2_j * c12[(i, j)] + q2_j * dq1_i * c21[(j, i)];
            }
        }
        let v1 = transport.apply_coeffs(t, &q1.eval_derivative_coeffs(t));
        let v2 = transport.apply_coeffs(t, &q2.eval_derivative_coeffs(t));
        acc += w * (bracket_part + 2.0 * flag.metric_product_coeffs(metric, &v1, &v2));
    }
    Ok(acc)
}

/// Index form under a perturbed metric through the comparison formula:
/// I_{Λ#}(q) = I_Λ(q) + 4 Σ_{σ∉𝒫} ξ_σ Σ_{α∈σ} ∫ (f̃_α² + g̃_α²) dt,
/// where f̃, g̃ are the 𝔪-frame coefficients of the transported derivative.
///
/// The caller's X must be geodesic for both metrics and subordinated to 𝒫;
/// the result is cross-checked against the direct evaluation under Λ#.
#[allow(clippy::too_many_arguments)]
pub fn perturbed_index(
    flag: &FlagSpace,
    metric: &InvariantMetric,
    protected: &[usize],
    xi: &[f64],
    x: &MVector,
    q: &VariationCurve,
    a: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    if !flag.is_subordinated(x, protected) {
        return Err(Error::Usage(
            "geodesic vector must be subordinated to the protected components".into(),
        ));
    }
    let perturbed = metric.perturb(protected, xi)?;
    let x_full = flag.embed(x);
    if !is_geodesic_vector(flag, metric, &x_full, GEODESIC_TOL)? {
        return Err(Error::Usage("X is not geodesic for the base metric".into()));
    }
    if !is_geodesic_vector(flag, &perturbed, &x_full, GEODESIC_TOL)? {
        return Err(Error::Usage("X is not geodesic for the perturbed metric".into()));
    }

    let transport = Transport::new(flag.algebra_arc(), &x_full)?;
    let base = index_bilinear_with(flag, metric, &transport, &x_full, q, q, a, quad)?;

    // Per-component integrals of the squared transported-derivative frame.
    let n_comps = flag.components().len();
    let mut comp_integrals = vec![0.0; n_comps];
    for (t, w) in quad.points(0.0, a) {
        let v = transport.apply_coeffs(t, &q.eval_derivative_coeffs(t));
        for (slot, &idx) in flag.m_indices().iter().enumerate() {
            comp_integrals[flag.component_of_m_slot(slot)] += w * v[idx] * v[idx];
        }
    }
    let correction: f64 = (0..n_comps)
        .filter(|c| !protected.contains(c))
        .map(|c| 4.0 * xi[c] * comp_integrals[c])
        .sum();
    let formula = base + correction;

    // Independent path: the direct quadrature under the perturbed metric.
    let direct = index_bilinear_with(flag, &perturbed, &transport, &x_full, q, q, a, quad)?;
    let scale = 1.0_f64.max(formula.abs()).max(direct.abs());
    if (formula - direct).abs() > 1e-8 * scale {
        return Err(Error::Internal(format!(
            "perturbation formula {formula:.12e} disagrees with direct evaluation {direct:.12e}"
        )));
    }
    Ok(formula)
}
