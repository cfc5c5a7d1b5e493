//! Conjugate-point machinery: perturbation-pair search, canonical witness
//! curves, feasibility intervals, the optimal-amplitude analysis, and a
//! hat-function discretization of the index form for first-conjugate-time
//! estimation.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::LieElement;
use crate::error::{Error, Result};
use crate::flag::{FlagDescriptor, FlagSpace, InvariantMetric};
use crate::geodesic::{is_geodesic_vector, GEODESIC_TOL};
use crate::linalg::{golden_max, jacobi_eigenvalues};
use crate::quad::QuadratureConfig;
use crate::roots::Root;
use crate::trigpoly::TrigPoly;
use crate::variation::{index_form, perturbed_index, Transport, VariationCurve};

/// How condition (5) of the pair definition treats the difference β − δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Condition5Mode {
    /// Reject the pair when ±(β − δ) meets Π∖⟨Θ⟩. This is what the witness
    /// construction needs: the stray bracket term must vanish after
    /// 𝔪-projection regardless of which difference sign is a root.
    #[default]
    Symmetric,
    /// Reject only when β − δ itself (β the earlier root in enumeration
    /// order) lies in Π⁺∖⟨Θ⟩.
    Literal,
}

/// A pair of roots {β, δ} summing to α and decoupling from it, together with
/// the rotation rate m_{−α,β} of the transported plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationPair {
    /// The target root α.
    pub alpha: Root,
    /// Index of α's isotropy component σ₀.
    pub component: usize,
    /// First pair root.
    pub beta: Root,
    /// Second pair root.
    pub delta: Root,
    /// Signed rotation rate m_{−α,β}.
    pub rate: f64,
}

fn span_contains(flag: &FlagSpace, r: &Root) -> bool {
    flag.span_positive().contains(r) || flag.span_positive().contains(&r.neg())
}

/// Exhaustive scan for perturbation pairs with respect to α.
pub fn find_perturbation_pairs(
    flag: &FlagSpace,
    alpha: &Root,
    mode: Condition5Mode,
) -> Result<Vec<PerturbationPair>> {
    let alg = flag.algebra();
    let rs = alg.root_system();
    let component = flag.component_of(alpha).ok_or_else(|| {
        Error::Usage(format!(
            "{} does not lie in the complement of this flag",
            rs.label(alpha)
        ))
    })?;
    let sigma0 = &flag.components()[component].roots;
    let complement = flag.complement();
    let mut pairs = Vec::new();
    for (i, beta) in complement.iter().enumerate() {
        for delta in &complement[i + 1..] {
            if sigma0.contains(beta) || sigma0.contains(delta) {
                continue;
            }
            if beta.plus(delta) != *alpha {
                continue;
            }
            if rs.contains(&alpha.plus(beta)) || rs.contains(&alpha.plus(delta)) {
                continue;
            }
            let diff = beta.minus(delta);
            let blocked = match mode {
                Condition5Mode::Symmetric => rs.contains(&diff) && !span_contains(flag, &diff),
                Condition5Mode::Literal => rs.is_positive(&diff) && !span_contains(flag, &diff),
            };
            if blocked {
                continue;
            }
            let rate = alg.structure_constant(&alpha.neg(), beta)?;
            if rate == 0.0 {
                return Err(Error::Internal(format!(
                    "vanishing rotation rate for pair {} + {}",
                    rs.label(beta),
                    rs.label(delta)
                )));
            }
            pairs.push(PerturbationPair {
                alpha: alpha.clone(),
                component,
                beta: beta.clone(),
                delta: delta.clone(),
                rate,
            });
        }
    }
    Ok(pairs)
}

/// The canonical witness curve of a pair:
/// q₀(t) = k·sin(2πt/b)·A_β + (1/k)·t(t−b)·A_δ when m_{−α,β} > 0, with the
/// roles of β and δ exchanged when the rate is negative. Both endpoint
/// values vanish, so the variation is proper.
pub fn witness_curve(flag: &FlagSpace, pair: &PerturbationPair, b: f64, k: f64) -> Result<VariationCurve> {
    if k == 0.0 {
        return Err(Error::Usage("witness amplitude k must be nonzero".into()));
    }
    if !(b > 0.0) {
        return Err(Error::Usage(format!("witness interval must be positive, got {b}")));
    }
    let alg = flag.algebra();
    let (sine_root, poly_root) = if pair.rate > 0.0 {
        (&pair.beta, &pair.delta)
    } else {
        (&pair.delta, &pair.beta)
    };
    let omega = 2.0 * std::f64::consts::PI / b;
    VariationCurve::new(
        vec![
            (alg.a_element(sine_root)?, TrigPoly::sin(omega, k)),
            (
                alg.a_element(poly_root)?,
                TrigPoly::poly(vec![0.0, -b / k, 1.0 / k]),
            ),
        ],
        b,
    )
}

/// M = I_{normal}(q₀) and N = ∫₀ᵇ [(2πk/b·cos(2πt/b))² + ((2t−b)/k)²] dt,
/// both by quadrature.
pub fn mn_decomposition(
    flag: &FlagSpace,
    pair: &PerturbationPair,
    b: f64,
    k: f64,
    quad: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let q0 = witness_curve(flag, pair, b, k)?;
    let x = flag.a_vector(&pair.alpha)?;
    let normal = flag.normal_metric();
    let m = index_form(flag, &normal, &x, &q0, b, quad)?;
    let omega = 2.0 * std::f64::consts::PI / b;
    let n = quad.integrate(0.0, b, |t| {
        let c = omega * k * (omega * t).cos();
        let p = (2.0 * t - b) / k;
        c * c + p * p
    });
    Ok((m, n))
}

/// The feasibility interval (−1, −M/4N) for the perturbation size.
pub fn xi_interval(m: f64, n: f64) -> Result<(f64, f64)> {
    if !(n > 0.0) {
        return Err(Error::Usage(format!("N must be positive, got {n}")));
    }
    if m - 4.0 * n >= 0.0 {
        return Err(Error::Infeasible(format!(
            "M = {m} is not below 4N = {}; no admissible perturbation",
            4.0 * n
        )));
    }
    Ok((-1.0, -m / (4.0 * n)))
}

/// Amplitude maximizing the relative index deficiency (4N − M)/4N:
/// k* = b/(6^{1/4}√π) with maximum b·m·√6/2π². The closed form is verified
/// against a golden-section maximization before being returned.
pub fn optimal_k(b: f64, rate: f64) -> Result<(f64, f64)> {
    if !(b > 0.0) || !(rate > 0.0) {
        return Err(Error::Usage(format!(
            "optimal-k analysis needs b > 0 and rate > 0, got b = {b}, rate = {rate}"
        )));
    }
    let pi = std::f64::consts::PI;
    let k_star = b / (6.0_f64.powf(0.25) * pi.sqrt());
    let max_ratio = b * rate * 6.0_f64.sqrt() / (2.0 * pi * pi);
    let ratio = |k: f64| 6.0 * k * k * b.powi(3) * rate / (pi * (b.powi(4) + 6.0 * pi * pi * k.powi(4)));
    let (k_num, val_num) = golden_max(ratio, 1e-6 * k_star, 4.0 * k_star, 1e-9 * k_star);
    if (k_num - k_star).abs() > 1e-6 * k_star || (val_num - max_ratio).abs() > 1e-6 * max_ratio {
        return Err(Error::Internal(format!(
            "closed-form optimum (k* = {k_star}, ratio = {max_ratio}) not confirmed numerically \
             (got {k_num}, {val_num})"
        )));
    }
    Ok((k_star, max_ratio))
}

/// A fully assembled conjugate-point witness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConjugateWitness {
    /// The flag space the witness lives on.
    pub flag: FlagDescriptor,
    /// Label of the target root α.
    pub alpha: String,
    /// Label of the pair root β.
    pub beta: String,
    /// Label of the pair root δ.
    pub delta: String,
    /// Rotation rate m_{−α,β}.
    pub rate: f64,
    /// Witness interval endpoint.
    pub b: f64,
    /// Witness amplitude.
    pub k: f64,
    /// Chosen perturbation size.
    pub xi: f64,
    /// Admissible open interval for ξ.
    pub xi_interval: (f64, f64),
    /// Index form of q₀ under the normal metric.
    pub m_value: f64,
    /// The derivative-energy integral N.
    pub n_value: f64,
    /// Index form under the perturbed metric (negative).
    pub index_value: f64,
    /// Weights of the perturbed metric per component.
    pub lambda_sharp: Vec<f64>,
}

/// Assemble a witness: perturb the normal metric by ξ off σ₀, keep A_α as
/// the geodesic vector, evaluate the index two ways, and demand negativity.
///
/// `xi` defaults to the midpoint of the feasibility interval.
pub fn conjugate_witness(
    flag: &FlagSpace,
    pair: &PerturbationPair,
    b: f64,
    k: f64,
    xi: Option<f64>,
    quad: &QuadratureConfig,
) -> Result<ConjugateWitness> {
    let (m, n) = mn_decomposition(flag, pair, b, k, quad)?;
    let interval = xi_interval(m, n)?;
    let xi = xi.unwrap_or(0.5 * (interval.0 + interval.1));
    let protected = [pair.component];
    let xi_vec: Vec<f64> = (0..flag.components().len())
        .map(|c| if c == pair.component { 0.0 } else { xi })
        .collect();
    let normal = flag.normal_metric();
    let perturbed = normal.perturb(&protected, &xi_vec)?;
    let x = flag.a_vector(&pair.alpha)?;
    let x_full = flag.embed(&x);
    if !is_geodesic_vector(flag, &normal, &x_full, GEODESIC_TOL)?
        || !is_geodesic_vector(flag, &perturbed, &x_full, GEODESIC_TOL)?
    {
        return Err(Error::Usage(
            "witness vector must stay geodesic for the base and perturbed metrics".into(),
        ));
    }
    let q0 = witness_curve(flag, pair, b, k)?;
    // Comparison formula and direct quadrature are reconciled inside.
    let index_value = perturbed_index(flag, &normal, &protected, &xi_vec, &x, &q0, b, quad)?;
    let predicted = m + 4.0 * xi * n;
    if (index_value - predicted).abs() > 1e-8 * predicted.abs().max(1.0) {
        return Err(Error::Internal(format!(
            "index {index_value:.12e} deviates from M + 4ξN = {predicted:.12e}"
        )));
    }
    if index_value >= 0.0 {
        return Err(Error::WitnessFailure { value: index_value });
    }
    let rs = flag.algebra().root_system();
    Ok(ConjugateWitness {
        flag: flag.descriptor(),
        alpha: rs.label(&pair.alpha),
        beta: rs.label(&pair.beta),
        delta: rs.label(&pair.delta),
        rate: pair.rate,
        b,
        k,
        xi,
        xi_interval: interval,
        m_value: m,
        n_value: n,
        index_value,
        lambda_sharp: perturbed.lambdas().to_vec(),
    })
}

/// Largest deviation of the transported A_β from the closed-form rotation
/// cos(m̂t)A_β + sin(m̂t)A_δ over a t-grid (the operational content of the
/// pair conditions).
pub fn pair_rotation_deviation(flag: &FlagSpace, pair: &PerturbationPair, t_max: f64) -> Result<f64> {
    let alg = flag.algebra();
    let x = flag.a_vector(&pair.alpha)?;
    let tr = Transport::new(flag.algebra_arc(), &flag.embed(&x))?;
    let a_beta = alg.a_element(&pair.beta)?;
    let a_delta = alg.a_element(&pair.delta)?;
    let mut worst = 0.0f64;
    for s in 0..=32 {
        let t = t_max * s as f64 / 32.0;
        let out = tr.apply(t, &a_beta);
        let expect = a_beta
            .scale((pair.rate * t).cos())
            .add(&a_delta.scale((pair.rate * t).sin()));
        worst = worst.max(out.sub(&expect).coeff_norm());
    }
    Ok(worst)
}

/// Hat-function discretization of the index form over [0, b].
///
/// The eigenvalues are those of the index form relative to the L²(−Killing)
/// mass matrix of the same coefficient space (a discrete Rayleigh quotient),
/// so they converge under mesh refinement.
#[derive(Debug, Clone)]
pub struct GramProblem {
    /// Interior mesh nodes carry one hat function each.
    pub mesh: usize,
    /// Number of algebra directions in the coefficient space.
    pub basis_dim: usize,
    /// Assembled symmetric matrix of the bilinear index form.
    pub matrix: DMatrix<f64>,
    /// Smallest mass-normalized eigenvalue (tridiagonalization path).
    pub smallest_eigenvalue: f64,
    /// Smallest mass-normalized eigenvalue from the independent Jacobi sweep.
    pub smallest_eigenvalue_jacobi: f64,
    /// Negativity threshold −tol with tol = 1e−6 × matrix norm.
    pub threshold: f64,
}

impl GramProblem {
    /// Whether a direction with index below the threshold exists.
    pub fn has_negative_direction(&self) -> bool {
        self.smallest_eigenvalue < -self.threshold
    }
}

/// Assemble the Gram matrix of the index bilinear form over hat functions
/// (vanishing at 0 and b) tensored with algebra directions.
///
/// `basis` defaults to the full compact basis, which surjects onto all
/// proper variations at the cost of a positive-semidefinite kernel from
/// pointwise-isotropy directions.
pub fn index_gram(
    flag: &FlagSpace,
    metric: &InvariantMetric,
    x: &crate::flag::MVector,
    b: f64,
    mesh: usize,
    basis: Option<&[LieElement]>,
) -> Result<GramProblem> {
    if mesh < 4 {
        return Err(Error::Usage(format!("mesh must be at least 4, got {mesh}")));
    }
    if !(b > 0.0) {
        return Err(Error::Usage(format!("interval endpoint must be positive, got {b}")));
    }
    let alg = flag.algebra();
    let x_full = flag.embed(x);
    if !is_geodesic_vector(flag, metric, &x_full, GEODESIC_TOL)? {
        return Err(Error::Usage(
            "index discretization requires a geodesic vector".into(),
        ));
    }
    let default_basis: Vec<LieElement>;
    let basis = match basis {
        Some(b) => b,
        None => {
            default_basis = (0..alg.dim()).map(|i| alg.basis_element(i)).collect();
            &default_basis
        }
    };
    let nb = basis.len();
    let transport = Transport::new(flag.algebra_arc(), &x_full)?;

    // B_Λ([e_u, e_v]_𝔪, X) is t-independent.
    let mut cmat = DMatrix::zeros(nb, nb);
    for u in 0..nb {
        for v in 0..nb {
            let br = alg.bracket(&basis[u], &basis[v])?;
            cmat[(u, v)] = flag.metric_product_coeffs(metric, br.coeffs(), x_full.coeffs());
        }
    }

    // −Killing Gram of the chosen directions, for the mass matrix.
    let mut kmat = DMatrix::zeros(nb, nb);
    for u in 0..nb {
        for v in u..nb {
            let val = -alg.killing(&basis[u], &basis[v])?;
            kmat[(u, v)] = val;
            kmat[(v, u)] = val;
        }
    }

    let n_nodes = mesh - 1;
    let dim = n_nodes * nb;
    let mut g = DMatrix::zeros(dim, dim);
    let mut mass = DMatrix::zeros(dim, dim);
    let h = b / mesh as f64;
    let cell_quad = QuadratureConfig { nodes: 8, panels: 1 };
    let mut w_t: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(nb);
    for cell in 0..mesh {
        let lo = cell as f64 * h;
        for (t, w) in cell_quad.points(lo, lo + h) {
            // Transported basis directions, restricted pairing via metric.
            w_t.clear();
            for e in basis {
                w_t.push(transport.apply_coeffs(t, e.coeffs()));
            }
            let mut g_node = DMatrix::zeros(nb, nb);
            for u in 0..nb {
                for v in u..nb {
                    let val = flag.metric_product_coeffs(metric, &w_t[u], &w_t[v]);
                    g_node[(u, v)] = val;
                    g_node[(v, u)] = val;
                }
            }
            // Active hats on this cell: node `cell` descending, `cell+1`
            // ascending; boundary hats are omitted.
            let local = [
                (cell, (lo + h - t) / h, -1.0 / h),
                (cell + 1, (t - lo) / h, 1.0 / h),
            ];
            for &(i, phi_i, dphi_i) in &local {
                if i == 0 || i == mesh {
                    continue;
                }
                for &(j, phi_j, dphi_j) in &local {
                    if j == 0 || j == mesh {
                        continue;
                    }
                    let row0 = (i - 1) * nb;
                    let col0 = (j - 1) * nb;
                    let hat_bracket = phi_i * dphi_j - phi_j * dphi_i;
                    let hat_grad = 2.0 * dphi_i * dphi_j;
                    let hat_mass = phi_i * phi_j;
                    for u in 0..nb {
                        for v in 0..nb {
                            g[(row0 + u, col0 + v)] +=
                                w * (hat_bracket * cmat[(u, v)] + hat_grad * g_node[(u, v)]);
                            mass[(row0 + u, col0 + v)] += w * hat_mass * kmat[(u, v)];
                        }
                    }
                }
            }
        }
    }
    // Clean assembly roundoff.
    let sym = (&g + g.transpose()) * 0.5;
    let asym = (&g - g.transpose()).norm();
    if asym > 1e-12 * sym.norm().max(1.0) {
        return Err(Error::Internal(format!(
            "assembled index matrix asymmetry {asym:.3e}"
        )));
    }
    // Reduce the pencil (G, M) to a standard symmetric problem through the
    // Cholesky factor of the mass matrix.
    let mass = (&mass + mass.transpose()) * 0.5;
    let chol = nalgebra::Cholesky::new(mass)
        .ok_or_else(|| Error::Internal("mass matrix is not positive definite".into()))?;
    let l = chol.l();
    let y = l
        .solve_lower_triangular(&sym)
        .ok_or_else(|| Error::Internal("singular mass factor".into()))?;
    let reduced = l
        .solve_lower_triangular(&y.transpose())
        .ok_or_else(|| Error::Internal("singular mass factor".into()))?;
    let reduced = (&reduced + reduced.transpose()) * 0.5;

    let eig = nalgebra::SymmetricEigen::new(reduced.clone());
    let smallest = eig.eigenvalues.min();
    let jac = jacobi_eigenvalues(&reduced);
    let smallest_jacobi = jac[0];
    let scale = reduced.norm();
    if (smallest - smallest_jacobi).abs() > 1e-9 * scale.max(1.0) {
        return Err(Error::Internal(format!(
            "eigenvalue sweeps disagree: {smallest} vs {smallest_jacobi}"
        )));
    }
    Ok(GramProblem {
        mesh,
        basis_dim: nb,
        threshold: 1e-6 * scale,
        matrix: sym,
        smallest_eigenvalue: smallest,
        smallest_eigenvalue_jacobi: smallest_jacobi,
    })
}

/// Bisect the first parameter time at which the discretized index form
/// acquires a negative direction.
pub fn first_conjugate_estimate(
    flag: &FlagSpace,
    metric: &InvariantMetric,
    x: &crate::flag::MVector,
    bracket: (f64, f64),
    mesh: usize,
    basis: Option<&[LieElement]>,
) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0) || !(hi > lo) {
        return Err(Error::Usage(format!("invalid bracket [{lo}, {hi}]")));
    }
    let negative_at = |b: f64| -> Result<bool> {
        Ok(index_gram(flag, metric, x, b, mesh, basis)?.has_negative_direction())
    };
    if negative_at(lo)? {
        return Err(Error::Search(format!(
            "negative direction already present at the lower bracket {lo}"
        )));
    }
    if !negative_at(hi)? {
        return Err(Error::Search(format!(
            "no negative direction up to the upper bracket {hi}"
        )));
    }
    while hi - lo > 1e-3 * hi {
        let mid = 0.5 * (lo + hi);
        if negative_at(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
