//! The two-isotropy-summand homogeneous Ricci flow on ℂP^{2n+1}: Ricci
//! components, the planar flow field, invariant lines, region classification,
//! adaptive integration, homothety-line crossing, and the conjugate-point
//! pipeline that ties the flow to the index-form machinery.

use serde::{Deserialize, Serialize};

use crate::conjugacy::{find_perturbation_pairs, mn_decomposition, optimal_k, Condition5Mode};
use crate::error::{Error, Result};
use crate::flag::FlagSpace;
use crate::quad::QuadratureConfig;
use crate::variation::index_form;

/// A point (λ₁, λ₂) of the two-summand metric space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    /// First metric weight λ₁ (the 4n-dimensional component).
    pub x: f64,
    /// Second metric weight λ₂ (the fiber component).
    pub y: f64,
}

impl FlowState {
    /// A state with positive coordinates.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x > 0.0) || !(y > 0.0) {
            return Err(Error::Domain(format!(
                "metric weights must be positive, got ({x}, {y})"
            )));
        }
        Ok(FlowState { x, y })
    }

    /// Slope y/x of the ray through the state.
    pub fn ratio(&self) -> f64 {
        self.y / self.x
    }
}

/// Phase-portrait region of a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionLabel {
    /// Above the steep invariant line.
    R1,
    /// On the steep invariant line (slope (4n+3)/8).
    Gamma1,
    /// Between the invariant lines; contains the normal metric.
    R2,
    /// On the shallow invariant line (slope 1/2).
    Gamma2,
    /// Below the shallow invariant line.
    R3,
}

impl std::fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RegionLabel::R1 => "R1",
            RegionLabel::Gamma1 => "gamma1",
            RegionLabel::R2 => "R2",
            RegionLabel::Gamma2 => "gamma2",
            RegionLabel::R3 => "R3",
        };
        write!(f, "{s}")
    }
}

/// Why an integration stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HaltReason {
    /// The requested span was covered.
    Completed,
    /// A metric weight was about to leave the positive cone.
    PositivityLoss,
}

/// An integrated flow line.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Accepted (t, state) samples, including the initial state.
    pub samples: Vec<(f64, FlowState)>,
    /// Accepted step sizes (signed).
    pub steps: Vec<f64>,
    /// Whether time ran forward.
    pub forward: bool,
    /// Why integration ended.
    pub halt: HaltReason,
}

/// Integrator tolerances.
#[derive(Debug, Clone, Copy)]
pub struct IntegratorConfig {
    /// Relative tolerance of the embedded error estimate.
    pub rel_tol: f64,
    /// Absolute tolerance floor.
    pub abs_tol: f64,
    /// Largest step size.
    pub max_step: f64,
    /// Hard cap on accepted steps.
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: 0.1,
            max_steps: 5_000_000,
        }
    }
}

fn check_positive(n: usize, x: f64, y: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::Usage("the flow needs n >= 1".into()));
    }
    if !(x > 0.0) || !(y > 0.0) {
        return Err(Error::Domain(format!(
            "Ricci components need positive weights, got ({x}, {y})"
        )));
    }
    Ok(())
}

/// Components (r₁, r₂) of the Ricci tensor at Λ = (x, y):
/// r₁ = −4/(2n+4) − (2n/(4n+8))·x²/y², r₂ = −(7+4n)/(4n+8) + (6/(16n+32))·x/y.
pub fn ricci_components(n: usize, x: f64, y: f64) -> Result<(f64, f64)> {
    check_positive(n, x, y)?;
    let nf = n as f64;
    let r1 = -4.0 / (2.0 * nf + 4.0) - (2.0 * nf / (4.0 * nf + 8.0)) * (x * x) / (y * y);
    let r2 = -(7.0 + 4.0 * nf) / (4.0 * nf + 8.0) + (6.0 / (16.0 * nf + 32.0)) * x / y;
    Ok((r1, r2))
}

/// The flow field (ẋ, ẏ); identically −(r₁, r₂).
pub fn flow_field(n: usize, x: f64, y: f64) -> Result<(f64, f64)> {
    check_positive(n, x, y)?;
    let nf = n as f64;
    let dx = 4.0 / (2.0 * nf + 4.0) + (2.0 * nf / (4.0 * nf + 8.0)) * (x * x) / (y * y);
    let dy = (7.0 + 4.0 * nf) / (4.0 * nf + 8.0) - (6.0 / (16.0 * nf + 32.0)) * x / y;
    Ok((dx, dy))
}

/// Slopes of the invariant rays: ((4n+3)/8, 1/2).
pub fn invariant_lines(n: usize) -> (f64, f64) {
    ((4.0 * n as f64 + 3.0) / 8.0, 0.5)
}

/// Classify a state by the ratio y/x against the invariant slopes
/// (equality within a 1e−12 band).
pub fn classify(n: usize, state: &FlowState) -> Result<RegionLabel> {
    check_positive(n, state.x, state.y)?;
    let (steep, shallow) = invariant_lines(n);
    let ratio = state.ratio();
    const BAND: f64 = 1e-12;
    Ok(if (ratio - steep).abs() <= BAND {
        RegionLabel::Gamma1
    } else if ratio > steep {
        RegionLabel::R1
    } else if (ratio - shallow).abs() <= BAND {
        RegionLabel::Gamma2
    } else if ratio > shallow {
        RegionLabel::R2
    } else {
        RegionLabel::R3
    })
}

// Dormand–Prince 5(4) coefficients. The field is autonomous, so the stage
// abscissae are not needed.
const DP_A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const DP_B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const DP_B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

enum StepOutcome {
    Accepted { state: FlowState, err: f64 },
    StagePositivityLoss,
}

fn dp54_step(n: usize, state: &FlowState, h: f64, cfg: &IntegratorConfig) -> Result<StepOutcome> {
    let mut kx = [0.0f64; 7];
    let mut ky = [0.0f64; 7];
    for s in 0..7 {
        let mut xs = state.x;
        let mut ys = state.y;
        for j in 0..s {
            xs += h * DP_A[s][j] * kx[j];
            ys += h * DP_A[s][j] * ky[j];
        }
        if xs <= 0.0 || ys <= 0.0 {
            return Ok(StepOutcome::StagePositivityLoss);
        }
        let (dx, dy) = flow_field(n, xs, ys)?;
        kx[s] = dx;
        ky[s] = dy;
    }
    let mut x5 = state.x;
    let mut y5 = state.y;
    let mut x4 = state.x;
    let mut y4 = state.y;
    for s in 0..7 {
        x5 += h * DP_B5[s] * kx[s];
        y5 += h * DP_B5[s] * ky[s];
        x4 += h * DP_B4[s] * kx[s];
        y4 += h * DP_B4[s] * ky[s];
    }
    if x5 <= 0.0 || y5 <= 0.0 {
        return Ok(StepOutcome::StagePositivityLoss);
    }
    let scale_x = cfg.abs_tol + cfg.rel_tol * state.x.abs().max(x5.abs());
    let scale_y = cfg.abs_tol + cfg.rel_tol * state.y.abs().max(y5.abs());
    let ex = (x5 - x4) / scale_x;
    let ey = (y5 - y4) / scale_y;
    let err = (0.5 * (ex * ex + ey * ey)).sqrt();
    Ok(StepOutcome::Accepted {
        state: FlowState { x: x5, y: y5 },
        err,
    })
}

/// Core stepping loop; invokes `on_sample` after every accepted step and
/// stops early when it returns `false`.
fn run_flow<F: FnMut(f64, FlowState, f64) -> bool>(
    n: usize,
    start: FlowState,
    t_end: f64,
    cfg: &IntegratorConfig,
    mut on_sample: F,
) -> Result<HaltReason> {
    if t_end == 0.0 {
        return Ok(HaltReason::Completed);
    }
    let dir = t_end.signum();
    let span = t_end.abs();
    let mut t = 0.0f64;
    let mut state = start;
    let mut h = cfg.max_step.min(span);
    let mut steps = 0usize;
    while t < span {
        h = h.min(span - t).min(cfg.max_step);
        match dp54_step(n, &state, dir * h, cfg)? {
            StepOutcome::StagePositivityLoss => {
                h *= 0.5;
                if h < 1e-14 * span.max(1.0) {
                    return Ok(HaltReason::PositivityLoss);
                }
            }
            StepOutcome::Accepted { state: next, err } => {
                if err <= 1.0 {
                    t += h;
                    state = next;
                    if !on_sample(dir * t, state, dir * h) {
                        return Ok(HaltReason::Completed);
                    }
                    steps += 1;
                    if steps >= cfg.max_steps {
                        return Err(Error::Search(format!(
                            "integration exceeded {} steps",
                            cfg.max_steps
                        )));
                    }
                }
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = (h * factor).min(cfg.max_step);
            }
        }
    }
    Ok(HaltReason::Completed)
}

/// Integrate the flow from `start` for signed time `t_end` (negative runs
/// the flow backwards). Positivity loss truncates the trajectory.
pub fn integrate(
    n: usize,
    start: FlowState,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    check_positive(n, start.x, start.y)?;
    let mut samples = vec![(0.0, start)];
    let mut steps = Vec::new();
    let halt = run_flow(n, start, t_end, cfg, |t, s, h| {
        samples.push((t, s));
        steps.push(h);
        true
    })?;
    Ok(Trajectory {
        samples,
        steps,
        forward: t_end >= 0.0,
        halt,
    })
}

/// Find where the forward flow from `start` crosses the homothety ray
/// r ↦ (rζ, r), i.e. where y/x reaches 1/ζ. Returns (t₀, r₀, state).
///
/// The crossing time is bisected to 1e−10 once an accepted step brackets it.
pub fn homothety_crossing(
    n: usize,
    start: FlowState,
    zeta: f64,
    max_span: f64,
    cfg: &IntegratorConfig,
) -> Result<(f64, f64, FlowState)> {
    check_positive(n, start.x, start.y)?;
    let (steep, _) = invariant_lines(n);
    if !(zeta > 1.0 / steep) || !(zeta < 1.0) {
        return Err(Error::Usage(format!(
            "zeta must lie in ({:.6}, 1), got {zeta}",
            1.0 / steep
        )));
    }
    let target = 1.0 / zeta;
    let event = |s: &FlowState| s.ratio() - target;
    if event(&start).abs() <= 1e-14 {
        return Ok((0.0, start.y, start));
    }
    let mut prev_t = 0.0f64;
    let mut prev_state = start;
    let mut bracket: Option<(f64, FlowState, f64)> = None;
    let halt = run_flow(n, start, max_span, cfg, |t, s, h| {
        if event(&prev_state).signum() != event(&s).signum() {
            bracket = Some((prev_t, prev_state, h.abs()));
            false
        } else {
            prev_t = t;
            prev_state = s;
            true
        }
    })?;
    let Some((t_base, base_state, width)) = bracket else {
        return Err(Error::Search(format!(
            "homothety ray with zeta = {zeta} not crossed within span {max_span} ({:?})",
            halt
        )));
    };
    // Bisect inside the bracketing step by re-integrating from the stored
    // pre-step state.
    let state_at = |dt: f64| -> Result<FlowState> {
        if dt == 0.0 {
            return Ok(base_state);
        }
        let mut last = base_state;
        run_flow(n, base_state, dt, cfg, |_, s, _| {
            last = s;
            true
        })?;
        Ok(last)
    };
    let (mut lo, mut hi) = (0.0f64, width);
    let f_lo = event(&base_state);
    let f_hi = event(&state_at(width)?);
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Search(
            "bracketing step lost the event during refinement".into(),
        ));
    }
    for _ in 0..200 {
        if hi - lo <= 1e-10 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if event(&state_at(mid)?).signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let dt = 0.5 * (lo + hi);
    let state = state_at(dt)?;
    Ok((t_base + dt, state.y, state))
}

/// Report of the flow-to-conjugate-point pipeline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineReport {
    /// Summand label n of ℂP^{2n+1}.
    pub n: usize,
    /// Witness interval endpoint.
    pub b: f64,
    /// Transport rotation rate m.
    pub m_rate: f64,
    /// Admissible interval for b.
    pub b_interval: (f64, f64),
    /// The deficiency-optimal amplitude.
    pub k_star: f64,
    /// Index form of the witness under the normal metric.
    pub m_value: f64,
    /// Derivative-energy integral.
    pub n_value: f64,
    /// Admissible interval for the ray parameter ζ.
    pub zeta_interval: (f64, f64),
    /// Chosen ζ (midpoint).
    pub zeta: f64,
    /// Flow time of the homothety crossing under the integrated system.
    ///
    /// The integrated system is the printed one, which is the backward flow
    /// up to a factor-two time reparametrization; under the backward-flow
    /// statement the crossing sits at negative time.
    pub t0: f64,
    /// Scale of the crossing point on the homothety ray.
    pub r0: f64,
    /// Crossing state (λ₁, λ₂).
    pub crossing: FlowState,
    /// Region of the crossing state (stays R2).
    pub crossing_region: String,
    /// Index of the witness under (ζ, 1).
    pub index_base: f64,
    /// r₀ · index_base.
    pub index_scaled: f64,
    /// Direct evaluation under (r₀ζ, r₀).
    pub index_direct: f64,
    /// Relative disagreement of the two index computations.
    pub rel_agreement: f64,
}

/// Run the full pipeline: pick k*, compute (M, N), choose ζ, find the
/// homothety crossing of the flow from (1, 1), and evaluate the witness
/// index under the crossing metric both by scaling and directly.
pub fn flow_witness_pipeline(n: usize, b: f64, quad: &QuadratureConfig) -> Result<PipelineReport> {
    if n < 10 {
        return Err(Error::Usage(format!("the pipeline requires n >= 10, got {n}")));
    }
    let nf = n as f64;
    let m_rate = 1.0 / (2.0 * nf + 4.0).sqrt();
    let pi = std::f64::consts::PI;
    let b_lo = 8.0 * 6.0_f64.sqrt() * pi * pi / (3.0 * m_rate * (4.0 * nf + 3.0));
    let b_hi = pi / (2.0 * m_rate);
    if !(b > b_lo) || !(b < b_hi) {
        return Err(Error::Usage(format!(
            "b = {b} outside the admissible interval ({b_lo:.6}, {b_hi:.6})"
        )));
    }

    let flag = FlagSpace::projective_space(n)?;
    let rs = flag.algebra().root_system();
    let alpha = rs.parse_label("a11")?;
    let pair = find_perturbation_pairs(&flag, &alpha, Condition5Mode::Symmetric)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal("no perturbation pair on the projective flag".into()))?;

    let (k_star, max_ratio) = optimal_k(b, pair.rate.abs())?;
    let (m_value, n_value) = mn_decomposition(&flag, &pair, b, k_star, quad)?;
    let zeta_lo = 8.0 / (4.0 * nf + 3.0);
    let zeta_hi = 1.0 - m_value / (4.0 * n_value);
    if (zeta_hi - max_ratio).abs() > 1e-8 * max_ratio {
        return Err(Error::Internal(format!(
            "deficiency maximum {max_ratio} does not match 1 − M/4N = {zeta_hi}"
        )));
    }
    if zeta_hi <= zeta_lo {
        return Err(Error::Usage(format!(
            "empty zeta interval ({zeta_lo}, {zeta_hi}): b too small for this n"
        )));
    }
    let zeta = 0.5 * (zeta_lo + zeta_hi);

    let cfg = IntegratorConfig::default();
    let start = FlowState { x: 1.0, y: 1.0 };
    let (t0, r0, crossing) = homothety_crossing(n, start, zeta, 1e6, &cfg)?;
    let crossing_region = classify(n, &crossing)?;

    let x_vec = flag.a_vector(&alpha)?;
    let q0 = crate::conjugacy::witness_curve(&flag, &pair, b, k_star)?;
    let base_metric = flag.metric(vec![zeta, 1.0])?;
    let index_base = index_form(&flag, &base_metric, &x_vec, &q0, b, quad)?;
    let index_scaled = r0 * index_base;
    let direct_metric = flag.metric(vec![r0 * zeta, r0])?;
    let index_direct = index_form(&flag, &direct_metric, &x_vec, &q0, b, quad)?;
    let rel = (index_scaled - index_direct).abs() / index_direct.abs().max(1.0);
    if rel > 1e-8 {
        return Err(Error::Internal(format!(
            "scaled index {index_scaled:.12e} and direct index {index_direct:.12e} disagree"
        )));
    }
    if index_direct >= 0.0 {
        return Err(Error::WitnessFailure {
            value: index_direct,
        });
    }
    Ok(PipelineReport {
        n,
        b,
        m_rate,
        b_interval: (b_lo, b_hi),
        k_star,
        m_value,
        n_value,
        zeta_interval: (zeta_lo, zeta_hi),
        zeta,
        t0,
        r0,
        crossing,
        crossing_region: crossing_region.to_string(),
        index_base,
        index_scaled,
        index_direct,
        rel_agreement: rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ricci_component_values() {
        let (r1, r2) = ricci_components(10, 1.0, 1.0).unwrap();
        assert!((r1 + 7.0 / 12.0).abs() < 1e-15);
        assert!((r2 + 91.0 / 96.0).abs() < 1e-15);
        // r₁ stays negative on a positive grid.
        for i in 1..10 {
            for j in 1..10 {
                let (r1, _) = ricci_components(3, i as f64 * 0.4, j as f64 * 0.3).unwrap();
                assert!(r1 < 0.0);
            }
        }
        assert!(ricci_components(10, 0.0, 1.0).is_err());
    }

    #[test]
    fn einstein_proportionality_on_shallow_ray() {
        for n in [1usize, 3, 10] {
            let (r1, r2) = ricci_components(n, 2.0, 1.0).unwrap();
            let nf = n as f64;
            let expect = -(4.0 * nf + 4.0) / (4.0 * nf + 8.0);
            assert!((r1 / 2.0 - expect).abs() < 1e-14);
            assert!((r2 / 1.0 - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn field_is_minus_ricci_and_scale_free() {
        for n in [1usize, 10] {
            for (x, y) in [(1.0, 1.0), (0.3, 2.1), (5.0, 0.7)] {
                let (r1, r2) = ricci_components(n, x, y).unwrap();
                let (dx, dy) = flow_field(n, x, y).unwrap();
                assert!((dx + r1).abs() < 1e-14 && (dy + r2).abs() < 1e-14);
                // Degree-zero homogeneity.
                let (dx2, dy2) = flow_field(n, 7.0 * x, 7.0 * y).unwrap();
                assert!((dx - dx2).abs() < 1e-14 && (dy - dy2).abs() < 1e-14);
            }
        }
        // (7/12, 91/96) at the normal metric for n = 10.
        let (dx, dy) = flow_field(10, 1.0, 1.0).unwrap();
        assert!((dx - 7.0 / 12.0).abs() < 1e-15);
        assert!((dy - 91.0 / 96.0).abs() < 1e-15);
    }

    #[test]
    fn invariant_line_slopes() {
        assert_eq!(invariant_lines(10), (43.0 / 8.0, 0.5));
        assert_eq!(invariant_lines(1), (7.0 / 8.0, 0.5));
        for n in 1..30 {
            let (s1, s2) = invariant_lines(n);
            assert!(s1 > s2);
        }
        // The field is tangent to the shallow ray: slope 1/2 at y = x/2.
        let (dx, dy) = flow_field(10, 2.0, 1.0).unwrap();
        assert!((dy / dx - 0.5).abs() < 1e-14);
        let (s1, _) = invariant_lines(10);
        let (dx, dy) = flow_field(10, 1.0, s1).unwrap();
        assert!((dy / dx - s1).abs() < 1e-13);
    }

    #[test]
    fn region_classification() {
        let s = |x, y| FlowState { x, y };
        assert_eq!(classify(10, &s(1.0, 1.0)).unwrap(), RegionLabel::R2);
        assert_eq!(classify(10, &s(1.0, 0.25)).unwrap(), RegionLabel::R3);
        assert_eq!(classify(10, &s(1.0, 6.0)).unwrap(), RegionLabel::R1);
        assert_eq!(classify(10, &s(1.0, 0.5)).unwrap(), RegionLabel::Gamma2);
        assert_eq!(classify(10, &s(8.0, 43.0)).unwrap(), RegionLabel::Gamma1);
        // Scale invariance.
        for c in [0.01, 1.0, 250.0] {
            assert_eq!(classify(10, &s(c, 0.9 * c)).unwrap(), RegionLabel::R2);
        }
    }

    #[test]
    fn invariant_rays_are_preserved() {
        let cfg = IntegratorConfig::default();
        for n in [1usize, 10] {
            let (steep, shallow) = invariant_lines(n);
            for slope in [steep, shallow] {
                let start = FlowState { x: 1.0, y: slope };
                let traj = integrate(n, start, 10.0, &cfg).unwrap();
                assert_eq!(traj.halt, HaltReason::Completed);
                let drift = traj
                    .samples
                    .iter()
                    .map(|(_, s)| (s.ratio() - slope).abs())
                    .fold(0.0f64, f64::max);
                assert!(drift < 1e-8, "n = {n}, slope {slope}: drift {drift:.3e}");
            }
        }
    }

    #[test]
    fn ratio_grows_monotonically_from_normal_metric() {
        let cfg = IntegratorConfig::default();
        let traj = integrate(10, FlowState { x: 1.0, y: 1.0 }, 50.0, &cfg).unwrap();
        let mut prev = 1.0;
        for (_, s) in &traj.samples[1..] {
            assert!(s.ratio() > prev - 1e-12);
            prev = s.ratio();
        }
        assert!(prev < 43.0 / 8.0);
        // d(y/x)/dt at the start is (2n − 2.5)/(4n + 8) > 0.
        let (dx, dy) = flow_field(10, 1.0, 1.0).unwrap();
        assert!(((dy - dx) - 17.5 / 48.0).abs() < 1e-14);
    }

    #[test]
    fn backward_integration_halts_on_positivity() {
        let cfg = IntegratorConfig::default();
        let traj = integrate(10, FlowState { x: 1.0, y: 1.0 }, -12.0, &cfg).unwrap();
        assert_eq!(traj.halt, HaltReason::PositivityLoss);
        assert!(!traj.forward);
        let (t_last, last) = *traj.samples.last().unwrap();
        assert!(t_last < 0.0 && t_last > -12.0);
        assert!(last.x > 0.0 && last.y > 0.0);
    }

    #[test]
    fn homothety_crossing_basics() {
        let cfg = IntegratorConfig::default();
        let start = FlowState { x: 1.0, y: 1.0 };
        // ζ close to 1 crosses almost immediately at scale ≈ 1.
        let (t0, r0, state) = homothety_crossing(10, start, 0.999, 100.0, &cfg).unwrap();
        assert!(t0 < 0.05 && (r0 - 1.0).abs() < 0.05);
        assert_eq!(classify(10, &state).unwrap(), RegionLabel::R2);
        // A mid-interval ζ also crosses, deeper into the flow.
        let (t1, r1, state1) = homothety_crossing(10, start, 0.188, 1e6, &cfg).unwrap();
        assert!(t1 > t0 && r1 > 1.0);
        assert_eq!(classify(10, &state1).unwrap(), RegionLabel::R2);
        let ratio_err = (state1.ratio() - 1.0 / 0.188).abs();
        assert!(ratio_err < 1e-6, "ratio error {ratio_err:.3e}");
        // ζ outside the admissible range is rejected.
        assert!(homothety_crossing(10, start, 0.1, 10.0, &cfg).is_err());
    }

    #[test]
    fn pipeline_runs_on_reference_parameters() {
        let quad = QuadratureConfig::default();
        let report = flow_witness_pipeline(10, 7.5, &quad).unwrap();
        assert!((report.b_interval.0 - 32.0 * std::f64::consts::PI.powi(2) / 43.0).abs() < 1e-9);
        assert!((report.b_interval.1 - 6.0_f64.sqrt() * std::f64::consts::PI).abs() < 1e-9);
        assert!((report.zeta_interval.0 - 8.0 / 43.0).abs() < 1e-12);
        assert!((report.zeta_interval.1 - 0.189977).abs() < 1e-5);
        assert!(report.r0 > 0.0);
        assert!(report.index_direct < 0.0);
        assert!(report.rel_agreement <= 1e-8);
        assert_eq!(report.crossing_region, "R2");
        // b outside the admissible interval is rejected up front.
        assert!(flow_witness_pipeline(10, 7.0, &quad).is_err());
        assert!(flow_witness_pipeline(9, 7.5, &quad).is_err());
    }
}
