//! Flag spaces U/K_Θ: tangent decomposition, isotropy components, invariant
//! metrics, metric perturbations, and projections.
//!
//! A flag space is fixed by a subset Θ of the simple system. The span ⟨Θ⟩ is
//! saturated inside the root set, the complement Π⁺∖⟨Θ⟩ spans 𝔪_Θ through
//! the pairs {A_α, S_α}, and two complement roots sit in the same isotropy
//! component exactly when their difference lies in the rational span of Θ
//! (equality of restrictions to the center of 𝔨_Θ).

use std::collections::HashSet;
use std::sync::Arc;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, LieElement};
use crate::error::{Error, Result};
use crate::roots::{Family, Root};

/// One irreducible component of the isotropy representation.
#[derive(Debug, Clone)]
pub struct IsotropyComponent {
    /// Position in the component list.
    pub index: usize,
    /// Positive roots indexing the component.
    pub roots: Vec<Root>,
}

impl IsotropyComponent {
    /// Real dimension, two per root.
    pub fn dimension(&self) -> usize {
        2 * self.roots.len()
    }
}

/// A generalized flag space determined by Θ ⊆ Σ.
#[derive(Debug, Clone)]
pub struct FlagSpace {
    alg: Arc<Algebra>,
    theta: Vec<Root>,
    span_pos: Vec<Root>,
    complement: Vec<Root>,
    components: Vec<IsotropyComponent>,
    comp_of: Vec<usize>,
    m_indices: Vec<usize>,
    k_indices: Vec<usize>,
}

impl FlagSpace {
    /// Build the flag space for a subset of simple roots.
    pub fn new(alg: Arc<Algebra>, theta: &[Root]) -> Result<Self> {
        let rs = alg.root_system();
        for t in theta {
            if rs.simple_index(t).is_none() {
                return Err(Error::Usage(format!(
                    "{} is not a simple root of {}",
                    rs.label(t),
                    alg.id()
                )));
            }
        }
        // Deduplicate and order Θ by simple index.
        let mut theta: Vec<Root> = {
            let set: HashSet<Root> = theta.iter().cloned().collect();
            set.into_iter().collect()
        };
        theta.sort_by_key(|t| rs.simple_index(t).unwrap());

        // ⟨Θ⟩ by saturating sums inside the root set.
        let mut span: HashSet<Root> = theta.iter().flat_map(|t| [t.clone(), t.neg()]).collect();
        loop {
            let mut added = Vec::new();
            for a in &span {
                for b in &span {
                    let s = a.plus(b);
                    if rs.contains(&s) && !span.contains(&s) {
                        added.push(s);
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            span.extend(added);
        }
        let span_pos: Vec<Root> = rs
            .positive()
            .iter()
            .filter(|r| span.contains(*r))
            .cloned()
            .collect();
        let complement: Vec<Root> = rs
            .positive()
            .iter()
            .filter(|r| !span.contains(*r))
            .cloned()
            .collect();

        // Components by center-restriction equivalence: α ~ β iff α − β lies
        // in the rational span of Θ.
        let mut groups: Vec<Vec<Root>> = Vec::new();
        for r in &complement {
            match groups
                .iter_mut()
                .find(|g| rs.in_rational_span(&theta, &r.minus(&g[0])))
            {
                Some(g) => g.push(r.clone()),
                None => groups.push(vec![r.clone()]),
            }
        }
        let components: Vec<IsotropyComponent> = groups
            .into_iter()
            .enumerate()
            .map(|(index, roots)| IsotropyComponent { index, roots })
            .collect();
        let comp_of: Vec<usize> = complement
            .iter()
            .map(|r| {
                components
                    .iter()
                    .position(|c| c.roots.contains(r))
                    .expect("components partition the complement")
            })
            .collect();

        let mut m_indices = Vec::with_capacity(2 * complement.len());
        for r in &complement {
            m_indices.push(alg.a_index(r)?);
            m_indices.push(alg.s_index(r)?);
        }
        let m_set: HashSet<usize> = m_indices.iter().copied().collect();
        let k_indices: Vec<usize> = (0..alg.dim()).filter(|i| !m_set.contains(i)).collect();

        Ok(FlagSpace {
            alg,
            theta,
            span_pos,
            complement,
            components,
            comp_of,
            m_indices,
            k_indices,
        })
    }

    /// Flag space from 1-based simple-root indices.
    pub fn from_simple_indices(alg: Arc<Algebra>, indices: &[usize]) -> Result<Self> {
        let simple = alg.root_system().simple().to_vec();
        let mut theta = Vec::new();
        for &i in indices {
            if i == 0 || i > simple.len() {
                return Err(Error::Usage(format!(
                    "simple-root index {i} out of range 1..={}",
                    simple.len()
                )));
            }
            theta.push(simple[i - 1].clone());
        }
        Self::new(alg, &theta)
    }

    /// The projective space ℂP^{2n+1} as a flag of C_{n+1}: Θ drops only the
    /// first simple root.
    pub fn projective_space(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::Config("projective space requires n >= 1".into()));
        }
        let alg = Algebra::shared(Family::C, n + 1)?;
        let theta: Vec<Root> = alg.root_system().simple()[1..].to_vec();
        Self::new(alg, &theta)
    }

    /// The maximal flag of SU(3) (Θ = ∅ on A₂).
    pub fn su3_maximal() -> Result<Self> {
        let alg = Algebra::shared(Family::A, 2)?;
        Self::new(alg, &[])
    }

    /// Underlying algebra.
    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    /// Shared handle to the algebra.
    pub fn algebra_arc(&self) -> Arc<Algebra> {
        Arc::clone(&self.alg)
    }

    /// The subset Θ.
    pub fn theta(&self) -> &[Root] {
        &self.theta
    }

    /// Positive part of ⟨Θ⟩.
    pub fn span_positive(&self) -> &[Root] {
        &self.span_pos
    }

    /// Complement Π⁺∖⟨Θ⟩ in canonical order.
    pub fn complement(&self) -> &[Root] {
        &self.complement
    }

    /// Isotropy components, in order of first appearance.
    pub fn components(&self) -> &[IsotropyComponent] {
        &self.components
    }

    /// Component index of a complement root.
    pub fn component_of(&self, root: &Root) -> Option<usize> {
        self.complement
            .iter()
            .position(|r| r == root)
            .map(|k| self.comp_of[k])
    }

    /// Real dimension of 𝔪_Θ.
    pub fn m_dim(&self) -> usize {
        self.m_indices.len()
    }

    /// Compact-basis coefficient indices spanning 𝔪_Θ (A/S interleaved per
    /// complement root).
    pub fn m_indices(&self) -> &[usize] {
        &self.m_indices
    }

    /// Compact-basis coefficient indices spanning 𝔨_Θ.
    pub fn k_indices(&self) -> &[usize] {
        &self.k_indices
    }

    /// Component index per 𝔪-coefficient slot, aligned with `m_indices`.
    pub fn component_of_m_slot(&self, slot: usize) -> usize {
        self.comp_of[slot / 2]
    }

    /// Tangent projection by basis-coefficient selection.
    pub fn project_m(&self, x: &LieElement) -> MVector {
        let pairs = self
            .complement
            .iter()
            .enumerate()
            .map(|(k, _)| {
                let a = x.coeffs()[self.m_indices[2 * k]];
                let b = x.coeffs()[self.m_indices[2 * k + 1]];
                (a, b)
            })
            .collect();
        MVector { pairs }
    }

    /// Isotropy projection; `embed(project_m(x)) + project_k(x) = x`.
    pub fn project_k(&self, x: &LieElement) -> LieElement {
        let mut coeffs = x.coeffs().clone();
        for &i in &self.m_indices {
            coeffs[i] = 0.0;
        }
        self.alg.element(coeffs).expect("same algebra")
    }

    /// Embed an 𝔪-vector into the compact algebra.
    pub fn embed(&self, v: &MVector) -> LieElement {
        let mut coeffs = DVector::zeros(self.alg.dim());
        for (k, &(a, b)) in v.pairs.iter().enumerate() {
            coeffs[self.m_indices[2 * k]] = a;
            coeffs[self.m_indices[2 * k + 1]] = b;
        }
        self.alg.element(coeffs).expect("constructed to length")
    }

    /// The zero 𝔪-vector.
    pub fn zero_m(&self) -> MVector {
        MVector {
            pairs: vec![(0.0, 0.0); self.complement.len()],
        }
    }

    /// A_α as an 𝔪-vector (α in the complement).
    pub fn a_vector(&self, root: &Root) -> Result<MVector> {
        let mut v = self.zero_m();
        let k = self.complement_position(root)?;
        v.pairs[k].0 = 1.0;
        Ok(v)
    }

    /// S_α as an 𝔪-vector (α in the complement).
    pub fn s_vector(&self, root: &Root) -> Result<MVector> {
        let mut v = self.zero_m();
        let k = self.complement_position(root)?;
        v.pairs[k].1 = 1.0;
        Ok(v)
    }

    fn complement_position(&self, root: &Root) -> Result<usize> {
        self.complement.iter().position(|r| r == root).ok_or_else(|| {
            Error::Usage(format!(
                "{} does not lie in the complement of this flag",
                self.alg.root_system().label(root)
            ))
        })
    }

    /// Metric scalar product B_Λ(U, V) = Σ_α 2 λ_{σ(α)} (a_α a'_α + b_α b'_α).
    pub fn metric_product(&self, metric: &InvariantMetric, u: &MVector, v: &MVector) -> f64 {
        let mut acc = 0.0;
        for (k, (pu, pv)) in u.pairs.iter().zip(&v.pairs).enumerate() {
            let lam = metric.lambdas[self.comp_of[k]];
            acc += 2.0 * lam * (pu.0 * pv.0 + pu.1 * pv.1);
        }
        acc
    }

    /// B_Λ evaluated on full compact-basis coefficient vectors, pairing only
    /// the 𝔪-slots.
    pub fn metric_product_coeffs(
        &self,
        metric: &InvariantMetric,
        u: &DVector<f64>,
        v: &DVector<f64>,
    ) -> f64 {
        let mut acc = 0.0;
        for (slot, &idx) in self.m_indices.iter().enumerate() {
            let lam = metric.lambdas[self.comp_of[slot / 2]];
            acc += 2.0 * lam * u[idx] * v[idx];
        }
        acc
    }

    /// Whether all nonzero coefficients of `v` lie in components of `protected`.
    pub fn is_subordinated(&self, v: &MVector, protected: &[usize]) -> bool {
        v.pairs.iter().enumerate().all(|(k, &(a, b))| {
            (a == 0.0 && b == 0.0) || protected.contains(&self.comp_of[k])
        })
    }

    /// The all-ones (normal) metric.
    pub fn normal_metric(&self) -> InvariantMetric {
        InvariantMetric {
            lambdas: vec![1.0; self.components.len()],
        }
    }

    /// Metric from per-component weights.
    pub fn metric(&self, lambdas: Vec<f64>) -> Result<InvariantMetric> {
        if lambdas.len() != self.components.len() {
            return Err(Error::Usage(format!(
                "expected {} metric weights, got {}",
                self.components.len(),
                lambdas.len()
            )));
        }
        InvariantMetric::new(lambdas)
    }

    /// Serializable descriptor (family, rank, Θ as 1-based simple indices).
    pub fn descriptor(&self) -> FlagDescriptor {
        let rs = self.alg.root_system();
        FlagDescriptor {
            family: rs.family(),
            rank: rs.rank(),
            theta: self
                .theta
                .iter()
                .map(|t| rs.simple_index(t).unwrap() + 1)
                .collect(),
            lambda: None,
        }
    }

    /// Descriptor carrying the metric weights as well.
    pub fn descriptor_with_metric(&self, metric: &InvariantMetric) -> FlagDescriptor {
        let mut desc = self.descriptor();
        desc.lambda = Some(metric.lambdas().to_vec());
        desc
    }

    /// Rebuild a flag space from a descriptor.
    pub fn from_descriptor(desc: &FlagDescriptor) -> Result<Self> {
        let alg = Algebra::shared(desc.family, desc.rank)?;
        Self::from_simple_indices(alg, &desc.theta)
    }
}

/// An invariant metric: one positive weight per isotropy component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantMetric {
    lambdas: Vec<f64>,
}

impl InvariantMetric {
    /// Metric from explicit weights; all must be positive.
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::Domain(format!(
                "metric weights must be positive, got {lambdas:?}"
            )));
        }
        Ok(InvariantMetric { lambdas })
    }

    /// Weight of one component.
    pub fn lambda(&self, component: usize) -> f64 {
        self.lambdas[component]
    }

    /// All weights.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// Number of components covered.
    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    /// Whether the weight list is empty (degenerate point flag).
    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Whether all weights coincide (normal metric up to scale).
    pub fn is_normal(&self) -> bool {
        self.lambdas
            .windows(2)
            .all(|w| (w[0] - w[1]).abs() <= 1e-15 * w[0].abs().max(1.0))
    }

    /// Uniform scalar multiple r·Λ.
    pub fn scaled(&self, r: f64) -> Result<InvariantMetric> {
        InvariantMetric::new(self.lambdas.iter().map(|&l| r * l).collect())
    }

    /// Perturbation leaving the protected components untouched:
    /// λ_σ ↦ λ_σ + ξ_σ off `protected`, with ξ_σ = 0 required on it.
    pub fn perturb(&self, protected: &[usize], xi: &[f64]) -> Result<InvariantMetric> {
        if xi.len() != self.lambdas.len() {
            return Err(Error::Usage(format!(
                "expected {} perturbation entries, got {}",
                self.lambdas.len(),
                xi.len()
            )));
        }
        for &p in protected {
            if p >= self.lambdas.len() {
                return Err(Error::Usage(format!("component index {p} out of range")));
            }
            if xi[p] != 0.0 {
                return Err(Error::Usage(format!(
                    "perturbation must vanish on protected component {p}"
                )));
            }
        }
        let lambdas: Vec<f64> = self
            .lambdas
            .iter()
            .zip(xi)
            .map(|(&l, &x)| l + x)
            .collect();
        if let Some((k, &bad)) = lambdas.iter().enumerate().find(|(_, &l)| !(l > 0.0)) {
            return Err(Error::Domain(format!(
                "perturbed weight {bad} on component {k} is not positive"
            )));
        }
        Ok(InvariantMetric { lambdas })
    }

    /// Uniform perturbation: λ ↦ λ + ξ off `protected`, unchanged on it.
    pub fn perturb_uniform(&self, protected: &[usize], xi: f64) -> Result<InvariantMetric> {
        let xi_vec: Vec<f64> = (0..self.lambdas.len())
            .map(|k| if protected.contains(&k) { 0.0 } else { xi })
            .collect();
        self.perturb(protected, &xi_vec)
    }
}

/// Tangent vector stored as (a_α, b_α) pairs over the complement roots.
#[derive(Debug, Clone, PartialEq)]
pub struct MVector {
    pub(crate) pairs: Vec<(f64, f64)>,
}

impl MVector {
    /// Coefficient pairs in complement order.
    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    /// Build from raw pairs.
    pub fn from_pairs(pairs: Vec<(f64, f64)>) -> Self {
        MVector { pairs }
    }

    /// Sum of two vectors over the same flag.
    pub fn add(&self, other: &MVector) -> MVector {
        MVector {
            pairs: self
                .pairs
                .iter()
                .zip(&other.pairs)
                .map(|(p, q)| (p.0 + q.0, p.1 + q.1))
                .collect(),
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, c: f64) -> MVector {
        MVector {
            pairs: self.pairs.iter().map(|p| (c * p.0, c * p.1)).collect(),
        }
    }

    /// Whether every coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.pairs.iter().all(|&(a, b)| a == 0.0 && b == 0.0)
    }
}

/// JSON-facing description of a flag space and (optionally) a metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagDescriptor {
    /// Root-system family.
    pub family: Family,
    /// Root-system rank.
    pub rank: usize,
    /// Θ as 1-based indices into the simple system.
    pub theta: Vec<usize>,
    /// Metric weights per component, when relevant.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<f64>>,
}
