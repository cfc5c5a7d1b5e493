//! Matrix realizations of the compact real forms, Killing forms, brackets,
//! and structure constants.
//!
//! The Weyl generators are normalized so that (X_α, X_{−α}) = 1 with the
//! Killing form realized as c·tr(XY), c = 2N for 𝔰𝔩(N, ℂ) and c = 2M+2 for
//! 𝔰𝔭(2M, ℂ). The compact basis is {A_α, S_α, iH_β} with A_α = X_α − X_{−α}
//! and S_α = i(X_α + X_{−α}); both then have Killing square −2. Structure
//! constants are read off the explicit matrices, so their signs are fixed by
//! the generator formulas and nothing else.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::{Complex, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};
use crate::roots::{Family, Root, RootSystem};

/// Complex dense matrix in the defining representation.
pub type CMat = DMatrix<Complex<f64>>;

/// Residual bound for re-expanding a matrix over the compact basis.
const EXPANSION_TOL: f64 = 1e-9;

/// Tag identifying a compact-basis vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisTag {
    /// A_α for the positive root with this enumeration index.
    A(usize),
    /// S_α for the positive root with this enumeration index.
    S(usize),
    /// iH_β for the simple root with this index.
    IH(usize),
}

/// A compact-basis vector together with its matrix realization.
#[derive(Debug, Clone)]
pub struct CompactBasisElement {
    /// Which basis vector this is.
    pub tag: BasisTag,
    /// Matrix in the defining representation.
    pub matrix: CMat,
}

/// Identity of an algebra, used to reject cross-algebra operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgebraId {
    /// Root-system family.
    pub family: Family,
    /// Root-system rank.
    pub rank: usize,
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// Element of the compact real form, stored as real coefficients over the
/// compact basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LieElement {
    pub(crate) id: AlgebraId,
    pub(crate) coeffs: DVector<f64>,
}

impl LieElement {
    /// Coefficients over the compact basis (A/S interleaved, then iH block).
    pub fn coeffs(&self) -> &DVector<f64> {
        &self.coeffs
    }

    /// Algebra this element belongs to.
    pub fn id(&self) -> AlgebraId {
        self.id
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coeff_norm(&self) -> f64 {
        self.coeffs.norm()
    }

    /// Sum of two elements of the same algebra.
    pub fn add(&self, other: &LieElement) -> LieElement {
        assert_eq!(self.id, other.id, "elements from different algebras");
        LieElement {
            id: self.id,
            coeffs: &self.coeffs + &other.coeffs,
        }
    }

    /// Difference of two elements of the same algebra.
    pub fn sub(&self, other: &LieElement) -> LieElement {
        assert_eq!(self.id, other.id, "elements from different algebras");
        LieElement {
            id: self.id,
            coeffs: &self.coeffs - &other.coeffs,
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, c: f64) -> LieElement {
        LieElement {
            id: self.id,
            coeffs: &self.coeffs * c,
        }
    }
}

/// Sparse entry list of a basis matrix.
type Triplets = Vec<(usize, usize, Complex<f64>)>;

/// A root system together with its explicit matrix realization and the
/// derived compact-basis data.
#[derive(Debug, Clone)]
pub struct Algebra {
    rs: RootSystem,
    id: AlgebraId,
    rep_dim: usize,
    killing_scale: f64,
    /// Weyl generators X_α, aligned with `rs.roots()`.
    generators: Vec<CMat>,
    root_index: HashMap<Root, usize>,
    /// H_α = [X_α, X_{−α}] for positive roots.
    cartan_pos: Vec<CMat>,
    basis_mats: Vec<CMat>,
    basis_sparse: Vec<Triplets>,
    basis_tags: Vec<BasisTag>,
    dim: usize,
    /// Gram matrix of −(·,·) on the compact basis (positive definite).
    minus_gram: DMatrix<f64>,
    cartan_chol: nalgebra::Cholesky<f64, Dyn>,
}

fn czero() -> Complex<f64> {
    Complex::new(0.0, 0.0)
}

/// Plain matrix commutator.
pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

impl Algebra {
    /// Build the realization for the given family and rank.
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let rs = RootSystem::new(family, rank)?;
        Self::from_root_system(rs)
    }

    /// Build the realization on top of an existing root system.
    pub fn from_root_system(rs: RootSystem) -> Result<Self> {
        let id = AlgebraId {
            family: rs.family(),
            rank: rs.rank(),
        };
        let (rep_dim, killing_scale) = match rs.family() {
            Family::A => {
                let n = rs.rank() + 1;
                (n, 2.0 * n as f64)
            }
            Family::C => {
                let m = rs.rank();
                (2 * m, 2.0 * m as f64 + 2.0)
            }
        };

        let generators: Vec<CMat> = rs
            .roots()
            .iter()
            .map(|r| generator_matrix(&rs, rep_dim, r))
            .collect();
        let root_index: HashMap<Root, usize> = rs
            .roots()
            .iter()
            .enumerate()
            .map(|(k, r)| (r.clone(), k))
            .collect();

        let npos = rs.positive().len();
        let cartan_pos: Vec<CMat> = (0..npos)
            .map(|k| commutator(&generators[k], &generators[npos + k]))
            .collect();

        let mut basis_mats = Vec::with_capacity(2 * npos + rs.rank());
        let mut basis_tags = Vec::with_capacity(2 * npos + rs.rank());
        let i = Complex::new(0.0, 1.0);
        for k in 0..npos {
            basis_mats.push(&generators[k] - &generators[npos + k]);
            basis_tags.push(BasisTag::A(k));
            basis_mats.push((&generators[k] + &generators[npos + k]) * i);
            basis_tags.push(BasisTag::S(k));
        }
        for (s, beta) in rs.simple().iter().enumerate() {
            let k = rs.positive_index(beta).expect("simple roots are positive");
            basis_mats.push(&cartan_pos[k] * i);
            basis_tags.push(BasisTag::IH(s));
        }
        let dim = basis_mats.len();

        let basis_sparse: Vec<Triplets> = basis_mats
            .iter()
            .map(|m| {
                let mut t = Vec::new();
                for r in 0..rep_dim {
                    for c in 0..rep_dim {
                        let v = m[(r, c)];
                        if v != czero() {
                            t.push((r, c, v));
                        }
                    }
                }
                t
            })
            .collect();

        let mut minus_gram = DMatrix::zeros(dim, dim);
        for a in 0..dim {
            for b in a..dim {
                let v = -killing_scale * sparse_pair(&basis_mats[a], &basis_sparse[b]).re;
                minus_gram[(a, b)] = v;
                minus_gram[(b, a)] = v;
            }
        }

        let ell = rs.rank();
        let cartan_block = minus_gram.view((dim - ell, dim - ell), (ell, ell)).into_owned();
        let cartan_chol = nalgebra::Cholesky::new(cartan_block).ok_or_else(|| {
            Error::Internal("Cartan Gram block is not positive definite".into())
        })?;

        Ok(Algebra {
            rs,
            id,
            rep_dim,
            killing_scale,
            generators,
            root_index,
            cartan_pos,
            basis_mats,
            basis_sparse,
            basis_tags,
            dim,
            minus_gram,
            cartan_chol,
        })
    }

    /// Shared-ownership constructor, convenient for flag spaces.
    pub fn shared(family: Family, rank: usize) -> Result<Arc<Self>> {
        Ok(Arc::new(Self::new(family, rank)?))
    }

    /// Underlying root system.
    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    /// Identity of this algebra.
    pub fn id(&self) -> AlgebraId {
        self.id
    }

    /// Real dimension of the compact form.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Size of the defining representation.
    pub fn rep_dim(&self) -> usize {
        self.rep_dim
    }

    /// Constant c with (X, Y) = c·tr(XY).
    pub fn killing_scale(&self) -> f64 {
        self.killing_scale
    }

    /// Tags of the compact basis, in coefficient order.
    pub fn basis_tags(&self) -> &[BasisTag] {
        &self.basis_tags
    }

    /// The compact basis with matrix realizations.
    pub fn compact_basis(&self) -> Vec<CompactBasisElement> {
        self.basis_tags
            .iter()
            .zip(&self.basis_mats)
            .map(|(&tag, m)| CompactBasisElement {
                tag,
                matrix: m.clone(),
            })
            .collect()
    }

    /// Matrix of a compact-basis vector.
    pub fn basis_matrix(&self, idx: usize) -> &CMat {
        &self.basis_mats[idx]
    }

    /// Weyl generator X_α.
    pub fn generator(&self, root: &Root) -> Result<&CMat> {
        self.root_index
            .get(root)
            .map(|&k| &self.generators[k])
            .ok_or_else(|| Error::Usage(format!("{:?} is not a root of {}", root.coords(), self.id)))
    }

    /// Cartan element H_α = [X_α, X_{−α}] for a positive root.
    pub fn cartan_element(&self, root: &Root) -> Result<&CMat> {
        let k = self
            .rs
            .positive_index(root)
            .ok_or_else(|| Error::Usage(format!("{:?} is not a positive root", root.coords())))?;
        Ok(&self.cartan_pos[k])
    }

    /// Coefficient index of A_α (positive α).
    pub fn a_index(&self, root: &Root) -> Result<usize> {
        let k = self
            .rs
            .positive_index(root)
            .ok_or_else(|| Error::Usage(format!("{:?} is not a positive root", root.coords())))?;
        Ok(2 * k)
    }

    /// Coefficient index of S_α (positive α).
    pub fn s_index(&self, root: &Root) -> Result<usize> {
        Ok(self.a_index(root)? + 1)
    }

    /// The zero element.
    pub fn zero(&self) -> LieElement {
        LieElement {
            id: self.id,
            coeffs: DVector::zeros(self.dim),
        }
    }

    /// Element from a full coefficient vector.
    pub fn element(&self, coeffs: DVector<f64>) -> Result<LieElement> {
        if coeffs.len() != self.dim {
            return Err(Error::Usage(format!(
                "coefficient vector has length {}, algebra dimension is {}",
                coeffs.len(),
                self.dim
            )));
        }
        Ok(LieElement {
            id: self.id,
            coeffs,
        })
    }

    /// The basis element with the given coefficient index.
    pub fn basis_element(&self, idx: usize) -> LieElement {
        let mut coeffs = DVector::zeros(self.dim);
        coeffs[idx] = 1.0;
        LieElement {
            id: self.id,
            coeffs,
        }
    }

    /// A_α as an element (positive α).
    pub fn a_element(&self, root: &Root) -> Result<LieElement> {
        Ok(self.basis_element(self.a_index(root)?))
    }

    /// S_α as an element (positive α).
    pub fn s_element(&self, root: &Root) -> Result<LieElement> {
        Ok(self.basis_element(self.s_index(root)?))
    }

    /// iH_β as an element (simple β).
    pub fn ih_element(&self, simple_idx: usize) -> LieElement {
        self.basis_element(self.dim - self.rs.rank() + simple_idx)
    }

    /// Matrix realization of an element.
    pub fn matrix_of(&self, el: &LieElement) -> CMat {
        let mut m = CMat::zeros(self.rep_dim, self.rep_dim);
        for (idx, triplets) in self.basis_sparse.iter().enumerate() {
            let c = el.coeffs[idx];
            if c != 0.0 {
                for &(r, col, v) in triplets {
                    m[(r, col)] += v * c;
                }
            }
        }
        m
    }

    /// Expand a matrix over the compact basis; also returns the residual of
    /// the reconstruction (Frobenius norm of the unexplained part).
    pub fn expand_matrix(&self, m: &CMat) -> (DVector<f64>, f64) {
        let mut coeffs = DVector::zeros(self.dim);
        let ell = self.rs.rank();
        let n_as = self.dim - ell;
        // A/S coefficients: each basis vector has Killing square −2 and the
        // A/S block is orthogonal.
        for idx in 0..n_as {
            let pair = self.killing_scale * sparse_pair(m, &self.basis_sparse[idx]).re;
            coeffs[idx] = -pair / 2.0;
        }
        // Cartan block: solve the (positive definite) Gram system.
        let mut rhs = DVector::zeros(ell);
        for s in 0..ell {
            rhs[s] = -self.killing_scale * sparse_pair(m, &self.basis_sparse[n_as + s]).re;
        }
        let cart = self.cartan_chol.solve(&rhs);
        for s in 0..ell {
            coeffs[n_as + s] = cart[s];
        }
        let recon = self.matrix_of(&LieElement {
            id: self.id,
            coeffs: coeffs.clone(),
        });
        let residual = (m - recon).norm();
        (coeffs, residual)
    }

    /// Expand a matrix, failing when part of it is not in the compact form.
    pub fn element_from_matrix(&self, m: &CMat) -> Result<LieElement> {
        let (coeffs, residual) = self.expand_matrix(m);
        let scale = 1.0_f64.max(m.norm());
        if residual > EXPANSION_TOL * scale {
            return Err(Error::Internal(format!(
                "matrix re-expansion residual {residual:.3e} exceeds tolerance"
            )));
        }
        Ok(LieElement {
            id: self.id,
            coeffs,
        })
    }

    fn check_id(&self, el: &LieElement) -> Result<()> {
        if el.id != self.id {
            return Err(Error::Usage(format!(
                "element of {} used with algebra {}",
                el.id, self.id
            )));
        }
        Ok(())
    }

    /// Cartan–Killing form of two elements.
    pub fn killing(&self, u: &LieElement, v: &LieElement) -> Result<f64> {
        self.check_id(u)?;
        self.check_id(v)?;
        Ok(-(u.coeffs.dot(&(&self.minus_gram * &v.coeffs))))
    }

    /// Killing form evaluated directly on matrices, c·tr(UV).
    pub fn killing_matrices(&self, u: &CMat, v: &CMat) -> Complex<f64> {
        let mut tr = czero();
        for r in 0..self.rep_dim {
            for c in 0..self.rep_dim {
                tr += u[(r, c)] * v[(c, r)];
            }
        }
        tr * self.killing_scale
    }

    /// Gram matrix of −(·,·) on the compact basis.
    pub fn minus_killing_gram(&self) -> &DMatrix<f64> {
        &self.minus_gram
    }

    /// Lie bracket: matrix commutator re-expanded over the compact basis.
    pub fn bracket(&self, u: &LieElement, v: &LieElement) -> Result<LieElement> {
        self.check_id(u)?;
        self.check_id(v)?;
        let m = commutator(&self.matrix_of(u), &self.matrix_of(v));
        self.element_from_matrix(&m)
    }

    /// Structure constant m_{α,β} with [X_α, X_β] = m_{α,β} X_{α+β}.
    ///
    /// Returns 0 when α+β is not a root.
    pub fn structure_constant(&self, alpha: &Root, beta: &Root) -> Result<f64> {
        let sum = alpha.plus(beta);
        if !self.rs.contains(&sum) {
            // Also covers α + β = 0, where the commutator is a Cartan element.
            return Ok(0.0);
        }
        let xa = self.generator(alpha)?;
        let xb = self.generator(beta)?;
        let m = commutator(xa, xb);
        // (X_{α+β}, X_{−(α+β)}) = 1, so pairing against X_{−(α+β)} reads the
        // coefficient directly.
        let dual = self.generator(&sum.neg())?;
        let val = self.killing_matrices(&m, dual);
        Ok(val.re)
    }

    /// Full structure-constant table over ordered pairs of roots.
    pub fn structure_table(&self) -> Result<StructureConstantTable> {
        let mut map = HashMap::new();
        for a in self.rs.roots() {
            for b in self.rs.roots() {
                let m = self.structure_constant(a, b)?;
                if m != 0.0 {
                    map.insert((a.clone(), b.clone()), m);
                }
            }
        }
        Ok(StructureConstantTable { map })
    }

    /// Matrix of ad(X) over the compact basis: column j holds [X, e_j].
    pub fn ad_matrix(&self, x: &LieElement) -> Result<DMatrix<f64>> {
        self.check_id(x)?;
        let xm = self.matrix_of(x);
        let mut ad = DMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket_with_basis(&xm, j)?;
            ad.set_column(j, &col);
        }
        Ok(ad)
    }

    /// [X, e_j] for a dense X and sparse basis vector, expanded to coefficients.
    fn bracket_with_basis(&self, xm: &CMat, j: usize) -> Result<DVector<f64>> {
        let n = self.rep_dim;
        let mut m = CMat::zeros(n, n);
        for &(r, c, v) in &self.basis_sparse[j] {
            // X·E-part: contributes X[:, r]·v to column c.
            for row in 0..n {
                m[(row, c)] += xm[(row, r)] * v;
            }
            // E-part·X: contributes v·X[c, :] to row r.
            for col in 0..n {
                m[(r, col)] -= v * xm[(c, col)];
            }
        }
        let (coeffs, residual) = self.expand_matrix(&m);
        let scale = 1.0_f64.max(m.norm());
        if residual > EXPANSION_TOL * scale {
            return Err(Error::Internal(format!(
                "ad-matrix column residual {residual:.3e} exceeds tolerance"
            )));
        }
        Ok(coeffs)
    }

    /// α(H) = (H_α, H) for a root α and Cartan matrix H.
    pub fn root_value_on(&self, alpha: &Root, h: &CMat) -> Result<f64> {
        let ha = if self.rs.is_positive(alpha) {
            self.cartan_element(alpha)?.clone()
        } else {
            let pos = alpha.neg();
            -self.cartan_element(&pos)?.clone()
        };
        Ok(self.killing_matrices(&ha, h).re)
    }
}

/// Killing pairing tr(U·V) with V given by its sparse entry list (no scale).
fn sparse_pair(u: &CMat, v: &Triplets) -> Complex<f64> {
    let mut tr = czero();
    for &(r, c, val) in v {
        tr += u[(c, r)] * val;
    }
    tr
}

fn generator_matrix(rs: &RootSystem, rep_dim: usize, root: &Root) -> CMat {
    let mut m = CMat::zeros(rep_dim, rep_dim);
    let one = |x: f64| Complex::new(x, 0.0);
    match rs.family() {
        Family::A => {
            let n = rs.rank() + 1;
            let s = 1.0 / (2.0 * n as f64).sqrt();
            let i = root.coords().iter().position(|&c| c == 1).expect("A root");
            let j = root.coords().iter().position(|&c| c == -1).expect("A root");
            m[(i, j)] = one(s);
        }
        Family::C => {
            let mm = rs.rank();
            let mconst = 1.0 / (2.0 * mm as f64 + 2.0).sqrt();
            let w = mconst / 2.0_f64.sqrt();
            let plus: Vec<usize> = root
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(k, _)| k)
                .collect();
            let minus: Vec<usize> = root
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, &c)| c < 0)
                .map(|(k, _)| k)
                .collect();
            match (root.coords().iter().sum::<i64>(), plus.len(), minus.len()) {
                // ε_i − ε_j
                (0, 1, 1) => {
                    let (i, j) = (plus[0], minus[0]);
                    m[(i, j)] = one(w);
                    m[(mm + j, mm + i)] = one(-w);
                }
                // ε_i + ε_j, i ≠ j
                (2, 2, 0) => {
                    let (i, j) = (plus[0], plus[1]);
                    m[(i, mm + j)] = one(w);
                    m[(j, mm + i)] = one(w);
                }
                // −ε_i − ε_j, i ≠ j
                (-2, 0, 2) => {
                    let (i, j) = (minus[0], minus[1]);
                    m[(mm + i, j)] = one(w);
                    m[(mm + j, i)] = one(w);
                }
                // ±2ε_i
                (2, 1, 0) => {
                    let i = plus[0];
                    m[(i, mm + i)] = one(mconst);
                }
                (-2, 0, 1) => {
                    let i = minus[0];
                    m[(mm + i, i)] = one(mconst);
                }
                _ => unreachable!("not a C-type root"),
            }
        }
    }
    m
}

/// Table of structure constants m_{α,β} over pairs with α+β a root.
#[derive(Debug, Clone)]
pub struct StructureConstantTable {
    map: HashMap<(Root, Root), f64>,
}

impl StructureConstantTable {
    /// m_{α,β}; zero when α+β is not a root.
    pub fn get(&self, alpha: &Root, beta: &Root) -> f64 {
        self.map
            .get(&(alpha.clone(), beta.clone()))
            .copied()
            .unwrap_or(0.0)
    }

    /// All stored (α, β, m) entries.
    pub fn entries(&self) -> impl Iterator<Item = (&Root, &Root, f64)> {
        self.map.iter().map(|((a, b), &m)| (a, b, m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXACT: f64 = 1e-12;

    fn sqrt6() -> f64 {
        6.0_f64.sqrt()
    }

    #[test]
    fn sl3_generator_single_entry() {
        let alg = Algebra::new(Family::A, 2).unwrap();
        let rs = alg.root_system();
        let a12 = rs.parse_label("a12").unwrap();
        let x = alg.generator(&a12).unwrap();
        let expect = sqrt6() / 6.0;
        assert!((x[(0, 1)].re - expect).abs() < EXACT);
        let nonzero = (0..3)
            .flat_map(|r| (0..3).map(move |c| (r, c)))
            .filter(|&(r, c)| x[(r, c)] != Complex::new(0.0, 0.0))
            .count();
        assert_eq!(nonzero, 1);
    }

    #[test]
    fn weyl_normalization_pairs_to_one() {
        for (fam, rank) in [(Family::A, 2), (Family::C, 2), (Family::C, 3)] {
            let alg = Algebra::new(fam, rank).unwrap();
            for root in alg.root_system().roots() {
                let x = alg.generator(root).unwrap();
                let y = alg.generator(&root.neg()).unwrap();
                let v = alg.killing_matrices(x, y);
                assert!((v.re - 1.0).abs() < EXACT, "{fam:?}{rank} {:?}", root.coords());
                assert!(v.im.abs() < EXACT);
            }
        }
    }

    #[test]
    fn example_sp4_matrices() {
        // The n = 1 projective-space basis of 𝔰𝔭(2): every entry is one of
        // {0, ±√6/6, ±√3/6, ±1/12, ±1/6} in the displayed patterns.
        let alg = Algebra::new(Family::C, 2).unwrap();
        let rs = alg.root_system();
        let r6 = sqrt6() / 6.0;
        let r3 = 3.0_f64.sqrt() / 6.0;

        let entry = |m: &CMat, r: usize, c: usize| m[(r, c)];
        let a11 = alg.basis_matrix(alg.a_index(&rs.parse_label("a11").unwrap()).unwrap());
        assert!((entry(a11, 0, 2).re - r6).abs() < EXACT);
        assert!((entry(a11, 2, 0).re + r6).abs() < EXACT);
        assert!(a11.iter().map(|z| z.norm()).sum::<f64>() - 2.0 * r6 < EXACT);

        let s11 = alg.basis_matrix(alg.s_index(&rs.parse_label("a11").unwrap()).unwrap());
        assert!((entry(s11, 0, 2).im - r6).abs() < EXACT);
        assert!((entry(s11, 2, 0).im - r6).abs() < EXACT);

        let a12 = alg.basis_matrix(alg.a_index(&rs.parse_label("a12").unwrap()).unwrap());
        for (r, c, v) in [(0, 1, r3), (1, 0, -r3), (2, 3, r3), (3, 2, -r3)] {
            assert!((entry(a12, r, c).re - v).abs() < EXACT);
        }

        let s12 = alg.basis_matrix(alg.s_index(&rs.parse_label("a12").unwrap()).unwrap());
        for (r, c, v) in [(0, 1, r3), (1, 0, r3), (2, 3, -r3), (3, 2, -r3)] {
            assert!((entry(s12, r, c).im - v).abs() < EXACT);
        }

        let a12p = alg.basis_matrix(alg.a_index(&rs.parse_label("a12+").unwrap()).unwrap());
        for (r, c, v) in [(0, 3, r3), (1, 2, r3), (2, 1, -r3), (3, 0, -r3)] {
            assert!((entry(a12p, r, c).re - v).abs() < EXACT);
        }

        let s12p = alg.basis_matrix(alg.s_index(&rs.parse_label("a12+").unwrap()).unwrap());
        for (r, c) in [(0, 3), (1, 2), (2, 1), (3, 0)] {
            assert!((entry(s12p, r, c).im - r3).abs() < EXACT);
        }

        let ih12 = alg.ih_element(0);
        let ih12 = alg.matrix_of(&ih12);
        for (r, v) in [(0, 1.0 / 12.0), (1, -1.0 / 12.0), (2, -1.0 / 12.0), (3, 1.0 / 12.0)] {
            assert!((ih12[(r, r)].im - v).abs() < EXACT);
        }

        let ih22 = alg.ih_element(1);
        let ih22 = alg.matrix_of(&ih22);
        for (r, v) in [(0, 0.0), (1, 1.0 / 6.0), (2, 0.0), (3, -1.0 / 6.0)] {
            assert!((ih22[(r, r)].im - v).abs() < EXACT);
        }
    }

    #[test]
    fn compact_basis_killing_squares() {
        for (fam, rank) in [(Family::A, 2), (Family::C, 3)] {
            let alg = Algebra::new(fam, rank).unwrap();
            let g = alg.minus_killing_gram();
            let n_as = alg.dim() - rank;
            for i in 0..n_as {
                for j in 0..n_as {
                    let expect = if i == j { 2.0 } else { 0.0 };
                    assert!((g[(i, j)] - expect).abs() < EXACT);
                }
                // A/S block is orthogonal to the Cartan block.
                for j in n_as..alg.dim() {
                    assert!(g[(i, j)].abs() < EXACT);
                }
            }
        }
    }

    #[test]
    fn killing_rejects_mismatched_algebras() {
        let a2 = Algebra::new(Family::A, 2).unwrap();
        let c3 = Algebra::new(Family::C, 3).unwrap();
        let u = a2.basis_element(0);
        let v = c3.basis_element(0);
        assert!(a2.killing(&u, &v).is_err());
    }

    #[test]
    fn bracket_sl3_example() {
        let alg = Algebra::new(Family::A, 2).unwrap();
        let rs = alg.root_system();
        let a12 = alg.a_element(&rs.parse_label("a12").unwrap()).unwrap();
        let a23 = alg.a_element(&rs.parse_label("a23").unwrap()).unwrap();
        let out = alg.bracket(&a12, &a23).unwrap();
        let expect = alg
            .a_element(&rs.parse_label("a13").unwrap())
            .unwrap()
            .scale(sqrt6() / 6.0);
        assert!((out.sub(&expect)).coeff_norm() < EXACT);
        // [U, U] = 0.
        let zero = alg.bracket(&a12, &a12).unwrap();
        assert!(zero.coeff_norm() < EXACT);
    }

    #[test]
    fn bracket_a_s_gives_cartan() {
        for (fam, rank) in [(Family::A, 2), (Family::C, 3)] {
            let alg = Algebra::new(fam, rank).unwrap();
            let rs = alg.root_system().clone();
            for root in rs.positive() {
                let a = alg.a_element(root).unwrap();
                let s = alg.s_element(root).unwrap();
                let out = alg.bracket(&a, &s).unwrap();
                // 2iH_α expands over simple iH_β with the simple coordinates of α.
                let coords = rs.simple_coordinates(root).unwrap();
                let mut expect = alg.zero();
                for (s_idx, &c) in coords.iter().enumerate() {
                    expect = expect.add(&alg.ih_element(s_idx).scale(2.0 * c as f64));
                }
                assert!(
                    out.sub(&expect).coeff_norm() < EXACT,
                    "{fam:?}{rank} root {:?}",
                    root.coords()
                );
            }
        }
    }

    #[test]
    fn structure_constants_antisymmetry_and_cyclicity() {
        for (fam, rank) in [(Family::A, 2), (Family::C, 3)] {
            let alg = Algebra::new(fam, rank).unwrap();
            let rs = alg.root_system();
            for a in rs.roots() {
                for b in rs.roots() {
                    let m = alg.structure_constant(a, b).unwrap();
                    if !rs.contains(&a.plus(b)) {
                        assert_eq!(m, 0.0);
                        continue;
                    }
                    let m_ba = alg.structure_constant(b, a).unwrap();
                    assert!((m + m_ba).abs() < EXACT);
                    let m_neg = alg.structure_constant(&a.neg(), &b.neg()).unwrap();
                    assert!((m + m_neg).abs() < EXACT);
                    // Cyclic identity on α + β + γ = 0.
                    let c = a.plus(b).neg();
                    let m_bc = alg.structure_constant(b, &c).unwrap();
                    let m_ca = alg.structure_constant(&c, a).unwrap();
                    assert!((m - m_bc).abs() < EXACT && (m - m_ca).abs() < EXACT);
                }
            }
        }
    }

    #[test]
    fn sl3_structure_constant_value() {
        let alg = Algebra::new(Family::A, 2).unwrap();
        let rs = alg.root_system();
        let m = alg
            .structure_constant(&rs.parse_label("a12").unwrap(), &rs.parse_label("a23").unwrap())
            .unwrap();
        assert!((m - sqrt6() / 6.0).abs() < EXACT);
    }

    #[test]
    fn ad_matrix_basics() {
        let alg = Algebra::new(Family::C, 2).unwrap();
        let rs = alg.root_system();
        let zero = alg.ad_matrix(&alg.zero()).unwrap();
        assert!(zero.norm() < EXACT);

        let a11 = alg.a_element(&rs.parse_label("a11").unwrap()).unwrap();
        let ad = alg.ad_matrix(&a11).unwrap();
        // ad(X)X = 0.
        assert!((&ad * &a11.coeffs).norm() < EXACT);

        // Restricted to span{A_12, A_12+} the action is the rotation
        // generator with rate √6/6 (eigenvalues ±i·√6/6).
        let i12 = alg.a_index(&rs.parse_label("a12").unwrap()).unwrap();
        let i12p = alg.a_index(&rs.parse_label("a12+").unwrap()).unwrap();
        let rate = sqrt6() / 6.0;
        assert!((ad[(i12p, i12)] - rate).abs() < EXACT);
        assert!((ad[(i12, i12p)] + rate).abs() < EXACT);
        assert!(ad[(i12, i12)].abs() < EXACT && ad[(i12p, i12p)].abs() < EXACT);
    }

    #[test]
    fn ad_antisymmetric_wrt_minus_killing() {
        let alg = Algebra::new(Family::C, 3).unwrap();
        let mut coeffs = DVector::zeros(alg.dim());
        for k in 0..alg.dim() {
            coeffs[k] = ((k * 2654435761) % 97) as f64 / 97.0 - 0.5;
        }
        let x = alg.element(coeffs).unwrap();
        let ad = alg.ad_matrix(&x).unwrap();
        let g = alg.minus_killing_gram();
        let skew = g * &ad + ad.transpose() * g;
        assert!(skew.norm() < 1e-10);
    }

    #[test]
    fn killing_matches_adjoint_trace_form() {
        for (fam, rank) in [(Family::A, 2), (Family::C, 2)] {
            let alg = Algebra::new(fam, rank).unwrap();
            let mk = |seed: usize| {
                let mut c = DVector::zeros(alg.dim());
                for k in 0..alg.dim() {
                    c[k] = (((k + seed) * 40503) % 101) as f64 / 101.0 - 0.5;
                }
                alg.element(c).unwrap()
            };
            let (u, v) = (mk(1), mk(7));
            let direct = alg.killing(&u, &v).unwrap();
            let ad_u = alg.ad_matrix(&u).unwrap();
            let ad_v = alg.ad_matrix(&v).unwrap();
            let trace_form = (&ad_u * &ad_v).trace();
            assert!(
                (direct - trace_form).abs() <= 1e-10 * direct.abs().max(1.0),
                "{fam:?}{rank}: {direct} vs {trace_form}"
            );
        }
    }

    #[test]
    fn structure_table_lookup() {
        let alg = Algebra::new(Family::A, 2).unwrap();
        let rs = alg.root_system();
        let table = alg.structure_table().unwrap();
        let a12 = rs.parse_label("a12").unwrap();
        let a23 = rs.parse_label("a23").unwrap();
        assert!((table.get(&a12, &a23) - sqrt6() / 6.0).abs() < EXACT);
        // Non-root sums are absent from the table and read back as zero.
        assert_eq!(table.get(&a12, &a12), 0.0);
        for (a, b, m) in table.entries() {
            assert!(rs.contains(&a.plus(b)));
            assert!(m != 0.0);
        }
    }

    #[test]
    fn element_round_trip() {
        let alg = Algebra::new(Family::C, 3).unwrap();
        let mut coeffs = DVector::zeros(alg.dim());
        for k in 0..alg.dim() {
            coeffs[k] = ((k * 7919) % 13) as f64 - 6.0;
        }
        let el = alg.element(coeffs.clone()).unwrap();
        let m = alg.matrix_of(&el);
        let (back, residual) = alg.expand_matrix(&m);
        assert!(residual < EXACT);
        assert!((back - coeffs).norm() < EXACT);
    }
}
