//! Root systems of types A and C with exact integer coordinates.
//!
//! Roots are stored as integer vectors in the ε-functional basis: for A_ℓ the
//! ambient space has dimension ℓ+1 and roots are ε_i − ε_j; for C_ℓ it has
//! dimension ℓ and roots are ±ε_i ± ε_j (i ≠ j) and ±2ε_i. Equality and
//! hashing are exact; no floating comparison is involved anywhere in this
//! module.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Classical family of the root system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// A_ℓ, realized in 𝔰𝔩(ℓ+1, ℂ).
    A,
    /// C_ℓ, realized in 𝔰𝔭(2ℓ, ℂ).
    C,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A => write!(f, "A"),
            Family::C => write!(f, "C"),
        }
    }
}

/// A root as an integer vector in the ε-basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    coords: Vec<i64>,
}

impl Root {
    /// Build a root from ε-coordinates.
    pub fn new(coords: Vec<i64>) -> Self {
        Root { coords }
    }

    /// ε-coordinates of the root.
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Coordinatewise sum (not necessarily a root).
    pub fn plus(&self, other: &Root) -> Root {
        Root::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Coordinatewise difference (not necessarily a root).
    pub fn minus(&self, other: &Root) -> Root {
        Root::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// The negated root.
    pub fn neg(&self) -> Root {
        Root::new(self.coords.iter().map(|a| -a).collect())
    }

    /// Whether all coordinates vanish.
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&a| a == 0)
    }
}

/// ε_i − ε_j (1-based indices).
fn eps_diff(ambient: usize, i: usize, j: usize) -> Root {
    let mut c = vec![0i64; ambient];
    c[i - 1] += 1;
    c[j - 1] -= 1;
    Root::new(c)
}

/// ε_i + ε_j (1-based; i = j gives 2ε_i).
fn eps_sum(ambient: usize, i: usize, j: usize) -> Root {
    let mut c = vec![0i64; ambient];
    c[i - 1] += 1;
    c[j - 1] += 1;
    Root::new(c)
}

/// A full root system with the fixed simple-system choice
/// {ε_i − ε_{i+1}} for A_ℓ and {ε_i − ε_{i+1}, 2ε_ℓ} for C_ℓ.
#[derive(Debug, Clone)]
pub struct RootSystem {
    family: Family,
    rank: usize,
    ambient: usize,
    roots: Vec<Root>,
    positive: Vec<Root>,
    simple: Vec<Root>,
    pos_index: HashMap<Root, usize>,
    all: HashMap<Root, ()>,
}

impl RootSystem {
    /// Enumerate the root system of the given family and rank.
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        match family {
            Family::A if rank < 1 => {
                return Err(Error::Config("family A requires rank >= 1".into()))
            }
            Family::C if rank < 2 => {
                return Err(Error::Config("family C requires rank >= 2".into()))
            }
            _ => {}
        }
        let ambient = match family {
            Family::A => rank + 1,
            Family::C => rank,
        };
        let mut positive = Vec::new();
        match family {
            Family::A => {
                for i in 1..=ambient {
                    for j in (i + 1)..=ambient {
                        positive.push(eps_diff(ambient, i, j));
                    }
                }
            }
            Family::C => {
                // Pairs ε_i ∓ ε_j first, then the long roots 2ε_i.
                for i in 1..=ambient {
                    for j in (i + 1)..=ambient {
                        positive.push(eps_diff(ambient, i, j));
                        positive.push(eps_sum(ambient, i, j));
                    }
                }
                for i in 1..=ambient {
                    positive.push(eps_sum(ambient, i, i));
                }
            }
        }
        let mut simple = Vec::new();
        for i in 1..rank {
            simple.push(eps_diff(ambient, i, i + 1));
        }
        match family {
            Family::A => simple.push(eps_diff(ambient, rank, rank + 1)),
            Family::C => simple.push(eps_sum(ambient, rank, rank)),
        }

        let mut roots = positive.clone();
        roots.extend(positive.iter().map(Root::neg));
        let pos_index = positive
            .iter()
            .enumerate()
            .map(|(k, r)| (r.clone(), k))
            .collect();
        let all = roots.iter().map(|r| (r.clone(), ())).collect();
        Ok(RootSystem {
            family,
            rank,
            ambient,
            roots,
            positive,
            simple,
            pos_index,
            all,
        })
    }

    /// Family of the system.
    pub fn family(&self) -> Family {
        self.family
    }

    /// Rank of the system.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Dimension of the ε-coordinate space.
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// All roots, positive first.
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    /// Positive roots in canonical enumeration order.
    pub fn positive(&self) -> &[Root] {
        &self.positive
    }

    /// The simple system.
    pub fn simple(&self) -> &[Root] {
        &self.simple
    }

    /// Whether `r` is a root of the system.
    pub fn contains(&self, r: &Root) -> bool {
        self.all.contains_key(r)
    }

    /// Whether `r` is a positive root.
    pub fn is_positive(&self, r: &Root) -> bool {
        self.pos_index.contains_key(r)
    }

    /// Index of a positive root in the canonical enumeration.
    pub fn positive_index(&self, r: &Root) -> Option<usize> {
        self.pos_index.get(r).copied()
    }

    /// Index of a simple root in the simple system.
    pub fn simple_index(&self, r: &Root) -> Option<usize> {
        self.simple.iter().position(|s| s == r)
    }

    /// Expansion of a root in the simple basis (integer coefficients).
    ///
    /// Returns `None` when `r` is not in the integer span of the simple
    /// system (never the case for actual roots).
    pub fn simple_coordinates(&self, r: &Root) -> Option<Vec<i64>> {
        // The simple-root coordinate matrix is small; solve exactly by
        // elimination over rationals represented as integer pairs.
        solve_integer_combination(&self.simple, r)
    }

    /// Whether `r` lies in the rational span of the given roots.
    pub fn in_rational_span(&self, basis: &[Root], r: &Root) -> bool {
        in_rational_span(basis, r)
    }

    /// Human-readable label: `a13` for ε₁−ε₃, `a13+` for ε₁+ε₃, `a11` for 2ε₁.
    ///
    /// Indices of two digits or more are wrapped as `a[1,13]` / `a+[1,13]`.
    pub fn label(&self, r: &Root) -> String {
        if let Some(s) = self.try_label(r) {
            return s;
        }
        // Not of a recognized shape: fall back to coordinates.
        format!("{:?}", r.coords())
    }

    fn try_label(&self, r: &Root) -> Option<String> {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (k, &c) in r.coords().iter().enumerate() {
            match c {
                0 => {}
                1 => plus.push(k + 1),
                -1 => minus.push(k + 1),
                2 => {
                    plus.push(k + 1);
                    plus.push(k + 1);
                }
                -2 => {
                    minus.push(k + 1);
                    minus.push(k + 1);
                }
                _ => return None,
            }
        }
        let fmt_pair = |i: usize, j: usize, kind: &str, sign: &str| {
            // 2ε_i carries no plus marker: the diagonal label a{i}{i} is
            // unambiguous.
            let sum = kind == "sum" && i != j;
            if i < 10 && j < 10 {
                if sum {
                    format!("{sign}a{i}{j}+")
                } else {
                    format!("{sign}a{i}{j}")
                }
            } else if sum {
                format!("{sign}a+[{i},{j}]")
            } else {
                format!("{sign}a[{i},{j}]")
            }
        };
        match (plus.len(), minus.len()) {
            (1, 1) => Some(fmt_pair(plus[0], minus[0], "diff", "")),
            (2, 0) => Some(fmt_pair(plus[0], plus[1], "sum", "")),
            (0, 2) => Some(fmt_pair(minus[0], minus[1], "sum", "-")),
            _ => None,
        }
    }

    /// Parse a root label as produced by [`RootSystem::label`].
    pub fn parse_label(&self, s: &str) -> Result<Root> {
        let err = || Error::Usage(format!("cannot parse root label `{s}`"));
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let body = body.strip_prefix('a').ok_or_else(err)?;
        let (sum, body) = match (body.strip_prefix("+["), body.strip_suffix('+')) {
            (Some(inner), _) => (true, inner.strip_suffix(']').ok_or_else(err)?.to_string()),
            (None, Some(head)) => (true, head.to_string()),
            (None, None) => (false, body.to_string()),
        };
        let body = if let Some(inner) = body.strip_prefix('[') {
            inner.strip_suffix(']').ok_or_else(err)?.to_string()
        } else {
            body
        };
        let (i, j) = if body.contains(',') {
            let mut it = body.split(',');
            let i: usize = it.next().ok_or_else(err)?.trim().parse().map_err(|_| err())?;
            let j: usize = it.next().ok_or_else(err)?.trim().parse().map_err(|_| err())?;
            (i, j)
        } else {
            let digits: Vec<u32> = body.chars().map(|c| c.to_digit(10)).collect::<Option<_>>().ok_or_else(err)?;
            if digits.len() != 2 {
                return Err(err());
            }
            (digits[0] as usize, digits[1] as usize)
        };
        if i == 0 || j == 0 || i > self.ambient || j > self.ambient {
            return Err(err());
        }
        let root = if sum || i == j {
            eps_sum(self.ambient, i, j)
        } else {
            eps_diff(self.ambient, i, j)
        };
        let root = if neg { root.neg() } else { root };
        if !self.contains(&root) {
            return Err(Error::Usage(format!("`{s}` is not a root of {}{}", self.family, self.rank)));
        }
        Ok(root)
    }
}

/// Exact rational Gaussian elimination on an integer matrix.
///
/// Solves `basis^T x = target` over ℚ and reports the (unique, when the basis
/// is independent) coefficient vector, or `None` when inconsistent.
fn solve_rational(basis: &[Root], target: &Root) -> Option<Vec<(i64, i64)>> {
    if basis.is_empty() {
        return if target.is_zero() { Some(vec![]) } else { None };
    }
    let dim = target.coords().len();
    let n = basis.len();
    // Augmented system over i128 fractions via fraction-free elimination.
    let mut m: Vec<Vec<i128>> = (0..dim)
        .map(|row| {
            let mut v: Vec<i128> = basis.iter().map(|b| b.coords()[row] as i128).collect();
            v.push(target.coords()[row] as i128);
            v
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..dim).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..dim {
            if i != r && m[i][c] != 0 {
                let (a, b) = (m[r][c], m[i][c]);
                let pivot_row = m[r].clone();
                for (entry, p) in m[i].iter_mut().zip(&pivot_row) {
                    *entry = *entry * a - p * b;
                }
            }
        }
        pivot_cols.push((r, c));
        r += 1;
        if r == dim {
            break;
        }
    }
    // Inconsistency: a zero row with nonzero rhs.
    if m.iter().skip(r).any(|row| row[n] != 0) {
        return None;
    }
    let mut coeffs = vec![(0i64, 1i64); n];
    for &(row, col) in &pivot_cols {
        let num = m[row][n];
        let den = m[row][col];
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1);
        let (mut num, mut den) = ((num / g as i128) as i64, (den / g as i128) as i64);
        if den < 0 {
            num = -num;
            den = -den;
        }
        coeffs[col] = (num, den);
    }
    Some(coeffs)
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn solve_integer_combination(basis: &[Root], target: &Root) -> Option<Vec<i64>> {
    let coeffs = solve_rational(basis, target)?;
    coeffs
        .into_iter()
        .map(|(num, den)| if den == 1 { Some(num) } else { None })
        .collect()
}

fn in_rational_span(basis: &[Root], target: &Root) -> bool {
    solve_rational(basis, target).is_some()
}
