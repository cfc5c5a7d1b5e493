//! Closed-form coefficient functions of the shape p(t)·{1, sin(ωt), cos(ωt)}
//! with polynomial p, closed under differentiation.
//!
//! Variation generators in this crate are finite sums of such atoms, so their
//! derivatives stay in the same family and no numerical differentiation is
//! ever needed on the main path.

/// Trigonometric factor of one atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrigMode {
    /// Constant factor 1.
    One,
    /// sin(ωt).
    Sin,
    /// cos(ωt).
    Cos,
}

/// One atom p(t)·factor(ωt); `poly` stores p by ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigTerm {
    poly: Vec<f64>,
    mode: TrigMode,
    omega: f64,
}

/// A finite sum of atoms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPoly {
    terms: Vec<TrigTerm>,
}

fn poly_eval(p: &[f64], t: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

fn poly_derivative(p: &[f64]) -> Vec<f64> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

fn poly_scale(p: &[f64], c: f64) -> Vec<f64> {
    p.iter().map(|&a| a * c).collect()
}

impl TrigPoly {
    /// The zero function.
    pub fn zero() -> Self {
        TrigPoly::default()
    }

    /// A plain polynomial, coefficients by ascending degree.
    pub fn poly(coeffs: Vec<f64>) -> Self {
        TrigPoly {
            terms: vec![TrigTerm {
                poly: coeffs,
                mode: TrigMode::One,
                omega: 0.0,
            }],
        }
    }

    /// The constant function.
    pub fn constant(c: f64) -> Self {
        Self::poly(vec![c])
    }

    /// c·sin(ωt).
    pub fn sin(omega: f64, c: f64) -> Self {
        TrigPoly {
            terms: vec![TrigTerm {
                poly: vec![c],
                mode: TrigMode::Sin,
                omega,
            }],
        }
    }

    /// c·cos(ωt).
    pub fn cos(omega: f64, c: f64) -> Self {
        TrigPoly {
            terms: vec![TrigTerm {
                poly: vec![c],
                mode: TrigMode::Cos,
                omega,
            }],
        }
    }

    /// p(t)·sin(ωt) with general polynomial factor.
    pub fn poly_sin(coeffs: Vec<f64>, omega: f64) -> Self {
        TrigPoly {
            terms: vec![TrigTerm {
                poly: coeffs,
                mode: TrigMode::Sin,
                omega,
            }],
        }
    }

    /// p(t)·cos(ωt) with general polynomial factor.
    pub fn poly_cos(coeffs: Vec<f64>, omega: f64) -> Self {
        TrigPoly {
            terms: vec![TrigTerm {
                poly: coeffs,
                mode: TrigMode::Cos,
                omega,
            }],
        }
    }

    /// Sum of two functions.
    pub fn plus(&self, other: &TrigPoly) -> TrigPoly {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TrigPoly { terms }
    }

    /// Scalar multiple.
    pub fn scale(&self, c: f64) -> TrigPoly {
        TrigPoly {
            terms: self
                .terms
                .iter()
                .map(|t| TrigTerm {
                    poly: poly_scale(&t.poly, c),
                    mode: t.mode,
                    omega: t.omega,
                })
                .collect(),
        }
    }

    /// Value at t.
    pub fn eval(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| {
                let factor = match term.mode {
                    TrigMode::One => 1.0,
                    TrigMode::Sin => (term.omega * t).sin(),
                    TrigMode::Cos => (term.omega * t).cos(),
                };
                poly_eval(&term.poly, t) * factor
            })
            .sum()
    }

    /// Exact derivative, staying in the family.
    pub fn derivative(&self) -> TrigPoly {
        let mut terms = Vec::new();
        for term in &self.terms {
            let dp = poly_derivative(&term.poly);
            match term.mode {
                TrigMode::One => {
                    if !dp.is_empty() {
                        terms.push(TrigTerm {
                            poly: dp,
                            mode: TrigMode::One,
                            omega: 0.0,
                        });
                    }
                }
                TrigMode::Sin => {
                    if !dp.is_empty() {
                        terms.push(TrigTerm {
                            poly: dp,
                            mode: TrigMode::Sin,
                            omega: term.omega,
                        });
                    }
                    terms.push(TrigTerm {
                        poly: poly_scale(&term.poly, term.omega),
                        mode: TrigMode::Cos,
                        omega: term.omega,
                    });
                }
                TrigMode::Cos => {
                    if !dp.is_empty() {
                        terms.push(TrigTerm {
                            poly: dp,
                            mode: TrigMode::Cos,
                            omega: term.omega,
                        });
                    }
                    terms.push(TrigTerm {
                        poly: poly_scale(&term.poly, -term.omega),
                        mode: TrigMode::Sin,
                        omega: term.omega,
                    });
                }
            }
        }
        TrigPoly { terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn central_diff(f: &TrigPoly, t: f64, h: f64) -> f64 {
        (f.eval(t + h) - f.eval(t - h)) / (2.0 * h)
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let f = TrigPoly::poly(vec![0.0, 0.0, 1.0]) // t²
            .plus(&TrigPoly::poly_sin(vec![1.0, -2.0], 3.0)) // (1−2t)sin 3t
            .plus(&TrigPoly::cos(5.0, 0.7));
        let df = f.derivative();
        for &t in &[0.0, 0.3, 1.1, 2.7] {
            let fd = central_diff(&f, t, 1e-6);
            assert!(
                (df.eval(t) - fd).abs() < 1e-8,
                "t = {t}: {} vs {}",
                df.eval(t),
                fd
            );
        }
    }

    #[test]
    fn canonical_witness_profiles() {
        // k·sin(2πt/b) and (1/k)t(t−b): endpoint values vanish and the
        // derivative has the expected closed form.
        let (b, k) = (1.7, 0.6);
        let omega = 2.0 * std::f64::consts::PI / b;
        let f = TrigPoly::sin(omega, k);
        let g = TrigPoly::poly(vec![0.0, -b / k, 1.0 / k]);
        assert!(f.eval(0.0).abs() < 1e-15 && f.eval(b).abs() < 1e-12);
        assert!(g.eval(0.0).abs() < 1e-15 && g.eval(b).abs() < 1e-12);
        let df = f.derivative();
        let dg = g.derivative();
        let t = 0.92;
        assert!((df.eval(t) - omega * k * (omega * t).cos()).abs() < 1e-13);
        assert!((dg.eval(t) - (2.0 * t - b) / k).abs() < 1e-13);
    }
}
