//! Symbolic separable expressions.
//!
//! A [`Scalar`] is a finite sum `Σ c · h₁⁽ᵃ⁾(x) h₂⁽ᵇ⁾(y) h₃⁽ᶜ⁾(z)` where each
//! factor is a derivative of `sin³(πt)` or of a power `tᵖ`. Partial
//! derivatives only bump the derivative orders, so curls, Laplacians and
//! gradients of such fields stay exact.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::Matrix3;

use crate::geometry::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    /// `sin³(πt) = (3 sin πt − sin 3πt) / 4`.
    SinCube,
    /// `tᵖ`.
    Power(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub kind: Kind,
    pub order: u32,
}

impl Factor {
    pub const fn new(kind: Kind) -> Self {
        Self { kind, order: 0 }
    }

    fn is_zero(&self) -> bool {
        matches!(self.kind, Kind::Power(p) if self.order > p)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self.kind {
            Kind::SinCube => {
                let n = self.order as i32;
                let shift = f64::from(n) * PI / 2.0;
                (3.0 * PI.powi(n) * (PI * t + shift).sin() - (3.0 * PI).powi(n) * (3.0 * PI * t + shift).sin()) / 4.0
            }
            Kind::Power(p) => {
                if self.order > p {
                    return 0.0;
                }
                let falling: f64 = ((p - self.order + 1)..=p).map(f64::from).product();
                falling * t.powi((p - self.order) as i32)
            }
        }
    }
}

/// Sum of separable terms, keyed by their factors.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scalar {
    terms: BTreeMap<[Factor; 3], f64>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(coef: f64, factors: [Kind; 3]) -> Self {
        let mut s = Self::zero();
        s.add_term(factors.map(Factor::new), coef);
        s
    }

    pub fn constant(c: f64) -> Self {
        Self::term(c, [Kind::Power(0); 3])
    }

    /// The monomial `c xᵃ yᵇ zᶜ`.
    pub fn monomial(c: f64, powers: [u32; 3]) -> Self {
        Self::term(c, powers.map(Kind::Power))
    }

    fn add_term(&mut self, factors: [Factor; 3], coef: f64) {
        if coef == 0.0 || factors.iter().any(Factor::is_zero) {
            return;
        }
        let entry = self.terms.entry(factors).or_insert(0.0);
        *entry += coef;
        if *entry == 0.0 {
            self.terms.remove(&factors);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn partial(&self, axis: usize) -> Self {
        let mut out = Self::zero();
        for (factors, &c) in &self.terms {
            let mut f = *factors;
            f[axis].order += 1;
            out.add_term(f, c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(-1.0, other)
    }

    /// `self + a · other`.
    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        let mut out = self.clone();
        for (factors, &c) in &other.terms {
            out.add_term(*factors, a * c);
        }
        out
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::zero().axpy(a, self)
    }

    pub fn laplacian(&self) -> Self {
        (0..3).fold(Self::zero(), |acc, d| acc.add(&self.partial(d).partial(d)))
    }

    pub fn gradient(&self) -> Vector {
        Vector([self.partial(0), self.partial(1), self.partial(2)])
    }

    pub fn eval(&self, x: &Vec3) -> f64 {
        self.terms
            .iter()
            .map(|(f, c)| c * f[0].eval(x.x) * f[1].eval(x.y) * f[2].eval(x.z))
            .sum()
    }
}

/// Three symbolic components.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Vector(pub [Scalar; 3]);

impl Vector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn curl(&self) -> Self {
        let [a, b, c] = &self.0;
        Self([
            c.partial(1).sub(&b.partial(2)),
            a.partial(2).sub(&c.partial(0)),
            b.partial(0).sub(&a.partial(1)),
        ])
    }

    pub fn divergence(&self) -> Scalar {
        (0..3).fold(Scalar::zero(), |acc, d| acc.add(&self.0[d].partial(d)))
    }

    pub fn laplacian(&self) -> Self {
        Self(std::array::from_fn(|i| self.0[i].laplacian()))
    }

    pub fn axpy(&self, a: f64, other: &Self) -> Self {
        Self(std::array::from_fn(|i| self.0[i].axpy(a, &other.0[i])))
    }

    pub fn scale(&self, a: f64) -> Self {
        Self(std::array::from_fn(|i| self.0[i].scale(a)))
    }

    /// `J[r][s] = ∂_s v_r`.
    pub fn jacobian(&self) -> [[Scalar; 3]; 3] {
        std::array::from_fn(|r| std::array::from_fn(|s| self.0[r].partial(s)))
    }

    pub fn eval(&self, x: &Vec3) -> Vec3 {
        Vec3::new(self.0[0].eval(x), self.0[1].eval(x), self.0[2].eval(x))
    }
}

pub fn eval_jacobian(j: &[[Scalar; 3]; 3], x: &Vec3) -> Matrix3<f64> {
    Matrix3::from_fn(|r, s| j[r][s].eval(x))
}
