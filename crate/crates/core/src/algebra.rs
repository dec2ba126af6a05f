//! Small pseudo-Euclidean linear and exterior algebra.
//!
//! * [`Vec2`] lives in the Lorentz plane R^{1,1} with `<u,v> = -u1 v1 + u2 v2`.
//! * [`Vec4`] lives in R^{2,2} with `g(u,v) = -u1 v1 + u2 v2 - u3 v3 + u4 v4`.
//! * [`Bivector`] lives in Λ²R^{2,2}, stored on the basis
//!   `(e12, e13, e14, e23, e24, e34)`.
//!
//! Λ⁴R^{2,2} is identified with R through the canonical volume element
//! `e1∧e2∧e3∧e4`.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

/// 2×2 real matrix. Endomorphisms of R^{1,1} are written in the canonical basis.
pub type Mat2 = Matrix2<f64>;

/// Metric signature of R^{1,1}.
pub const METRIC2: [f64; 2] = [-1.0, 1.0];
/// Metric signature of R^{2,2}.
pub const METRIC4: [f64; 4] = [-1.0, 1.0, -1.0, 1.0];

/// Index pairs of the bivector basis, in storage order.
pub const BIVECTOR_BASIS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Induced norms `<ei∧ej, ei∧ej> = g_ii g_jj` of the bivector basis.
pub const BIVECTOR_NORMS: [f64; 6] = [-1.0, 1.0, -1.0, -1.0, 1.0, -1.0];

/// Global sign relating the skew-adjoint endomorphism commutator to the Lie
/// bracket used for the Gauss-map pull-back.
///
/// With this value `[dG(e1), dG(e2)] = K e1∧e2 + K_N e3∧e4` in an adapted
/// frame; see the curvature tests in `surface`.
pub const BRACKET_SIGN: f64 = -1.0;

/// Library-wide default tolerance on unit-scale data.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Causal character of a vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Lightlike,
    Zero,
}

impl CausalClass {
    /// Swaps spacelike and timelike, leaving the other classes unchanged.
    pub fn exchanged(self) -> Self {
        match self {
            CausalClass::Spacelike => CausalClass::Timelike,
            CausalClass::Timelike => CausalClass::Spacelike,
            other => other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CausalClass::Spacelike => "spacelike",
            CausalClass::Timelike => "timelike",
            CausalClass::Lightlike => "lightlike",
            CausalClass::Zero => "zero",
        }
    }
}

/// Anything with an indefinite quadratic norm and a Euclidean one.
pub trait PseudoNorm {
    fn pseudo_norm2(&self) -> f64;
    fn euclid_norm2(&self) -> f64;
    fn max_abs(&self) -> f64;
}

/// Sign classification of `<v,v>`.
///
/// `|<v,v>| <= tol * |v|_E^2` counts as lightlike; the zero class is reserved
/// for vectors whose components are all below `tol`.
pub fn causal_character<V: PseudoNorm>(v: &V, tol: f64) -> CausalClass {
    if v.max_abs() <= tol {
        return CausalClass::Zero;
    }
    let n = v.pseudo_norm2();
    if n.abs() <= tol * v.euclid_norm2() {
        CausalClass::Lightlike
    } else if n > 0.0 {
        CausalClass::Spacelike
    } else {
        CausalClass::Timelike
    }
}

macro_rules! impl_vector {
    ($name:ident, $n:expr, $metric:expr) => {
        impl $name {
            pub const ZERO: Self = Self([0.0; $n]);

            pub fn dot(&self, other: &Self) -> f64 {
                let mut s = 0.0;
                for i in 0..$n {
                    s += $metric[i] * self.0[i] * other.0[i];
                }
                s
            }

            pub fn norm2(&self) -> f64 {
                self.dot(self)
            }

            pub fn euclid_dot(&self, other: &Self) -> f64 {
                self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
            }

            pub fn euclid_norm(&self) -> f64 {
                self.euclid_dot(self).sqrt()
            }

            /// Lowers the index with the metric, so that `<v,x>` equals the
            /// Euclidean product of `v.lowered()` and `x`.
            pub fn lowered(&self) -> Self {
                let mut out = *self;
                for i in 0..$n {
                    out.0[i] *= $metric[i];
                }
                out
            }

            pub fn scaled(&self, s: f64) -> Self {
                let mut out = *self;
                for c in out.0.iter_mut() {
                    *c *= s;
                }
                out
            }

            pub fn is_finite(&self) -> bool {
                self.0.iter().all(|c| c.is_finite())
            }
        }

        impl PseudoNorm for $name {
            fn pseudo_norm2(&self) -> f64 {
                self.norm2()
            }
            fn euclid_norm2(&self) -> f64 {
                self.euclid_dot(self)
            }
            fn max_abs(&self) -> f64 {
                self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()))
            }
        }

        impl Add for $name {
            type Output = Self;
            fn add(mut self, rhs: Self) -> Self {
                for i in 0..$n {
                    self.0[i] += rhs.0[i];
                }
                self
            }
        }

        impl AddAssign for $name {
            fn add_assign(&mut self, rhs: Self) {
                for i in 0..$n {
                    self.0[i] += rhs.0[i];
                }
            }
        }

        impl Sub for $name {
            type Output = Self;
            fn sub(mut self, rhs: Self) -> Self {
                for i in 0..$n {
                    self.0[i] -= rhs.0[i];
                }
                self
            }
        }

        impl Neg for $name {
            type Output = Self;
            fn neg(self) -> Self {
                self.scaled(-1.0)
            }
        }

        impl Mul<f64> for $name {
            type Output = Self;
            fn mul(self, s: f64) -> Self {
                self.scaled(s)
            }
        }

        impl Mul<$name> for f64 {
            type Output = $name;
            fn mul(self, v: $name) -> $name {
                v.scaled(self)
            }
        }

        impl Index<usize> for $name {
            type Output = f64;
            fn index(&self, i: usize) -> &f64 {
                &self.0[i]
            }
        }

        impl IndexMut<usize> for $name {
            fn index_mut(&mut self, i: usize) -> &mut f64 {
                &mut self.0[i]
            }
        }
    };
}

/// Vector of the Lorentz plane R^{1,1}.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vec2(pub [f64; 2]);

/// Vector of R^{2,2}.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vec4(pub [f64; 4]);

impl_vector!(Vec2, 2, METRIC2);
impl_vector!(Vec4, 4, METRIC4);

impl Vec2 {
    pub fn new(x1: f64, x2: f64) -> Self {
        Vec2([x1, x2])
    }

    /// Reflection across the principal diagonal, `(x1, x2) -> (x2, x1)`.
    pub fn diagonal_reflection(&self) -> Self {
        Vec2([self.0[1], self.0[0]])
    }

    /// Determinant of `(self, other)` in the canonical basis (the area form ω₀).
    pub fn area(&self, other: &Self) -> f64 {
        self.0[0] * other.0[1] - self.0[1] * other.0[0]
    }

    pub fn apply(m: &Mat2, v: &Self) -> Self {
        let r = m * nalgebra::Vector2::new(v.0[0], v.0[1]);
        Vec2([r[0], r[1]])
    }
}

impl Vec4 {
    pub fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Vec4([x1, x2, x3, x4])
    }

    pub fn basis(i: usize) -> Self {
        let mut v = Vec4::ZERO;
        v.0[i] = 1.0;
        v
    }
}

/// Hyperbolic rotation of R^{1,1}: matrix `(cosh φ, sinh φ; sinh φ, cosh φ)`.
pub fn boost(phi: f64) -> Mat2 {
    let (c, s) = (phi.cosh(), phi.sinh());
    Mat2::new(c, s, s, c)
}

/// Bivector of R^{2,2} on the basis `(e12, e13, e14, e23, e24, e34)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bivector(pub [f64; 6]);

impl Bivector {
    pub const ZERO: Self = Bivector([0.0; 6]);

    /// Basis bivector `e_i ∧ e_j` (0-based, `i < j`).
    pub fn basis(i: usize, j: usize) -> Self {
        let mut b = Bivector::ZERO;
        let (sign, i, j) = if i < j { (1.0, i, j) } else { (-1.0, j, i) };
        if i == j {
            return b;
        }
        let k = BIVECTOR_BASIS.iter().position(|&p| p == (i, j)).unwrap();
        b.0[k] = sign;
        b
    }

    /// Induced inner product `<a∧b, c∧d> = g(a,c)g(b,d) - g(a,d)g(b,c)`.
    pub fn dot(&self, other: &Self) -> f64 {
        (0..6).map(|k| BIVECTOR_NORMS[k] * self.0[k] * other.0[k]).sum()
    }

    pub fn norm2(&self) -> f64 {
        self.dot(self)
    }

    pub fn euclid_norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `η ∧ ξ` as a multiple of the canonical volume element.
    pub fn wedge(&self, other: &Self) -> f64 {
        let a = &self.0;
        let b = &other.0;
        a[0] * b[5] + a[5] * b[0] - a[1] * b[4] - a[4] * b[1] + a[2] * b[3] + a[3] * b[2]
    }

    /// Simple unit timelike bivector test (Grassmannian of Lorentzian planes).
    pub fn is_unit_simple_timelike(&self, tol: f64) -> bool {
        (self.norm2() + 1.0).abs() <= tol && self.wedge(self).abs() <= tol
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = *self;
        out.0.iter_mut().for_each(|c| *c *= s);
        out
    }

    /// Skew-adjoint endomorphism `X -> g(a,X) b - g(b,X) a` attached to `a∧b`,
    /// extended linearly.
    pub fn to_endomorphism(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        for (k, &(i, j)) in BIVECTOR_BASIS.iter().enumerate() {
            let c = self.0[k];
            // column = image of e_col
            m[(j, i)] += c * METRIC4[i];
            m[(i, j)] -= c * METRIC4[j];
        }
        m
    }

    /// Inverse of [`Bivector::to_endomorphism`] on skew-adjoint endomorphisms.
    pub fn from_endomorphism(m: &Matrix4<f64>) -> Self {
        let mut b = Bivector::ZERO;
        for (k, &(i, j)) in BIVECTOR_BASIS.iter().enumerate() {
            b.0[k] = 0.5 * (m[(j, i)] * METRIC4[i] - m[(i, j)] * METRIC4[j]);
        }
        b
    }
}

impl Add for Bivector {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for k in 0..6 {
            self.0[k] += rhs.0[k];
        }
        self
    }
}

impl Sub for Bivector {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for k in 0..6 {
            self.0[k] -= rhs.0[k];
        }
        self
    }
}

impl Neg for Bivector {
    type Output = Self;
    fn neg(self) -> Self {
        self.scaled(-1.0)
    }
}

impl Mul<f64> for Bivector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scaled(s)
    }
}

impl PseudoNorm for Bivector {
    fn pseudo_norm2(&self) -> f64 {
        self.norm2()
    }
    fn euclid_norm2(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }
    fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }
}

/// Exterior product `u ∧ v`; the `ei∧ej` component is `ui vj - uj vi`.
pub fn wedge(u: &Vec4, v: &Vec4) -> Bivector {
    let mut b = Bivector::ZERO;
    for (k, &(i, j)) in BIVECTOR_BASIS.iter().enumerate() {
        b.0[k] = u.0[i] * v.0[j] - u.0[j] * v.0[i];
    }
    b
}

/// Commutator of the skew-adjoint endomorphisms attached to `eta` and `xi`,
/// read back as a bivector.
pub fn endomorphism_commutator(eta: &Bivector, xi: &Bivector) -> Bivector {
    let a = eta.to_endomorphism();
    let b = xi.to_endomorphism();
    Bivector::from_endomorphism(&(a * b - b * a))
}

/// Lie bracket of Λ²R^{2,2}, normalized by [`BRACKET_SIGN`].
pub fn bracket(eta: &Bivector, xi: &Bivector) -> Bivector {
    endomorphism_commutator(eta, xi).scaled(BRACKET_SIGN)
}

/// Hodge operator: `η ∧ η' = <η, *η'> e1∧e2∧e3∧e4`.
pub fn hodge_star(eta: &Bivector) -> Bivector {
    let c = &eta.0;
    Bivector([-c[5], -c[4], -c[3], -c[2], -c[1], -c[0]])
}

/// Determinant of the four vectors in the canonical basis.
pub fn volume4(v1: &Vec4, v2: &Vec4, v3: &Vec4, v4: &Vec4) -> f64 {
    let cols = [v1, v2, v3, v4];
    Matrix4::from_fn(|r, c| cols[c].0[r]).determinant()
}

/// Vector `n` with `<n, x> = volume4(a, b, c, x)` for every `x`.
pub fn metric_cross3(a: &Vec4, b: &Vec4, c: &Vec4) -> Vec4 {
    // Euclidean cofactor vector, then raise the index with the metric.
    let mut e = Vec4::ZERO;
    for i in 0..4 {
        e.0[i] = volume4(a, b, c, &Vec4::basis(i));
    }
    e.lowered()
}

/// Euclidean eigen-decomposition of a symmetric 2×2 matrix, eigenvalues ascending.
pub fn sym2_eigen(m: &Mat2) -> ([f64; 2], [Vec2; 2]) {
    let (a, b, d) = (m[(0, 0)], 0.5 * (m[(0, 1)] + m[(1, 0)]), m[(1, 1)]);
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let (l1, l2) = (mean - r, mean + r);
    // eigenvector for l2: angle θ with tan 2θ = 2b / (a - d)
    let theta = 0.5 * (2.0 * b).atan2(a - d);
    let v2 = Vec2::new(theta.cos(), theta.sin());
    let v1 = Vec2::new(-theta.sin(), theta.cos());
    ([l1, l2], [v1, v2])
}

/// Sylvester signature `(positive, negative)` of a symmetric 2×2 matrix;
/// eigenvalues with `|λ| <= tol` count as zero.
pub fn signature2(m: &Mat2, tol: f64) -> (u8, u8) {
    let (ls, _) = sym2_eigen(m);
    let mut p = 0;
    let mut n = 0;
    for l in ls {
        if l > tol {
            p += 1;
        } else if l < -tol {
            n += 1;
        }
    }
    (p, n)
}
