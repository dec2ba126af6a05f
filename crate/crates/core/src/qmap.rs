//! Quadratic maps `q : R^{1,1} -> R^{1,1}` and their associated forms.
//!
//! A map is stored as two symmetric matrices with `q(x) = (xᵀB¹x, xᵀB²x)`.
//! For a normal vector `ν` the shape operator is `S_ν = η(-ν₁B¹ + ν₂B²)`,
//! `η = diag(-1, 1)`, so that `<S_ν x, x> = <q(x), ν>`.
//!
//! Traceless symmetric operators are written `c₁E₁ + c₂E₂` and handled through
//! their coordinates `(c₁, c₂)`; the plane of such operators carries the
//! Lorentzian product `c₁c₁' - c₂c₂'`.

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use crate::algebra::{Mat2, Vec2};

/// `η = diag(-1, 1)`, the Gram matrix of R^{1,1}.
pub fn eta() -> Mat2 {
    Mat2::new(-1.0, 0.0, 0.0, 1.0)
}

/// `E₁ = diag(1, -1)`.
pub fn e1_op() -> Mat2 {
    Mat2::new(1.0, 0.0, 0.0, -1.0)
}

/// `E₂ = [[0, 1], [-1, 0]]`.
pub fn e2_op() -> Mat2 {
    Mat2::new(0.0, 1.0, -1.0, 0.0)
}

/// `N₁ = (E₁ + E₂)/2` and `N₂ = (E₂ - E₁)/2` in traceless coordinates.
pub const N1_COORDS: Vec2 = Vec2([0.5, 0.5]);
pub const N2_COORDS: Vec2 = Vec2([-0.5, 0.5]);

/// Lorentzian product on traceless operators: `|u|² = ½ tr(u²) = -det u`.
pub fn s_dot(c: &Vec2, d: &Vec2) -> f64 {
    c.0[0] * d.0[0] - c.0[1] * d.0[1]
}

/// Determinant of two traceless operators in the basis `(E₁, E₂)`.
pub fn s_det(c: &Vec2, d: &Vec2) -> f64 {
    c.0[0] * d.0[1] - c.0[1] * d.0[0]
}

/// Endomorphism of R^{1,1} that is self-adjoint for the Lorentz product.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymOp2(pub Mat2);

impl SymOp2 {
    pub fn from_parts(trace_half: f64, c: &Vec2) -> Self {
        SymOp2(Mat2::identity() * trace_half + e1_op() * c.0[0] + e2_op() * c.0[1])
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn det(&self) -> f64 {
        self.0.determinant()
    }

    pub fn apply(&self, x: &Vec2) -> Vec2 {
        Vec2::apply(&self.0, x)
    }

    /// Coordinates `(c₁, c₂)` of the traceless part on `(E₁, E₂)`.
    pub fn traceless_coords(&self) -> Vec2 {
        let m = &self.0;
        Vec2([0.5 * (m[(0, 0)] - m[(1, 1)]), 0.5 * (m[(0, 1)] - m[(1, 0)])])
    }

    /// `|ηM - (ηM)ᵀ|`, zero for Lorentz self-adjoint operators.
    pub fn asymmetry(&self) -> f64 {
        let s = eta() * self.0;
        (s[(0, 1)] - s[(1, 0)]).abs()
    }
}

/// Quadratic map between Lorentz planes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadraticMap {
    pub b1: Mat2,
    pub b2: Mat2,
}

fn sym(m: &Mat2) -> Mat2 {
    (m + m.transpose()) * 0.5
}

fn to_rows(m: &Mat2) -> [[f64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

fn from_rows(r: &[[f64; 2]; 2]) -> Mat2 {
    Mat2::new(r[0][0], r[0][1], r[1][0], r[1][1])
}

#[derive(Serialize, Deserialize)]
struct QuadraticMapRepr {
    #[serde(rename = "B1")]
    b1: [[f64; 2]; 2],
    #[serde(rename = "B2")]
    b2: [[f64; 2]; 2],
}

impl Serialize for QuadraticMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QuadraticMapRepr { b1: to_rows(&self.b1), b2: to_rows(&self.b2) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = QuadraticMapRepr::deserialize(d)?;
        Ok(QuadraticMap::new(from_rows(&r.b1), from_rows(&r.b2)))
    }
}

/// The classical invariants of a quadratic map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Invariants {
    #[serde(rename = "H")]
    pub h: Vec2,
    #[serde(rename = "normH2")]
    pub norm_h2: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "KN")]
    pub kn: f64,
    #[serde(rename = "Delta")]
    pub delta: f64,
    #[serde(rename = "trPhi")]
    pub tr_phi: f64,
    #[serde(rename = "detPhi")]
    pub det_phi: f64,
    pub rank_f: u8,
    pub phi_is_zero: bool,
}

impl QuadraticMap {
    /// Builds a map from two coefficient matrices, symmetrizing them.
    pub fn new(b1: Mat2, b2: Mat2) -> Self {
        QuadraticMap { b1: sym(&b1), b2: sym(&b2) }
    }

    pub fn from_rows(b1: [[f64; 2]; 2], b2: [[f64; 2]; 2]) -> Self {
        QuadraticMap::new(from_rows(&b1), from_rows(&b2))
    }

    pub fn zero() -> Self {
        QuadraticMap { b1: Mat2::zeros(), b2: Mat2::zeros() }
    }

    /// Map with prescribed shape operators `S_{e1}`, `S_{e2}` (must be self-adjoint).
    pub fn from_shape_operators(s_e1: &Mat2, s_e2: &Mat2) -> Self {
        QuadraticMap::new(-(eta() * s_e1), eta() * s_e2)
    }

    /// Map with `S_ν = <H,ν> I + f(ν)`, where `f` is given by its matrix in
    /// traceless coordinates (columns `f(e₁)`, `f(e₂)`).
    pub fn from_mean_and_traceless(h: &Vec2, f: &Mat2) -> Self {
        let col = |j: usize| Vec2([f[(0, j)], f[(1, j)]]);
        let s1 = SymOp2::from_parts(-h.0[0], &col(0));
        let s2 = SymOp2::from_parts(h.0[1], &col(1));
        QuadraticMap::from_shape_operators(&s1.0, &s2.0)
    }

    pub fn eval(&self, x: &Vec2) -> Vec2 {
        let v = Vector2::new(x.0[0], x.0[1]);
        Vec2([v.dot(&(self.b1 * v)), v.dot(&(self.b2 * v))])
    }

    /// Polarized map `q(x, y)` with `q(x, x) = q(x)`.
    pub fn eval_bilinear(&self, x: &Vec2, y: &Vec2) -> Vec2 {
        let a = Vector2::new(x.0[0], x.0[1]);
        let b = Vector2::new(y.0[0], y.0[1]);
        Vec2([a.dot(&(self.b1 * b)), a.dot(&(self.b2 * b))])
    }

    /// Largest coefficient magnitude, used to scale tolerances.
    pub fn scale(&self) -> f64 {
        self.b1.iter().chain(self.b2.iter()).fold(0.0f64, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.b1.iter().chain(self.b2.iter()).all(|c| c.is_finite())
    }

    /// Right action `q ∘ g`.
    pub fn compose_right(&self, g: &Mat2) -> Self {
        QuadraticMap::new(g.transpose() * self.b1 * g, g.transpose() * self.b2 * g)
    }

    /// Left action `h ∘ q`.
    pub fn compose_left(&self, h: &Mat2) -> Self {
        QuadraticMap::new(
            self.b1 * h[(0, 0)] + self.b2 * h[(0, 1)],
            self.b1 * h[(1, 0)] + self.b2 * h[(1, 1)],
        )
    }

    pub fn shape_operator(&self, nu: &Vec2) -> SymOp2 {
        SymOp2(eta() * (self.b2 * nu.0[1] - self.b1 * nu.0[0]))
    }

    /// `L_q(ν) = ½ tr S_ν`.
    pub fn l_form(&self, nu: &Vec2) -> f64 {
        0.5 * self.shape_operator(nu).trace()
    }

    /// Mean vector `H` with `L_q(ν) = <H, ν>`.
    pub fn mean_vector(&self) -> Vec2 {
        Vec2([
            0.5 * (self.b1[(1, 1)] - self.b1[(0, 0)]),
            0.5 * (self.b2[(1, 1)] - self.b2[(0, 0)]),
        ])
    }

    /// `Q_q(ν) = det S_ν`.
    pub fn q_form(&self, nu: &Vec2) -> f64 {
        self.shape_operator(nu).det()
    }

    /// Symmetric matrix `C` with `Q_q(ν) = νᵀ C ν`.
    pub fn q_matrix(&self) -> Mat2 {
        let (p, r) = (&self.b1, &self.b2);
        let mixed = p[(0, 0)] * r[(1, 1)] + p[(1, 1)] * r[(0, 0)] - 2.0 * p[(0, 1)] * r[(0, 1)];
        Mat2::new(-p.determinant(), 0.5 * mixed, 0.5 * mixed, -r.determinant())
    }

    /// Symmetric matrix `C_Φ` with `Φ_q(ν) = L_q(ν)² - Q_q(ν) = νᵀ C_Φ ν`.
    pub fn phi_matrix(&self) -> Mat2 {
        let h = self.mean_vector();
        let l = Vector2::new(-h.0[0], h.0[1]);
        l * l.transpose() - self.q_matrix()
    }

    pub fn phi_form(&self, nu: &Vec2) -> f64 {
        let l = self.l_form(nu);
        l * l - self.q_form(nu)
    }

    /// Polarization `Φ̃_q` of `Φ_q`.
    pub fn phi_tilde(&self, n1: &Vec2, n2: &Vec2) -> f64 {
        let a = Vector2::new(n1.0[0], n1.0[1]);
        let b = Vector2::new(n2.0[0], n2.0[1]);
        a.dot(&(self.phi_matrix() * b))
    }

    /// `A_q(ν₁, ν₂) = ½[S_ν₁, S_ν₂]`, read as the off-diagonal entry.
    pub fn a_form(&self, n1: &Vec2, n2: &Vec2) -> f64 {
        let s1 = self.shape_operator(n1).0;
        let s2 = self.shape_operator(n2).0;
        let c = s1 * s2 - s2 * s1;
        0.25 * (c[(0, 1)] + c[(1, 0)])
    }

    /// Operator `U_Φ` associated to `Φ_q` by the metric.
    pub fn u_phi(&self) -> Mat2 {
        eta() * self.phi_matrix()
    }

    /// Operator `U_Q` associated to `Q_q` by the metric.
    pub fn u_q(&self) -> Mat2 {
        eta() * self.q_matrix()
    }

    /// `f_q(ν) = S_ν⁰` in traceless coordinates.
    pub fn f_q(&self, nu: &Vec2) -> Vec2 {
        self.shape_operator(nu).traceless_coords()
    }

    /// Matrix of `f_q` in traceless coordinates; columns are `f(e₁)`, `f(e₂)`.
    pub fn f_matrix(&self) -> Mat2 {
        let a = self.f_q(&Vec2::new(1.0, 0.0));
        let b = self.f_q(&Vec2::new(0.0, 1.0));
        Mat2::new(a.0[0], b.0[0], a.0[1], b.0[1])
    }

    pub fn k_gauss(&self) -> f64 {
        self.u_q().trace()
    }

    pub fn k_normal(&self) -> f64 {
        2.0 * self.a_form(&Vec2::new(1.0, 0.0), &Vec2::new(0.0, 1.0))
    }

    pub fn delta(&self) -> f64 {
        self.u_q().determinant()
    }

    /// Rank of `f_q` with respect to `tol · scale`.
    pub fn rank_f(&self, tol: f64) -> u8 {
        let thr = tol * self.scale();
        self.f_matrix().singular_values().iter().filter(|&&s| s > thr).count() as u8
    }

    /// Whether `Φ_q` vanishes with respect to `tol · scale²`.
    pub fn phi_is_zero(&self, tol: f64) -> bool {
        let s = self.scale();
        self.phi_matrix().iter().all(|c| c.abs() <= tol * s * s)
    }

    pub fn invariants(&self, tol: f64) -> Invariants {
        let h = self.mean_vector();
        let u_phi = self.u_phi();
        Invariants {
            h,
            norm_h2: h.norm2(),
            k: self.k_gauss(),
            kn: self.k_normal(),
            delta: self.delta(),
            tr_phi: u_phi.trace(),
            det_phi: u_phi.determinant(),
            rank_f: self.rank_f(tol),
            phi_is_zero: self.phi_is_zero(tol),
        }
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::{boost, signature2};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    pub fn unit_qmap() -> impl Strategy<Value = QuadraticMap> {
        prop::array::uniform6(-1.0f64..1.0).prop_map(|c| {
            QuadraticMap::from_rows([[c[0], c[1]], [c[1], c[2]]], [[c[3], c[4]], [c[4], c[5]]])
        })
    }

    fn vec2() -> impl Strategy<Value = Vec2> {
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Vec2::new(a, b))
    }

    #[test]
    fn shape_operator_examples() {
        let q = QuadraticMap::from_rows([[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 1.0]]);
        assert_eq!(q.shape_operator(&Vec2::new(1.0, 0.0)).0, Mat2::new(1.0, 0.0, 0.0, 0.0));

        let umb = QuadraticMap::from_rows([[-1.0, 0.0], [0.0, 1.0]], [[0.0; 2]; 2]);
        let nu = Vec2::new(0.3, -0.7);
        let s = umb.shape_operator(&nu).0;
        let expect = Mat2::identity() * Vec2::new(1.0, 0.0).dot(&nu);
        assert_abs_diff_eq!((s - expect).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn invariants_examples() {
        let q = QuadraticMap::from_rows([[-1.0, 0.0], [0.0, 1.0]], [[0.0; 2]; 2]);
        let i = q.invariants(1e-9);
        assert_eq!(i.h, Vec2::new(1.0, 0.0));
        assert_eq!((i.norm_h2, i.k, i.kn, i.delta, i.rank_f), (-1.0, -1.0, 0.0, 0.0, 0));

        let q = QuadraticMap::from_rows([[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 1.0]]);
        let i = q.invariants(1e-9);
        assert_eq!(i.h, Vec2::new(-0.5, 0.5));
        assert_eq!((i.norm_h2, i.k, i.kn, i.delta, i.rank_f), (0.0, 0.0, 0.0, 0.25, 1));

        let q = QuadraticMap::from_rows([[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [1.0, 0.0]]);
        let i = q.invariants(1e-9);
        assert_eq!(i.h, Vec2::new(0.0, 0.0));
        assert_eq!((i.k, i.kn, i.delta, i.rank_f), (2.0, -2.0, 1.0, 2));
        assert!(!i.phi_is_zero);
    }

    #[test]
    fn k_and_kn_match_coefficient_formulas() {
        let (x, z, y, u, w, v) = (0.3, -0.4, 1.1, 0.2, 0.9, -0.6);
        let q = QuadraticMap::from_rows([[x, z], [z, y]], [[u, w], [w, v]]);
        assert_abs_diff_eq!(q.k_gauss(), x * y - z * z - u * v + w * w, epsilon = 1e-14);
        assert_abs_diff_eq!(q.k_normal(), -w * (x + y) + z * (u + v), epsilon = 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let q = QuadraticMap::from_rows([[0.1, 1.0 / 3.0], [1.0 / 3.0, -2.5]], [[1e-7, 0.0], [0.0, 7.0]]);
        let s = serde_json::to_string(&q).unwrap();
        assert!(s.contains("\"B1\"") && s.contains("\"B2\""));
        let back: QuadraticMap = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        let i = q.invariants(1e-9);
        let back: Invariants = serde_json::from_str(&serde_json::to_string(&i).unwrap()).unwrap();
        assert_eq!(back, i);
    }

    #[test]
    fn from_mean_and_traceless_round_trip() {
        let h = Vec2::new(0.4, -1.2);
        let f = Mat2::new(0.3, -0.1, 0.7, 0.25);
        let q = QuadraticMap::from_mean_and_traceless(&h, &f);
        assert_abs_diff_eq!((q.mean_vector() - h).euclid_norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((q.f_matrix() - f).norm(), 0.0, epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn self_adjoint_and_linear(q in unit_qmap(), n1 in vec2(), n2 in vec2(), x in vec2()) {
            let s = q.shape_operator(&n1);
            prop_assert!(s.asymmetry() <= 1e-15);
            prop_assert!((s.apply(&x).dot(&x) - q.eval(&x).dot(&n1)).abs() <= 1e-12);
            let sum = q.shape_operator(&(n1 + n2)).0 - s.0 - q.shape_operator(&n2).0;
            prop_assert!(sum.norm() <= 1e-14);
        }

        #[test]
        fn lagrange_identity(q in unit_qmap(), n1 in vec2(), n2 in vec2()) {
            let lhs = q.phi_form(&n1) * q.phi_form(&n2);
            let rhs = q.phi_tilde(&n1, &n2).powi(2) - q.a_form(&n1, &n2).powi(2);
            prop_assert!((lhs - rhs).abs() <= 1e-10);
        }

        #[test]
        fn pull_back_identities(q in unit_qmap(), n1 in vec2(), n2 in vec2()) {
            let (f1, f2) = (q.f_q(&n1), q.f_q(&n2));
            prop_assert!((q.phi_tilde(&n1, &n2) - s_dot(&f1, &f2)).abs() <= 1e-10);
            prop_assert!((q.a_form(&n1, &n2) - s_det(&f1, &f2)).abs() <= 1e-10);
        }

        #[test]
        fn trace_det_phi(q in unit_qmap()) {
            let i = q.invariants(1e-9);
            prop_assert!((i.tr_phi - (i.norm_h2 - i.k)).abs() <= 1e-10);
            prop_assert!((i.det_phi - i.kn * i.kn / 4.0).abs() <= 1e-10);
        }

        #[test]
        fn phi_signature_never_definite(q in unit_qmap()) {
            let sig = signature2(&q.phi_matrix(), 1e-12);
            prop_assert!(sig != (2, 0) && sig != (0, 2));
        }

        #[test]
        fn right_invariance(q in unit_qmap(), phi in -2.0f64..2.0) {
            let a = q.invariants(1e-9);
            let b = q.compose_right(&boost(phi)).invariants(1e-9);
            let tol = 1e-9 * (2.0 * phi).cosh().powi(2);
            prop_assert!((a.h - b.h).euclid_norm() <= tol);
            for (x, y) in [(a.norm_h2, b.norm_h2), (a.k, b.k), (a.kn, b.kn), (a.delta, b.delta)] {
                prop_assert!((x - y).abs() <= tol);
            }
        }

        #[test]
        fn left_action(q in unit_qmap(), phi in -2.0f64..2.0) {
            let h = boost(phi);
            let a = q.invariants(1e-9);
            let b = q.compose_left(&h).invariants(1e-9);
            let tol = 1e-9 * (2.0 * phi).cosh().powi(2);
            prop_assert!((Vec2::apply(&h, &a.h) - b.h).euclid_norm() <= tol);
            for (x, y) in [(a.norm_h2, b.norm_h2), (a.k, b.k), (a.kn, b.kn), (a.delta, b.delta)] {
                prop_assert!((x - y).abs() <= tol);
            }
        }
    }
}
