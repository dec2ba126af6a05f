//! The quadratic form `δ(v) = ½ dG(v)∧dG(v)`, asymptotic and mean
//! directionally curved directions, and contact binormals.
//!
//! Everything is expressed in an adapted frame: tangent vectors by their
//! coordinates in `(e₁, e₂)`, normal vectors by their coordinates in `(e₃, e₄)`.

use serde::{Deserialize, Serialize};

use crate::algebra::{causal_character, signature2, wedge, CausalClass, Mat2, Vec2, Vec4};
use crate::classify::{reduce_u_phi, FrameCase};
use crate::qmap::{eta, QuadraticMap};
use crate::surface::Surface;
use crate::{Error, Result};

fn rot() -> Mat2 {
    Mat2::new(0.0, 1.0, -1.0, 0.0)
}

fn swap() -> Mat2 {
    Mat2::new(0.0, 1.0, 1.0, 0.0)
}

fn sym(m: &Mat2) -> Mat2 {
    (m + m.transpose()) * 0.5
}

fn rows(m: &Mat2) -> [[f64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

fn quad(m: &Mat2, v: &Vec2) -> f64 {
    let (x, y) = (v.0[0], v.0[1]);
    m[(0, 0)] * x * x + (m[(0, 1)] + m[(1, 0)]) * x * y + m[(1, 1)] * y * y
}

#[cfg(test)]
fn bilinear(m: &Mat2, a: &Vec2, b: &Vec2) -> f64 {
    a.euclid_dot(&Vec2::apply(m, b))
}

/// Matrix of `δ`, from the coefficients: `δ(v) = -det[B¹v | B²v]`.
pub fn delta_matrix(q: &QuadraticMap) -> Mat2 {
    -sym(&(q.b1 * rot() * q.b2))
}

/// Matrix of `δ` from `½ dG(eᵢ)∧dG(eⱼ)`, with `dG` built from `II` in the
/// standard frame of R^{1,1} ⊕ R^{1,1}.
pub fn delta_matrix_wedge(q: &QuadraticMap) -> Mat2 {
    let e = [Vec4::basis(0), Vec4::basis(1), Vec4::basis(2), Vec4::basis(3)];
    let ii = |i: usize, j: usize| e[2].scaled(q.b1[(i, j)]) + e[3].scaled(q.b2[(i, j)]);
    let dg = |i: usize| wedge(&ii(i, 0), &e[1]) + wedge(&e[0], &ii(i, 1));
    let (d1, d2) = (dg(0), dg(1));
    Mat2::new(0.5 * d1.wedge(&d1), 0.5 * d1.wedge(&d2), 0.5 * d2.wedge(&d1), 0.5 * d2.wedge(&d2))
}

/// `δ` with its trace, discriminant and traceless part.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaForm {
    pub matrix: [[f64; 2]; 2],
    /// `-δ₁₁ + δ₂₂`, equal to `-K_N`.
    pub trace_g: f64,
    /// `-det_g δ`, equal to `-Δ`.
    pub disc: f64,
    pub delta0: [[f64; 2]; 2],
    /// `-det_g δ⁰`, equal to `K_N²/4 - Δ`.
    pub disc0: f64,
    pub signature0: (u8, u8),
}

impl DeltaForm {
    pub fn new(q: &QuadraticMap, tol: f64) -> Self {
        let d = delta_matrix(q);
        let s = q.scale();
        let trace_g = -d[(0, 0)] + d[(1, 1)];
        let d0 = d - Mat2::new(-1.0, 0.0, 0.0, 1.0) * (0.5 * trace_g);
        DeltaForm {
            matrix: rows(&d),
            trace_g,
            disc: d.determinant(),
            delta0: rows(&d0),
            disc0: d0.determinant(),
            signature0: signature2(&d0, tol * s * s),
        }
    }

    pub fn mat(&self) -> Mat2 {
        let m = self.matrix;
        Mat2::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }

    pub fn eval(&self, v: &Vec2) -> f64 {
        quad(&self.mat(), v)
    }
}

/// Which column of the causal table applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplicity {
    /// Two distinct roots.
    TwoDistinct,
    /// One double root.
    Double,
    /// No real root.
    None,
    /// The form vanishes identically.
    DegenerateTotal,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub v: Vec2,
    pub causal: CausalClass,
    pub multiplicity: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionReport {
    pub directions: Vec<Direction>,
    pub multiplicity: Multiplicity,
    /// Signature of `δ⁰` as `"(p,n)"`, for asymptotic directions.
    pub table_row: Option<String>,
}

impl DirectionReport {
    pub fn is_degenerate_total(&self) -> bool {
        self.multiplicity == Multiplicity::DegenerateTotal
    }
}

/// Unit vector, or larger component equal to one when lightlike.
pub fn normalize_direction(v: &Vec2, tol: f64) -> (Vec2, CausalClass) {
    let c = causal_character(v, tol);
    match c {
        CausalClass::Lightlike => {
            let big = if v.0[0].abs() >= v.0[1].abs() { v.0[0] } else { v.0[1] };
            (v.scaled(1.0 / big), c)
        }
        CausalClass::Zero => (*v, c),
        _ => (v.scaled(1.0 / v.norm2().abs().sqrt()), c),
    }
}

/// Roots of the binary quadratic `m`, with their multiplicity.
pub fn solve_binary(m: &Mat2, tol: f64) -> (Multiplicity, Vec<Vec2>) {
    let (a, b, c) = (m[(0, 0)], 0.5 * (m[(0, 1)] + m[(1, 0)]), m[(1, 1)]);
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale <= tol {
        return (Multiplicity::DegenerateTotal, vec![]);
    }
    let det = a * c - b * b;
    if det.abs() <= tol * scale * scale.max(1.0) {
        let v = if a.abs() >= c.abs() { Vec2::new(-b, a) } else { Vec2::new(c, -b) };
        return (Multiplicity::Double, vec![v]);
    }
    if det > 0.0 {
        return (Multiplicity::None, vec![]);
    }
    let s = (-det).sqrt();
    let t = -(b + if b >= 0.0 { s } else { -s });
    (Multiplicity::TwoDistinct, vec![Vec2::new(t, a), Vec2::new(c, t)])
}

fn report(m: &Mat2, tol: f64, scale: f64) -> DirectionReport {
    let (mult, roots) = solve_binary(m, tol * scale * scale);
    let k = if mult == Multiplicity::Double { 2 } else { 1 };
    let directions = roots
        .iter()
        .map(|r| {
            let (v, causal) = normalize_direction(r, tol.sqrt());
            Direction { v, causal, multiplicity: k }
        })
        .collect();
    DirectionReport { directions, multiplicity: mult, table_row: None }
}

/// Causal classes predicted by the table, before the `K_N < 0` exchange.
fn table_cell(sig: (u8, u8), mult: Multiplicity) -> Option<Vec<CausalClass>> {
    use CausalClass::*;
    Some(match (sig, mult) {
        ((2, 0), Multiplicity::TwoDistinct) => vec![Spacelike, Spacelike],
        ((0, 2), Multiplicity::TwoDistinct) => vec![Timelike, Timelike],
        ((1, 1), Multiplicity::TwoDistinct) => vec![Spacelike, Timelike],
        ((1, 0), Multiplicity::TwoDistinct) => vec![Lightlike, Spacelike],
        ((0, 1), Multiplicity::TwoDistinct) => vec![Lightlike, Timelike],
        ((0, 0), Multiplicity::TwoDistinct) => vec![Lightlike, Lightlike],
        ((2, 0), Multiplicity::Double) => vec![Spacelike],
        ((0, 2), Multiplicity::Double) => vec![Timelike],
        ((1, 0) | (0, 1), Multiplicity::Double) => vec![Lightlike],
        _ => return None,
    })
}

/// Rows for `K_N = 0`, where `δ = δ⁰`.
fn flat_normal_cell(sig: (u8, u8), mult: Multiplicity) -> Option<Vec<CausalClass>> {
    use CausalClass::*;
    Some(match (sig, mult) {
        ((1, 1), Multiplicity::TwoDistinct) => vec![Spacelike, Timelike],
        ((1, 0) | (0, 1), Multiplicity::Double) => vec![Lightlike],
        ((2, 0) | (0, 2), Multiplicity::None) => vec![],
        _ => return None,
    })
}

fn compatible(expected: CausalClass, d: &Vec2, observed: CausalClass) -> bool {
    if expected == observed {
        return true;
    }
    let rel = d.norm2().abs() / d.euclid_dot(d);
    rel <= 1e-4 && (expected == CausalClass::Lightlike || observed == CausalClass::Lightlike)
}

fn matches_cell(expected: &[CausalClass], dirs: &[Direction]) -> bool {
    if expected.len() != dirs.len() {
        return false;
    }
    let direct = expected.iter().zip(dirs).all(|(e, d)| compatible(*e, &d.v, d.causal));
    let swapped = expected.iter().rev().zip(dirs).all(|(e, d)| compatible(*e, &d.v, d.causal));
    direct || swapped
}

/// Asymptotic directions `δ(v) = 0`, cross-checked against the causal table.
pub fn asymptotic_directions(q: &QuadraticMap, tol: f64) -> Result<DirectionReport> {
    let s = q.scale();
    let form = DeltaForm::new(q, tol);
    let mut rep = report(&form.mat(), tol, s);
    let sig = form.signature0;
    rep.table_row = Some(format!("({},{})", sig.0, sig.1));
    if matches!(rep.multiplicity, Multiplicity::DegenerateTotal) {
        return Ok(rep);
    }
    let kn = q.k_normal();
    let expected = if kn.abs() <= tol * s * s {
        flat_normal_cell(sig, rep.multiplicity)
    } else {
        let cell = table_cell(sig, rep.multiplicity);
        if kn < 0.0 {
            cell.map(|c| c.into_iter().map(CausalClass::exchanged).collect())
        } else {
            cell
        }
    };
    let Some(expected) = expected else {
        if rep.multiplicity == Multiplicity::None {
            return Ok(rep);
        }
        return Err(Error::InconsistentTable(format!(
            "signature {sig:?} with {:?} roots and K_N = {kn:e} has no table entry",
            rep.multiplicity
        )));
    };
    if rep.multiplicity != Multiplicity::None && !matches_cell(&expected, &rep.directions) {
        return Err(Error::InconsistentTable(format!(
            "table predicts {expected:?}, solver found {:?}",
            rep.directions.iter().map(|d| d.causal).collect::<Vec<_>>()
        )));
    }
    Ok(rep)
}

/// Matrix of `v ↦ [H, II(v)]` in the normal frame.
pub fn mean_direction_matrix(q: &QuadraticMap) -> Mat2 {
    let h = q.mean_vector();
    q.b2 * h.0[0] - q.b1 * h.0[1]
}

/// Polar form `δ(v, v*)` with `v* = (y, x)`.
pub fn mean_direction_matrix_via_delta(q: &QuadraticMap) -> Mat2 {
    sym(&(delta_matrix(q) * swap()))
}

/// Mean directionally curved directions `[H, II(v)] = 0`.
pub fn mean_curved_directions(q: &QuadraticMap, tol: f64) -> Result<DirectionReport> {
    let s = q.scale();
    let h = q.mean_vector();
    if h.euclid_norm() <= tol * s {
        return Err(Error::HUndefined);
    }
    Ok(report(&mean_direction_matrix(q), tol, s))
}

/// Binormal `ν` with `S_ν d = 0`.
pub fn contact_binormal(q: &QuadraticMap, d: &Vec2, tol: f64) -> Result<Vec2> {
    let s = q.scale();
    let residual = quad(&delta_matrix(q), d);
    if residual.abs() > tol * s * s * d.euclid_dot(d).max(f64::MIN_POSITIVE) {
        return Err(Error::NotAsymptotic { residual });
    }
    let dv = nalgebra::Vector2::new(d.0[0], d.0[1]);
    let c1 = -(eta() * q.b1 * dv);
    let c2 = eta() * q.b2 * dv;
    let m = Mat2::from_columns(&[c1, c2]);
    let r0 = Vec2::new(m[(0, 0)], m[(0, 1)]);
    let r1 = Vec2::new(m[(1, 0)], m[(1, 1)]);
    let r = if r0.euclid_norm() >= r1.euclid_norm() { r0 } else { r1 };
    let nu = if r.euclid_norm() <= tol * s * d.euclid_norm() {
        let h = q.mean_vector();
        if h.euclid_norm() > tol * s {
            Vec2::new(h.0[1], h.0[0])
        } else {
            Vec2::new(1.0, 0.0)
        }
    } else {
        Vec2::new(-r.0[1], r.0[0])
    };
    let nu = nu.scaled(1.0 / nu.euclid_norm());
    let first = if nu.0[0].abs() > 1e-14 { nu.0[0] } else { nu.0[1] };
    Ok(if first < 0.0 { nu.scaled(-1.0) } else { nu })
}

/// `‖S_ν d‖` (Euclidean).
pub fn contact_residual(q: &QuadraticMap, nu: &Vec2, d: &Vec2) -> f64 {
    q.shape_operator(nu).apply(d).euclid_norm()
}

/// The invariants `(𝖺, 𝖻, α, β)` of a point with
/// `(|H|² - K)² > K_N²` and `|H|² - K > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptedInvariants {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl AdaptedInvariants {
    /// Both sign variants of `𝖺(β ± 𝖻)x² + 𝖺(β ∓ 𝖻)y² - 2α𝖻xy`.
    pub fn asymptotic_forms(&self) -> [Mat2; 2] {
        let (a, b, al, be) = (self.a, self.b, self.alpha, self.beta);
        [
            Mat2::new(a * (be + b), -al * b, -al * b, a * (be - b)),
            Mat2::new(a * (be - b), -al * b, -al * b, a * (be + b)),
        ]
    }

    /// `α𝖻(x² + y²) - 2𝖺βxy`.
    pub fn mean_form(&self) -> Mat2 {
        let (a, b, al, be) = (self.a, self.b, self.alpha, self.beta);
        Mat2::new(al * b, -a * be, -a * be, al * b)
    }

    /// Residuals of `|H|²`, `K`, `Δ` and `K_N` against their expressions.
    pub fn relation_residuals(&self, q: &QuadraticMap) -> [f64; 4] {
        let (a, b, al, be) = (self.a, self.b, self.alpha, self.beta);
        [
            q.mean_vector().norm2() - (-al * al + be * be),
            q.k_gauss() - (-al * al + be * be - a * a - b * b),
            q.delta() - (-a * a * be * be + a * a * b * b + al * al * b * b),
            q.k_normal() - 2.0 * a * b,
        ]
    }
}

/// `(𝖺, 𝖻, α, β)` read from the reduction of `U_Φ`, when the hypotheses hold.
pub fn adapted_invariants(q: &QuadraticMap, tol: f64) -> Option<AdaptedInvariants> {
    let inv = q.invariants(tol);
    let t = inv.norm_h2 - inv.k;
    let s = q.scale();
    if !(t * t - inv.kn * inv.kn > tol * s.powi(4) && t > tol * s * s) {
        return None;
    }
    let fr = reduce_u_phi(q, tol).ok()?;
    let FrameCase::Diagonal { b, .. } = fr.case else { return None };
    let bs = b.sqrt();
    Some(AdaptedInvariants { a: inv.kn / (2.0 * bs), b: bs, alpha: fr.alpha, beta: fr.beta })
}

/// Point-level wrappers for surfaces; directions are in frame coordinates.
impl Surface {
    pub fn delta_at(&self, u: f64, v: f64, tol: f64) -> Result<DeltaForm> {
        Ok(DeltaForm::new(&self.second_fundamental_form(u, v, tol)?.qmap, tol))
    }

    /// `½ dG(eᵢ)∧dG(eⱼ)` with `dG` from the ambient second fundamental form.
    pub fn delta_wedge_at(&self, u: f64, v: f64, tol: f64) -> Result<Mat2> {
        let sff = self.second_fundamental_form(u, v, tol)?;
        let (d1, d2) = (sff.dg(&[1.0, 0.0]), sff.dg(&[0.0, 1.0]));
        Ok(Mat2::new(0.5 * d1.wedge(&d1), 0.5 * d1.wedge(&d2), 0.5 * d2.wedge(&d1), 0.5 * d2.wedge(&d2)))
    }

    pub fn asymptotic_directions_at(&self, u: f64, v: f64, tol: f64) -> Result<DirectionReport> {
        asymptotic_directions(&self.second_fundamental_form(u, v, tol)?.qmap, tol)
    }

    pub fn mean_curved_directions_at(&self, u: f64, v: f64, tol: f64) -> Result<DirectionReport> {
        mean_curved_directions(&self.second_fundamental_form(u, v, tol)?.qmap, tol)
    }

    /// Binormal in `(e₃, e₄)` coordinates.
    pub fn contact_binormal_at(&self, u: f64, v: f64, d: &Vec2, tol: f64) -> Result<Vec2> {
        contact_binormal(&self.second_fundamental_form(u, v, tol)?.qmap, d, tol)
    }
}
