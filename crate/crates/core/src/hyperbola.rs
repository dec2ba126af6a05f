//! The curvature hyperbola: the image of the unit hyperbolas of the tangent
//! plane under `v ↦ q(v)/|v|²`.
//!
//! Writing the traceless part of `q` through its matrix `F` in traceless
//! coordinates, the image is `H ± ηFᵀw` with `w = (cosh 2t, sinh 2t)`, the sign
//! `+` for timelike `v` and `-` for spacelike `v`.

use serde::{Deserialize, Serialize};

use crate::algebra::{causal_character, CausalClass, Mat2, Vec2};
use crate::classify::{quasi_umbilic_data, reduce_u_phi};
use crate::qmap::{eta, QuadraticMap};

/// Causal classes taken by the points `p - H` of a nondegenerate hyperbola.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointContent {
    SpacelikeOnly,
    TimelikeOnly,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Asymptote {
    pub direction: Vec2,
    pub causal: CausalClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HyperbolaDescription {
    /// `{H + x : xᵀ C x = 1}`, with `C` the matrix of `Φ*`.
    Nondegenerate {
        center: Vec2,
        u1: Vec2,
        u2: Vec2,
        conic: [[f64; 2]; 2],
        asymptotes: [Asymptote; 2],
        point_content: PointContent,
    },
    /// `{H ± λ d : λ >= 1}`.
    HalfLines { center: Vec2, direction: Vec2 },
    /// `{H + λ d : λ ∈ ℝ}`.
    FullLine { center: Vec2, direction: Vec2 },
    /// `{H + λ μ : λ ≠ 0}`.
    LineMinusPoint { center: Vec2, direction: Vec2 },
    SinglePoint { center: Vec2 },
}

/// Branch of the unit hyperbola a sample comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `v = (cosh t, sinh t)`.
    Timelike,
    /// `v = (sinh t, cosh t)`.
    Spacelike,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Timelike => "timelike",
            Branch::Spacelike => "spacelike",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolaSample {
    pub branch: Branch,
    pub t: f64,
    pub point: Vec2,
}

fn to_rows(m: &Mat2) -> [[f64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

/// Signs taken by `A + B cosh y + C sinh y` for real `y`.
fn signs_of_hyperbolic_combination(a: f64, b: f64, c: f64, tol: f64) -> (bool, bool) {
    let d = b * b - c * c;
    if d < -tol * tol {
        return (true, true);
    }
    if b.abs().max(c.abs()) <= tol {
        return (a > tol, a < -tol);
    }
    let r = d.max(0.0).sqrt();
    if b > 0.0 {
        (true, a + r < -tol)
    } else {
        (a - r > tol, true)
    }
}

fn point_content(f: &Mat2, tol: f64) -> PointContent {
    // ⟨ηFᵀw, ηFᵀw⟩ = wᵀ M w with M = FηFᵀ
    let m = f * eta() * f.transpose();
    let a = 0.5 * (m[(0, 0)] - m[(1, 1)]);
    let b = 0.5 * (m[(0, 0)] + m[(1, 1)]);
    let c = 0.5 * (m[(0, 1)] + m[(1, 0)]);
    match signs_of_hyperbolic_combination(a, b, c, tol) {
        (true, false) => PointContent::SpacelikeOnly,
        (false, true) => PointContent::TimelikeOnly,
        _ => PointContent::Both,
    }
}

/// Describes the curvature hyperbola of `q`.
pub fn describe(q: &QuadraticMap, tol: f64) -> HyperbolaDescription {
    let inv = q.invariants(tol);
    let s = q.scale().max(f64::MIN_POSITIVE);
    let center = inv.h;
    let f = q.f_matrix();

    if inv.kn.abs() > tol * s * s {
        let (u1, u2) = match reduce_u_phi(q, tol) {
            Ok(fr) => (fr.u1, fr.u2),
            Err(_) => (Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)),
        };
        let conic = eta() * q.u_phi().try_inverse().unwrap_or_else(Mat2::zeros);
        let conic = (conic + conic.transpose()) * 0.5;
        let ft = eta() * f.transpose();
        let asymptote = |w: Vec2| {
            let d = Vec2::apply(&ft, &w);
            let d = d.scaled(1.0 / d.euclid_norm());
            Asymptote { direction: d, causal: causal_character(&d, tol.sqrt()) }
        };
        return HyperbolaDescription::Nondegenerate {
            center,
            u1,
            u2,
            conic: to_rows(&conic),
            asymptotes: [asymptote(Vec2::new(1.0, 1.0)), asymptote(Vec2::new(1.0, -1.0))],
            point_content: point_content(&f, tol * s * s),
        };
    }

    if !inv.phi_is_zero {
        // rank one: F = a bᵀ, points H ± (a·w) η b
        let col0 = Vec2([f[(0, 0)], f[(1, 0)]]);
        let col1 = Vec2([f[(0, 1)], f[(1, 1)]]);
        let a = if col0.euclid_norm() >= col1.euclid_norm() { col0 } else { col1 };
        let a_unit = a.scaled(1.0 / a.euclid_norm());
        let b = Vec2::new(a_unit.euclid_dot(&col0), a_unit.euclid_dot(&col1));
        let m = b.lowered();
        let sa = a_unit.0[0] * a_unit.0[0] - a_unit.0[1] * a_unit.0[1];
        return if sa > 0.0 {
            HyperbolaDescription::HalfLines { center, direction: m.scaled(sa.sqrt()) }
        } else {
            HyperbolaDescription::FullLine { center, direction: m.scaled(1.0 / m.euclid_norm()) }
        };
    }

    if inv.rank_f > 0 {
        let (mu, _) = quasi_umbilic_data(q, tol);
        return HyperbolaDescription::LineMinusPoint { center, direction: mu };
    }
    HyperbolaDescription::SinglePoint { center }
}

/// `q(v)/|v|²` on both unit branches, `t` on a uniform `n`-grid of `[-t_max, t_max]`.
pub fn sample(q: &QuadraticMap, n: usize, t_max: f64) -> Vec<HyperbolaSample> {
    let n = n.max(2);
    let mut out = Vec::with_capacity(2 * n);
    for branch in [Branch::Timelike, Branch::Spacelike] {
        for i in 0..n {
            let t = -t_max + 2.0 * t_max * i as f64 / (n - 1) as f64;
            let v = match branch {
                Branch::Timelike => Vec2::new(t.cosh(), t.sinh()),
                Branch::Spacelike => Vec2::new(t.sinh(), t.cosh()),
            };
            let point = q.eval(&v).scaled(1.0 / v.norm2());
            out.push(HyperbolaSample { branch, t, point });
        }
    }
    out
}

fn line_offset(x: &Vec2, d: &Vec2) -> (f64, f64) {
    let lambda = x.euclid_dot(d) / d.euclid_dot(d);
    let perp = (*x - d.scaled(lambda)).euclid_norm();
    (lambda, perp)
}

impl HyperbolaDescription {
    pub fn center(&self) -> Vec2 {
        match *self {
            HyperbolaDescription::Nondegenerate { center, .. }
            | HyperbolaDescription::HalfLines { center, .. }
            | HyperbolaDescription::FullLine { center, .. }
            | HyperbolaDescription::LineMinusPoint { center, .. }
            | HyperbolaDescription::SinglePoint { center } => center,
        }
    }

    /// How far `p` is from the described set. For a nondegenerate hyperbola
    /// this is `|Φ*(x) - 1|` relative to `1 + |x|ᵀ|C||x|`, with `x = p - H`;
    /// otherwise a Euclidean distance.
    pub fn residual(&self, p: &Vec2) -> f64 {
        let x = *p - self.center();
        match self {
            HyperbolaDescription::Nondegenerate { conic, .. } => {
                let c = Mat2::new(conic[0][0], conic[0][1], conic[1][0], conic[1][1]);
                let cx = Vec2::apply(&c, &x);
                let ax = Vec2([x.0[0].abs(), x.0[1].abs()]);
                let size = Vec2::apply(&c.abs(), &ax).euclid_dot(&ax);
                (x.euclid_dot(&cx) - 1.0).abs() / (1.0 + size)
            }
            HyperbolaDescription::HalfLines { direction, .. } => {
                let (lambda, perp) = line_offset(&x, direction);
                perp + (1.0 - lambda.abs()).max(0.0) * direction.euclid_norm()
            }
            HyperbolaDescription::FullLine { direction, .. }
            | HyperbolaDescription::LineMinusPoint { direction, .. } => line_offset(&x, direction).1,
            HyperbolaDescription::SinglePoint { .. } => x.euclid_norm(),
        }
    }
}
