//! Lorentzian surfaces in anti-de Sitter space `H³₁ = {⟨x,x⟩ = -1}`: the
//! unit normal tangent to `H³₁`, the de Sitter duals `N^φ_± = cos φ ψ ± N`,
//! their Gauss–Kronecker curvature and the contact directions of parabolic
//! points.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::algebra::{metric_cross3, volume4, Mat2, Vec2, Vec4};
use crate::asymptotic::asymptotic_directions;
use crate::surface::{Domain, FramePair, Surface, SurfaceJet};
use crate::{Error, Result};

/// Number of `φ` nodes used by rigidity checks.
pub const PHI_NODES: usize = 33;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// Chebyshev–Lobatto nodes of `[0, π/2]`; for odd `n` the middle node is `π/4`.
pub fn phi_nodes(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![FRAC_PI_2 / 2.0];
    }
    (0..n)
        .map(|k| FRAC_PI_2 / 2.0 * (1.0 - (std::f64::consts::PI * k as f64 / (n - 1) as f64).cos()))
        .collect()
}

/// A surface whose image lies in `H³₁` on a verification grid.
#[derive(Clone, Debug)]
pub struct AdsSurface {
    surface: Surface,
}

fn tangent_coords(j: &SurfaceJet, x: &Vec4) -> Vec2 {
    let g = j.gram();
    let rhs = nalgebra::Vector2::new(x.dot(&j.pu), x.dot(&j.pv));
    let c = g.lu().solve(&rhs).unwrap_or_else(nalgebra::Vector2::zeros);
    Vec2::new(c[0], c[1])
}

impl AdsSurface {
    /// Checks `|⟨ψ,ψ⟩ + 1| <= tol` on an `n × n` grid.
    pub fn new(surface: Surface, n: usize, tol: f64) -> Result<Self> {
        for (u, v) in surface.domain.grid(n, 0.0) {
            let norm = surface.point(u, v)?.norm2();
            if (norm + 1.0).abs() > tol {
                return Err(Error::NotInAds { u, v, norm });
            }
        }
        Ok(AdsSurface { surface })
    }

    pub fn surface(&self) -> &Surface {
        &self.surface
    }

    pub fn domain(&self) -> Domain {
        self.surface.domain
    }

    fn normal_parts(&self, j: &SurfaceJet, u: f64, v: f64, tol: f64) -> Result<(Vec4, [Vec4; 2])> {
        let w = metric_cross3(&j.p, &j.pu, &j.pv);
        let n2 = w.norm2();
        if !(n2 > tol * w.euclid_dot(&w)) {
            return Err(Error::DegenerateFrame { u, v });
        }
        let len = n2.sqrt();
        let wu = metric_cross3(&j.p, &j.puu, &j.pv) + metric_cross3(&j.p, &j.pu, &j.puv);
        let wv = metric_cross3(&j.p, &j.puv, &j.pv) + metric_cross3(&j.p, &j.pu, &j.pvv);
        let d = |wa: Vec4| wa.scaled(1.0 / len) - w.scaled(w.dot(&wa) / (len * len * len));
        let mut n = w.scaled(1.0 / len);
        let mut dn = [d(wu), d(wv)];
        if volume4(&j.pu, &j.pv, &j.p, &n) < 0.0 {
            n = n.scaled(-1.0);
            dn = [dn[0].scaled(-1.0), dn[1].scaled(-1.0)];
        }
        Ok((n, dn))
    }

    /// Unit spacelike normal tangent to `H³₁`, with `volume4(ψ_u, ψ_v, ψ, N) > 0`.
    pub fn normal(&self, u: f64, v: f64, tol: f64) -> Result<Vec4> {
        let j = self.surface.jet(u, v)?;
        Ok(self.normal_parts(&j, u, v, tol)?.0)
    }

    /// `cos φ ψ ± N`.
    pub fn dual(&self, u: f64, v: f64, phi: f64, sign: Sign, tol: f64) -> Result<Vec4> {
        let p = self.surface.point(u, v)?;
        Ok(p.scaled(phi.cos()) + self.normal(u, v, tol)?.scaled(sign.value()))
    }

    /// `-dN^φ_±` as a matrix in the tangent frame `(e₁, e₂)`, with the frame.
    pub fn dual_operator(&self, u: f64, v: f64, phi: f64, sign: Sign, tol: f64) -> Result<(Mat2, FramePair)> {
        let j = self.surface.jet(u, v)?;
        let frame = self.surface.frames_from_jet(&j, u, v, tol)?;
        let (_, dn) = self.normal_parts(&j, u, v, tol)?;
        let c = phi.cos();
        let cols = [j.pu, j.pv].map(|t| t.scaled(-c));
        let cols = [cols[0] - dn[0].scaled(sign.value()), cols[1] - dn[1].scaled(sign.value())];
        let a = tangent_coords(&j, &cols[0]);
        let b = tangent_coords(&j, &cols[1]);
        let coord = Mat2::new(a.0[0], b.0[0], a.0[1], b.0[1]);
        let basis = Mat2::new(frame.c1[0], frame.c2[0], frame.c1[1], frame.c2[1]);
        let inv = basis.try_inverse().ok_or(Error::DegenerateFrame { u, v })?;
        Ok((inv * coord * basis, frame))
    }

    /// `det(-dN^φ_±)` from exact jets.
    pub fn gauss_kronecker(&self, u: f64, v: f64, phi: f64, sign: Sign, tol: f64) -> Result<f64> {
        Ok(self.dual_operator(u, v, phi, sign, tol)?.0.determinant())
    }

    /// `det(-dN^φ_±)` by central differences of the dual field with step `h`.
    pub fn gauss_kronecker_fd(&self, u: f64, v: f64, phi: f64, sign: Sign, h: f64, tol: f64) -> Result<f64> {
        let j = self.surface.jet(u, v)?;
        let dual = |a: f64, b: f64| self.dual(a, b, phi, sign, tol);
        let du = (dual(u + h, v)? - dual(u - h, v)?).scaled(-0.5 / h);
        let dv = (dual(u, v + h)? - dual(u, v - h)?).scaled(-0.5 / h);
        let a = tangent_coords(&j, &du);
        let b = tangent_coords(&j, &dv);
        Ok(Mat2::new(a.0[0], b.0[0], a.0[1], b.0[1]).determinant())
    }

    /// Angles `φ ∈ [0, π/2]` at which the point is `N^φ_±`-parabolic.
    ///
    /// `det(-dN^φ_±)` is a monic quadratic in `cos φ`, so there are at most two.
    pub fn parabolic_angles(&self, u: f64, v: f64, sign: Sign, tol: f64) -> Result<Vec<f64>> {
        let (m0, _) = self.dual_operator(u, v, FRAC_PI_2, sign, tol)?;
        // -dN^φ = -cos φ I + m0
        let (tr, det) = (m0.trace(), m0.determinant());
        let disc = tr * tr - 4.0 * det;
        let mut roots = vec![];
        if disc.abs() <= tol * (1.0 + tr * tr) {
            roots.push(0.5 * tr);
        } else if disc > 0.0 {
            let r = disc.sqrt();
            roots.extend([0.5 * (tr - r), 0.5 * (tr + r)]);
        }
        Ok(roots
            .into_iter()
            .filter(|c| (-1e-12..=1.0 + 1e-12).contains(c))
            .map(|c| c.clamp(0.0, 1.0).acos())
            .collect())
    }

    /// Contact-direction rigidity at a point over the given `φ` nodes.
    pub fn rigidity(&self, u: f64, v: f64, sign: Sign, nodes: &[f64], tol: f64) -> Result<RigidityReport> {
        let mut flagged = vec![];
        for &phi in nodes {
            if self.gauss_kronecker(u, v, phi, sign, tol)?.abs() <= PARABOLIC_TOL {
                flagged.push(phi);
            }
        }
        let mut angles = flagged.clone();
        for r in self.parabolic_angles(u, v, sign, tol)? {
            if angles.iter().all(|a| (a - r).abs() > 1e-9) {
                angles.push(r);
            }
        }
        angles.sort_by(f64::total_cmp);
        let sff = self.surface.second_fundamental_form(u, v, tol)?;
        let asym = asymptotic_directions(&sff.qmap, tol)?;
        let mut directions: Vec<Vec2> = vec![];
        for &phi in &angles {
            let (m, _) = self.dual_operator(u, v, phi, sign, tol)?;
            let mut d = null_direction(&m);
            if let Some(prev) = directions.last() {
                if d.euclid_dot(prev) < 0.0 {
                    d = d.scaled(-1.0);
                }
            }
            directions.push(d);
        }
        let angle = |a: &Vec2, b: &Vec2| a.area(b).abs() / (a.euclid_norm() * b.euclid_norm());
        let mut max_pairwise = 0.0f64;
        for i in 0..directions.len() {
            for k in i + 1..directions.len() {
                max_pairwise = max_pairwise.max(angle(&directions[i], &directions[k]));
            }
        }
        let max_to_asymptotic = directions
            .iter()
            .map(|d| {
                if asym.is_degenerate_total() {
                    0.0
                } else {
                    asym.directions.iter().map(|a| angle(d, &a.v)).fold(f64::INFINITY, f64::min)
                }
            })
            .fold(0.0f64, f64::max);
        let all_nodes_parabolic = !nodes.is_empty() && flagged.len() == nodes.len();
        let consistent = !directions.is_empty() && max_pairwise <= RIGIDITY_TOL && max_to_asymptotic <= RIGIDITY_TOL;
        Ok(RigidityReport {
            nodes: nodes.len(),
            parabolic_nodes: flagged,
            parabolic_angles: angles,
            all_nodes_parabolic,
            directions,
            max_pairwise,
            max_to_asymptotic,
            passes: all_nodes_parabolic && consistent,
            directions_consistent: consistent,
        })
    }
}

/// `|det(-dN^φ_±)|` below which a point counts as parabolic.
pub const PARABOLIC_TOL: f64 = 1e-9;
/// Sine of the largest accepted angle between contact directions.
pub const RIGIDITY_TOL: f64 = 1e-6;

fn null_direction(m: &Mat2) -> Vec2 {
    let r0 = Vec2::new(m[(0, 0)], m[(0, 1)]);
    let r1 = Vec2::new(m[(1, 0)], m[(1, 1)]);
    let r = if r0.euclid_norm() >= r1.euclid_norm() { r0 } else { r1 };
    let d = Vec2::new(-r.0[1], r.0[0]);
    let n = d.euclid_norm();
    if n == 0.0 { Vec2::new(1.0, 0.0) } else { d.scaled(1.0 / n) }
}

/// Outcome of [`AdsSurface::rigidity`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub nodes: usize,
    /// Nodes at which `|det| <= PARABOLIC_TOL`.
    pub parabolic_nodes: Vec<f64>,
    /// Flagged nodes together with the exact parabolic angles.
    pub parabolic_angles: Vec<f64>,
    pub all_nodes_parabolic: bool,
    /// Null directions of `-dN^φ_±` at the parabolic angles, in frame coordinates.
    pub directions: Vec<Vec2>,
    pub max_pairwise: f64,
    pub max_to_asymptotic: f64,
    /// The point is parabolic at every node and the directions agree.
    pub passes: bool,
    /// The directions found agree with each other and with an asymptotic direction.
    pub directions_consistent: bool,
}

/// `(r₁ cos u, r₂ cos v, r₁ sin u, r₂ sin v)`, which lies in `H³₁` when `r₁² - r₂² = 1`.
pub fn clifford_torus(r1: f64, r2: f64) -> Result<AdsSurface> {
    let comps = [
        format!("{r1:e}*cos(u)"),
        format!("{r2:e}*cos(v)"),
        format!("{r1:e}*sin(u)"),
        format!("{r2:e}*sin(v)"),
    ];
    let s = Surface::parse([&comps[0], &comps[1], &comps[2], &comps[3]], Domain::torus())?;
    AdsSurface::new(s, 16, 1e-8)
}

/// `(cos φ ± r₂/r₁)(cos φ ± r₁/r₂)`.
pub fn torus_gauss_kronecker(r1: f64, r2: f64, phi: f64, sign: Sign) -> f64 {
    let (c, s) = (phi.cos(), sign.value());
    (c + s * r2 / r1) * (c + s * r1 / r2)
}
