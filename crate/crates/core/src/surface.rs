//! Parametrized Lorentzian surfaces in R^{2,2}.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{bracket, causal_character, hodge_star, metric_cross3, wedge, Bivector, CausalClass, Mat2, Vec4};
use crate::expr::{BinOp, Expr, Var};
use crate::jet::{eval_jet2, fd_jet2, Jet2};
use crate::qmap::QuadraticMap;
use crate::{Error, Result};

/// A point function `(u, v) ↦ R^{2,2}` supplied by the caller.
pub type Callable = Arc<dyn Fn(f64, f64) -> Result<Vec4> + Send + Sync>;

/// Where the immersion comes from.
#[derive(Clone)]
pub enum Source {
    Exprs(Box<[Expr; 4]>),
    /// Black-box evaluation; derivatives by central differences of step `h`.
    Callable { f: Callable, h: f64 },
}

impl fmt::Debug for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Exprs(e) => f.debug_tuple("Exprs").field(e).finish(),
            Source::Callable { h, .. } => f.debug_struct("Callable").field("h", h).finish_non_exhaustive(),
        }
    }
}

/// Rectangular parameter domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub u: [f64; 2],
    pub v: [f64; 2],
    #[serde(default)]
    pub periodic: [bool; 2],
}

impl Domain {
    pub fn center(&self) -> (f64, f64) {
        (0.5 * (self.u[0] + self.u[1]), 0.5 * (self.v[0] + self.v[1]))
    }

    pub fn torus() -> Self {
        let tau = std::f64::consts::TAU;
        Domain { u: [0.0, tau], v: [0.0, tau], periodic: [true, true] }
    }

    /// Nodes of `[lo, hi]` shrunk by `margin` of its length, as used by grid sweeps.
    pub fn axis_nodes(range: [f64; 2], n: usize, margin: f64) -> Vec<f64> {
        let len = range[1] - range[0];
        let (lo, hi) = (range[0] + margin * len, range[1] - margin * len);
        match n {
            0 => vec![],
            1 => vec![0.5 * (lo + hi)],
            _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
        }
    }

    /// An `n × n` grid in row-major order (`u` outer). Periodic axes get
    /// `n` equispaced nodes without the repeated endpoint and no margin.
    pub fn grid(&self, n: usize, margin: f64) -> Vec<(f64, f64)> {
        let axis = |r: [f64; 2], periodic: bool| {
            if periodic {
                (0..n).map(|i| r[0] + (r[1] - r[0]) * i as f64 / n as f64).collect()
            } else {
                Self::axis_nodes(r, n, margin)
            }
        };
        let us: Vec<f64> = axis(self.u, self.periodic[0]);
        let vs: Vec<f64> = axis(self.v, self.periodic[1]);
        us.iter().flat_map(|&u| vs.iter().map(move |&v| (u, v))).collect()
    }
}

/// An ambient vector field used to fix time orientations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorField {
    Constant(Vec4),
    Exprs(Box<[Expr; 4]>),
    /// `a ψ_u + b ψ_v` (tangent references only).
    Coefficients { coefficients: [f64; 2] },
}

/// Value and derivatives up to order two of the immersion at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceJet {
    pub p: Vec4,
    pub pu: Vec4,
    pub pv: Vec4,
    pub puu: Vec4,
    pub puv: Vec4,
    pub pvv: Vec4,
}

impl SurfaceJet {
    fn from_components(j: [Jet2; 4]) -> Self {
        let pick = |f: fn(&Jet2) -> f64| Vec4([f(&j[0]), f(&j[1]), f(&j[2]), f(&j[3])]);
        SurfaceJet {
            p: pick(|x| x.value),
            pu: pick(|x| x.d1),
            pv: pick(|x| x.d2),
            puu: pick(|x| x.d11),
            puv: pick(|x| x.d12),
            pvv: pick(|x| x.d22),
        }
    }

    /// Induced metric `[[E, F], [F, G]]`.
    pub fn gram(&self) -> Mat2 {
        let (e, f, g) = (self.pu.norm2(), self.pu.dot(&self.pv), self.pv.norm2());
        Mat2::new(e, f, f, g)
    }

    pub fn tangent(&self, c: &[f64; 2]) -> Vec4 {
        self.pu.scaled(c[0]) + self.pv.scaled(c[1])
    }

    /// `Σ a_i b_j ψ_ij`.
    pub fn second(&self, a: &[f64; 2], b: &[f64; 2]) -> Vec4 {
        self.puu.scaled(a[0] * b[0]) + self.puv.scaled(a[0] * b[1] + a[1] * b[0]) + self.pvv.scaled(a[1] * b[1])
    }

    fn second_by_index(&self, a: usize, b: usize) -> Vec4 {
        match (a, b) {
            (0, 0) => self.puu,
            (1, 1) => self.pvv,
            _ => self.puv,
        }
    }
}

/// Adapted orthonormal frame; `c1`, `c2` are the coordinates of `e1`, `e2`
/// in `(ψ_u, ψ_v)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FramePair {
    pub e1: Vec4,
    pub e2: Vec4,
    pub e3: Vec4,
    pub e4: Vec4,
    pub c1: [f64; 2],
    pub c2: [f64; 2],
}

impl FramePair {
    pub fn vectors(&self) -> [Vec4; 4] {
        [self.e1, self.e2, self.e3, self.e4]
    }

    /// Projection onto the normal plane.
    pub fn normal_part(&self, x: &Vec4) -> Vec4 {
        *x + self.e1.scaled(x.dot(&self.e1)) - self.e2.scaled(x.dot(&self.e2))
    }

    /// Largest deviation of the Gram matrix from `diag(-1, 1, -1, 1)`.
    pub fn gram_error(&self) -> f64 {
        let v = self.vectors();
        let target = crate::algebra::METRIC4;
        let mut err = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let t = if i == j { target[i] } else { 0.0 };
                err = err.max((v[i].dot(&v[j]) - t).abs());
            }
        }
        err
    }
}

/// Second fundamental form in an adapted frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecondFundamentalForm {
    pub qmap: QuadraticMap,
    pub x: f64,
    pub z: f64,
    pub y: f64,
    pub u: f64,
    pub w: f64,
    pub v: f64,
    pub frame: FramePair,
    /// `II(e_i, e_j)` as ambient vectors.
    pub ii: [[Vec4; 2]; 2],
}

impl SecondFundamentalForm {
    /// `K = xy - z² - uv + w²`.
    pub fn k_gauss(&self) -> f64 {
        self.x * self.y - self.z * self.z - self.u * self.v + self.w * self.w
    }

    /// `II(a, b)` for tangent vectors given in frame coordinates.
    pub fn eval(&self, a: &[f64; 2], b: &[f64; 2]) -> Vec4 {
        let mut out = Vec4::ZERO;
        for i in 0..2 {
            for j in 0..2 {
                out = out + self.ii[i][j].scaled(a[i] * b[j]);
            }
        }
        out
    }

    /// Mean curvature vector `½ tr_g II` as an ambient vector.
    pub fn mean_vector(&self) -> Vec4 {
        (self.ii[1][1] - self.ii[0][0]).scaled(0.5)
    }

    /// Differential of the Gauss map along the tangent vector with frame
    /// coordinates `a`: `II(a, e₁)∧e₂ + e₁∧II(a, e₂)`.
    pub fn dg(&self, a: &[f64; 2]) -> Bivector {
        let f = &self.frame;
        wedge(&self.eval(a, &[1.0, 0.0]), &f.e2) + wedge(&f.e1, &self.eval(a, &[0.0, 1.0]))
    }
}

/// Curvatures from the coefficients and from the Gauss map.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussCurvatures {
    pub k_ii: f64,
    pub k_pullback: f64,
    pub kn_ii: f64,
    pub kn_pullback: f64,
}

/// Result of [`hyperplane_detect`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneInfo {
    pub affine_rank: usize,
    pub conormal: Option<Vec4>,
    pub degenerate: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct Surface {
    source: Source,
    pub domain: Domain,
    tangent_ref: VectorField,
    normal_ref: Option<VectorField>,
    tangent_ref_is_default: bool,
    normal_ref_is_default: bool,
}

/// A coordinate leg starts the Gram–Schmidt only if `⟨ψ,ψ⟩ < -TIMELIKE_LEG · ‖g‖`.
pub const TIMELIKE_LEG: f64 = 1e-2;

fn component_jets(e: &[Expr; 4], u: f64, v: f64) -> Result<[Jet2; 4]> {
    Ok([eval_jet2(&e[0], u, v)?, eval_jet2(&e[1], u, v)?, eval_jet2(&e[2], u, v)?, eval_jet2(&e[3], u, v)?])
}

fn first_nonzero_positive(x: Vec4) -> Vec4 {
    let m = x.euclid_norm();
    match x.0.iter().find(|c| c.abs() > 1e-12 * m.max(1.0)) {
        Some(c) if *c < 0.0 => x.scaled(-1.0),
        _ => x,
    }
}

impl Surface {
    pub fn from_exprs(components: [Expr; 4], domain: Domain) -> Self {
        Surface::with_source(Source::Exprs(Box::new(components)), domain)
    }

    /// Parses four component expressions.
    pub fn parse(components: [&str; 4], domain: Domain) -> Result<Self> {
        let e = [
            crate::expr::parse(components[0])?,
            crate::expr::parse(components[1])?,
            crate::expr::parse(components[2])?,
            crate::expr::parse(components[3])?,
        ];
        Ok(Surface::from_exprs(e, domain))
    }

    pub fn from_callable(f: Callable, domain: Domain, h: f64) -> Self {
        Surface::with_source(Source::Callable { f, h }, domain)
    }

    fn with_source(source: Source, domain: Domain) -> Self {
        let mut s = Surface {
            source,
            domain,
            tangent_ref: VectorField::Coefficients { coefficients: [1.0, 0.0] },
            normal_ref: None,
            tangent_ref_is_default: true,
            normal_ref_is_default: true,
        };
        s.resolve_default_refs();
        s
    }

    /// The coordinate field timelike at the domain center, and the first
    /// normal of the frame there.
    fn resolve_default_refs(&mut self) {
        let (u0, v0) = self.domain.center();
        let Ok(j) = self.jet(u0, v0) else { return };
        let g = j.gram();
        let coefficients = if self.tangent_ref_is_default {
            if g[(0, 0)] < 0.0 {
                [1.0, 0.0]
            } else if g[(1, 1)] < 0.0 {
                [0.0, 1.0]
            } else {
                timelike_coefficients(&g)
            }
        } else {
            [1.0, 0.0]
        };
        if self.tangent_ref_is_default {
            self.tangent_ref = VectorField::Coefficients { coefficients };
        }
        if self.normal_ref_is_default {
            self.normal_ref = None;
            if let Ok(fr) = self.frames_at(u0, v0, crate::algebra::DEFAULT_TOL) {
                self.normal_ref = Some(VectorField::Constant(fr.e3));
            }
        }
    }

    pub fn with_tangent_ref(mut self, r: VectorField) -> Self {
        self.tangent_ref = r;
        self.tangent_ref_is_default = false;
        self
    }

    pub fn with_normal_ref(mut self, r: VectorField) -> Self {
        self.normal_ref = Some(r);
        self.normal_ref_is_default = false;
        self
    }

    pub fn tangent_ref(&self) -> &VectorField {
        &self.tangent_ref
    }

    pub fn normal_ref(&self) -> Option<&VectorField> {
        self.normal_ref.as_ref()
    }

    /// Whether the time orientations come from the built-in convention.
    pub fn refs_are_default(&self) -> (bool, bool) {
        (self.tangent_ref_is_default, self.normal_ref_is_default)
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn components(&self) -> Option<&[Expr; 4]> {
        match &self.source {
            Source::Exprs(e) => Some(e),
            Source::Callable { .. } => None,
        }
    }

    pub fn point(&self, u: f64, v: f64) -> Result<Vec4> {
        match &self.source {
            Source::Exprs(e) => Ok(Vec4([e[0].eval(u, v)?, e[1].eval(u, v)?, e[2].eval(u, v)?, e[3].eval(u, v)?])),
            Source::Callable { f, .. } => f(u, v),
        }
    }

    pub fn jet(&self, u: f64, v: f64) -> Result<SurfaceJet> {
        match &self.source {
            Source::Exprs(e) => Ok(SurfaceJet::from_components(component_jets(e, u, v)?)),
            Source::Callable { f, h } => {
                let comp = |i: usize| fd_jet2(|a, b| f(a, b).map(|p| p.0[i]), u, v, *h);
                Ok(SurfaceJet::from_components([comp(0)?, comp(1)?, comp(2)?, comp(3)?]))
            }
        }
    }

    /// The surface `A ∘ ψ` for a linear map `A` of R^{2,2}.
    pub fn transformed(&self, a: &nalgebra::Matrix4<f64>) -> Self {
        let source = match &self.source {
            Source::Exprs(e) => {
                let row = |i: usize| {
                    (0..4)
                        .map(|j| Expr::bin(BinOp::Mul, Expr::num(a[(i, j)]), e[j].clone()))
                        .reduce(|x, y| Expr::bin(BinOp::Add, x, y))
                        .unwrap()
                };
                Source::Exprs(Box::new([row(0), row(1), row(2), row(3)]))
            }
            Source::Callable { f, h } => {
                let f = f.clone();
                let a = *a;
                let g: Callable = Arc::new(move |u, v| {
                    let p = f(u, v)?;
                    let x = a * nalgebra::Vector4::from(p.0);
                    Ok(Vec4([x[0], x[1], x[2], x[3]]))
                });
                Source::Callable { f: g, h: *h }
            }
        };
        Surface::with_source(source, self.domain)
    }

    /// The surface with parameters exchanged, `(u, v) ↦ ψ(v, u)`.
    pub fn swapped(&self) -> Self {
        let d = Domain { u: self.domain.v, v: self.domain.u, periodic: [self.domain.periodic[1], self.domain.periodic[0]] };
        let source = match &self.source {
            Source::Exprs(e) => {
                let by = [Expr::var(Var::V), Expr::var(Var::U)];
                Source::Exprs(Box::new([e[0].substitute(&by), e[1].substitute(&by), e[2].substitute(&by), e[3].substitute(&by)]))
            }
            Source::Callable { f, h } => {
                let f = f.clone();
                let g: Callable = Arc::new(move |u, v| f(v, u));
                Source::Callable { f: g, h: *h }
            }
        };
        Surface::with_source(source, d)
    }

    fn field_at(&self, r: &VectorField, j: &SurfaceJet, u: f64, v: f64) -> Result<Vec4> {
        Ok(match r {
            VectorField::Constant(x) => *x,
            VectorField::Exprs(e) => Vec4([e[0].eval(u, v)?, e[1].eval(u, v)?, e[2].eval(u, v)?, e[3].eval(u, v)?]),
            VectorField::Coefficients { coefficients } => j.tangent(coefficients),
        })
    }

    /// Adapted frame at `(u, v)`.
    pub fn frames_at(&self, u: f64, v: f64, tol: f64) -> Result<FramePair> {
        let j = self.jet(u, v)?;
        self.frames_from_jet(&j, u, v, tol)
    }

    pub fn frames_from_jet(&self, j: &SurfaceJet, u: f64, v: f64, tol: f64) -> Result<FramePair> {
        let area = wedge(&j.pu, &j.pv).euclid_norm();
        let lengths = j.pu.euclid_norm() * j.pv.euclid_norm();
        if !(area > tol * lengths) || lengths == 0.0 {
            return Err(Error::DegenerateImmersion { u, v });
        }
        let g = j.gram();
        let det = g.determinant();
        let scale = g.abs().max();
        if !(det < -tol * scale * scale) {
            return Err(Error::NotLorentzian { u, v, det });
        }

        let leg = TIMELIKE_LEG * scale;
        let mut c1 = if g[(0, 0)] < -leg {
            [1.0 / (-g[(0, 0)]).sqrt(), 0.0]
        } else if g[(1, 1)] < -leg {
            [0.0, 1.0 / (-g[(1, 1)]).sqrt()]
        } else {
            timelike_coefficients(&g)
        };
        let reference = self.field_at(&self.tangent_ref, j, u, v)?;
        if j.tangent(&c1).dot(&reference) > 0.0 {
            c1 = [-c1[0], -c1[1]];
        }
        let w = [g[(0, 0)] * c1[0] + g[(0, 1)] * c1[1], g[(1, 0)] * c1[0] + g[(1, 1)] * c1[1]];
        let mut c2 = [-w[1], w[0]];
        let n2 = j.tangent(&c2).norm2();
        c2 = [c2[0] / n2.sqrt(), c2[1] / n2.sqrt()];
        if c1[0] * c2[1] - c1[1] * c2[0] < 0.0 {
            c2 = [-c2[0], -c2[1]];
        }
        let e1 = j.tangent(&c1);
        let e2 = j.tangent(&c2);
        let partial = FramePair { e1, e2, e3: Vec4::ZERO, e4: Vec4::ZERO, c1, c2 };

        let e3 = match &self.normal_ref {
            Some(r) => {
                let r = self.field_at(r, j, u, v)?;
                let pr = partial.normal_part(&r);
                let n = pr.norm2();
                if n < -1e-6 * pr.euclid_dot(&pr) {
                    pr.scaled(1.0 / (-n).sqrt())
                } else {
                    let e = normal_from_basis(&partial);
                    if e.dot(&r) > 0.0 {
                        e.scaled(-1.0)
                    } else {
                        e
                    }
                }
            }
            None => first_nonzero_positive(normal_from_basis(&partial)),
        };
        let n = metric_cross3(&e1, &e2, &e3);
        let e4 = n.scaled(1.0 / n.norm2().sqrt());
        Ok(FramePair { e3, e4, ..partial })
    }

    /// Second fundamental form at `(u, v)`.
    pub fn second_fundamental_form(&self, u: f64, v: f64, tol: f64) -> Result<SecondFundamentalForm> {
        let j = self.jet(u, v)?;
        let frame = self.frames_from_jet(&j, u, v, tol)?;
        Ok(second_fundamental_form_from(&j, &frame))
    }

    /// Gauss map `ψ_u∧ψ_v / √(F² - EG)`.
    pub fn gauss_map(&self, u: f64, v: f64) -> Result<Bivector> {
        let j = self.jet(u, v)?;
        let det = j.gram().determinant();
        if !(det < 0.0) {
            return Err(Error::NotLorentzian { u, v, det });
        }
        Ok(wedge(&j.pu, &j.pv).scaled(1.0 / (-det).sqrt()))
    }

    /// Central-difference derivatives `(∂_u G, ∂_v G)`, halving the step
    /// when the stencil straddles a jump of `G`.
    pub fn gauss_map_derivatives(&self, u: f64, v: f64, h: f64) -> Result<(Bivector, Bivector)> {
        let g0 = self.gauss_map(u, v)?;
        let mut step = h;
        for _ in 0..5 {
            let gu = (self.gauss_map(u + step, v)?, self.gauss_map(u - step, v)?);
            let gv = (self.gauss_map(u, v + step)?, self.gauss_map(u, v - step)?);
            let jump = [gu.0, gu.1, gv.0, gv.1].iter().map(|g| (*g - g0).euclid_norm()).fold(0.0, f64::max);
            let du = (gu.0 - gu.1).scaled(0.5 / step);
            let dv = (gv.0 - gv.1).scaled(0.5 / step);
            let slope = du.euclid_norm().max(dv.euclid_norm());
            if jump <= 10.0 * step * slope + 1e-3 {
                return Ok((du, dv));
            }
            step *= 0.5;
        }
        Err(Error::DiscontinuousGaussMap { u, v })
    }

    /// `K` and `K_N` by the coefficient formulas and through the Gauss map.
    pub fn gauss_curvatures(&self, u: f64, v: f64, h: f64, tol: f64) -> Result<GaussCurvatures> {
        let sff = self.second_fundamental_form(u, v, tol)?;
        let (du, dv) = self.gauss_map_derivatives(u, v, h)?;
        let f = &sff.frame;
        let d1 = du.scaled(f.c1[0]) + dv.scaled(f.c1[1]);
        let d2 = du.scaled(f.c2[0]) + dv.scaled(f.c2[1]);
        let br = bracket(&d1, &d2);
        let g = wedge(&f.e1, &f.e2);
        Ok(GaussCurvatures {
            k_ii: sff.k_gauss(),
            k_pullback: -g.dot(&br),
            kn_ii: sff.qmap.k_normal(),
            kn_pullback: hodge_star(&g).dot(&br),
        })
    }
}

/// Coordinates `c` with `cᵀ g c = -1` along the negative eigenvector of `g`.
fn timelike_coefficients(g: &Mat2) -> [f64; 2] {
    let (_, vs) = crate::algebra::sym2_eigen(g);
    let c = vs[0];
    let n = c.0[0] * (g[(0, 0)] * c.0[0] + g[(0, 1)] * c.0[1]) + c.0[1] * (g[(1, 0)] * c.0[0] + g[(1, 1)] * c.0[1]);
    let s = 1.0 / (-n).sqrt();
    [c.0[0] * s, c.0[1] * s]
}

/// Unit timelike normal built from the most timelike projected basis vector.
fn normal_from_basis(f: &FramePair) -> Vec4 {
    let mut best = Vec4::ZERO;
    let mut best_norm = 0.0;
    for i in 0..4 {
        let p = f.normal_part(&Vec4::basis(i));
        let n = p.norm2();
        if n < best_norm {
            best_norm = n;
            best = p;
        }
    }
    if best_norm < 0.0 {
        return best.scaled(1.0 / (-best_norm).sqrt());
    }
    // every projection null: combine two of them
    let p: Vec<Vec4> = (0..4).map(|i| f.normal_part(&Vec4::basis(i))).collect();
    for a in 0..4 {
        for b in 0..4 {
            for s in [1.0, -1.0] {
                let x = p[a] + p[b].scaled(s);
                let n = x.norm2();
                if n < -1e-9 {
                    return x.scaled(1.0 / (-n).sqrt());
                }
            }
        }
    }
    best
}

/// `II` in the frame `frame`, from the jet at the same point.
pub fn second_fundamental_form_from(j: &SurfaceJet, frame: &FramePair) -> SecondFundamentalForm {
    let c = [frame.c1, frame.c2];
    let mut ii = [[Vec4::ZERO; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            ii[a][b] = frame.normal_part(&j.second(&c[a], &c[b]));
        }
    }
    let co3 = |x: &Vec4| -x.dot(&frame.e3);
    let co4 = |x: &Vec4| x.dot(&frame.e4);
    let (x, z, y) = (co3(&ii[0][0]), co3(&ii[0][1]), co3(&ii[1][1]));
    let (u, w, v) = (co4(&ii[0][0]), co4(&ii[0][1]), co4(&ii[1][1]));
    SecondFundamentalForm {
        qmap: QuadraticMap::from_rows([[x, z], [z, y]], [[u, w], [w, v]]),
        x,
        z,
        y,
        u,
        w,
        v,
        frame: *frame,
        ii,
    }
}

/// Hessians `⟨ψ_ab, ν⟩` in frame coordinates, for a normal `ν`.
pub fn normal_hessian(j: &SurfaceJet, frame: &FramePair, nu: &Vec4) -> Mat2 {
    let c = [frame.c1, frame.c2];
    let raw = Mat2::from_fn(|a, b| j.second_by_index(a, b).dot(nu));
    let cm = Mat2::new(c[0][0], c[1][0], c[0][1], c[1][1]);
    cm.transpose() * raw * cm
}

/// Affine rank of a point cloud and, in rank three, its conormal.
pub fn hyperplane_detect(points: &[Vec4], tol: f64) -> Result<HyperplaneInfo> {
    if points.len() < 5 {
        return Err(Error::TooFewPoints { needed: 5, got: points.len() });
    }
    let n = points.len() as f64;
    let mut mean = [0.0; 4];
    for p in points {
        for k in 0..4 {
            mean[k] += p.0[k] / n;
        }
    }
    let m = DMatrix::from_fn(points.len(), 4, |i, k| points[i].0[k] - mean[k]);
    let svd = m.svd(false, true);
    let sv = &svd.singular_values;
    let vt = svd.v_t.as_ref().expect("requested V^T");
    let smax = sv.max();
    let rank = if smax == 0.0 { 0 } else { sv.iter().filter(|s| **s > tol * smax).count() };
    if rank != 3 {
        return Ok(HyperplaneInfo { affine_rank: rank, conormal: None, degenerate: None });
    }
    let (imin, _) = sv.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    let normal = Vec4([vt[(imin, 0)], vt[(imin, 1)], vt[(imin, 2)], vt[(imin, 3)]]);
    let mut conormal = normal.lowered();
    conormal = conormal.scaled(1.0 / conormal.euclid_norm());
    if conormal.0.iter().find(|c| c.abs() > 1e-12).is_some_and(|c| *c > 0.0) {
        conormal = conormal.scaled(-1.0);
    }
    let degenerate = causal_character(&conormal, tol.sqrt()) == CausalClass::Lightlike;
    Ok(HyperplaneInfo { affine_rank: 3, conormal: Some(conormal), degenerate: Some(degenerate) })
}
