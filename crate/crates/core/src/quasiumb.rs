//! Ruled surfaces `ψ(s,t) = γ(s) + t T(s)` with lightlike `γ′` and `T`,
//! which are umbilic or quasi-umbilic, and checks of the vanishing of the
//! classical invariants.

use serde::{Deserialize, Serialize};

use crate::algebra::Vec4;
use crate::classify::{classify, ClassificationResult};
use crate::expr::{BinOp, Expr, Var};
use crate::jet::eval_jet2;
use crate::surface::{hyperplane_detect, Domain, HyperplaneInfo, Surface};
use crate::{Error, Result};

/// Relative margin trimmed from each side of the domain in grid sweeps.
pub const GRID_MARGIN: f64 = 1e-3;
/// Tolerance for `⟨γ′,γ′⟩ = ⟨T,T⟩ = 0`.
pub const LIGHTLIKE_TOL: f64 = 1e-10;

/// A lightlike curve with a lightlike transversal field along it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuledLightlikeSurface {
    pub gamma: [Expr; 4],
    #[serde(rename = "T")]
    pub t: [Expr; 4],
    #[serde(default = "default_domain")]
    pub domain: Domain,
}

/// The shorthand `γ = (a, -a, b, -b)`, `T = (f, f, g, g)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleFamily {
    pub a: Expr,
    pub b: Expr,
    pub f: Expr,
    pub g: Expr,
    #[serde(default = "default_domain")]
    pub domain: Domain,
}

/// `(s, t) ∈ [-1, 1]²`, used when a generator omits its domain.
pub fn default_domain() -> Domain {
    Domain { u: [-1.0, 1.0], v: [-1.0, 1.0], periodic: [false, false] }
}

fn d_s(e: &Expr, s: f64) -> Result<(f64, f64, f64)> {
    let j = eval_jet2(e, s, 0.0)?;
    Ok((j.value, j.d1, j.d11))
}

fn curve(es: &[Expr; 4], s: f64) -> Result<(Vec4, Vec4)> {
    let mut p = Vec4::default();
    let mut d = Vec4::default();
    for k in 0..4 {
        let (v, dv, _) = d_s(&es[k], s)?;
        p.0[k] = v;
        d.0[k] = dv;
    }
    Ok((p, d))
}

impl RuledLightlikeSurface {
    /// Checks lightlikeness and independence at `n` nodes along `s`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.gamma.iter().chain(&self.t).any(|e| e.uses_slot(1)) {
            return Err(Error::Input("gamma and T must depend on s only".into()));
        }
        for s in Domain::axis_nodes(self.domain.u, n, GRID_MARGIN) {
            let (_, dg) = curve(&self.gamma, s)?;
            let (t, _) = curve(&self.t, s)?;
            if dg.norm2().abs() > LIGHTLIKE_TOL * (1.0 + dg.euclid_dot(&dg)) {
                return Err(Error::NotLightlike(format!("gamma' at s = {s}: <,> = {:e}", dg.norm2())));
            }
            if t.norm2().abs() > LIGHTLIKE_TOL * (1.0 + t.euclid_dot(&t)) {
                return Err(Error::NotLightlike(format!("T at s = {s}: <,> = {:e}", t.norm2())));
            }
            let m = nalgebra::Matrix2x4::from_rows(&[
                nalgebra::RowVector4::from_row_slice(&dg.0),
                nalgebra::RowVector4::from_row_slice(&t.0),
            ]);
            let sv = m.singular_values();
            if sv.min() <= 1e-8 * sv.max().max(f64::MIN_POSITIVE) {
                return Err(Error::NotIndependent(format!("gamma' and T at s = {s}")));
            }
        }
        Ok(())
    }

    /// `ψ(s,t) = γ(s) + t T(s)` as a surface in the `(s, t)` parameters.
    pub fn surface(&self) -> Surface {
        let comps = std::array::from_fn(|k| {
            Expr::bin(
                BinOp::Add,
                self.gamma[k].clone(),
                Expr::bin(BinOp::Mul, Expr::var(Var::T), self.t[k].clone()),
            )
        });
        Surface::from_exprs(comps, self.domain)
    }
}

/// Validates the data on `n` nodes and returns `ψ`.
pub fn generate(r: &RuledLightlikeSurface, n: usize) -> Result<Surface> {
    r.validate(n)?;
    Ok(r.surface())
}

impl ExampleFamily {
    pub fn ruled(&self) -> RuledLightlikeSurface {
        let neg = |e: &Expr| Expr::Neg(Box::new(e.clone()));
        RuledLightlikeSurface {
            gamma: [self.a.clone(), neg(&self.a), self.b.clone(), neg(&self.b)],
            t: [self.f.clone(), self.f.clone(), self.g.clone(), self.g.clone()],
            domain: self.domain,
        }
    }

    /// `(a′f + b′g, f′g - g′f, b″a′ - a″b′)` at `s`.
    pub fn conditions(&self, s: f64) -> Result<[f64; 3]> {
        let (_, a1, a2) = d_s(&self.a, s)?;
        let (_, b1, b2) = d_s(&self.b, s)?;
        let (f, f1, _) = d_s(&self.f, s)?;
        let (g, g1, _) = d_s(&self.g, s)?;
        Ok([a1 * f + b1 * g, f1 * g - g1 * f, b2 * a1 - a2 * b1])
    }

    /// Nodes along `s` where `b″a′ - a″b′` changes sign or vanishes.
    pub fn umbilic_nodes(&self, n: usize) -> Result<Vec<f64>> {
        let nodes = Domain::axis_nodes(self.domain.u, n, GRID_MARGIN);
        let vals = nodes.iter().map(|&s| Ok(self.conditions(s)?[2])).collect::<Result<Vec<_>>>()?;
        let mut out = vec![];
        for i in 0..nodes.len() {
            if vals[i] == 0.0 || (i + 1 < nodes.len() && vals[i] * vals[i + 1] < 0.0) {
                out.push(nodes[i]);
            }
        }
        Ok(out)
    }
}

/// Checks the family's conditions at `n` nodes, then generates `ψ`.
pub fn example_family(fam: &ExampleFamily, n: usize) -> Result<Surface> {
    for s in Domain::axis_nodes(fam.domain.u, n, GRID_MARGIN) {
        let [c1, c2, _] = fam.conditions(s)?;
        if c1.abs() <= 1e-12 {
            return Err(Error::ConditionViolated { condition: "a'f + b'g != 0".into(), s });
        }
        if c2.abs() <= 1e-12 {
            return Err(Error::ConditionViolated { condition: "f'g - g'f != 0".into(), s });
        }
    }
    generate(&fam.ruled(), n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `Φ ≠ 0` with regular Gauss map: contained in a degenerate hyperplane.
    DegenerateHyperplane,
    /// `Φ ≡ 0`: flat, umbilic or quasi-umbilic.
    PhiZeroFlat,
    /// `Φ` vanishes at some points only, or the Gauss map is singular.
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub u: f64,
    pub v: f64,
    pub case: Option<String>,
    pub phi_zero: bool,
    pub gauss_regular: bool,
    pub max_invariant: f64,
}

/// Outcome of [`verify_vanishing`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub points: Vec<PointReport>,
    /// Points where the induced metric is not Lorentzian.
    pub skipped: Vec<[f64; 2]>,
    pub max_invariant: f64,
    pub max_phi: f64,
    pub max_k: f64,
    pub hyperplane: Option<HyperplaneInfo>,
    pub branch: Branch,
    pub dichotomy_holds: bool,
    /// `(α, β)` of quasi-umbilic points show no frame-branch jumps along grid lines.
    pub quasi_umbilic_continuous: bool,
}

impl VanishingReport {
    pub fn count(&self, case: &str) -> usize {
        self.points.iter().filter(|p| p.case.as_deref() == Some(case)).count()
    }
}

fn jumps_ok(seq: &[Option<[f64; 2]>]) -> bool {
    let steps: Vec<Option<f64>> = seq
        .windows(2)
        .map(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) => Some((a[0] - b[0]).abs() + (a[1] - b[1]).abs()),
            _ => None,
        })
        .collect();
    (0..steps.len()).all(|i| {
        let Some(j) = steps[i] else { return true };
        let prev = if i > 0 { steps[i - 1] } else { None };
        let next = steps.get(i + 1).copied().flatten();
        match prev.into_iter().chain(next).reduce(f64::max) {
            Some(local) => j <= 10.0 * local + 1e-8,
            None => true,
        }
    })
}

/// Checks `|H|² = K = K_N = Δ = 0` on an `n × n` grid and the resulting
/// dichotomy.
pub fn verify_vanishing(surface: &Surface, n: usize, tol: f64) -> Result<VanishingReport> {
    let grid = surface.domain.grid(n, GRID_MARGIN);
    let mut points = Vec::with_capacity(grid.len());
    let mut skipped = vec![];
    let mut cloud = Vec::with_capacity(grid.len());
    let (mut max_inv, mut max_phi, mut max_k) = (0.0f64, 0.0f64, 0.0f64);
    let mut qu_params = vec![vec![None; n]; n];
    for (idx, &(u, v)) in grid.iter().enumerate() {
        cloud.push(surface.point(u, v)?);
        let sff = match surface.second_fundamental_form(u, v, tol) {
            Ok(s) => s,
            Err(Error::NotLorentzian { .. } | Error::DegenerateImmersion { .. }) => {
                skipped.push([u, v]);
                continue;
            }
            Err(e) => return Err(e),
        };
        let q = &sff.qmap;
        let sc = 1.0 + q.scale().powi(2);
        let inv = q.invariants(tol);
        let m = [inv.norm_h2, inv.k, inv.kn, inv.delta].iter().fold(0.0f64, |a, x| a.max(x.abs())) / sc;
        let phi = q.phi_matrix().amax() / sc;
        max_inv = max_inv.max(m);
        max_phi = max_phi.max(phi);
        max_k = max_k.max(inv.k.abs() / sc);
        let c = nalgebra::Matrix2::new(sff.frame.c1[0], sff.frame.c2[0], sff.frame.c1[1], sff.frame.c2[1]);
        let ci = c.try_inverse().ok_or(Error::DegenerateFrame { u, v })?;
        let (g1, g2) = (sff.dg(&[ci[(0, 0)], ci[(1, 0)]]), sff.dg(&[ci[(0, 1)], ci[(1, 1)]]));
        let gm = nalgebra::Matrix2x6::from_rows(&[
            nalgebra::RowVector6::from_row_slice(&g1.0),
            nalgebra::RowVector6::from_row_slice(&g2.0),
        ]);
        let sv = gm.singular_values();
        let gauss_regular = sv.min() > tol.sqrt() * (1.0 + sv.max());
        let c = classify(q, tol);
        if let ClassificationResult::QuasiUmbilic { alpha, beta, .. } = c {
            qu_params[idx / n][idx % n] = Some([alpha, beta]);
        }
        points.push(PointReport {
            u,
            v,
            case: Some(c.tag().to_string()),
            phi_zero: q.phi_is_zero(tol),
            gauss_regular,
            max_invariant: m,
        });
    }
    let rows_ok = qu_params.iter().all(|r| jumps_ok(r));
    let cols_ok = (0..n).all(|j| jumps_ok(&qu_params.iter().map(|r| r[j]).collect::<Vec<_>>()));
    let hyperplane = if cloud.len() >= 5 { Some(hyperplane_detect(&cloud, 1e-9)?) } else { None };
    let all_phi_zero = points.iter().all(|p| p.phi_zero);
    let no_phi_zero = points.iter().all(|p| !p.phi_zero && p.gauss_regular);
    let (branch, holds) = if all_phi_zero {
        let cases_ok = points.iter().all(|p| matches!(p.case.as_deref(), Some("2a" | "2b")));
        (Branch::PhiZeroFlat, cases_ok && max_k <= 1e-8)
    } else if no_phi_zero {
        let degenerate = hyperplane.is_some_and(|h| h.affine_rank == 3 && h.degenerate == Some(true));
        (Branch::DegenerateHyperplane, degenerate)
    } else {
        (Branch::Mixed, true)
    };
    Ok(VanishingReport {
        points,
        skipped,
        max_invariant: max_inv,
        max_phi,
        max_k,
        hyperplane,
        branch,
        dichotomy_holds: holds && max_inv <= 1e-8,
        quasi_umbilic_continuous: rows_ok && cols_ok,
    })
}

/// Residuals of `|H|² = K`, `K_N = Δ = 0` and `Φ = 0` on a ruled surface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuledReport {
    pub checked: usize,
    pub skipped: Vec<[f64; 2]>,
    pub max_residual: f64,
    pub max_phi: f64,
    pub umbilic: usize,
    pub quasi_umbilic: usize,
    /// Lorentzian points classified as neither.
    pub other: usize,
}

pub fn verify_ruled(surface: &Surface, n: usize, tol: f64) -> Result<RuledReport> {
    let mut rep = RuledReport { checked: 0, skipped: vec![], max_residual: 0.0, max_phi: 0.0, umbilic: 0, quasi_umbilic: 0, other: 0 };
    for (u, v) in surface.domain.grid(n, GRID_MARGIN) {
        let q = match surface.second_fundamental_form(u, v, tol) {
            Ok(s) => s.qmap,
            Err(Error::NotLorentzian { .. } | Error::DegenerateImmersion { .. }) => {
                rep.skipped.push([u, v]);
                continue;
            }
            Err(e) => return Err(e),
        };
        let sc = 1.0 + q.scale().powi(2);
        let inv = q.invariants(tol);
        let r = [inv.norm_h2 - inv.k, inv.kn, inv.delta].iter().fold(0.0f64, |a, x| a.max(x.abs()));
        rep.max_residual = rep.max_residual.max(r / sc);
        rep.max_phi = rep.max_phi.max(q.phi_matrix().amax() / sc);
        rep.checked += 1;
        match classify(&q, tol).tag() {
            "2a" => rep.quasi_umbilic += 1,
            "2b" => rep.umbilic += 1,
            _ => rep.other += 1,
        }
    }
    Ok(rep)
}

/// A lightlike curve and field in closed form:
/// `γ′ = (cos θ, cos φ, sin θ, sin φ)` with `θ, φ` linear in `s`, and
/// `T = (cos(θ + a), cos(φ + b), sin(θ + a), sin(φ + b))` with `a, b` linear in `s`,
/// so that `⟨γ′, T⟩ = cos b - cos a`.
/// Parameters: `[p, θ₀, q, φ₀, a₀, a₁, b₀, b₁]`; `p` and `q` must be nonzero.
pub fn trig_ruled(c: [f64; 8], domain: Domain) -> Result<RuledLightlikeSurface> {
    let [p, t0, q, f0, a0, a1, b0, b1] = c;
    let lin = |a: f64, b: f64| format!("({a:e} + {b:e}*s)");
    let (th, ph) = (lin(t0, p), lin(f0, q));
    let (chi, om) = (lin(t0 + a0, p + a1), lin(f0 + b0, q + b1));
    let g = [
        format!("sin{th}/{p:e}"),
        format!("sin{ph}/{q:e}"),
        format!("-cos{th}/{p:e}"),
        format!("-cos{ph}/{q:e}"),
    ];
    let t = [format!("cos{chi}"), format!("cos{om}"), format!("sin{chi}"), format!("sin{om}")];
    let parse_all = |xs: [String; 4]| -> Result<[Expr; 4]> {
        let v = xs.iter().map(|x| crate::expr::parse(x)).collect::<Result<Vec<_>>>()?;
        Ok(v.try_into().expect("four components"))
    };
    Ok(RuledLightlikeSurface { gamma: parse_all(g)?, t: parse_all(t)?, domain })
}
