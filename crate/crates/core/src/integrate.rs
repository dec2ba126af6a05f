//! Quadrature of curvature densities over a surface domain.
//!
//! Periodic axes use the midpoint rule; other axes use composite
//! Gauss–Legendre panels of 32 nodes. Row sums are reduced in index order so
//! results do not depend on the thread count.

use serde::{Deserialize, Serialize};

use crate::surface::{second_fundamental_form_from, SecondFundamentalForm, Surface, SurfaceJet};
use crate::{Error, Result};

/// Nodes per Gauss–Legendre panel.
pub const GL_NODES: usize = 32;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Nodes and weights along one axis.
pub fn axis_rule(range: [f64; 2], periodic: bool, n: usize) -> Vec<(f64, f64)> {
    let (lo, hi) = (range[0], range[1]);
    if periodic {
        let h = (hi - lo) / n as f64;
        return (0..n).map(|i| (lo + (i as f64 + 0.5) * h, h)).collect();
    }
    let panels = n.div_ceil(GL_NODES).max(1);
    let base = gauss_legendre(GL_NODES);
    let width = (hi - lo) / panels as f64;
    let mut out = Vec::with_capacity(panels * GL_NODES);
    for p in 0..panels {
        let a = lo + p as f64 * width;
        for (x, w) in &base {
            out.push((a + 0.5 * width * (x + 1.0), 0.5 * width * w));
        }
    }
    out
}

/// Integrals of `K ω_M` and `K_N ω_M`, and the area.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TotalCurvature {
    pub int_k: f64,
    pub int_kn: f64,
    pub area: f64,
    pub nodes: [usize; 2],
}

fn map_rows<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// `∫ f ω_M` for several densities at once.
pub fn integrate<const M: usize, F>(surface: &Surface, n: usize, tol: f64, density: F) -> Result<([f64; M], f64)>
where
    F: Fn(&SurfaceJet, &SecondFundamentalForm) -> [f64; M] + Sync + Send,
{
    let d = surface.domain;
    let ru = axis_rule(d.u, d.periodic[0], n);
    let rv = axis_rule(d.v, d.periodic[1], n);
    let rows = map_rows(ru.len(), |i| -> Result<([f64; M], f64)> {
        let (u, wu) = ru[i];
        let mut acc = [0.0; M];
        let mut area = 0.0;
        for &(v, wv) in &rv {
            let j = surface.jet(u, v)?;
            let frame = surface.frames_from_jet(&j, u, v, tol)?;
            let sff = second_fundamental_form_from(&j, &frame);
            let omega = (-j.gram().determinant()).sqrt();
            let w = wu * wv * omega;
            let vals = density(&j, &sff);
            for k in 0..M {
                acc[k] += w * vals[k];
            }
            area += w;
        }
        Ok((acc, area))
    });
    let mut total = [0.0; M];
    let mut area = 0.0;
    for r in rows {
        let (acc, a) = r?;
        for k in 0..M {
            total[k] += acc[k];
        }
        area += a;
    }
    if !area.is_finite() {
        return Err(Error::Domain("non-finite area".into()));
    }
    Ok((total, area))
}

/// Total Gauss and normal curvature.
pub fn total_curvature(surface: &Surface, n: usize, tol: f64) -> Result<TotalCurvature> {
    let d = surface.domain;
    let nodes = [axis_rule(d.u, d.periodic[0], n).len(), axis_rule(d.v, d.periodic[1], n).len()];
    let ([int_k, int_kn], area) = integrate(surface, n, tol, |_, sff| [sff.k_gauss(), sff.qmap.k_normal()])?;
    Ok(TotalCurvature { int_k, int_kn, area, nodes })
}
