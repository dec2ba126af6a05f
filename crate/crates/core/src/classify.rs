//! Normal forms of `U_Φ` and the classification of quadratic maps up to the
//! actions of SO(1,1) on both sides.

use serde::{Deserialize, Serialize};

use crate::algebra::{boost, causal_character, sym2_eigen, CausalClass, Mat2, Vec2};
use crate::qmap::{eta, Invariants, QuadraticMap, N1_COORDS, N2_COORDS};
use crate::{Error, Result};

/// Canonical shape of `U_Φ` in the reduction frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FrameCase {
    /// `U_Φ = diag(a, b)`.
    Diagonal { a: f64, b: f64 },
    /// `U_Φ = ½(|H|² - K) I + s E₂`.
    TimelikeRotation { s: f64 },
    /// `U_Φ = ½(|H|² - K) I + ε₁E₁ + ε₂E₂`.
    Lightlike { eps1: i8, eps2: i8 },
}

/// Positively oriented orthonormal frame reducing `U_Φ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionFrame {
    pub u1: Vec2,
    pub u2: Vec2,
    /// Hyperbolic angle of the frame: `(u1, u2)` are the columns of `boost(psi)`.
    pub psi: f64,
    pub case: FrameCase,
    /// Vector with `|Φ(ν₀)| = 1`.
    pub nu0: Vec2,
    /// Components of `H = α u₁ + β u₂`.
    pub alpha: f64,
    pub beta: f64,
    /// Matrix of `U_Φ` in `(u1, u2)`.
    pub u_phi_reduced: [[f64; 2]; 2],
}

impl ReductionFrame {
    pub fn matrix(&self) -> Mat2 {
        boost(self.psi)
    }
}

/// Which null operator carries the traceless part of a quasi-umbilic map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NChoice {
    N1,
    N2,
}

impl NChoice {
    pub fn coords(self) -> Vec2 {
        match self {
            NChoice::N1 => N1_COORDS,
            NChoice::N2 => N2_COORDS,
        }
    }
}

/// Outcome of the classification, one variant per case of the theorem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum ClassificationResult {
    #[serde(rename = "1a")]
    CaseGeneric {
        #[serde(rename = "K")]
        k: f64,
        #[serde(rename = "KN")]
        kn: f64,
        #[serde(rename = "normH2")]
        norm_h2: f64,
        #[serde(rename = "Delta")]
        delta: f64,
    },
    #[serde(rename = "1bi")]
    CaseBorderH {
        #[serde(rename = "K")]
        k: f64,
        #[serde(rename = "normH2")]
        norm_h2: f64,
        #[serde(rename = "Delta")]
        delta: f64,
    },
    #[serde(rename = "1bii")]
    CaseBorderNull {
        #[serde(rename = "K")]
        k: f64,
        alpha: f64,
        beta: f64,
    },
    #[serde(rename = "2a")]
    QuasiUmbilic {
        alpha: f64,
        beta: f64,
        mu: Vec2,
        #[serde(rename = "N_choice")]
        n_choice: NChoice,
    },
    #[serde(rename = "2b")]
    Umbilic {
        #[serde(rename = "normH2")]
        norm_h2: f64,
    },
}

impl ClassificationResult {
    /// Case label in the theorem's numbering.
    pub fn tag(&self) -> &'static str {
        match self {
            ClassificationResult::CaseGeneric { .. } => "1a",
            ClassificationResult::CaseBorderH { .. } => "1bi",
            ClassificationResult::CaseBorderNull { .. } => "1bii",
            ClassificationResult::QuasiUmbilic { .. } => "2a",
            ClassificationResult::Umbilic { .. } => "2b",
        }
    }

    /// Reported numbers in a fixed order, for comparisons.
    pub fn values(&self) -> Vec<f64> {
        match *self {
            ClassificationResult::CaseGeneric { k, kn, norm_h2, delta } => vec![k, kn, norm_h2, delta],
            ClassificationResult::CaseBorderH { k, norm_h2, delta } => vec![k, norm_h2, delta],
            ClassificationResult::CaseBorderNull { k, alpha, beta } => vec![k, alpha, beta],
            ClassificationResult::QuasiUmbilic { alpha, beta, mu, .. } => vec![alpha, beta, mu.0[0], mu.0[1]],
            ClassificationResult::Umbilic { norm_h2 } => vec![norm_h2],
        }
    }

    /// Same tag (and null operator) with every value within `tol · (1 + |value|)`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.tag() != other.tag() {
            return false;
        }
        if let (
            ClassificationResult::QuasiUmbilic { n_choice: a, .. },
            ClassificationResult::QuasiUmbilic { n_choice: b, .. },
        ) = (self, other)
        {
            if a != b {
                return false;
            }
        }
        self.values()
            .iter()
            .zip(other.values())
            .all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
    }
}

/// `(|H|² - K)² - K_N²`.
pub fn discriminant(inv: &Invariants) -> f64 {
    let t = inv.norm_h2 - inv.k;
    t * t - inv.kn * inv.kn
}

fn traceless(m: &Mat2) -> Vec2 {
    Vec2([0.5 * (m[(0, 0)] - m[(1, 1)]), 0.5 * (m[(0, 1)] - m[(1, 0)])])
}

fn conjugate(m: &Mat2, psi: f64) -> Mat2 {
    boost(-psi) * m * boost(psi)
}

fn rows(m: &Mat2) -> [[f64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

fn sign_i8(x: f64) -> i8 {
    if x < 0.0 {
        -1
    } else {
        1
    }
}

/// Reduces `U_Φ` to its normal form.
pub fn reduce_u_phi(q: &QuadraticMap, tol: f64) -> Result<ReductionFrame> {
    if q.phi_is_zero(tol) {
        return Err(Error::PhiZero);
    }
    let s = q.scale();
    let inv = q.invariants(tol);
    let u = q.u_phi();
    let half_tr = 0.5 * u.trace();
    let c = traceless(&u);
    let disc = discriminant(&inv);
    let (c1, c2) = (c.0[0], c.0[1]);

    let u0_zero = c1.abs().max(c2.abs()) <= tol * s * s;
    let psi = if u0_zero {
        0.0
    } else if disc.abs() <= tol * s.powi(4) {
        let sg = if c1 * c2 < 0.0 { -1.0 } else { 1.0 };
        let r = 0.5 * (c1.abs() + c2.abs());
        -sg * r.ln() / 2.0
    } else if disc > 0.0 {
        0.5 * (-c2 / c1).atanh()
    } else {
        0.5 * (-c1 / c2).atanh()
    };

    let red = conjugate(&u, psi);
    let rc = traceless(&red);
    let case = if u0_zero {
        FrameCase::Diagonal { a: half_tr, b: half_tr }
    } else if disc.abs() <= tol * s.powi(4) {
        FrameCase::Lightlike { eps1: sign_i8(rc.0[0]), eps2: sign_i8(rc.0[1]) }
    } else if disc > 0.0 {
        FrameCase::Diagonal { a: red[(0, 0)], b: red[(1, 1)] }
    } else {
        FrameCase::TimelikeRotation { s: rc.0[1] }
    };

    let p = boost(psi);
    let u1 = Vec2([p[(0, 0)], p[(1, 0)]]);
    let u2 = Vec2([p[(0, 1)], p[(1, 1)]]);
    let h = inv.h;

    let phi_of = |v: &Vec2| q.phi_form(v);
    let candidates = [u1, u2, u1 + u2, u1 - u2];
    let best = candidates
        .iter()
        .copied()
        .max_by(|a, b| phi_of(a).abs().total_cmp(&phi_of(b).abs()))
        .unwrap();
    let nu0 = best.scaled(1.0 / phi_of(&best).abs().sqrt());

    Ok(ReductionFrame {
        u1,
        u2,
        psi,
        case,
        nu0,
        alpha: -h.dot(&u1),
        beta: h.dot(&u2),
        u_phi_reduced: rows(&red),
    })
}

/// Normalized distinguished vector `μ` and the null operator of a
/// quasi-umbilic map.
pub(crate) fn quasi_umbilic_data(q: &QuadraticMap, tol: f64) -> (Vec2, NChoice) {
    let f = q.f_matrix();
    let col0 = Vec2([f[(0, 0)], f[(1, 0)]]);
    let col1 = Vec2([f[(0, 1)], f[(1, 1)]]);
    let dom = if col0.euclid_norm() >= col1.euclid_norm() { col0 } else { col1 };
    let n = if dom.0[0] * dom.0[1] >= 0.0 { NChoice::N1 } else { NChoice::N2 };
    let lambda = |c: &Vec2| match n {
        NChoice::N1 => c.0[0] + c.0[1],
        NChoice::N2 => c.0[1] - c.0[0],
    };
    let mu = Vec2([-lambda(&col0), lambda(&col1)]);
    (normalize_mu(&mu, tol), n)
}

/// Positive rescaling to `|μ|² = ±1`, or to components `±½` when `μ` is null.
pub fn normalize_mu(mu: &Vec2, tol: f64) -> Vec2 {
    match causal_character(mu, 0.0) {
        CausalClass::Zero => *mu,
        _ if mu.norm2().abs() <= tol.max(1e-12) * mu.euclid_dot(mu) => {
            let m = mu.0[0].abs().max(mu.0[1].abs());
            Vec2([0.5 * mu.0[0].signum(), 0.5 * mu.0[1].signum()]).scaled(if m > 0.0 { 1.0 } else { 0.0 })
        }
        _ => mu.scaled(1.0 / mu.norm2().abs().sqrt()),
    }
}

/// `μ*`: the diagonal reflection of `μ` when `|μ|² = ±1`, otherwise the null
/// vector `μ'` with `<μ, μ'> = ½`.
pub fn mu_star(mu: &Vec2, tol: f64) -> Vec2 {
    if mu.norm2().abs() <= tol.max(1e-12) * mu.euclid_dot(mu) {
        Vec2([-mu.0[0], mu.0[1]])
    } else {
        mu.diagonal_reflection()
    }
}

/// Solves `H = α μ + β μ*`.
fn coordinates_in(h: &Vec2, a: &Vec2, b: &Vec2) -> (f64, f64) {
    let det = a.area(b);
    ((h.area(b)) / det, (a.area(h)) / det)
}

/// Classifies a quadratic map.
pub fn classify(q: &QuadraticMap, tol: f64) -> ClassificationResult {
    let inv = q.invariants(tol);
    let s = q.scale();
    if !inv.phi_is_zero {
        let disc = discriminant(&inv);
        if disc.abs() > tol * s.powi(4) {
            return ClassificationResult::CaseGeneric { k: inv.k, kn: inv.kn, norm_h2: inv.norm_h2, delta: inv.delta };
        }
        if inv.norm_h2.abs() > tol * s * s {
            return ClassificationResult::CaseBorderH { k: inv.k, norm_h2: inv.norm_h2, delta: inv.delta };
        }
        let frame = reduce_u_phi(q, tol).expect("Phi is nonzero");
        return ClassificationResult::CaseBorderNull { k: inv.k, alpha: frame.alpha, beta: frame.beta };
    }
    if inv.rank_f > 0 {
        let (mu, n_choice) = quasi_umbilic_data(q, tol);
        let (alpha, beta) = coordinates_in(&inv.h, &mu, &mu_star(&mu, tol));
        return ClassificationResult::QuasiUmbilic { alpha, beta, mu, n_choice };
    }
    ClassificationResult::Umbilic { norm_h2: inv.norm_h2 }
}

/// Quadratic maps with mean vector `h` and `C_Φ = η u_phi`, in the canonical
/// frames. `kn_sign` selects the sign of `K_N`; both `±f` are returned.
pub fn maps_from_reduced_forms(h: &Vec2, u_phi: &Mat2, kn_sign: f64) -> [QuadraticMap; 2] {
    let c_phi = eta() * u_phi;
    let c_phi = (c_phi + c_phi.transpose()) * 0.5;
    let (ls, vs) = sym2_eigen(&c_phi);
    let row = |l: f64, v: &Vec2| v.scaled(l.abs().sqrt());
    let r1 = if ls[1] > 0.0 { row(ls[1], &vs[1]).0 } else { [0.0; 2] };
    let r2 = if ls[0] < 0.0 { row(ls[0], &vs[0]).0 } else { [0.0; 2] };
    let mut f = Mat2::new(r1[0], r1[1], r2[0], r2[1]);
    if f.determinant() * kn_sign < 0.0 {
        f[(1, 0)] = -f[(1, 0)];
        f[(1, 1)] = -f[(1, 1)];
    }
    [QuadraticMap::from_mean_and_traceless(h, &f), QuadraticMap::from_mean_and_traceless(h, &(-f))]
}

fn e_ops(t: f64, c1: f64, c2: f64) -> Mat2 {
    Mat2::new(t / 2.0 + c1, c2, -c2, t / 2.0 - c1)
}

fn push_both(out: &mut Vec<QuadraticMap>, h: Vec2, u: &Mat2, kn: f64) {
    let signs: &[f64] = if kn == 0.0 { &[1.0] } else { &[kn.signum()] };
    for &sg in signs {
        out.extend(maps_from_reduced_forms(&h, u, sg));
    }
}

fn sqrt_clamped(x: f64, slack: f64) -> Option<f64> {
    if x < -slack {
        None
    } else {
        Some(x.max(0.0).sqrt())
    }
}

/// Canonical mean vectors with a prescribed norm (all `SO(1,1)` orbits).
fn mean_vectors_of_norm(n: f64) -> Vec<Vec2> {
    if n < 0.0 {
        let r = (-n).sqrt();
        vec![Vec2::new(r, 0.0), Vec2::new(-r, 0.0)]
    } else if n > 0.0 {
        let r = n.sqrt();
        vec![Vec2::new(0.0, r), Vec2::new(0.0, -r)]
    } else {
        vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(1.0, -1.0),
            Vec2::new(-1.0, 1.0),
            Vec2::new(-1.0, -1.0),
        ]
    }
}

fn lightlike_means(t: f64, norm_h2: f64, delta: f64, eps1: f64, eps2: f64) -> Vec<Vec2> {
    let v = -delta + t * t / 4.0 - 0.5 * norm_h2 * t;
    let sigma = eps1 * eps2;
    let mut out = Vec::new();
    if eps1 * v <= 0.0 {
        return out;
    }
    let root = (eps1 * v).sqrt();
    for r in [root, -root] {
        let sr = sigma * r;
        let beta = 0.5 * (sr + norm_h2 / sr);
        let alpha = sigma * 0.5 * (sr - norm_h2 / sr);
        out.push(Vec2::new(alpha, beta));
    }
    out
}

/// All canonical quadratic maps consistent with a classification result.
pub fn reconstruct(c: &ClassificationResult) -> Result<Vec<QuadraticMap>> {
    const SLACK: f64 = 1e-12;
    let mut cands: Vec<QuadraticMap> = Vec::new();
    match *c {
        ClassificationResult::CaseGeneric { k, kn, norm_h2, delta } => {
            let t = norm_h2 - k;
            let disc = t * t - kn * kn;
            if disc > 0.0 {
                let r = disc.sqrt();
                for (a, b) in [((t + r) / 2.0, (t - r) / 2.0), ((t - r) / 2.0, (t + r) / 2.0)] {
                    let a2 = (a * norm_h2 + delta - kn * kn / 4.0) / (b - a);
                    let scale = 1.0 + a2.abs() + norm_h2.abs();
                    let (Some(al), Some(be)) = (sqrt_clamped(a2, SLACK * scale), sqrt_clamped(norm_h2 + a2, SLACK * scale))
                    else {
                        continue;
                    };
                    let u = Mat2::new(a, 0.0, 0.0, b);
                    for sa in [1.0, -1.0] {
                        for sb in [1.0, -1.0] {
                            push_both(&mut cands, Vec2::new(sa * al, sb * be), &u, kn);
                        }
                    }
                }
            } else if disc < 0.0 {
                let sabs = (-disc).sqrt() / 2.0;
                for s in [sabs, -sabs] {
                    let p = -(t * norm_h2 / 2.0 - kn * kn / 4.0 + delta) / (2.0 * s);
                    let a2 = 0.5 * (-norm_h2 + (norm_h2 * norm_h2 + 4.0 * p * p).sqrt());
                    let al = a2.max(0.0).sqrt();
                    let be_abs = (norm_h2 + a2).max(0.0).sqrt();
                    let u = e_ops(t, 0.0, s);
                    for sa in [1.0, -1.0] {
                        let a = sa * al;
                        let b = if p * a < 0.0 { -be_abs } else { be_abs };
                        push_both(&mut cands, Vec2::new(a, b), &u, kn);
                        if p == 0.0 || a == 0.0 {
                            push_both(&mut cands, Vec2::new(a, -b), &u, kn);
                        }
                    }
                }
            } else {
                return Err(Error::InconsistentInvariants("case 1a requires a nonzero discriminant".into()));
            }
        }
        ClassificationResult::CaseBorderH { k, norm_h2, delta } => {
            let t = norm_h2 - k;
            for kn in [t, -t] {
                let u = Mat2::identity() * (t / 2.0);
                for h in mean_vectors_of_norm(norm_h2) {
                    push_both(&mut cands, h, &u, kn);
                }
                for eps1 in [1.0, -1.0] {
                    for eps2 in [1.0, -1.0] {
                        let u = e_ops(t, eps1, eps2);
                        for h in lightlike_means(t, norm_h2, delta, eps1, eps2) {
                            push_both(&mut cands, h, &u, kn);
                        }
                    }
                }
            }
        }
        ClassificationResult::CaseBorderNull { k, alpha, beta } => {
            if (alpha.abs() - beta.abs()).abs() > 1e-9 * (1.0 + alpha.abs()) {
                return Err(Error::InconsistentInvariants("case 1bii requires alpha = ±beta".into()));
            }
            let h = Vec2::new(alpha, beta);
            let t = h.norm2() - k;
            for kn in [t, -t] {
                push_both(&mut cands, h, &(Mat2::identity() * (t / 2.0)), kn);
                for eps1 in [1.0, -1.0] {
                    for eps2 in [1.0, -1.0] {
                        push_both(&mut cands, h, &e_ops(t, eps1, eps2), kn);
                    }
                }
            }
        }
        ClassificationResult::QuasiUmbilic { alpha, beta, mu, n_choice } => {
            let n2 = mu.norm2();
            let null_ok = (mu.0[0].abs() - 0.5).abs() <= 1e-9 && (mu.0[1].abs() - 0.5).abs() <= 1e-9;
            if !((n2.abs() - 1.0).abs() <= 1e-9 || null_ok) {
                return Err(Error::InconsistentInvariants("mu must satisfy |mu|² = ±1 or mu = ½(±1, ±1)".into()));
            }
            let h = mu.scaled(alpha) + mu_star(&mu, 1e-9).scaled(beta);
            let nc = n_choice.coords();
            let l = mu.lowered();
            let f = Mat2::new(nc.0[0] * l.0[0], nc.0[0] * l.0[1], nc.0[1] * l.0[0], nc.0[1] * l.0[1]);
            cands.push(QuadraticMap::from_mean_and_traceless(&h, &f));
        }
        ClassificationResult::Umbilic { norm_h2 } => {
            for h in mean_vectors_of_norm(norm_h2) {
                cands.push(QuadraticMap::from_mean_and_traceless(&h, &Mat2::zeros()));
            }
        }
    }

    let mut out: Vec<QuadraticMap> = Vec::new();
    for q in cands {
        if !q.is_finite() || !classify(&q, crate::algebra::DEFAULT_TOL).approx_eq(c, 1e-9) {
            continue;
        }
        if !out.iter().any(|p| (p.b1 - q.b1).norm() + (p.b2 - q.b2).norm() <= 1e-12 * (1.0 + q.scale())) {
            out.push(q);
        }
    }
    if out.is_empty() {
        return Err(Error::InconsistentInvariants(format!("no quadratic map realizes case {}", c.tag())));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmap::tests::unit_qmap;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const TOL: f64 = 1e-9;

    fn q(b1: [[f64; 2]; 2], b2: [[f64; 2]; 2]) -> QuadraticMap {
        QuadraticMap::from_rows(b1, b2)
    }

    fn check_frame(q: &QuadraticMap, fr: &ReductionFrame) {
        let red = conjugate(&q.u_phi(), fr.psi);
        let t = q.u_phi().trace() / 2.0;
        let expect = match fr.case {
            FrameCase::Diagonal { a, b } => Mat2::new(a, 0.0, 0.0, b),
            FrameCase::TimelikeRotation { s } => e_ops(2.0 * t, 0.0, s),
            FrameCase::Lightlike { eps1, eps2 } => e_ops(2.0 * t, eps1 as f64, eps2 as f64),
        };
        assert!((red - expect).norm() <= 1e-9 * (1.0 + q.scale().powi(2)), "{red} vs {expect}");
        assert_abs_diff_eq!(fr.u1.norm2(), -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fr.u2.norm2(), 1.0, epsilon = 1e-12);
        assert!(fr.u1.0[0] > 0.0 && fr.u1.area(&fr.u2) > 0.0);
    }

    #[test]
    fn reduce_examples() {
        let a = q([[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [1.0, 0.0]]);
        let fr = reduce_u_phi(&a, TOL).unwrap();
        assert_eq!(fr.case, FrameCase::Diagonal { a: -1.0, b: -1.0 });
        check_frame(&a, &fr);

        let b = q([[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 1.0]]);
        let fr = reduce_u_phi(&b, TOL).unwrap();
        assert!(matches!(fr.case, FrameCase::Lightlike { .. }));
        check_frame(&b, &fr);
        let inv = b.invariants(TOL);
        let v = -inv.delta + inv.kn * inv.kn / 4.0 - 0.5 * inv.norm_h2 * (inv.norm_h2 - inv.k);
        assert_abs_diff_eq!(v, -0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(fr.alpha * fr.alpha, 1.0 / 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(fr.beta * fr.beta, 1.0 / 16.0, epsilon = 1e-12);

        let umb = q([[-1.0, 0.0], [0.0, 1.0]], [[0.0; 2]; 2]);
        assert_eq!(reduce_u_phi(&umb, TOL), Err(Error::PhiZero));
    }

    #[test]
    fn classify_examples() {
        let qu = q([[0.0; 2]; 2], [[-0.5, -0.5], [-0.5, -0.5]]);
        match classify(&qu, TOL) {
            ClassificationResult::QuasiUmbilic { alpha, beta, mu, n_choice } => {
                assert_eq!((alpha, beta), (0.0, 0.0));
                assert_eq!(mu, Vec2::new(0.0, 1.0));
                assert_eq!(n_choice, NChoice::N1);
            }
            other => panic!("{other:?}"),
        }
        let umb = q([[-1.0, 0.0], [0.0, 1.0]], [[0.0; 2]; 2]);
        assert_eq!(classify(&umb, TOL), ClassificationResult::Umbilic { norm_h2: -1.0 });
        let bn = q([[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [1.0, 0.0]]);
        assert_eq!(classify(&bn, TOL), ClassificationResult::CaseBorderNull { k: 2.0, alpha: 0.0, beta: 0.0 });
    }

    #[test]
    fn border_null_with_nonzero_v() {
        // |H|² = 0 yet v ≠ 0: reported as 1bii with α, β from the frame
        let b = q([[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 1.0]]);
        match classify(&b, TOL) {
            ClassificationResult::CaseBorderNull { k, alpha, beta } => {
                assert_eq!(k, 0.0);
                assert_abs_diff_eq!(alpha.abs(), beta.abs(), epsilon = 1e-12);
                assert_abs_diff_eq!(alpha.abs(), 0.25, epsilon = 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reconstruct_examples() {
        let reps = reconstruct(&ClassificationResult::Umbilic { norm_h2: -1.0 }).unwrap();
        assert_eq!(reps.len(), 2);
        for r in &reps {
            assert_eq!(r.b2, Mat2::zeros());
            assert_abs_diff_eq!(r.b1[(0, 0)].abs(), 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(r.b1[(0, 0)], -r.b1[(1, 1)], epsilon = 1e-15);
        }

        let c = ClassificationResult::QuasiUmbilic { alpha: 0.0, beta: 0.0, mu: Vec2::new(0.0, 1.0), n_choice: NChoice::N1 };
        let reps = reconstruct(&c).unwrap();
        let target = q([[0.0; 2]; 2], [[-0.5, -0.5], [-0.5, -0.5]]);
        assert!(reps.iter().any(|r| (r.b1 - target.b1).norm() + (r.b2 - target.b2).norm() < 1e-14));

        let bad = ClassificationResult::CaseBorderNull { k: 1.0, alpha: 1.0, beta: 0.3 };
        assert!(matches!(reconstruct(&bad), Err(Error::InconsistentInvariants(_))));
    }

    #[test]
    fn json_uses_case_discriminator() {
        let c = ClassificationResult::CaseBorderNull { k: 2.0, alpha: 0.0, beta: 0.0 };
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"case\":\"1bii\""), "{s}");
        let back: ClassificationResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    fn round_trip(q: &QuadraticMap) -> std::result::Result<(), TestCaseError> {
        let c = classify(q, TOL);
        let reps = reconstruct(&c).map_err(|e| TestCaseError::fail(format!("{e} for {c:?}")))?;
        for r in reps {
            let c2 = classify(&r, TOL);
            prop_assert!(c2.approx_eq(&c, 1e-8), "{:?} vs {:?}", c2, c);
        }
        Ok(())
    }

    proptest! {
        #[test]
        fn random_maps_round_trip(q in unit_qmap()) {
            round_trip(&q)?;
        }

        #[test]
        fn border_maps_round_trip(
            t in -1.0f64..1.0,
            h in prop::array::uniform2(-1.0f64..1.0),
            kind in 0usize..5,
            kn_sign in prop::bool::ANY,
            g in -1.0f64..1.0,
            l in -1.0f64..1.0,
        ) {
            let u = match kind {
                0 => Mat2::identity() * (t / 2.0),
                k => e_ops(t, if k % 2 == 0 { 1.0 } else { -1.0 }, if k > 2 { 1.0 } else { -1.0 }),
            };
            let kn = if kn_sign { t } else { -t };
            let mut hv = Vec2(h);
            if l > 0.5 {
                hv = Vec2::new(h[0], h[0]);
            }
            let q0 = maps_from_reduced_forms(&hv, &u, kn)[0];
            let q1 = q0.compose_right(&boost(g)).compose_left(&boost(l));
            let c = classify(&q1, TOL);
            prop_assert!(matches!(c.tag(), "1bi" | "1bii"), "{:?}", c);
            round_trip(&q1)?;
        }

        #[test]
        fn frames_reproduce_u_phi(q in unit_qmap()) {
            let fr = reduce_u_phi(&q, TOL).unwrap();
            check_frame(&q, &fr);
            let inv = q.invariants(TOL);
            if let FrameCase::Diagonal { a, b } = fr.case {
                if (b - a).abs() > 1e-6 {
                    let lhs = fr.alpha * fr.alpha * (b - a);
                    let rhs = a * inv.norm_h2 + inv.delta - inv.kn * inv.kn / 4.0;
                    prop_assert!((lhs - rhs).abs() <= 1e-9);
                }
            }
        }

        #[test]
        fn boost_equivariance(q in unit_qmap(), phi in -1.5f64..1.5) {
            let a = classify(&q, TOL);
            let b = classify(&q.compose_right(&boost(phi)), TOL);
            prop_assert_eq!(a.tag(), b.tag());
            prop_assert!(a.approx_eq(&b, 1e-9 * (2.0 * phi).cosh().powi(2)), "{:?} vs {:?}", a, b);
        }

        #[test]
        fn quasi_umbilic_image_is_null(alpha in -1.0f64..1.0, beta in -1.0f64..1.0, theta in -1.0f64..1.0, n in 0usize..2, kind in 0usize..3, g in -1.0f64..1.0) {
            let mu = match kind {
                0 => Vec2::new(theta.cosh(), theta.sinh()),
                1 => Vec2::new(theta.sinh(), theta.cosh()),
                _ => Vec2::new(0.5, if theta > 0.0 { 0.5 } else { -0.5 }),
            };
            let n_choice = if n == 0 { NChoice::N1 } else { NChoice::N2 };
            let c = ClassificationResult::QuasiUmbilic { alpha, beta, mu, n_choice };
            let q0 = reconstruct(&c).unwrap()[0];
            let q1 = q0.compose_right(&boost(g));
            for j in 0..2 {
                let mut e = Vec2::ZERO;
                e.0[j] = 1.0;
                let c = q1.f_q(&e);
                prop_assert!(crate::qmap::s_dot(&c, &c).abs() <= 1e-12);
            }
            prop_assert_eq!(classify(&q1, TOL).tag(), "2a");
        }
    }
}
