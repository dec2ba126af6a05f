use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lorentz22::ads::{clifford_torus, phi_nodes, torus_gauss_kronecker, Sign, PHI_NODES};
use lorentz22::algebra::{boost, BRACKET_SIGN, CausalClass, Mat2, Vec2};
use lorentz22::asymptotic::{
    adapted_invariants, asymptotic_directions, contact_binormal, contact_residual, delta_matrix,
    mean_curved_directions, solve_binary, Multiplicity,
};
use lorentz22::classify::{classify, maps_from_reduced_forms, reconstruct, ClassificationResult, NChoice};
use lorentz22::hyperbola::{describe, sample, HyperbolaDescription};
use lorentz22::integrate::total_curvature;
use lorentz22::qmap::{e1_op, e2_op, s_det, s_dot, QuadraticMap};
use lorentz22::quasiumb::{example_family, generate, trig_ruled, verify_ruled, verify_vanishing, ExampleFamily, GRID_MARGIN};
use lorentz22::surface::{Domain, Surface};
use lorentz22::{expr, Error};

const TOL: f64 = 1e-9;
const SEED: u64 = 0x5eed_2022;

const IDENTITY_TOL: f64 = 1e-9;
const IDENTITY_BUDGET: Duration = Duration::from_secs(5);
const ROUND_TRIP_TOL: f64 = 1e-8;
const ROUND_TRIP_BUDGET: Duration = Duration::from_secs(10);
const HYPERBOLA_TOL: f64 = 1e-8;
const DUAL_ROUTE_TOL: f64 = 1e-3;
const DUAL_ROUTE_H: f64 = 1e-3;
const DUAL_ROUTE_RATIO: f64 = 3.0;
const DUAL_ROUTE_FLOOR: f64 = 1e-11;
const TOTAL_TOL: f64 = 1e-6;
const TOTAL_BUDGET: Duration = Duration::from_secs(60);
const DIRECTION_TOL: f64 = 1e-9;
const EXISTENCE_TOL: f64 = 1e-9;
const INTRINSIC_TOL: f64 = 1e-8;
const BISECTION_TOL: f64 = 1e-8;
const CONTACT_TOL: f64 = 1e-8;
const ROUTE_ANGLE_TOL: f64 = 1e-6;
const VANISHING_TOL: f64 = 1e-8;
const CONTOUR_TOL: f64 = 1e-12;
const MEMBERSHIP_TOL: f64 = 1e-12;
const CLOSED_FORM_TOL: f64 = 1e-6;

/// Criteria whose premise cannot be met; they must report FAIL.
const UNATTAINABLE: &[u8] = &[8];

struct Outcome {
    id: u8,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn unit(r: &mut ChaCha8Rng) -> f64 {
    r.gen_range(-1.0..1.0)
}

fn vec2(r: &mut ChaCha8Rng) -> Vec2 {
    Vec2::new(unit(r), unit(r))
}

fn random_qmap(r: &mut ChaCha8Rng) -> QuadraticMap {
    let (a, b, c, d, e, f) = (unit(r), unit(r), unit(r), unit(r), unit(r), unit(r));
    QuadraticMap::from_rows([[a, b], [b, c]], [[d, e], [e, f]])
}

fn boosted(q: QuadraticMap, r: &mut ChaCha8Rng) -> QuadraticMap {
    q.compose_right(&boost(unit(r))).compose_left(&boost(unit(r)))
}

fn quad(m: &Mat2, v: &Vec2) -> f64 {
    Vec2::apply(m, v).euclid_dot(v)
}

fn sin_angle(a: &Vec2, b: &Vec2) -> f64 {
    a.area(b).abs() / (a.euclid_norm() * b.euclid_norm())
}

fn direction_of(v: &Vec2) -> Vec2 {
    v.scaled(1.0 / v.euclid_norm())
}

fn timed(budget: Duration, start: Instant) -> (bool, String) {
    let t = start.elapsed();
    (t < budget, format!("{:.2}s < {}s", t.as_secs_f64(), budget.as_secs()))
}

fn identities() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let q = random_qmap(&mut r);
        let (n1, n2) = (vec2(&mut r), vec2(&mut r));
        let lagrange = q.phi_form(&n1) * q.phi_form(&n2) - (q.phi_tilde(&n1, &n2).powi(2) - q.a_form(&n1, &n2).powi(2));
        let (f1, f2) = (q.f_q(&n1), q.f_q(&n2));
        let pull_dot = q.phi_tilde(&n1, &n2) - s_dot(&f1, &f2);
        let pull_det = q.a_form(&n1, &n2) - s_det(&f1, &f2);
        let i = q.invariants(TOL);
        let tr = i.tr_phi - (i.norm_h2 - i.k);
        let det = i.det_phi - i.kn * i.kn / 4.0;
        worst = [lagrange, pull_dot, pull_det, tr, det].iter().fold(worst, |w, x| w.max(x.abs()));
    }
    let (fast, t) = timed(IDENTITY_BUDGET, start);
    Outcome {
        id: 1,
        name: "algebraic identities",
        pass: worst <= IDENTITY_TOL && fast,
        detail: format!("1000 maps, max residual {worst:.2e} <= {IDENTITY_TOL:e}, {t}"),
    }
}

fn canonical_map(case: usize, r: &mut ChaCha8Rng) -> QuadraticMap {
    let sign = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
    let pick = |r: &mut ChaCha8Rng, qs: [QuadraticMap; 2]| qs[r.gen_range(0..2)];
    let eps = |r: &mut ChaCha8Rng| if r.gen_bool(0.5) { 1.0 } else { -1.0 };
    match case {
        0 => {
            let u = if r.gen_bool(0.5) {
                let a: f64 = r.gen_range(0.05..1.0);
                let b = (a + r.gen_range(0.1..0.9)) * sign;
                Mat2::new(a * sign, 0.0, 0.0, b)
            } else {
                let t = unit(r);
                let s = r.gen_range(0.1..1.0) * sign;
                Mat2::identity() * (t / 2.0) + e2_op() * s
            };
            let h = vec2(r);
            pick(r, maps_from_reduced_forms(&h, &u, sign))
        }
        1 | 2 => {
            let t = r.gen_range(0.1..1.0) * sign;
            let u = if r.gen_bool(0.25) {
                Mat2::identity() * (t / 2.0)
            } else {
                Mat2::identity() * (t / 2.0) + e1_op() * eps(r) + e2_op() * eps(r)
            };
            let h = if case == 1 {
                let x: f64 = r.gen_range(0.2..1.0);
                if r.gen_bool(0.5) { Vec2::new(x, 0.0) } else { Vec2::new(0.0, x) }
            } else {
                let x = unit(r);
                Vec2::new(x, x * eps(r))
            };
            pick(r, maps_from_reduced_forms(&h, &u, t))
        }
        3 => {
            let th = unit(r);
            let mu = match r.gen_range(0..3) {
                0 => Vec2::new(th.cosh(), th.sinh()),
                1 => Vec2::new(th.sinh(), th.cosh()),
                _ => Vec2::new(0.5, 0.5 * eps(r)),
            };
            let n_choice = if r.gen_bool(0.5) { NChoice::N1 } else { NChoice::N2 };
            let c = ClassificationResult::QuasiUmbilic { alpha: unit(r), beta: unit(r), mu, n_choice };
            reconstruct(&c).expect("canonical quasi-umbilic map")[0]
        }
        _ => {
            let c = ClassificationResult::Umbilic { norm_h2: unit(r) };
            let reps = reconstruct(&c).expect("canonical umbilic map");
            reps[r.gen_range(0..reps.len())]
        }
    }
}

fn round_trip() -> Outcome {
    const TAGS: [&str; 5] = ["1a", "1bi", "1bii", "2a", "2b"];
    let start = Instant::now();
    let mut r = rng(2);
    let mut failures = vec![];
    let mut counts = [0usize; 5];
    for k in 0..500 {
        let case = k % 5;
        let q = boosted(canonical_map(case, &mut r), &mut r);
        let c = classify(&q, TOL);
        if c.tag() != TAGS[case] {
            failures.push(format!("map {k} built as {} classified {}", TAGS[case], c.tag()));
            continue;
        }
        counts[case] += 1;
        match reconstruct(&c) {
            Ok(reps) if !reps.is_empty() => {
                for rep in reps {
                    let c2 = classify(&rep, TOL);
                    if !c2.approx_eq(&c, ROUND_TRIP_TOL) {
                        failures.push(format!("map {k}: {c:?} came back as {c2:?}"));
                    }
                }
            }
            other => failures.push(format!("map {k}: reconstruct gave {other:?}")),
        }
    }
    let (fast, t) = timed(ROUND_TRIP_BUDGET, start);
    let spread = TAGS.iter().zip(counts).map(|(t, c)| format!("{t}:{c}")).collect::<Vec<_>>().join(" ");
    Outcome {
        id: 2,
        name: "classification round trip",
        pass: failures.is_empty() && fast,
        detail: match failures.first() {
            None => format!("500 maps ({spread}) preserved to {ROUND_TRIP_TOL:e}, {t}"),
            Some(f) => format!("{} failures, first: {f}; {t}", failures.len()),
        },
    }
}

fn rank_one(r: &mut ChaCha8Rng) -> QuadraticMap {
    let (a, b, h) = (vec2(r), vec2(r), vec2(r));
    let f = Mat2::new(a.0[0] * b.0[0], a.0[0] * b.0[1], a.0[1] * b.0[0], a.0[1] * b.0[1]);
    QuadraticMap::from_mean_and_traceless(&h, &f).compose_right(&boost(unit(r)))
}

fn hyperbola_consistency() -> Outcome {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    let mut sign_violations = 0;
    let mut degenerate = 0;
    for k in 0..200 {
        let q = if k % 4 == 3 { rank_one(&mut r) } else { random_qmap(&mut r) };
        let d = describe(&q, TOL);
        let s = q.scale();
        for p in sample(&q, 400, 3.0) {
            let res = d.residual(&p.point) / ((1.0 + s).powi(2) * (1.0 + p.point.euclid_norm()));
            worst = worst.max(res);
        }
        match d {
            HyperbolaDescription::HalfLines { .. } => {
                degenerate += 1;
                sign_violations += usize::from(q.delta() < -TOL);
            }
            HyperbolaDescription::FullLine { .. } => {
                degenerate += 1;
                sign_violations += usize::from(q.delta() > TOL);
            }
            _ => {}
        }
    }
    Outcome {
        id: 3,
        name: "hyperbola consistency",
        pass: worst <= HYPERBOLA_TOL && sign_violations == 0,
        detail: format!(
            "200 maps x 400 points, max scaled residual {worst:.2e} <= {HYPERBOLA_TOL:e}; {degenerate} degenerate lines, {sign_violations} sign violations"
        ),
    }
}

fn square(r: f64) -> Domain {
    Domain { u: [-r, r], v: [-r, r], periodic: [false, false] }
}

fn trig_surface(r: &mut ChaCha8Rng) -> Surface {
    let c: Vec<f64> = (0..8).map(|_| r.gen_range(-0.3..0.3)).collect();
    let comps = [
        format!("u + {:e}*sin(v + {:e})", c[0], c[1]),
        format!("v + {:e}*cos(u)", c[2]),
        format!("{:e}*sin(u + {:e}*v)", c[3], 1.0 + c[4]),
        format!("{:e}*cos({:e}*u - v)", c[5], 1.0 + c[6]),
    ];
    Surface::parse([&comps[0], &comps[1], &comps[2], &comps[3]], square(0.5)).expect("trig surface")
}

fn ruled_instance(c: [f64; 8]) -> Surface {
    let r = trig_ruled(c, square(1.0)).expect("closed-form ruled surface");
    generate(&r, 32).expect("lightlike ruled surface")
}

fn benchmark_surfaces() -> Vec<(&'static str, Surface)> {
    let mut r = rng(4);
    vec![
        ("flat torus", Surface::parse(["cos(u)", "sin(v)", "sin(u)", "cos(v)"], Domain::torus()).unwrap()),
        ("perturbed torus", perturbed_torus()),
        ("graph", Surface::parse(["u", "v", "u^2", "2*u*v"], square(0.4)).unwrap()),
        ("quasi-umbilic", ruled_instance([0.8, 0.3, -0.7, -1.1, 2.5, 0.1, 0.4, -0.1])),
        ("random trig", trig_surface(&mut r)),
    ]
}

fn perturbed_torus() -> Surface {
    Surface::parse(["cos(u)", "sin(v)", "sin(u)", "cos(v) + 0.1*cos(u)*cos(v)"], Domain::torus()).unwrap()
}

fn max_route_error(s: &Surface, h: f64) -> lorentz22::Result<f64> {
    let mut worst = 0.0f64;
    for (u, v) in s.domain.grid(32, GRID_MARGIN) {
        let c = s.gauss_curvatures(u, v, h, TOL)?;
        worst = worst.max((c.k_ii - c.k_pullback).abs()).max((c.kn_ii - c.kn_pullback).abs());
    }
    Ok(worst)
}

fn dual_route() -> Outcome {
    let mut notes = vec![];
    let mut pass = true;
    for (name, s) in benchmark_surfaces() {
        let (coarse, fine) = match (max_route_error(&s, DUAL_ROUTE_H), max_route_error(&s, DUAL_ROUTE_H / 2.0)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                pass = false;
                notes.push(format!("{name}: {e}"));
                continue;
            }
        };
        let converges = coarse <= DUAL_ROUTE_FLOOR || coarse >= DUAL_ROUTE_RATIO * fine;
        pass &= coarse <= DUAL_ROUTE_TOL && converges;
        let ratio = if fine > 0.0 { coarse / fine } else { f64::INFINITY };
        notes.push(format!("{name} {coarse:.1e} (x{ratio:.1})"));
    }
    let sign_fixed = Surface::parse(["u", "v", "u^2", "2*u*v"], square(0.5))
        .and_then(|g| g.gauss_curvatures(0.0, 0.0, DUAL_ROUTE_H, TOL))
        .map(|c| c.k_ii.abs() > 1.0 && (c.k_ii - c.k_pullback).abs() < DUAL_ROUTE_TOL)
        .unwrap_or(false);
    pass &= sign_fixed;
    Outcome {
        id: 4,
        name: "dual-route curvature",
        pass,
        detail: format!("32x32, h={DUAL_ROUTE_H:e}, bracket sign {BRACKET_SIGN:+}: {}", notes.join(", ")),
    }
}

fn total_curvature_check() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut notes = vec![];
    let tori = [("flat", Surface::parse(["cos(u)", "sin(v)", "sin(u)", "cos(v)"], Domain::torus()).unwrap()), ("perturbed", perturbed_torus())];
    for (name, s) in tori {
        match total_curvature(&s, 256, TOL) {
            Ok(t) => {
                pass &= t.int_k.abs() <= TOTAL_TOL && t.int_kn.abs() <= TOTAL_TOL;
                notes.push(format!("{name} |intK| {:.1e} |intKN| {:.1e}", t.int_k.abs(), t.int_kn.abs()));
            }
            Err(e) => {
                pass = false;
                notes.push(format!("{name}: {e}"));
            }
        }
    }
    let (fast, t) = timed(TOTAL_BUDGET, start);
    Outcome {
        id: 5,
        name: "total curvature",
        pass: pass && fast,
        detail: format!("256x256 midpoint, {} <= {TOTAL_TOL:e}, {t}", notes.join(", ")),
    }
}

/// Binormals with a degenerate shape operator, and the kernel of each.
fn contact_pairs(q: &QuadraticMap) -> Option<Vec<(Vec2, Vec2)>> {
    let det = |nu: Vec2| q.shape_operator(&nu).det();
    let (p, s) = (det(Vec2::new(1.0, 0.0)), det(Vec2::new(0.0, 1.0)));
    let m = 0.5 * (det(Vec2::new(1.0, 1.0)) - p - s);
    let (mult, roots) = solve_binary(&Mat2::new(p, m, m, s), 1e-12);
    if mult == Multiplicity::DegenerateTotal {
        return None;
    }
    Some(
        roots
            .into_iter()
            .map(|nu| {
                let sm = q.shape_operator(&nu).0;
                let r0 = Vec2::new(sm[(0, 0)], sm[(0, 1)]);
                let r1 = Vec2::new(sm[(1, 0)], sm[(1, 1)]);
                let row = if r0.euclid_norm() >= r1.euclid_norm() { r0 } else { r1 };
                (nu, Vec2::new(-row.0[1], row.0[0]))
            })
            .collect(),
    )
}

fn simple_hyp_map(r: &mut ChaCha8Rng) -> (QuadraticMap, f64) {
    let a: f64 = r.gen_range(0.05..1.0);
    let mut b: f64 = r.gen_range(0.05..1.0);
    while (a - b).abs() <= 0.05 {
        b = r.gen_range(0.05..1.0);
    }
    let sign = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
    let q0 = maps_from_reduced_forms(&Vec2::new(unit(r), unit(r)), &Mat2::new(a, 0.0, 0.0, b), sign)[0];
    let g = unit(r);
    (q0.compose_right(&boost(g)).compose_left(&boost(unit(r))), g)
}

#[derive(Default)]
struct AsymptoticTally {
    residual: f64,
    existence_errors: usize,
    table_errors: usize,
    intrinsic: f64,
    bisection: f64,
    bisected: usize,
    contact: f64,
    route_angle: f64,
    route_mismatch: usize,
    qu_errors: usize,
}

fn check_directions(q: &QuadraticMap, t: &mut AsymptoticTally) {
    let rep = match asymptotic_directions(q, TOL) {
        Ok(rep) => rep,
        Err(Error::InconsistentTable(_)) => {
            t.table_errors += 1;
            return;
        }
        Err(e) => panic!("{e}"),
    };
    if rep.is_degenerate_total() {
        return;
    }
    if rep.directions.is_empty() != (q.delta() < -EXISTENCE_TOL) {
        t.existence_errors += 1;
    }
    let dm = delta_matrix(q);
    for d in &rep.directions {
        let w = direction_of(&d.v);
        t.residual = t.residual.max(quad(&dm, &w).abs());
        let nu = contact_binormal(q, &w, 1e-6).expect("asymptotic direction has a binormal");
        t.contact = t.contact.max(contact_residual(q, &nu, &w));
    }
    if let Some(pairs) = contact_pairs(q) {
        if pairs.len() != rep.directions.len() {
            t.route_mismatch += 1;
        }
        for (_, k) in &pairs {
            let best = rep.directions.iter().map(|d| sin_angle(k, &d.v)).fold(f64::INFINITY, f64::min);
            t.route_angle = t.route_angle.max(if best.is_finite() { best } else { 1.0 });
        }
    }
    if let Ok(mean) = mean_curved_directions(q, TOL) {
        let lorentz_basis = mean.directions.len() == 2 && mean.directions.iter().all(|d| d.causal != CausalClass::Lightlike);
        if lorentz_basis {
            t.bisected += 1;
            let (m1, m2) = (mean.directions[0].v, mean.directions[1].v);
            let det = m1.area(&m2);
            for d in &rep.directions {
                let x = d.v.area(&m2) / det;
                let y = m1.area(&d.v) / det;
                let mirrored = direction_of(&(m1.scaled(x) - m2.scaled(y)));
                t.bisection = t.bisection.max(quad(&dm, &mirrored).abs());
            }
        }
    }
}

fn is_double_lightlike(q: &QuadraticMap) -> bool {
    match asymptotic_directions(q, TOL) {
        Ok(rep) => rep.multiplicity == Multiplicity::Double && rep.directions.iter().all(|d| d.causal == CausalClass::Lightlike),
        Err(_) => false,
    }
}

fn asymptotic_suite() -> Outcome {
    let mut r = rng(6);
    let mut t = AsymptoticTally::default();
    for _ in 0..500 {
        check_directions(&random_qmap(&mut r), &mut t);
    }
    for _ in 0..100 {
        let (q, g) = simple_hyp_map(&mut r);
        check_directions(&q, &mut t);
        let ai = adapted_invariants(&q, TOL).expect("diagonal frame");
        t.intrinsic = ai.relation_residuals(&q).iter().fold(t.intrinsic, |w, x| w.max(x.abs()));
        let forms = ai.asymptotic_forms();
        let back = boost(g);
        for d in asymptotic_directions(&q, TOL).unwrap().directions {
            let w = direction_of(&Vec2::apply(&back, &d.v));
            let best = forms.iter().map(|m| quad(m, &w).abs()).fold(f64::INFINITY, f64::min);
            t.intrinsic = t.intrinsic.max(best);
        }
    }
    let mut qu_points = 0;
    while qu_points < 50 {
        let q = boosted(canonical_map(3, &mut r), &mut r);
        if delta_matrix(&q).norm() <= TOL * q.scale().powi(2) {
            continue;
        }
        qu_points += 1;
        t.qu_errors += usize::from(!is_double_lightlike(&q) || classify(&q, TOL).tag() != "2a");
    }
    let mut controls = 0;
    while controls < 50 {
        let q = match controls % 5 {
            0 => boosted(canonical_map(0, &mut r), &mut r),
            1 => boosted(canonical_map(1, &mut r), &mut r),
            2 => boosted(QuadraticMap::from_rows([[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [1.0, 0.0]]), &mut r),
            _ => random_qmap(&mut r),
        };
        if delta_matrix(&q).norm() <= TOL * q.scale().powi(2) {
            continue;
        }
        controls += 1;
        t.qu_errors += usize::from(is_double_lightlike(&q) || classify(&q, TOL).tag() == "2a");
    }
    let pass = t.residual <= DIRECTION_TOL
        && t.existence_errors == 0
        && t.table_errors == 0
        && t.intrinsic <= INTRINSIC_TOL
        && t.bisection <= BISECTION_TOL
        && t.contact <= CONTACT_TOL
        && t.route_angle <= ROUTE_ANGLE_TOL
        && t.route_mismatch == 0
        && t.qu_errors == 0;
    Outcome {
        id: 6,
        name: "asymptotic suite",
        pass,
        detail: format!(
            "residual {:.1e}, existence errors {}, table errors {}, intrinsic {:.1e}, bisection {:.1e} over {} maps, contact {:.1e}, route angle {:.1e} ({} count mismatches), 50+50 quasi-umbilic errors {}",
            t.residual, t.existence_errors, t.table_errors, t.intrinsic, t.bisection, t.bisected, t.contact, t.route_angle, t.route_mismatch, t.qu_errors
        ),
    }
}

fn family(b: &str) -> ExampleFamily {
    let p = |s: &str| expr::parse(s).unwrap();
    ExampleFamily { a: p("s"), b: p(b), f: p("cos(s)"), g: p("sin(s)"), domain: square(1.0) }
}

fn quasi_umbilic_generator() -> Outcome {
    let mut r = rng(7);
    let mut worst = 0.0f64;
    let mut other = 0;
    let mut checked = 0;
    for _ in 0..20 {
        let c = [
            r.gen_range(0.3..1.5),
            r.gen_range(-3.0..3.0),
            r.gen_range(-1.5..-0.3),
            r.gen_range(-3.0..3.0),
            r.gen_range(2.2..2.9),
            r.gen_range(-0.2..0.2),
            r.gen_range(0.1..0.8),
            r.gen_range(-0.2..0.2),
        ];
        let rep = verify_ruled(&ruled_instance(c), 12, TOL).expect("ruled surface grid");
        worst = worst.max(rep.max_residual).max(rep.max_phi);
        other += rep.other;
        checked += rep.checked;
    }
    let base = example_family(&family("s^2/2"), 64).and_then(|s| verify_vanishing(&s, 24, TOL));
    let (base_ok, base_note) = match base {
        Ok(v) => {
            let rank = v.hyperplane.map(|h| h.affine_rank).unwrap_or(0);
            let regular = v.points.iter().all(|p| p.gauss_regular);
            let ok = v.skipped.is_empty() && v.max_invariant <= VANISHING_TOL && rank == 4 && regular;
            (ok, format!("family invariants {:.1e}, affine rank {rank}, Gauss map regular {regular}", v.max_invariant))
        }
        Err(e) => (false, format!("family: {e}")),
    };
    let cubic = family("s^3/6");
    let (axis_ok, axis_note) = match example_family(&cubic, 64) {
        Ok(s) => {
            let mut mismatches = 0;
            for (u, v) in s.domain.grid(17, GRID_MARGIN) {
                let q = s.second_fundamental_form(u, v, TOL).expect("Lorentzian").qmap;
                let umbilic = classify(&q, TOL).tag() == "2b";
                mismatches += usize::from(umbilic != (u.abs() <= CONTOUR_TOL));
            }
            let nodes = cubic.umbilic_nodes(64).unwrap_or_default();
            let step = 2.0 / 63.0;
            let ok = mismatches == 0 && nodes.len() == 1 && nodes[0].abs() <= step;
            (ok, format!("cubic family umbilic set off s=0 at {mismatches} points, contour nodes {nodes:.3?}"))
        }
        Err(e) => (false, format!("cubic: {e}")),
    };
    Outcome {
        id: 7,
        name: "quasi-umbilic generator",
        pass: worst <= VANISHING_TOL && other == 0 && base_ok && axis_ok,
        detail: format!("20 ruled surfaces, {checked} points, max residual {worst:.1e}, {other} unclassified; {base_note}; {axis_note}"),
    }
}

fn ads_suite() -> Outcome {
    let r1 = 2f64.sqrt();
    let torus = clifford_torus(r1, 1.0).expect("torus in AdS");
    let nodes = phi_nodes(PHI_NODES);
    let grid = Domain::torus().grid(6, 0.0);
    let mut membership = 0.0f64;
    let mut closed = 0.0f64;
    let mut all_parabolic = true;
    let mut consistent = true;
    let mut rigidity_pass = true;
    let mut flagged = 0;
    for &(u, v) in &grid {
        let j = torus.surface().jet(u, v).unwrap();
        let n = torus.normal(u, v, TOL).unwrap();
        for x in [n.dot(&j.p), n.dot(&j.pu), n.dot(&j.pv), n.norm2() - 1.0, j.p.norm2() + 1.0] {
            membership = membership.max(x.abs());
        }
        for &phi in &nodes {
            for sign in [Sign::Plus, Sign::Minus] {
                let d = torus.dual(u, v, phi, sign, TOL).unwrap();
                membership = membership.max((d.norm2() - phi.sin().powi(2)).abs());
                let gk = torus.gauss_kronecker(u, v, phi, sign, TOL).unwrap();
                closed = closed.max((gk - torus_gauss_kronecker(r1, 1.0, phi, sign)).abs());
            }
        }
        let rep = torus.rigidity(u, v, Sign::Minus, &nodes, TOL).unwrap();
        flagged = flagged.max(rep.parabolic_nodes.len());
        all_parabolic &= rep.all_nodes_parabolic;
        consistent &= rep.directions_consistent;
        rigidity_pass &= rep.passes;
    }
    Outcome {
        id: 8,
        name: "AdS suite",
        pass: membership <= MEMBERSHIP_TOL && closed <= CLOSED_FORM_TOL && rigidity_pass,
        detail: format!(
            "membership {membership:.1e}, closed form {closed:.1e} over {PHI_NODES} nodes; rigidity premise: parabolic at all nodes {all_parabolic} (at most {flagged} of {PHI_NODES} parabolic), contact directions agree with an asymptotic direction {consistent}"
        ),
    }
}

fn main() {
    let suite: [fn() -> Outcome; 8] = [
        identities,
        round_trip,
        hyperbola_consistency,
        dual_route,
        total_curvature_check,
        asymptotic_suite,
        quasi_umbilic_generator,
        ads_suite,
    ];
    let mut unexpected = vec![];
    for run in suite {
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {} ({}): {}", o.id, o.name, o.detail);
        if o.pass == UNATTAINABLE.contains(&o.id) {
            unexpected.push(o.id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
    println!("expected failures: {UNATTAINABLE:?}");
}
