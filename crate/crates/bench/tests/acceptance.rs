//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use lie_momentum::objective::{Frobenius, Quadratic, RestrictedRosenbrock, RetractedRosenbrock, Rosenbrock};
use lie_momentum::optimizer::{del_residuals, run_momentum, run_momentum_doubled};
use lie_momentum::pontryagin::{
    coadjoint_invariant_check, initial_state, integrate_forward, LagrangianCoefficients, MomentumLagrangian,
    PontryaginState, RigidBodyLagrangian,
};
use lie_momentum::reconstruction::{
    cayley_coefficients, quartic_gamma, solve_cay, solve_exp, solve_fixed_point, solve_skw, solve_skw_quartic,
};
use lie_momentum::retraction::{
    adjoint_tangent_identity_check, cay, cay_inv, dcay, dcay_inv, dexp, dlog, dskew, dunskew, exp_so3, log_so3,
    skew_inv, unskew,
};
use lie_momentum::so3::{adjoint_apply, hat, skew_part, skew_vector, vee};
use lie_momentum::{
    ExplicitSolver, Family, LieGroup, Mat3, Objective, Retraction, Rotation, Side, So3Group, Strategy,
    TranslationGroup, Vec3,
};
use lie_momentum_bench::{preset, run_preset, run_preset_trajectories, Method, SolverName, SolverRun};
use nalgebra::{DMatrix, DVector, Rotation3};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SAMPLES: usize = 1000;
const IDENTITY_TOL: f64 = 1e-10;
const IDENTITY_TIGHT_TOL: f64 = 1e-12;
const TANGENT_FD_STEP: f64 = 1e-6;
const TANGENT_FD_TOL: f64 = 1e-5;
const SOLVER_TOL: f64 = 1e-9;
const SOLVER_STEP_RADIUS: f64 = 0.9;
const QUARTIC_TOL: f64 = 1e-13;
const CUBIC_TOL: f64 = 1e-12;
const GRADIENT_SAMPLES: usize = 200;
const GRADIENT_FD_TOL: f64 = 1e-4;
const EUCLIDEAN_TOL: f64 = 1e-14;
const DEL_TOL: f64 = 1e-10;
const PONTRYAGIN_TOL: f64 = 1e-9;
const COADJOINT_TOL: f64 = 1e-10;
const DOUBLED_TOL: f64 = 1e-12;
const FIVE_SECONDS: Duration = Duration::from_secs(5);
const ONE_SECOND: Duration = Duration::from_secs(1);
const TEN_SECONDS: Duration = Duration::from_secs(10);

type Check<'a> = Box<dyn FnOnce() -> Outcome + 'a>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn ball(rng: &mut StdRng, radius: f64) -> Vec3 {
    loop {
        let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if v.norm_squared() <= 1.0 {
            return v * radius;
        }
    }
}

fn random_rotation(rng: &mut StdRng) -> Rotation {
    exp_so3(&ball(rng, 0.95 * PI))
}

fn amax(m: &Mat3) -> f64 {
    m.abs().max()
}

/// Largest error seen per named identity.
#[derive(Default)]
struct Ledger(BTreeMap<&'static str, (f64, f64)>);

impl Ledger {
    fn record(&mut self, name: &'static str, err: f64, tol: f64) {
        let entry = self.0.entry(name).or_insert((0.0, tol));
        if !(err <= entry.0) {
            entry.0 = err;
        }
    }

    fn failures(&self) -> Vec<String> {
        self.0
            .iter()
            .filter(|(_, (err, tol))| !(err <= tol))
            .map(|(name, (err, tol))| format!("{name} {err:.1e} > {tol:.0e}"))
            .collect()
    }

    fn worst(&self) -> f64 {
        self.0.values().map(|(e, _)| *e).fold(0.0, f64::max)
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    out.detail = format!("{}; {:.2} s", out.detail, elapsed.as_secs_f64());
    if let Some(limit) = limit {
        if elapsed >= limit {
            out.pass = false;
            out.detail.push_str(&format!(" exceeds {:.0} s", limit.as_secs_f64()));
        }
    }
    out
}

fn criterion_identities() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let mut led = Ledger::default();
    let id = Mat3::identity();
    for _ in 0..SAMPLES {
        let (x, y) = (ball(&mut rng, 2.0), ball(&mut rng, 2.0));
        let (xh, yh) = (hat(&x), hat(&y));
        let xx = x * x.transpose();
        let d = x.dot(&y);
        let n2 = x.norm_squared();
        led.record("outer product action", (xx * y - d * x).norm(), IDENTITY_TIGHT_TOL);
        led.record("outer product split", amax(&(xx - n2 * id - xh * xh)), IDENTITY_TIGHT_TOL);
        led.record("hat is cross product", (xh * y - x.cross(&y)).norm(), IDENTITY_TIGHT_TOL);
        led.record("hat product", amax(&(xh * yh - (y * x.transpose() - d * id))), IDENTITY_TIGHT_TOL);
        led.record("hat commutator", amax(&(xh * yh - yh * xh - hat(&x.cross(&y)))), IDENTITY_TIGHT_TOL);
        led.record("hat sandwich", amax(&(xh * yh * xh + d * xh)), IDENTITY_TIGHT_TOL);
        led.record(
            "hat square anticommutator",
            amax(&(xh * xh * yh + yh * xh * xh + n2 * yh + d * xh)),
            IDENTITY_TIGHT_TOL,
        );
        led.record("hat cube", amax(&(xh * xh * xh + n2 * xh)), IDENTITY_TIGHT_TOL);
        led.record("hat square trace", ((xh * xh).trace() + 2.0 * n2).abs(), IDENTITY_TIGHT_TOL);
        led.record("vee of hat", (vee(&xh).unwrap() - x).norm(), 0.0);

        let r = random_rotation(&mut rng);
        let c = (r.trace() - 1.0) / 2.0;
        led.record("trace and axis", (c * c + skew_vector(r.matrix()).norm_squared() - 1.0).abs(), IDENTITY_TOL);
        led.record("adjoint norm", (adjoint_apply(&r, &y).norm() - y.norm()).abs(), IDENTITY_TIGHT_TOL);

        let lam = 1.0 / (1.0 + n2);
        let inv = (id - xh).try_inverse().expect("I - x^ is invertible");
        led.record("cayley resolvent", amax(&(inv - (id + lam * xh + lam * xh * xh))), IDENTITY_TIGHT_TOL);
        led.record("cayley closed form", amax(&(cay(&x).matrix() - inv * (id + xh))), IDENTITY_TOL);
        led.record("cayley inverse", (cay_inv(&cay(&x)).unwrap() - x).norm(), IDENTITY_TOL);

        let w = ball(&mut rng, 0.95 * PI);
        let oracle = Rotation3::from_scaled_axis(w);
        led.record("exp closed form", amax(&(exp_so3(&w).matrix() - oracle.matrix())), IDENTITY_TOL);
        led.record("log inverts exp", (log_so3(&exp_so3(&w)).unwrap() - w).norm(), IDENTITY_TOL);

        let u = ball(&mut rng, 0.99);
        let s = (1.0 - u.norm_squared()).sqrt();
        let un = unskew(&u).unwrap();
        led.record("unskew projects back", amax(&(skew_part(un.matrix()) - hat(&u))), IDENTITY_TIGHT_TOL);
        led.record("unskew inverse", (skew_inv(&un).unwrap() - u).norm(), IDENTITY_TOL);

        for side in [Side::Right, Side::Left] {
            led.record("dexp dlog", amax(&(dexp(&u, side) * dlog(&u, side).unwrap() - id)), IDENTITY_TIGHT_TOL);
            led.record("dcay dcay_inv", amax(&(dcay(&u, side) * dcay_inv(&u, side) - id)), IDENTITY_TIGHT_TOL);
            led.record(
                "dunskew dskew",
                amax(&(dunskew(&u, side).unwrap() * dskew(&u, side).unwrap() - id)),
                IDENTITY_TIGHT_TOL,
            );
        }
        for ret in Retraction::ALL {
            let v = ball(&mut rng, 0.9);
            let sym = ret.tau(&v).unwrap() * ret.tau(&-v).unwrap();
            led.record("central symmetry", sym.distance(&Rotation::identity()), IDENTITY_TOL);
            for side in [Side::Right, Side::Left] {
                let ok = adjoint_tangent_identity_check(ret, &v, side).unwrap();
                led.record("adjoint tangent relation", if ok { 0.0 } else { f64::INFINITY }, IDENTITY_TOL);
            }
        }
        led.record("dlog transpose", (dlog(&u, Side::Right).unwrap().transpose() * u - u).norm(), IDENTITY_TIGHT_TOL);
        led.record(
            "dcay_inv transpose",
            (dcay_inv(&u, Side::Right).transpose() * u - 0.5 * (1.0 + u.norm_squared()) * u).norm(),
            IDENTITY_TIGHT_TOL,
        );
        led.record(
            "dskew transpose",
            (dskew(&u, Side::Right).unwrap().transpose() * u - s * u).norm(),
            IDENTITY_TIGHT_TOL,
        );
    }
    let failures = led.failures();
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} identities x {SAMPLES} samples, worst {:.1e}", led.0.len(), led.worst())
        } else {
            failures.join(", ")
        },
    )
}

fn fd_tangent(ret: Retraction, x: &Vec3, side: Side) -> Mat3 {
    let h = TANGENT_FD_STEP;
    let base = ret.tau(x).unwrap();
    let mut out = Mat3::zeros();
    for j in 0..3 {
        let mut e = Vec3::zeros();
        e[j] = h;
        let d = (ret.tau(&(x + e)).unwrap().matrix() - ret.tau(&(x - e)).unwrap().matrix()) / (2.0 * h);
        let pulled = match side {
            Side::Right => d * base.matrix().transpose(),
            Side::Left => base.matrix().transpose() * d,
        };
        out.set_column(j, &skew_vector(&pulled));
    }
    out
}

fn criterion_tangent_fd() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let x = ball(&mut rng, 0.95);
        for ret in Retraction::ALL {
            for side in [Side::Right, Side::Left] {
                let fd = fd_tangent(ret, &x, side);
                let exact = ret.dtau(&x, side).unwrap();
                let exact_inv = ret.dtau_inv(&x, side).unwrap();
                let fd_inv = fd.try_inverse().unwrap();
                worst = worst
                    .max((fd - exact).norm() / exact.norm())
                    .max((fd_inv - exact_inv).norm() / exact_inv.norm());
            }
        }
    }
    outcome(worst < TANGENT_FD_TOL, format!("worst relative error {worst:.1e} over exp, cay, unskew, both sides"))
}

fn criterion_solvers() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let mut worst = [0.0f64; 3];
    let mut skw_unsolvable = 0;
    let mut quartic_gap: f64 = 0.0;
    let mut quartic_worst: f64 = 0.0;
    let mut quartic_in_bracket = true;
    let mut cubic_worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let r = random_rotation(&mut rng);
        let dx = ball(&mut rng, SOLVER_STEP_RADIUS);
        let d = dx.norm();
        let exp = So3Group::right(Retraction::Exp);
        let cay = So3Group::right(Retraction::Cayley);
        let skw = So3Group::right(Retraction::Unskew);
        worst[0] = worst[0].max(solve_exp(&r, &dx, Side::Right).distance(&solve_fixed_point(&exp, &r, &dx).unwrap()));
        worst[1] = worst[1].max(solve_cay(&r, &dx, Side::Right).distance(&solve_fixed_point(&cay, &r, &dx).unwrap()));
        match (solve_skw(&r, &dx, Side::Right), solve_fixed_point(&skw, &r, &dx)) {
            (Ok(a), Ok(b)) => worst[2] = worst[2].max(a.distance(&b)),
            _ => {
                skw_unsolvable += 1;
                worst[2] = f64::INFINITY;
            }
        }
        if let Ok(b) = solve_fixed_point(&skw, &r, &dx) {
            quartic_gap = quartic_gap.max(solve_skw_quartic(&r, &dx, Side::Right).unwrap().distance(&b));
        }
        let g = quartic_gamma(d).unwrap();
        quartic_in_bracket &= (0.5..=2.0 / 3.0).contains(&g);
        quartic_worst = quartic_worst.max((d * d * g.powi(4) - 2.0 * g + 1.0).abs());
        let (_, w) = cayley_coefficients(d);
        cubic_worst = cubic_worst.max((w.powi(3) + w - 2.0 * d).abs());
    }
    let pass = worst.iter().all(|w| *w < SOLVER_TOL)
        && quartic_worst < QUARTIC_TOL
        && quartic_in_bracket
        && cubic_worst < CUBIC_TOL;
    outcome(
        pass,
        format!(
            "exp {:.1e}, cay {:.1e}, skw {:.1e} ({skw_unsolvable}/{SAMPLES} steps with |dx| > 1/2 have no unskew \
             reconstruction; quartic-rule gap to fixed point {quartic_gap:.1e}); quartic residual {quartic_worst:.1e} \
             in [1/2, 2/3]: {quartic_in_bracket}; cubic residual {cubic_worst:.1e}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn criterion_gradients() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let objectives: Vec<(&str, Box<dyn Objective<So3Group>>)> = vec![
        ("frobenius", Box::new(Frobenius)),
        ("restricted-rosenbrock", Box::new(RestrictedRosenbrock)),
        ("retracted-rosenbrock-exp", Box::new(RetractedRosenbrock::new(Retraction::Exp).unwrap())),
        ("retracted-rosenbrock-cay", Box::new(RetractedRosenbrock::new(Retraction::Cayley).unwrap())),
    ];
    let group = So3Group::right(Retraction::Exp);
    let h = 1e-6;
    let mut worst: BTreeMap<&str, f64> = BTreeMap::new();
    for _ in 0..GRADIENT_SAMPLES {
        let r = exp_so3(&ball(&mut rng, 0.8 * PI));
        let v = ball(&mut rng, 1.0).normalize();
        for (name, obj) in &objectives {
            let grad = match obj.gradient(&group, &r) {
                Ok(g) => g,
                Err(_) => continue,
            };
            let plus = obj.value(&group, &exp_so3(&(v * h)).compose(&r));
            let minus = obj.value(&group, &exp_so3(&(v * -h)).compose(&r));
            let (Ok(p), Ok(m)) = (plus, minus) else { continue };
            let fd = (p - m) / (2.0 * h);
            let exact = group.inner(&grad, &v);
            let rel = (fd - exact).abs() / exact.abs().max(1e-3 * (1.0 + grad.norm()));
            let e = worst.entry(name).or_insert(0.0);
            *e = e.max(rel);
        }
    }
    let pass = worst.len() == objectives.len() && worst.values().all(|w| *w < GRADIENT_FD_TOL);
    let detail: Vec<String> = worst.iter().map(|(n, w)| format!("{n} {w:.1e}")).collect();
    outcome(pass, format!("{GRADIENT_SAMPLES} rotations: {}", detail.join(", ")))
}

fn classical<O: Objective<TranslationGroup>>(obj: &O, x0: &DVector<f64>, mu: f64, eta: f64, eps: f64, n: usize) -> Vec<DVector<f64>> {
    let grp = TranslationGroup::new(x0.len());
    let q = |x: &DVector<f64>| obj.gradient(&grp, x).unwrap() * eta;
    let mut xs = vec![x0.clone(), x0.clone()];
    for k in 1..n {
        let (prev, cur) = (&xs[k - 1], &xs[k]);
        let next = cur + (cur - prev) * mu - (q(cur) - q(prev)) * (mu * eps) - q(cur);
        xs.push(next);
    }
    xs
}

fn criterion_euclidean() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let n = 6;
    let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let quad = Quadratic {
        a: &m * m.transpose() + DMatrix::identity(n, n),
        b: DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0)),
    };
    let xq = DVector::from_fn(n, |_, _| rng.gen_range(-2.0..2.0));
    let xr = DVector::from_fn(9, |i, _| 0.6 + 0.05 * i as f64);
    let mut worst: f64 = 0.0;
    let mut check = |obj: &dyn Fn(Family) -> (Vec<DVector<f64>>, Vec<DVector<f64>>)| {
        for family in [Family::Classical, Family::Accelerated] {
            let (a, b) = obj(family);
            for (x, y) in a.iter().zip(&b) {
                worst = worst.max((x - y).amax() / (1.0 + y.amax()));
            }
        }
    };
    check(&|f| {
        let s = Strategy::constant(0.8, 0.05).unwrap();
        let t = run_momentum(&TranslationGroup::new(n), &quad, &ExplicitSolver, &xq, &s, f, 100).unwrap();
        (t.elements, classical(&quad, &xq, 0.8, 0.05, f.epsilon(), 100))
    });
    check(&|f| {
        let s = Strategy::constant(0.9, 1e-4).unwrap();
        let t = run_momentum(&TranslationGroup::new(9), &Rosenbrock, &ExplicitSolver, &xr, &s, f, 100).unwrap();
        (t.elements, classical(&Rosenbrock, &xr, 0.9, 1e-4, f.epsilon(), 100))
    });
    outcome(worst <= EUCLIDEAN_TOL, format!("worst relative deviation {worst:.1e} (quadratic, 9-D Rosenbrock; PHB, NAG)"))
}

fn family(method: Method) -> Family {
    method.kind().family().unwrap_or(Family::Classical)
}

fn preset_del(name: &str, runs: &[SolverRun]) -> f64 {
    let p = preset(name).unwrap();
    let mut worst: f64 = 0.0;
    for run in runs {
        for (method, traj) in &run.trajectories {
            let cfg = p.config(run.solver, *method);
            let obj = cfg.objective.build();
            let residuals = del_residuals(&cfg.group(), obj.as_ref(), &traj.elements, &cfg.strategy().unwrap(), family(*method).epsilon())
                .unwrap_or_else(|_| vec![f64::INFINITY]);
            worst = residuals.into_iter().fold(worst, |a, r| if r.is_nan() { f64::INFINITY } else { a.max(r) });
        }
    }
    worst
}

fn criterion_del(all: &BTreeMap<&str, Vec<SolverRun>>) -> Outcome {
    let worst: Vec<(&str, f64)> = all.iter().map(|(n, runs)| (*n, preset_del(n, runs))).collect();
    let pass = worst.iter().all(|(_, w)| *w < DEL_TOL);
    let detail: Vec<String> = worst.iter().map(|(n, w)| format!("{n} {w:.1e}")).collect();
    outcome(pass, detail.join(", "))
}

fn criterion_pontryagin() -> Outcome {
    let grp = So3Group::right(Retraction::Exp);
    let coefficients = LagrangianCoefficients::Dilated { rho: 0.7, eta: 0.01 };
    let strategy = coefficients.strategy(64).unwrap();
    let lag = MomentumLagrangian {
        objective: &Frobenius,
        coefficients,
    };
    let g0 = cay(&Vec3::new(1.0, 1.0, 1.0));
    let states = integrate_forward(&lag, &grp, initial_state(&lag, &grp, &g0).unwrap(), 0, 50).unwrap();
    let phb = run_momentum(&grp, &Frobenius, &ExplicitSolver, &g0, &strategy, Family::Classical, 50).unwrap();
    let gap = states
        .iter()
        .zip(&phb.elements)
        .map(|(s, g)| s.g.distance(g))
        .fold(0.0, f64::max);

    let mut drift: f64 = 0.0;
    for ret in Retraction::ALL {
        let grp = So3Group::right(ret);
        let lag = RigidBodyLagrangian {
            inertia: Vec3::new(1.0, 2.0, 3.5),
        };
        let xi = Vec3::new(0.05, -0.03, 0.02);
        let start = PontryaginState::<So3Group> {
            g: exp_so3(&Vec3::new(0.4, 0.1, -0.7)),
            xi,
            p: lag.inertia.component_mul(&xi),
        };
        let states = integrate_forward(&lag, &grp, start, 0, 100).unwrap();
        drift = drift.max(coadjoint_invariant_check(&grp, &states).unwrap());
    }
    outcome(
        gap < PONTRYAGIN_TOL && drift < COADJOINT_TOL,
        format!("PHB gap {gap:.1e} over 50 steps; coadjoint drift {drift:.1e} over 100 steps"),
    )
}

fn criterion_doubled() -> Outcome {
    let mut worst: Vec<String> = Vec::new();
    let mut pass = true;
    for name in lie_momentum_bench::config::PRESET_NAMES {
        let p = preset(name).unwrap();
        let mut gap: f64 = 0.0;
        for solver in SolverName::ALL {
            for method in [Method::Phb, Method::Nag] {
                let cfg = p.config(solver, method);
                let obj = cfg.objective.build();
                let g0 = cfg.init.rotation().unwrap();
                let s = cfg.strategy().unwrap();
                let grp = cfg.group();
                let a = run_momentum(&grp, obj.as_ref(), &ExplicitSolver, &g0, &s, family(method), p.epochs);
                let b = run_momentum_doubled(&grp, obj.as_ref(), &ExplicitSolver, &g0, &s, family(method), p.epochs);
                match (a, b) {
                    (Ok(a), Ok(b)) => {
                        for (x, y) in a.elements.iter().zip(&b.elements) {
                            gap = gap.max(x.distance(y));
                        }
                    }
                    _ => gap = f64::INFINITY,
                }
            }
        }
        pass &= gap < DOUBLED_TOL;
        worst.push(format!("{name} {gap:.1e}"));
    }
    outcome(pass, worst.join(", "))
}

fn finals(run: &SolverRun) -> (f64, f64, f64) {
    (run.final_residue(Method::Gd), run.final_residue(Method::Phb), run.final_residue(Method::Nag))
}

fn criterion_frobenius2() -> Outcome {
    let p = preset("frobenius2").unwrap();
    let runs = run_preset_trajectories(&p).unwrap();
    let reference = 3.0 / (p.epochs as f64).powi(2);
    let mut pass = true;
    let mut detail = Vec::new();
    for run in &runs {
        let (gd, phb, nag) = finals(run);
        let ordered = phb < gd && nag < gd;
        let below = gd < reference && phb < reference && nag < reference;
        pass &= ordered && below;
        detail.push(format!(
            "{}: gd {gd:.2e} phb {phb:.2e} nag {nag:.2e} (momentum below gd: {ordered}; all below ref: {below})",
            run.solver
        ));
    }
    outcome(pass, format!("ref {reference:.2e}; {}", detail.join("; ")))
}

fn criterion_retracted() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for name in ["rosenbrock3exp", "rosenbrock3cay"] {
        for run in run_preset_trajectories(&preset(name).unwrap()).unwrap() {
            let (gd, phb, nag) = finals(&run);
            pass &= phb < gd && nag < gd;
            detail.push(format!("{name}-{}: gd {gd:.2e} phb {phb:.2e} nag {nag:.2e}", run.solver));
        }
    }
    outcome(pass, detail.join("; "))
}

fn criterion_anomalies() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for name in ["frobenius1", "rosenbrock92"] {
        let p = preset(name).unwrap();
        let (a, b) = (run_preset_trajectories(&p), run_preset_trajectories(&p));
        let (Ok(a), Ok(b)) = (a, b) else {
            pass = false;
            detail.push(format!("{name}: run failed"));
            continue;
        };
        let same = a.iter().zip(&b).all(|(x, y)| x.residues() == y.residues());
        let del = preset_del(name, &a);
        pass &= same && del < DEL_TOL;
        detail.push(format!("{name}: deterministic {same}, DEL {del:.1e}"));
    }
    outcome(pass, detail.join("; "))
}

fn criterion_determinism() -> Outcome {
    let base = std::env::temp_dir().join(format!("lie-momentum-acceptance-{}", std::process::id()));
    let (da, db) = (base.join("a"), base.join("b"));
    let mut pass = true;
    let mut files = 0;
    for name in lie_momentum_bench::config::PRESET_NAMES {
        let a = run_preset(name, Some(&da));
        let b = run_preset(name, Some(&db));
        if a.is_err() || b.is_err() {
            pass = false;
            continue;
        }
        for solver in SolverName::ALL {
            let file = format!("{name}-{solver}.csv");
            let same = std::fs::read(da.join(&file)).ok() == std::fs::read(db.join(&file)).ok();
            pass &= same;
            files += 1;
        }
    }
    let _ = std::fs::remove_dir_all(&base);
    outcome(pass, format!("{files} CSV files compared byte for byte"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut all_runs = BTreeMap::new();
    for name in lie_momentum_bench::config::PRESET_NAMES {
        all_runs.insert(name, run_preset_trajectories(&preset(name).unwrap()).expect("preset runs"));
    }

    let criteria: Vec<(u32, &str, Check)> = vec![
        (1, "identity suite", Box::new(|| timed(Some(FIVE_SECONDS), criterion_identities))),
        (2, "tangent finite differences", Box::new(|| timed(Some(FIVE_SECONDS), criterion_tangent_fd))),
        (3, "solver cross-validation", Box::new(|| timed(Some(FIVE_SECONDS), criterion_solvers))),
        (4, "objective gradients", Box::new(|| timed(Some(FIVE_SECONDS), criterion_gradients))),
        (5, "Euclidean reduction", Box::new(|| timed(Some(ONE_SECOND), criterion_euclidean))),
        (6, "DEL residual on presets", Box::new(|| timed(None, || criterion_del(&all_runs)))),
        (7, "Pontryagin equivalence", Box::new(|| timed(Some(FIVE_SECONDS), criterion_pontryagin))),
        (8, "doubled scheme", Box::new(|| timed(None, criterion_doubled))),
        (9, "frobenius2 ordering", Box::new(|| timed(Some(FIVE_SECONDS), criterion_frobenius2))),
        (10, "retracted Rosenbrock ordering", Box::new(|| timed(Some(TEN_SECONDS), criterion_retracted))),
        (11, "anomaly presets", Box::new(|| timed(None, criterion_anomalies))),
        (12, "CSV determinism", Box::new(|| timed(None, criterion_determinism))),
    ];
    let mut failed = 0;
    for (n, name, check) in criteria {
        let out = check();
        if !out.pass {
            failed += 1;
        }
        println!("{} criterion {n}: {name} ({})", if out.pass { "PASS" } else { "FAIL" }, out.detail);
    }
    println!("acceptance: {} of 12 criteria passed in {:.2} s", 12 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
