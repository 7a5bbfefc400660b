//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use aarlcp::lp::{lp_feasible, LpStatus};
use aarlcp::milp::{parse_lp, solve_by_enumeration, write_lp};
use aarlcp::psd::{compute_support_p, lemke_nominal, PsdStatus};
use aarlcp::{
    bnb_solve, build_milp, compute_lin_hull, default_big_m, mixed_solve, oracle_enumerate,
    psd_solve, samples, verify_mixed, verify_policy, BnbOptions, Instance, OracleOptions,
    SolveReport, SolveStatus, Tolerances,
};
use aarlcp_cli::{cmd_linhull, cmd_solve, cmd_verify, InstanceFile, PolicyFile, PsdMode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn write_instance(dir: &Path, name: &str, inst: &Instance) -> PathBuf {
    let path = dir.join(name);
    let text = serde_json::to_string_pretty(&InstanceFile::from_instance(inst)).unwrap();
    std::fs::write(&path, text).unwrap();
    path
}

fn write_policy(dir: &Path, name: &str, file: &PolicyFile) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(file).unwrap()).unwrap();
    path
}

fn bnb(inst: &Instance) -> Result<SolveReport, String> {
    let basis = compute_lin_hull(inst, 1e-9).map_err(|e| e.to_string())?;
    bnb_solve(inst, &basis, &BnbOptions::default()).map_err(|e| e.to_string())
}

fn verified_at(inst: &Instance, rep: &SolveReport, feas: f64) -> Result<(), String> {
    if let Some(pol) = &rep.policy {
        let basis = compute_lin_hull(inst, 1e-9).map_err(|e| e.to_string())?;
        let v = verify_policy(inst, &basis, pol, &Tolerances::with_feas(feas))
            .map_err(|e| e.to_string())?;
        ensure(v.is_verified(), || format!("returned policy fails verification:\n{v}"))?;
    }
    Ok(())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-8
}

/// Coupled singular example through the command layer.
fn criterion_1(dir: &Path) -> Check {
    let inst = samples::coupled_singular();
    let det = inst.m.determinant().map_err(|e| e.to_string())?;
    ensure(det == 0.0, || format!("det(M) = {det}, expected 0"))?;
    let path = write_instance(dir, "coupled.json", &inst);

    let lin = cmd_linhull(&path).map_err(|e| e.to_string())?;
    ensure(lin.code == 0, || format!("linhull exit {}", lin.code))?;
    ensure(lin.stdout.contains("dimension: 1\nv1: (1, 1)\n"), || {
        format!("unexpected basis listing:\n{}", lin.stdout)
    })?;

    let paper = PolicyFile::feasible(&samples::coupled_policy(), None);
    let pol_path = write_policy(dir, "coupled_policy.json", &paper);
    let ver = cmd_verify(&path, &pol_path, 1e-8).map_err(|e| e.to_string())?;
    ensure(ver.code == 0, || format!("verify exit {}:\n{}", ver.code, ver.stdout))?;
    ensure(ver.stdout.contains("support I: {1,2}"), || ver.stdout.clone())?;
    let basis = compute_lin_hull(&inst, 1e-9).unwrap();
    let rep = verify_policy(&inst, &basis, &samples::coupled_policy(), &Tolerances::with_feas(1e-8))
        .map_err(|e| e.to_string())?;
    ensure(rep.nominal_residual <= 1e-8 && rep.direction_residual <= 1e-8, || {
        format!("residuals {} / {}", rep.nominal_residual, rep.direction_residual)
    })?;

    let out = dir.join("coupled_solution.json");
    let solve = cmd_solve(&path, PsdMode::Auto, 1e-8, Some(&out), false, 1 << 20)
        .map_err(|e| e.to_string())?;
    ensure(solve.code == 0, || format!("solve exit {}", solve.code))?;
    let again = cmd_verify(&path, &out, 1e-8).map_err(|e| e.to_string())?;
    ensure(again.code == 0, || format!("solver policy rejected:\n{}", again.stdout))?;
    Ok("l = 1, basis (1,1), I = {1,2}, det(M) = 0".into())
}

/// Single-scenario reductions with `U = {0}`.
fn criterion_2(dir: &Path) -> Check {
    let cases = [
        (2.0, 1.0, 0, Some([0.0, 0.0])),
        (0.0, -1.0, 0, Some([1.0, 0.0])),
        (0.5, -0.5, 1, None),
    ];
    for (idx, (q1, q2, code, z)) in cases.into_iter().enumerate() {
        let path = write_instance(dir, &format!("scenario{idx}.json"), &samples::scenario(q1, q2));
        let out = dir.join(format!("scenario{idx}_sol.json"));
        let res = cmd_solve(&path, PsdMode::Auto, 1e-8, Some(&out), false, 1 << 20)
            .map_err(|e| e.to_string())?;
        ensure(res.code == code, || {
            format!("q = ({q1}, {q2}): exit {} expected {code}", res.code)
        })?;
        if let Some(z) = z {
            let file: PolicyFile =
                serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
            let r = file.r.unwrap();
            ensure(close(r[0], z[0]) && close(r[1], z[1]), || {
                format!("q = ({q1}, {q2}): z = {r:?}, expected {z:?}")
            })?;
        }
    }
    Ok("feasible z=(0,0), feasible z=(1,0), infeasible".into())
}

fn criterion_3() -> Check {
    let mut counts = [0usize; 2];
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(3_000 + seed);
        let inst = samples::random_instance(&mut rng, 4, 2, 6);
        let tree = bnb(&inst)?;
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        let opts = OracleOptions {
            classify: false,
            ..OracleOptions::default()
        };
        let flat = oracle_enumerate(&inst, &basis, &opts).map_err(|e| e.to_string())?;
        ensure(tree.status == flat.report.status, || {
            format!("seed {seed}: tree {:?} vs oracle {:?}", tree.status, flat.report.status)
        })?;
        ensure(tree.status != SolveStatus::NumericalFailure, || {
            format!("seed {seed}: inconclusive")
        })?;
        verified_at(&inst, &tree, 1e-7).map_err(|e| format!("seed {seed}: {e}"))?;
        verified_at(&inst, &flat.report, 1e-7).map_err(|e| format!("seed {seed}: {e}"))?;
        counts[usize::from(tree.is_feasible())] += 1;
    }
    Ok(format!("200/200 agree ({} feasible, {} infeasible)", counts[1], counts[0]))
}

fn criterion_4() -> Check {
    let mut agree = 0;
    let mut negative = 0;
    let mut checks = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(4_000 + seed);
        let inst = samples::random_instance(&mut rng, 3, 2, 6);
        let pol = samples::random_policy(&mut rng, &inst);
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        let model = build_milp(&inst, &basis, default_big_m(&inst)).unwrap();
        let u = &inst.uncertainty;
        let w_lin = inst.m.mul(&pol.d).unwrap().add(&inst.t).unwrap();
        let w_const = inst.m.mul_vec(&pol.r).unwrap();
        let mut draw_ok = true;
        for i in 0..inst.n() {
            for w_side in [false, true] {
                let primal = if w_side {
                    u.minimize_affine(w_lin.row(i), w_const[i] + inst.q[i], 1e-9)
                } else {
                    u.minimize_affine(pol.d.row(i), pol.r[i], 1e-9)
                }
                .map_err(|e| e.to_string())?;
                let dual = lp_feasible(&model.dual_certificate_lp(&pol, i, w_side), 1e-9)
                    .map_err(|e| e.to_string())?;
                let p_ok = primal >= -1e-7;
                negative += usize::from(!p_ok);
                checks += 1;
                draw_ok &= p_ok == (dual.status == LpStatus::Optimal);
            }
        }
        agree += usize::from(draw_ok);
    }
    ensure(agree == 100, || format!("{agree}/100 draws agree"))?;
    Ok(format!("100/100 draws agree ({checks} row checks, {negative} with a negative minimum)"))
}

fn criterion_5() -> Check {
    let tol = Tolerances::with_feas(1e-7);
    let mut counts = [0usize; 2];
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(5_000 + seed);
        let inst = samples::random_psd_instance(&mut rng, 5, 2);
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        let psd = psd_solve(&inst, &basis, &tol).map_err(|e| e.to_string())?;
        let tree = bnb(&inst)?;
        let same = matches!(
            (psd.status, tree.status),
            (PsdStatus::Feasible, SolveStatus::Feasible)
                | (PsdStatus::Infeasible, SolveStatus::Infeasible)
        );
        ensure(same, || {
            format!("seed {seed}: psd {:?} vs tree {:?}", psd.status, tree.status)
        })?;
        counts[usize::from(tree.is_feasible())] += 1;
    }

    let desk = samples::psd_desk();
    let zbar = lemke_nominal(&desk.m, &desk.q, 1e-9)
        .map_err(|e| e.to_string())?
        .ok_or("desk example has no nominal solution")?;
    let (p, _) = compute_support_p(&desk.m, &desk.q, &zbar, &tol).map_err(|e| e.to_string())?;
    ensure(p == vec![0], || format!("P = {p:?}, expected {{1}}"))?;
    let basis = compute_lin_hull(&desk, 1e-9).unwrap();
    let rep = psd_solve(&desk, &basis, &tol).map_err(|e| e.to_string())?;
    let pol = rep.policy.ok_or("desk example infeasible")?;
    ensure(close(pol.r[0], 1.0) && close(pol.r[1], 0.0), || format!("r = {:?}", pol.r))?;
    let v = verify_policy(&desk, &basis, &pol, &tol).map_err(|e| e.to_string())?;
    ensure(v.is_verified(), || v.to_string())?;
    Ok(format!(
        "100/100 agree ({} feasible, {} infeasible); desk P = {{1}}, r = (1,0)",
        counts[1], counts[0]
    ))
}

fn criterion_6() -> Check {
    let tol = Tolerances::with_feas(1e-8);
    for (inst, r, d, y) in [
        (samples::mixed_decoupled(), 2.0, -0.5, 3.0),
        (samples::mixed_coupled(), 0.5, -0.5, 3.0),
    ] {
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        let rep = mixed_solve(&inst, &basis, &BnbOptions { tol, ..BnbOptions::default() })
            .map_err(|e| e.to_string())?;
        let pol = rep.policy.ok_or("mixed example infeasible")?;
        let s = pol.y_part.as_ref().map(|yp| yp.s[0]).unwrap_or(f64::NAN);
        ensure(close(pol.r[0], r) && close(pol.d[(0, 0)], d) && close(s, y), || {
            format!("got r = {:?}, D = {:?}, y = {s}", pol.r, pol.d)
        })?;
        let v = verify_mixed(&inst, &basis, &pol, &tol).map_err(|e| e.to_string())?;
        let worst = [
            v.nominal_residual,
            v.direction_residual,
            v.mixed_nominal_residual.unwrap_or(f64::NAN),
            v.mixed_direction_residual.unwrap_or(f64::NAN),
        ]
        .into_iter()
        .fold(0.0_f64, f64::max);
        ensure(v.is_verified() && worst <= 1e-8, || format!("residual {worst}:\n{v}"))?;
    }

    let mut fixed_feasible = 0;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(6_000 + seed);
        let inst = samples::random_mixed_instance(&mut rng);
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        let fixed = mixed_solve(&inst, &basis, &BnbOptions::default()).map_err(|e| e.to_string())?;
        let mut adj = inst.clone();
        adj.mixed.as_mut().unwrap().y_adjustable = true;
        let free = mixed_solve(&adj, &basis, &BnbOptions::default()).map_err(|e| e.to_string())?;
        if fixed.is_feasible() {
            fixed_feasible += 1;
            ensure(free.is_feasible(), || format!("seed {seed}: adjustable y infeasible"))?;
        }
    }
    Ok(format!(
        "both examples match; dominance holds on 50 draws ({fixed_feasible} feasible with fixed y)"
    ))
}

fn criterion_7() -> Check {
    let mut feasible = 0;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(7_000 + seed);
        let inst = samples::random_instance(&mut rng, 3, 2, 4);
        let basis = compute_lin_hull(&inst, 1e-9).unwrap();
        let model = build_milp(&inst, &basis, default_big_m(&inst)).unwrap();
        let parsed = parse_lp(&write_lp(&model)).map_err(|e| e.to_string())?;
        let enumerated = solve_by_enumeration(&parsed, 1e-9)
            .map_err(|e| e.to_string())?
            .is_some();
        let tree = bnb(&inst)?;
        ensure(enumerated == tree.is_feasible(), || {
            format!("seed {seed}: export {enumerated} vs tree {:?}", tree.status)
        })?;
        feasible += usize::from(enumerated);
    }

    // r = 2 needs b >= 2 in r_1 <= b x_1; b = 0.1 cuts the only solution.
    let inst = samples::one_dim();
    let basis = compute_lin_hull(&inst, 1e-9).unwrap();
    let tiny = build_milp(&inst, &basis, 0.1).unwrap();
    let parsed = parse_lp(&write_lp(&tiny)).map_err(|e| e.to_string())?;
    let tiny_feasible = solve_by_enumeration(&parsed, 1e-9)
        .map_err(|e| e.to_string())?
        .is_some();
    ensure(!tiny_feasible, || "b = 0.1 export is still feasible".into())?;
    ensure(bnb(&inst)?.is_feasible(), || "tree search lost the 1-D policy".into())?;
    Ok(format!(
        "20/20 agree ({feasible} feasible); b = 0.1 export infeasible while the tree finds r = 2"
    ))
}

fn criterion_8() -> Check {
    let mut worst = Duration::ZERO;
    let mut nodes = Vec::new();
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(8_000 + seed);
        let inst = samples::random_scale_instance(&mut rng);
        let start = Instant::now();
        let rep = bnb(&inst)?;
        let took = start.elapsed();
        ensure(took < Duration::from_secs(5), || {
            format!("seed {seed} took {took:?} ({} nodes)", rep.nodes_explored)
        })?;
        verified_at(&inst, &rep, 1e-7)?;
        worst = worst.max(took);
        nodes.push(format!(
            "{}{}",
            rep.nodes_explored,
            if rep.is_feasible() { "F" } else { "I" }
        ));
    }
    Ok(format!(
        "10 instances, slowest {:.2}s, nodes [{}] (F feasible, I infeasible)",
        worst.as_secs_f64(),
        nodes.join(" ")
    ))
}

type Criterion<'a> = (&'static str, Duration, Box<dyn Fn() -> Check + 'a>);

fn main() {
    let dir = TempDir::new().expect("temporary directory");
    let criteria: Vec<Criterion> = vec![
        ("1 coupled singular example", Duration::from_secs(1), Box::new(|| criterion_1(dir.path()))),
        ("2 single-scenario reductions", Duration::from_secs(1), Box::new(|| criterion_2(dir.path()))),
        ("3 oracle equivalence", Duration::from_secs(60), Box::new(criterion_3)),
        ("4 duality equivalence", Duration::from_secs(30), Box::new(criterion_4)),
        ("5 PSD path agreement", Duration::from_secs(60), Box::new(criterion_5)),
        ("6 mixed LCP", Duration::from_secs(30), Box::new(criterion_6)),
        ("7 export fidelity", Duration::from_secs(60), Box::new(criterion_7)),
        ("8 scale smoke test", Duration::from_secs(50), Box::new(criterion_8)),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let result = result.and_then(|msg| {
            if took <= budget {
                Ok(msg)
            } else {
                Err(format!("{msg}; took {took:.2?}, budget {budget:?}"))
            }
        });
        match result {
            Ok(msg) => println!("PASS  criterion {name}: {msg} [{:.2}s]", took.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("FAIL  criterion {name}: {msg} [{:.2}s]", took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criterion/criteria failed");
        std::process::exit(1);
    }
}
