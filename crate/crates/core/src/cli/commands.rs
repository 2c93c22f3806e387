//! One handler per subcommand. Each returns its status, resolved parameters, CSV table and
//! JSON result; the caller writes the artifacts.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{positive, RunConfig};
use super::output::{fmt_f64, Table};
use crate::error::{Error, Result};
use crate::gibbs_sampler::{effective_sample_size, sample_mu, sigma, wick_quartic, GaussianEnsemble};
use crate::lattice_counting::{
    dual_vector_bound_check, remark_counterexample, verify_counting_bounds, BoundId, DyadicTuple, DUAL_MAX_RANK,
};
use crate::random_tensor_lab::{
    resonant_term_norms, normalize_test_field, stochastic_closed_form, stochastic_cubic_second_moment, verify_rt_scaling,
    KernelVariant, ResonantCase,
};
use crate::spectral_core::{strichartz_ratio, FourierField, FreqIndex};
use crate::stats::{derive_seed, loglog_slope, mean, standard_error};
use crate::tensor_norms::{verify_base_tensor_bounds, BaseBound};
use crate::wick_nls_dynamics::{
    evolve, gauge_equivalence_check, invariance_test, renorm_nonlinearity, renorm_nonlinearity_physical,
    residual_diagnostic, InvarianceConfig, IntegratorConfig, NlsState, TestStatus, TrajectoryRecord,
};

/// Growth allowed for fitted counting constants between consecutive dyadic caps.
pub const CONSTANT_GROWTH_LIMIT: f64 = 1.10;

/// Log-log slope of count/bound without exclusions that witnesses an unbounded ratio.
pub const REMARK_SLOPE_MIN: f64 = 0.5;

pub struct Outcome {
    pub status: TestStatus,
    pub params: Value,
    pub table: Option<Table>,
    pub result: Value,
}

fn status_of(pass: bool) -> TestStatus {
    if pass {
        TestStatus::Pass
    } else {
        TestStatus::Fail
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    Ok(serde_json::to_value(v)?)
}

fn dyadic_tuple(v: &[u32]) -> Result<DyadicTuple> {
    if v.len() != 4 {
        return Err(Error::Invalid { field: "tuple", reason: format!("need four sizes, got {}", v.len()) });
    }
    DyadicTuple::new(v[0], v[1], v[2], v[3])
}

fn read_or_sample(cfg: &RunConfig, radius: usize) -> Result<(FourierField, Option<u64>)> {
    match &cfg.input {
        Some(path) => Ok((FourierField::read_snapshot(std::fs::File::open(path)?)?.with_radius(radius), None)),
        None => {
            let seed = cfg.require_seed()?;
            Ok((sample_mu(radius, &GaussianEnsemble::new(seed, radius))?, Some(seed)))
        }
    }
}

fn write_snapshot(cfg: &RunConfig, field: &FourierField) -> Result<()> {
    if let Some(path) = &cfg.snapshot {
        field.write_snapshot(std::io::BufWriter::new(std::fs::File::create(path)?))?;
    }
    Ok(())
}

pub fn sample(cfg: &RunConfig) -> Result<Outcome> {
    let n = positive("n", cfg.n.unwrap_or(8))?;
    let radius = cfg.radius.unwrap_or(n as usize);
    let samples = positive("samples", cfg.samples.unwrap_or(10_000))?;
    let seed = cfg.require_seed()?;
    let params = json!({"n": n, "radius": radius, "samples": samples, "seed": seed});
    let rows: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let u = sample_mu(radius, &GaussianEnsemble::new(derive_seed(seed, i as u64), radius))?;
            Ok((u.l2_norm_sq(), wick_quartic(&u, n)?.integral))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["sample", "mass", "wick_quartic", "log_weight"]);
    for (i, (m, q)) in rows.iter().enumerate() {
        table.push(vec![i.to_string(), fmt_f64(*m), fmt_f64(*q), fmt_f64(-0.25 * q)]);
    }
    let q: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let logw: Vec<f64> = q.iter().map(|x| -0.25 * x).collect();
    let (m, se) = (mean(&q), standard_error(&q));
    let ess = effective_sample_size(&logw)?;
    if cfg.snapshot.is_some() {
        write_snapshot(cfg, &sample_mu(radius, &GaussianEnsemble::new(derive_seed(seed, 0), radius))?)?;
    }
    let z = if se > 0.0 { m / se } else { 0.0 };
    Ok(Outcome {
        status: status_of(z.abs() <= 3.0),
        params,
        table: Some(table),
        result: json!({"wick_quartic_mean": m, "standard_error": se, "z": z, "sigma_n": sigma(n).sigma_n,
            "ess": ess, "ess_ratio": ess / samples as f64}),
    })
}

fn drift_summary(traj: &TrajectoryRecord) -> (f64, f64) {
    (TrajectoryRecord::max_relative_drift(&traj.mass), TrajectoryRecord::max_relative_drift(&traj.energy))
}

pub fn evolve_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let n = positive("n", cfg.n.unwrap_or(16))?;
    let radius = cfg.radius.unwrap_or(3 * n as usize);
    let t_end = cfg.t_end.unwrap_or(1.0);
    let dt = positive("dt", cfg.dt.unwrap_or(1e-3))?;
    let tolerance = cfg.tolerance.unwrap_or(1e-8);
    let (u0, seed) = read_or_sample(cfg, radius)?;
    let params = json!({"n": n, "radius": radius, "t_end": t_end, "dt": dt, "tolerance": tolerance, "seed": seed,
        "input": cfg.input});
    let traj = evolve(&NlsState::new(u0, n)?, t_end, &IntegratorConfig::with_dt(dt), false)?;
    let mut table = Table::new(&["t", "mass", "wick_energy"]);
    for i in 0..traj.times.len() {
        table.push(vec![fmt_f64(traj.times[i]), fmt_f64(traj.mass[i]), fmt_f64(traj.energy[i])]);
    }
    write_snapshot(cfg, &traj.final_state.field)?;
    let (dm, de) = drift_summary(&traj);
    Ok(Outcome {
        status: status_of(dm <= tolerance && de <= tolerance),
        params,
        table: Some(table),
        result: json!({"mass_drift": dm, "energy_drift": de, "steps": traj.times.len() - 1}),
    })
}

pub fn gauge_check(cfg: &RunConfig) -> Result<Outcome> {
    let n = positive("n", cfg.n.unwrap_or(8))?;
    let radius = cfg.radius.unwrap_or(2 * n as usize);
    let samples = positive("samples", cfg.samples.unwrap_or(10))?;
    let t_end = cfg.t_end.unwrap_or(1.0);
    let dt = positive("dt", cfg.dt.unwrap_or(2.5e-4))?;
    let tolerance = cfg.tolerance.unwrap_or(1e-6);
    let seed = cfg.require_seed()?;
    let params = json!({"n": n, "radius": radius, "samples": samples, "t_end": t_end, "dt": dt,
        "tolerance": tolerance, "seed": seed});
    let gaps: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let u0 = sample_mu(radius, &GaussianEnsemble::new(derive_seed(seed, i as u64), radius))?;
            gauge_equivalence_check(&u0, n, t_end, &IntegratorConfig::with_dt(dt))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["sample", "max_l2_discrepancy"]);
    for (i, g) in gaps.iter().enumerate() {
        table.push(vec![i.to_string(), fmt_f64(*g)]);
    }
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    Ok(Outcome { status: status_of(worst <= tolerance), params, table: Some(table), result: json!({"max_discrepancy": worst}) })
}

pub fn invariance(cfg: &RunConfig) -> Result<Outcome> {
    let n = positive("n", cfg.n.unwrap_or(4))?;
    let t_end = cfg.t_end.unwrap_or(1.0);
    let samples = positive("samples", cfg.samples.unwrap_or(10_000))?;
    let seed = cfg.require_seed()?;
    let mut ic = InvarianceConfig::new(n, t_end, samples, seed);
    ic.control = cfg.control.unwrap_or(false);
    if let Some(dt) = cfg.dt {
        ic.integrator.dt = positive("dt", dt)?;
    }
    let params = to_value(&ic)?;
    let report = invariance_test(&ic)?;
    let mut table = Table::new(&["observable", "mean_start", "mean_end", "var_start", "var_end", "z_mean", "z_var"]);
    for o in &report.observables {
        table.push(vec![
            o.name.clone(),
            fmt_f64(o.mean_start),
            fmt_f64(o.mean_end),
            fmt_f64(o.var_start),
            fmt_f64(o.var_end),
            fmt_f64(o.z_mean),
            fmt_f64(o.z_var),
        ]);
    }
    Ok(Outcome { status: report.status, params, table: Some(table), result: to_value(&report)? })
}

pub fn residual(cfg: &RunConfig) -> Result<Outcome> {
    let n = positive("n", cfg.n.unwrap_or(8))?;
    let radius = cfg.radius.unwrap_or(2 * n as usize);
    let t_end = cfg.t_end.unwrap_or(1.0);
    let dt = positive("dt", cfg.dt.unwrap_or(1e-3))?;
    let s = cfg.s.unwrap_or(0.1);
    let (u0, seed) = read_or_sample(cfg, radius)?;
    let params = json!({"n": n, "radius": radius, "t_end": t_end, "dt": dt, "s": s, "seed": seed, "input": cfg.input});
    let series = residual_diagnostic(&u0, n, t_end, &IntegratorConfig::with_dt(dt), s)?;
    let mut table = Table::new(&["t", "residual_hs"]);
    for (t, v) in &series {
        table.push(vec![fmt_f64(*t), fmt_f64(*v)]);
    }
    let finite = series.iter().all(|(_, v)| v.is_finite());
    let last = series.last().map(|x| x.1).unwrap_or(0.0);
    Ok(Outcome { status: status_of(finite), params, table: Some(table), result: json!({"final": last}) })
}

pub fn count(cfg: &RunConfig) -> Result<Outcome> {
    let max_n = cfg.max_n.unwrap_or(16);
    let eps = cfg.eps.unwrap_or(0.25);
    let params = json!({"max_n": max_n, "eps": eps});
    let sweep = verify_counting_bounds(max_n, eps)?;
    let mut table = Table::new(&["n", "n1", "n2", "n3", "bound", "count", "bound_value", "ratio"]);
    for r in &sweep.reports {
        for id in BoundId::ALL {
            let t = r.tuple;
            table.push(vec![
                t.n.to_string(),
                t.n1.to_string(),
                t.n2.to_string(),
                t.n3.to_string(),
                id.label().to_string(),
                r.section_max[&id].to_string(),
                fmt_f64(r.bound[&id]),
                fmt_f64(r.ratio(id)),
            ]);
        }
    }
    let partition = sweep.reports.iter().all(|r| r.partition_identity_holds());
    let finite = sweep.fitted.iter().all(|f| f.constant.is_finite());
    let large: Vec<u32> = (1..).map(|k| 1u32 << k).take_while(|&k| k <= max_n).collect();
    let remark = remark_counterexample(1, &large, eps)?;
    let remark_slope = if large.len() >= 2 {
        loglog_slope(&large.iter().map(|&k| k as f64).collect::<Vec<_>>(), &remark.iter().map(|p| p.ratio_without()).collect::<Vec<_>>())
    } else {
        f64::NAN
    };
    let remark_violates = remark_slope >= REMARK_SLOPE_MIN;
    let growth: Vec<Value> = if max_n >= 16 {
        BoundId::ALL
            .iter()
            .map(|&id| json!({"bound": id.label(), "growth": sweep.growth(id, max_n / 2, max_n)}))
            .collect()
    } else {
        Vec::new()
    };
    let growth_ok = growth.iter().all(|g| g["growth"].as_f64().map(|x| x <= CONSTANT_GROWTH_LIMIT).unwrap_or(false));
    let fitted: Vec<Value> = sweep
        .fitted
        .iter()
        .map(|f| json!({"bound": f.bound.label(), "cap": f.n_max_cap, "constant": f.constant, "argmax": f.argmax.label()}))
        .collect();
    Ok(Outcome {
        status: status_of(partition && finite && remark_violates && growth_ok),
        params,
        table: Some(table),
        result: json!({"partition_identity": partition, "fitted": fitted, "growth": growth, "growth_ok": growth_ok,
            "remark": to_value(&remark)?, "remark_slope": remark_slope, "remark_violates": remark_violates}),
    })
}

pub fn tensor_bounds(cfg: &RunConfig) -> Result<Outcome> {
    let max_n = cfg.max_n.unwrap_or(8);
    let eps = cfg.eps.unwrap_or(0.25);
    let params = json!({"max_n": max_n, "eps": eps});
    let report = verify_base_tensor_bounds(max_n, eps)?;
    let mut table = Table::new(&["n", "n1", "n2", "n3", "m", "partition", "exact", "schur", "paper_bound", "ratio"]);
    for r in &report.rows {
        let t = r.tuple;
        table.push(vec![
            t.n.to_string(),
            t.n1.to_string(),
            t.n2.to_string(),
            t.n3.to_string(),
            r.m.to_string(),
            r.bound.label(),
            fmt_f64(r.exact),
            fmt_f64(r.schur),
            fmt_f64(r.paper_bound),
            fmt_f64(r.ratio()),
        ]);
    }
    let chain = report.chain_holds();
    let duality = report.max_duality_gap();
    let growth: Vec<Value> = if max_n >= 8 {
        BaseBound::ALL.iter().map(|&id| json!({"bound": id.label(), "growth": report.growth(id, max_n / 2, max_n)})).collect()
    } else {
        Vec::new()
    };
    let growth_ok = growth.iter().all(|g| g["growth"].as_f64().map(|x| x <= CONSTANT_GROWTH_LIMIT).unwrap_or(false));
    let fitted: Vec<Value> = report
        .fitted
        .iter()
        .map(|f| json!({"bound": f.bound.label(), "cap": f.n_max_cap, "constant": f.constant,
            "argmax": f.argmax.0.label(), "m": f.argmax.1}))
        .collect();
    Ok(Outcome {
        status: status_of(chain && duality <= 1e-10 && growth_ok),
        params,
        table: Some(table),
        result: json!({"chain_holds": chain, "max_duality_gap": duality, "fitted": fitted, "growth": growth,
            "growth_ok": growth_ok}),
    })
}

pub fn rt_mc(cfg: &RunConfig) -> Result<Outcome> {
    let seed = cfg.require_seed()?;
    let name = cfg.variant.clone().unwrap_or_else(|| "h1".into());
    let variant = KernelVariant::parse(&name).ok_or(Error::Invalid { field: "variant", reason: format!("unknown {name}") })?;
    let sweep = cfg.sweep.clone().unwrap_or_else(|| vec![2, 4, 8, 16]);
    let p = cfg.p.as_ref().and_then(|v| v.first().copied()).unwrap_or(2.0);
    let samples = cfg.samples.unwrap_or(1000);
    let s = cfg.s.unwrap_or(0.1);
    let params = json!({"variant": variant.name(), "sweep": sweep, "p": p, "samples": samples, "s": s, "seed": seed});
    let report = verify_rt_scaling(variant, &sweep, p, samples, seed, s)?;
    let mut table = Table::new(&["size", "m", "estimate", "ci_lo", "ci_hi", "paper_rhs", "ratio"]);
    for pt in &report.points {
        table.push(vec![
            pt.size.to_string(),
            pt.m.to_string(),
            fmt_f64(pt.estimate.estimate),
            fmt_f64(pt.estimate.ci_lo),
            fmt_f64(pt.estimate.ci_hi),
            fmt_f64(pt.paper_rhs),
            fmt_f64(pt.tested / pt.paper_rhs),
        ]);
    }
    Ok(Outcome {
        status: status_of(report.pass),
        params,
        table: Some(table),
        result: json!({"slope": report.slope, "predicted": report.predicted, "threshold": report.threshold,
            "pass": report.pass, "points": to_value(&report.points)?}),
    })
}

pub fn stochastic_norm(cfg: &RunConfig) -> Result<Outcome> {
    let seed = cfg.require_seed()?;
    let tuple = dyadic_tuple(cfg.tuple.as_deref().unwrap_or(&[2, 2, 2, 2]))?;
    let s = cfg.s.unwrap_or(0.1);
    let eps = cfg.eps.unwrap_or(0.01);
    let (_, b_prime) = cfg.b_pair(eps);
    let t_scale = cfg.t_scale.unwrap_or(0.5);
    let t_values = cfg.t_values.clone().unwrap_or_else(|| vec![1.0, 0.5, 0.25, 0.125]);
    let samples = cfg.samples.unwrap_or(1000);
    let params = json!({"tuple": tuple.label(), "s": s, "b_prime": b_prime, "t": t_scale, "t_values": t_values,
        "samples": samples, "seed": seed});
    let moment = stochastic_cubic_second_moment(&tuple, s, b_prime, t_scale, samples, seed)?;
    let closed: Vec<f64> = t_values.iter().map(|&t| stochastic_closed_form(&tuple, s, b_prime, t)).collect::<Result<_>>()?;
    let norms: Vec<f64> = closed.iter().map(|c| c.sqrt()).collect();
    let slope = loglog_slope(&t_values, &norms);
    let mut table = Table::new(&["t", "closed_form_second_moment", "closed_form_norm"]);
    for (t, c) in t_values.iter().zip(&closed) {
        table.push(vec![fmt_f64(*t), fmt_f64(*c), fmt_f64(c.sqrt())]);
    }
    let agree = moment.discrepancy_in_widths() <= 3.0;
    let slope_ok = (0.3..=0.7).contains(&slope);
    Ok(Outcome {
        status: status_of(agree && slope_ok),
        params,
        table: Some(table),
        result: json!({"moment": to_value(&moment)?, "discrepancy_in_widths": moment.discrepancy_in_widths(),
            "agree": agree, "t_slope": slope, "slope_ok": slope_ok}),
    })
}

pub fn resonant(cfg: &RunConfig) -> Result<Outcome> {
    let seed = cfg.require_seed()?;
    let name = cfg.case.clone().unwrap_or_else(|| "zzz".into());
    let case = ResonantCase::parse(&name).ok_or(Error::Invalid { field: "case", reason: format!("unknown {name}") })?;
    let radius = cfg.radius.unwrap_or(16);
    let s = cfg.s.unwrap_or(0.1);
    let eps = cfg.eps.unwrap_or(0.01);
    let t_values = cfg.t_values.clone().unwrap_or_else(|| vec![0.5, 0.25, 0.125]);
    let params = json!({"case": case.name(), "radius": radius, "s": s, "eps": eps, "t_values": t_values, "seed": seed});
    let z0 = sample_mu(radius, &GaussianEnsemble::new(seed, radius))?;
    let w_raw = FourierField::single_mode(radius, FreqIndex(1, 0), C64::new(1.0, 0.0));
    let mut table = Table::new(&["t", "norm"]);
    let mut norms = Vec::new();
    for &t in &t_values {
        let w0 = normalize_test_field(&w_raw, s, eps, t)?;
        let v = resonant_term_norms(case, &z0, &w0, s, eps, t)?;
        table.push(vec![fmt_f64(t), fmt_f64(v)]);
        norms.push(v);
    }
    let finite = norms.iter().all(|v| v.is_finite());
    let mut order: Vec<(f64, f64)> = t_values.iter().copied().zip(norms.iter().copied()).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    let increasing_in_t = order.windows(2).all(|w| w[1].1 >= w[0].1);
    let pass = finite && (case != ResonantCase::Zzz || increasing_in_t);
    Ok(Outcome { status: status_of(pass), params, table: Some(table), result: json!({"norms": norms, "monotone_in_t": increasing_in_t}) })
}

pub fn strichartz(cfg: &RunConfig) -> Result<Outcome> {
    let sizes = cfg.sweep.clone().unwrap_or_else(|| vec![4, 8, 16, 32]);
    let threshold = cfg.tolerance.unwrap_or(0.2);
    let params = json!({"sweep": sizes, "threshold": threshold});
    let ratios: Vec<f64> = sizes
        .iter()
        .map(|&n| {
            let f = FourierField::from_fn(n as usize, |_| C64::new(1.0, 0.0));
            strichartz_ratio(&f, n)
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["n", "ratio"]);
    for (n, r) in sizes.iter().zip(&ratios) {
        table.push(vec![n.to_string(), fmt_f64(*r)]);
    }
    let nondecreasing = ratios.windows(2).all(|w| w[1] >= w[0]);
    let slope = loglog_slope(&sizes.iter().map(|&n| n as f64).collect::<Vec<_>>(), &ratios);
    Ok(Outcome {
        status: status_of(nondecreasing && slope < threshold),
        params,
        table: Some(table),
        result: json!({"slope": slope, "nondecreasing": nondecreasing}),
    })
}

pub fn dual_bound(cfg: &RunConfig) -> Result<Outcome> {
    let seed = cfg.require_seed()?;
    let r = cfg.r.unwrap_or(2);
    if r == 0 || r > DUAL_MAX_RANK {
        return Err(Error::Invalid { field: "r", reason: format!("must be in 1..={DUAL_MAX_RANK}") });
    }
    let n = positive("n", cfg.n.unwrap_or(64))?;
    let a1 = cfg.a1.unwrap_or(2.0);
    let c = cfg.c_exp.unwrap_or(r as f64);
    let trials = positive("trials", cfg.trials.unwrap_or(10_000))?;
    let params = json!({"r": r, "n": n, "a1": a1, "c_exp": c, "trials": trials, "seed": seed});
    let rep = dual_vector_bound_check(r, n, a1, c, trials, seed)?;
    let mut table = Table::new(&["r", "n", "a1", "c_exp", "trials", "rejected", "max_norm", "max_ratio"]);
    table.push(vec![
        r.to_string(),
        n.to_string(),
        fmt_f64(a1),
        fmt_f64(c),
        trials.to_string(),
        rep.rejected.to_string(),
        fmt_f64(rep.max_norm),
        fmt_f64(rep.max_ratio),
    ]);
    Ok(Outcome { status: status_of(rep.max_ratio <= 1.0), params, table: Some(table), result: to_value(&rep)? })
}

/// Random fields with i.i.d. coefficients for the nonlinearity identity.
fn random_field(radius: usize, seed: u64) -> FourierField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    FourierField::from_fn(radius, |_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn check(name: &str, status: TestStatus, detail: Value) -> Value {
    json!({"check": name, "status": status, "detail": detail})
}

/// Every acceptance check at reduced scale, aggregated into one result.
pub fn report(cfg: &RunConfig) -> Result<Outcome> {
    let max_n = cfg.max_n.unwrap_or(4);
    let samples = positive("samples", cfg.samples.unwrap_or(200))?.max(100);
    let seed = cfg.seed.unwrap_or(1);
    let params = json!({"max_n": max_n, "samples": samples, "seed": seed});
    let sub = |extra: RunConfig| RunConfig { seed: Some(seed), samples: Some(samples), ..extra };
    let mut checks = Vec::new();

    let o = sample(&sub(RunConfig { n: Some(max_n), ..Default::default() }))?;
    checks.push(check("wick_mean_zero", o.status, o.result));

    let s1 = sigma(1).sigma_n;
    let s2 = sigma(2).sigma_n;
    let diff = sigma(8192).sigma_n - sigma(4096).sigma_n;
    let target = 2.0 * std::f64::consts::PI * std::f64::consts::LN_2;
    let ok = (s1 - 3.0).abs() <= 1e-12 && (s2 - 77.0 / 15.0).abs() <= 1e-12 && ((diff - target) / target).abs() <= 0.02;
    checks.push(check("sigma_asymptotics", status_of(ok), json!({"sigma_1": s1, "sigma_2": s2, "doubling_gap": diff})));

    let worst = (0..10u64)
        .map(|i| {
            let v = random_field(8, derive_seed(seed, i));
            let a = renorm_nonlinearity(&v);
            let b = renorm_nonlinearity_physical(&v);
            a.try_sub(&b).map(|d| d.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(check("nonlinearity_identity", status_of(worst <= 1e-10), json!({"max_abs_diff": worst})));

    let o = evolve_cmd(&sub(RunConfig { n: Some(max_n), ..Default::default() }))?;
    checks.push(check("conservation", o.status, o.result));

    let o = gauge_check(&sub(RunConfig { n: Some(max_n), samples: Some(2), ..Default::default() }))?;
    checks.push(check("gauge_equivalence", o.status, o.result));

    let o = invariance(&sub(RunConfig { n: Some(max_n), ..Default::default() }))?;
    checks.push(check("invariance", o.status, o.result));
    let o = invariance(&sub(RunConfig { n: Some(max_n), control: Some(true), ..Default::default() }))?;
    let detected = o.status == TestStatus::Pass;
    checks.push(check("invariance_control", status_of(detected), o.result));

    let o = count(&RunConfig { max_n: Some(max_n), ..Default::default() })?;
    checks.push(check("counting_bounds", o.status, o.result));

    let o = tensor_bounds(&RunConfig { max_n: Some(max_n.min(8)), ..Default::default() })?;
    checks.push(check("base_tensor_norms", o.status, o.result));

    let sweep: Vec<u32> = (1..).map(|k| 1u32 << k).take_while(|&k| k <= max_n.max(4)).collect();
    let o = rt_mc(&sub(RunConfig { sweep: Some(sweep), ..Default::default() }))?;
    checks.push(check("random_tensor_scaling", o.status, o.result));

    let o = stochastic_norm(&sub(RunConfig::default()))?;
    checks.push(check("stochastic_term", o.status, o.result));

    let o = strichartz(&RunConfig::default())?;
    checks.push(check("strichartz", o.status, o.result));

    let a = sample(&sub(RunConfig { n: Some(max_n), samples: Some(100), ..Default::default() }))?;
    let b = sample(&sub(RunConfig { n: Some(max_n), samples: Some(100), ..Default::default() }))?;
    let same = a.table.as_ref().map(|t| t.rows.clone()) == b.table.as_ref().map(|t| t.rows.clone());
    checks.push(check("determinism", status_of(same), json!({"identical": same})));

    let statuses: Vec<TestStatus> = checks.iter().map(|c| serde_json::from_value(c["status"].clone()).expect("status")).collect();
    let status = if statuses.contains(&TestStatus::Fail) {
        TestStatus::Fail
    } else if statuses.contains(&TestStatus::Inconclusive) {
        TestStatus::Inconclusive
    } else {
        TestStatus::Pass
    };
    Ok(Outcome { status, params, table: None, result: json!({"checks": checks}) })
}
