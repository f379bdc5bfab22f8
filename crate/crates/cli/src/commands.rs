//! One function per subcommand, each turning a [`RunConfig`] into a [`Payload`].

use std::fmt::Display;

use num_rational::BigRational;
use rwinv::estimators::{
    anti_invariance_witness, cover_radius_grid, drift_curve, inner_value_drift, nilpotent_check, z2f_invariance_bound,
    WitnessOptions,
};
use rwinv::free::{cancellation_probability, ln_cancellation_deviation, ratio_distribution, FreeWalkLaw};
use rwinv::group::{parse_element, FreeWord, GroupDescriptor, GroupElement};
use rwinv::lamplighter::{
    almost_constancy_profile, check_exact_invariance, exact_distribution, exact_tv_shift, radius_profile,
    InvarianceGate, RadiusOptions,
};
use rwinv::walk::{RangeOptions, StepLawZ};
use rwinv::{Weight, WeightMode};
use serde_json::{json, Value};

use crate::config::{Command, GroupSpec, RunConfig};
use crate::record::{Payload, Row};
use crate::store::Store;
use crate::{report, CliError};

/// Violations kept per increment in the JSON details.
const MAX_LISTED_VIOLATIONS: usize = 20;

pub fn run(cfg: &RunConfig, store: &Store) -> Result<Payload, CliError> {
    match cfg.command {
        Command::ExactLamplighter => match cfg.mode() {
            WeightMode::Rational => exact_lamplighter::<BigRational>(cfg),
            WeightMode::Float => exact_lamplighter::<f64>(cfg),
        },
        Command::Free => match cfg.mode() {
            WeightMode::Rational => free::<BigRational>(cfg),
            WeightMode::Float => free::<f64>(cfg),
        },
        Command::Drift => drift(cfg),
        Command::Cover => cover(cfg),
        Command::Invariance => invariance(cfg),
        Command::Report => report::report(&store.load_all()?),
    }
}

fn elements(desc: &GroupDescriptor, list: &[String]) -> Result<Vec<GroupElement>, CliError> {
    list.iter().map(|s| Ok(parse_element(desc, s)?)).collect()
}

fn exact_lamplighter<W: Weight + Display>(cfg: &RunConfig) -> Result<Payload, CliError> {
    let q = cfg.usize("lamp-order");
    if q < 2 {
        return Err(CliError::Usage("lamp-order must be at least 2".into()));
    }
    let mode = W::MODE.as_str();
    let desc = GroupDescriptor::lamplighter(q);
    let increments = elements(&desc, &cfg.increments())?;
    let opts = RangeOptions {
        rational_cap: cfg.usize("rational-cap"),
        float_cap: cfg.usize("float-cap"),
        ..RangeOptions::default()
    };
    let gate = match cfg.get("gate") {
        Some("interior") => InvarianceGate::Interior,
        _ => InvarianceGate::Literal,
    };
    let epsilon = cfg.f64("epsilon");
    let mut out = Payload::default();
    let mut runs = Vec::new();
    for n in cfg.grid() {
        let cd = exact_distribution::<W>(&GroupDescriptor::cyclic(q), &StepLawZ::lazy(), n, &opts)?;
        let mut d = serde_json::Map::new();
        let p_e = cd.point_probability(&desc.identity())?;
        out.rows.push(Row::new("identity_probability", Some(n), p_e.to_f64(), mode));
        out.rows.push(Row::new("total_mass", Some(n), cd.total_mass().to_f64(), mode));
        d.insert("n".into(), json!(n));
        d.insert("identity_probability".into(), json!(p_e.to_string()));
        d.insert("error_bound".into(), json!(cd.error_bound()));
        if cfg.flag("entropy") {
            out.rows.push(Row::new("entropy", Some(n), cd.entropy(), mode));
        }
        if cfg.flag("tv-shift") {
            let mut tv = serde_json::Map::new();
            for g in &increments {
                let v = exact_tv_shift(&cd, g)?;
                out.rows.push(Row::new(format!("tv_shift:{g}"), Some(n), v.to_f64(), mode));
                tv.insert(g.to_string(), json!(v.to_string()));
            }
            d.insert("tv_shift".into(), Value::Object(tv));
        }
        if cfg.flag("check-invariance") {
            let mut reports = Vec::new();
            for g in &increments {
                let mut r = check_exact_invariance(&cd, g, gate)?;
                out.violations += r.violations.len();
                out.rows.push(Row::new(format!("invariance_checked:{g}"), Some(n), r.checked as f64, mode));
                out.rows.push(Row::new(format!("invariance_violations:{g}"), Some(n), r.violations.len() as f64, mode));
                r.violations.truncate(MAX_LISTED_VIOLATIONS);
                reports.push(r);
            }
            d.insert("invariance".into(), json!(reports));
        }
        if cfg.flag("radius-profile") {
            if !(epsilon > 0.0 && epsilon < 1.0) {
                return Err(CliError::Usage("epsilon must lie in (0, 1)".into()));
            }
            let opts = RadiusOptions { epsilon, samples: cfg.usize("samples"), seed: cfg.u64("seed"), max_radius: None };
            let p = radius_profile(&cd, &opts);
            out.rows.push(Row::new("radius", Some(n), p.radius as f64, mode));
            d.insert("radius_profile".into(), json!(p));
        }
        if cfg.flag("constancy-profile") {
            let p = almost_constancy_profile(&cd, epsilon);
            out.rows.push(Row::new("constancy_radius", Some(n), p.radius as f64, mode));
            d.insert("constancy_profile".into(), json!(p));
        }
        runs.push(Value::Object(d));
    }
    out.details = json!({ "lamp_order": q, "runs": runs });
    Ok(out)
}

fn free<W: Weight + Display>(cfg: &RunConfig) -> Result<Payload, CliError> {
    let m = cfg.usize("rank");
    let mode = W::MODE.as_str();
    let h = FreeWord::from_letters(cfg.word()).ok_or_else(|| CliError::Usage("word must be freely reduced".into()))?;
    GroupDescriptor::free(m).check(&GroupElement::Free(h.clone()))?;
    let mut out = Payload::default();
    let mut runs = Vec::new();
    for n in cfg.grid() {
        let law = FreeWalkLaw::<W>::new(m, n)?;
        let p_e = law.point(0);
        out.rows.push(Row::new("identity_probability", Some(n), p_e.to_f64(), mode));
        let mut depth = Vec::new();
        for k in 0..=h.len() {
            let p = law.depth_at_least(k);
            let dev = law.depth_deviation(k);
            out.rows.push(Row::new(format!("depth_at_least:{k}"), Some(n), p.to_f64(), mode));
            out.rows.push(Row::new(format!("depth_deviation:{k}"), Some(n), dev.to_f64(), mode));
            let ln_dev = ln_cancellation_deviation(m, n, k)?;
            if ln_dev.is_finite() {
                out.rows.push(Row::new(format!("ln_depth_deviation:{k}"), Some(n), ln_dev, "float"));
            }
            let strict = if k < h.len() { Some(cancellation_probability::<W>(m, n, &h, k)?) } else { None };
            if let Some(s) = &strict {
                out.rows.push(Row::new(format!("cancellation:{k}"), Some(n), s.to_f64(), mode));
            }
            depth.push(json!({
                "k": k,
                "depth_at_least": p.to_string(),
                "deviation": dev.to_string(),
                "strict": strict.map(|s| s.to_string()),
            }));
        }
        let mut run = json!({ "n": n, "identity_probability": p_e.to_string(), "depth": depth });
        if cfg.flag("ratio") {
            let ratio = ratio_distribution::<W>(m, n, &h)?;
            let levy = ratio.levy_to_limit();
            out.rows.push(Row::new("ratio_levy_distance", Some(n), levy, "float"));
            run["ratio"] = json!({
                "denominator_time": ratio.denominator_time,
                "levy_distance": levy,
                "undefined_mass": ratio.undefined_mass.to_f64(),
                "atoms": ratio.atoms.len(),
            });
        }
        runs.push(run);
    }
    out.details = json!({ "rank": m, "word": h.to_string(), "runs": runs });
    Ok(out)
}

fn exponent_rows(out: &mut Payload, metric: &str, fit: Option<rwinv::estimators::ExponentFit>) {
    if let Some(f) = fit {
        out.rows.push(Row::new(metric, None, f.exponent(), "mc").with_stderr(f.fit.slope_stderr));
        if f.flagged {
            out.warnings.push(format!("{metric}: log-log fit has R² {:.4} < 0.99", f.fit.r_squared));
        }
    }
}

fn drift(cfg: &RunConfig) -> Result<Payload, CliError> {
    let grid = cfg.grid();
    let (samples, seed) = (cfg.usize("samples"), cfg.u64("seed"));
    let mut out = Payload::default();
    match cfg.group() {
        GroupSpec::Inner(j) => {
            let c = inner_value_drift(j, &grid, samples, seed)?;
            for i in 0..c.grid.len() {
                let n = Some(c.grid[i]);
                out.rows.push(Row::new("inner_value", n, c.mean[i], "mc").with_stderr(c.stderr[i]));
                out.rows.push(Row::new("origin_visits", n, c.visits_mean[i], "mc").with_stderr(c.visits_stderr[i]));
            }
            exponent_rows(&mut out, "inner_value_exponent", c.exponent);
            exponent_rows(&mut out, "origin_visits_exponent", c.visits_exponent);
            out.details = json!(c);
        }
        g => {
            let c = drift_curve(&g.descriptor(), &grid, samples, seed)?;
            for i in 0..c.grid.len() {
                out.rows.push(Row::new("drift", Some(c.grid[i]), c.mean[i], "mc").with_stderr(c.stderr[i]));
            }
            exponent_rows(&mut out, "drift_exponent", c.exponent);
            if c.upper_bound_metric {
                out.warnings.push("lengths are an upper-bound surrogate, not the word metric".into());
            }
            out.details = json!(c);
        }
    }
    Ok(out)
}

fn z2f_rows(out: &mut Payload, q: usize, n: usize, gs: &[GroupElement], samples: usize, seed: u64) -> Result<Vec<Value>, CliError> {
    let mut details = Vec::new();
    for g in gs {
        let b = z2f_invariance_bound(q, n, g, samples, seed)?;
        if let Some(u) = b.upper {
            out.rows.push(Row::new(format!("tv_upper:{g}"), Some(n), u, "mc").with_stderr(b.upper_stderr.unwrap_or(0.0)));
        }
        if let Some(l) = b.lower {
            out.rows.push(Row::new(format!("tv_lower:{g}"), Some(n), l, "float"));
        }
        details.push(json!(b));
    }
    Ok(details)
}

fn cover(cfg: &RunConfig) -> Result<Payload, CliError> {
    let grid = cfg.grid();
    let (samples, seed) = (cfg.usize("samples"), cfg.u64("seed"));
    let q = cfg.usize("lamp-order");
    let increments = elements(&GroupDescriptor::lamplighter_z2(q), &cfg.increments())?;
    let mut out = Payload::default();
    let samples_out = cover_radius_grid(&grid, samples, seed)?;
    let mut bounds = Vec::new();
    for s in &samples_out {
        let n = Some(s.n);
        out.rows.push(Row::new("cover_radius_q10", n, s.quantiles.0, "mc"));
        out.rows.push(Row::new("cover_radius_median", n, s.median(), "mc"));
        out.rows.push(Row::new("cover_radius_q90", n, s.quantiles.2, "mc"));
        let mean = s.max_displacement.iter().sum::<u64>() as f64 / s.max_displacement.len().max(1) as f64;
        out.rows.push(Row::new("max_displacement_mean", n, mean, "mc"));
        bounds.extend(z2f_rows(&mut out, q, s.n, &increments, samples, seed)?);
    }
    let quantiles: Vec<_> = samples_out.iter().map(|s| json!({ "n": s.n, "quantiles": s.quantiles })).collect();
    out.details = json!({ "cover": quantiles, "bounds": bounds });
    Ok(out)
}

fn invariance(cfg: &RunConfig) -> Result<Payload, CliError> {
    let grid = cfg.grid();
    let (samples, seed) = (cfg.usize("samples"), cfg.u64("seed"));
    let mut out = Payload::default();
    let mut details = Vec::new();
    match cfg.group() {
        GroupSpec::Iterated(1) => {
            let opts = WitnessOptions { a: cfg.f64("a"), c_n: cfg.opt_f64("c-n") };
            for n in grid {
                let r = anti_invariance_witness(&GroupSpec::Iterated(1).descriptor(), n, samples, seed, &opts)?;
                out.rows.push(Row::new("event_mass", Some(n), r.event_mass, "mc").with_stderr(r.event_stderr));
                out.rows.push(Row::new("translated_mass", Some(n), r.translated_mass, "mc").with_stderr(r.translated_stderr));
                out.rows.push(Row::new("tv_lower", Some(n), r.tv_lower, "mc"));
                out.rows.push(Row::new("witness_length", Some(n), r.witness_length, "mc"));
                details.push(json!(r));
            }
        }
        GroupSpec::LamplighterZ2(q) => {
            let desc = GroupDescriptor::lamplighter_z2(q);
            let mut gs = elements(&desc, &cfg.increments())?;
            if gs.is_empty() {
                gs = elements(&desc, &["(0,0)[(0,0):#1]".to_string(), "(1,0)[]".to_string()])?;
            }
            for n in grid {
                details.extend(z2f_rows(&mut out, q, n, &gs, samples, seed)?);
            }
        }
        GroupSpec::Lattice(d) => {
            let (eps, k) = (cfg.f64("epsilon"), cfg.f64("k"));
            for n in grid {
                let r = nilpotent_check(d, n, eps, k)?;
                out.rows.push(Row::new("max_ratio_deviation", Some(n), r.max_deviation, "float"));
                details.push(json!(r));
            }
        }
        other => {
            return Err(CliError::Usage(format!(
                "invariance supports zwrz, z2f:q and z:d, not {other}"
            )))
        }
    }
    out.details = Value::Array(details);
    Ok(out)
}
