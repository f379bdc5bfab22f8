//! Aggregation of stored run records into comparison tables and a claim checklist.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rwinv::stats::loglog_slope;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{Command, GroupSpec};
use crate::record::{Payload, Row, RunRecord};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Pass,
    Fail,
    NoData,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::NoData => "n/a",
        }
    }

    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub claim: String,
    pub status: Status,
    pub detail: String,
    /// Config hashes of the records the verdict rests on.
    pub sources: Vec<String>,
}

/// `(n, radius)` points of one lamplighter series, keyed by lamp order and `ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusSeries {
    pub lamp_order: usize,
    pub epsilon: f64,
    pub points: Vec<(usize, f64)>,
    pub constancy: Vec<(usize, f64)>,
    /// Least-squares `c` in `r ≈ c√n`.
    pub c_fit: Option<f64>,
    /// `max c_i / min c_i` over the points.
    pub c_spread: Option<f64>,
    pub sources: Vec<String>,
}

fn rows<'a>(r: &'a RunRecord, metric: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
    r.payload.rows.iter().filter(move |row| row.metric == metric)
}

fn last_value(r: &RunRecord, metric: &str) -> Option<f64> {
    rows(r, metric).last().map(|row| row.value)
}

fn exponent(points: &[(usize, f64)]) -> Option<f64> {
    let distinct: std::collections::BTreeSet<usize> = points.iter().map(|p| p.0).collect();
    if distinct.len() < 2 || points.iter().any(|p| p.1 <= 0.0) {
        return None;
    }
    let x: Vec<f64> = points.iter().map(|p| p.0 as f64).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    loglog_slope(&x, &y).map(|f| f.slope)
}

fn radius_series(records: &[&RunRecord]) -> Vec<RadiusSeries> {
    let mut by_key: BTreeMap<(usize, String), RadiusSeries> = BTreeMap::new();
    for r in records.iter().filter(|r| r.config.command == Command::ExactLamplighter) {
        let q = r.config.usize("lamp-order");
        let eps = r.config.f64("epsilon");
        let s = by_key.entry((q, eps.to_string())).or_insert_with(|| RadiusSeries {
            lamp_order: q,
            epsilon: eps,
            points: vec![],
            constancy: vec![],
            c_fit: None,
            c_spread: None,
            sources: vec![],
        });
        let before = s.points.len() + s.constancy.len();
        s.points.extend(rows(r, "radius").filter_map(|row| row.n.map(|n| (n, row.value))));
        s.constancy.extend(rows(r, "constancy_radius").filter_map(|row| row.n.map(|n| (n, row.value))));
        if s.points.len() + s.constancy.len() > before {
            s.sources.push(r.config_hash.clone());
        }
    }
    let mut out: Vec<RadiusSeries> = by_key.into_values().filter(|s| !s.sources.is_empty()).collect();
    for s in &mut out {
        s.points.sort_by_key(|p| p.0);
        s.points.dedup_by_key(|p| p.0);
        s.constancy.sort_by_key(|p| p.0);
        s.constancy.dedup_by_key(|p| p.0);
        if !s.points.is_empty() {
            let num: f64 = s.points.iter().map(|&(n, r)| r * (n as f64).sqrt()).sum();
            let den: f64 = s.points.iter().map(|&(n, _)| n as f64).sum();
            s.c_fit = Some(num / den);
            let c: Vec<f64> = s.points.iter().map(|&(n, r)| r / (n as f64).sqrt()).collect();
            let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = c.iter().cloned().fold(0.0, f64::max);
            s.c_spread = (lo > 0.0).then(|| hi / lo);
        }
    }
    out
}

fn check(claim: &str, status: Status, detail: String, sources: Vec<String>) -> ClaimCheck {
    ClaimCheck { claim: claim.into(), status, detail, sources }
}

fn checklist(records: &[&RunRecord], series: &[RadiusSeries]) -> Vec<ClaimCheck> {
    let of = |c: Command| records.iter().filter(move |r| r.config.command == c);
    let mut out = Vec::new();

    let inv: Vec<&&RunRecord> = of(Command::ExactLamplighter).filter(|r| r.config.flag("check-invariance")).collect();
    out.push(if inv.is_empty() {
        check("lamp-only increments inside J leave exact probabilities unchanged", Status::NoData, String::new(), vec![])
    } else {
        let v: usize = inv.iter().map(|r| r.payload.violations).sum();
        check(
            "lamp-only increments inside J leave exact probabilities unchanged",
            Status::of(v == 0),
            format!("{} runs, {v} violations", inv.len()),
            inv.iter().map(|r| r.config_hash.clone()).collect(),
        )
    });

    for s in series.iter().filter(|s| s.points.len() >= 2) {
        let grows = s.points.last().unwrap().1 >= 2.0 * s.points[0].1 && s.points[0].1 > 0.0;
        let ok = s.c_spread.is_some_and(|x| x < 2.0) && grows;
        out.push(check(
            &format!("almost-invariance radius grows like c√n (Z≀Z/{}, ε={})", s.lamp_order, s.epsilon),
            Status::of(ok),
            format!("points {:?}, c {:?}, spread {:?}", s.points, s.c_fit, s.c_spread),
            s.sources.clone(),
        ));
        if let (Some(a), Some(b)) = (exponent(&s.constancy), exponent(&s.points)) {
            out.push(check(
                &format!("almost-constancy radius grows slower than almost-invariance radius (ε={})", s.epsilon),
                Status::of(b - a >= 0.1),
                format!("constancy exponent {a:.3}, invariance exponent {b:.3}"),
                s.sources.clone(),
            ));
        }
    }

    for (group, target) in [("lamplighter:2", 0.5), ("zwrz", 0.75), ("inner:1", 0.25)] {
        let metric = if group.starts_with("inner") { "inner_value_exponent" } else { "drift_exponent" };
        let rs: Vec<&&RunRecord> = of(Command::Drift).filter(|r| r.config.group().to_string() == group).collect();
        let values: Vec<f64> = rs.iter().filter_map(|r| last_value(r, metric)).collect();
        out.push(if values.is_empty() {
            check(&format!("drift exponent of {group} is {target}"), Status::NoData, String::new(), vec![])
        } else {
            check(
                &format!("drift exponent of {group} is {target}"),
                Status::of(values.iter().all(|v| (v - target).abs() <= 0.05)),
                format!("fitted {values:?}"),
                rs.iter().map(|r| r.config_hash.clone()).collect(),
            )
        });
    }

    let free: Vec<&&RunRecord> = of(Command::Free).collect();
    if free.is_empty() {
        out.push(check("cancellation depth approaches 1/v(k)", Status::NoData, String::new(), vec![]));
    } else {
        let worst = free
            .iter()
            .flat_map(|r| r.payload.rows.iter().filter(|row| row.metric.starts_with("depth_deviation:")))
            .map(|row| row.value.abs())
            .fold(0.0, f64::max);
        out.push(check(
            "cancellation depth approaches 1/v(k)",
            Status::of(worst <= 0.01),
            format!("largest deviation {worst:.3e}"),
            free.iter().map(|r| r.config_hash.clone()).collect(),
        ));
        let levy: Vec<(usize, f64)> = free
            .iter()
            .flat_map(|r| rows(r, "ratio_levy_distance").filter_map(|row| row.n.map(|n| (n, row.value))))
            .collect();
        if let Some(&(n, d)) = levy.iter().max_by_key(|p| p.0) {
            out.push(check(
                "ratio law approaches (2m−1)^{l−2K}",
                Status::of(d <= 0.05),
                format!("Lévy distance {d:.4} at n={n}"),
                free.iter().map(|r| r.config_hash.clone()).collect(),
            ));
        }
    }

    let wit: Vec<&&RunRecord> = of(Command::Invariance).filter(|r| r.config.group() == GroupSpec::Iterated(1)).collect();
    out.push(if wit.is_empty() {
        check("Z≀Z lamp-subtraction witness separates μ^n from its shift", Status::NoData, String::new(), vec![])
    } else {
        let pairs: Vec<(f64, f64)> = wit
            .iter()
            .filter_map(|r| Some((last_value(r, "event_mass")?, last_value(r, "translated_mass")?)))
            .collect();
        check(
            "Z≀Z lamp-subtraction witness separates μ^n from its shift",
            Status::of(pairs.iter().all(|&(e, t)| e >= 0.5 && t <= 0.1)),
            format!("(event, translated) {pairs:?}"),
            wit.iter().map(|r| r.config_hash.clone()).collect(),
        )
    });

    let cover: Vec<&&RunRecord> = of(Command::Cover).collect();
    let mut medians: Vec<(usize, f64)> = cover
        .iter()
        .flat_map(|r| rows(r, "cover_radius_median").filter_map(|row| row.n.map(|n| (n, row.value))))
        .collect();
    medians.sort_by_key(|p| p.0);
    medians.dedup_by_key(|p| p.0);
    out.push(if medians.len() < 2 {
        check("Z² cover radius median increases with n", Status::NoData, format!("{medians:?}"), vec![])
    } else {
        check(
            "Z² cover radius median increases with n",
            Status::of(medians.windows(2).all(|w| w[1].1 > w[0].1)),
            format!("{medians:?}"),
            cover.iter().map(|r| r.config_hash.clone()).collect(),
        )
    });
    out
}

/// Tables and checklist over every non-report record.
pub fn report(all: &[RunRecord]) -> Result<Payload, CliError> {
    let records: Vec<&RunRecord> = all.iter().filter(|r| r.config.command != Command::Report).collect();
    let mut out = Payload::default();
    if records.is_empty() {
        out.warnings.push("no stored runs".into());
    }
    let series = radius_series(&records);
    for s in &series {
        let tag = format!("q={},eps={}", s.lamp_order, s.epsilon);
        for &(n, r) in &s.points {
            out.rows.push(Row::new(format!("radius[{tag}]"), Some(n), r, "report"));
        }
        if let Some(c) = s.c_fit {
            out.rows.push(Row::new(format!("c_fit[{tag}]"), None, c, "report"));
        }
    }
    let drift: Vec<(String, f64)> = records
        .iter()
        .filter(|r| r.config.command == Command::Drift)
        .filter_map(|r| {
            let v = last_value(r, "drift_exponent").or_else(|| last_value(r, "inner_value_exponent"))?;
            Some((r.config.group().to_string(), v))
        })
        .collect();
    for (g, v) in &drift {
        out.rows.push(Row::new(format!("drift_exponent[{g}]"), None, *v, "report"));
    }
    let checks = checklist(&records, &series);
    for c in &checks {
        let v = match c.status {
            Status::Pass => 1.0,
            Status::Fail => 0.0,
            Status::NoData => continue,
        };
        out.rows.push(Row::new(format!("claim:{}", c.claim), None, v, "report"));
    }
    out.details = json!({
        "records": records.iter().map(|r| &r.config_hash).collect::<Vec<_>>(),
        "radius_series": series,
        "drift": drift,
        "checklist": checks,
    });
    Ok(out)
}

/// Plain-text rendering of a report payload.
pub fn render(p: &Payload) -> String {
    let mut s = String::new();
    let series: Vec<RadiusSeries> = serde_json::from_value(p.details["radius_series"].clone()).unwrap_or_default();
    let checks: Vec<ClaimCheck> = serde_json::from_value(p.details["checklist"].clone()).unwrap_or_default();
    let _ = writeln!(s, "radius of almost invariance");
    let _ = writeln!(s, "{:>6} {:>8} {:>8} {:>8} {:>10}", "q", "eps", "n", "radius", "r/sqrt(n)");
    for se in &series {
        for &(n, r) in &se.points {
            let _ = writeln!(s, "{:>6} {:>8} {:>8} {:>8} {:>10.4}", se.lamp_order, se.epsilon, n, r, r / (n as f64).sqrt());
        }
        if let Some(c) = se.c_fit {
            let _ = writeln!(s, "{:>6} {:>8} fitted c = {c:.4}, spread {:?}", se.lamp_order, se.epsilon, se.c_spread);
        }
    }
    let _ = writeln!(s, "\nclaims");
    for c in &checks {
        let _ = writeln!(s, "{:>5}  {}  {}", c.status.label(), c.claim, c.detail);
    }
    for w in &p.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}
