use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::mean_stderr;
use super::sim::{Bits, LampKind, LineWreathWalk};
use crate::error::{domain, Result};
use crate::group::{GroupDescriptor, GroupElement, WreathElement};
use crate::rng::stream_rng;

/// Constants of the lamp-subtraction witness on `Z ≀ Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessOptions {
    /// Search window exponent: sites `y` with `|y − x_n| < n^a`.
    pub a: f64,
    /// `C(n)`; `None` means `ln ln(n + e^e)`.
    pub c_n: Option<f64>,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions { a: 0.4, c_n: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub n: usize,
    pub a: f64,
    pub c_n: f64,
    /// Lamp shift `Δ = ⌊C(n) n^{1/4} / √ln n⌋`.
    pub delta: i64,
    /// Mean word length of the witness increments.
    pub witness_length: f64,
    /// `μ^{*n}(A_n)`.
    pub event_mass: f64,
    pub event_stderr: f64,
    /// Mass of the event after right multiplication by the witness.
    pub translated_mass: f64,
    pub translated_stderr: f64,
    /// `max(0, event − translated)`, a lower bound on the shifted total variation.
    pub tv_lower: f64,
    /// Witness of the first sample inside the event, in element syntax.
    pub example: Option<String>,
}

/// `ln P[f = v]` after `t` lazy lamp steps: `C(2t, t + v) / 4^t`.
fn ln_lamp_law(t: u32, v: i64) -> f64 {
    let t = t as i64;
    if v.abs() > t {
        return f64::NEG_INFINITY;
    }
    let k = |x: i64| ln_gamma(x as f64 + 1.0);
    k(2 * t) - k(t + v) - k(t - v) - 2.0 * t as f64 * std::f64::consts::LN_2
}

/// Lamp-subtraction witness for the switch-walk-switch walk on `Z ≀ Z`.
///
/// `t_y` counts the switches made at `y`. The event `A_n` is that some site `y`
/// with `|y − x_n| < n^a` has `t_y ≥ √n / C(n)`; among those sites the witness
/// picks the `y*` whose lamp, pushed a further `Δ` away from zero, is least
/// likely. Given the base trajectory the
/// lamps are independent with law `C(2t, t+v)/4^t`, so the translated mass is
/// `E[1_{A_n} · p_t(|v| + Δ) / p_t(|v|)]`.
pub fn anti_invariance_witness(desc: &GroupDescriptor, n: usize, samples: usize, seed: u64, opts: &WitnessOptions) -> Result<WitnessReport> {
    if *desc != GroupDescriptor::iterated_wreath_z(1) {
        return Err(domain("anti_invariance_witness is implemented for Z ≀ Z"));
    }
    let nf = n as f64;
    let c_n = opts.c_n.unwrap_or_else(|| (nf + std::f64::consts::E.powf(std::f64::consts::E)).ln().ln());
    let delta = if n < 2 { 0 } else { (c_n * nf.powf(0.25) / nf.ln().sqrt()).floor() as i64 };
    let window = nf.powf(opts.a);
    // with C(n) = 0 the witness is trivial and the event is just "some site is visited"
    let visits_needed = if c_n > 0.0 { nf.sqrt() / c_n } else { 1.0 };
    let per_sample: Vec<(f64, f64, f64, Option<GroupElement>)> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut bits = Bits::new(stream_rng(seed, k as u64));
            let mut walk = LineWreathWalk::new(LampKind::Integer, n);
            for _ in 0..n {
                walk.step(&mut bits);
            }
            // among well-visited sites near x_n, the one whose shifted lamp is least likely
            let mut best: Option<(f64, i64)> = None;
            for y in walk.lo..=walk.hi {
                let t = walk.switch_count(y);
                if t == 0 || (t as f64) < visits_needed || ((y - walk.pos).abs() as f64) >= window {
                    continue;
                }
                let v = walk.lamp(y).abs();
                let ln_ratio = ln_lamp_law(t, v + delta) - ln_lamp_law(t, v);
                if best.map_or(true, |(b, _)| ln_ratio < b) {
                    best = Some((ln_ratio, y));
                }
            }
            let Some((ln_ratio, y)) = best else {
                return (0.0, 0.0, 0.0, None);
            };
            let ratio = ln_ratio.exp();
            let sign = if walk.lamp(y) < 0 { -1 } else { 1 };
            let offset = y - walk.pos;
            let h = if delta == 0 {
                desc.identity()
            } else {
                GroupElement::Wreath(WreathElement::new(vec![0], [(vec![offset], GroupElement::z(sign * delta))], &GroupElement::z(0)))
            };
            let len = desc.word_length(&h).value as f64;
            (1.0, ratio, len, Some(h))
        })
        .collect();
    let (event_mass, event_stderr) = mean_stderr(per_sample.iter().map(|s| s.0));
    let (translated_mass, translated_stderr) = mean_stderr(per_sample.iter().map(|s| s.1));
    let hits = per_sample.iter().filter(|s| s.0 > 0.0).count();
    let witness_length = if hits == 0 { 0.0 } else { per_sample.iter().map(|s| s.2).sum::<f64>() / hits as f64 };
    Ok(WitnessReport {
        n,
        a: opts.a,
        c_n,
        delta,
        witness_length,
        event_mass,
        event_stderr,
        translated_mass,
        translated_stderr,
        tv_lower: (event_mass - translated_mass).max(0.0),
        example: per_sample.iter().find_map(|s| s.3.as_ref().map(|h| h.to_string())),
    })
}
